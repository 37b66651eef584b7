#pragma once

#include <cstdint>
#include <vector>

namespace mdperm {

/// Number of worker threads to use. `requested` wins when positive;
/// otherwise the MDPERM_THREADS environment variable (0 = auto), falling
/// back to the hardware concurrency.
int resolve_threads(int requested = 0);

/// Compensated (Kahan) accumulator for deterministic floating-point sums.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

namespace detail {
void run_chunks(std::uint64_t chunk_count, int threads, void* ctx,
                void (*body)(void*, std::uint64_t));
}

/// Deterministic chunked parallel reduction over [0, count).
///
/// The range is split into a fixed number of chunks independent of the
/// thread count, `body(begin, end)` produces one partial per chunk, and the
/// partials come back ordered by chunk index. Reducing them in that order
/// therefore yields the same result no matter how many threads ran.
template <class Partial, class Body>
std::vector<Partial> chunked_partials(std::uint64_t count, int threads, Body body,
                                      std::uint64_t max_chunks = 256) {
    if (count == 0) return {};
    const std::uint64_t chunks = count < max_chunks ? count : max_chunks;
    std::vector<Partial> partials(chunks);

    struct Ctx {
        std::uint64_t count, chunks;
        std::vector<Partial>* out;
        Body* body;
    } ctx{count, chunks, &partials, &body};

    detail::run_chunks(
        chunks, threads, &ctx, [](void* p, std::uint64_t c) {
            auto& x = *static_cast<Ctx*>(p);
            const std::uint64_t b = c * x.count / x.chunks;
            const std::uint64_t e = (c + 1) * x.count / x.chunks;
            (*x.out)[c] = (*x.body)(b, e);
        });
    return partials;
}

}  // namespace mdperm
