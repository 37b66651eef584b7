#include "mdperm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace mdperm {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    int n = 0;
    if (const char* env = std::getenv("MDPERM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) n = static_cast<int>(v);
    }
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n > 0 ? n : 1;
}

namespace detail {

void run_chunks(std::uint64_t chunk_count, int threads, void* ctx,
                void (*body)(void*, std::uint64_t)) {
    const std::uint64_t cap = static_cast<std::uint64_t>(threads > 0 ? threads : 1);
    const int workers = static_cast<int>(cap < chunk_count ? cap : chunk_count);
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunk_count; ++c) body(ctx, c);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= chunk_count) break;
                try {
                    body(ctx, c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

}  // namespace mdperm
