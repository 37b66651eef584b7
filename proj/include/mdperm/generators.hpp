#pragma once

#include "mdperm/multi_matrix.hpp"
#include "mdperm/permanent.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mdperm {

/// Seeded portable random stream.
///
/// The raw source is the 64-bit Mersenne Twister exactly as specified in
/// the standard (its output sequence is implementation-independent); every
/// derived draw (bounded ints, [0,1) reals, shuffles) is implemented here
/// rather than through distribution classes, whose results may differ
/// between standard libraries. Same seed, same matrix, everywhere.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform integer in [0, bound), bound >= 1; unbiased via rejection.
    std::uint64_t below(std::uint64_t bound);

    int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    /// Uniform real in [0,1) from the top 53 bits of one draw.
    double uniform01();

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }

private:
    std::mt19937_64 eng_;
};

/// Stable per-stream seed derivation (splitmix64 finalizer), so instance i
/// of a run is reproducible in isolation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

enum class GenKind {
    uniform,               // each cell is 1 with probability p
    fixed_hyperplane_sums, // axis-0 hyperplane i gets exactly r_i ones
    block_diagonal,        // all-ones blocks on the main diagonal of every axis
    one_per_line,          // every line of every direction sums to exactly 1
};

const char* gen_kind_name(GenKind kind);  // uniform / fixed-sums / block-diag / one-per-line
GenKind gen_kind_from_name(const std::string& name);

/// Everything needed to regenerate a matrix. Serializes to one line, e.g.
///   uniform d=3 n=4 p=0.5 seed=42
///   fixed-sums d=3 n=4 r=8,8,8,8 seed=7
///   block-diag d=3 n=4 blocks=2,2 seed=1
///   one-per-line d=3 n=3 seed=5
struct GenSpec {
    GenKind kind = GenKind::uniform;
    int d = 3;
    int n = 3;
    double p = 0.5;               // uniform only
    std::vector<long long> r;     // fixed-sums only; must have n values
    std::vector<int> blocks;      // block-diag only
    bool strict = false;          // fixed-sums: reject infeasible r_i instead of clamping
    std::uint64_t seed = 0;

    std::string to_text() const;
    static GenSpec from_text(const std::string& line);
};

MultiMatrix generate(const GenSpec& spec);

/// One sampled matrix with every line summing to 1, its exact permanent,
/// and the ratio against the reference scale n!^(d-2) e^(-n). The scale is
/// asymptotic, so the ratio is reported, never asserted; matrices in this
/// class can have permanent 0 (ratio 0).
struct OmegaRatioRow {
    std::uint64_t seed = 0;  // derived seed; regenerate via the spec line
    std::string spec;
    std::string per;         // exact integer
    double log_per = 0.0;    // -infinity when per = 0
    double ratio = 0.0;      // per / (n!^(d-2) e^(-n))
};

struct OmegaRatioReport {
    int d = 0;
    int n = 0;
    std::uint64_t base_seed = 0;
    double log_reference = 0.0;  // (d-2) log n! - n
    std::vector<OmegaRatioRow> rows;
};

OmegaRatioReport omega_ratio_report(int samples, int d, int n, std::uint64_t seed,
                                    const PermanentOptions& opts = {});

}  // namespace mdperm
