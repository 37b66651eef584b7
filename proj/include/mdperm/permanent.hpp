#pragma once

#include "mdperm/exact_value.hpp"
#include "mdperm/multi_matrix.hpp"

#include <cstdint>
#include <stdexcept>

namespace mdperm {

/// Thrown when a computation would exceed its configured work budget.
/// The permanent is #P-hard; callers get a predictable failure instead of
/// an unbounded run.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PermanentOptions {
    /// Cap on enumerated terms / visited expansion cells per call.
    std::uint64_t term_budget = 100'000'000;
    /// Order limit for the 2D inclusion-exclusion kernel.
    int ryser_max_order = 20;
    /// Worker threads; 0 defers to MDPERM_THREADS / hardware.
    int threads = 0;
};

/// Reference oracle: sums the diagonal products over all (d-1)-tuples of
/// permutations. Cost (n!)^(d-1) * n; refuses when (n!)^(d-1) exceeds the
/// term budget. Integer-exact on zero_one matrices.
ExactValue permanent_naive(const MultiMatrix& a, const PermanentOptions& opts = {});

/// Expansion along the last hyperplane of axis 0, recursing on minors with
/// zero-entry pruning. Budgeted by visited expansion cells.
ExactValue permanent_laplace(const MultiMatrix& a, const PermanentOptions& opts = {});

/// Classical 2D inclusion-exclusion kernel with Gray-code column updates.
/// Requires d = 2 and order <= opts.ryser_max_order.
ExactValue permanent_ryser_2d(const MultiMatrix& a, const PermanentOptions& opts = {});

/// Splits the permanent into a sum over (d-k-1)-tuples of permutations of
/// permanents of (k+1)-dimensional matrices assembled from the k-planes
/// whose last k axes vary. Requires 1 <= k <= d-2. With k = 1 each piece
/// is 2-dimensional and goes through the inclusion-exclusion kernel.
ExactValue permanent_decompose(const MultiMatrix& a, int k = 1,
                               const PermanentOptions& opts = {});

/// n! for n <= 20; throws std::overflow_error above that.
std::uint64_t factorial_u64(int n);

/// log(n!) via lgamma.
double log_factorial(int n);

/// Permutation of {0..n-1} with the given rank in lexicographic order.
std::vector<int> unrank_permutation(std::uint64_t rank, int n);

}  // namespace mdperm
