#pragma once

#include "mdperm/multi_matrix.hpp"
#include "mdperm/permanent.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mdperm {

enum class BoundKind {
    trivial_product,
    bregman_minc,
    minc_ceil,
    total_sum,
    covering,
    conjecture_minc,
    plane_reduction,
};

const char* bound_kind_name(BoundKind kind);

/// An upper bound on log(per A).
///
/// Bounds live in natural-log space: -infinity means the bound is 0,
/// +infinity means "no information" (inapplicable, or an internal budget
/// tripped). conjecture_minc is the only bound with proven = false; it is
/// reported but never asserted.
struct LogBound {
    BoundKind kind;
    double log_value = 0.0;
    bool proven = true;
    bool applicable = true;
    std::string note;  // axis / direction, or the reason when inapplicable
};

/// log F(r) where F(r) = ceil(r)!^(1/ceil(r)) and F(0) = 0 (log -> -inf):
/// a zero-sum line or hyperplane forces per = 0. Integral sums arriving as
/// doubles are snapped to the nearest integer before the ceiling so that
/// accumulated round-off cannot bump them to the next factor.
double minc_factor_log(double r);
double minc_factor_log(std::uint64_t r);

/// Product of the hyperplane sums along `axis`.
LogBound bound_trivial_product(const MultiMatrix& a, int axis);

/// Product of r_i!^(1/r_i) over the row one-counts; d = 2, 0/1 entries.
LogBound bound_bregman_minc(const MultiMatrix& a);

/// Ceiling variant for real entries in [0,1]; d = 2.
LogBound bound_minc_ceil(const MultiMatrix& a);

/// Bound from the total entry sum alone, with gamma = total/n; d = 2:
/// n*log(gamma+1) - n + (n/(gamma+1))*(1 + log(gamma+1)/2).
LogBound bound_total_sum(const MultiMatrix& a);

/// Nested plane-covering counts for one labeling of the axes.
///
/// After relabeling so that axis_order[0] is the hyperplane axis and the
/// remaining axes are fixed one at a time in order: s[i][k-1] (k = d-1..1)
/// is the largest number of nonempty child (k-1)-planes over all k-planes
/// of the nested family inside hyperplane i; at k = 1 that is the largest
/// number of ones in one of its lines. Axis-aligned nesting makes this
/// exact counting, not set cover.
struct CoveringNumbers {
    std::vector<int> axis_order;
    std::vector<std::vector<int>> s;  // s[i][k-1], k in 1..d-1
    double log_value = 0.0;           // sum of minc factors over the table
};

CoveringNumbers covering_numbers(const MultiMatrix& a, const std::vector<int>& axis_order);

/// Product of s_{i,k}!^(1/s_{i,k}) over the covering table; 0/1 entries,
/// d >= 2. Identity axis order by default; the minimize flag searches all
/// d! orders (valid for each labeling, so the minimum stands; guarded to
/// d <= 6).
LogBound bound_covering(const MultiMatrix& a, bool minimize_over_axis_orders = false);

/// The (d-1)-dimensional matrix B with b_beta = F(line sum), lines varying
/// along line_axis; 0/1 entries, d >= 3. B's entries may exceed 1.
MultiMatrix reduce_to_B(const MultiMatrix& a, int line_axis);

/// log(per B) for the reduction above, evaluated exactly by the permanent
/// module. An evaluation budget overrun yields +infinity with a note.
LogBound bound_plane_reduction(const MultiMatrix& a, int line_axis,
                               const PermanentOptions& opts = {});

/// Candidate bound n!^(d-2) * prod_i F(r_i / n^(d-2)) over the hyperplane
/// one-counts r_i along `axis`; 0/1 entries. proven = false: the value is
/// reported and fuzz-tested, never asserted. The ceiling is taken on the
/// exact rational r_i / n^(d-2).
LogBound bound_conjecture(const MultiMatrix& a, int axis);

/// Every bound for this matrix in a stable display order: per-axis rows
/// for trivial_product / conjecture_minc / plane_reduction, single rows
/// for the rest; inapplicable kinds collapse to one row carrying the
/// reason.
std::vector<LogBound> all_bounds(const MultiMatrix& a, bool minimize_axis_orders = false,
                                 const PermanentOptions& opts = {});

}  // namespace mdperm
