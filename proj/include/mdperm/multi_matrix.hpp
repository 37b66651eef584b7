#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdperm {

/// Index into a d-dimensional matrix: d coordinates, each in [0, n-1].
/// All indexing in this library is 0-based.
using MultiIndex = std::vector<int>;

/// A k-dimensional axis-aligned plane: the cells obtained by fixing
/// d-k axes at given values and letting the remaining k axes vary.
/// fixed_axes is sorted ascending; fixed_values is aligned with it.
struct PlaneSpec {
    std::vector<int> fixed_axes;
    std::vector<int> fixed_values;

    int fixed_count() const { return static_cast<int>(fixed_axes.size()); }
};

/// Dense d-dimensional matrix of order n (each axis has extent n).
///
/// Entries are reals in [0,1], stored row-major with the last axis varying
/// fastest. A matrix whose entries are all exactly 0 or 1 carries the
/// zero_one flag; the exact algorithms use it to pick integer arithmetic.
/// Instances are immutable after construction and safe to share across
/// threads.
class MultiMatrix {
public:
    /// Checked constructor: entries.size() must equal n^d and every entry
    /// must lie in [0,1]. The zero_one flag is auto-detected.
    static MultiMatrix from_entries(int dim, int order, std::vector<double> entries);

    /// Constructor for derived matrices whose entries may exceed 1
    /// (e.g. matrices of factorial-root factors). Entries must still be
    /// finite and nonnegative.
    static MultiMatrix from_entries_unchecked(int dim, int order, std::vector<double> entries);

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return entries_.size(); }
    bool zero_one() const { return zero_one_; }
    const std::vector<double>& entries() const { return entries_; }

    double operator[](std::size_t flat) const { return entries_[flat]; }

    /// Bounds-checked access by multi-index.
    double at(const MultiIndex& idx) const;

    /// Row-major flat offset of a multi-index (unchecked).
    std::size_t flatten(const MultiIndex& idx) const;

    /// Stride of one step along an axis (last axis has stride 1).
    std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

    /// Sum of all entries.
    double total_sum() const;

    /// The order-(n-1) matrix left after deleting every cell that shares a
    /// coordinate value with alpha on any axis. Requires n >= 2.
    MultiMatrix minor_at(const MultiIndex& alpha) const;

    /// Relabel axes: result(i_0,...,i_{d-1}) = (*this) at the index whose
    /// coordinate on axis axis_perm[j] is i_j. Entry multiset is preserved.
    MultiMatrix permute_axes(const std::vector<int>& axis_perm) const;

    /// Reorder the hyperplanes of one axis: new index v on that axis reads
    /// old index index_perm[v]. Leaves the permanent unchanged.
    MultiMatrix relabel_axis(int axis, const std::vector<int>& index_perm) const;

private:
    MultiMatrix(int dim, int order, std::vector<double> entries, bool zero_one);

    int dim_;
    int order_;
    bool zero_one_;
    std::vector<double> entries_;
    std::vector<std::size_t> strides_;
};

/// Sum of the n^k entries of a plane. Exact (an integral double) when the
/// zero_one flag is set.
double plane_sum(const MultiMatrix& a, const PlaneSpec& p);

/// plane_sum rounded to an integer count; only meaningful on zero_one
/// matrices (sums of 0/1 doubles are exact well past any feasible n^d).
long long plane_ones(const MultiMatrix& a, const PlaneSpec& p);

/// Sum of entries in hyperplane `index` of `axis`.
double hyperplane_sum(const MultiMatrix& a, int axis, int index);

/// All n^(d-k) planes of dimension k whose fixed axes are `direction`,
/// in lexicographic order of their fixed values. `direction` must contain
/// exactly d-k distinct axes.
std::vector<PlaneSpec> enumerate_planes(const MultiMatrix& a, int k,
                                        const std::vector<int>& direction);

/// Throws std::invalid_argument unless p names valid distinct axes of a
/// with in-range fixed values.
void validate_plane(const MultiMatrix& a, const PlaneSpec& p);

}  // namespace mdperm
