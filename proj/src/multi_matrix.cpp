#include "mdperm/multi_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace mdperm {

namespace {

std::size_t checked_pow(int order, int dim) {
    std::size_t v = 1;
    for (int i = 0; i < dim; ++i) {
        if (v > (static_cast<std::size_t>(1) << 40) / static_cast<std::size_t>(order))
            throw std::invalid_argument("matrix too large: n^d exceeds the storage limit");
        v *= static_cast<std::size_t>(order);
    }
    return v;
}

}  // namespace

MultiMatrix::MultiMatrix(int dim, int order, std::vector<double> entries, bool zero_one)
    : dim_(dim), order_(order), zero_one_(zero_one), entries_(std::move(entries)),
      strides_(static_cast<std::size_t>(dim)) {
    std::size_t s = 1;
    for (int axis = dim - 1; axis >= 0; --axis) {
        strides_[static_cast<std::size_t>(axis)] = s;
        s *= static_cast<std::size_t>(order);
    }
}

MultiMatrix MultiMatrix::from_entries(int dim, int order, std::vector<double> entries) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    const std::size_t expect = checked_pow(order, dim);
    if (entries.size() != expect)
        throw std::invalid_argument("entry count mismatch: expected " + std::to_string(expect) +
                                    " entries, got " + std::to_string(entries.size()));
    bool zero_one = true;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double e = entries[i];
        if (!(e >= 0.0 && e <= 1.0))
            throw std::invalid_argument("entry " + std::to_string(e) + " at offset " +
                                        std::to_string(i) +
                                        " out of range: entries must lie in [0,1]");
        if (e != 0.0 && e != 1.0) zero_one = false;
    }
    return MultiMatrix(dim, order, std::move(entries), zero_one);
}

MultiMatrix MultiMatrix::from_entries_unchecked(int dim, int order, std::vector<double> entries) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    const std::size_t expect = checked_pow(order, dim);
    if (entries.size() != expect)
        throw std::invalid_argument("entry count mismatch: expected " + std::to_string(expect) +
                                    " entries, got " + std::to_string(entries.size()));
    bool zero_one = true;
    for (const double e : entries) {
        if (!(e >= 0.0) || !std::isfinite(e))
            throw std::invalid_argument("entries must be finite and nonnegative");
        if (e != 0.0 && e != 1.0) zero_one = false;
    }
    return MultiMatrix(dim, order, std::move(entries), zero_one);
}

double MultiMatrix::at(const MultiIndex& idx) const {
    if (static_cast<int>(idx.size()) != dim_)
        throw std::invalid_argument("index has wrong number of coordinates");
    for (const int c : idx)
        if (c < 0 || c >= order_) throw std::out_of_range("index coordinate out of range");
    return entries_[flatten(idx)];
}

std::size_t MultiMatrix::flatten(const MultiIndex& idx) const {
    std::size_t off = 0;
    for (int axis = 0; axis < dim_; ++axis)
        off += static_cast<std::size_t>(idx[static_cast<std::size_t>(axis)]) *
               strides_[static_cast<std::size_t>(axis)];
    return off;
}

double MultiMatrix::total_sum() const {
    double s = 0.0, c = 0.0;
    for (const double e : entries_) {  // Kahan
        const double y = e - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

MultiMatrix MultiMatrix::minor_at(const MultiIndex& alpha) const {
    if (order_ < 2) throw std::invalid_argument("minor undefined for order 1 (result would be order 0)");
    if (static_cast<int>(alpha.size()) != dim_)
        throw std::invalid_argument("index has wrong number of coordinates");
    for (const int c : alpha)
        if (c < 0 || c >= order_) throw std::out_of_range("index coordinate out of range");

    const int m = order_ - 1;
    std::size_t out_size = 1;
    for (int i = 0; i < dim_; ++i) out_size *= static_cast<std::size_t>(m);
    std::vector<double> out(out_size);

    MultiIndex idx(static_cast<std::size_t>(dim_), 0);
    for (std::size_t flat = 0; flat < out_size; ++flat) {
        std::size_t src = 0;
        for (int axis = 0; axis < dim_; ++axis) {
            int v = idx[static_cast<std::size_t>(axis)];
            if (v >= alpha[static_cast<std::size_t>(axis)]) ++v;  // skip the deleted index
            src += static_cast<std::size_t>(v) * strides_[static_cast<std::size_t>(axis)];
        }
        out[flat] = entries_[src];
        for (int axis = dim_ - 1; axis >= 0; --axis) {
            if (++idx[static_cast<std::size_t>(axis)] < m) break;
            idx[static_cast<std::size_t>(axis)] = 0;
        }
    }
    return MultiMatrix(dim_, m, std::move(out), zero_one_);
}

MultiMatrix MultiMatrix::permute_axes(const std::vector<int>& axis_perm) const {
    if (static_cast<int>(axis_perm.size()) != dim_)
        throw std::invalid_argument("axis permutation has wrong length");
    std::vector<char> seen(static_cast<std::size_t>(dim_), 0);
    for (const int a : axis_perm) {
        if (a < 0 || a >= dim_ || seen[static_cast<std::size_t>(a)])
            throw std::invalid_argument("invalid axis permutation");
        seen[static_cast<std::size_t>(a)] = 1;
    }
    std::vector<double> out(entries_.size());
    MultiIndex idx(static_cast<std::size_t>(dim_), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t src = 0;
        for (int j = 0; j < dim_; ++j)
            src += static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]) *
                   strides_[static_cast<std::size_t>(axis_perm[static_cast<std::size_t>(j)])];
        out[flat] = entries_[src];
        for (int axis = dim_ - 1; axis >= 0; --axis) {
            if (++idx[static_cast<std::size_t>(axis)] < order_) break;
            idx[static_cast<std::size_t>(axis)] = 0;
        }
    }
    return MultiMatrix(dim_, order_, std::move(out), zero_one_);
}

MultiMatrix MultiMatrix::relabel_axis(int axis, const std::vector<int>& index_perm) const {
    if (axis < 0 || axis >= dim_) throw std::invalid_argument("axis out of range");
    if (static_cast<int>(index_perm.size()) != order_)
        throw std::invalid_argument("index permutation has wrong length");
    std::vector<char> seen(static_cast<std::size_t>(order_), 0);
    for (const int v : index_perm) {
        if (v < 0 || v >= order_ || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("invalid index permutation");
        seen[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<double> out(entries_.size());
    MultiIndex idx(static_cast<std::size_t>(dim_), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t src = 0;
        for (int j = 0; j < dim_; ++j) {
            int v = idx[static_cast<std::size_t>(j)];
            if (j == axis) v = index_perm[static_cast<std::size_t>(v)];
            src += static_cast<std::size_t>(v) * strides_[static_cast<std::size_t>(j)];
        }
        out[flat] = entries_[src];
        for (int a = dim_ - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < order_) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return MultiMatrix(dim_, order_, std::move(out), zero_one_);
}

void validate_plane(const MultiMatrix& a, const PlaneSpec& p) {
    if (p.fixed_axes.size() != p.fixed_values.size())
        throw std::invalid_argument("plane spec: fixed_axes and fixed_values lengths differ");
    if (p.fixed_axes.size() > static_cast<std::size_t>(a.dim()))
        throw std::invalid_argument("plane spec fixes more axes than the matrix has");
    std::vector<char> seen(static_cast<std::size_t>(a.dim()), 0);
    for (std::size_t i = 0; i < p.fixed_axes.size(); ++i) {
        const int axis = p.fixed_axes[i];
        if (axis < 0 || axis >= a.dim()) throw std::invalid_argument("plane spec: axis out of range");
        if (seen[static_cast<std::size_t>(axis)])
            throw std::invalid_argument("plane spec: duplicate axis");
        seen[static_cast<std::size_t>(axis)] = 1;
        const int v = p.fixed_values[i];
        if (v < 0 || v >= a.order())
            throw std::invalid_argument("plane spec: fixed value out of range");
    }
}

double plane_sum(const MultiMatrix& a, const PlaneSpec& p) {
    validate_plane(a, p);
    const int d = a.dim();
    const int n = a.order();

    std::vector<char> fixed(static_cast<std::size_t>(d), 0);
    std::size_t base = 0;
    for (std::size_t i = 0; i < p.fixed_axes.size(); ++i) {
        fixed[static_cast<std::size_t>(p.fixed_axes[i])] = 1;
        base += static_cast<std::size_t>(p.fixed_values[i]) *
                a.stride(p.fixed_axes[i]);
    }
    std::vector<int> free_axes;
    for (int axis = 0; axis < d; ++axis)
        if (!fixed[static_cast<std::size_t>(axis)]) free_axes.push_back(axis);

    const int k = static_cast<int>(free_axes.size());
    double s = 0.0, c = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        std::size_t off = base;
        for (int j = 0; j < k; ++j)
            off += static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]) *
                   a.stride(free_axes[static_cast<std::size_t>(j)]);
        const double y = a[off] - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
        int j = k - 1;
        for (; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] < n) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j < 0) break;
    }
    return s;
}

long long plane_ones(const MultiMatrix& a, const PlaneSpec& p) {
    return std::llround(plane_sum(a, p));
}

double hyperplane_sum(const MultiMatrix& a, int axis, int index) {
    PlaneSpec p;
    p.fixed_axes = {axis};
    p.fixed_values = {index};
    return plane_sum(a, p);
}

std::vector<PlaneSpec> enumerate_planes(const MultiMatrix& a, int k,
                                        const std::vector<int>& direction) {
    const int d = a.dim();
    const int n = a.order();
    if (k < 0 || k > d) throw std::invalid_argument("plane dimension out of range");
    if (static_cast<int>(direction.size()) != d - k)
        throw std::invalid_argument("direction must fix exactly d-k axes");
    std::vector<int> axes = direction;
    std::sort(axes.begin(), axes.end());
    std::vector<char> seen(static_cast<std::size_t>(d), 0);
    for (const int axis : axes) {
        if (axis < 0 || axis >= d) throw std::invalid_argument("direction axis out of range");
        if (seen[static_cast<std::size_t>(axis)])
            throw std::invalid_argument("direction has duplicate axes");
        seen[static_cast<std::size_t>(axis)] = 1;
    }

    const int m = d - k;
    std::size_t count = 1;
    for (int i = 0; i < m; ++i) count *= static_cast<std::size_t>(n);

    std::vector<PlaneSpec> out;
    out.reserve(count);
    std::vector<int> vals(static_cast<std::size_t>(m), 0);
    for (std::size_t r = 0; r < count; ++r) {
        PlaneSpec p;
        p.fixed_axes = axes;
        p.fixed_values = vals;
        out.push_back(std::move(p));
        for (int j = m - 1; j >= 0; --j) {
            if (++vals[static_cast<std::size_t>(j)] < n) break;
            vals[static_cast<std::size_t>(j)] = 0;
        }
    }
    return out;
}

}  // namespace mdperm
