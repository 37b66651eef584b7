#include "mdperm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mdperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t ceil_to_count(double r) {
    const double nearest = std::nearbyint(r);
    if (std::abs(r - nearest) < 1e-9) return static_cast<std::uint64_t>(nearest);
    return static_cast<std::uint64_t>(std::ceil(r));
}

LogBound not_applicable(BoundKind kind, std::string reason) {
    LogBound b;
    b.kind = kind;
    b.log_value = kInf;
    b.proven = kind != BoundKind::conjecture_minc;
    b.applicable = false;
    b.note = std::move(reason);
    return b;
}

void check_axis(const MultiMatrix& a, int axis) {
    if (axis < 0 || axis >= a.dim()) throw std::invalid_argument("axis out of range");
}

std::string order_to_string(const std::vector<int>& order) {
    std::string s;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(order[i]);
    }
    return s;
}

}  // namespace

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::trivial_product: return "trivial_product";
        case BoundKind::bregman_minc: return "bregman_minc";
        case BoundKind::minc_ceil: return "minc_ceil";
        case BoundKind::total_sum: return "total_sum";
        case BoundKind::covering: return "covering";
        case BoundKind::conjecture_minc: return "conjecture_minc";
        case BoundKind::plane_reduction: return "plane_reduction";
    }
    return "?";
}

double minc_factor_log(std::uint64_t r) {
    if (r == 0) return -kInf;
    return std::lgamma(static_cast<double>(r) + 1.0) / static_cast<double>(r);
}

double minc_factor_log(double r) {
    if (r < 0.0) throw std::invalid_argument("minc factor requires r >= 0");
    return minc_factor_log(ceil_to_count(r));
}

LogBound bound_trivial_product(const MultiMatrix& a, int axis) {
    check_axis(a, axis);
    LogBound b;
    b.kind = BoundKind::trivial_product;
    b.note = "axis " + std::to_string(axis);
    double log_sum = 0.0;
    for (int i = 0; i < a.order(); ++i) {
        const double h = hyperplane_sum(a, axis, i);
        if (h <= 0.0) {
            log_sum = -kInf;
            break;
        }
        log_sum += std::log(h);
    }
    b.log_value = log_sum;
    return b;
}

LogBound bound_bregman_minc(const MultiMatrix& a) {
    if (a.dim() != 2)
        return not_applicable(BoundKind::bregman_minc, "requires d = 2");
    if (!a.zero_one())
        return not_applicable(BoundKind::bregman_minc, "requires 0/1 entries");
    LogBound b;
    b.kind = BoundKind::bregman_minc;
    b.note = "row one-counts";
    double log_sum = 0.0;
    for (int i = 0; i < a.order(); ++i) {
        const auto r = static_cast<std::uint64_t>(
            plane_ones(a, PlaneSpec{{0}, {i}}));
        log_sum += minc_factor_log(r);
    }
    b.log_value = log_sum;
    return b;
}

LogBound bound_minc_ceil(const MultiMatrix& a) {
    if (a.dim() != 2)
        return not_applicable(BoundKind::minc_ceil, "requires d = 2");
    LogBound b;
    b.kind = BoundKind::minc_ceil;
    b.note = "row sums, ceiled";
    double log_sum = 0.0;
    for (int i = 0; i < a.order(); ++i)
        log_sum += minc_factor_log(hyperplane_sum(a, 0, i));
    b.log_value = log_sum;
    return b;
}

LogBound bound_total_sum(const MultiMatrix& a) {
    if (a.dim() != 2)
        return not_applicable(BoundKind::total_sum, "requires d = 2");
    LogBound b;
    b.kind = BoundKind::total_sum;
    const int n = a.order();
    const double gamma = a.total_sum() / static_cast<double>(n);
    const double lg = std::log(gamma + 1.0);
    b.log_value = n * lg - n + (static_cast<double>(n) / (gamma + 1.0)) * (1.0 + lg / 2.0);
    b.note = "gamma = total/n";
    return b;
}

CoveringNumbers covering_numbers(const MultiMatrix& a, const std::vector<int>& axis_order) {
    const MultiMatrix c = a.permute_axes(axis_order);  // validates the permutation
    const int d = c.dim();
    const int n = c.order();

    CoveringNumbers out;
    out.axis_order = axis_order;
    out.s.assign(static_cast<std::size_t>(n), std::vector<int>(std::max(d - 1, 0), 0));

    if (d < 2) return out;  // no covering levels; log stays 0

    // marks[t] records, per rank of the coordinate prefix (c_1..c_t), which
    // values of the next coordinate occur among the nonzero cells.
    std::vector<std::vector<char>> marks(static_cast<std::size_t>(d - 1));
    std::size_t level_size = static_cast<std::size_t>(n);
    for (int t = 0; t <= d - 2; ++t) {
        marks[static_cast<std::size_t>(t)].assign(level_size, 0);
        level_size *= static_cast<std::size_t>(n);
    }

    std::size_t hyper_cells = 1;
    for (int i = 0; i < d - 1; ++i) hyper_cells *= static_cast<std::size_t>(n);

    double log_sum = 0.0;
    std::vector<int> coords(static_cast<std::size_t>(d - 1), 0);
    for (int i = 0; i < n; ++i) {
        for (auto& m : marks) std::fill(m.begin(), m.end(), 0);

        std::fill(coords.begin(), coords.end(), 0);
        const std::size_t base = static_cast<std::size_t>(i) * c.stride(0);
        for (std::size_t cell = 0; cell < hyper_cells; ++cell) {
            std::size_t off = base;
            for (int j = 0; j < d - 1; ++j)
                off += static_cast<std::size_t>(coords[static_cast<std::size_t>(j)]) *
                       c.stride(j + 1);
            if (c[off] != 0.0) {
                std::size_t prefix = 0;
                for (int t = 0; t <= d - 2; ++t) {
                    const auto v = static_cast<std::size_t>(coords[static_cast<std::size_t>(t)]);
                    marks[static_cast<std::size_t>(t)][prefix * static_cast<std::size_t>(n) + v] = 1;
                    prefix = prefix * static_cast<std::size_t>(n) + v;
                }
            }
            for (int j = d - 2; j >= 0; --j) {
                if (++coords[static_cast<std::size_t>(j)] < n) break;
                coords[static_cast<std::size_t>(j)] = 0;
            }
        }

        // level t peels axis t+1; it sits at covering level k = d-1-t
        std::size_t prefixes = 1;
        for (int t = 0; t <= d - 2; ++t) {
            const auto& m = marks[static_cast<std::size_t>(t)];
            int best = 0;
            for (std::size_t p = 0; p < prefixes; ++p) {
                int cnt = 0;
                for (int v = 0; v < n; ++v)
                    cnt += m[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)];
                best = std::max(best, cnt);
            }
            const int k = d - 1 - t;
            out.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)] = best;
            log_sum += minc_factor_log(static_cast<std::uint64_t>(best));
            prefixes *= static_cast<std::size_t>(n);
        }
    }
    out.log_value = log_sum;
    return out;
}

LogBound bound_covering(const MultiMatrix& a, bool minimize_over_axis_orders) {
    if (a.dim() < 2)
        return not_applicable(BoundKind::covering, "requires d >= 2");
    if (!a.zero_one())
        return not_applicable(BoundKind::covering, "requires 0/1 entries");

    LogBound b;
    b.kind = BoundKind::covering;

    std::vector<int> identity(static_cast<std::size_t>(a.dim()));
    std::iota(identity.begin(), identity.end(), 0);
    CoveringNumbers best = covering_numbers(a, identity);
    b.note = "identity axis order";

    if (minimize_over_axis_orders && a.dim() <= 6) {
        std::vector<int> order = identity;
        while (std::next_permutation(order.begin(), order.end())) {
            CoveringNumbers cn = covering_numbers(a, order);
            if (cn.log_value < best.log_value) best = std::move(cn);
        }
        b.note = "axis order " + order_to_string(best.axis_order) + " (minimized)";
    } else if (minimize_over_axis_orders) {
        b.note = "identity axis order (order search limited to d <= 6)";
    }
    b.log_value = best.log_value;
    return b;
}

MultiMatrix reduce_to_B(const MultiMatrix& a, int line_axis) {
    check_axis(a, line_axis);
    if (a.dim() < 3) throw std::invalid_argument("line reduction requires d >= 3");
    if (!a.zero_one()) throw std::invalid_argument("line reduction requires 0/1 entries");

    const int d = a.dim();
    const int n = a.order();
    std::vector<int> fixed_axes;
    for (int axis = 0; axis < d; ++axis)
        if (axis != line_axis) fixed_axes.push_back(axis);

    std::size_t out_size = 1;
    for (int i = 0; i < d - 1; ++i) out_size *= static_cast<std::size_t>(n);
    std::vector<double> out(out_size);

    std::vector<int> beta(static_cast<std::size_t>(d - 1), 0);
    for (std::size_t flat = 0; flat < out_size; ++flat) {
        std::size_t base = 0;
        for (int j = 0; j < d - 1; ++j)
            base += static_cast<std::size_t>(beta[static_cast<std::size_t>(j)]) *
                    a.stride(fixed_axes[static_cast<std::size_t>(j)]);
        std::uint64_t r = 0;
        for (int v = 0; v < n; ++v)
            if (a[base + static_cast<std::size_t>(v) * a.stride(line_axis)] != 0.0) ++r;
        out[flat] = r == 0 ? 0.0 : std::exp(minc_factor_log(r));
        for (int j = d - 2; j >= 0; --j) {
            if (++beta[static_cast<std::size_t>(j)] < n) break;
            beta[static_cast<std::size_t>(j)] = 0;
        }
    }
    return MultiMatrix::from_entries_unchecked(d - 1, n, std::move(out));
}

LogBound bound_plane_reduction(const MultiMatrix& a, int line_axis,
                               const PermanentOptions& opts) {
    check_axis(a, line_axis);
    if (a.dim() < 3)
        return not_applicable(BoundKind::plane_reduction, "requires d >= 3");
    if (!a.zero_one())
        return not_applicable(BoundKind::plane_reduction, "requires 0/1 entries");

    LogBound b;
    b.kind = BoundKind::plane_reduction;
    b.note = "lines along axis " + std::to_string(line_axis);

    const MultiMatrix reduced = reduce_to_B(a, line_axis);
    try {
        const ExactValue per_b =
            reduced.dim() == 2 && reduced.order() <= opts.ryser_max_order
                ? permanent_ryser_2d(reduced, opts)
                : permanent_laplace(reduced, opts);
        b.log_value = per_b.log_value();
    } catch (const BudgetExceeded&) {
        b.log_value = kInf;
        b.note += " (budget exceeded)";
    }
    return b;
}

LogBound bound_conjecture(const MultiMatrix& a, int axis) {
    check_axis(a, axis);
    if (a.dim() < 2)
        return not_applicable(BoundKind::conjecture_minc, "requires d >= 2");
    if (!a.zero_one())
        return not_applicable(BoundKind::conjecture_minc, "requires 0/1 entries");

    LogBound b;
    b.kind = BoundKind::conjecture_minc;
    b.proven = false;
    b.note = "axis " + std::to_string(axis);

    const int d = a.dim();
    const int n = a.order();
    BigInt denom = 1;
    for (int i = 0; i < d - 2; ++i) denom *= n;

    double log_sum = static_cast<double>(d - 2) * log_factorial(n);
    for (int i = 0; i < n; ++i) {
        const BigInt r = plane_ones(a, PlaneSpec{{axis}, {i}});
        const BigInt q = (r + denom - 1) / denom;  // exact ceil(r / n^(d-2))
        log_sum += minc_factor_log(q.convert_to<std::uint64_t>());
    }
    b.log_value = log_sum;
    return b;
}

std::vector<LogBound> all_bounds(const MultiMatrix& a, bool minimize_axis_orders,
                                 const PermanentOptions& opts) {
    const int d = a.dim();
    std::vector<LogBound> out;
    for (int axis = 0; axis < d; ++axis) out.push_back(bound_trivial_product(a, axis));
    out.push_back(bound_bregman_minc(a));
    out.push_back(bound_minc_ceil(a));
    out.push_back(bound_total_sum(a));
    out.push_back(bound_covering(a, minimize_axis_orders));

    if (d >= 2 && a.zero_one())
        for (int axis = 0; axis < d; ++axis) out.push_back(bound_conjecture(a, axis));
    else
        out.push_back(bound_conjecture(a, 0));

    if (d >= 3 && a.zero_one())
        for (int axis = 0; axis < d; ++axis) out.push_back(bound_plane_reduction(a, axis, opts));
    else
        out.push_back(bound_plane_reduction(a, 0, opts));
    return out;
}

}  // namespace mdperm
