#include "mdperm/permanent.hpp"

#include "mdperm/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mdperm {

namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kU64Max / b) return kU64Max;
    return a * b;
}

/// (n!)^m, saturating at uint64 max.
std::uint64_t tuple_count_saturating(int n, int m) {
    std::uint64_t fact = 1;
    for (int i = 2; i <= n; ++i) fact = mul_saturating(fact, static_cast<std::uint64_t>(i));
    std::uint64_t t = 1;
    for (int j = 0; j < m; ++j) t = mul_saturating(t, fact);
    return t;
}

void check_tuple_budget(const char* who, int n, int m, std::uint64_t budget) {
    const std::uint64_t t = tuple_count_saturating(n, m);
    if (t > budget)
        throw BudgetExceeded(std::string(who) + ": (n!)^" + std::to_string(m) + " = " +
                             (t == kU64Max ? std::string(">1e19") : std::to_string(t)) +
                             " exceeds term budget " + std::to_string(budget));
}

// ---------------------------------------------------------------------------
// naive enumeration

/// One diagonal-product pass for a fixed tuple of permutations.
/// perms[j][i] is the coordinate of axis j+1 on the diagonal cell with
/// axis-0 coordinate i.
template <class Visit>
void visit_diagonal(const MultiMatrix& a, const std::vector<const std::vector<int>*>& perms,
                    Visit&& visit) {
    const int n = a.order();
    const int d = a.dim();
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
        std::size_t off = static_cast<std::size_t>(i) * a.stride(0);
        for (int j = 1; j < d; ++j)
            off += static_cast<std::size_t>((*perms[static_cast<std::size_t>(j - 1)])[static_cast<std::size_t>(i)]) *
                   a.stride(j);
        prod *= a[off];
        if (prod == 0.0) break;
    }
    visit(prod);
}

/// Enumerates all (d-1)-tuples of permutations whose first member has rank
/// in [outer_begin, outer_end), calling visit(product) per diagonal.
template <class Visit>
void naive_scan(const MultiMatrix& a, std::uint64_t outer_begin, std::uint64_t outer_end,
                Visit&& visit) {
    const int n = a.order();
    const int m = a.dim() - 1;
    std::vector<std::vector<int>> perms(static_cast<std::size_t>(m));
    std::vector<const std::vector<int>*> ptrs(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) ptrs[static_cast<std::size_t>(j)] = &perms[static_cast<std::size_t>(j)];

    for (std::uint64_t r = outer_begin; r < outer_end; ++r) {
        perms[0] = unrank_permutation(r, n);
        for (int j = 1; j < m; ++j) {
            perms[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(n));
            std::iota(perms[static_cast<std::size_t>(j)].begin(), perms[static_cast<std::size_t>(j)].end(), 0);
        }
        while (true) {
            visit_diagonal(a, ptrs, visit);
            int j = m - 1;
            while (j >= 1 && !std::next_permutation(perms[static_cast<std::size_t>(j)].begin(),
                                                    perms[static_cast<std::size_t>(j)].end()))
                --j;
            if (j < 1) break;
        }
    }
}

ExactValue naive_integer(const MultiMatrix& a, const PermanentOptions& opts) {
    const int n = a.order();
    const std::uint64_t outer = factorial_u64(std::min(n, 20));
    struct Partial {
        std::uint64_t count = 0;
    };
    auto partials = chunked_partials<Partial>(
        outer, resolve_threads(opts.threads), [&](std::uint64_t b, std::uint64_t e) {
            Partial p;
            naive_scan(a, b, e, [&](double prod) { p.count += prod != 0.0 ? 1 : 0; });
            return p;
        });
    BigInt total = 0;
    for (const auto& p : partials) total += p.count;
    return ExactValue::of_integer(total);
}

ExactValue naive_real(const MultiMatrix& a, const PermanentOptions& opts) {
    const int n = a.order();
    const std::uint64_t outer = factorial_u64(std::min(n, 20));
    auto partials = chunked_partials<KahanSum>(
        outer, resolve_threads(opts.threads), [&](std::uint64_t b, std::uint64_t e) {
            KahanSum p;
            naive_scan(a, b, e, [&](double prod) { p.add(prod); });
            return p;
        });
    KahanSum total;
    for (const auto& p : partials) total.add(p.value());
    return ExactValue::of_real(total.value(), total.value());
}

// ---------------------------------------------------------------------------
// expansion on minors

template <class Acc>
struct LaplaceEval {
    const MultiMatrix& a;
    std::uint64_t budget;
    std::uint64_t visits = 0;
    std::vector<std::vector<char>> used;  // axes 1..d-1
    bool integer_path;

    explicit LaplaceEval(const MultiMatrix& m, std::uint64_t b, bool integer)
        : a(m), budget(b),
          used(static_cast<std::size_t>(m.dim()),
               std::vector<char>(static_cast<std::size_t>(m.order()), 0)),
          integer_path(integer) {}

    Acc run() { return expand(a.order() - 1); }

    Acc expand(int row) {
        if (row < 0) return Acc(1);
        Acc sum(0);
        cells(row, 1, static_cast<std::size_t>(row) * a.stride(0), sum);
        return sum;
    }

    void cells(int row, int axis, std::size_t offset, Acc& sum) {
        if (axis == a.dim()) {
            if (++visits > budget)
                throw BudgetExceeded("permanent_laplace: expansion visited more than " +
                                     std::to_string(budget) + " cells");
            const double e = a[offset];
            if (e != 0.0) {
                Acc sub = expand(row - 1);
                if (integer_path)
                    sum += sub;
                else
                    sum += Acc(e) * sub;
            }
            return;
        }
        auto& u = used[static_cast<std::size_t>(axis)];
        for (int j = 0; j < a.order(); ++j) {
            if (u[static_cast<std::size_t>(j)]) continue;
            u[static_cast<std::size_t>(j)] = 1;
            cells(row, axis + 1, offset + static_cast<std::size_t>(j) * a.stride(axis), sum);
            u[static_cast<std::size_t>(j)] = 0;
        }
    }
};

// ---------------------------------------------------------------------------
// 2D inclusion-exclusion with Gray-code updates

template <class RowSum, class Term, class OnTerm>
void ryser_scan(const MultiMatrix& a, OnTerm&& on_term) {
    const int n = a.order();
    std::vector<RowSum> rowsum(static_cast<std::size_t>(n), RowSum(0));
    const std::uint64_t subsets = static_cast<std::uint64_t>(1) << n;
    std::uint64_t gray = 0;
    for (std::uint64_t g = 1; g < subsets; ++g) {
        const int j = std::countr_zero(g);
        const std::uint64_t new_gray = g ^ (g >> 1);
        const bool added = (new_gray >> j) & 1u;
        gray = new_gray;
        for (int i = 0; i < n; ++i) {
            const double e = a[static_cast<std::size_t>(i) * a.stride(0) +
                               static_cast<std::size_t>(j)];
            if (added)
                rowsum[static_cast<std::size_t>(i)] += static_cast<RowSum>(e);
            else
                rowsum[static_cast<std::size_t>(i)] -= static_cast<RowSum>(e);
        }
        Term prod(1);
        for (int i = 0; i < n; ++i) {
            prod *= Term(rowsum[static_cast<std::size_t>(i)]);
            if (prod == Term(0)) break;
        }
        // contribution sign is (-1)^(n - |S|)
        const int size_parity = std::popcount(gray) & 1;
        const bool negative = ((n & 1) ^ size_parity) != 0;
        on_term(prod, negative);
    }
}

ExactValue ryser_integer(const MultiMatrix& a) {
    BigInt acc = 0;
    ryser_scan<long long, BigInt>(a, [&](const BigInt& prod, bool negative) {
        if (negative)
            acc -= prod;
        else
            acc += prod;
    });
    return ExactValue::of_integer(acc);
}

ExactValue ryser_real(const MultiMatrix& a) {
    KahanSum acc;
    double scale = 0.0;
    ryser_scan<double, double>(a, [&](double prod, bool negative) {
        acc.add(negative ? -prod : prod);
        scale += std::abs(prod);
    });
    return ExactValue::of_real(acc.value(), scale);
}

// ---------------------------------------------------------------------------
// decomposition over k-plane tuples

/// Assembles the (k+1)-dimensional piece for one tuple: its hyperplane i is
/// the k-plane of `a` selected by prefix (i, tau_1(i), ..., tau_m(i)).
MultiMatrix assemble_piece(const MultiMatrix& a, int k,
                           const std::vector<std::vector<int>>& tau) {
    const int n = a.order();
    const int m = static_cast<int>(tau.size());
    std::size_t block = 1;
    for (int j = 0; j < k; ++j) block *= static_cast<std::size_t>(n);

    std::vector<double> entries(static_cast<std::size_t>(n) * block);
    for (int i = 0; i < n; ++i) {
        std::size_t prefix = static_cast<std::size_t>(i);
        for (int j = 0; j < m; ++j)
            prefix = prefix * static_cast<std::size_t>(n) +
                     static_cast<std::size_t>(tau[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        const std::size_t src = prefix * block;
        std::copy_n(a.entries().begin() + static_cast<std::ptrdiff_t>(src), block,
                    entries.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * block));
    }
    return MultiMatrix::from_entries_unchecked(k + 1, n, std::move(entries));
}

ExactValue piece_permanent(const MultiMatrix& piece, const PermanentOptions& opts) {
    if (piece.dim() == 2) return permanent_ryser_2d(piece, opts);
    return permanent_laplace(piece, opts);
}

}  // namespace

std::uint64_t factorial_u64(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative value");
    if (n > 20) throw std::overflow_error("factorial exceeds 64 bits");
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative value");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

std::vector<int> unrank_permutation(std::uint64_t rank, int n) {
    std::vector<int> avail(static_cast<std::size_t>(n));
    std::iota(avail.begin(), avail.end(), 0);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    std::uint64_t f = factorial_u64(n);
    for (int i = 0; i < n; ++i) {
        f /= static_cast<std::uint64_t>(n - i);
        const std::uint64_t q = rank / f;
        rank %= f;
        out.push_back(avail[static_cast<std::size_t>(q)]);
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(q));
    }
    return out;
}

ExactValue permanent_naive(const MultiMatrix& a, const PermanentOptions& opts) {
    check_tuple_budget("permanent_naive", a.order(), a.dim() - 1, opts.term_budget);
    if (a.dim() == 1) {
        // the single diagonal is the whole matrix
        if (a.zero_one()) {
            BigInt v = 1;
            for (const double e : a.entries())
                if (e == 0.0) v = 0;
            return ExactValue::of_integer(v);
        }
        double p = 1.0;
        for (const double e : a.entries()) p *= e;
        return ExactValue::of_real(p, p);
    }
    return a.zero_one() ? naive_integer(a, opts) : naive_real(a, opts);
}

ExactValue permanent_laplace(const MultiMatrix& a, const PermanentOptions& opts) {
    if (a.zero_one()) {
        LaplaceEval<BigInt> ev(a, opts.term_budget, true);
        return ExactValue::of_integer(ev.run());
    }
    LaplaceEval<double> ev(a, opts.term_budget, false);
    const double v = ev.run();
    return ExactValue::of_real(v, v);
}

ExactValue permanent_ryser_2d(const MultiMatrix& a, const PermanentOptions& opts) {
    if (a.dim() != 2)
        throw std::invalid_argument("permanent_ryser_2d requires a 2-dimensional matrix");
    if (a.order() > opts.ryser_max_order)
        throw BudgetExceeded("permanent_ryser_2d: order " + std::to_string(a.order()) +
                             " exceeds limit " + std::to_string(opts.ryser_max_order));
    return a.zero_one() ? ryser_integer(a) : ryser_real(a);
}

ExactValue permanent_decompose(const MultiMatrix& a, int k, const PermanentOptions& opts) {
    const int d = a.dim();
    if (d < 3) throw std::invalid_argument("permanent_decompose requires dimension >= 3");
    if (k < 1 || k > d - 2)
        throw std::invalid_argument("permanent_decompose: k must satisfy 1 <= k <= d-2");
    const int n = a.order();
    const int m = d - k - 1;
    check_tuple_budget("permanent_decompose", n, m, opts.term_budget);
    const std::uint64_t fact = factorial_u64(std::min(n, 20));
    std::uint64_t tuples = 1;
    for (int j = 0; j < m; ++j) tuples *= fact;

    const bool integer_path = a.zero_one();

    struct Partial {
        BigInt big = 0;
        KahanSum real;
        double scale = 0.0;
    };
    auto partials = chunked_partials<Partial>(
        tuples, resolve_threads(opts.threads), [&](std::uint64_t b, std::uint64_t e) {
            Partial p;
            std::vector<std::vector<int>> tau(static_cast<std::size_t>(m));
            for (std::uint64_t r = b; r < e; ++r) {
                std::uint64_t rest = r;
                for (int j = m - 1; j >= 0; --j) {
                    tau[static_cast<std::size_t>(j)] = unrank_permutation(rest % fact, n);
                    rest /= fact;
                }
                const MultiMatrix piece = assemble_piece(a, k, tau);
                const ExactValue v = piece_permanent(piece, opts);
                if (integer_path) {
                    p.big += v.integer;
                } else {
                    const double x = v.as_double();
                    p.real.add(x);
                    p.scale += std::abs(x);
                }
            }
            return p;
        });

    if (integer_path) {
        BigInt total = 0;
        for (const auto& p : partials) total += p.big;
        return ExactValue::of_integer(total);
    }
    KahanSum total;
    double scale = 0.0;
    for (const auto& p : partials) {
        total.add(p.real.value());
        scale += p.scale;
    }
    return ExactValue::of_real(total.value(), scale);
}

}  // namespace mdperm
