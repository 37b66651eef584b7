#include "doctest.h"

#include "mdperm/bounds.hpp"
#include "mdperm/matrix_io.hpp"
#include "mdperm/permanent.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace mdperm;
using testutil::contains;
using testutil::thrown_message;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("minc factor: (ceil r)!^(1/ceil r) in log space") {
    CHECK(minc_factor_log(0.0) == -kInf);
    CHECK(minc_factor_log(std::uint64_t{0}) == -kInf);
    CHECK(minc_factor_log(1.0) == doctest::Approx(0.0));
    CHECK(minc_factor_log(2.0) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-12));
    CHECK(minc_factor_log(std::uint64_t{4}) ==
          doctest::Approx(std::log(24.0) / 4).epsilon(1e-12));
    CHECK(minc_factor_log(1.5) == doctest::Approx(std::log(2.0) / 2).epsilon(1e-12));
    CHECK(minc_factor_log(4.1) == doctest::Approx(std::log(120.0) / 5).epsilon(1e-12));
    // integral sums carried as doubles snap before the ceiling
    CHECK(minc_factor_log(3.9999999999) == doctest::Approx(std::log(24.0) / 4).epsilon(1e-12));
    CHECK(minc_factor_log(4.0000000001) == doctest::Approx(std::log(24.0) / 4).epsilon(1e-12));
    CHECK_THROWS_AS(minc_factor_log(-0.5), std::invalid_argument);
}

TEST_CASE("trivial product of hyperplane sums") {
    auto a = example_matrix("paper");
    for (int axis = 0; axis < 3; ++axis) {
        auto b = bound_trivial_product(a, axis);
        CHECK(b.kind == BoundKind::trivial_product);
        CHECK(b.proven);
        CHECK(b.applicable);
        CHECK(b.log_value == doctest::Approx(std::log(4096.0)).epsilon(1e-12));
        CHECK(b.note == "axis " + std::to_string(axis));
    }
    CHECK(bound_trivial_product(testutil::identity2(5), 0).log_value ==
          doctest::Approx(0.0));
    // a zero hyperplane forces bound 0
    auto z = MultiMatrix::from_entries(2, 2, {0, 0, 1, 1});
    CHECK(bound_trivial_product(z, 0).log_value == -kInf);
    CHECK(bound_trivial_product(z, 1).log_value ==
          doctest::Approx(0.0));  // both column sums are 1
    CHECK_THROWS_AS(bound_trivial_product(z, 2), std::invalid_argument);
}

TEST_CASE("2D factorial-root bound over row one-counts") {
    auto ones3 = testutil::all_ones(2, 3);
    auto b = bound_bregman_minc(ones3);
    CHECK(b.applicable);
    CHECK(b.log_value == doctest::Approx(std::log(6.0)).epsilon(1e-12));  // = per: equality
    CHECK(permanent_naive(ones3).integer == 6);

    CHECK(bound_bregman_minc(testutil::identity2(5)).log_value == doctest::Approx(0.0));

    // two disjoint 2x2 all-ones blocks: bound log4 meets per = 4
    auto bd = MultiMatrix::from_entries(2, 4, {1, 1, 0, 0,
                                               1, 1, 0, 0,
                                               0, 0, 1, 1,
                                               0, 0, 1, 1});
    CHECK(bound_bregman_minc(bd).log_value == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(permanent_naive(bd).integer == 4);

    auto na = bound_bregman_minc(testutil::all_ones(3, 2));
    CHECK_FALSE(na.applicable);
    CHECK(na.log_value == kInf);
    CHECK(contains(na.note, "requires d = 2"));
    auto nr = bound_bregman_minc(MultiMatrix::from_entries(2, 2, {0.5, 1, 1, 1}));
    CHECK_FALSE(nr.applicable);
    CHECK(contains(nr.note, "0/1"));

    // the bound really bounds: random 0/1 rows
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto m = testutil::random01(2, 5, 0.5, 600 + seed);
        CHECK(permanent_naive(m).log_value() <= bound_bregman_minc(m).log_value + 1e-9);
        // and never beats the axis-0 trivial product
        CHECK(bound_bregman_minc(m).log_value <=
              bound_trivial_product(m, 0).log_value + 1e-12);
    }
}

TEST_CASE("2D ceiling variant for fractional entries") {
    auto half = MultiMatrix::from_entries(2, 2, {0.5, 0.5, 0.5, 0.5});
    auto b = bound_minc_ceil(half);
    CHECK(b.applicable);
    CHECK(b.log_value == doctest::Approx(0.0));  // rows sum to 1, F(1) = 1
    CHECK(permanent_naive(half).real == doctest::Approx(0.5));  // per <= 1 indeed

    auto heavier = MultiMatrix::from_entries(2, 2, {0.6, 0.6, 0.6, 0.6});
    CHECK(bound_minc_ceil(heavier).log_value ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));  // ceil(1.2) = 2 per row
    CHECK(permanent_naive(heavier).real == doctest::Approx(0.72));

    // agrees with the 0/1 bound on 0/1 input
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto m = testutil::random01(2, 4, 0.5, 700 + seed);
        const double ceilv = bound_minc_ceil(m).log_value;
        const double brg = bound_bregman_minc(m).log_value;
        if (brg == -kInf)
            CHECK(ceilv == -kInf);
        else
            CHECK(ceilv == doctest::Approx(brg).epsilon(1e-12));
    }
    CHECK_FALSE(bound_minc_ceil(testutil::all_ones(3, 2)).applicable);
}

TEST_CASE("2D bound from the total sum alone") {
    auto single = MultiMatrix::from_entries(2, 1, {1});
    CHECK(bound_total_sum(single).log_value ==
          doctest::Approx(0.36643397569993164).epsilon(1e-9));
    auto ones3 = testutil::all_ones(2, 3);
    CHECK(bound_total_sum(ones3).log_value ==
          doctest::Approx(2.4287434687796305).epsilon(1e-9));
    // gamma = 0: the bound degenerates to 1
    auto z = MultiMatrix::from_entries(2, 2, {0, 0, 0, 0});
    CHECK(bound_total_sum(z).log_value == doctest::Approx(0.0));
    CHECK_FALSE(bound_total_sum(testutil::all_ones(3, 2)).applicable);

    // dominates the permanent on random real matrices
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto m = testutil::random_real(2, 4, 800 + seed);
        CHECK(permanent_naive(m).log_value() <= bound_total_sum(m).log_value + 1e-9);
    }
}

TEST_CASE("covering numbers of the worked example are all 4") {
    auto a = example_matrix("paper");
    auto cn = covering_numbers(a, {0, 1, 2});
    REQUIRE(cn.s.size() == 4);
    for (const auto& row : cn.s) {
        REQUIRE(row.size() == 2);
        CHECK(row[0] == 4);  // most ones in a line of the nested family
        CHECK(row[1] == 4);  // most nonempty lines in the hyperplane
    }
    CHECK(cn.log_value == doctest::Approx(std::log(576.0)).epsilon(1e-9));

    auto b = bound_covering(a);
    CHECK(b.applicable);
    CHECK(b.proven);
    CHECK(b.log_value == doctest::Approx(std::log(576.0)).epsilon(1e-9));
    CHECK(b.note == "identity axis order");
}

TEST_CASE("covering reduces to the row bound in 2D") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        auto m = testutil::random01(2, 5, 0.45, 900 + seed);
        auto cov = bound_covering(m);
        auto brg = bound_bregman_minc(m);
        if (brg.log_value == -kInf)
            CHECK(cov.log_value == -kInf);
        else
            CHECK(cov.log_value == doctest::Approx(brg.log_value).epsilon(1e-12));
        // 2D covering numbers are the row one-counts
        auto cn = covering_numbers(m, {0, 1});
        for (int i = 0; i < 5; ++i)
            CHECK(cn.s[static_cast<std::size_t>(i)][0] ==
                  static_cast<int>(plane_ones(m, PlaneSpec{{0}, {i}})));
    }
}

TEST_CASE("covering equality on block-diagonal structure") {
    GenSpec spec;
    spec.kind = GenKind::block_diagonal;
    spec.d = 3;
    spec.n = 4;
    spec.blocks = {2, 2};
    auto a = generate(spec);
    auto cn = covering_numbers(a, {0, 1, 2});
    for (const auto& row : cn.s)
        for (const int s : row) CHECK(s == 2);
    CHECK(bound_covering(a).log_value == doctest::Approx(std::log(16.0)).epsilon(1e-9));
    CHECK(permanent_naive(a).integer == 16);  // the bound is met with equality
}

TEST_CASE("covering: zero matrices, minimization, guards") {
    auto z = MultiMatrix::from_entries(3, 2, std::vector<double>(8, 0.0));
    CHECK(bound_covering(z).log_value == -kInf);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto m = testutil::random01(3, 3, 0.5, 1000 + seed);
        auto id = bound_covering(m, false);
        auto mn = bound_covering(m, true);
        CHECK(mn.log_value <= id.log_value + 1e-12);
        CHECK(contains(mn.note, "axis order"));
        // every axis order still dominates the permanent
        CHECK(permanent_naive(m).log_value() <= mn.log_value + 1e-9);
    }

    CHECK_FALSE(bound_covering(testutil::random_real(3, 2, 1)).applicable);
    CHECK_THROWS_AS(covering_numbers(testutil::all_ones(3, 2), {0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(covering_numbers(testutil::all_ones(3, 2), {0, 1, 1}),
                    std::invalid_argument);
}

TEST_CASE("line reduction to a (d-1)-dimensional matrix") {
    auto a = example_matrix("paper");
    auto b2 = reduce_to_B(a, 2);
    CHECK(b2.dim() == 2);
    CHECK(b2.order() == 4);
    CHECK_FALSE(b2.zero_one());
    // first row of the reduction: line sums 4,2,1,1
    CHECK(b2.at({0, 0}) == doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-12));
    CHECK(b2.at({0, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(b2.at({0, 2}) == doctest::Approx(1.0));
    CHECK(b2.at({0, 3}) == doctest::Approx(1.0));

    auto ones = testutil::all_ones(3, 2);
    auto rb = reduce_to_B(ones, 0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(rb.at({i, j}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // a zeroed line produces a zero entry
    std::vector<double> e(8, 1.0);
    e[0] = e[1] = 0.0;  // line (0,0,*)
    auto withzero = MultiMatrix::from_entries(3, 2, e);
    CHECK(reduce_to_B(withzero, 2).at({0, 0}) == 0.0);

    CHECK_THROWS_AS(reduce_to_B(testutil::all_ones(2, 3), 0), std::invalid_argument);
    CHECK_THROWS_AS(reduce_to_B(testutil::random_real(3, 2, 2), 0), std::invalid_argument);
    CHECK_THROWS_AS(reduce_to_B(a, 3), std::invalid_argument);
}

TEST_CASE("plane-reduction bound: golden values per direction") {
    auto a = example_matrix("paper");
    auto b0 = bound_plane_reduction(a, 0);
    auto b1 = bound_plane_reduction(a, 1);
    auto b2 = bound_plane_reduction(a, 2);
    CHECK(std::exp(b0.log_value) == doctest::Approx(97.99592553125336).epsilon(1e-9));
    CHECK(std::exp(b1.log_value) == doctest::Approx(104.23318916570346).epsilon(1e-9));
    CHECK(std::exp(b2.log_value) == doctest::Approx(104.23318916570346).epsilon(1e-9));
    CHECK(b0.note == "lines along axis 0");
    // all three dominate per = 74
    for (const auto& b : {b0, b1, b2}) CHECK(std::log(74.0) <= b.log_value + 1e-9);

    // equality witness: all-ones d=3 n=2 has per = 4 and per B = 4
    auto ones = testutil::all_ones(3, 2);
    CHECK(bound_plane_reduction(ones, 0).log_value ==
          doctest::Approx(std::log(4.0)).epsilon(1e-9));
    CHECK(permanent_naive(ones).integer == 4);

    // zero hyperplane: B has a zero row
    std::vector<double> e(8, 1.0);
    e[0] = e[1] = e[2] = e[3] = 0.0;  // hyperplane i = 0 of axis 0
    auto withzero = MultiMatrix::from_entries(3, 2, e);
    CHECK(bound_plane_reduction(withzero, 1).log_value == -kInf);

    // budget overruns surface as +inf with a note, not an exception
    PermanentOptions tight;
    tight.term_budget = 2;
    tight.ryser_max_order = 1;
    auto over = bound_plane_reduction(a, 0, tight);
    CHECK(over.log_value == kInf);
    CHECK(contains(over.note, "budget exceeded"));

    CHECK_FALSE(bound_plane_reduction(testutil::all_ones(2, 3), 0).applicable);
    CHECK_FALSE(bound_plane_reduction(testutil::random_real(3, 2, 3), 0).applicable);
}

TEST_CASE("candidate bound: worked example gives 96 on every axis") {
    auto a = example_matrix("paper");
    for (int axis = 0; axis < 3; ++axis) {
        auto b = bound_conjecture(a, axis);
        CHECK_FALSE(b.proven);  // reported, never asserted
        CHECK(b.applicable);
        CHECK(b.log_value == doctest::Approx(std::log(96.0)).epsilon(1e-9));
    }

    // equality witness: all-ones d=3 n=2
    auto ones = testutil::all_ones(3, 2);
    CHECK(bound_conjecture(ones, 0).log_value ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));

    auto nr = bound_conjecture(testutil::random_real(3, 2, 4), 0);
    CHECK_FALSE(nr.applicable);
    CHECK_FALSE(nr.proven);
    CHECK(nr.log_value == kInf);
}

TEST_CASE("candidate bound coincides with the row bound in 2D") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        auto m = testutil::random01(2, n, 0.5, 1100 + seed);
        auto cj = bound_conjecture(m, 0);
        auto brg = bound_bregman_minc(m);
        if (brg.log_value == -kInf)
            CHECK(cj.log_value == -kInf);
        else
            CHECK(std::abs(cj.log_value - brg.log_value) <= 1e-12);
    }
}

TEST_CASE("every proven bound dominates the exact permanent") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int d = 2 + static_cast<int>(seed % 3);
        const int n = 2 + static_cast<int>((seed / 3) % 3);
        const double p = 0.35 + 0.1 * static_cast<double>(seed % 4);
        auto m = testutil::random01(d, n, p, 1200 + seed);
        const double log_per = permanent_naive(m).log_value();
        for (const auto& b : all_bounds(m, seed % 2 == 1)) {
            if (!b.proven || !b.applicable) continue;
            CHECK(log_per <= b.log_value + 1e-9);
        }
    }
}

TEST_CASE("all_bounds emits a stable table") {
    auto rows3 = all_bounds(example_matrix("paper"));
    CHECK(rows3.size() == 13);  // 3 trivial + 3 n/a + covering + 3 candidate + 3 reduction
    int trivial = 0, na = 0, conjecture = 0, reduction = 0, covering = 0;
    for (const auto& b : rows3) {
        if (!b.applicable) ++na;
        if (b.kind == BoundKind::trivial_product) ++trivial;
        if (b.kind == BoundKind::conjecture_minc) ++conjecture;
        if (b.kind == BoundKind::plane_reduction) ++reduction;
        if (b.kind == BoundKind::covering) ++covering;
    }
    CHECK(trivial == 3);
    CHECK(na == 3);  // the three 2D-only bounds
    CHECK(conjecture == 3);
    CHECK(reduction == 3);
    CHECK(covering == 1);

    auto rows2 = all_bounds(testutil::random01(2, 4, 0.5, 5));
    CHECK(rows2.size() == 9);  // 2 trivial + 3 row bounds + covering + 2 candidate + 1 n/a

    auto rows_real = all_bounds(testutil::random_real(3, 3, 5));
    CHECK(rows_real.size() == 9);  // 3 trivial + 6 n/a rows
    int applicable = 0;
    for (const auto& b : rows_real)
        if (b.applicable) ++applicable;
    CHECK(applicable == 3);

    for (const auto& b : rows3) CHECK(bound_kind_name(b.kind) != std::string("?"));
}
