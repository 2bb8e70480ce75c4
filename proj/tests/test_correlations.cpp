#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "zerocorr/connected.hpp"
#include "zerocorr/correlations.hpp"
#include "zerocorr/covariance.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/gaussian.hpp"
#include "oracles.hpp"

using namespace zerocorr;

namespace {

struct Frozen {
    double t;
    double value;
};

// 50-digit reference values of the closed-form pair correlation.
const Frozen kM1[] = {
    {1e-5, 9.9999999997777777778e-6}, {5e-4, 0.00049999997222222361111},
    {0.000999, 0.00099899977844382222266}, {0.001001, 0.0010009997771104888893},
    {0.01, 0.0099997777822221460329}, {0.125, 0.1245673249347233869},
    {0.5, 0.47355380403247096591}, {1.0, 0.81563047329272986256},
    {2.0, 1.0486616541259673197}, {8.0, 1.0000218318352679599},
};
const Frozen kM2[] = {
    {1e-5, 25000.250005}, {5e-4, 500.25024999998958333},
    {0.000999, 250.50074975016716668}, {0.001001, 250.00075025016616668},
    {0.01, 25.254999916668148124}, {0.125, 2.3123376905628976351},
    {0.5, 0.99002836077354800639}, {1.0, 0.92940984583127050086},
    {2.0, 0.99281185897623032823}, {8.0, 1.0000046702124039927},
};
const Frozen kM3[] = {
    {1e-5, 33333.66667037037037}, {5e-4, 667.0001851851787037},
    {0.000999, 334.00070366694863722}, {0.001001, 333.33403707435506685},
    {0.01, 33.670370318519365066}, {0.125, 3.0461952808826727358},
    {0.5, 1.1789584995438406593}, {1.0, 0.99252039765075171644},
    {2.0, 0.99234977093460260023}, {8.0, 1.0000017505482598609},
};

PointConfiguration pair_at(double r, int m) {
    std::vector<Complex> a(m, Complex(0.0)), b(m, Complex(0.0));
    b[0] = r;
    return PointConfiguration({a, b});
}

}  // namespace

TEST_SUITE("correlations") {

TEST_CASE("closed form against frozen high-precision values") {
    for (const auto& f : kM1) CHECK(pair_correlation_closed(f.t, 1) == doctest::Approx(f.value).epsilon(1e-10));
    for (const auto& f : kM2) CHECK(pair_correlation_closed(f.t, 2) == doctest::Approx(f.value).epsilon(1e-10));
    for (const auto& f : kM3) CHECK(pair_correlation_closed(f.t, 3) == doctest::Approx(f.value).epsilon(1e-10));
    for (int m = 1; m <= 3; ++m) {
        for (double t : {29.9, 30.1, 45.0}) CHECK(pair_correlation_closed(t, m) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(pair_correlation_closed(0.0, 1), InputError);
}

TEST_CASE("closed form is continuous across the series switch") {
    for (int m = 1; m <= 3; ++m) {
        const double lo = pair_correlation_closed(kPairSeriesBelow * (1 - 1e-12), m);
        const double hi = pair_correlation_closed(kPairSeriesBelow * (1 + 1e-12), m);
        CHECK(hi == doctest::Approx(lo).epsilon(1e-9));
    }
}

TEST_CASE("wick route reproduces the closed form") {
    for (int m = 1; m <= 3; ++m) {
        for (double r : {0.5, 1.5}) {
            const auto v = limit_correlation({2, 1, m, pair_at(r, m), Method::exact_wick, {}});
            CHECK(v.normalized == doctest::Approx(pair_correlation_closed(0.5 * r * r, m)).epsilon(1e-9));
            const auto c = limit_correlation({2, 1, m, pair_at(r, m), Method::closed_form, {}});
            CHECK(c.method == Method::closed_form);
            CHECK(c.normalized == doctest::Approx(v.normalized).epsilon(1e-9));
        }
    }
}

TEST_CASE("one-point densities") {
    CHECK(density_one_point(1, 1) == doctest::Approx(1.0 / kPi));
    CHECK(density_one_point(2, 3) == doctest::Approx(6.0 / (kPi * kPi)));
    CHECK(normalization_factor(2, 1, 1) == doctest::Approx(kPi * kPi));
    CHECK_THROWS_AS(density_one_point(3, 2), InputError);
}

TEST_CASE("small-r asymptote") {
    CHECK(small_r_asymptote(0.1, 1) == doctest::Approx(0.005));
    CHECK(small_r_asymptote(0.1, 2) == doctest::Approx(0.75));
}

TEST_CASE("monte carlo agrees with wick") {
    MonteCarloOptions mc;
    mc.samples = 40000;
    mc.seed = 17;
    const auto z = pair_at(0.8, 1);
    const auto exact = limit_correlation({2, 1, 1, z, Method::exact_wick, {}});
    const auto est = limit_correlation({2, 1, 1, z, Method::monte_carlo, mc});
    REQUIRE(est.std_error.has_value());
    CHECK(std::abs(est.normalized - exact.normalized) < 4.0 * *est.std_error);
}

TEST_CASE("finite-N one-point function") {
    // raw is the scaled affine density, carrying the area element
    // (1 + |a|^2/N)^{-2}; normalized divides it out.
    const int N = 50;
    for (Complex a : {Complex(0.0), Complex(1.0, 0.5), Complex(-2.0, 0.0)}) {
        const PointConfiguration z({{a}});
        const auto v = finite_correlation_cp1(N, z);
        const double expect = std::pow(1.0 + std::norm(a) / N, -2.0) / kPi;
        CHECK(v.raw == doctest::Approx(expect).epsilon(1e-12));
        CHECK(v.normalized == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("finite-N pair correlation is near 1 at large separation") {
    const auto v = finite_correlation_cp1(1024, pair_at(6.0, 1));
    CHECK(std::abs(v.normalized - 1.0) < 1e-3);
}

TEST_CASE("finite-N Monte Carlo agrees with Wick") {
    MonteCarloOptions mc;
    mc.samples = 100000;
    mc.seed = 5;
    const auto z = pair_at(1.0, 1);
    const auto exact = finite_correlation_cp1(64, z);
    const auto est = finite_correlation_cp1(64, z, Method::monte_carlo, mc);
    REQUIRE(est.std_error.has_value());
    CHECK(std::abs(est.normalized - exact.normalized) < 4.0 * *est.std_error);
}

TEST_CASE("finite-N pair correlation converges") {
    const auto z = pair_at(1.0, 1);
    const double lim = limit_correlation({2, 1, 1, z, Method::exact_wick, {}}).normalized;
    double prev = INFINITY;
    for (int N : {64, 256, 1024}) {
        const double err = std::abs(finite_correlation_cp1(N, z).normalized - lim);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("method names") {
    for (Method m : {Method::exact_wick, Method::monte_carlo, Method::closed_form}) {
        CHECK(parse_method(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_method("guess"), InputError);
    const PointConfiguration three({{Complex(0.0)}, {Complex(1.0)}, {Complex(0, 1)}});
    CHECK_THROWS_AS(limit_correlation({3, 1, 1, three, Method::closed_form, {}}), InputError);
}


TEST_CASE("one-point densities for each k and m") {
    CHECK(density_one_point(1, 1) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(density_one_point(1, 2) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(density_one_point(2, 2) == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-15));
    for (int m = 1; m <= 3; ++m) {
        for (int k = 1; k <= m; ++k) {
            const PointConfiguration one({std::vector<Complex>(m, Complex(0.4, 0.2))});
            CHECK(limit_correlation({1, k, m, one, Method::exact_wick, {}}).normalized
                  == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(density_one_point(3, 2), InputError);
}

TEST_CASE("wick route reproduces the closed form across separations") {
    for (double r : {0.3, 0.5, 1.0, 2.0, 4.0}) {
        const auto v = limit_correlation({2, 1, 1, pair_at(r, 1), Method::exact_wick, {}});
        const double expect = pair_correlation_closed(r * r / 2, 1);
        CHECK(std::abs(v.normalized - expect) <= 1e-9 * expect);
    }
    const auto v2 = limit_correlation({2, 1, 2, pair_at(std::sqrt(2.0), 2), Method::exact_wick, {}});
    CHECK(std::abs(v2.normalized - pair_correlation_closed(1.0, 2)) <= 1e-9);
}

TEST_CASE("det product at separation 1.5 agrees with both oracles") {
    const PointConfiguration z = pair_at(1.5, 1);
    const CovarianceBlocks b = limit_blocks(z);
    const ConditionalGaussian cg = assemble_conditional(b, 1);
    const HermitianMatrix lam = lambda_schur(b);
    const double exact = det_product_moment(lam, {2, 1, 1});
    const auto est = mc_det_product_moment(lam, {2, 1, 1}, 200000, 21);
    CHECK(std::abs(est.estimate - exact) < 4.0 * est.std_error);
    const double closed = pair_correlation_closed(1.125, 1);
    CHECK(std::abs(cg.prefactor * exact * normalization_factor(2, 1, 1) - closed) <= 1e-10);
}

TEST_CASE("closed form limits") {
    CHECK(pair_correlation_closed(1e-3, 1) / 1e-3 >= 0.99);
    CHECK(pair_correlation_closed(1e-3, 1) / 1e-3 <= 1.01);
    for (int m = 1; m <= 4; ++m) {
        CHECK(pair_correlation_closed(40.0, m) == 1.0);
        CHECK(std::abs(pair_correlation_closed(20.0, m) - 1.0) < 1e-6);
    }
    CHECK_THROWS_AS(pair_correlation_closed(0.0, 1), InputError);
    CHECK_THROWS_AS(pair_correlation_closed(-1.0, 1), InputError);
}

TEST_CASE("pair correlation tends to 1 within r^4 e^{-r^2}") {
    for (int m = 1; m <= 3; ++m) {
        for (double r : {3.0, 4.0, 5.0}) {
            const double v = limit_correlation({2, 1, m, pair_at(r, m), Method::exact_wick, {}}).normalized;
            CHECK(std::abs(v - 1.0) <= 10.0 * std::pow(r, 4) * std::exp(-r * r));
        }
    }
}

TEST_CASE("small-separation law") {
    CHECK(small_r_asymptote(0.2, 1) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(small_r_asymptote(0.01, 2) == doctest::Approx(0.75).epsilon(1e-14));
    const double v = limit_correlation({2, 1, 1, pair_at(0.1, 1), Method::exact_wick, {}}).normalized;
    CHECK(std::abs(v - 0.005) <= 0.1 * 0.005);
}

TEST_CASE("well separated triangle is uncorrelated") {
    const double s = 5.0;
    const PointConfiguration tri({{Complex(0.0)}, {Complex(s)}, {std::polar(s, kPi / 3)}});
    const auto exact = limit_correlation({3, 1, 1, tri, Method::exact_wick, {}});
    CHECK(std::abs(exact.normalized - 1.0) < 1e-3);
    MonteCarloOptions mc;
    mc.samples = 100000;
    mc.seed = 3;
    const auto est = limit_correlation({3, 1, 1, tri, Method::monte_carlo, mc});
    REQUIRE(est.std_error.has_value());
    CHECK(std::abs(est.normalized - exact.normalized) < 4.0 * *est.std_error);
}

TEST_CASE("correlations are symmetric in the points") {
    const std::vector<Complex> a{Complex(0.1, 0.2)}, b{Complex(1.0, -0.4)}, c{Complex(-0.3, 0.9)};
    const double base = limit_correlation({3, 1, 1, PointConfiguration({a, b, c}), Method::exact_wick, {}}).normalized;
    for (const auto& perm : {std::vector{b, a, c}, std::vector{c, b, a}, std::vector{a, c, b}, std::vector{b, c, a}}) {
        const double v = limit_correlation({3, 1, 1, PointConfiguration(perm), Method::exact_wick, {}}).normalized;
        CHECK(std::abs(v - base) <= 1e-10 * base);
    }
}

TEST_CASE("pair correlation depends only on the separation") {
    const CMatrix c = oracle::random_matrix(10, 3, 404);
    const double r = 1.3;
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 10; ++i) {
        const std::vector<Complex> a{c(i, 0), c(i, 1)};
        Complex d0 = c(i, 2), d1 = c(i, 0) - c(i, 1);
        const double len = std::sqrt(std::norm(d0) + std::norm(d1));
        const std::vector<Complex> b{a[0] + r * d0 / len, a[1] + r * d1 / len};
        const double v = limit_correlation({2, 1, 2, PointConfiguration({a, b}), Method::exact_wick, {}}).normalized;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo <= 1e-9);
}

TEST_CASE("correlations are nonnegative") {
    const CMatrix c = oracle::random_matrix(20, 3, 505);
    for (int i = 0; i < 20; ++i) {
        const PointConfiguration z({{c(i, 0)}, {c(i, 1)}, {c(i, 2)}});
        CHECK(limit_correlation({3, 1, 1, z, Method::exact_wick, {}}).raw >= 0.0);
    }
}

TEST_CASE("finite-N one-point function at the origin") {
    const PointConfiguration o({{Complex(0.0)}});
    for (int N : {1, 10, 1000}) {
        const auto v = finite_correlation_cp1(N, o);
        CHECK(v.normalized == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(v.raw == doctest::Approx(1.0 / kPi).epsilon(1e-13));
    }
}

TEST_CASE("finite-N error decays at least like N^-1/2") {
    const auto z = pair_at(1.0, 1);
    const double lim = limit_correlation({2, 1, 1, z, Method::exact_wick, {}}).normalized;
    std::vector<double> x, y;
    for (int N : {64, 256, 1024}) {
        x.push_back(std::log(double(N)));
        y.push_back(std::log(std::abs(finite_correlation_cp1(N, z).normalized - lim)));
    }
    CHECK(fit_slope(x, y) <= -0.45);
}

}
