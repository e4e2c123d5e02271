#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <doctest.h>

#include "schiffer/detail/rand.hpp"
#include "schiffer/errors.hpp"
#include "schiffer/helmholtz.hpp"
#include "schiffer/specfun.hpp"
#include "schiffer/verify.hpp"

#include "oracle_constants.hpp"

using namespace schiffer;
using namespace schiffer::verify;
namespace rnd = schiffer::detail;

namespace {

constexpr double kPi = 3.14159265358979323846;

BoundaryCurve unit_disc() {
    return geom2d::BoundaryCurve::polar({0, 0}, 1.0, {});
}

// the exact constant-boundary solution J_0(k r) / J_0(k) at the first
// radial derivative zero
WaveField disc_solution() {
    return WaveField::single(oracle::jp_0_1, {0, 0}, 0,
                             1.0 / oracle::j0_at_jp01, 0.0);
}

WaveField random_field(std::mt19937_64& rng, double k, int order) {
    std::vector<double> alpha(order + 1), beta(order + 1);
    for (int n = 0; n <= order; ++n) {
        alpha[n] = rnd::gaussian(rng);
        beta[n] = n == 0 ? 0.0 : rnd::gaussian(rng);
    }
    return WaveField(k, {0, 0}, std::move(alpha), std::move(beta));
}

std::shared_ptr<const geom2d::ArcLengthTable> circle_table(int n) {
    return std::make_shared<geom2d::ArcLengthTable>(
        geom2d::build_arclength_table(unit_disc(), n));
}

} // namespace

TEST_SUITE("verify") {

TEST_CASE("trace construction") {
    auto table = circle_table(256);
    CHECK_THROWS_AS(make_trace(nullptr, {}, "x"), PreconditionError);
    CHECK_THROWS_AS(make_trace(table, std::vector<double>(5), "x"),
                    PreconditionError);
    auto tr = make_trace(table, std::vector<double>(257, 1.0), "ones");
    CHECK(tr.label == "ones");
    CHECK(tr.values.size() == 257);
}

TEST_CASE("defect of the exact disc solution and of an impostor") {
    auto disc = unit_disc();
    CHECK(schiffer_defect(disc_solution(), disc) < 1e-12);
    // same shape at a non-solution wave number
    auto wrong = WaveField::single(2.0, {0, 0}, 0,
                                   1.0 / specfun::bessel_j(0, 2.0), 0.0);
    CHECK(schiffer_defect(wrong, disc) > 1e-2);
}

TEST_CASE("normal derivative trace is periodic and labeled") {
    auto disc = unit_disc();
    auto tr = normal_derivative_trace(disc_solution(), disc, 256, "dn");
    CHECK(tr.label == "dn");
    CHECK(static_cast<int>(tr.values.size()) == 257);
    CHECK(std::abs(tr.values[0] - tr.values[256]) < 1e-12);
    for (double v : tr.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("second derivatives on the boundary follow the rank-one form") {
    auto disc = unit_disc();
    CHECK(boundary_second_derivative_check(disc_solution(), disc, 1024) <
          1e-7);

    // an eigenfield does not satisfy u = 1 on the boundary; the check
    // must refuse it rather than report nonsense
    auto eig = WaveField::single(oracle::jp_1_1, {0, 0}, 1, 1.0, 0.0);
    CHECK_THROWS_AS(boundary_second_derivative_check(eig, disc, 1024),
                    PreconditionError);
}

TEST_CASE("second killing derivatives still satisfy the wave equation") {
    // u_xx + u_yy + k^2 u vanishes identically at the coefficient level
    auto u = disc_solution();
    auto dx = KillingField::constant(1.0, 0.0);
    auto dy = KillingField::constant(0.0, 1.0);
    auto uxx = apply_killing(apply_killing(u, dx), dx);
    auto uyy = apply_killing(apply_killing(u, dy), dy);
    double k2 = u.k() * u.k();
    std::mt19937_64 rng(3);
    for (int t = 0; t < 25; ++t) {
        double r = rnd::uniform(rng, 0.0, 1.0);
        double a = rnd::uniform(rng, 0.0, 2 * kPi);
        geom2d::Point p{r * std::cos(a), r * std::sin(a)};
        double resid = uxx.eval(p) + uyy.eval(p) + k2 * u.eval(p);
        CHECK(std::abs(resid) < 1e-9 * k2 * u.coeff_norm());
    }
}

TEST_CASE("first-order boundary integrals vanish for killing derivatives") {
    auto disc = unit_disc();
    auto u = disc_solution();

    for (auto K : {KillingField::constant(1.0, 0.0),
                   KillingField::constant(0.0, 1.0),
                   KillingField::rotation({0.3, 0.4}),
                   KillingField::rotation({-0.7, 0.1})}) {
        auto v = vanishing_integrals(u, disc, K);
        CHECK(v[0] < 1e-8);
        CHECK(v[1] < 1e-8);
        CHECK(v[2] < 1e-8);
    }

    // rotation about the symmetry center kills the radial solution; the
    // three ratios are reported as exact zeros rather than noise
    auto z = vanishing_integrals(u, disc, KillingField::rotation({0, 0}));
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(z[2] == 0.0);

    CHECK_THROWS_AS(
        vanishing_integrals(u, disc, KillingField::constant(1.0, 0.0), 512),
        PreconditionError);
}

TEST_CASE("vanishing integrals are saturated in the sample count") {
    auto disc = unit_disc();
    auto u = disc_solution();
    auto K = KillingField::rotation({0.3, 0.4});
    auto coarse = vanishing_integrals(u, disc, K, 2048);
    auto fine = vanishing_integrals(u, disc, K, 4096);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(coarse[i] - fine[i]) < 1e-10);
}

TEST_CASE("harmonic coefficients against the tangent angle") {
    auto table = circle_table(2048);
    // f = cos 4 theta: only c[4] survives, with value pi
    std::vector<double> vals(2049);
    for (int i = 0; i <= 2048; ++i)
        vals[i] = std::cos(4.0 * table->theta[i]);
    auto tr = make_trace(table, vals, "cos4");
    auto hc = tangent_harmonic_coeffs(tr, 6);
    CHECK(hc.c[4] == doctest::Approx(kPi).epsilon(1e-10));
    for (int m = 0; m <= 6; ++m) {
        if (m != 4) CHECK(std::abs(hc.c[m]) < 1e-10);
        CHECK(std::abs(hc.s[m]) < 1e-10);
    }

    // zero trace: all coefficients zero
    auto z = tangent_harmonic_coeffs(
        make_trace(table, std::vector<double>(2049, 0.0), "zero"), 4);
    for (int m = 0; m <= 4; ++m) {
        CHECK(z.c[m] == 0.0);
        CHECK(z.s[m] == 0.0);
    }

    // linearity
    std::vector<double> vals2(2049);
    for (int i = 0; i <= 2048; ++i)
        vals2[i] = std::sin(2.0 * table->theta[i]) + 0.3;
    auto hc2 = tangent_harmonic_coeffs(make_trace(table, vals2, "g"), 6);
    std::vector<double> combo(2049);
    for (int i = 0; i <= 2048; ++i) combo[i] = 2.0 * vals[i] - vals2[i];
    auto hcc = tangent_harmonic_coeffs(make_trace(table, combo, "c"), 6);
    for (int m = 0; m <= 6; ++m) {
        CHECK(hcc.c[m] ==
              doctest::Approx(2.0 * hc.c[m] - hc2.c[m]).epsilon(1e-12));
        CHECK(hcc.s[m] ==
              doctest::Approx(2.0 * hc.s[m] - hc2.s[m]).epsilon(1e-12));
    }

    // resolution guard
    auto small = circle_table(64);
    CHECK_THROWS_AS(
        tangent_harmonic_coeffs(
            make_trace(small, std::vector<double>(65, 1.0), "s"), 9),
        PreconditionError);
}

TEST_CASE("harmonics of the rotated disc solution trace") {
    // With u radial, rotation about p reduces to the constant field
    // c = (p_y, -p_x), and on the boundary d_nu(c . grad u) = -mu (c . nu)
    // by the Hessian identity: a pure first harmonic. In the tangent
    // angle theta = phi + pi/2 its coefficients are -mu pi (p_x, p_y);
    // harmonics 0, 2, 3 must vanish.
    auto disc = unit_disc();
    auto u = disc_solution();
    auto Xu = apply_killing(u, KillingField::rotation({0.3, 0.4}));
    auto tr = normal_derivative_trace(Xu, disc, 2048, "dn of Xu");
    auto hc = tangent_harmonic_coeffs(tr, 3);
    double mu = oracle::jp_0_1 * oracle::jp_0_1;
    CHECK(hc.c[1] == doctest::Approx(-mu * kPi * 0.3).epsilon(1e-10));
    CHECK(hc.s[1] == doctest::Approx(-mu * kPi * 0.4).epsilon(1e-10));
    for (int m : {0, 2, 3}) {
        CHECK(std::abs(hc.c[m]) < 1e-10);
        CHECK(std::abs(hc.s[m]) < 1e-10);
    }
}

TEST_CASE("sign changes with a noise floor") {
    CHECK(sign_changes({1.0, -1.0, 1.0, -1.0}, 0.0, true) == 4);
    CHECK(sign_changes({1.0, 1.0, -1.0, 1.0}, 0.0, true) == 2);
    CHECK(sign_changes({1.0, -1.0, 1.0}, 0.0, false) == 2);
    // deadbanded samples drop out and their runs collapse
    CHECK(sign_changes({1.0, 1e-12, 1e-12, -1.0}, 1e-9, true) == 2);
    CHECK(sign_changes({1.0, 1e-12, 1.0, -1.0}, 1e-9, true) == 2);
    CHECK_THROWS_AS(sign_changes({1e-12, -1e-12}, 1e-9, true),
                    AllBelowFloorError);

    const int n = 4096;
    std::vector<double> s1(n), c4(n);
    for (int i = 0; i < n; ++i) {
        double th = 2 * kPi * i / n;
        s1[i] = std::sin(th);
        c4[i] = std::cos(4.0 * th);
    }
    CHECK(sign_changes(s1, 1e-12, true) == 2);
    CHECK(sign_changes(c4, 1e-12, true) == 8);

    // cyclic counts are even
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> v(64);
        for (auto& x : v) x = rnd::gaussian(rng);
        CHECK(sign_changes(v, 0.0, true) % 2 == 0);
    }
}

TEST_CASE("sign changes on traces use the relative default floor") {
    auto table = circle_table(512);
    std::vector<double> vals(513);
    for (int i = 0; i <= 512; ++i)
        vals[i] = std::cos(4.0 * table->theta[i]);
    CHECK(sign_changes(make_trace(table, vals, "c4")) == 8);

    // an identically tiny trace against an external floor must refuse
    std::vector<double> tiny(513, 1e-15);
    auto tr = make_trace(table, tiny, "noise");
    CHECK_THROWS_AS(sign_changes(tr, 1e-9), AllBelowFloorError);
}

TEST_CASE("random high-pass sums respect the sign-change bound") {
    auto rep = sturm_bound_check(4, 200, 1234);
    CHECK(rep.pass);
    CHECK(rep.bound == 8);
    CHECK(rep.min_count >= 8);
    CHECK(rep.trials == 200);

    auto low = sturm_bound_check(1, 50, 7);
    CHECK(low.pass);
    CHECK(low.min_count >= 2);

    CHECK_THROWS_AS(sturm_bound_check(0, 10, 1), PreconditionError);
    CHECK_THROWS_AS(sturm_bound_check(4, 0, 1), PreconditionError);
}

TEST_CASE("central antisymmetry defect") {
    auto disc = unit_disc();
    // even orders are invariant under the central flip
    WaveField even(1.7, {0, 0}, {0.8, 0.0, 0.4}, {0.0, 0.0, -0.2});
    CHECK(iota_symmetry_defect(even, disc) < 1e-12);

    // a pure order-1 mode is odd: the flip negates it
    auto odd = WaveField::single(1.7, {0, 0}, 1, 1.0, 0.0);
    CHECK(iota_symmetry_defect(odd, disc) > 1.9);

    // the solver's disc solution is symmetric even when the full basis
    // is allowed to break the symmetry
    helmholtz::CollocationOptions full;
    full.basis = helmholtz::BasisMode::full;
    auto sol = helmholtz::schiffer_residual(disc, oracle::jp_0_1, 12, full);
    REQUIRE(sol.defect < 1e-8);
    CHECK(iota_symmetry_defect(sol.field, disc) < 1e-6);

    auto wobble = geom2d::BoundaryCurve::polar({0, 0}, 1.0, {{3, 0.1, 0.0}});
    CHECK_THROWS_AS(iota_symmetry_defect(even, wobble), PreconditionError);
}

TEST_CASE("green symmetry of same-frequency fields") {
    auto ell = geom2d::BoundaryCurve::direct({0, 0}, {{1, 1.1, 0.0},
                                                      {-1, 0.1, 0.0}});
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 10; ++t) {
        double k = rnd::uniform(rng, 0.8, 4.5);
        auto f = random_field(rng, k, 8);
        auto g = random_field(rng, k, 8);
        CHECK(green_symmetry_residual(f, g, ell) < 1e-8);
    }

    auto f1 = random_field(rng, 2.0, 6);
    auto g1 = random_field(rng, 2.5, 6);
    CHECK_THROWS_AS(green_symmetry_residual(f1, g1, ell), PreconditionError);
}

TEST_CASE("green symmetry is saturated in the sample count") {
    auto disc = unit_disc();
    std::mt19937_64 rng(55);
    auto f = random_field(rng, 3.0, 8);
    auto g = random_field(rng, 3.0, 8);
    double a = green_symmetry_residual(f, g, disc, 2048);
    double b = green_symmetry_residual(f, g, disc, 4096);
    CHECK(std::abs(a - b) < 1e-10);
}

} // TEST_SUITE

