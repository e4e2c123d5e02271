#include <cmath>
#include <random>

#include <doctest.h>

#include "schiffer/detail/rand.hpp"
#include "schiffer/errors.hpp"
#include "schiffer/geom2d.hpp"

using namespace schiffer;
using namespace schiffer::geom2d;
namespace rnd = schiffer::detail;

namespace {

constexpr double kPi = 3.14159265358979323846;

BoundaryCurve unit_circle() { return BoundaryCurve::polar({0, 0}, 1.0, {}); }

BoundaryCurve ellipse_2_1() {
    return BoundaryCurve::direct({0, 0}, {{1, 1.5, 0.0}, {-1, 0.5, 0.0}});
}

BoundaryCurve flower6(double eps = 0.05) {
    return BoundaryCurve::polar({0, 0}, 1.0, {{6, eps, 0.0}});
}

// rotate a direct curve and a point rigidly by angle t about the origin,
// then translate by d
BoundaryCurve moved_direct(const BoundaryCurve& c, double t, Point d) {
    std::vector<FourierTerm> terms;
    for (const auto& f : c.terms()) {
        double a = f.a * std::cos(t) - f.b * std::sin(t);
        double b = f.a * std::sin(t) + f.b * std::cos(t);
        terms.push_back({f.k, a, b});
    }
    Point ctr = c.center();
    Point ctr2{ctr.x * std::cos(t) - ctr.y * std::sin(t) + d.x,
               ctr.x * std::sin(t) + ctr.y * std::cos(t) + d.y};
    return BoundaryCurve::direct(ctr2, terms);
}

Point moved_point(Point p, double t, Point d) {
    return {p.x * std::cos(t) - p.y * std::sin(t) + d.x,
            p.x * std::sin(t) + p.y * std::cos(t) + d.y};
}

} // namespace

TEST_SUITE("geom2d") {

TEST_CASE("point evaluation") {
    auto circ = unit_circle();
    CHECK(circ.eval(0.0).x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(circ.eval(0.0).y == doctest::Approx(0.0).epsilon(1e-14));

    auto ell = ellipse_2_1();
    Point p = ell.eval(kPi / 2);
    CHECK(p.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.y == doctest::Approx(1.0).epsilon(1e-14));
    Point q = ell.eval(kPi);
    CHECK(q.x == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(std::abs(q.y) < 1e-12);
    // 2 pi periodic
    Point a = ell.eval(1.234), b = ell.eval(1.234 + 2.0 * kPi);
    CHECK(norm(a - b) < 1e-12);
}

TEST_CASE("construction rejects bad curves") {
    // polar radius dips through zero
    CHECK_THROWS_AS(BoundaryCurve::polar({0, 0}, 1.0, {{2, 1.2, 0.0}}),
                    ValidationError);
    // cusp: z' vanishes at phi = pi
    CHECK_THROWS_AS(BoundaryCurve::direct({0, 0}, {{1, 1.0, 0.0},
                                                   {2, 0.5, 0.0}}),
                    ValidationError);
    // figure-eight style self intersection
    CHECK_THROWS_AS(BoundaryCurve::direct({0, 0}, {{1, 0.1, 0.0},
                                                   {-2, 1.0, 0.0}}),
                    ValidationError);
    // polar terms need k >= 1
    CHECK_THROWS_AS(BoundaryCurve::polar({0, 0}, 1.0, {{0, 0.1, 0.0}}),
                    ValidationError);
}

TEST_CASE("clockwise input is reparametrized to counterclockwise") {
    // direct curve with only a k = -1 term runs clockwise as given
    auto c = BoundaryCurve::direct({0, 0}, {{-1, 1.0, 0.0}});
    auto table = build_arclength_table(c, 256);
    CHECK(table.theta[table.n] - table.theta[0] ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("arc length table on the unit circle") {
    auto table = build_arclength_table(unit_circle(), 256);
    CHECK(table.total_length == doctest::Approx(2 * kPi).epsilon(1e-10));
    CHECK(table.s[0] == 0.0);
    for (int i = 0; i < table.n; ++i) {
        CHECK(table.s[i + 1] > table.s[i]);
        CHECK(std::abs(table.theta[i + 1] - table.theta[i]) < kPi);
        CHECK(table.kappa[i] == doctest::Approx(1.0).epsilon(1e-10));
        // theta(phi) = phi + pi/2 on the unit circle
        CHECK(table.theta[i] - table.phi[i] ==
              doctest::Approx(kPi / 2).epsilon(1e-10));
    }
}

TEST_CASE("tangent angle lift gains exactly 2 pi per period") {
    for (auto curve :
         {unit_circle(), ellipse_2_1(), flower6(),
          BoundaryCurve::polar({0.4, -1.0}, 1.0, {{3, 0.1, 0.05}})}) {
        auto table = build_arclength_table(curve, 512);
        CHECK(table.theta[table.n] - table.theta[0] ==
              doctest::Approx(2 * kPi).epsilon(1e-10));
    }
}

TEST_CASE("ellipse curvature against the closed form") {
    auto ell = ellipse_2_1();
    const double a = 2.0, b = 1.0;
    auto table = build_arclength_table(ell, 256);
    CHECK(table.kappa[0] == doctest::Approx(a / (b * b)).epsilon(1e-8));
    for (int i = 0; i < table.n; i += 7) {
        double phi = table.phi[i];
        double s2 = a * a * std::sin(phi) * std::sin(phi) +
                    b * b * std::cos(phi) * std::cos(phi);
        double kref = a * b / std::pow(s2, 1.5);
        CHECK(table.kappa[i] == doctest::Approx(kref).epsilon(1e-8));
    }
}

TEST_CASE("center of curvature") {
    auto circ = BoundaryCurve::polar({0.7, -0.2}, 2.5, {});
    for (double phi : {0.0, 1.1, 4.4}) {
        Point c = center_of_curvature(circ, phi);
        CHECK(norm(c - Point{0.7, -0.2}) < 1e-9);
    }
    auto ell = ellipse_2_1();
    Point c0 = center_of_curvature(ell, 0.0);
    CHECK(c0.x == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(std::abs(c0.y) < 1e-9);
    Point c1 = center_of_curvature(ell, kPi / 2);
    CHECK(std::abs(c1.x) < 1e-9);
    CHECK(c1.y == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("normal count on reference domains") {
    auto r4 = normal_count(ellipse_2_1(), {0, 0});
    CHECK(r4.count == 4);
    CHECK(static_cast<int>(r4.roots.size()) == r4.count);
    CHECK_FALSE(r4.tangency_warning);

    auto r12 = normal_count(flower6(), {0, 0});
    CHECK(r12.count == 12);

    auto r2 = normal_count(ellipse_2_1(), {1.9, 0.0});
    CHECK(r2.count == 2);

    CHECK_THROWS_AS(normal_count(unit_circle(), {0, 0}), DegenerateError);
    CHECK_THROWS_AS(normal_count(ellipse_2_1(), {5.0, 0.0}),
                    PreconditionError);
}

TEST_CASE("normal count is even and rigid-motion invariant") {
    std::mt19937_64 rng(31);
    auto ell = ellipse_2_1();
    for (int trial = 0; trial < 12; ++trial) {
        Point probe{rnd::uniform(rng, -1.2, 1.2),
                    rnd::uniform(rng, -0.6, 0.6)};
        if (!ell.contains(probe)) continue;
        int c0;
        try {
            c0 = normal_count(ell, probe).count;
        } catch (const DegenerateError&) {
            continue;
        }
        CHECK(c0 % 2 == 0);
        double t = rnd::uniform(rng, 0.0, 2 * kPi);
        Point d{rnd::uniform(rng, -3.0, 3.0), rnd::uniform(rng, -3.0, 3.0)};
        auto moved = moved_direct(ell, t, d);
        CHECK(normal_count(moved, moved_point(probe, t, d)).count == c0);
    }
    // scaling invariance
    auto big = BoundaryCurve::direct({0, 0}, {{1, 7.5 * 1.5, 0.0},
                                              {-1, 7.5 * 0.5, 0.0}});
    CHECK(normal_count(big, {0, 0}).count == 4);
}

TEST_CASE("g equals half the derivative of squared distance") {
    auto curve = flower6();
    Point probe{0.2, -0.1};
    const int n = 512;
    for (int i = 0; i < n; ++i) {
        double phi = 2 * kPi * i / n;
        double g = dot(curve.eval(phi) - probe, curve.derivative(phi));
        double h = 1e-6;
        auto d2 = [&](double p) {
            Point z = curve.eval(p) - probe;
            return dot(z, z);
        };
        double fd = (d2(phi + h) - d2(phi - h)) / (2 * h);
        CHECK(std::abs(2 * g - fd) <= 1e-8 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("roots about the center pair antipodally on symmetric curves") {
    for (auto curve : {ellipse_2_1(), flower6()}) {
        auto rep = normal_count(curve, curve.center());
        REQUIRE(rep.count % 2 == 0);
        for (double r : rep.roots) {
            double partner = r + kPi;
            if (partner >= 2 * kPi) partner -= 2 * kPi;
            double best = 1e9;
            for (double r2 : rep.roots) {
                double d = std::abs(r2 - partner);
                d = std::min(d, 2 * kPi - d);
                best = std::min(best, d);
            }
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("average normal count") {
    // circle: every off-center probe sees exactly two normals
    auto avg = average_normal_count(unit_circle(), 200, 42);
    CHECK(avg.mean == 2.0);
    CHECK(avg.samples_used == 200);

    auto ell = average_normal_count(ellipse_2_1(), 400, 7);
    CHECK(ell.mean >= 2.0);
    CHECK(ell.mean <= 8.0);

    // the flower with amplitude 0.05 is not convex
    CHECK_THROWS_AS(average_normal_count(flower6(0.05), 200, 1),
                    ConvexityError);
    // a gentler flower is convex and stays under the average bound even
    // though the count at the center is 12
    auto gentle = flower6(0.02);
    CHECK(normal_count(gentle, {0, 0}).count == 12);
    auto bound = average_normal_count(gentle, 400, 5);
    CHECK(bound.mean <= 8.0);

    CHECK_THROWS_AS(average_normal_count(unit_circle(), 50, 1),
                    PreconditionError);
}

TEST_CASE("central symmetry check") {
    CHECK(check_central_symmetry(ellipse_2_1()));
    CHECK(check_central_symmetry(flower6()));
    CHECK_FALSE(check_central_symmetry(
        BoundaryCurve::polar({0, 0}, 1.0, {{3, 0.1, 0.0}})));
    // symmetric about a center away from the origin
    CHECK(check_central_symmetry(
        BoundaryCurve::polar({2.0, -1.0}, 1.0, {{2, 0.1, 0.04}})));
}

TEST_CASE("containment and bounding box") {
    auto ell = ellipse_2_1();
    CHECK(ell.contains({0, 0}));
    CHECK(ell.contains({1.9, 0.0}));
    CHECK_FALSE(ell.contains({0.0, 1.1}));
    Point lo, hi;
    ell.bounding_box(lo, hi);
    CHECK(lo.x == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(hi.y == doctest::Approx(1.0).epsilon(1e-6));
}

} // TEST_SUITE

