#include "schiffer/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "schiffer/detail/rand.hpp"

namespace schiffer::verify {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kEps = 1e-300;

void require_accepted(const WaveField& u, const BoundaryCurve& curve,
                      int samples) {
    double d = schiffer_defect(u, curve, samples);
    if (!(d < 1e-6))
        throw PreconditionError(
            "field is not an accepted constant-boundary solution "
            "(defect >= 1e-6)");
}

} // namespace

BoundaryTrace make_trace(std::shared_ptr<const ArcLengthTable> table,
                         std::vector<double> values, std::string label) {
    if (!table) throw PreconditionError("trace needs a table");
    if (static_cast<int>(values.size()) != table->n + 1)
        throw PreconditionError("trace length must be table n + 1");
    return {std::move(table), std::move(values), std::move(label)};
}

double schiffer_defect(const WaveField& u, const BoundaryCurve& curve,
                       int samples) {
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        double phi = kTwoPi * i / samples;
        geom2d::Point z = curve.eval(phi);
        double dn = dot(u.grad(z), curve.outward_normal(phi));
        double dv = u.eval(z) - 1.0;
        sum += dn * dn + dv * dv;
    }
    return std::sqrt(sum / (2.0 * samples));
}

BoundaryTrace normal_derivative_trace(const WaveField& u,
                                      const BoundaryCurve& curve,
                                      int samples, std::string label) {
    auto table = std::make_shared<ArcLengthTable>(
        geom2d::build_arclength_table(curve, samples));
    std::vector<double> vals(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        double phi = table->phi[i];
        vals[i] = dot(u.grad(curve.eval(phi)), curve.outward_normal(phi));
    }
    return make_trace(std::move(table), std::move(vals), std::move(label));
}

double boundary_second_derivative_check(const WaveField& u,
                                        const BoundaryCurve& curve,
                                        int samples) {
    require_accepted(u, curve, samples);

    auto dx = wavefield::KillingField::constant(1.0, 0.0);
    auto dy = wavefield::KillingField::constant(0.0, 1.0);
    WaveField ux = apply_killing(u, dx);
    WaveField uy = apply_killing(u, dy);
    WaveField uxx = apply_killing(ux, dx);
    WaveField uxy = apply_killing(ux, dy);
    WaveField uyy = apply_killing(uy, dy);

    auto table = geom2d::build_arclength_table(curve, samples);
    const double mu = u.k() * u.k();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        geom2d::Point z = curve.eval(table.phi[i]);
        double c2 = std::cos(2.0 * table.theta[i]);
        double s2 = std::sin(2.0 * table.theta[i]);
        double muu = mu * u.eval(z);
        // The gradient vanishes on the boundary, so the Hessian there is
        // (Delta u) nu nu^T = -mu u nu nu^T with nu = (sin th, -cos th).
        worst = std::max(worst,
                         std::abs(uxx.eval(z) + 0.5 * (1.0 - c2) * muu));
        worst = std::max(worst, std::abs(uxy.eval(z) - 0.5 * s2 * muu));
        worst = std::max(worst,
                         std::abs(uyy.eval(z) + 0.5 * (1.0 + c2) * muu));
    }
    return worst;
}

std::array<double, 3> vanishing_integrals(const WaveField& u,
                                          const BoundaryCurve& curve,
                                          const KillingField& K,
                                          int samples) {
    if (samples < 1024)
        throw PreconditionError("vanishing integrals need >= 1024 samples");
    require_accepted(u, curve, samples);

    WaveField xu = apply_killing(u, K);
    // A Killing derivative whose coefficients are negligible next to the
    // base field (rotation about the symmetry axis of a radial solution)
    // makes all three identities trivial; report exact zeros instead of
    // dividing noise by noise.
    if (xu.coeff_norm() <=
        1e-12 * (1.0 + u.k()) * (1.0 + curve.scale()) * u.coeff_norm())
        return {0.0, 0.0, 0.0};
    auto table = geom2d::build_arclength_table(curve, samples);
    double i1 = 0.0, i2 = 0.0, i3 = 0.0, den = 0.0;
    const double h = kTwoPi / samples;
    for (int i = 0; i < samples; ++i) {
        geom2d::Point z = curve.eval(table.phi[i]);
        double dn = dot(xu.grad(z), curve.outward_normal(table.phi[i]));
        double w = table.speed[i] * h;
        i1 += dn * w;
        i2 += dn * std::sin(2.0 * table.theta[i]) * w;
        i3 += dn * std::cos(2.0 * table.theta[i]) * w;
        den += std::abs(dn) * w;
    }
    den += kEps;
    return {std::abs(i1) / den, std::abs(i2) / den, std::abs(i3) / den};
}

HarmonicCoeffs tangent_harmonic_coeffs(const BoundaryTrace& trace,
                                       int m_max) {
    const auto& t = *trace.table;
    if (m_max < 0 || m_max > t.n / 8)
        throw PreconditionError("m_max must be at most table n / 8");
    HarmonicCoeffs out;
    out.m_max = m_max;
    out.c.assign(m_max + 1, 0.0);
    out.s.assign(m_max + 1, 0.0);
    const double h = kTwoPi / t.n;
    for (int i = 0; i < t.n; ++i) {
        double w = trace.values[i] * t.speed[i] * h;
        for (int m = 0; m <= m_max; ++m) {
            out.c[m] += w * std::cos(m * t.theta[i]);
            out.s[m] += w * std::sin(m * t.theta[i]);
        }
    }
    return out;
}

int sign_changes(const std::vector<double>& values, double noise_floor,
                 bool cyclic) {
    std::vector<int> signs;
    signs.reserve(values.size());
    for (double v : values) {
        if (std::abs(v) <= noise_floor || v == 0.0) continue;
        signs.push_back(v > 0.0 ? 1 : -1);
    }
    if (signs.empty())
        throw AllBelowFloorError("every sample is below the noise floor");
    int count = 0;
    const int n = static_cast<int>(signs.size());
    const int last = cyclic ? n : n - 1;
    for (int i = 0; i < last; ++i)
        if (signs[i] != signs[(i + 1) % n]) ++count;
    return count;
}

int sign_changes(const BoundaryTrace& trace, double noise_floor) {
    // drop the closing duplicate sample for the cyclic count
    std::vector<double> vals(trace.values.begin(), trace.values.end() - 1);
    if (noise_floor < 0.0) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::abs(v));
        noise_floor = 1e-9 * m;
    }
    return sign_changes(vals, noise_floor, true);
}

SturmReport sturm_bound_check(int m_low, int trials, std::uint64_t seed) {
    if (m_low < 1) throw PreconditionError("m_low must be >= 1");
    if (trials < 1) throw PreconditionError("trials must be >= 1");

    std::mt19937_64 rng(seed);
    const int grid = 4096;
    SturmReport rep;
    rep.trials = trials;
    rep.bound = 2 * m_low;
    rep.min_count = std::numeric_limits<int>::max();
    std::vector<double> vals(grid);
    for (int t = 0; t < trials; ++t) {
        double a[5], b[5];
        for (int j = 0; j < 5; ++j) {
            a[j] = detail::gaussian(rng);
            b[j] = detail::gaussian(rng);
        }
        double mx = 0.0;
        for (int i = 0; i < grid; ++i) {
            double th = kTwoPi * i / grid;
            double f = 0.0;
            for (int j = 0; j < 5; ++j) {
                int m = m_low + j;
                f += a[j] * std::cos(m * th) + b[j] * std::sin(m * th);
            }
            vals[i] = f;
            mx = std::max(mx, std::abs(f));
        }
        int count = sign_changes(vals, 1e-9 * mx, true);
        rep.min_count = std::min(rep.min_count, count);
    }
    rep.pass = rep.min_count >= rep.bound;
    return rep;
}

double iota_symmetry_defect(const WaveField& u, const BoundaryCurve& curve,
                            int grid) {
    if (!geom2d::check_central_symmetry(curve))
        throw PreconditionError("curve is not centrally symmetric");
    geom2d::Point lo, hi, c = curve.center();
    curve.bounding_box(lo, hi);
    double worst = 0.0, umax = 0.0;
    for (int iy = 0; iy < grid; ++iy) {
        for (int ix = 0; ix < grid; ++ix) {
            geom2d::Point p{lo.x + (hi.x - lo.x) * (ix + 0.5) / grid,
                            lo.y + (hi.y - lo.y) * (iy + 0.5) / grid};
            if (!curve.contains(p)) continue;
            geom2d::Point q{2.0 * c.x - p.x, 2.0 * c.y - p.y};
            if (!curve.contains(q)) continue;
            double up = u.eval(p);
            umax = std::max(umax, std::abs(up));
            worst = std::max(worst, std::abs(u.eval(q) - up));
        }
    }
    return worst / (umax + kEps);
}

double green_symmetry_residual(const WaveField& f, const WaveField& g,
                               const BoundaryCurve& curve, int samples) {
    if (std::abs(f.k() - g.k()) > 1e-12 * std::max(f.k(), g.k()))
        throw PreconditionError("green symmetry needs equal wave numbers");
    double num = 0.0, den = 0.0;
    const double h = kTwoPi / samples;
    for (int i = 0; i < samples; ++i) {
        double phi = kTwoPi * i / samples;
        geom2d::Point z = curve.eval(phi);
        geom2d::Point nu = curve.outward_normal(phi);
        double w = curve.speed(phi) * h;
        double fn = dot(f.grad(z), nu), gn = dot(g.grad(z), nu);
        double fv = f.eval(z), gv = g.eval(z);
        num += (fn * gv - fv * gn) * w;
        den += (std::abs(fn * gv) + std::abs(fv * gn)) * w;
    }
    return std::abs(num) / (den + kEps);
}

} // namespace schiffer::verify
