#include "schiffer/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "schiffer/detail/rand.hpp"
#include "schiffer/specfun.hpp"

namespace schiffer::helmholtz {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

struct Mode {
    int n;
    bool is_sin;
};

std::vector<Mode> make_modes(int order, bool even_only) {
    std::vector<Mode> modes;
    for (int n = 0; n <= order; ++n) {
        if (even_only && n % 2) continue;
        modes.push_back({n, false});
        if (n > 0) modes.push_back({n, true});
    }
    return modes;
}

// Geometry shared across every k of a scan: boundary collocation points
// with normals, a finer validation grid, and deterministic interior
// points drawn along rays from the center so they move rigidly with the
// domain.
struct Collocation {
    Point center;
    std::vector<Point> bd_points, bd_normals;
    std::vector<Point> interior;
    std::vector<Point> val_points, val_normals;
};

Collocation make_collocation(const BoundaryCurve& curve, int order,
                             std::uint64_t seed, int oversample) {
    if (oversample < 1 || oversample > 16)
        throw PreconditionError("oversample outside 1..16");
    Collocation c;
    c.center = curve.center();
    const int M = oversample * (4 * order + 16);
    c.bd_points.reserve(M);
    c.bd_normals.reserve(M);
    for (int j = 0; j < M; ++j) {
        double phi = kTwoPi * j / M;
        c.bd_points.push_back(curve.eval(phi));
        c.bd_normals.push_back(curve.outward_normal(phi));
    }
    for (int j = 0; j < 2 * M; ++j) {
        double phi = kTwoPi * (j + 0.5) / (2 * M);
        c.val_points.push_back(curve.eval(phi));
        c.val_normals.push_back(curve.outward_normal(phi));
    }
    std::mt19937_64 rng(seed);
    const int MI = std::max(M / 4, 4);
    int guard = 0;
    while (static_cast<int>(c.interior.size()) < MI && guard < 100000) {
        ++guard;
        double phi = detail::uniform(rng, 0.0, kTwoPi);
        double t = 0.15 + 0.75 * detail::uniform01(rng);
        Point z = curve.eval(phi);
        Point p{c.center.x + t * (z.x - c.center.x),
                c.center.y + t * (z.y - c.center.y)};
        if (curve.contains(p)) c.interior.push_back(p);
    }
    if (static_cast<int>(c.interior.size()) < MI)
        throw PreconditionError("could not place interior sample points");
    return c;
}

// Value and gradient of basis mode (n, cos/sin) at p, relative to the
// expansion center. j must hold J_0..J_{n+1}(k r).
void mode_value_grad(const Mode& m, double k, Point rel, double r,
                     const std::vector<double>& j, double& value,
                     Point& grad) {
    double ct = 1.0, st = 0.0;
    if (r > 0.0) {
        ct = rel.x / r;
        st = rel.y / r;
    }
    // cos/sin of n*theta by angle addition
    double cn = 1.0, sn = 0.0;
    for (int i = 1; i <= m.n; ++i) {
        double c2 = cn * ct - sn * st;
        double s2 = sn * ct + cn * st;
        cn = c2;
        sn = s2;
    }
    double trig = m.is_sin ? sn : cn;
    double dtrig = m.is_sin ? cn : -sn; // d/dtheta / n
    value = j[m.n] * trig;
    double jp = m.n == 0 ? -j[1] : 0.5 * (j[m.n - 1] - j[m.n + 1]);
    double ur = k * jp * trig;
    double ut = r > 0.0 ? m.n * (j[m.n] / r) * dtrig : 0.0;
    grad = {ct * ur - st * ut, st * ur + ct * ut};
}

Eigen::MatrixXd neumann_block(const Collocation& c,
                              const std::vector<Point>& pts,
                              const std::vector<Point>& normals,
                              const std::vector<Mode>& modes, double k,
                              int order) {
    Eigen::MatrixXd B(pts.size(), modes.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        Point rel = pts[i] - c.center;
        double r = geom2d::norm(rel);
        auto j = specfun::bessel_j_all(order + 1, k * r);
        for (size_t m = 0; m < modes.size(); ++m) {
            double v;
            Point g;
            mode_value_grad(modes[m], k, rel, r, j, v, g);
            B(i, m) = dot(g, normals[i]);
        }
    }
    return B;
}

Eigen::MatrixXd value_block(const Collocation& c,
                            const std::vector<Point>& pts,
                            const std::vector<Mode>& modes, double k,
                            int order) {
    Eigen::MatrixXd V(pts.size(), modes.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        Point rel = pts[i] - c.center;
        double r = geom2d::norm(rel);
        auto j = specfun::bessel_j_all(order + 1, k * r);
        for (size_t m = 0; m < modes.size(); ++m) {
            double v;
            Point g;
            mode_value_grad(modes[m], k, rel, r, j, v, g);
            V(i, m) = v;
        }
    }
    return V;
}

WaveField field_from_coeffs(const BoundaryCurve& curve, double k,
                            const std::vector<Mode>& modes,
                            const Eigen::VectorXd& coeff, int order) {
    std::vector<double> alpha(order + 1, 0.0), beta(order + 1, 0.0);
    for (size_t m = 0; m < modes.size(); ++m) {
        if (modes[m].is_sin)
            beta[modes[m].n] = coeff(m);
        else
            alpha[modes[m].n] = coeff(m);
    }
    return WaveField(k, curve.center(), std::move(alpha), std::move(beta));
}

struct SigmaCore {
    double sigma;
    bool ill_conditioned;
    Eigen::VectorXd coeff; // unit-norm basis coefficients of the dip field
};

SigmaCore sigma_core(const Collocation& c, const std::vector<Mode>& modes,
                     double k, int order, bool want_field) {
    Eigen::MatrixXd B = neumann_block(c, c.bd_points, c.bd_normals, modes, k,
                                      order);
    Eigen::MatrixXd I = value_block(c, c.interior, modes, k, order);
    const int rows = static_cast<int>(B.rows() + I.rows());
    const int cols = static_cast<int>(modes.size());

    Eigen::MatrixXd S(rows, cols);
    S.topRows(B.rows()) = B;
    S.bottomRows(I.rows()) = I;

    double nmin = std::numeric_limits<double>::max(), nmax = 0.0;
    for (int m = 0; m < cols; ++m) {
        double cn = S.col(m).norm();
        if (cn > 0.0) {
            nmin = std::min(nmin, cn);
            nmax = std::max(nmax, cn);
        }
        double in = I.col(m).norm();
        double scale = in > 0.0 ? in : (cn > 0.0 ? cn : 1.0);
        S.col(m) /= scale;
    }
    bool ill = nmax > 0.0 && nmax / nmin > 1e14;

    // Orthonormalize over all rows, then measure how small the boundary
    // part of a unit combination can get. Interior rows keep the
    // combination nontrivial inside, which suppresses spurious
    // near-zero fields.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(S);
    Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        Q.topRows(B.rows()),
        want_field ? Eigen::ComputeThinU | Eigen::ComputeThinV : 0);
    SigmaCore out;
    out.sigma = svd.singularValues()(cols - 1);
    out.ill_conditioned = ill;
    if (want_field) {
        Eigen::VectorXd y = svd.matrixV().col(cols - 1);
        Eigen::MatrixXd R = qr.matrixQR().topRows(cols);
        Eigen::VectorXd z = R.triangularView<Eigen::Upper>().solve(y);
        // undo the column scaling
        for (int m = 0; m < cols; ++m) {
            double in = I.col(m).norm();
            double cn = std::sqrt(B.col(m).squaredNorm() +
                                  I.col(m).squaredNorm());
            double scale = in > 0.0 ? in : (cn > 0.0 ? cn : 1.0);
            z(m) /= scale;
        }
        out.coeff = z / z.norm();
    }
    return out;
}

bool use_even_only(const BoundaryCurve& curve, const CollocationOptions& o,
                   bool schiffer_context) {
    switch (o.basis) {
        case BasisMode::full:
            return false;
        case BasisMode::even_only:
            return true;
        case BasisMode::automatic:
            // The even-order reduction is justified by the symmetry of
            // solutions of the constant-boundary problem; eigenfunctions
            // in general have no such symmetry, so the scan keeps the
            // full basis.
            return schiffer_context && geom2d::check_central_symmetry(curve);
    }
    return false;
}

} // namespace

SigmaMinResult sigma_min(const BoundaryCurve& curve, double k, int order,
                         const CollocationOptions& opts) {
    if (!(k > 0.0)) throw PreconditionError("sigma_min needs k > 0");
    if (order < 1 || order > 64)
        throw PreconditionError("expansion order outside 1..64");
    auto modes = make_modes(order, use_even_only(curve, opts, false));
    auto c = make_collocation(curve, order, opts.seed, opts.oversample);
    auto core = sigma_core(c, modes, k, order, false);
    return {core.sigma, core.ill_conditioned};
}

namespace {

EigenResult eigen_solve_at(const BoundaryCurve& curve, const Collocation& c,
                           const std::vector<Mode>& modes, double k,
                           int order) {
    auto core = sigma_core(c, modes, k, order, true);
    WaveField field = field_from_coeffs(curve, k, modes, core.coeff, order);
    double worst = 0.0;
    for (size_t i = 0; i < c.val_points.size(); ++i) {
        Point g = field.grad(c.val_points[i]);
        worst = std::max(worst, std::abs(dot(g, c.val_normals[i])));
    }
    return {k, k * k, core.sigma, worst, core.ill_conditioned,
            std::move(field)};
}

} // namespace

std::vector<EigenResult> scan_neumann_eigs(const BoundaryCurve& curve,
                                           double k_min, double k_max,
                                           double step, int order,
                                           const CollocationOptions& opts) {
    if (!(0.0 < k_min && k_min < k_max))
        throw PreconditionError("need 0 < k_min < k_max");
    if (!(step > 0.0) || step > 0.01 * (k_max - k_min))
        throw PreconditionError("scan step must be positive and at most "
                                "1% of the window");
    if (order < 1 || order > 64)
        throw PreconditionError("expansion order outside 1..64");

    auto modes = make_modes(order, use_even_only(curve, opts, false));
    auto c = make_collocation(curve, order, opts.seed, opts.oversample);
    auto sigma_at = [&](double k) {
        return sigma_core(c, modes, k, order, false).sigma;
    };

    std::vector<double> ks, sig;
    for (double k = k_min; k <= k_max + 0.5 * step; k += step) {
        ks.push_back(std::min(k, k_max));
        sig.push_back(sigma_at(ks.back()));
    }

    std::vector<EigenResult> out;
    const double golden = 0.6180339887498949;
    for (size_t i = 1; i + 1 < ks.size(); ++i) {
        if (!(sig[i] < sig[i - 1] && sig[i] <= sig[i + 1])) continue;
        double a = ks[i - 1], b = ks[i + 1];
        double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
        double f1 = sigma_at(x1), f2 = sigma_at(x2);
        while (b - a > 1e-9) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - golden * (b - a);
                f1 = sigma_at(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + golden * (b - a);
                f2 = sigma_at(x2);
            }
        }
        double k_star = 0.5 * (a + b);
        double s = sigma_at(k_star);
        if (s >= opts.eigen_threshold) continue;
        if (!out.empty() && std::abs(out.back().k_star - k_star) < 1e-7)
            continue;
        out.push_back(eigen_solve_at(curve, c, modes, k_star, order));
    }
    return out;
}

SchifferResult schiffer_residual(const BoundaryCurve& curve, double k,
                                 int order, const CollocationOptions& opts) {
    if (!(k > 0.0)) throw PreconditionError("schiffer_residual needs k > 0");
    if (order < 1 || order > 64)
        throw PreconditionError("expansion order outside 1..64");

    auto modes = make_modes(order, use_even_only(curve, opts, true));
    auto c = make_collocation(curve, order, opts.seed, opts.oversample);
    const int M = static_cast<int>(c.bd_points.size());
    const int cols = static_cast<int>(modes.size());

    Eigen::MatrixXd A(2 * M, cols);
    A.topRows(M) = neumann_block(c, c.bd_points, c.bd_normals, modes, k, order);
    A.bottomRows(M) = value_block(c, c.bd_points, modes, k, order);
    Eigen::VectorXd b(2 * M);
    b.head(M).setZero();
    b.tail(M).setOnes();

    Eigen::VectorXd colscale(cols);
    double nmin = std::numeric_limits<double>::max(), nmax = 0.0;
    for (int m = 0; m < cols; ++m) {
        double cn = A.col(m).norm();
        if (cn > 0.0) {
            nmin = std::min(nmin, cn);
            nmax = std::max(nmax, cn);
        }
        colscale(m) = cn > 0.0 ? cn : 1.0;
        A.col(m) /= colscale(m);
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU |
                                              Eigen::ComputeThinV);
    Eigen::VectorXd z = svd.solve(b);
    double defect = (A * z - b).norm() / std::sqrt(2.0 * M);
    for (int m = 0; m < cols; ++m) z(m) /= colscale(m);

    return {k, defect, nmax > 0.0 && nmax / nmin > 1e14,
            field_from_coeffs(curve, k, modes, z, order)};
}

std::string to_string(Conclusion c) {
    switch (c) {
        case Conclusion::theorem_applies:
            return "theorem_applies";
        case Conclusion::hypothesis_fails:
            return "hypothesis_fails";
        case Conclusion::degenerate:
            return "degenerate";
    }
    return "unknown";
}

CertificateReport certificate(const BoundaryCurve& curve,
                              const std::string& domain_id) {
    CertificateReport rep;
    rep.domain_id = domain_id;
    rep.centrally_symmetric = geom2d::check_central_symmetry(curve);
    try {
        auto nc = geom2d::normal_count(curve, curve.center());
        rep.tau_count = nc.count;
    } catch (const DegenerateError&) {
        rep.degenerate = true;
    }
    if (rep.degenerate)
        rep.conclusion = Conclusion::degenerate;
    else if (rep.centrally_symmetric && *rep.tau_count < 8)
        rep.conclusion = Conclusion::theorem_applies;
    else
        rep.conclusion = Conclusion::hypothesis_fails;
    return rep;
}

} // namespace schiffer::helmholtz
