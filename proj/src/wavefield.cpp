#include "schiffer/wavefield.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "schiffer/specfun.hpp"

namespace schiffer::wavefield {

WaveField::WaveField(double k, Point origin, std::vector<double> alpha,
                     std::vector<double> beta)
    : k_(k), origin_(origin), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (!(k_ > 0.0)) throw ValidationError("wave number must be positive");
    if (alpha_.empty() || alpha_.size() != beta_.size())
        throw ValidationError("coefficient arrays must be nonempty and equal");
    if (beta_[0] != 0.0)
        throw ValidationError("beta_0 multiplies sin(0) and must be zero");
}

WaveField WaveField::single(double k, Point origin, int n, double alpha,
                            double beta) {
    std::vector<double> a(n + 1, 0.0), b(n + 1, 0.0);
    a[n] = alpha;
    if (n > 0) b[n] = beta;
    return WaveField(k, origin, std::move(a), std::move(b));
}

double WaveField::coeff_norm() const {
    double s = 0.0;
    for (double v : alpha_) s += v * v;
    for (double v : beta_) s += v * v;
    return std::sqrt(s);
}

WaveField WaveField::truncated(int new_order) const {
    std::vector<double> a(new_order + 1, 0.0), b(new_order + 1, 0.0);
    for (int n = 0; n <= std::min(new_order, max_order()); ++n) {
        a[n] = alpha_[n];
        b[n] = beta_[n];
    }
    return WaveField(k_, origin_, std::move(a), std::move(b));
}

double WaveField::eval(Point p) const {
    const int N = max_order();
    double dx = p.x - origin_.x, dy = p.y - origin_.y;
    double r = std::hypot(dx, dy);
    if (k_ * r > 500.0)
        throw RangeError("evaluation point beyond trusted radius 500/k");
    if (r < 1e-12 * std::max(1.0, 1.0 / k_)) return alpha_[0];

    auto j = specfun::bessel_j_all(N, k_ * r);
    double ct = dx / r, st = dy / r;
    double cn = 1.0, sn = 0.0; // cos/sin of n*theta via angle addition
    double sum = alpha_[0] * j[0];
    for (int n = 1; n <= N; ++n) {
        double c = cn * ct - sn * st;
        double s = sn * ct + cn * st;
        cn = c;
        sn = s;
        sum += j[n] * (alpha_[n] * cn + beta_[n] * sn);
    }
    return sum;
}

Point WaveField::grad(Point p) const {
    const int N = max_order();
    double dx = p.x - origin_.x, dy = p.y - origin_.y;
    double r = std::hypot(dx, dy);
    if (k_ * r > 500.0)
        throw RangeError("evaluation point beyond trusted radius 500/k");
    if (r < 1e-12 * std::max(1.0, 1.0 / k_)) {
        // only the n = 1 modes carry a gradient at the origin
        if (N < 1) return {0.0, 0.0};
        return {0.5 * k_ * alpha_[1], 0.5 * k_ * beta_[1]};
    }

    auto j = specfun::bessel_j_all(N + 1, k_ * r);
    double ct = dx / r, st = dy / r;
    double cn = 1.0, sn = 0.0;
    // radial and transverse components of the gradient
    double ur = k_ * (-j[1]) * alpha_[0];
    double ut = 0.0;
    for (int n = 1; n <= N; ++n) {
        double c = cn * ct - sn * st;
        double s = sn * ct + cn * st;
        cn = c;
        sn = s;
        double jp = 0.5 * (j[n - 1] - j[n + 1]);
        ur += k_ * jp * (alpha_[n] * cn + beta_[n] * sn);
        ut += n * (j[n] / r) * (-alpha_[n] * sn + beta_[n] * cn);
    }
    return {ct * ur - st * ut, st * ur + ct * ut};
}

KillingField KillingField::constant(double a, double b) {
    if (a == 0.0 && b == 0.0)
        throw PreconditionError("constant Killing field must be nonzero");
    KillingField K;
    K.kind = Kind::constant;
    K.a = a;
    K.b = b;
    return K;
}

KillingField KillingField::rotation(Point p) {
    KillingField K;
    K.kind = Kind::rotation;
    K.p = p;
    return K;
}

Point KillingField::vector_at(Point x) const {
    if (kind == Kind::constant) return {a, b};
    return {-(x.y - p.y), x.x - p.x};
}

namespace {

// Action of a d/dx + b d/dy on the coefficients, done in the signed
// spectrum d_m of u = sum_m d_m J_m(kr) e^{i m theta}:
//   X (J_m e^{i m theta}) = (k/2) [ (a + i b) J_{m-1} e^{i (m-1) theta}
//                                  - (a - i b) J_{m+1} e^{i (m+1) theta} ]
// which follows from J_m' -+ (m/z) J_m = -+ J_{m+-1}.
WaveField apply_constant(const WaveField& f, double a, double b) {
    const int N = f.max_order();
    const int M = N + 1;
    using cd = std::complex<double>;
    std::vector<cd> d(2 * M + 1, cd(0.0, 0.0));
    auto at = [&](int m) -> cd& { return d[m + M]; };
    at(0) = cd(f.alpha()[0], 0.0);
    for (int n = 1; n <= N; ++n) {
        cd dn(0.5 * f.alpha()[n], -0.5 * f.beta()[n]);
        at(n) = dn;
        at(-n) = (n % 2 ? -1.0 : 1.0) * std::conj(dn);
    }

    cd w_plus(a, b), w_minus(a, -b);
    std::vector<cd> out(2 * M + 1, cd(0.0, 0.0));
    auto in_range = [&](int m) { return m >= -N && m <= N; };
    for (int m = -M; m <= M; ++m) {
        cd up = in_range(m + 1) ? d[m + 1 + M] : cd(0.0, 0.0);
        cd dn = in_range(m - 1) ? d[m - 1 + M] : cd(0.0, 0.0);
        out[m + M] = 0.5 * f.k() * (w_plus * up - w_minus * dn);
    }

    std::vector<double> alpha(M + 1, 0.0), beta(M + 1, 0.0);
    alpha[0] = out[M].real();
    for (int n = 1; n <= M; ++n) {
        alpha[n] = 2.0 * out[n + M].real();
        beta[n] = -2.0 * out[n + M].imag();
    }
    beta[0] = 0.0;
    return WaveField(f.k(), f.origin(), std::move(alpha), std::move(beta));
}

// Rotation about the expansion origin is diagonal in the basis:
// d/dtheta maps (alpha_n, beta_n) to (n beta_n, -n alpha_n).
WaveField apply_rotation_origin(const WaveField& f) {
    const int N = f.max_order();
    std::vector<double> alpha(N + 1, 0.0), beta(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) {
        alpha[n] = n * f.beta()[n];
        beta[n] = -n * f.alpha()[n];
    }
    return WaveField(f.k(), f.origin(), std::move(alpha), std::move(beta));
}

} // namespace

WaveField apply_killing(const WaveField& f, const KillingField& K) {
    if (K.kind == KillingField::Kind::constant)
        return apply_constant(f, K.a, K.b);
    // rotation about p = rotation about the origin plus the constant
    // field (p_y - o_y, o_x - p_x)
    WaveField rot = apply_rotation_origin(f);
    double ca = K.p.y - f.origin().y;
    double cb = f.origin().x - K.p.x;
    if (ca == 0.0 && cb == 0.0) return rot;
    WaveField shift = apply_constant(f, ca, cb);
    std::vector<double> alpha = shift.alpha(), beta = shift.beta();
    for (int n = 0; n <= rot.max_order(); ++n) {
        alpha[n] += rot.alpha()[n];
        beta[n] += rot.beta()[n];
    }
    return WaveField(f.k(), f.origin(), std::move(alpha), std::move(beta));
}

double laplacian_residual(const WaveField& f, Point p) {
    double h = 1e-4 * std::max(1.0, 1.0 / f.k());
    double lap = (f.eval({p.x + h, p.y}) + f.eval({p.x - h, p.y}) +
                  f.eval({p.x, p.y + h}) + f.eval({p.x, p.y - h}) -
                  4.0 * f.eval(p)) /
                 (h * h);
    return lap + f.k() * f.k() * f.eval(p);
}

TaylorJet taylor_jet(const WaveField& f, Point base, double frame_angle) {
    constexpr int kHalf = 4;       // 9 x 9 stencil
    constexpr double kRadius = 1e-2;
    // Fit through degree 6 on the stencil but report degree <= 4; the two
    // padding degrees absorb the truncation tail that would otherwise
    // alias into the reported coefficients.
    constexpr int kFitDeg = 6;

    struct Mono {
        int i, j;
    };
    std::vector<Mono> monos;
    for (int d = 0; d <= kFitDeg; ++d)
        for (int i = d; i >= 0; --i) monos.push_back({i, d - i});

    const int rows = (2 * kHalf + 1) * (2 * kHalf + 1);
    Eigen::MatrixXd A(rows, static_cast<int>(monos.size()));
    Eigen::VectorXd rhs(rows);
    double cg = std::cos(frame_angle), sg = std::sin(frame_angle);
    int row = 0;
    for (int iy = -kHalf; iy <= kHalf; ++iy) {
        for (int ix = -kHalf; ix <= kHalf; ++ix) {
            double tx = double(ix) / kHalf; // in [-1, 1]
            double ty = double(iy) / kHalf;
            double xi = kRadius * tx, eta = kRadius * ty;
            Point p{base.x + cg * xi - sg * eta, base.y + sg * xi + cg * eta};
            rhs(row) = f.eval(p);
            for (size_t c = 0; c < monos.size(); ++c)
                A(row, static_cast<int>(c)) =
                    std::pow(tx, monos[c].i) * std::pow(ty, monos[c].j);
            ++row;
        }
    }
    Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);

    TaylorJet jet;
    jet.base = base;
    jet.frame_angle = frame_angle;
    // undo the [-1, 1] scaling: the coefficient of xi^i eta^j is the
    // fitted one divided by radius^{i+j}
    for (size_t c = 0; c < monos.size(); ++c) {
        int i = monos[c].i, j = monos[c].j;
        if (i + j <= 4)
            jet.w[i][j] =
                sol(static_cast<int>(c)) / std::pow(kRadius, i + j);
    }
    return jet;
}

double harmonic_consistency_residual(const TaylorJet& jet, double k) {
    double lhs = 2.0 * jet.w[2][0] + 2.0 * jet.w[0][2] + k * k * jet.w[0][0];
    double scale = std::max(std::abs(k * k * jet.w[0][0]), 1e-300);
    return std::abs(lhs) / scale;
}

} // namespace schiffer::wavefield
