#include "schiffer/geom2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "schiffer/detail/rand.hpp"

namespace schiffer::geom2d {

namespace {

constexpr int kValidationGrid = 4096;
constexpr double kTwoPi = 6.283185307179586476925287;

double wrap_2pi(double phi) {
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
}

// Proper intersection test for segments ab and cd, counting touching
// configurations as intersections.
bool segments_intersect(Point a, Point b, Point c, Point d) {
    auto orient = [](Point p, Point q, Point r) {
        return cross(q - p, r - p);
    };
    double o1 = orient(a, b, c);
    double o2 = orient(a, b, d);
    double o3 = orient(c, d, a);
    double o4 = orient(c, d, b);
    if (((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) &&
        o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0)
        return true;
    auto on_segment = [](Point p, Point q, Point r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (o1 == 0.0 && on_segment(a, b, c)) return true;
    if (o2 == 0.0 && on_segment(a, b, d)) return true;
    if (o3 == 0.0 && on_segment(c, d, a)) return true;
    if (o4 == 0.0 && on_segment(c, d, b)) return true;
    return false;
}

} // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

double BoundaryCurve::polar_r(double phi) const {
    double r = r0_;
    for (const auto& t : terms_)
        r += t.a * std::cos(t.k * phi) + t.b * std::sin(t.k * phi);
    return r;
}

double BoundaryCurve::polar_rp(double phi) const {
    double r = 0.0;
    for (const auto& t : terms_)
        r += t.k * (-t.a * std::sin(t.k * phi) + t.b * std::cos(t.k * phi));
    return r;
}

double BoundaryCurve::polar_rpp(double phi) const {
    double r = 0.0;
    for (const auto& t : terms_)
        r -= double(t.k) * t.k *
             (t.a * std::cos(t.k * phi) + t.b * std::sin(t.k * phi));
    return r;
}

Point BoundaryCurve::eval(double phi) const {
    if (kind_ == CurveKind::polar) {
        double r = polar_r(phi);
        return {center_.x + r * std::cos(phi), center_.y + r * std::sin(phi)};
    }
    Point z = center_;
    for (const auto& t : terms_) {
        double c = std::cos(t.k * phi), s = std::sin(t.k * phi);
        z.x += t.a * c - t.b * s;
        z.y += t.a * s + t.b * c;
    }
    return z;
}

Point BoundaryCurve::derivative(double phi) const {
    if (kind_ == CurveKind::polar) {
        // z' = (r' + i r) e^{i phi} in complex form
        double r = polar_r(phi), rp = polar_rp(phi);
        double c = std::cos(phi), s = std::sin(phi);
        return {rp * c - r * s, rp * s + r * c};
    }
    Point z{0.0, 0.0};
    for (const auto& t : terms_) {
        // d/dphi (a + i b) e^{i k phi} = i k (a + i b) e^{i k phi}
        double c = std::cos(t.k * phi), s = std::sin(t.k * phi);
        z.x += t.k * (-t.a * s - t.b * c);
        z.y += t.k * (t.a * c - t.b * s);
    }
    return z;
}

Point BoundaryCurve::second_derivative(double phi) const {
    if (kind_ == CurveKind::polar) {
        // z'' = (r'' + 2 i r' - r) e^{i phi}
        double r = polar_r(phi), rp = polar_rp(phi), rpp = polar_rpp(phi);
        double c = std::cos(phi), s = std::sin(phi);
        double re = rpp - r, im = 2.0 * rp;
        return {re * c - im * s, re * s + im * c};
    }
    Point z{0.0, 0.0};
    for (const auto& t : terms_) {
        double k2 = double(t.k) * t.k;
        double c = std::cos(t.k * phi), s = std::sin(t.k * phi);
        z.x -= k2 * (t.a * c - t.b * s);
        z.y -= k2 * (t.a * s + t.b * c);
    }
    return z;
}

double BoundaryCurve::speed(double phi) const { return norm(derivative(phi)); }

Point BoundaryCurve::unit_tangent(double phi) const {
    Point d = derivative(phi);
    double v = norm(d);
    return {d.x / v, d.y / v};
}

Point BoundaryCurve::outward_normal(double phi) const {
    Point t = unit_tangent(phi);
    return {t.y, -t.x};
}

double BoundaryCurve::curvature(double phi) const {
    Point d = derivative(phi);
    Point dd = second_derivative(phi);
    double v = norm(d);
    return cross(d, dd) / (v * v * v);
}

BoundaryCurve::BoundaryCurve(CurveKind kind, Point center, double r0,
                             std::vector<FourierTerm> terms)
    : kind_(kind), center_(center), r0_(r0), terms_(std::move(terms)) {}

BoundaryCurve BoundaryCurve::polar(Point center, double r0,
                                   std::vector<FourierTerm> terms) {
    for (const auto& t : terms)
        if (t.k < 1)
            throw ValidationError("polar curve terms require k >= 1");
    BoundaryCurve c(CurveKind::polar, center, r0, std::move(terms));
    c.validate_and_cache();
    return c;
}

BoundaryCurve BoundaryCurve::direct(Point center,
                                    std::vector<FourierTerm> terms) {
    for (const auto& t : terms)
        if (t.k == 0)
            throw ValidationError("direct curve terms require k != 0");
    BoundaryCurve c(CurveKind::direct, center, 0.0, std::move(terms));
    c.validate_and_cache();
    return c;
}

void BoundaryCurve::validate_and_cache() {
    const int n = kValidationGrid;

    // Orientation first: a clockwise parametrization is reversed
    // (phi -> -phi) before anything is cached.
    double area2 = 0.0;
    Point prev = eval(0.0);
    for (int i = 1; i <= n; ++i) {
        Point p = eval(kTwoPi * i / n);
        area2 += cross(prev, p);
        prev = p;
    }
    if (area2 < 0.0) {
        if (kind_ == CurveKind::polar) {
            for (auto& t : terms_) t.b = -t.b;
        } else {
            for (auto& t : terms_) t.k = -t.k;
        }
    }

    grid_.resize(n);
    scale_ = 0.0;
    min_speed_ = std::numeric_limits<double>::max();
    double max_seg = 0.0;
    for (int i = 0; i < n; ++i) {
        double phi = kTwoPi * i / n;
        grid_[i] = eval(phi);
        scale_ = std::max(scale_, norm(grid_[i] - center_));
        min_speed_ = std::min(min_speed_, speed(phi));
        if (kind_ == CurveKind::polar && polar_r(phi) <= 0.0)
            throw ValidationError("polar radius is not positive");
    }
    for (int i = 0; i < n; ++i)
        max_seg = std::max(max_seg, norm(grid_[(i + 1) % n] - grid_[i]));
    if (!(min_speed_ > 1e-12 * std::max(1.0, scale_)))
        throw ValidationError("curve is not regular: |z'| reaches zero");

    // Simplicity of the inscribed 4096-gon, via a uniform spatial hash so
    // only nearby segment pairs are tested.
    Point lo{grid_[0]}, hi{grid_[0]};
    for (const auto& p : grid_) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    double cell = std::max(max_seg, 1e-12);
    auto cell_of = [&](double x, double y) {
        auto cx = static_cast<std::int64_t>(std::floor((x - lo.x) / cell));
        auto cy = static_cast<std::int64_t>(std::floor((y - lo.y) / cell));
        return (cx << 32) ^ (cy & 0xffffffff);
    };
    std::unordered_map<std::int64_t, std::vector<int>> buckets;
    for (int i = 0; i < n; ++i) {
        Point a = grid_[i], b = grid_[(i + 1) % n];
        double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
        double y0 = std::min(a.y, b.y), y1 = std::max(a.y, b.y);
        for (double x = x0; x <= x1 + cell; x += cell)
            for (double y = y0; y <= y1 + cell; y += cell)
                buckets[cell_of(x, y)].push_back(i);
    }
    for (auto& [key, segs] : buckets) {
        std::sort(segs.begin(), segs.end());
        segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
        for (size_t u = 0; u < segs.size(); ++u)
            for (size_t v = u + 1; v < segs.size(); ++v) {
                int i = segs[u], j = segs[v];
                int d = std::abs(i - j);
                if (d == 1 || d == n - 1) continue;
                if (segments_intersect(grid_[i], grid_[(i + 1) % n],
                                       grid_[j], grid_[(j + 1) % n]))
                    throw ValidationError("curve is not simple");
            }
    }
}

bool BoundaryCurve::contains(Point p) const {
    bool inside = false;
    const int n = static_cast<int>(grid_.size());
    for (int i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = grid_[i];
        const Point& b = grid_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

void BoundaryCurve::bounding_box(Point& lo, Point& hi) const {
    lo = hi = grid_[0];
    for (const auto& p : grid_) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
}

ArcLengthTable build_arclength_table(const BoundaryCurve& curve, int n) {
    if (n < 64) throw PreconditionError("arc-length table needs n >= 64");

    ArcLengthTable t;
    t.n = n;
    t.phi.resize(n + 1);
    t.s.resize(n + 1);
    t.theta.resize(n + 1);
    t.kappa.resize(n + 1);
    t.speed.resize(n + 1);

    for (int i = 0; i <= n; ++i) {
        double phi = kTwoPi * i / n;
        t.phi[i] = phi;
        t.speed[i] = curve.speed(phi);
        if (t.speed[i] < 1e-12)
            throw RegularityError("curve speed below 1e-12");
        t.kappa[i] = curve.curvature(phi);
        Point d = curve.derivative(phi);
        double raw = std::atan2(d.y, d.x);
        if (i == 0) {
            t.theta[0] = raw;
        } else {
            double delta = raw - t.theta[i - 1];
            delta = std::remainder(delta, kTwoPi);
            t.theta[i] = t.theta[i - 1] + delta;
        }
    }
    t.s[0] = 0.0;
    double h = kTwoPi / n;
    for (int i = 1; i <= n; ++i)
        t.s[i] = t.s[i - 1] + 0.5 * h * (t.speed[i - 1] + t.speed[i]);
    t.total_length = t.s[n];
    return t;
}

Point center_of_curvature(const BoundaryCurve& curve, double phi) {
    double kappa = curve.curvature(phi);
    if (std::abs(kappa) < 1e-12)
        throw FlatPointError("curvature vanishes: no center of curvature");
    Point nu_out = curve.outward_normal(phi);
    Point z = curve.eval(phi);
    return z - (1.0 / kappa) * nu_out;
}

namespace {

double normal_g(const BoundaryCurve& curve, Point probe, double phi) {
    return dot(curve.eval(phi) - probe, curve.derivative(phi));
}

struct ScanResult {
    std::vector<double> roots;
    bool tangency = false;
};

ScanResult scan_roots(const BoundaryCurve& curve, Point probe, int n,
                      double gscale) {
    ScanResult out;
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = normal_g(curve, probe, kTwoPi * i / n);

    // Deadbanded signs, so a root that lands exactly on a grid point shows
    // up as a zero run between samples of opposite sign.
    const double tiny = 1e-10 * gscale;
    std::vector<int> s(n);
    int first = -1;
    for (int i = 0; i < n; ++i) {
        s[i] = g[i] > tiny ? 1 : (g[i] < -tiny ? -1 : 0);
        if (first < 0 && s[i] != 0) first = i;
    }
    if (first < 0) return out; // caller's degeneracy guard covers this

    int i = first;
    do {
        int j = (i + 1) % n;
        int gap = 1;
        while (s[j] == 0) {
            j = (j + 1) % n;
            ++gap;
        }
        if (s[i] != s[j]) {
            // one crossing somewhere in (phi_i, phi_j); bisect on it
            double lo = kTwoPi * i / n, hi = kTwoPi * (i + gap) / n;
            double glo = g[i];
            while (hi - lo > 1e-12) {
                double mid = 0.5 * (lo + hi);
                double gm = normal_g(curve, probe, mid);
                if ((glo > 0.0) == (gm > 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            out.roots.push_back(wrap_2pi(0.5 * (lo + hi)));
        } else if (gap > 1) {
            // g dips to zero and comes back with the same sign
            out.tangency = true;
        }
        i = j;
    } while (i != first);
    std::sort(out.roots.begin(), out.roots.end());
    // deduplicate modulo 2 pi
    std::vector<double> dedup;
    for (double r : out.roots)
        if (dedup.empty() || r - dedup.back() > 1e-9) dedup.push_back(r);
    if (dedup.size() > 1 && (kTwoPi - dedup.back()) + dedup.front() < 1e-9)
        dedup.pop_back();
    out.roots = std::move(dedup);
    return out;
}

} // namespace

NormalCountReport normal_count(const BoundaryCurve& curve, Point probe) {
    if (!curve.contains(probe))
        throw PreconditionError("probe is not strictly inside the curve");

    double gscale = 0.0;
    double gmax = 0.0;
    for (int i = 0; i < kValidationGrid; ++i) {
        double phi = kTwoPi * i / kValidationGrid;
        gscale = std::max(gscale, norm(curve.eval(phi) - probe) *
                                      curve.speed(phi));
        gmax = std::max(gmax, std::abs(normal_g(curve, probe, phi)));
    }
    if (gmax < 1e-10 * gscale)
        throw DegenerateError(
            "normal function vanishes identically: count undefined");

    // Double the grid until the root count is stable twice in a row.
    int n = kValidationGrid;
    ScanResult cur = scan_roots(curve, probe, n, gscale);
    int stable = 0;
    while (stable < 2 && n < (1 << 18)) {
        ScanResult next = scan_roots(curve, probe, 2 * n, gscale);
        if (next.roots.size() == cur.roots.size())
            ++stable;
        else
            stable = 0;
        n *= 2;
        cur = std::move(next);
    }
    if (stable < 2)
        throw DegenerateError("normal root count did not stabilize");

    NormalCountReport rep;
    rep.probe = probe;
    rep.roots = cur.roots;
    rep.count = static_cast<int>(cur.roots.size());
    rep.tangency_warning = cur.tangency;
    rep.grid_size = n;
    return rep;
}

AverageNormalCount average_normal_count(const BoundaryCurve& curve,
                                        int samples, std::uint64_t seed) {
    if (samples < 100)
        throw PreconditionError("average_normal_count needs samples >= 100");
    double kmin = std::numeric_limits<double>::max(), kmax = -kmin;
    for (int i = 0; i < kValidationGrid; ++i) {
        double k = curve.curvature(kTwoPi * i / kValidationGrid);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    if (kmin < 0.0 && kmax > 0.0)
        throw ConvexityError("curvature changes sign: curve is not convex");

    Point lo, hi;
    curve.bounding_box(lo, hi);
    std::mt19937_64 rng(seed);
    AverageNormalCount out;
    double sum = 0.0;
    while (out.samples_used < samples) {
        Point p{detail::uniform(rng, lo.x, hi.x),
                detail::uniform(rng, lo.y, hi.y)};
        if (!curve.contains(p)) continue;
        try {
            sum += normal_count(curve, p).count;
            ++out.samples_used;
        } catch (const DegenerateError&) {
            ++out.degenerate_skipped;
        }
    }
    out.mean = sum / out.samples_used;
    return out;
}

bool check_central_symmetry(const BoundaryCurve& curve) {
    double worst = 0.0;
    for (int i = 0; i < kValidationGrid / 2; ++i) {
        double phi = kTwoPi * i / kValidationGrid;
        Point a = curve.eval(phi);
        Point b = curve.eval(phi + 3.141592653589793238462643);
        Point c = curve.center();
        worst = std::max(worst,
                         norm({a.x + b.x - 2.0 * c.x, a.y + b.y - 2.0 * c.y}));
    }
    return worst < 1e-10 * curve.scale();
}

} // namespace schiffer::geom2d
