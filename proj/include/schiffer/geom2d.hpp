#pragma once

// Closed analytic boundary curves given by truncated Fourier data, plus the
// derived quantities the rest of the library needs: arc-length tables,
// tangent-angle lifts, curvature, centers of curvature, and the count of
// boundary points whose normal line passes through a given probe point.

#include <cstdint>
#include <optional>
#include <vector>

#include "schiffer/errors.hpp"

namespace schiffer::geom2d {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

enum class CurveKind { polar, direct };

// One Fourier term. For polar curves k >= 1 and (a, b) are the cos/sin
// amplitudes of r(phi). For direct curves k != 0 and (a, b) are the real
// and imaginary parts of the complex coefficient of e^{i k phi}.
struct FourierTerm {
    int k = 0;
    double a = 0.0;
    double b = 0.0;
};

// A simple closed curve, counterclockwise after construction.
//
//   polar:  z(phi) = center + r(phi) (cos phi, sin phi),
//           r(phi) = r0 + sum_k (a_k cos k phi + b_k sin k phi)
//   direct: z(phi) = center + sum_k c_k e^{i k phi}
//
// Construction validates on a 4096-point grid that the curve is regular
// (|z'| bounded away from zero), simple (no self intersection of the
// inscribed polygon), and for the polar kind that r stays positive.
// A curve arriving clockwise is reparametrized phi -> -phi on load.
class BoundaryCurve {
public:
    static BoundaryCurve polar(Point center, double r0,
                               std::vector<FourierTerm> terms);
    static BoundaryCurve direct(Point center, std::vector<FourierTerm> terms);

    CurveKind kind() const { return kind_; }
    Point center() const { return center_; }
    double r0() const { return r0_; }
    const std::vector<FourierTerm>& terms() const { return terms_; }

    Point eval(double phi) const;
    Point derivative(double phi) const;
    Point second_derivative(double phi) const;

    double speed(double phi) const;          // |z'(phi)|
    Point unit_tangent(double phi) const;
    Point outward_normal(double phi) const;  // tangent rotated by -90 degrees
    double curvature(double phi) const;      // signed, positive for convex ccw

    // Largest distance from the center to the curve; used as the length
    // scale in relative tolerances.
    double scale() const { return scale_; }
    double min_speed() const { return min_speed_; }

    // Point-in-polygon test against the cached 4096-gon.
    bool contains(Point p) const;

    // Axis-aligned bounding box of the validation grid.
    void bounding_box(Point& lo, Point& hi) const;

private:
    BoundaryCurve(CurveKind kind, Point center, double r0,
                  std::vector<FourierTerm> terms);
    void validate_and_cache();
    double polar_r(double phi) const;
    double polar_rp(double phi) const;
    double polar_rpp(double phi) const;

    CurveKind kind_;
    Point center_;
    double r0_ = 0.0;
    std::vector<FourierTerm> terms_;

    std::vector<Point> grid_;   // 4096 validation samples
    double scale_ = 0.0;
    double min_speed_ = 0.0;
};

// Uniform-in-phi resampling of a curve with cumulative arc length,
// a continuous tangent-angle lift, and signed curvature. The table has
// n + 1 rows; row n closes the period at phi = 2 pi, so
// theta[n] - theta[0] = 2 pi and s[n] = total_length.
struct ArcLengthTable {
    int n = 0;
    std::vector<double> phi;
    std::vector<double> s;
    std::vector<double> theta;
    std::vector<double> kappa;
    std::vector<double> speed;   // |z'| at the samples, the ds/dphi Jacobian
    double total_length = 0.0;
};

ArcLengthTable build_arclength_table(const BoundaryCurve& curve, int n);

// z + (1/kappa) * inward normal. Throws FlatPointError where |kappa| is
// below 1e-12 / scale.
Point center_of_curvature(const BoundaryCurve& curve, double phi);

// Count of parameter values where the normal line through z(phi) passes
// through the probe: transversal zeros of g(phi) = (z - probe) . z'.
struct NormalCountReport {
    Point probe;
    int count = 0;
    std::vector<double> roots;      // deduplicated, sorted, in [0, 2 pi)
    bool tangency_warning = false;  // near-zero |g| without a sign change
    int grid_size = 0;              // grid at which the count stabilized
};

// Scans g on a 4096-point grid, doubling until the root count is stable
// twice in a row, then refines each bracket by bisection to 1e-12 in phi.
// Throws DegenerateError when g vanishes identically (max |g| below
// 1e-10 times its natural scale), PreconditionError when the probe is
// not strictly inside.
NormalCountReport normal_count(const BoundaryCurve& curve, Point probe);

struct AverageNormalCount {
    double mean = 0.0;
    int samples_used = 0;
    int degenerate_skipped = 0;
};

// Monte Carlo mean of normal_count over uniform interior probes.
// Requires a convex curve (curvature of one sign); degenerate probes are
// skipped and reported. Deterministic for a fixed seed.
AverageNormalCount average_normal_count(const BoundaryCurve& curve,
                                        int samples, std::uint64_t seed);

// max |z(phi + pi) + z(phi) - 2 center| < 1e-10 * scale on the grid.
bool check_central_symmetry(const BoundaryCurve& curve);

} // namespace schiffer::geom2d
