#pragma once

// Quantitative checks of the boundary identities satisfied by solutions
// of the constant-boundary Neumann problem, plus generic trace tooling:
// harmonic analysis against the tangent angle and robust sign-change
// counting with a noise floor.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "schiffer/geom2d.hpp"
#include "schiffer/wavefield.hpp"

namespace schiffer::verify {

using geom2d::ArcLengthTable;
using geom2d::BoundaryCurve;
using wavefield::KillingField;
using wavefield::WaveField;

// Scalar samples along a boundary, sharing the arc-length table that
// produced the sample locations. values has table.n + 1 entries, the
// last one closing the period.
struct BoundaryTrace {
    std::shared_ptr<const ArcLengthTable> table;
    std::vector<double> values;
    std::string label;
};

BoundaryTrace make_trace(std::shared_ptr<const ArcLengthTable> table,
                         std::vector<double> values, std::string label);

// RMS size of [d_nu u; u - 1] over `samples` boundary points; the gate
// used by the identity checks below.
double schiffer_defect(const WaveField& u, const BoundaryCurve& curve,
                       int samples = 2048);

// Samples d_nu(u) along the curve.
BoundaryTrace normal_derivative_trace(const WaveField& u,
                                      const BoundaryCurve& curve,
                                      int samples, std::string label);

// Max violation of the three second-derivative boundary identities
//   u_xx = -(1 - cos 2 theta)/2 * mu u
//   u_xy = +(sin 2 theta)/2     * mu u
//   u_yy = -(1 + cos 2 theta)/2 * mu u
// with theta the tangent angle and mu = k^2: the boundary gradient of an
// accepted solution vanishes, so the Hessian is (Delta u) nu nu^T.
// Requires a field whose defect is below 1e-6 (PreconditionError
// otherwise).
double boundary_second_derivative_check(const WaveField& u,
                                        const BoundaryCurve& curve,
                                        int samples = 2048);

// | integral of d_nu(Xu) * {1, sin 2 theta, cos 2 theta} ds |, each
// normalized by integral |d_nu(Xu)| ds + epsilon. Same defect gate.
// When Xu itself is numerically zero next to u the three values are
// reported as exact zeros.
std::array<double, 3> vanishing_integrals(const WaveField& u,
                                          const BoundaryCurve& curve,
                                          const KillingField& K,
                                          int samples = 2048);

struct HarmonicCoeffs {
    int m_max = 0;
    std::vector<double> c; // integral f cos(m theta(s)) ds, m = 0..m_max
    std::vector<double> s; // integral f sin(m theta(s)) ds
};

// Trapezoid quadrature in phi with the |z'| Jacobian. Requires
// m_max <= table resolution / 8.
HarmonicCoeffs tangent_harmonic_coeffs(const BoundaryTrace& trace, int m_max);

// Cyclic sign changes after zeroing samples within the noise floor;
// runs of zeroed samples collapse. Pass floor < 0 to use the default
// 1e-9 * max |value|. Throws AllBelowFloorError when nothing survives.
int sign_changes(const std::vector<double>& values, double noise_floor,
                 bool cyclic = true);
int sign_changes(const BoundaryTrace& trace, double noise_floor = -1.0);

struct SturmReport {
    int trials = 0;
    int min_count = 0;   // smallest sign-change count seen
    int bound = 0;       // 2 * m_low
    bool pass = false;
};

// Random trigonometric polynomials with spectrum in
// [m_low, m_low + 4] must show at least 2 m_low sign changes on a 4096
// grid; the classical lower bound for high-pass trigonometric sums.
SturmReport sturm_bound_check(int m_low, int trials, std::uint64_t seed);

// max |u(2c - x) - u(x)| / max |u| over an interior grid. Requires a
// centrally symmetric curve.
double iota_symmetry_defect(const WaveField& u, const BoundaryCurve& curve,
                            int grid = 96);

// | integral (d_nu f g - f d_nu g) ds | normalized by the integral of
// the absolute parts; zero for fields with equal k.
double green_symmetry_residual(const WaveField& f, const WaveField& g,
                               const BoundaryCurve& curve,
                               int samples = 2048);

} // namespace schiffer::verify
