#pragma once

// Collocation solvers on a fixed domain: a Neumann eigenvalue detector
// based on the subspace-angle variant of the method of particular
// solutions, and a least-squares defect for the overdetermined boundary
// problem { normal derivative = 0, boundary value = 1 }.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schiffer/geom2d.hpp"
#include "schiffer/wavefield.hpp"

namespace schiffer::helmholtz {

using geom2d::BoundaryCurve;
using geom2d::Point;
using wavefield::WaveField;

enum class BasisMode {
    automatic, // even orders only for the boundary-value solver on
               // centrally symmetric domains, full basis otherwise
    full,
    even_only,
};

struct CollocationOptions {
    std::uint64_t seed = 0x51ab5eed;
    BasisMode basis = BasisMode::automatic;
    double eigen_threshold = 1e-6;    // accept a refined dip below this
    double schiffer_threshold = 1e-8; // defect regarded as a solution
    int oversample = 1;               // multiplies the boundary point count
};

struct SigmaMinResult {
    double sigma = 0.0;
    bool ill_conditioned = false; // basis column norms span > 1e14
};

// Smallest subspace angle between span{basis} restricted to the
// boundary-derivative rows and zero, with interior sample rows keeping
// the candidate field away from the trivial one. Dips to ~0 exactly at
// Neumann eigenvalues. Uses M = 4N + 16 boundary points and M/4
// deterministic interior points.
SigmaMinResult sigma_min(const BoundaryCurve& curve, double k, int order,
                         const CollocationOptions& opts = {});

struct EigenResult {
    double k_star = 0.0;
    double mu = 0.0; // k_star^2
    double sigma = 0.0;
    double neumann_residual = 0.0; // max |d_nu field| on a finer grid
    bool ill_conditioned = false;
    WaveField field;
};

// Scan [k_min, k_max] with the given step, refine every local minimum of
// sigma by golden-section search to 1e-9 in k, and keep dips below the
// detection threshold. Results are sorted by k.
std::vector<EigenResult> scan_neumann_eigs(const BoundaryCurve& curve,
                                           double k_min, double k_max,
                                           double step, int order,
                                           const CollocationOptions& opts = {});

struct SchifferResult {
    double k = 0.0;
    double defect = 0.0; // ||[d_nu u; u - 1]|| / sqrt(2M) at the minimum
    bool ill_conditioned = false;
    WaveField field;
};

// Least-squares minimum of the stacked boundary system
// [d_nu u; u - 1] over the Fourier-Bessel basis at fixed k.
SchifferResult schiffer_residual(const BoundaryCurve& curve, double k,
                                 int order,
                                 const CollocationOptions& opts = {});

enum class Conclusion { theorem_applies, hypothesis_fails, degenerate };

std::string to_string(Conclusion c);

struct CertificateReport {
    std::string domain_id;
    bool centrally_symmetric = false;
    std::optional<int> tau_count; // empty when degenerate
    bool degenerate = false;
    Conclusion conclusion = Conclusion::hypothesis_fails;
};

// Central-symmetry check plus the normal count about the center,
// combined into the hypothesis test: the theorem applies iff the curve
// is centrally symmetric, nondegenerate, and the count is below 8.
CertificateReport certificate(const BoundaryCurve& curve,
                              const std::string& domain_id);

} // namespace schiffer::helmholtz
