#pragma once

// Entire solutions of u_xx + u_yy = -k^2 u represented by Fourier-Bessel
// expansions about an origin:
//
//   u(r, theta) = sum_{n=0}^{N} J_n(k r) (alpha_n cos n theta
//                                         + beta_n sin n theta)
//
// plus the first-order geometric operators the identity checks need:
// constant and rotation vector fields applied exactly on coefficients,
// and local Taylor jets in a rotated frame.

#include <vector>

#include "schiffer/errors.hpp"
#include "schiffer/geom2d.hpp"

namespace schiffer::wavefield {

using geom2d::Point;

class WaveField {
public:
    // alpha and beta must have equal size N + 1; beta[0] must be zero.
    WaveField(double k, Point origin, std::vector<double> alpha,
              std::vector<double> beta);

    // Convenience constructor for a single (n, alpha, beta) mode.
    static WaveField single(double k, Point origin, int n, double alpha,
                            double beta);

    double k() const { return k_; }
    Point origin() const { return origin_; }
    int max_order() const { return static_cast<int>(alpha_.size()) - 1; }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& beta() const { return beta_; }

    double eval(Point p) const;
    Point grad(Point p) const;

    // Euclidean norm of the coefficient vector; a convenient field scale.
    double coeff_norm() const;

    // Copy with the expansion cut at new_order (or zero-padded up to it).
    WaveField truncated(int new_order) const;

private:
    double k_;
    Point origin_;
    std::vector<double> alpha_, beta_;
};

// First-order differential operator X that commutes with the Laplacian:
// either a constant field a d/dx + b d/dy or the rotation field about p,
// (x - p_x) d/dy - (y - p_y) d/dx.
struct KillingField {
    enum class Kind { constant, rotation };
    Kind kind = Kind::constant;
    double a = 0.0, b = 0.0; // constant components
    Point p{};               // rotation pivot

    static KillingField constant(double a, double b);
    static KillingField rotation(Point p);

    // The vector K(x) at a point.
    Point vector_at(Point x) const;
};

// Exact action of X on the coefficients. Constant fields couple order n
// to n +- 1, so the output order is N + 1; rotation about the expansion
// origin is diagonal and keeps N. Callers chaining many applications
// should truncate explicitly.
WaveField apply_killing(const WaveField& f, const KillingField& K);

// (5-point Laplacian + k^2) f at p with step 1e-4 * max(1, 1/k).
// Diagnostic only.
double laplacian_residual(const WaveField& f, Point p);

// Degree-4 Taylor polynomial of the field at `base` in coordinates
// rotated by frame_angle: coeff(i, j) multiplies xi^i eta^j where
// (xi, eta) are the rotated offsets. Extracted from a 9 x 9 stencil of
// radius 1e-2 by polynomial least squares.
struct TaylorJet {
    Point base{};
    double frame_angle = 0.0;
    double w[5][5] = {};

    double coeff(int i, int j) const { return w[i][j]; }
    double& coeff(int i, int j) { return w[i][j]; }
};

TaylorJet taylor_jet(const WaveField& f, Point base, double frame_angle);

// |2 w20 + 2 w02 + k^2 w00| relative to |k^2 w00|; should be tiny for
// jets of genuine wave fields.
double harmonic_consistency_residual(const TaylorJet& jet, double k);

} // namespace schiffer::wavefield
