#pragma once

// Bessel functions of the first kind for integer orders, their
// derivatives, and zeros of the derivatives. Supported ranges:
// 0 <= n <= 128, 0 <= x <= 500, zero index 1 <= m <= 64.

#include <vector>

#include "schiffer/errors.hpp"

namespace schiffer::specfun {

double bessel_j(int n, double x);
double bessel_j_deriv(int n, double x);

// J_0(x) .. J_nmax(x) in one pass; cheaper than nmax+1 separate calls
// when the downward recurrence is in play.
std::vector<double> bessel_j_all(int nmax, double x);

// m-th positive zero of J_n'. x = 0 is never counted, so for n = 0 the
// first zero is 3.8317...
double bessel_deriv_zero(int n, int m);

namespace detail {
// The two evaluation branches, exposed for cross-checking. The series is
// accurate for small x only; the recurrence covers the rest.
double bessel_j_series(int n, double x);
double bessel_j_miller(int n, double x);
} // namespace detail

} // namespace schiffer::specfun
