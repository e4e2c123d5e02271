#include "schiffer/specfun.hpp"

#include <cmath>

namespace schiffer::specfun {

namespace {

constexpr int kMaxOrder = 128;
constexpr double kMaxArg = 500.0;
// The ascending series keeps full accuracy only while the alternating
// terms stay moderate, which for double precision means small x. Beyond
// this the normalized downward recurrence takes over for every order.
constexpr double kSeriesCut = 9.0;

void check_domain(int n, double x) {
    if (n < 0 || n > kMaxOrder)
        throw DomainError("bessel order outside 0..128");
    if (!(x >= 0.0) || x > kMaxArg)
        throw DomainError("bessel argument outside [0, 500]");
}

double series_impl(int n, double x) {
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    const double hx = 0.5 * x;
    // leading term (x/2)^n / n!, built as a product so it underflows
    // gradually for high orders
    double t = 1.0;
    for (int i = 1; i <= n; ++i) t *= hx / i;
    double sum = t;
    const double z = hx * hx;
    for (int m = 1; m <= 600; ++m) {
        t *= -z / (static_cast<double>(m) * (n + m));
        sum += t;
        if (std::abs(t) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Downward recurrence J_{m-1} = (2m/x) J_m - J_{m+1} from a trial order
// well above both n and x, normalized with J_0 + 2 sum_{k>=1} J_{2k} = 1.
// Fills out[0..nmax].
void miller_impl(int nmax, double x, std::vector<double>& out) {
    // The trial-value contamination decays only above the turning point
    // m = x, by an Airy-type factor exp(-c (m - x)^{3/2} / sqrt(x)), so
    // the safety margin has to grow like x^{1/3} to keep the relative
    // error near machine precision across the whole [0, 500] range.
    int n_start = std::max(nmax, static_cast<int>(std::ceil(x))) + 24 +
                  static_cast<int>(std::ceil(12.0 * std::cbrt(x)));
    if (n_start % 2) ++n_start;

    out.assign(nmax + 1, 0.0);
    double jp = 0.0;         // trial J_{m+1}
    double jc = 1e-30;       // trial J_m, starting at the even order n_start
    double norm_sum = 2.0 * jc;
    if (n_start <= nmax) out[n_start] = jc;
    for (int m = n_start; m >= 1; --m) {
        double jm = (2.0 * m / x) * jc - jp;
        jp = jc;
        jc = jm;
        int order = m - 1;
        if (order <= nmax) out[order] = jc;
        if (order == 0)
            norm_sum += jc;
        else if (order % 2 == 0)
            norm_sum += 2.0 * jc;
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            norm_sum *= 1e-250;
            for (auto& v : out) v *= 1e-250;
        }
    }
    for (auto& v : out) v /= norm_sum;
}

} // namespace

namespace detail {

double bessel_j_series(int n, double x) { return series_impl(n, x); }

double bessel_j_miller(int n, double x) {
    std::vector<double> out;
    miller_impl(n, x, out);
    return out[n];
}

} // namespace detail

std::vector<double> bessel_j_all(int nmax, double x) {
    if (nmax < 0 || nmax > kMaxOrder + 2)
        throw DomainError("bessel order outside supported range");
    if (!(x >= 0.0) || x > kMaxArg)
        throw DomainError("bessel argument outside [0, 500]");
    std::vector<double> out(nmax + 1);
    if (x < kSeriesCut) {
        for (int n = 0; n <= nmax; ++n) out[n] = series_impl(n, x);
    } else {
        miller_impl(nmax, x, out);
    }
    return out;
}

double bessel_j(int n, double x) {
    check_domain(n, x);
    if (x < kSeriesCut) return series_impl(n, x);
    std::vector<double> out;
    miller_impl(n, x, out);
    return out[n];
}

double bessel_j_deriv(int n, double x) {
    check_domain(n, x);
    if (n == 0) return -bessel_j_all(1, x)[1];
    auto j = bessel_j_all(n + 1, x);
    return 0.5 * (j[n - 1] - j[n + 1]);
}

double bessel_deriv_zero(int n, int m) {
    if (n < 0 || n > kMaxOrder) throw DomainError("bessel order outside 0..128");
    if (m < 1 || m > 64) throw DomainError("zero index outside 1..64");

    auto deriv = [n](double x) { return bessel_j_deriv(n, x); };
    const double step = 0.1;
    double x = std::max(static_cast<double>(n), 0.5);
    double f = deriv(x);
    int found = 0;
    while (x < kMaxArg) {
        double x2 = x + step;
        double f2 = deriv(x2);
        if ((f > 0.0) != (f2 > 0.0) || f2 == 0.0) {
            ++found;
            if (found == m) {
                double lo = x, hi = x2, flo = f;
                while (hi - lo > 1e-11) {
                    double mid = 0.5 * (lo + hi);
                    double fm = deriv(mid);
                    if ((flo > 0.0) == (fm > 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        x = x2;
        f = f2;
    }
    throw DomainError("requested derivative zero lies beyond x = 500");
}

} // namespace schiffer::specfun
