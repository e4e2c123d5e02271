#pragma once

// Dense bivariate polynomials of small degree, just enough algebra for
// the symbolic rotation-derivative oracle.

#include <vector>

#include "schiffer/geom2d.hpp"
#include "schiffer/wavefield.hpp"

namespace schiffer::nodal {

class Poly2 {
public:
    explicit Poly2(int degree) : deg_(degree), c_((degree + 1) * (degree + 1), 0.0) {}

    int degree() const { return deg_; }
    double at(int i, int j) const { return c_[i * (deg_ + 1) + j]; }
    double& at(int i, int j) { return c_[i * (deg_ + 1) + j]; }

    double eval(double x, double y) const {
        // Horner in x of Horner-in-y rows
        double result = 0.0;
        for (int i = deg_; i >= 0; --i) {
            double row = 0.0;
            for (int j = deg_; j >= 0; --j) row = row * y + at(i, j);
            result = result * x + row;
        }
        return result;
    }

    Poly2 dx() const {
        Poly2 out(deg_);
        for (int i = 1; i <= deg_; ++i)
            for (int j = 0; j <= deg_ - i; ++j) out.at(i - 1, j) = i * at(i, j);
        return out;
    }

    Poly2 dy() const {
        Poly2 out(deg_);
        for (int i = 0; i <= deg_; ++i)
            for (int j = 1; j <= deg_ - i; ++j) out.at(i, j - 1) = j * at(i, j);
        return out;
    }

    Poly2 shift_x() const { // multiply by x
        Poly2 out(deg_ + 1);
        for (int i = 0; i <= deg_; ++i)
            for (int j = 0; j <= deg_ - i; ++j) out.at(i + 1, j) = at(i, j);
        return out;
    }

    Poly2 shift_y() const { // multiply by y
        Poly2 out(deg_ + 1);
        for (int i = 0; i <= deg_; ++i)
            for (int j = 0; j <= deg_ - i; ++j) out.at(i, j + 1) = at(i, j);
        return out;
    }

    Poly2& add_scaled(const Poly2& other, double s) {
        if (other.deg_ > deg_) {
            Poly2 grown(other.deg_);
            for (int i = 0; i <= deg_; ++i)
                for (int j = 0; j <= deg_ - i; ++j) grown.at(i, j) = at(i, j);
            *this = grown;
        }
        for (int i = 0; i <= other.deg_; ++i)
            for (int j = 0; j <= other.deg_ - i; ++j)
                at(i, j) += s * other.at(i, j);
        return *this;
    }

private:
    int deg_;
    std::vector<double> c_;
};

// (x - q.x) dw/dy - (y - q.y) dw/dx, the rotation field about q applied
// to a polynomial.
inline Poly2 rotational_derivative(const Poly2& w, geom2d::Point q) {
    Poly2 wx = w.dx();
    Poly2 wy = w.dy();
    Poly2 out(w.degree() + 1);
    out.add_scaled(wy.shift_x(), 1.0);
    out.add_scaled(wy, -q.x);
    out.add_scaled(wx.shift_y(), -1.0);
    out.add_scaled(wx, q.y);
    return out;
}

inline Poly2 poly_from_jet(const wavefield::TaylorJet& jet) {
    Poly2 p(4);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4 - i; ++j) p.at(i, j) = jet.coeff(i, j);
    return p;
}

} // namespace schiffer::nodal
