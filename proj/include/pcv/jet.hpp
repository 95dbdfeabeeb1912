#ifndef PCV_JET_HPP
#define PCV_JET_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pcv/errors.hpp"

namespace pcv {

// Truncated Taylor arithmetic in three chart variables (x, y, z), total
// order 3.  A Jet3 stores the 20 Taylor coefficients c_{ijk} of a scalar
// about the base point, ordered by total degree then lexicographically,
// together with the number of derivative orders that are still trustworthy
// (derived quantities such as Christoffel symbols lose one order per
// differentiation).  Coefficients are Taylor coefficients, not raw partial
// derivatives: the partial d^{i+j+k}f / dx^i dy^j dz^k equals c_{ijk}·i!j!k!.
class Jet3 {
  public:
    static constexpr int kOrder = 3;
    static constexpr int kSize = 20;

    Jet3() = default;

    static Jet3 constant(double v, int order = kOrder) {
        if (!std::isfinite(v)) throw NonFiniteInput("non-finite constant for jet");
        Jet3 j;
        j.c_.fill(0.0);
        j.c_[0] = v;
        j.order_ = order;
        return j;
    }

    /// Coordinate jet: value v, unit first derivative along `axis` (0..2).
    static Jet3 variable(double v, int axis) {
        Jet3 j = constant(v);
        j.c_[1 + axis] = 1.0;
        return j;
    }

    double value() const { return c_[0]; }
    int order() const { return order_; }

    /// Taylor coefficient for multi-index (i,j,k); i+j+k <= 3.
    double coeff(int i, int j, int k) const { return c_[index(i, j, k)]; }
    double& coeff(int i, int j, int k) { return c_[index(i, j, k)]; }

    /// Partial derivative value d^{i+j+k}f / dx^i dy^j dz^k at the base point.
    double deriv(int i, int j, int k) const {
        return c_[index(i, j, k)] * factorial(i) * factorial(j) * factorial(k);
    }

    /// First derivative along axis 0..2.
    double d1(int axis) const { return c_[1 + axis]; }

    bool finite() const {
        for (double v : c_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend Jet3 operator+(const Jet3& a, const Jet3& b) {
        Jet3 r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = a.c_[i] + b.c_[i];
        r.order_ = std::min(a.order_, b.order_);
        return r;
    }
    friend Jet3 operator-(const Jet3& a, const Jet3& b) {
        Jet3 r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = a.c_[i] - b.c_[i];
        r.order_ = std::min(a.order_, b.order_);
        return r;
    }
    friend Jet3 operator-(const Jet3& a) {
        Jet3 r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = -a.c_[i];
        r.order_ = a.order_;
        return r;
    }
    friend Jet3 operator*(const Jet3& a, const Jet3& b);

    friend Jet3 operator+(const Jet3& a, double s) { return a + constant(s); }
    friend Jet3 operator+(double s, const Jet3& a) { return a + constant(s); }
    friend Jet3 operator-(const Jet3& a, double s) { return a - constant(s); }
    friend Jet3 operator-(double s, const Jet3& a) { return constant(s) - a; }
    friend Jet3 operator*(const Jet3& a, double s) {
        Jet3 r;
        for (int i = 0; i < kSize; ++i) r.c_[i] = a.c_[i] * s;
        r.order_ = a.order_;
        return r;
    }
    friend Jet3 operator*(double s, const Jet3& a) { return a * s; }

    Jet3& operator+=(const Jet3& b) { return *this = *this + b; }
    Jet3& operator-=(const Jet3& b) { return *this = *this - b; }
    Jet3& operator*=(const Jet3& b) { return *this = *this * b; }

    static int index(int i, int j, int k);
    static const std::array<std::array<int, 3>, kSize>& multi_indices();

  private:
    static double factorial(int n) { return n <= 1 ? 1.0 : (n == 2 ? 2.0 : 6.0); }

    std::array<double, kSize> c_{};
    int order_ = kOrder;

    friend Jet3 jet_div(const Jet3&, const Jet3&, double);
    friend Jet3 jet_partial(const Jet3&, int);
    friend Jet3 compose_unary(const Jet3&, const std::array<double, 4>&);
};

constexpr double kDivisionEpsilon = 1e-12;

Jet3 operator*(const Jet3& a, const Jet3& b);

/// a / b; |value(b)| must exceed eps.
Jet3 jet_div(const Jet3& a, const Jet3& b, double eps = kDivisionEpsilon);
inline Jet3 operator/(const Jet3& a, const Jet3& b) { return jet_div(a, b); }
inline Jet3 operator/(const Jet3& a, double s) { return jet_div(a, Jet3::constant(s)); }
inline Jet3 operator/(double s, const Jet3& b) { return jet_div(Jet3::constant(s), b); }

Jet3 jet_sqrt(const Jet3& a);
Jet3 jet_exp(const Jet3& a);
Jet3 jet_log(const Jet3& a);
Jet3 jet_sin(const Jet3& a);
Jet3 jet_cos(const Jet3& a);
Jet3 jet_powi(const Jet3& a, int n);

/// Differentiation at the jet level: shifts Taylor coefficients down one
/// degree along `axis`.  The result trusts one order fewer; differentiating a
/// jet whose budget is exhausted is a hard error.
Jet3 jet_partial(const Jet3& a, int axis);

inline double sqrt(const Jet3& a) = delete; // use jet_sqrt; keeps ADL honest

} // namespace pcv

#endif
