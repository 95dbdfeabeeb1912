#ifndef PCV_LINALG_HPP
#define PCV_LINALG_HPP

#include <algorithm>
#include <array>
#include <cmath>

#include "pcv/errors.hpp"
#include "pcv/jet.hpp"

namespace pcv {

inline double value_of(double v) { return v; }
inline double value_of(const Jet3& j) { return j.value(); }

template <class S> using Mat3 = std::array<std::array<S, 3>, 3>;
template <class S> using Vec3 = std::array<S, 3>;

template <class S> S det3(const Mat3<S>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class S> Mat3<S> adjugate3(const Mat3<S>& m) {
    Mat3<S> a;
    a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    a[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    a[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    a[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    a[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    a[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return a;
}

constexpr double kDegeneracyEpsilon = 1e-10;

template <class S> Mat3<S> inverse3(const Mat3<S>& m, double eps = kDegeneracyEpsilon) {
    S det = det3(m);
    if (std::abs(value_of(det)) <= eps) throw DegenerateMetric("3x3 matrix near-singular");
    Mat3<S> adj = adjugate3(m);
    Mat3<S> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = adj[i][j] / det;
    return r;
}

template <class S> Vec3<S> solve3(const Mat3<S>& m, const Vec3<S>& b, double eps = kDegeneracyEpsilon) {
    S det = det3(m);
    if (std::abs(value_of(det)) <= eps) throw DegenerateMetric("3x3 system near-singular");
    Mat3<S> adj = adjugate3(m);
    Vec3<S> x;
    for (int i = 0; i < 3; ++i) x[i] = (adj[i][0] * b[0] + adj[i][1] * b[1] + adj[i][2] * b[2]) / det;
    return x;
}

/// Eigenvalues of a symmetric 3x3 double matrix, ascending.  Analytic
/// (trigonometric) method; adequate for signature counting and condition
/// estimates at desk scale.
inline std::array<double, 3> sym_eigenvalues3(const Mat3<double>& a) {
    double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    std::array<double, 3> eig;
    if (p1 == 0.0) {
        eig = {a[0][0], a[1][1], a[2][2]};
        std::sort(eig.begin(), eig.end());
        return eig;
    }
    double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat3<double> b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
    double r = det3(b) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double e1 = q + 2.0 * p * std::cos(phi);
    double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    eig = {e3, 3.0 * q - e1 - e3, e1};
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Signature of a symmetric matrix as (#positive, #negative) eigenvalues.
inline std::pair<int, int> signature3(const Mat3<double>& a, double tol = 1e-12) {
    auto eig = sym_eigenvalues3(a);
    int pos = 0, neg = 0;
    for (double e : eig) {
        if (e > tol) ++pos;
        else if (e < -tol) ++neg;
    }
    return {pos, neg};
}

constexpr double kConditionLimit = 1e10;

/// Least squares for an m x 3 system via normal equations, generic over the
/// scalar (double or jet-valued right-hand sides/design entries).  The
/// condition guard works on the values of the normal matrix.
template <class S, std::size_t M>
Vec3<S> least_squares3(const std::array<Vec3<S>, M>& rows, const std::array<S, M>& rhs,
                       double cond_limit = kConditionLimit) {
    Mat3<S> n{};
    Vec3<S> t{};
    for (std::size_t r = 0; r < M; ++r) {
        for (int i = 0; i < 3; ++i) {
            t[i] += rows[r][i] * rhs[r];
            for (int j = 0; j < 3; ++j) n[i][j] += rows[r][i] * rows[r][j];
        }
    }
    Mat3<double> nv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) nv[i][j] = value_of(n[i][j]);
    auto eig = sym_eigenvalues3(nv);
    double lo = std::abs(eig[0]), hi = std::abs(eig[2]);
    for (double e : eig) {
        lo = std::min(lo, std::abs(e));
        hi = std::max(hi, std::abs(e));
    }
    if (!(lo > 0.0) || hi / lo > cond_limit)
        throw IllConditionedSolve("normal equations condition number beyond limit");
    return solve3(n, t, 1e-300);
}

} // namespace pcv

#endif
