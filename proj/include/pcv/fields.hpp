#ifndef PCV_FIELDS_HPP
#define PCV_FIELDS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <utility>

#include "pcv/jet.hpp"

namespace pcv {

struct ChartPoint {
    double x = 0.0, y = 0.0, z = 0.0;

    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// Coordinate jets (x, y, z) seeded at p.
inline std::array<Jet3, 3> jet_seed(const ChartPoint& p) {
    if (!p.finite()) throw NonFiniteInput("non-finite chart point");
    return {Jet3::variable(p.x, 0), Jet3::variable(p.y, 1), Jet3::variable(p.z, 2)};
}

using Vec3J = std::array<Jet3, 3>;
using Mat3J = std::array<std::array<Jet3, 3>, 3>;

/// Scalar field on a chart: a pure map from points to order-3 jets, carrying
/// the number of derivative orders the returned jets can be trusted to.
class ScalarField {
  public:
    ScalarField() = default;
    ScalarField(std::function<Jet3(const ChartPoint&)> eval, int budget = Jet3::kOrder)
        : eval_(std::move(eval)), budget_(budget) {}

    static ScalarField constant(double v) {
        return ScalarField([v](const ChartPoint&) { return Jet3::constant(v); });
    }
    static ScalarField coordinate(int axis) {
        return ScalarField([axis](const ChartPoint& p) { return Jet3::variable(p[axis], axis); });
    }

    Jet3 operator()(const ChartPoint& p) const { return eval_(p); }
    int budget() const { return budget_; }
    bool valid() const { return static_cast<bool>(eval_); }

    /// Coordinate partial as a derived field (budget drops by one).
    ScalarField partial(int axis) const {
        if (budget_ < 1) throw BudgetExhausted("cannot differentiate field: budget exhausted");
        auto e = eval_;
        return ScalarField([e, axis](const ChartPoint& p) { return jet_partial(e(p), axis); },
                           budget_ - 1);
    }

  private:
    std::function<Jet3(const ChartPoint&)> eval_;
    int budget_ = Jet3::kOrder;
};

/// Contravariant vector field: one evaluator producing all three coordinate
/// components, so derived frames pay their construction cost once per point.
class VectorField {
  public:
    VectorField() = default;
    VectorField(std::function<Vec3J(const ChartPoint&)> eval, int budget = Jet3::kOrder)
        : eval_(std::move(eval)), budget_(budget) {}

    static VectorField coordinate_basis(int axis) {
        return VectorField([axis](const ChartPoint&) {
            Vec3J v{Jet3::constant(0.0), Jet3::constant(0.0), Jet3::constant(0.0)};
            v[axis] = Jet3::constant(1.0);
            return v;
        });
    }
    static VectorField from_components(std::array<ScalarField, 3> c, int budget = Jet3::kOrder) {
        return VectorField(
            [c](const ChartPoint& p) -> Vec3J { return {c[0](p), c[1](p), c[2](p)}; }, budget);
    }

    Vec3J operator()(const ChartPoint& p) const { return eval_(p); }
    int budget() const { return budget_; }
    bool valid() const { return static_cast<bool>(eval_); }

  private:
    std::function<Vec3J(const ChartPoint&)> eval_;
    int budget_ = Jet3::kOrder;
};

/// Covariant 1-form field (components in dx, dy, dz).
class OneForm {
  public:
    OneForm() = default;
    OneForm(std::function<Vec3J(const ChartPoint&)> eval, int budget = Jet3::kOrder)
        : eval_(std::move(eval)), budget_(budget) {}

    Vec3J operator()(const ChartPoint& p) const { return eval_(p); }
    int budget() const { return budget_; }

  private:
    std::function<Vec3J(const ChartPoint&)> eval_;
    int budget_ = Jet3::kOrder;
};

/// (1,1)-tensor field; entry [i][j] is the dx^i component of T(d/dx^j).
class Tensor11Field {
  public:
    Tensor11Field() = default;
    Tensor11Field(std::function<Mat3J(const ChartPoint&)> eval, int budget = Jet3::kOrder)
        : eval_(std::move(eval)), budget_(budget) {}

    Mat3J operator()(const ChartPoint& p) const { return eval_(p); }
    int budget() const { return budget_; }
    bool valid() const { return static_cast<bool>(eval_); }

  private:
    std::function<Mat3J(const ChartPoint&)> eval_;
    int budget_ = Jet3::kOrder;
};

/// Symmetric metric field; evaluators must return symmetric matrices.
class MetricField {
  public:
    MetricField() = default;
    MetricField(std::function<Mat3J(const ChartPoint&)> eval, int budget = Jet3::kOrder)
        : eval_(std::move(eval)), budget_(budget) {}

    Mat3J operator()(const ChartPoint& p) const { return eval_(p); }
    int budget() const { return budget_; }
    bool valid() const { return static_cast<bool>(eval_); }

  private:
    std::function<Mat3J(const ChartPoint&)> eval_;
    int budget_ = Jet3::kOrder;
};

/// Orthonormal triple with signature signs: g(e_i, e_j) = eps_i delta_ij.
struct SignedFrame {
    std::array<VectorField, 3> e;
    std::array<double, 3> eps{-1.0, 1.0, 1.0};
};

// pointwise helpers

inline Vec3J mat_apply(const Mat3J& m, const Vec3J& v) {
    Vec3J r;
    for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

inline Jet3 dot_form(const Vec3J& form, const Vec3J& v) {
    return form[0] * v[0] + form[1] * v[1] + form[2] * v[2];
}

/// g(u, v) from the metric matrix.
inline Jet3 metric_dot(const Mat3J& g, const Vec3J& u, const Vec3J& v) {
    Jet3 s = Jet3::constant(0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += g[i][j] * u[i] * v[j];
    return s;
}

inline Vec3J vec_add(const Vec3J& a, const Vec3J& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3J vec_sub(const Vec3J& a, const Vec3J& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3J vec_scale(const Jet3& s, const Vec3J& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3J vec_scale(double s, const Vec3J& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double vec_value_norm(const Vec3J& a) {
    return std::sqrt(a[0].value() * a[0].value() + a[1].value() * a[1].value() +
                     a[2].value() * a[2].value());
}

} // namespace pcv

#endif
