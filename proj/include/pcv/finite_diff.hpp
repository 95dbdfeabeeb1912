#ifndef PCV_FINITE_DIFF_HPP
#define PCV_FINITE_DIFF_HPP

#include <array>
#include <cmath>
#include <functional>

#include "pcv/errors.hpp"
#include "pcv/fields.hpp"

namespace pcv {

/// Central-difference derivative estimates through order 2.  This is the
/// independent oracle used to cross-validate jet arithmetic; it never touches
/// jets, only plain double evaluations on a stencil of radius 2h.
struct FiniteDifferenceEstimates {
    double value = 0.0;
    std::array<double, 3> gradient{};
    std::array<std::array<double, 3>, 3> hessian{};
};

inline FiniteDifferenceEstimates
finite_difference_oracle(const std::function<double(const ChartPoint&)>& f, const ChartPoint& p,
                         double h) {
    auto at = [&](double dx, double dy, double dz) {
        double v = f({p.x + dx, p.y + dy, p.z + dz});
        if (!std::isfinite(v)) throw NonFiniteInput("non-finite stencil evaluation");
        return v;
    };
    FiniteDifferenceEstimates e;
    e.value = at(0, 0, 0);
    for (int i = 0; i < 3; ++i) {
        std::array<double, 3> dp{0, 0, 0}, dm{0, 0, 0};
        dp[i] = h;
        dm[i] = -h;
        double fp = at(dp[0], dp[1], dp[2]);
        double fm = at(dm[0], dm[1], dm[2]);
        e.gradient[i] = (fp - fm) / (2 * h);
        e.hessian[i][i] = (fp - 2 * e.value + fm) / (h * h);
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            std::array<double, 3> d{0, 0, 0};
            d[i] = h;
            d[j] = h;
            double fpp = at(d[0], d[1], d[2]);
            d[i] = -h;
            double fmp = at(d[0], d[1], d[2]);
            d[j] = -h;
            double fmm = at(d[0], d[1], d[2]);
            d[i] = h;
            double fpm = at(d[0], d[1], d[2]);
            e.hessian[i][j] = e.hessian[j][i] = (fpp - fpm - fmp + fmm) / (4 * h * h);
        }
    }
    return e;
}

} // namespace pcv

#endif
