#ifndef PCV_NULLITY_HPP
#define PCV_NULLITY_HPP

#include "pcv/paracontact.hpp"

namespace pcv {

enum class Regime { kappa_gt, kappa_lt };

const char* to_string(Regime r);

/// Pointwise h-frame data: jet-valued legs X, phi X (xi is the structure's
/// own field), the eigen scalar lambda, and the worst frame defect at the
/// construction point.  Signs are fixed at (xi:+1, X:-1, phiX:+1).
struct HFramePoint {
    Vec3J X, phiX;
    Jet3 lambda;
    Regime regime = Regime::kappa_gt;
    double residual = 0.0;
};

HFramePoint build_h_frame_at(const ParacontactStructure& s, const ChartPoint& p);

/// Field form of the frame; evaluators re-run the pointwise construction,
/// whose discrete choices (basis pair, eigen branch, orientation) are locally
/// constant away from degeneracies.
struct HFrame {
    VectorField X, phiX;
    ScalarField lambda;
    Regime regime = Regime::kappa_gt;
    std::array<double, 3> eps{-1.0, 1.0, 1.0}; // (X, phiX, xi)
    double residual = 0.0;                     // at the construction point
};

HFrame build_h_frame(const ParacontactStructure& s, const ChartPoint& p);

/// Nullity functions solved from R(X,xi)xi and R(phiX,xi)xi by least squares
/// on the frame expansion; jet-valued so directional derivatives of kappa and
/// mu come for free.  residual is the max defect of the fit including the
/// xi-components of the curvature vectors, which carry no unknowns.
struct NullityCoefficients {
    Jet3 kappa, mu, nu;
    Jet3 lambda;
    Jet3 A, B; // X(lambda), phiX(lambda)
    double residual = 0.0;
    bool h_zero = false; // h vanished: kappa fit alone, mu and nu reported 0
    Regime regime = Regime::kappa_gt;
};

NullityCoefficients extract_nullity(const ParacontactStructure& s, const ChartPoint& p);

struct DirectionalInvariants {
    double xi_kappa = 0.0;
    double xi_mu = 0.0;
    double A = 0.0;
    double B = 0.0;
    double hgrad_mu_residual = 0.0; // h grad mu - grad kappa
    double x_mu_residual = 0.0;     // X(mu) - 2A   (kappa_lt: X(mu) - 2B)
    double phix_mu_residual = 0.0;  // phiX(mu) + 2B (kappa_lt: phiX(mu) + 2A)
};

DirectionalInvariants directional_invariants(const ParacontactStructure& s, const ChartPoint& p);

enum class MuBranch { plus, minus, degenerate };

const char* to_string(MuBranch b);

struct BranchReport {
    MuBranch branch = MuBranch::degenerate;
    double plus_residual = 0.0;  // |mu - 2(1 + lambda)|
    double minus_residual = 0.0; // |mu - 2(1 - lambda)|
    double F_residual = 0.0;     // |(1 + lambda - mu/2)(1 - lambda - mu/2)|
    double lambda = 0.0;
};

BranchReport mu_branch_classify(const ParacontactStructure& s, const ChartPoint& p);

} // namespace pcv

#endif
