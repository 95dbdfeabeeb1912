#ifndef PCV_PARACONTACT_HPP
#define PCV_PARACONTACT_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pcv/geometry.hpp"

namespace pcv {

/// Points with lambda below this are excluded wherever an h-frame is needed;
/// the frame formulas divide by 2*lambda.
constexpr double kLambdaMin = 1e-3;
/// Tolerance on the scalar c with h^2 = c I on ker eta when classifying the
/// operator type (two jet differentiations lose roughly two digits).
constexpr double kHTypeTol = 1e-7;

/// Serializable description of how a structure was built; round-trips
/// through the JSON manifest bit-exactly (expression sources kept verbatim).
struct StructureRecipe {
    std::string kase; // "example" | "case1" | "case2" | "custom"
    // case1 / case2 / example
    std::string r, f, s;
    double z_min = 0.0, z_max = 0.0;
    std::vector<double> excluded_z; // loci |z - z0| <= 1e-12 are out of domain
    double lambda_min = kLambdaMin;
    // custom: component expressions in x, y, z (row-major matrices)
    std::array<std::string, 9> phi_expr{};
    std::array<std::string, 3> xi_expr{};
    std::array<std::string, 3> eta_expr{};
    std::array<std::string, 9> g_expr{};
    // custom deformation wrapper: reconstruct base, then deform by alpha
    double alpha = 0.0;
    std::shared_ptr<StructureRecipe> base;
};

struct ParacontactStructure {
    Tensor11Field phi;
    VectorField xi;
    OneForm eta;
    MetricField g;
    std::function<bool(const ChartPoint&)> domain;
    std::string label;
    StructureRecipe recipe;

    bool in_domain(const ChartPoint& p) const { return !domain || domain(p); }
    void require_in_domain(const ChartPoint& p) const {
        if (!in_domain(p)) throw OutOfDomain("point outside structure domain: " + label);
    }
};

/// Pointwise residuals of the structure axioms.
struct AxiomResiduals {
    double eta_xi = 0.0;            // eta(xi) = 1
    double phi_square = 0.0;        // phi^2 = I - eta (x) xi
    double phi_xi = 0.0;            // phi xi = 0
    double eta_phi = 0.0;           // eta o phi = 0
    double metric_phi_compat = 0.0; // g(phi U, phi V) = -g(U,V) + eta(U) eta(V)
    double deta_compat = 0.0;       // d eta(U,V) = g(U, phi V), half convention
    double signature = 0.0;         // 0 when (+,+,-), 1 otherwise
    double eigen_balance = 0.0;     // phi on ker eta has eigenvalues +1, -1

    double max() const;
    std::vector<std::pair<std::string, double>> named() const;
};

AxiomResiduals check_structure_axioms(const ParacontactStructure& s, const ChartPoint& p);

/// h = 1/2 L_xi phi.
Mat3J compute_h(const ParacontactStructure& s, const ChartPoint& p);
Tensor11Field compute_h_field(const ParacontactStructure& s);

/// max_V | nabla_V xi - (-phi V + phi h V) | over coordinate basis V.
double check_nabla_xi(const ParacontactStructure& s, const ChartPoint& p);

enum class HType { h1, h2, h3, zero, degenerate };

struct HClassification {
    HType type = HType::degenerate;
    double lambda = 0.0; // sqrt(|c|) for h1/h3
    double c = 0.0;      // scalar with h^2 = c I on ker eta
};

const char* to_string(HType t);

HClassification classify_h_type(const ParacontactStructure& s, const ChartPoint& p);

/// eta -> alpha eta, xi -> xi/alpha, phi -> phi,
/// g -> alpha g + alpha(alpha-1) eta (x) eta.
ParacontactStructure d_homothetic_deform(const ParacontactStructure& s, double alpha);

/// max residual of R(U,V)xi + (eta(V)U - eta(U)V) over coordinate basis
/// pairs.  Near zero means the necessary para-Sasakian curvature condition is
/// met; it never certifies para-Sasakian.
double para_sasakian_residual(const ParacontactStructure& s, const ChartPoint& p);

namespace detail {

/// Deterministic pair of coordinate axes whose phi-images span ker eta:
/// first pair in order (0,1), (0,2), (1,2) with a non-collapsed cross
/// product, relative threshold 1e-6.
std::pair<int, int> d_basis_axes(const Mat3<double>& phi_values);

/// Classification from pointwise values (exposed for direct matrix tests).
HClassification classify_h_matrix(const Mat3<double>& h, const Mat3<double>& phi,
                                  const Vec3<double>& xi, double tol = kHTypeTol);

} // namespace detail

} // namespace pcv

#endif
