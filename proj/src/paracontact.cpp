#include "pcv/paracontact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcv {

double AxiomResiduals::max() const {
    return std::max({eta_xi, phi_square, phi_xi, eta_phi, metric_phi_compat, deta_compat,
                     signature, eigen_balance});
}

std::vector<std::pair<std::string, double>> AxiomResiduals::named() const {
    return {{"eta_xi", eta_xi},
            {"phi_square", phi_square},
            {"phi_xi", phi_xi},
            {"eta_phi", eta_phi},
            {"metric_phi_compat", metric_phi_compat},
            {"deta_compat", deta_compat},
            {"signature", signature},
            {"eigen_balance", eigen_balance}};
}

namespace {

Mat3<double> values_of(const Mat3J& m) {
    Mat3<double> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[i][j].value();
    return r;
}

Vec3<double> values_of(const Vec3J& v) { return {v[0].value(), v[1].value(), v[2].value()}; }

} // namespace

namespace detail {

std::pair<int, int> d_basis_axes(const Mat3<double>& phi) {
    auto col = [&](int j) { return Vec3<double>{phi[0][j], phi[1][j], phi[2][j]}; };
    auto norm = [](const Vec3<double>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    // the pair of phi-images spanning the largest 2-volume; strictly-greater
    // comparison keeps the choice deterministic on ties
    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    double best = -1.0;
    std::pair<int, int> pick{0, 1};
    double scale = 0.0;
    for (int j = 0; j < 3; ++j) scale = std::max(scale, norm(col(j)));
    for (auto [i, j] : pairs) {
        Vec3<double> u = col(i), v = col(j);
        Vec3<double> c{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                       u[0] * v[1] - u[1] * v[0]};
        if (norm(c) > best) {
            best = norm(c);
            pick = {i, j};
        }
    }
    if (best <= 1e-12 * std::max(1.0, scale * scale))
        throw DegenerateH("phi has rank < 2: no basis of ker eta from phi-images");
    return pick;
}

HClassification classify_h_matrix(const Mat3<double>& h, const Mat3<double>& phi,
                                  const Vec3<double>& xi, double tol) {
    auto [ai, aj] = d_basis_axes(phi);
    auto col = [&](const Mat3<double>& m, int j) {
        return Vec3<double>{m[0][j], m[1][j], m[2][j]};
    };
    Vec3<double> u = col(phi, ai), v = col(phi, aj);
    Mat3<double> basis;
    for (int r = 0; r < 3; ++r) basis[r] = {u[r], v[r], xi[r]};
    auto apply = [&](const Vec3<double>& w) {
        Vec3<double> r{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) r[a] += h[a][b] * w[b];
        return r;
    };
    // h restricted to span{u, v}: columns of the 2x2 matrix M
    Vec3<double> m1 = solve3(basis, apply(u));
    Vec3<double> m2 = solve3(basis, apply(v));
    double M[2][2] = {{m1[0], m2[0]}, {m1[1], m2[1]}};
    double c = (M[0][0] * M[0][0] + M[0][1] * M[1][0] + M[1][0] * M[0][1] + M[1][1] * M[1][1]) / 2.0;
    double dev = std::max(std::abs(M[0][0] * M[0][0] + M[0][1] * M[1][0] - c),
                          std::abs(M[1][0] * M[0][1] + M[1][1] * M[1][1] - c));
    dev = std::max(dev, std::abs(M[0][0] * M[0][1] + M[0][1] * M[1][1]));
    dev = std::max(dev, std::abs(M[1][0] * M[0][0] + M[1][1] * M[1][0]));
    double hnorm = std::max({std::abs(M[0][0]), std::abs(M[0][1]), std::abs(M[1][0]),
                             std::abs(M[1][1])});
    HClassification out;
    out.c = c;
    if (dev > tol * std::max(1.0, std::abs(c))) {
        out.type = HType::degenerate;
        return out;
    }
    if (c > tol) {
        out.type = HType::h1;
        out.lambda = std::sqrt(c);
    } else if (c < -tol) {
        out.type = HType::h3;
        out.lambda = std::sqrt(-c);
    } else if (hnorm > tol) {
        out.type = HType::h2;
    } else {
        out.type = HType::zero;
    }
    return out;
}

} // namespace detail

const char* to_string(HType t) {
    switch (t) {
    case HType::h1: return "h1";
    case HType::h2: return "h2";
    case HType::h3: return "h3";
    case HType::zero: return "zero";
    default: return "degenerate";
    }
}

AxiomResiduals check_structure_axioms(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    AxiomResiduals r;
    Mat3J phiJ = s.phi(p);
    Vec3J xiJ = s.xi(p);
    Vec3J etaJ = s.eta(p);
    Mat3J gJ = s.g(p);
    Mat3<double> phi = values_of(phiJ), g = values_of(gJ);
    Vec3<double> xi = values_of(xiJ), eta = values_of(etaJ);

    r.eta_xi = std::abs(eta[0] * xi[0] + eta[1] * xi[1] + eta[2] * xi[2] - 1.0);

    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            double pp = 0;
            for (int m = 0; m < 3; ++m) pp += phi[k][m] * phi[m][j];
            double target = (k == j ? 1.0 : 0.0) - xi[k] * eta[j];
            r.phi_square = std::max(r.phi_square, std::abs(pp - target));
        }
        double px = 0, ep = 0;
        for (int m = 0; m < 3; ++m) {
            px += phi[k][m] * xi[m];
            ep += eta[m] * phi[m][k];
        }
        r.phi_xi = std::max(r.phi_xi, std::abs(px));
        r.eta_phi = std::max(r.eta_phi, std::abs(ep));
    }

    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double gphiphi = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) gphiphi += g[a][b] * phi[a][i] * phi[b][j];
            r.metric_phi_compat = std::max(
                r.metric_phi_compat, std::abs(gphiphi + g[i][j] - eta[i] * eta[j]));
        }
    }

    // d eta in coordinates: 1/2 (d_i eta_j - d_j eta_i) against (g phi)_ij
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double deta = 0.5 * (jet_partial(etaJ[j], i).value() - jet_partial(etaJ[i], j).value());
            double gphi = 0;
            for (int k = 0; k < 3; ++k) gphi += g[i][k] * phi[k][j];
            r.deta_compat = std::max(r.deta_compat, std::abs(deta - gphi));
        }
    }

    auto [pos, neg] = signature3(g, 1e-10);
    r.signature = (pos == 2 && neg == 1) ? 0.0 : 1.0;

    // phi restricted to ker eta must square to the identity with zero trace
    // (one +1 and one -1 eigendirection).
    try {
        auto [ai, aj] = detail::d_basis_axes(phi);
        auto col = [&](int j) { return Vec3<double>{phi[0][j], phi[1][j], phi[2][j]}; };
        Vec3<double> u = col(ai), v = col(aj);
        Mat3<double> basis;
        for (int row = 0; row < 3; ++row) basis[row] = {u[row], v[row], xi[row]};
        auto apply_phi = [&](const Vec3<double>& w) {
            Vec3<double> out{};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) out[a] += phi[a][b] * w[b];
            return out;
        };
        Vec3<double> m1 = solve3(basis, apply_phi(u));
        Vec3<double> m2 = solve3(basis, apply_phi(v));
        double M[2][2] = {{m1[0], m2[0]}, {m1[1], m2[1]}};
        double sq00 = M[0][0] * M[0][0] + M[0][1] * M[1][0];
        double sq01 = M[0][0] * M[0][1] + M[0][1] * M[1][1];
        double sq10 = M[1][0] * M[0][0] + M[1][1] * M[1][0];
        double sq11 = M[1][0] * M[0][1] + M[1][1] * M[1][1];
        r.eigen_balance = std::max({std::abs(sq00 - 1.0), std::abs(sq11 - 1.0), std::abs(sq01),
                                    std::abs(sq10), std::abs(M[0][0] + M[1][1])});
    } catch (const Error&) {
        r.eigen_balance = 1.0; // phi-image basis collapsed
    }
    return r;
}

Tensor11Field compute_h_field(const ParacontactStructure& s) {
    Tensor11Field half_lie = lie_derivative_tensor11_field(s.xi, s.phi);
    int budget = half_lie.budget();
    return Tensor11Field(
        [half_lie](const ChartPoint& p) {
            Mat3J m = half_lie(p);
            for (auto& row : m)
                for (auto& e : row) e = 0.5 * e;
            return m;
        },
        budget);
}

Mat3J compute_h(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    Mat3J m = lie_derivative_tensor11(s.xi, s.phi, p);
    for (auto& row : m)
        for (auto& e : row) e = 0.5 * e;
    return m;
}

double check_nabla_xi(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    Christoffel gamma = christoffel(s.g, p);
    Vec3J xiJ = s.xi(p);
    Mat3<double> phi = values_of(s.phi(p));
    Mat3<double> h = values_of(compute_h(s, p));
    double worst = 0.0;
    for (int v = 0; v < 3; ++v) {
        // nabla_{d/dx^v} xi = d_v xi^k + Gamma^k_vj xi^j
        for (int k = 0; k < 3; ++k) {
            double lhs = jet_partial(xiJ[k], v).value();
            for (int j = 0; j < 3; ++j) lhs += gamma[k][v][j].value() * xiJ[j].value();
            double rhs = -phi[k][v];
            for (int j = 0; j < 3; ++j) rhs += phi[k][j] * h[j][v];
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

HClassification classify_h_type(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    Mat3<double> h = values_of(compute_h(s, p));
    Mat3<double> phi = values_of(s.phi(p));
    Vec3<double> xi = values_of(s.xi(p));
    return detail::classify_h_matrix(h, phi, xi);
}

ParacontactStructure d_homothetic_deform(const ParacontactStructure& s, double alpha) {
    if (!(alpha > 0.0)) throw NonpositiveAlpha("deformation requires alpha > 0");
    ParacontactStructure d;
    d.phi = s.phi;
    auto xi = s.xi;
    d.xi = VectorField(
        [xi, alpha](const ChartPoint& p) { return vec_scale(1.0 / alpha, xi(p)); }, xi.budget());
    auto eta = s.eta;
    d.eta = OneForm(
        [eta, alpha](const ChartPoint& p) { return vec_scale(alpha, eta(p)); }, eta.budget());
    auto g = s.g;
    d.g = MetricField(
        [g, eta, alpha](const ChartPoint& p) {
            Mat3J gm = g(p);
            Vec3J ev = eta(p);
            Mat3J r;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    r[i][j] = alpha * gm[i][j] + (alpha * (alpha - 1.0)) * ev[i] * ev[j];
            return r;
        },
        std::min(g.budget(), eta.budget()));
    d.domain = s.domain;
    std::ostringstream lbl;
    lbl << s.label << "@alpha=" << alpha;
    d.label = lbl.str();
    d.recipe.kase = "custom";
    d.recipe.alpha = alpha;
    d.recipe.lambda_min = s.recipe.lambda_min;
    d.recipe.base = std::make_shared<StructureRecipe>(s.recipe);
    return d;
}

double para_sasakian_residual(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    RiemannTensor R = riemann_tensor(s.g, p);
    Vec3<double> xi = values_of(s.xi(p));
    Vec3<double> eta = values_of(s.eta(p));
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            for (int l = 0; l < 3; ++l) {
                double rxy = 0;
                for (int k = 0; k < 3; ++k) rxy += R[l][k][i][j].value() * xi[k];
                double pasa = eta[j] * (l == i ? 1.0 : 0.0) - eta[i] * (l == j ? 1.0 : 0.0);
                worst = std::max(worst, std::abs(rxy + pasa));
            }
        }
    }
    return worst;
}

} // namespace pcv
