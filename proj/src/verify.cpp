#include "pcv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pcv {

const char* kToolVersion = "0.1.0";

bool CheckReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// per-point lazy computation shared by every entry at that point
// ---------------------------------------------------------------------------

struct PointContext {
    const ParacontactStructure& s;
    ChartPoint p;

    PointContext(const ParacontactStructure& st, const ChartPoint& pt) : s(st), p(pt) {}

    const Mat3J& phi() { return basics().phi_; }
    const Mat3J& g() { return basics().g_; }
    const Mat3J& ginv() {
        if (!ginv_) ginv_ = inverse3(g());
        return *ginv_;
    }
    const Vec3J& xi() { return basics().xi_; }
    const Vec3J& eta() { return basics().eta_; }
    const Mat3J& h() {
        if (!h_) h_ = compute_h(s, p);
        return *h_;
    }
    const AxiomResiduals& axioms() {
        if (!ax_) ax_ = check_structure_axioms(s, p);
        return *ax_;
    }
    const Christoffel& gamma() {
        if (!gamma_) gamma_ = christoffel_from_jets(g());
        return *gamma_;
    }
    const RiemannTensor& riem() {
        if (!riem_) riem_ = riemann_tensor(s.g, p);
        return *riem_;
    }
    const HFramePoint& frame() {
        if (!frame_) frame_ = build_h_frame_at(s, p);
        return *frame_;
    }
    const NullityCoefficients& null() {
        if (!null_) null_ = extract_nullity(s, p);
        return *null_;
    }
    const Mat3J& ricci_q() {
        ensure_ricci();
        return *Q_;
    }
    double tau() {
        ensure_ricci();
        return tau_->value();
    }

    // directional derivative of a jet along jet-valued vector components
    static Jet3 dir_jet(const Vec3J& U, const Jet3& f) {
        Jet3 r = Jet3::constant(0.0);
        for (int i = 0; i < 3; ++i) r += U[i] * jet_partial(f, i);
        return r;
    }
    static double dir_value(const Vec3J& U, const Jet3& f) {
        double r = 0;
        for (int i = 0; i < 3; ++i) r += U[i].value() * jet_partial(f, i).value();
        return r;
    }
    // nabla_U V from cached Christoffel (U values, V jets)
    Vec3J cov(const Vec3J& U, const Vec3J& V) {
        const Christoffel& G = gamma();
        Vec3J r;
        for (int k = 0; k < 3; ++k) {
            Jet3 t = Jet3::constant(0.0);
            for (int i = 0; i < 3; ++i) {
                t += U[i] * jet_partial(V[k], i);
                for (int j = 0; j < 3; ++j) t += U[i] * G[k][i][j] * V[j];
            }
            r[k] = t;
        }
        return r;
    }
    static Vec3J bracket(const Vec3J& U, const Vec3J& V) {
        Vec3J r;
        for (int k = 0; k < 3; ++k) {
            Jet3 t = Jet3::constant(0.0);
            for (int i = 0; i < 3; ++i)
                t += U[i] * jet_partial(V[k], i) - V[i] * jet_partial(U[k], i);
            r[k] = t;
        }
        return r;
    }
    static double max_comp(const Vec3J& v) {
        return std::max({std::abs(v[0].value()), std::abs(v[1].value()),
                         std::abs(v[2].value())});
    }

    Vec3J grad_jet(const Jet3& f) {
        const Mat3J& Gi = ginv();
        Vec3J df{jet_partial(f, 0), jet_partial(f, 1), jet_partial(f, 2)};
        return mat_apply(Gi, df);
    }
    double grad_norm_sq_value(const Jet3& f) {
        const Mat3J& Gi = ginv();
        double r = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r += Gi[i][j].value() * jet_partial(f, i).value() * jet_partial(f, j).value();
        return r;
    }

    /// Signed-frame Laplacian of the extracted lambda, from frame jets.
    double laplacian_frame(const Jet3& f) {
        const HFramePoint& fr = frame();
        const std::array<const Vec3J*, 3> legs{&fr.X, &fr.phiX, &xi()};
        const std::array<double, 3> eps{-1.0, 1.0, 1.0};
        double sum = 0;
        for (int i = 0; i < 3; ++i) {
            Jet3 d1 = dir_jet(*legs[i], f);
            double eef = dir_value(*legs[i], d1);
            Vec3J nee = cov(*legs[i], *legs[i]);
            double neef = 0;
            for (int k = 0; k < 3; ++k) neef += nee[k].value() * jet_partial(f, k).value();
            sum += eps[i] * (eef - neef);
        }
        return sum;
    }
    /// Coordinate-divergence Laplacian of the same scalar jet.
    double laplacian_divergence(const Jet3& f) {
        const Mat3J& G = g();
        const Mat3J& Gi = ginv();
        Jet3 d = det3(G);
        Jet3 sq = jet_sqrt(d.value() < 0.0 ? -d : d);
        Jet3 div = Jet3::constant(0.0);
        for (int i = 0; i < 3; ++i) {
            Jet3 t = Jet3::constant(0.0);
            for (int j = 0; j < 3; ++j) t += Gi[i][j] * jet_partial(f, j);
            div += jet_partial(sq * t, i);
        }
        return div.value() / sq.value();
    }

  private:
    struct Basics {
        Mat3J phi_, g_;
        Vec3J xi_, eta_;
    };
    Basics& basics() {
        if (!b_) {
            s.require_in_domain(p);
            b_ = Basics{s.phi(p), s.g(p), s.xi(p), s.eta(p)};
        }
        return *b_;
    }
    void ensure_ricci() {
        if (Q_) return;
        const RiemannTensor& R = riem();
        Mat3J ric;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                Jet3 t = Jet3::constant(0.0);
                for (int m = 0; m < 3; ++m) t += R[m][b][m][a];
                ric[a][b] = t;
            }
        const Mat3J& Gi = ginv();
        Mat3J Q;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Jet3 t = Jet3::constant(0.0);
                for (int k = 0; k < 3; ++k) t += Gi[i][k] * ric[k][j];
                Q[i][j] = t;
            }
        Q_ = Q;
        tau_ = Q[0][0] + Q[1][1] + Q[2][2];
    }

    std::optional<Basics> b_;
    std::optional<Mat3J> ginv_, h_, Q_;
    std::optional<Jet3> tau_;
    std::optional<AxiomResiduals> ax_;
    std::optional<Christoffel> gamma_;
    std::optional<RiemannTensor> riem_;
    std::optional<HFramePoint> frame_;
    std::optional<NullityCoefficients> null_;
};

// ---------------------------------------------------------------------------
// entry registry
// ---------------------------------------------------------------------------

enum class Tier { first_order, curvature, ricci_form, scalar_curvature, nu_deformed, exact_zero };

enum class RegimeFilter { any, gt_only, lt_only };

struct EntryDef {
    std::string name;
    std::string anchor;
    Tier tier = Tier::first_order;
    bool lambda_scaled = false;
    RegimeFilter regime = RegimeFilter::any;
    int context_index = 0; // which structure (base or a deformed copy)
    bool global = false;   // computed once over the grid, not per point
    std::function<double(PointContext&)> eval;
};

double tier_tolerance(Tier t, const ToleranceConfig& tol) {
    switch (t) {
    case Tier::first_order: return tol.first_order;
    case Tier::curvature: return tol.curvature;
    case Tier::ricci_form: return tol.ricci_form;
    case Tier::scalar_curvature: return tol.scalar_curvature;
    case Tier::nu_deformed: return tol.nu_deformed;
    case Tier::exact_zero: return 0.0;
    }
    return 0.0;
}

std::vector<EntryDef> axioms_entries(const std::string& prefix, int ctx) {
    std::vector<EntryDef> v;
    auto add = [&](std::string n, std::string anchor, std::function<double(PointContext&)> f,
                   Tier tier = Tier::first_order) {
        v.push_back({prefix + n, std::move(anchor), tier, false, RegimeFilter::any, ctx, false,
                     std::move(f)});
    };
    add("eta_xi", "eta(xi) = 1", [](PointContext& c) { return c.axioms().eta_xi; });
    add("phi_square", "phi^2 = I - eta (x) xi",
        [](PointContext& c) { return c.axioms().phi_square; });
    add("phi_xi", "phi xi = 0", [](PointContext& c) { return c.axioms().phi_xi; });
    add("eta_phi", "eta o phi = 0", [](PointContext& c) { return c.axioms().eta_phi; });
    add("metric_phi_compat", "g(phi U, phi V) = -g(U,V) + eta(U) eta(V)",
        [](PointContext& c) { return c.axioms().metric_phi_compat; });
    add("deta_compat", "d eta(U,V) = g(U, phi V)  [half convention]",
        [](PointContext& c) { return c.axioms().deta_compat; });
    add("signature", "metric signature (+,+,-)",
        [](PointContext& c) { return c.axioms().signature; });
    add("eigen_balance", "phi on ker eta has eigenvalues +1 and -1",
        [](PointContext& c) { return c.axioms().eigen_balance; });
    add("h_xi", "h xi = 0", [](PointContext& c) {
        return PointContext::max_comp(mat_apply(c.h(), c.xi()));
    });
    add("h_traces", "tr h = 0 and tr(h phi) = 0", [](PointContext& c) {
        const Mat3J& h = c.h();
        const Mat3J& phi = c.phi();
        double tr = h[0][0].value() + h[1][1].value() + h[2][2].value();
        double trp = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) trp += h[i][j].value() * phi[j][i].value();
        return std::max(std::abs(tr), std::abs(trp));
    });
    add("h_phi_anticommute", "h phi + phi h = 0", [](PointContext& c) {
        const Mat3J& h = c.h();
        const Mat3J& phi = c.phi();
        double worst = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double t = 0;
                for (int k = 0; k < 3; ++k)
                    t += h[i][k].value() * phi[k][j].value() +
                         phi[i][k].value() * h[k][j].value();
                worst = std::max(worst, std::abs(t));
            }
        return worst;
    });
    add("nabla_xi", "nabla_V xi = -phi V + phi h V", [](PointContext& c) {
        const Christoffel& G = c.gamma();
        const Vec3J& xi = c.xi();
        const Mat3J& phi = c.phi();
        const Mat3J& h = c.h();
        double worst = 0;
        for (int vdir = 0; vdir < 3; ++vdir) {
            for (int k = 0; k < 3; ++k) {
                double lhs = jet_partial(xi[k], vdir).value();
                for (int j = 0; j < 3; ++j) lhs += G[k][vdir][j].value() * xi[j].value();
                double rhs = -phi[k][vdir].value();
                for (int j = 0; j < 3; ++j) rhs += phi[k][j].value() * h[j][vdir].value();
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        return worst;
    });
    add("volume_form", "eta ^ d eta != 0  [unnormalized d]", [](PointContext& c) {
        const Vec3J& eta = c.eta();
        auto deta = [&](int i, int j) {
            return jet_partial(eta[j], i).value() - jet_partial(eta[i], j).value();
        };
        double vol = eta[0].value() * deta(1, 2) - eta[1].value() * deta(0, 2) +
                     eta[2].value() * deta(0, 1);
        return std::max(0.0, 1e-6 - std::abs(vol));
    }, Tier::exact_zero);
    return v;
}

std::vector<EntryDef> l1_entries(int ctx) {
    std::vector<EntryDef> v;
    auto add = [&](std::string n, std::string anchor, Tier t,
                   std::function<double(PointContext&)> f) {
        v.push_back({"L1/" + n, std::move(anchor), t, false, RegimeFilter::any, ctx, false,
                     std::move(f)});
    };
    add("h_squared", "h^2 = (1 + kappa) phi^2", Tier::curvature, [](PointContext& c) {
        double kappa = c.null().kappa.value();
        const Mat3J& h = c.h();
        const Mat3J& phi = c.phi();
        double worst = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double hh = 0, pp = 0;
                for (int k = 0; k < 3; ++k) {
                    hh += h[i][k].value() * h[k][j].value();
                    pp += phi[i][k].value() * phi[k][j].value();
                }
                worst = std::max(worst, std::abs(hh - (1.0 + kappa) * pp));
            }
        return worst;
    });
    add("xi_kappa", "xi(kappa) = 0", Tier::curvature, [](PointContext& c) {
        return std::abs(PointContext::dir_value(c.xi(), c.null().kappa));
    });
    add("ricci_xi", "Q xi = 2 kappa xi", Tier::curvature, [](PointContext& c) {
        double kappa = c.null().kappa.value();
        Vec3J qxi = mat_apply(c.ricci_q(), c.xi());
        return PointContext::max_comp(vec_sub(qxi, vec_scale(2.0 * kappa, c.xi())));
    });
    add("ricci_operator_form",
        "Q = (tau/2 - kappa) I + (-tau/2 + 3 kappa) eta (x) xi + mu h", Tier::ricci_form,
        [](PointContext& c) {
            double kappa = c.null().kappa.value();
            double mu = c.null().mu.value();
            double tau = c.tau();
            const Mat3J& Q = c.ricci_q();
            const Mat3J& h = c.h();
            const Vec3J& xi = c.xi();
            const Vec3J& eta = c.eta();
            double worst = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double expect = (tau / 2 - kappa) * (i == j ? 1.0 : 0.0) +
                                    (-tau / 2 + 3 * kappa) * xi[i].value() * eta[j].value() +
                                    mu * h[i][j].value();
                    worst = std::max(worst, std::abs(Q[i][j].value() - expect));
                }
            return worst;
        });
    return v;
}

// shared shapes of the Lemma connection identities; kappa_gt gets the L2
// coefficients, kappa_lt the L3 ones
std::vector<EntryDef> lemma_entries(bool gt, int ctx) {
    std::vector<EntryDef> v;
    const std::string pre = gt ? "L2/" : "L3/";
    RegimeFilter rf = gt ? RegimeFilter::gt_only : RegimeFilter::lt_only;
    auto add = [&](std::string n, std::string anchor, Tier t, bool lscaled,
                   std::function<double(PointContext&)> f) {
        v.push_back({pre + n, std::move(anchor), t, lscaled, rf, ctx, false, std::move(f)});
    };

    add("cov_deriv_xi",
        gt ? "nabla_X xi = (lambda - 1) phiX ; nabla_phiX xi = -(lambda + 1) X"
           : "nabla_X xi = -phiX + lambda X ; nabla_phiX xi = -X - lambda phiX",
        Tier::first_order, false, [gt](PointContext& c) {
            const HFramePoint& f = c.frame();
            double lam = f.lambda.value();
            Vec3J lhs1 = c.cov(f.X, c.xi());
            Vec3J lhs2 = c.cov(f.phiX, c.xi());
            Vec3J rhs1, rhs2;
            if (gt) {
                rhs1 = vec_scale(lam - 1.0, f.phiX);
                rhs2 = vec_scale(-(lam + 1.0), f.X);
            } else {
                rhs1 = vec_add(vec_scale(-1.0, f.phiX), vec_scale(lam, f.X));
                rhs2 = vec_sub(vec_scale(-1.0, f.X), vec_scale(lam, f.phiX));
            }
            return std::max(PointContext::max_comp(vec_sub(lhs1, rhs1)),
                            PointContext::max_comp(vec_sub(lhs2, rhs2)));
        });
    add("cov_deriv_along_xi", "nabla_xi X = -(mu/2) phiX ; nabla_xi phiX = -(mu/2) X",
        Tier::curvature, false, [](PointContext& c) {
            const HFramePoint& f = c.frame();
            double mu2 = 0.5 * c.null().mu.value();
            Vec3J lhs1 = c.cov(c.xi(), f.X);
            Vec3J lhs2 = c.cov(c.xi(), f.phiX);
            return std::max(
                PointContext::max_comp(vec_add(lhs1, vec_scale(mu2, f.phiX))),
                PointContext::max_comp(vec_add(lhs2, vec_scale(mu2, f.X))));
        });
    add("cov_deriv_self",
        gt ? "nabla_X X = -(B/2 lambda) phiX ; nabla_phiX phiX = -(A/2 lambda) X"
           : "nabla_X X = -(B/2 lambda) phiX + lambda xi ; nabla_phiX phiX = -(A/2 lambda) X + "
             "lambda xi",
        Tier::curvature, true, [gt](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            double A = n.A.value(), B = n.B.value();
            Vec3J lhs1 = c.cov(f.X, f.X);
            Vec3J lhs2 = c.cov(f.phiX, f.phiX);
            Vec3J rhs1 = vec_scale(-B / (2 * lam), f.phiX);
            Vec3J rhs2 = vec_scale(-A / (2 * lam), f.X);
            if (!gt) {
                rhs1 = vec_add(rhs1, vec_scale(lam, c.xi()));
                rhs2 = vec_add(rhs2, vec_scale(lam, c.xi()));
            }
            return std::max(PointContext::max_comp(vec_sub(lhs1, rhs1)),
                            PointContext::max_comp(vec_sub(lhs2, rhs2)));
        });
    add("cov_deriv_cross",
        gt ? "nabla_phiX X = -(A/2 lambda) phiX - (lambda + 1) xi ; nabla_X phiX = -(B/2 lambda) "
             "X + (1 - lambda) xi"
           : "nabla_phiX X = -(A/2 lambda) phiX - xi ; nabla_X phiX = -(B/2 lambda) X + xi",
        Tier::curvature, true, [gt](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            double A = n.A.value(), B = n.B.value();
            Vec3J lhs1 = c.cov(f.phiX, f.X);
            Vec3J lhs2 = c.cov(f.X, f.phiX);
            Vec3J rhs1 = vec_add(vec_scale(-A / (2 * lam), f.phiX),
                                 vec_scale(gt ? -(lam + 1.0) : -1.0, c.xi()));
            Vec3J rhs2 = vec_add(vec_scale(-B / (2 * lam), f.X),
                                 vec_scale(gt ? (1.0 - lam) : 1.0, c.xi()));
            return std::max(PointContext::max_comp(vec_sub(lhs1, rhs1)),
                            PointContext::max_comp(vec_sub(lhs2, rhs2)));
        });
    add("bracket_xi",
        gt ? "[xi, X] = (1 - lambda - mu/2) phiX ; [xi, phiX] = (lambda + 1 - mu/2) X"
           : "[xi, X] = -lambda X + (1 - mu/2) phiX ; [xi, phiX] = (1 - mu/2) X + lambda phiX",
        Tier::curvature, false, [gt](PointContext& c) {
            const HFramePoint& f = c.frame();
            double lam = f.lambda.value();
            double mu2 = 0.5 * c.null().mu.value();
            Vec3J lhs1 = PointContext::bracket(c.xi(), f.X);
            Vec3J lhs2 = PointContext::bracket(c.xi(), f.phiX);
            Vec3J rhs1, rhs2;
            if (gt) {
                rhs1 = vec_scale(1.0 - lam - mu2, f.phiX);
                rhs2 = vec_scale(lam + 1.0 - mu2, f.X);
            } else {
                rhs1 = vec_add(vec_scale(-lam, f.X), vec_scale(1.0 - mu2, f.phiX));
                rhs2 = vec_add(vec_scale(1.0 - mu2, f.X), vec_scale(lam, f.phiX));
            }
            return std::max(PointContext::max_comp(vec_sub(lhs1, rhs1)),
                            PointContext::max_comp(vec_sub(lhs2, rhs2)));
        });
    add("bracket_x_phix", "[X, phiX] = -(B/2 lambda) X + (A/2 lambda) phiX + 2 xi",
        Tier::curvature, true, [](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            Vec3J lhs = PointContext::bracket(f.X, f.phiX);
            Vec3J rhs = vec_add(vec_add(vec_scale(-n.B.value() / (2 * lam), f.X),
                                        vec_scale(n.A.value() / (2 * lam), f.phiX)),
                                vec_scale(2.0, c.xi()));
            return PointContext::max_comp(vec_sub(lhs, rhs));
        });
    add("h_grad_mu", "h grad mu = grad kappa", Tier::curvature, false, [](PointContext& c) {
        const NullityCoefficients& n = c.null();
        Vec3J gmu = c.grad_jet(n.mu);
        Vec3J gka = c.grad_jet(n.kappa);
        Vec3J hgmu = mat_apply(c.h(), gmu);
        return PointContext::max_comp(vec_sub(hgmu, gka));
    });
    add("x_mu", gt ? "X(mu) = 2A" : "X(mu) = 2B", Tier::curvature, false,
        [gt](PointContext& c) {
            const NullityCoefficients& n = c.null();
            double lhs = PointContext::dir_value(c.frame().X, n.mu);
            return std::abs(lhs - 2.0 * (gt ? n.A.value() : n.B.value()));
        });
    add("phix_mu", gt ? "phiX(mu) = -2B" : "phiX(mu) = -2A", Tier::curvature, false,
        [gt](PointContext& c) {
            const NullityCoefficients& n = c.null();
            double lhs = PointContext::dir_value(c.frame().phiX, n.mu);
            return std::abs(lhs + 2.0 * (gt ? n.B.value() : n.A.value()));
        });
    add("xi_A",
        gt ? "xi(A) = (1 - lambda - mu/2) B" : "xi(A) = -lambda A + (1 - mu/2) B",
        Tier::curvature, false, [gt](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            double mu2 = 0.5 * n.mu.value();
            double xiA = PointContext::dir_value(c.xi(), n.A);
            double rhs = gt ? (1.0 - lam - mu2) * n.B.value()
                            : -lam * n.A.value() + (1.0 - mu2) * n.B.value();
            return std::abs(xiA - rhs);
        });
    add("xi_B",
        gt ? "xi(B) = (lambda + 1 - mu/2) A" : "xi(B) = (1 - mu/2) A + lambda B",
        Tier::curvature, false, [gt](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            double mu2 = 0.5 * n.mu.value();
            double xiB = PointContext::dir_value(c.xi(), n.B);
            double rhs = gt ? (lam + 1.0 - mu2) * n.A.value()
                            : (1.0 - mu2) * n.A.value() + lam * n.B.value();
            return std::abs(xiB - rhs);
        });
    add("bracket_xi_phigrad", "[xi, phi grad lambda] = 0", Tier::curvature, false,
        [](PointContext& c) {
            const HFramePoint& f = c.frame();
            Vec3J grad = c.grad_jet(f.lambda);
            Vec3J pgrad = mat_apply(c.phi(), grad);
            return PointContext::max_comp(PointContext::bracket(c.xi(), pgrad));
        });
    add("grad_lambda_frame", "grad lambda = -A X + B phiX", Tier::curvature, false,
        [](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            Vec3J grad = c.grad_jet(f.lambda);
            Vec3J rhs = vec_add(vec_scale(-n.A.value(), f.X), vec_scale(n.B.value(), f.phiX));
            return PointContext::max_comp(vec_sub(grad, rhs));
        });
    return v;
}

std::vector<EntryDef> curvature_entries(int ctx) {
    std::vector<EntryDef> v;
    auto add = [&](std::string n, std::string anchor, Tier t, bool lscaled,
                   std::function<double(PointContext&)> f) {
        v.push_back({"curvature/" + n, std::move(anchor), t, lscaled, RegimeFilter::any, ctx,
                     false, std::move(f)});
    };
    add("nullity_residual", "R(.,xi)xi = kappa(...) + mu h(...) + nu phi h(...) fit residual",
        Tier::curvature, false, [](PointContext& c) { return c.null().residual; });
    add("nu_zero", "nu = 0", Tier::curvature, false,
        [](PointContext& c) { return std::abs(c.null().nu.value()); });
    add("laplacian_identity",
        "Lap lambda = -X(A) + phiX(B) + (A^2 - B^2)/(2 lambda)", Tier::curvature, true,
        [](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            double lap = c.laplacian_frame(f.lambda);
            double XA = PointContext::dir_value(f.X, n.A);
            double PB = PointContext::dir_value(f.phiX, n.B);
            double A = n.A.value(), B = n.B.value();
            return std::abs(lap - (-XA + PB + (A * A - B * B) / (2 * lam)));
        });
    add("scalar_curvature",
        "tau = (1/lambda) Lap lambda - (1/lambda^2) |grad lambda|^2 + 2(kappa + mu)",
        Tier::scalar_curvature, true, [](PointContext& c) {
            const HFramePoint& f = c.frame();
            const NullityCoefficients& n = c.null();
            double lam = f.lambda.value();
            double lap = c.laplacian_frame(f.lambda);
            double gn = c.grad_norm_sq_value(f.lambda);
            double formula = lap / lam - gn / (lam * lam) +
                             2.0 * (n.kappa.value() + n.mu.value());
            return std::abs(c.tau() - formula);
        });
    add("laplacian_forms_agree", "signed-frame Laplacian = coordinate-divergence Laplacian",
        Tier::curvature, true, [](PointContext& c) {
            const HFramePoint& f = c.frame();
            return std::abs(c.laplacian_frame(f.lambda) - c.laplacian_divergence(f.lambda));
        });
    return v;
}

std::vector<EntryDef> main_theorem_entries(int ctx) {
    std::vector<EntryDef> v;
    auto add = [&](std::string n, std::string anchor, Tier t,
                   std::function<double(PointContext&)> f, bool global = false) {
        v.push_back({"main_theorem/" + n, std::move(anchor), t, false, RegimeFilter::gt_only,
                     ctx, global, std::move(f)});
    };
    add("mu_branch", "mu = 2(1 + lambda) or mu = 2(1 - lambda)", Tier::curvature,
        [](PointContext& c) {
            const NullityCoefficients& n = c.null();
            double mu = n.mu.value(), lam = n.lambda.value();
            return std::min(std::abs(mu - 2.0 * (1.0 + lam)), std::abs(mu - 2.0 * (1.0 - lam)));
        });
    add("branch_product_F", "(1 + lambda - mu/2)(1 - lambda - mu/2) = 0", Tier::curvature,
        [](PointContext& c) {
            const NullityCoefficients& n = c.null();
            double mu2 = 0.5 * n.mu.value(), lam = n.lambda.value();
            return std::abs((1.0 + lam - mu2) * (1.0 - lam - mu2));
        });
    add("xi_mu", "xi(mu) = 0", Tier::curvature, [](PointContext& c) {
        return std::abs(PointContext::dir_value(c.xi(), c.null().mu));
    });
    add("gradient_component", "B = 0 on branch plus ; A = 0 on branch minus", Tier::curvature,
        [](PointContext& c) {
            const NullityCoefficients& n = c.null();
            double mu = n.mu.value(), lam = n.lambda.value();
            bool plus = std::abs(mu - 2.0 * (1.0 + lam)) <= std::abs(mu - 2.0 * (1.0 - lam));
            return std::abs(plus ? n.B.value() : n.A.value());
        });
    add("z_only_dependence", "kappa and mu depend only on z", Tier::curvature,
        [](PointContext&) { return 0.0; }, true);
    return v;
}

// ---------------------------------------------------------------------------
// suite assembly and evaluation
// ---------------------------------------------------------------------------

struct SuiteParse {
    std::string name; // canonical ("deformation(2)" keeps its argument)
    double alpha = 0.0;
    bool is_deformation = false;
};

SuiteParse parse_suite_name(const std::string& raw) {
    SuiteParse sp;
    sp.name = raw;
    if (raw.rfind("deformation", 0) == 0) {
        sp.is_deformation = true;
        sp.alpha = 2.0;
        auto open = raw.find('(');
        if (open != std::string::npos) {
            auto close = raw.find(')', open);
            if (close == std::string::npos)
                throw Error("malformed suite name '" + raw + "': missing ')'");
            sp.alpha = std::stod(raw.substr(open + 1, close - open - 1));
        }
        return sp;
    }
    static const std::set<std::string> known{"axioms", "L1", "L2", "L3", "curvature",
                                             "main_theorem"};
    if (!known.count(raw))
        throw Error("unknown suite '" + raw +
                    "' (expected axioms, L1, L2, L3, curvature, main_theorem, deformation)");
    return sp;
}

struct EvalCell {
    double residual = 0.0;
    // 0 = ok, 1 = error, 2 = not applicable (wrong regime)
    std::uint8_t status = 2;
};

double fiber_spread(const ParacontactStructure& s, const GridSpec& grid,
                    const std::vector<ChartPoint>& pts, std::string& note) {
    // up to 5 distinct z fibers, 4 (x,y) probes each
    std::vector<double> zs;
    for (const auto& p : pts) zs.push_back(p.z);
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             zs.end());
    std::vector<double> fibers;
    if (zs.size() <= 5)
        fibers = zs;
    else
        for (int i = 0; i < 5; ++i) fibers.push_back(zs[i * (zs.size() - 1) / 4]);
    const std::array<std::pair<double, double>, 4> probes{
        {{0.2, 0.3}, {0.75, 0.5}, {0.45, 0.85}, {0.1, 0.6}}};
    double worst = 0.0;
    int fibers_used = 0;
    for (double z : fibers) {
        double kmin = 0, kmax = 0, mmin = 0, mmax = 0;
        int got = 0;
        for (auto [tx, ty] : probes) {
            ChartPoint p{grid.box[0][0] + (grid.box[0][1] - grid.box[0][0]) * tx,
                         grid.box[1][0] + (grid.box[1][1] - grid.box[1][0]) * ty, z};
            try {
                NullityCoefficients n = extract_nullity(s, p);
                double k = n.kappa.value(), m = n.mu.value();
                if (got == 0) {
                    kmin = kmax = k;
                    mmin = mmax = m;
                } else {
                    kmin = std::min(kmin, k);
                    kmax = std::max(kmax, k);
                    mmin = std::min(mmin, m);
                    mmax = std::max(mmax, m);
                }
                ++got;
            } catch (const Error&) {
            }
        }
        if (got >= 2) {
            ++fibers_used;
            worst = std::max({worst, kmax - kmin, mmax - mmin});
        }
    }
    std::ostringstream n;
    n << fibers_used << " z-fibers x 4 probes";
    note = n.str();
    return worst;
}

} // namespace

CheckReport run_suites(const ParacontactStructure& s, const std::vector<std::string>& suites,
                       const GridSpec& grid, const ToleranceConfig& tol, bool parallel) {
    // contexts: index 0 is the base structure; each deformation suite adds one
    std::vector<std::shared_ptr<const ParacontactStructure>> structures;
    structures.push_back(std::shared_ptr<const ParacontactStructure>(&s, [](auto*) {}));

    bool need_frame = false;
    std::vector<EntryDef> defs;
    std::vector<std::string> suite_names;
    for (const auto& raw : suites) {
        SuiteParse sp = parse_suite_name(raw);
        suite_names.push_back(sp.name);
        if (sp.is_deformation) {
            auto deformed =
                std::make_shared<ParacontactStructure>(d_homothetic_deform(s, sp.alpha));
            structures.push_back(deformed);
            int ctx = static_cast<int>(structures.size()) - 1;
            for (auto& e : axioms_entries(sp.name + "/", ctx)) defs.push_back(std::move(e));
            std::ostringstream nu_anchor;
            nu_anchor << "nu stays 0 after the deformation (alpha = " << sp.alpha << ")";
            defs.push_back({sp.name + "/nu", nu_anchor.str(), Tier::nu_deformed, false,
                            RegimeFilter::any, ctx, false,
                            [](PointContext& c) { return std::abs(c.null().nu.value()); }});
        } else if (sp.name == "axioms") {
            for (auto& e : axioms_entries("axioms/", 0)) defs.push_back(std::move(e));
        } else if (sp.name == "L1") {
            for (auto& e : l1_entries(0)) defs.push_back(std::move(e));
        } else if (sp.name == "L2") {
            for (auto& e : lemma_entries(true, 0)) defs.push_back(std::move(e));
            need_frame = true;
        } else if (sp.name == "L3") {
            for (auto& e : lemma_entries(false, 0)) defs.push_back(std::move(e));
            need_frame = true;
        } else if (sp.name == "curvature") {
            for (auto& e : curvature_entries(0)) defs.push_back(std::move(e));
            need_frame = true;
        } else { // main_theorem
            for (auto& e : main_theorem_entries(0)) defs.push_back(std::move(e));
            need_frame = true;
        }
    }

    GridPoints gp = sample_grid(grid, s, need_frame);
    const auto& pts = gp.points;
    const int npts = static_cast<int>(pts.size());
    const int ndefs = static_cast<int>(defs.size());
    const int nctx = static_cast<int>(structures.size());

    std::vector<EvalCell> cells(static_cast<std::size_t>(npts) * ndefs);
    std::vector<double> lambdas(npts, std::numeric_limits<double>::quiet_NaN());

    bool needs_regime = false, needs_lambda = false;
    for (const auto& d : defs) {
        needs_regime = needs_regime || d.regime != RegimeFilter::any;
        needs_lambda = needs_lambda || d.lambda_scaled;
    }
    needs_lambda = needs_lambda || needs_regime;

    // the per-point kernel is identical in the serial and OpenMP paths;
    // reductions below are serial either way, so results are bitwise equal
    auto kernel = [&](int ip) {
        std::vector<std::unique_ptr<PointContext>> ctx;
        ctx.reserve(nctx);
        for (int c = 0; c < nctx; ++c)
            ctx.push_back(std::make_unique<PointContext>(*structures[c], pts[ip]));
        std::optional<Regime> regime;
        if (needs_lambda) {
            try {
                regime = ctx[0]->frame().regime;
                lambdas[ip] = ctx[0]->frame().lambda.value();
            } catch (const Error&) {
            }
        }
        for (int ie = 0; ie < ndefs; ++ie) {
            const EntryDef& d = defs[ie];
            EvalCell& cell = cells[static_cast<std::size_t>(ip) * ndefs + ie];
            if (d.global) continue; // handled after the grid pass
            if (d.regime != RegimeFilter::any) {
                if (!regime) {
                    cell.status = 1; // frame needed but not constructible
                    continue;
                }
                bool want_gt = d.regime == RegimeFilter::gt_only;
                if ((*regime == Regime::kappa_gt) != want_gt) {
                    cell.status = 2;
                    continue;
                }
            }
            try {
                cell.residual = d.eval(*ctx[d.context_index]);
                cell.status = std::isfinite(cell.residual) ? 0 : 1;
            } catch (const Error&) {
                cell.status = 1;
            }
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int ip = 0; ip < npts; ++ip) kernel(ip);
    } else {
        for (int ip = 0; ip < npts; ++ip) kernel(ip);
    }

    double lambda_min_on_grid = std::numeric_limits<double>::infinity();
    for (double l : lambdas)
        if (std::isfinite(l)) lambda_min_on_grid = std::min(lambda_min_on_grid, l);
    if (!std::isfinite(lambda_min_on_grid)) lambda_min_on_grid = 1.0;
    double lambda_scale = std::max(1.0, 1.0 / lambda_min_on_grid);

    CheckReport report;
    report.structure_label = s.label;
    report.grid = grid;
    report.tool_version = kToolVersion;
    report.suites = suite_names;
    report.tolerances = tol;
    report.points_used = npts;
    report.points_excluded = gp.excluded;
    report.lambda_min_on_grid = lambda_min_on_grid;

    int point_errors = 0;
    for (int ie = 0; ie < ndefs; ++ie) {
        const EntryDef& d = defs[ie];
        CheckEntry e;
        e.name = d.name;
        e.anchor = d.anchor;
        e.tolerance = tier_tolerance(d.tier, tol) * (d.lambda_scaled ? lambda_scale : 1.0);
        if (d.global) {
            std::string note;
            try {
                e.max_residual = fiber_spread(*structures[d.context_index], grid, pts, note);
                e.evaluated = npts;
                e.note = note;
            } catch (const Error& err) {
                e.errors = 1;
                e.note = err.what();
            }
            e.pass = e.errors == 0 && e.max_residual <= e.tolerance;
            report.entries.push_back(std::move(e));
            continue;
        }
        std::vector<WorstPoint> all;
        int na = 0;
        for (int ip = 0; ip < npts; ++ip) {
            const EvalCell& cell = cells[static_cast<std::size_t>(ip) * ndefs + ie];
            if (cell.status == 0) {
                ++e.evaluated;
                all.push_back({pts[ip], cell.residual});
                if (cell.residual > e.max_residual) {
                    e.max_residual = cell.residual;
                    e.argmax = pts[ip];
                }
            } else if (cell.status == 1) {
                ++e.errors;
            } else {
                ++na;
            }
        }
        point_errors += e.errors;
        std::stable_sort(all.begin(), all.end(),
                         [](const WorstPoint& a, const WorstPoint& b) {
                             return a.residual > b.residual;
                         });
        if (all.size() > 10) all.resize(10);
        // only points over tolerance are worth listing
        while (!all.empty() && all.back().residual <= e.tolerance) all.pop_back();
        e.worst = std::move(all);
        if (e.evaluated == 0 && e.errors == 0 && na > 0) {
            e.skipped = true;
            e.pass = true;
            e.note = "no grid points in the required regime";
        } else if (e.evaluated == 0) {
            e.pass = false;
            e.note = "every grid point failed to evaluate";
        } else {
            e.pass = e.max_residual <= e.tolerance && e.errors == 0;
            if (e.errors > 0) {
                std::ostringstream n;
                n << e.errors << " point(s) failed to evaluate";
                e.note = e.note.empty() ? n.str() : e.note + "; " + n.str();
            }
        }
        report.entries.push_back(std::move(e));
    }
    report.point_errors = point_errors;

    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const CheckEntry& a, const CheckEntry& b) { return a.name < b.name; });
    return report;
}

CheckReport run_suite(const ParacontactStructure& s, const std::string& suite,
                      const GridSpec& grid, const ToleranceConfig& tol, bool parallel) {
    return run_suites(s, {suite}, grid, tol, parallel);
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

namespace {

ordered_json point_json(const ChartPoint& p) {
    return ordered_json::array({p.x, p.y, p.z});
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string render_report(const CheckReport& r, ReportFormat f) {
    if (f == ReportFormat::json) {
        ordered_json j;
        j["schema_version"] = 1;
        j["tool"] = "pcv";
        j["tool_version"] = r.tool_version;
        j["structure"] = r.structure_label;
        ordered_json grid;
        grid["mode"] = r.grid.mode == GridSpec::Mode::lattice ? "lattice" : "random";
        grid["counts"] = ordered_json::array({r.grid.counts[0], r.grid.counts[1],
                                              r.grid.counts[2]});
        grid["count"] = r.grid.count;
        grid["seed"] = r.grid.seed;
        grid["box"] = ordered_json::array(
            {ordered_json::array({r.grid.box[0][0], r.grid.box[0][1]}),
             ordered_json::array({r.grid.box[1][0], r.grid.box[1][1]}),
             ordered_json::array({r.grid.box[2][0], r.grid.box[2][1]})});
        grid["points_used"] = r.points_used;
        grid["points_excluded"] = r.points_excluded;
        grid["lambda_min_on_grid"] = r.lambda_min_on_grid;
        j["grid"] = grid;
        j["suites"] = r.suites;
        j["tolerances"] = {{"first_order", r.tolerances.first_order},
                           {"curvature", r.tolerances.curvature},
                           {"ricci_form", r.tolerances.ricci_form},
                           {"scalar_curvature", r.tolerances.scalar_curvature},
                           {"nu_deformed", r.tolerances.nu_deformed}};
        ordered_json entries = ordered_json::array();
        for (const auto& e : r.entries) {
            ordered_json je;
            je["check"] = e.name;
            je["anchor"] = e.anchor;
            je["max_residual"] = e.max_residual;
            je["argmax"] = point_json(e.argmax);
            je["tolerance"] = e.tolerance;
            je["pass"] = e.pass;
            je["skipped"] = e.skipped;
            je["evaluated"] = e.evaluated;
            je["errors"] = e.errors;
            je["note"] = e.note;
            ordered_json worst = ordered_json::array();
            for (const auto& w : e.worst)
                worst.push_back({{"point", point_json(w.p)}, {"residual", w.residual}});
            je["worst_points"] = worst;
            entries.push_back(je);
        }
        j["entries"] = entries;
        int passed = 0;
        for (const auto& e : r.entries) passed += e.pass ? 1 : 0;
        j["summary"] = {{"entries", r.entries.size()},
                        {"passed", passed},
                        {"all_pass", r.all_pass()},
                        {"point_errors", r.point_errors}};
        return j.dump(2) + "\n";
    }
    if (f == ReportFormat::csv) {
        std::string out = "check,anchor,max_residual,argmax_x,argmax_y,argmax_z,tolerance,pass\n";
        for (const auto& e : r.entries) {
            out += csv_quote(e.name) + "," + csv_quote(e.anchor) + "," + num17(e.max_residual) +
                   "," + num17(e.argmax.x) + "," + num17(e.argmax.y) + "," + num17(e.argmax.z) +
                   "," + num17(e.tolerance) + "," + (e.pass ? "true" : "false") + "\n";
        }
        return out;
    }
    // text
    std::ostringstream out;
    out << "structure: " << r.structure_label << "\n";
    out << "grid: " << r.grid.describe() << "  (used " << r.points_used << ", excluded "
        << r.points_excluded << ")\n";
    out << "suites:";
    for (const auto& s : r.suites) out << " " << s;
    out << "\n\n";
    std::size_t name_w = 12;
    for (const auto& e : r.entries) name_w = std::max(name_w, e.name.size());
    char line[512];
    std::snprintf(line, sizeof(line), "%-*s  %-12s  %-12s  %-6s  %s\n",
                  static_cast<int>(name_w), "check", "max_residual", "tolerance", "status",
                  "note");
    out << line;
    for (const auto& e : r.entries) {
        std::string status = e.skipped ? "SKIP" : (e.pass ? "pass" : "FAIL");
        std::snprintf(line, sizeof(line), "%-*s  %-12.4e  %-12.4e  %-6s  %s\n",
                      static_cast<int>(name_w), e.name.c_str(), e.max_residual, e.tolerance,
                      status.c_str(), e.note.c_str());
        out << line;
    }
    int passed = 0;
    for (const auto& e : r.entries) passed += e.pass ? 1 : 0;
    out << "\n" << passed << "/" << r.entries.size() << " checks pass; "
        << (r.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return out.str();
}

void emit_report(const CheckReport& r, ReportFormat f, const std::string& sink) {
    std::string body = render_report(r, f);
    if (sink == "-") {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream out(sink, std::ios::binary);
    if (!out) throw IoError("cannot open report sink: " + sink);
    out << body;
    if (!out) throw IoError("failed writing report: " + sink);
}

// ---------------------------------------------------------------------------
// nullity scan
// ---------------------------------------------------------------------------

NullityScan nullity_scan(const ParacontactStructure& s, const GridSpec& grid, bool parallel) {
    GridPoints gp = sample_grid(grid, s, true);
    const auto& pts = gp.points;
    const int npts = static_cast<int>(pts.size());
    std::vector<std::optional<NullityRow>> rows(npts);

    auto kernel = [&](int ip) {
        try {
            NullityCoefficients n = extract_nullity(s, pts[ip]);
            rows[ip] = NullityRow{pts[ip],        n.kappa.value(), n.mu.value(),
                                  n.nu.value(),   n.lambda.value(), n.A.value(),
                                  n.B.value(),    n.residual};
        } catch (const Error&) {
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int ip = 0; ip < npts; ++ip) kernel(ip);
    } else {
        for (int ip = 0; ip < npts; ++ip) kernel(ip);
    }

    NullityScan out;
    for (const auto& r : rows) {
        if (r)
            out.rows.push_back(*r);
        else
            ++out.errors;
    }
    return out;
}

std::string nullity_csv(const NullityScan& scan) {
    std::string out = "x,y,z,kappa,mu,nu,lambda,A,B,residual\n";
    for (const auto& r : scan.rows) {
        out += num17(r.p.x) + "," + num17(r.p.y) + "," + num17(r.p.z) + "," + num17(r.kappa) +
               "," + num17(r.mu) + "," + num17(r.nu) + "," + num17(r.lambda) + "," + num17(r.A) +
               "," + num17(r.B) + "," + num17(r.residual) + "\n";
    }
    return out;
}

} // namespace pcv
