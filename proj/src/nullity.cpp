#include "pcv/nullity.hpp"

#include <algorithm>
#include <cmath>

namespace pcv {

const char* to_string(Regime r) { return r == Regime::kappa_gt ? "kappa_gt" : "kappa_lt"; }

const char* to_string(MuBranch b) {
    switch (b) {
    case MuBranch::plus: return "plus";
    case MuBranch::minus: return "minus";
    default: return "degenerate";
    }
}

namespace {

Vec3<double> values_of(const Vec3J& v) { return {v[0].value(), v[1].value(), v[2].value()}; }

struct Basis2 {
    Vec3J u, v;        // phi-images spanning ker eta
    Mat3J basis;       // columns (u, v, xi)
};

Basis2 make_d_basis(const Mat3J& phi, const Vec3J& xi) {
    Mat3<double> pv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) pv[i][j] = phi[i][j].value();
    auto [ai, aj] = detail::d_basis_axes(pv);
    Basis2 b;
    for (int r = 0; r < 3; ++r) {
        b.u[r] = phi[r][ai];
        b.v[r] = phi[r][aj];
        b.basis[r] = {b.u[r], b.v[r], xi[r]};
    }
    return b;
}

/// Coordinates of w in the (u, v, xi) basis.
Vec3J in_basis(const Basis2& b, const Vec3J& w) { return solve3(b.basis, w); }

double frame_residual(const Mat3J& g, const Mat3J& h, const Vec3J& xi, const HFramePoint& f) {
    double worst = 0.0;
    auto maxcomp = [&](const Vec3J& w) {
        for (const auto& c : w) worst = std::max(worst, std::abs(c.value()));
    };
    worst = std::max(worst, std::abs(metric_dot(g, f.X, f.X).value() + 1.0));
    worst = std::max(worst, std::abs(metric_dot(g, f.phiX, f.phiX).value() - 1.0));
    worst = std::max(worst, std::abs(metric_dot(g, f.X, f.phiX).value()));
    worst = std::max(worst, std::abs(metric_dot(g, f.X, xi).value()));
    worst = std::max(worst, std::abs(metric_dot(g, f.phiX, xi).value()));
    Vec3J hX = mat_apply(h, f.X), hP = mat_apply(h, f.phiX), hXi = mat_apply(h, xi);
    if (f.regime == Regime::kappa_gt) {
        maxcomp(vec_sub(hX, vec_scale(f.lambda, f.X)));
        maxcomp(vec_add(hP, vec_scale(f.lambda, f.phiX)));
    } else {
        maxcomp(vec_sub(hX, vec_scale(f.lambda, f.phiX)));
        maxcomp(vec_add(hP, vec_scale(f.lambda, f.X)));
    }
    maxcomp(hXi);
    return worst;
}

} // namespace

HFramePoint build_h_frame_at(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    Mat3J phi = s.phi(p);
    Vec3J xi = s.xi(p);
    Mat3J g = s.g(p);
    Mat3J h = compute_h(s, p);

    Mat3<double> hv, pv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            hv[i][j] = h[i][j].value();
            pv[i][j] = phi[i][j].value();
        }
    HClassification cls = detail::classify_h_matrix(hv, pv, values_of(xi));
    if (cls.type == HType::zero) throw DegenerateH("h vanishes: no h-frame");
    if (cls.type == HType::degenerate)
        throw DegenerateH("h^2 is not scalar on ker eta: no h-frame");
    if (cls.type == HType::h2)
        throw H2TypeUnsupported("h is nilpotent nonzero: no eigenframe exists");

    Basis2 b = make_d_basis(phi, xi);
    // h restricted to span{u, v} as a 2x2 jet matrix M
    Vec3J m1 = in_basis(b, mat_apply(h, b.u));
    Vec3J m2 = in_basis(b, mat_apply(h, b.v));
    Jet3 M00 = m1[0], M10 = m1[1], M01 = m2[0], M11 = m2[1];
    Jet3 c = 0.5 * (M00 * M00 + M01 * M10 + M10 * M01 + M11 * M11);

    HFramePoint out;
    Jet3 w0, w1; // coordinates of the raw X in (u, v)
    if (cls.type == HType::h1) {
        out.regime = Regime::kappa_gt;
        out.lambda = jet_sqrt(c);
        // kernel of (M - lambda I): two algebraic forms, keep the larger
        double na = std::abs(M01.value()) + std::abs(out.lambda.value() - M00.value());
        double nb = std::abs(out.lambda.value() - M11.value()) + std::abs(M10.value());
        if (na >= nb) {
            w0 = M01;
            w1 = out.lambda - M00;
        } else {
            w0 = out.lambda - M11;
            w1 = M10;
        }
    } else { // h3
        out.regime = Regime::kappa_lt;
        out.lambda = jet_sqrt(-c);
        // phi restricted to span{u, v}
        Vec3J f1 = in_basis(b, mat_apply(phi, b.u));
        Vec3J f2 = in_basis(b, mat_apply(phi, b.v));
        Jet3 S00 = M00 - out.lambda * f1[0], S01 = M01 - out.lambda * f2[0];
        Jet3 S10 = M10 - out.lambda * f1[1], S11 = M11 - out.lambda * f2[1];
        // S = h - lambda phi is nilpotent on ker eta; its image spans its
        // kernel, so any nonzero column gives the X direction.
        double n1 = std::abs(S00.value()) + std::abs(S10.value());
        double n2 = std::abs(S01.value()) + std::abs(S11.value());
        double scale = std::max({std::abs(M00.value()), std::abs(M01.value()),
                                 std::abs(M10.value()), std::abs(M11.value()), 1e-30});
        if (std::max(n1, n2) > 1e-9 * scale) {
            if (n1 >= n2) {
                w0 = S00;
                w1 = S10;
            } else {
                w0 = S01;
                w1 = S11;
            }
        } else {
            // h = lambda phi on ker eta: every direction qualifies; pick the
            // candidate with the most negative norm.
            const std::array<std::pair<double, double>, 4> cands{
                {{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
            double best = 0.0;
            std::pair<double, double> pick{1, 0};
            for (auto cd : cands) {
                Vec3J w = vec_add(vec_scale(cd.first, b.u), vec_scale(cd.second, b.v));
                double q = metric_dot(g, w, w).value();
                if (q < best) {
                    best = q;
                    pick = cd;
                }
            }
            w0 = Jet3::constant(pick.first);
            w1 = Jet3::constant(pick.second);
        }
    }

    Vec3J Xraw = vec_add(vec_scale(w0, b.u), vec_scale(w1, b.v));
    Jet3 q = metric_dot(g, Xraw, Xraw);
    if (!(q.value() < 0.0))
        throw FrameFailure("h-frame eigenvector is not timelike (g(X,X) >= 0); the "
                           "L2-convention frame does not exist at this point");
    Jet3 inv_norm = 1.0 / jet_sqrt(-q);
    out.X = vec_scale(inv_norm, Xraw);
    // deterministic orientation: first coordinate component above threshold
    // is made positive
    for (int k = 0; k < 3; ++k) {
        double v = out.X[k].value();
        if (std::abs(v) > 1e-9) {
            if (v < 0.0) out.X = vec_scale(-1.0, out.X);
            break;
        }
    }
    out.phiX = mat_apply(phi, out.X);
    out.residual = frame_residual(g, h, xi, out);
    return out;
}

HFrame build_h_frame(const ParacontactStructure& s, const ChartPoint& p) {
    HFramePoint at = build_h_frame_at(s, p);
    HFrame f;
    f.regime = at.regime;
    f.residual = at.residual;
    int budget = std::min({s.phi.budget(), s.xi.budget(), s.g.budget()}) - 1;
    f.X = VectorField([s](const ChartPoint& q) { return build_h_frame_at(s, q).X; }, budget);
    f.phiX = VectorField([s](const ChartPoint& q) { return build_h_frame_at(s, q).phiX; }, budget);
    f.lambda =
        ScalarField([s](const ChartPoint& q) { return build_h_frame_at(s, q).lambda; }, budget);
    return f;
}

namespace {

NullityCoefficients extract_h_zero(const ParacontactStructure& s, const ChartPoint& p,
                                   const RiemannTensor& R) {
    // R(V, xi)xi = kappa (V - eta(V) xi) for every V once h = 0; fit the one
    // unknown over the coordinate directions.
    Vec3J xi = s.xi(p);
    Vec3J eta = s.eta(p);
    Jet3 num = Jet3::constant(0.0), den = Jet3::constant(0.0);
    double resid = 0.0;
    std::array<std::array<Jet3, 3>, 3> W, V;
    for (int i = 0; i < 3; ++i) {
        Vec3J ei{Jet3::constant(i == 0 ? 1.0 : 0.0), Jet3::constant(i == 1 ? 1.0 : 0.0),
                 Jet3::constant(i == 2 ? 1.0 : 0.0)};
        W[i] = riemann_contract(R, ei, xi, xi);
        for (int l = 0; l < 3; ++l) V[i][l] = ei[l] - eta[i] * xi[l];
        for (int l = 0; l < 3; ++l) {
            num += W[i][l] * V[i][l];
            den += V[i][l] * V[i][l];
        }
    }
    NullityCoefficients out;
    out.h_zero = true;
    out.kappa = num / den;
    out.mu = Jet3::constant(0.0);
    out.nu = Jet3::constant(0.0);
    out.lambda = Jet3::constant(0.0);
    out.A = Jet3::constant(0.0);
    out.B = Jet3::constant(0.0);
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
            resid = std::max(resid,
                             std::abs(W[i][l].value() - out.kappa.value() * V[i][l].value()));
    out.residual = resid;
    return out;
}

} // namespace

NullityCoefficients extract_nullity(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    RiemannTensor R = riemann_tensor(s.g, p);
    {
        Mat3<double> hv, pv;
        Mat3J h = compute_h(s, p);
        Mat3J phi = s.phi(p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                hv[i][j] = h[i][j].value();
                pv[i][j] = phi[i][j].value();
            }
        Vec3J xiJ = s.xi(p);
        HClassification cls =
            detail::classify_h_matrix(hv, pv, {xiJ[0].value(), xiJ[1].value(), xiJ[2].value()});
        if (cls.type == HType::zero) return extract_h_zero(s, p, R);
    }

    HFramePoint f = build_h_frame_at(s, p);
    Vec3J xi = s.xi(p);
    Mat3J g = s.g(p);
    Vec3J W1 = riemann_contract(R, f.X, xi, xi);
    Vec3J W2 = riemann_contract(R, f.phiX, xi, xi);
    // frame coefficients with signs (X:-1, phiX:+1, xi:+1)
    Jet3 a1 = -metric_dot(g, W1, f.X);
    Jet3 b1 = metric_dot(g, W1, f.phiX);
    Jet3 c1 = metric_dot(g, W1, xi);
    Jet3 a2 = -metric_dot(g, W2, f.X);
    Jet3 b2 = metric_dot(g, W2, f.phiX);
    Jet3 c2 = metric_dot(g, W2, xi);

    const Jet3 one = Jet3::constant(1.0), zero = Jet3::constant(0.0);
    std::array<Vec3<Jet3>, 4> rows;
    std::array<Jet3, 4> rhs{a1, b1, a2, b2};
    if (f.regime == Regime::kappa_gt) {
        // R(X,xi)xi    = (kappa + mu lambda) X + nu lambda phiX
        // R(phiX,xi)xi = -nu lambda X + (kappa - mu lambda) phiX
        rows[0] = {one, f.lambda, zero};
        rows[1] = {zero, zero, f.lambda};
        rows[2] = {zero, zero, -f.lambda};
        rows[3] = {one, -f.lambda, zero};
    } else {
        // R(X,xi)xi    = (kappa + nu lambda) X + mu lambda phiX
        // R(phiX,xi)xi = -mu lambda X + (kappa - nu lambda) phiX
        rows[0] = {one, zero, f.lambda};
        rows[1] = {zero, f.lambda, zero};
        rows[2] = {zero, -f.lambda, zero};
        rows[3] = {one, zero, -f.lambda};
    }
    Vec3<Jet3> sol = least_squares3(rows, rhs);

    NullityCoefficients out;
    out.kappa = sol[0];
    out.mu = sol[1];
    out.nu = sol[2];
    out.lambda = f.lambda;
    out.regime = f.regime;
    out.A = Jet3::constant(0.0);
    out.B = Jet3::constant(0.0);
    for (int i = 0; i < 3; ++i) {
        out.A += f.X[i] * jet_partial(f.lambda, i);
        out.B += f.phiX[i] * jet_partial(f.lambda, i);
    }
    double resid = std::max(std::abs(c1.value()), std::abs(c2.value()));
    for (int r = 0; r < 4; ++r) {
        double fit = rows[r][0].value() * sol[0].value() + rows[r][1].value() * sol[1].value() +
                     rows[r][2].value() * sol[2].value();
        resid = std::max(resid, std::abs(fit - rhs[r].value()));
    }
    out.residual = resid;
    return out;
}

DirectionalInvariants directional_invariants(const ParacontactStructure& s, const ChartPoint& p) {
    NullityCoefficients n = extract_nullity(s, p);
    if (n.h_zero) throw FrameFailure("directional invariants need an h-frame (h = 0 here)");
    HFramePoint f = build_h_frame_at(s, p);
    Vec3J xi = s.xi(p);
    DirectionalInvariants d;
    d.A = n.A.value();
    d.B = n.B.value();
    auto dir = [](const Vec3J& V, const Jet3& fj) {
        double r = 0;
        for (int i = 0; i < 3; ++i) r += V[i].value() * jet_partial(fj, i).value();
        return r;
    };
    d.xi_kappa = dir(xi, n.kappa);
    d.xi_mu = dir(xi, n.mu);

    // h grad mu - grad kappa, pointwise values
    Mat3J gJ = s.g(p);
    Mat3J GinvJ = inverse3(gJ);
    Mat3J hJ = compute_h(s, p);
    Vec3<double> dmu{jet_partial(n.mu, 0).value(), jet_partial(n.mu, 1).value(),
                     jet_partial(n.mu, 2).value()};
    Vec3<double> dka{jet_partial(n.kappa, 0).value(), jet_partial(n.kappa, 1).value(),
                     jet_partial(n.kappa, 2).value()};
    Vec3<double> gradmu{}, gradka{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            gradmu[i] += GinvJ[i][j].value() * dmu[j];
            gradka[i] += GinvJ[i][j].value() * dka[j];
        }
    for (int i = 0; i < 3; ++i) {
        double hg = 0;
        for (int j = 0; j < 3; ++j) hg += hJ[i][j].value() * gradmu[j];
        d.hgrad_mu_residual = std::max(d.hgrad_mu_residual, std::abs(hg - gradka[i]));
    }
    double Xmu = dir(f.X, n.mu);
    double Pmu = dir(f.phiX, n.mu);
    if (f.regime == Regime::kappa_gt) {
        d.x_mu_residual = std::abs(Xmu - 2.0 * d.A);
        d.phix_mu_residual = std::abs(Pmu + 2.0 * d.B);
    } else {
        d.x_mu_residual = std::abs(Xmu - 2.0 * d.B);
        d.phix_mu_residual = std::abs(Pmu + 2.0 * d.A);
    }
    return d;
}

BranchReport mu_branch_classify(const ParacontactStructure& s, const ChartPoint& p) {
    s.require_in_domain(p);
    HClassification cls = classify_h_type(s, p);
    BranchReport r;
    r.lambda = cls.lambda;
    // below lambda_min the two branches coincide at mu = 2
    if (cls.type == HType::zero || cls.type == HType::h2 || cls.lambda < s.recipe.lambda_min) {
        r.branch = MuBranch::degenerate;
        return r;
    }
    if (cls.type == HType::h3) throw RegimeMismatch("mu branches are a kappa > -1 statement");
    if (cls.type == HType::degenerate) throw DegenerateH("h^2 not scalar on ker eta");
    NullityCoefficients n = extract_nullity(s, p);
    double mu = n.mu.value(), lam = n.lambda.value();
    r.lambda = lam;
    r.plus_residual = std::abs(mu - 2.0 * (1.0 + lam));
    r.minus_residual = std::abs(mu - 2.0 * (1.0 - lam));
    r.F_residual = std::abs((1.0 + lam - mu / 2.0) * (1.0 - lam - mu / 2.0));
    r.branch = r.plus_residual <= r.minus_residual ? MuBranch::plus : MuBranch::minus;
    return r;
}

} // namespace pcv
