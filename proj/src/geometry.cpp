#include "pcv/geometry.hpp"

#include <cmath>

namespace pcv {

Mat3J metric_inverse(const Mat3J& g, double eps) { return inverse3(g, eps); }

Mat3J metric_inverse(const MetricField& g, const ChartPoint& p, double eps) {
    return inverse3(g(p), eps);
}

Christoffel christoffel_from_jets(const Mat3J& G) {
    Mat3J Ginv = inverse3(G);
    // dG[a][i][j] = d_a g_ij
    std::array<Mat3J, 3> dG;
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) dG[a][i][j] = jet_partial(G[i][j], a);
    Christoffel gamma;
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                Jet3 s = Jet3::constant(0.0);
                for (int l = 0; l < 3; ++l)
                    s += Ginv[k][l] * (dG[i][j][l] + dG[j][i][l] - dG[l][i][j]);
                gamma[k][i][j] = 0.5 * s;
                gamma[k][j][i] = gamma[k][i][j];
            }
        }
    }
    return gamma;
}

Christoffel christoffel(const MetricField& g, const ChartPoint& p) {
    return christoffel_from_jets(g(p));
}

std::array<Mat3<double>, 3> christoffel_finite_difference(const MetricField& g,
                                                          const ChartPoint& p, double h) {
    Mat3<double> G, Ginv;
    {
        Mat3J Gj = g(p);
        Mat3J Gi = inverse3(Gj);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                G[i][j] = Gj[i][j].value();
                Ginv[i][j] = Gi[i][j].value();
            }
    }
    auto metric_at = [&](const ChartPoint& q) {
        Mat3J Gj = g(q);
        Mat3<double> m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = Gj[i][j].value();
        return m;
    };
    std::array<Mat3<double>, 3> dG;
    for (int a = 0; a < 3; ++a) {
        ChartPoint pp = p, pm = p;
        (a == 0 ? pp.x : a == 1 ? pp.y : pp.z) += h;
        (a == 0 ? pm.x : a == 1 ? pm.y : pm.z) -= h;
        Mat3<double> fp = metric_at(pp), fm = metric_at(pm);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) dG[a][i][j] = (fp[i][j] - fm[i][j]) / (2 * h);
    }
    std::array<Mat3<double>, 3> gamma{};
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int l = 0; l < 3; ++l)
                    s += Ginv[k][l] * (dG[i][j][l] + dG[j][i][l] - dG[l][i][j]);
                gamma[k][i][j] = 0.5 * s;
            }
    return gamma;
}

Vec3J covariant_derivative_vector(const MetricField& g, const VectorField& X,
                                  const VectorField& Y, const ChartPoint& p) {
    Christoffel gamma = christoffel(g, p);
    Vec3J Xv = X(p), Yv = Y(p);
    Vec3J r;
    for (int k = 0; k < 3; ++k) {
        Jet3 s = Jet3::constant(0.0);
        for (int i = 0; i < 3; ++i) {
            s += Xv[i] * jet_partial(Yv[k], i);
            for (int j = 0; j < 3; ++j) s += Xv[i] * gamma[k][i][j] * Yv[j];
        }
        r[k] = s;
    }
    return r;
}

VectorField covariant_derivative_field(const MetricField& g, const VectorField& X,
                                       const VectorField& Y) {
    int budget = std::min({g.budget(), X.budget() + 1, Y.budget()}) - 1;
    if (budget < 0) throw BudgetExhausted("covariant derivative exceeds derivative budget");
    return VectorField(
        [g, X, Y](const ChartPoint& p) { return covariant_derivative_vector(g, X, Y, p); },
        budget);
}

Vec3J lie_bracket(const VectorField& X, const VectorField& Y, const ChartPoint& p) {
    Vec3J Xv = X(p), Yv = Y(p);
    Vec3J r;
    for (int k = 0; k < 3; ++k) {
        Jet3 s = Jet3::constant(0.0);
        for (int i = 0; i < 3; ++i)
            s += Xv[i] * jet_partial(Yv[k], i) - Yv[i] * jet_partial(Xv[k], i);
        r[k] = s;
    }
    return r;
}

VectorField lie_bracket_field(const VectorField& X, const VectorField& Y) {
    int budget = std::min(X.budget(), Y.budget()) - 1;
    if (budget < 0) throw BudgetExhausted("Lie bracket exceeds derivative budget");
    return VectorField([X, Y](const ChartPoint& p) { return lie_bracket(X, Y, p); }, budget);
}

Jet3 directional_derivative(const VectorField& X, const ScalarField& f, const ChartPoint& p) {
    Vec3J Xv = X(p);
    Jet3 fj = f(p);
    Jet3 s = Jet3::constant(0.0);
    for (int i = 0; i < 3; ++i) s += Xv[i] * jet_partial(fj, i);
    return s;
}

ScalarField directional_derivative_field(const VectorField& X, const ScalarField& f) {
    int budget = std::min(X.budget(), f.budget() - 1);
    if (budget < 0) throw BudgetExhausted("directional derivative exceeds derivative budget");
    return ScalarField([X, f](const ChartPoint& p) { return directional_derivative(X, f, p); },
                       budget);
}

Mat3J lie_derivative_tensor11(const VectorField& xi, const Tensor11Field& T, const ChartPoint& p) {
    // column j of the result is [xi, T d/dx^j] - T [xi, d/dx^j]:
    // (L_xi T)^k_j = xi^i d_i T^k_j - T^i_j d_i xi^k + T^k_i d_j xi^i
    Vec3J xv = xi(p);
    Mat3J Tv = T(p);
    Mat3J r;
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            Jet3 s = Jet3::constant(0.0);
            for (int i = 0; i < 3; ++i) {
                s += xv[i] * jet_partial(Tv[k][j], i);
                s -= Tv[i][j] * jet_partial(xv[k], i);
                s += Tv[k][i] * jet_partial(xv[i], j);
            }
            r[k][j] = s;
        }
    }
    return r;
}

Tensor11Field lie_derivative_tensor11_field(const VectorField& xi, const Tensor11Field& T) {
    int budget = std::min(xi.budget(), T.budget()) - 1;
    if (budget < 0) throw BudgetExhausted("Lie derivative exceeds derivative budget");
    return Tensor11Field(
        [xi, T](const ChartPoint& p) { return lie_derivative_tensor11(xi, T, p); }, budget);
}

Vec3J riemann_apply(const MetricField& g, const VectorField& X, const VectorField& Y,
                    const VectorField& Z, const ChartPoint& p) {
    VectorField nYZ = covariant_derivative_field(g, Y, Z);
    VectorField nXZ = covariant_derivative_field(g, X, Z);
    VectorField XY = lie_bracket_field(X, Y);
    Vec3J a = covariant_derivative_vector(g, X, nYZ, p);
    Vec3J b = covariant_derivative_vector(g, Y, nXZ, p);
    Vec3J c = covariant_derivative_vector(g, XY, Z, p);
    return vec_sub(vec_sub(a, b), c);
}

RiemannTensor riemann_tensor(const MetricField& g, const ChartPoint& p) {
    Christoffel gamma = christoffel(g, p);
    // dGamma[a][k][i][j] = d_a Gamma^k_ij
    std::array<Christoffel, 3> dGamma;
    for (int a = 0; a < 3; ++a)
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) dGamma[a][k][i][j] = jet_partial(gamma[k][i][j], a);
    RiemannTensor R;
    for (int l = 0; l < 3; ++l) {
        for (int k = 0; k < 3; ++k) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    Jet3 s = dGamma[i][l][j][k] - dGamma[j][l][i][k];
                    for (int m = 0; m < 3; ++m)
                        s += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
                    R[l][k][i][j] = s;
                }
            }
        }
    }
    return R;
}

Vec3J riemann_contract(const RiemannTensor& R, const Vec3J& X, const Vec3J& Y, const Vec3J& Z) {
    Vec3J r{Jet3::constant(0.0), Jet3::constant(0.0), Jet3::constant(0.0)};
    for (int l = 0; l < 3; ++l) {
        Jet3 s = Jet3::constant(0.0);
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += R[l][k][i][j] * X[i] * Y[j] * Z[k];
        r[l] = s;
    }
    return r;
}

std::pair<Mat3J, Jet3> ricci_and_scalar(const MetricField& g, const ChartPoint& p) {
    RiemannTensor R = riemann_tensor(g, p);
    Mat3J ric;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Jet3 s = Jet3::constant(0.0);
            for (int m = 0; m < 3; ++m) s += R[m][b][m][a];
            ric[a][b] = s;
        }
    Mat3J Ginv = inverse3(g(p));
    Mat3J Q;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Jet3 s = Jet3::constant(0.0);
            for (int k = 0; k < 3; ++k) s += Ginv[i][k] * ric[k][j];
            Q[i][j] = s;
        }
    Jet3 tau = Q[0][0] + Q[1][1] + Q[2][2];
    return {Q, tau};
}

Vec3J gradient_field(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
    Mat3J Ginv = inverse3(g(p));
    Jet3 fj = f(p);
    Vec3J df{jet_partial(fj, 0), jet_partial(fj, 1), jet_partial(fj, 2)};
    return mat_apply(Ginv, df);
}

VectorField gradient_vector_field(const MetricField& g, const ScalarField& f) {
    int budget = std::min(g.budget(), f.budget()) - 1;
    if (budget < 0) throw BudgetExhausted("gradient exceeds derivative budget");
    return VectorField([g, f](const ChartPoint& p) { return gradient_field(g, f, p); }, budget);
}

LaplacianForms laplacian_signed_frame(const MetricField& g, const SignedFrame& frame,
                                      const ScalarField& f, const ChartPoint& p) {
    LaplacianForms out;
    // frame form
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        ScalarField ef = directional_derivative_field(frame.e[i], f);
        double eef = directional_derivative(frame.e[i], ef, p).value();
        Vec3J nee = covariant_derivative_vector(g, frame.e[i], frame.e[i], p);
        Jet3 fj = f(p);
        double neef = 0.0;
        for (int k = 0; k < 3; ++k) neef += nee[k].value() * jet_partial(fj, k).value();
        s += frame.eps[i] * (eef - neef);
    }
    out.frame_form = s;
    // coordinate divergence form
    auto flux = [g, f](const ChartPoint& q) {
        Mat3J G = g(q);
        Mat3J Ginv = inverse3(G);
        Jet3 d = det3(G);
        Jet3 sq = jet_sqrt(d.value() < 0.0 ? -d : d);
        Jet3 fj = f(q);
        Vec3J w;
        for (int i = 0; i < 3; ++i) {
            Jet3 t = Jet3::constant(0.0);
            for (int j = 0; j < 3; ++j) t += Ginv[i][j] * jet_partial(fj, j);
            w[i] = sq * t;
        }
        return w;
    };
    Vec3J w = flux(p);
    Jet3 div = jet_partial(w[0], 0) + jet_partial(w[1], 1) + jet_partial(w[2], 2);
    double sqdet = std::sqrt(std::abs(det3(g(p)).value()));
    out.divergence_form = div.value() / sqdet;
    return out;
}

Jet3 exterior_derivative_oneform(const OneForm& eta, const VectorField& X, const VectorField& Y,
                                 const ChartPoint& p, bool half_convention) {
    // eta(Y) and eta(X) as derived scalar fields
    ScalarField etaY(
        [eta, Y](const ChartPoint& q) { return dot_form(eta(q), Y(q)); },
        std::min(eta.budget(), Y.budget()));
    ScalarField etaX(
        [eta, X](const ChartPoint& q) { return dot_form(eta(q), X(q)); },
        std::min(eta.budget(), X.budget()));
    Jet3 a = directional_derivative(X, etaY, p);
    Jet3 b = directional_derivative(Y, etaX, p);
    Jet3 c = dot_form(eta(p), lie_bracket(X, Y, p));
    Jet3 r = a - b - c;
    return half_convention ? 0.5 * r : r;
}

} // namespace pcv
