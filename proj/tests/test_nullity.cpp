#include <doctest.h>

#include <cmath>

#include "pcv/families.hpp"
#include "pcv/nullity.hpp"

using namespace pcv;

TEST_CASE("h-frame on ex1") {
    ParacontactStructure ex1 = example_preset();
    ChartPoint p{0.7, -0.3, 2.0};
    HFramePoint f = build_h_frame_at(ex1, p);
    CHECK(f.regime == Regime::kappa_gt);
    CHECK(f.lambda.value() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.residual < 1e-8);

    // orthonormality with signs (xi:+1, X:-1, phiX:+1)
    Mat3J g = ex1.g(p);
    CHECK(metric_dot(g, f.X, f.X).value() == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(metric_dot(g, f.phiX, f.phiX).value() == doctest::Approx(1.0).epsilon(1e-10));
    Vec3J xi = ex1.xi(p);
    CHECK(std::abs(metric_dot(g, f.X, xi).value()) < 1e-10);
}

TEST_CASE("h-frame on the synthetic h3 structure") {
    ParacontactStructure h3 = h3_preset(); // lambda = 1.5
    ChartPoint p{0.2, 0.35, -0.4};
    HFramePoint f = build_h_frame_at(h3, p);
    CHECK(f.regime == Regime::kappa_lt);
    CHECK(f.lambda.value() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(f.residual < 1e-8);

    // rotational normal form: h X = lambda phiX, h phiX = -lambda X
    Mat3J h = compute_h(h3, p);
    Vec3J hX = mat_apply(h, f.X);
    Vec3J expect = vec_scale(f.lambda, f.phiX);
    for (int k = 0; k < 3; ++k)
        CHECK(hX[k].value() == doctest::Approx(expect[k].value()).epsilon(1e-8).scale(1.0));
}

TEST_CASE("degenerate h rejects frame construction") {
    ParacontactStructure kp = k_paracontact_preset();
    CHECK_THROWS_AS(build_h_frame_at(kp, {0.1, 0.2, 0.3}), DegenerateH);
}

TEST_CASE("nullity extraction on ex1") {
    ParacontactStructure ex1 = example_preset();
    NullityCoefficients n = extract_nullity(ex1, {1, 1, 2});
    CHECK(n.kappa.value() == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(n.mu.value() == doctest::Approx(6.0).epsilon(1e-7));
    CHECK(std::abs(n.nu.value()) < 1e-7);
    CHECK(n.residual < 1e-7);
    CHECK(n.lambda.value() == doctest::Approx(2.0));
    CHECK(std::abs(n.B.value()) < 1e-9);
    CHECK(std::abs(n.A.value()) == doctest::Approx(1.0).epsilon(1e-9)); // |A| = r' = 1

    // at a point where the orientation tie-break matches the construction
    // frame (first component a = -2y+1 > 0), A = +r'
    NullityCoefficients n2 = extract_nullity(ex1, {0.4, 0.1, 1.5});
    CHECK(n2.A.value() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("nullity extraction on the case-2 family") {
    ParacontactStructure c2 =
        build_family(FamilyCase::case2, std::string("z+2"), "0", "0", 0.05, 3.0);
    NullityCoefficients n = extract_nullity(c2, {0, 0, 1});
    CHECK(n.kappa.value() == doctest::Approx(8.0).epsilon(1e-7));
    CHECK(n.mu.value() == doctest::Approx(-4.0).epsilon(1e-7));
    CHECK(std::abs(n.nu.value()) < 1e-7);
    CHECK(std::abs(n.A.value()) < 1e-7); // branch minus kills A
}

TEST_CASE("constant r gives a constant (kappa, mu) pair") {
    ParacontactStructure st =
        build_family(FamilyCase::case1, std::string("2"), "0", "0", 0.1, 3.0);
    for (ChartPoint p : {ChartPoint{0, 0, 1}, ChartPoint{0.5, -0.5, 2.0}}) {
        NullityCoefficients n = extract_nullity(st, p);
        CHECK(n.kappa.value() == doctest::Approx(3.0).epsilon(1e-8));
        CHECK(n.mu.value() == doctest::Approx(6.0).epsilon(1e-8));
        CHECK(std::abs(n.A.value()) < 1e-9);
        CHECK(std::abs(n.B.value()) < 1e-9);
    }
}

TEST_CASE("orientation independence of the extracted coefficients") {
    // flipping X (and with it phiX) must not move kappa, mu or nu; compare
    // extraction on ex1 against the same least-squares expansion run on the
    // flipped frame
    ParacontactStructure ex1 = example_preset();
    ChartPoint p{0.9, 0.6, 1.7};
    NullityCoefficients n = extract_nullity(ex1, p);
    HFramePoint f = build_h_frame_at(ex1, p);
    f.X = vec_scale(-1.0, f.X);
    f.phiX = vec_scale(-1.0, f.phiX);

    RiemannTensor R = riemann_tensor(ex1.g, p);
    Vec3J xi = ex1.xi(p);
    Mat3J g = ex1.g(p);
    Vec3J W1 = riemann_contract(R, f.X, xi, xi);
    Vec3J W2 = riemann_contract(R, f.phiX, xi, xi);
    double lam = f.lambda.value();
    double a1 = -metric_dot(g, W1, f.X).value();
    double b1 = metric_dot(g, W1, f.phiX).value();
    double b2 = metric_dot(g, W2, f.phiX).value();
    double a2 = -metric_dot(g, W2, f.X).value();
    double kappa = 0.5 * (a1 + b2);
    double mu = (a1 - b2) / (2 * lam);
    double nu = (b1 - a2) / (2 * lam);
    CHECK(kappa == doctest::Approx(n.kappa.value()).epsilon(1e-9));
    CHECK(mu == doctest::Approx(n.mu.value()).epsilon(1e-9));
    CHECK(nu == doctest::Approx(n.nu.value()).epsilon(1e-9).scale(1.0));
}

TEST_CASE("h-squared identity ties lambda to kappa") {
    ParacontactStructure ex1 = example_preset();
    for (ChartPoint p : {ChartPoint{0.3, 0.3, 1.2}, ChartPoint{-0.5, 0.8, 2.6}}) {
        NullityCoefficients n = extract_nullity(ex1, p);
        CHECK(n.lambda.value() * n.lambda.value() ==
              doctest::Approx(std::abs(1.0 + n.kappa.value())).epsilon(1e-7));
    }
    ParacontactStructure h3 = h3_preset();
    NullityCoefficients n3 = extract_nullity(h3, {0.1, 0.5, 0.0});
    CHECK(n3.lambda.value() * n3.lambda.value() ==
          doctest::Approx(std::abs(1.0 + n3.kappa.value())).epsilon(1e-7));
    CHECK(n3.kappa.value() < -1.0);
}

TEST_CASE("directional invariants on ex1") {
    ParacontactStructure ex1 = example_preset();
    DirectionalInvariants d = directional_invariants(ex1, {0.4, 0.1, 1.5});
    CHECK(std::abs(d.xi_kappa) < 1e-7);
    CHECK(std::abs(d.xi_mu) < 1e-7);
    CHECK(d.A == doctest::Approx(1.0).epsilon(1e-8)); // r' = 1, orientations agree here
    CHECK(std::abs(d.B) < 1e-8);
    CHECK(d.hgrad_mu_residual < 1e-7);
    CHECK(d.x_mu_residual < 1e-7);
    CHECK(d.phix_mu_residual < 1e-7);
}

TEST_CASE("mu branch classification") {
    ParacontactStructure ex1 = example_preset();
    BranchReport b = mu_branch_classify(ex1, {0.2, 0.6, 2.0});
    CHECK(b.branch == MuBranch::plus);
    CHECK(b.plus_residual < 1e-7);
    CHECK(b.F_residual < 1e-7);

    ParacontactStructure c2 =
        build_family(FamilyCase::case2, std::string("z+2"), "0", "0", 0.05, 3.0);
    CHECK(mu_branch_classify(c2, {0.1, -0.2, 1.0}).branch == MuBranch::minus);

    ParacontactStructure h3 = h3_preset();
    CHECK_THROWS_AS(mu_branch_classify(h3, {0.1, 0.1, 0.1}), RegimeMismatch);

    // lambda below the floor: branches coincide, classification degenerates
    ParacontactStructure tiny =
        build_family(FamilyCase::case1, std::string("z"), "0", "0", 1e-5, 1.0);
    CHECK(mu_branch_classify(tiny, {0.0, 0.0, 1e-4}).branch == MuBranch::degenerate);
}
