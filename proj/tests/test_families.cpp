#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "pcv/families.hpp"
#include "pcv/nullity.hpp"

using namespace pcv;

namespace {

double max_component_diff(const ParacontactStructure& a, const ParacontactStructure& b,
                          const ChartPoint& p) {
    double worst = 0;
    Mat3J pa = a.phi(p), pb = b.phi(p), ga = a.g(p), gb = b.g(p);
    Vec3J xa = a.xi(p), xb = b.xi(p), ea = a.eta(p), eb = b.eta(p);
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(xa[i].value() - xb[i].value()));
        worst = std::max(worst, std::abs(ea[i].value() - eb[i].value()));
        for (int j = 0; j < 3; ++j) {
            worst = std::max(worst, std::abs(pa[i][j].value() - pb[i][j].value()));
            worst = std::max(worst, std::abs(ga[i][j].value() - gb[i][j].value()));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("preset ex1 equals the explicit family build") {
    ParacontactStructure ex1 = example_preset();
    ParacontactStructure built =
        build_family(FamilyCase::case1, std::string("z"), "1", "2", 0.5, 5.0);
    for (ChartPoint p : {ChartPoint{0, 0, 1}, ChartPoint{0.8, -0.6, 2.3},
                         ChartPoint{-0.4, 0.9, 4.1}})
        CHECK(max_component_diff(ex1, built, p) < 1e-12);

    // eta at (0,0,1) is dx - dz
    Vec3J eta = ex1.eta({0, 0, 1});
    CHECK(eta[0].value() == doctest::Approx(1.0));
    CHECK(eta[1].value() == doctest::Approx(0.0));
    CHECK(eta[2].value() == doctest::Approx(-1.0));

    // domain is z != 0, unlike the validation interval
    CHECK(ex1.in_domain({0, 0, -3.0}));
    CHECK(!ex1.in_domain({0, 0, 0}));
    CHECK(!built.in_domain({0, 0, -3.0}));
}

TEST_CASE("family domain violations") {
    CHECK_THROWS_AS(build_family(FamilyCase::case1, std::string("z-1"), "0", "0", 0.5, 5.0),
                    DomainViolation);
    CHECK_THROWS_AS(build_family(FamilyCase::case1, std::string("0.000000001"), "0", "0", 0.5,
                                 5.0),
                    DomainViolation);
    CHECK_THROWS_AS(build_family(FamilyCase::case1, std::string("z"), "0", "0", 2.0, 1.0),
                    DomainViolation);
    CHECK_THROWS_AS(build_family(FamilyCase::case1, std::string("q"), "0", "0", 0.5, 1.0),
                    ParseError);
}

TEST_CASE("manifest round trip is byte exact") {
    ParacontactStructure ex1 = example_preset();
    std::string m1 = manifest_to_json(ex1.recipe, ex1.label);
    ParacontactStructure back = structure_from_manifest_json(m1);
    std::string m2 = manifest_to_json(back.recipe, back.label);
    CHECK(m1 == m2);
    CHECK(max_component_diff(ex1, back, {0.7, -0.2, 1.9}) < 1e-15);

    ParacontactStructure c2 = build_family(FamilyCase::case2, std::string("sqrt(1+z^2)"),
                                           "0.5*z", "sin(z)", 0.25, 2.75, "c2x");
    std::string n1 = manifest_to_json(c2.recipe, c2.label);
    ParacontactStructure c2back = structure_from_manifest_json(n1);
    CHECK(manifest_to_json(c2back.recipe, c2back.label) == n1);
    CHECK(max_component_diff(c2, c2back, {0.3, 0.4, 1.1}) < 1e-15);

    // custom components (the synthetic h3 preset) round-trip too
    ParacontactStructure h3 = h3_preset();
    std::string h1 = manifest_to_json(h3.recipe, h3.label);
    ParacontactStructure h3back = structure_from_manifest_json(h1);
    CHECK(manifest_to_json(h3back.recipe, h3back.label) == h1);
    CHECK(max_component_diff(h3, h3back, {0.1, 0.2, 0.3}) < 1e-15);

    // deformation wrapper reconstructs by deforming the base
    ParacontactStructure def = d_homothetic_deform(ex1, 2.0);
    std::string d1 = manifest_to_json(def.recipe, def.label);
    ParacontactStructure defback = structure_from_manifest_json(d1);
    CHECK(manifest_to_json(defback.recipe, defback.label) == d1);
    CHECK(max_component_diff(def, defback, {0.7, -0.2, 1.9}) < 1e-15);
}

TEST_CASE("manifest files") {
    ParacontactStructure ex1 = example_preset();
    const char* path = "/tmp/pcv_test_manifest.json";
    save_manifest_file(ex1, path);
    ParacontactStructure back = load_manifest_file(path);
    CHECK(back.label == "ex1");
    CHECK(max_component_diff(ex1, back, {0.2, 0.4, 2.2}) < 1e-15);
    std::remove(path);
    CHECK_THROWS_AS(load_manifest_file("/nonexistent/nowhere.json"), IoError);
}

TEST_CASE("broken custom manifest fails validation") {
    StructureRecipe rec;
    rec.kase = "custom";
    // metric incompatible with phi
    rec.phi_expr = {"0", "2*y", "0", "0", "0", "1", "0", "1", "0"};
    rec.xi_expr = {"1", "0", "0"};
    rec.eta_expr = {"1", "0", "-2*y"};
    rec.g_expr = {"1", "0", "0", "0", "-1", "0", "0", "0", "1"};
    CHECK_THROWS_AS(structure_from_recipe(rec, "broken"), ValidationFailure);
}

TEST_CASE("random family instances satisfy the paracontact laws") {
    // light version of the acceptance closure: two instances per case,
    // checked at a handful of points
    struct Inst {
        FamilyCase c;
        const char *r, *f, *s;
    };
    const Inst instances[] = {
        {FamilyCase::case1, "2 + 0.5*sin(z)", "0.3*z", "1 - z"},
        {FamilyCase::case1, "1.5 + 0.25*z", "cos(z)", "0.1*z^2"},
        {FamilyCase::case2, "2 - 0.4*cos(2*z)", "z^2/4", "sin(z)"},
        {FamilyCase::case2, "sqrt(2+z)", "0", "exp(-z)/2"},
    };
    std::mt19937_64 rng(99);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53); };
    for (const auto& inst : instances) {
        ParacontactStructure st = build_family(inst.c, std::string(inst.r), inst.f, inst.s,
                                               0.4, 2.6);
        for (int t = 0; t < 5; ++t) {
            ChartPoint p{uni(-1, 1), uni(-1, 1), uni(0.5, 2.5)};
            CHECK(check_structure_axioms(st, p).max() < 1e-8);
            CHECK(check_nabla_xi(st, p) < 1e-8);
            NullityCoefficients n = extract_nullity(st, p);
            CHECK(n.residual < 1e-7);
            CHECK(std::abs(n.nu.value()) < 1e-7);
            // lambda agrees with r(z)
            double rv = parse_scalar_function(inst.r)(p.z);
            CHECK(n.lambda.value() == doctest::Approx(rv).epsilon(1e-8));
            // branch: plus for case 1, minus for case 2
            double mu = n.mu.value();
            double expect =
                inst.c == FamilyCase::case1 ? 2 * (1 + n.lambda.value())
                                            : 2 * (1 - n.lambda.value());
            CHECK(mu == doctest::Approx(expect).epsilon(1e-7));
        }
    }
}

TEST_CASE("kappa and mu depend only on z") {
    ParacontactStructure st = build_family(FamilyCase::case1, std::string("1 + 0.5*z^2"),
                                           "sin(z)", "0.2*z", 0.3, 2.0);
    for (double z : {0.6, 1.1, 1.8}) {
        double k0 = 0, m0 = 0;
        bool first = true;
        for (double x : {-0.8, 0.1, 0.9}) {
            for (double y : {-0.7, 0.55}) {
                NullityCoefficients n = extract_nullity(st, {x, y, z});
                if (first) {
                    k0 = n.kappa.value();
                    m0 = n.mu.value();
                    first = false;
                } else {
                    CHECK(std::abs(n.kappa.value() - k0) < 1e-7);
                    CHECK(std::abs(n.mu.value() - m0) < 1e-7);
                }
            }
        }
        CHECK(k0 == doctest::Approx(std::pow(1 + 0.5 * z * z, 2) - 1).epsilon(1e-8));
    }
}
