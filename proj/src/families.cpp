#include "pcv/families.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pcv {

namespace {

constexpr double kRPositiveFloor = 1e-8; // "r > 0" guard on the dense sample
constexpr int kDomainSamples = 256;
constexpr double kValidationTol = 1e-8;

struct FamilyCore {
    FamilyCase c;
    ExprPtr r, dr, f, s;
};

struct AB {
    Jet3 a, b, rv;
};

AB family_ab(const FamilyCore& fc, const ChartPoint& p) {
    Vec3J vars = jet_seed(p);
    Jet3 rv = eval_expr(fc.r, vars);
    Jet3 drv = eval_expr(fc.dr, vars);
    Jet3 fv = eval_expr(fc.f, vars);
    Jet3 sv = eval_expr(fc.s, vars);
    const Jet3 &xj = vars[0], &yj = vars[1];
    double ysign = fc.c == FamilyCase::case1 ? -2.0 : 2.0;
    double xsign = fc.c == FamilyCase::case1 ? -2.0 : 2.0;
    AB out;
    out.a = ysign * yj + fv;
    out.b = (-0.5) * yj * (drv / rv) + xsign * xj * rv + sv;
    out.rv = rv;
    return out;
}

std::function<bool(const ChartPoint&)> recipe_domain(const StructureRecipe& rec) {
    return [rec](const ChartPoint& p) {
        if (!p.finite()) return false;
        if (rec.kase == "example") {
            if (std::abs(p.z) <= 1e-12) return false;
        } else if (rec.z_min < rec.z_max) {
            if (p.z < rec.z_min || p.z > rec.z_max) return false;
        }
        for (double z0 : rec.excluded_z)
            if (std::abs(p.z - z0) <= 1e-12) return false;
        return true;
    };
}

ParacontactStructure assemble_family(const FamilyCore& fc, const StructureRecipe& rec,
                                     const std::string& label) {
    ParacontactStructure st;
    st.label = label;
    st.recipe = rec;
    st.domain = recipe_domain(rec);
    const double gyy = fc.c == FamilyCase::case1 ? 1.0 : -1.0;
    st.xi = VectorField::coordinate_basis(0);
    st.eta = OneForm([fc](const ChartPoint& p) -> Vec3J {
        AB ab = family_ab(fc, p);
        return {Jet3::constant(1.0), Jet3::constant(0.0), -ab.a};
    });
    st.g = MetricField([fc, gyy](const ChartPoint& p) -> Mat3J {
        AB ab = family_ab(fc, p);
        Mat3J m;
        m[0][0] = Jet3::constant(1.0);
        m[0][1] = m[1][0] = Jet3::constant(0.0);
        m[0][2] = m[2][0] = -ab.a;
        m[1][1] = Jet3::constant(gyy);
        m[1][2] = m[2][1] = -gyy * ab.b;
        m[2][2] = -gyy * Jet3::constant(1.0) + ab.a * ab.a + gyy * ab.b * ab.b;
        return m;
    });
    st.phi = Tensor11Field([fc](const ChartPoint& p) -> Mat3J {
        AB ab = family_ab(fc, p);
        Mat3J m;
        const Jet3 zero = Jet3::constant(0.0);
        m[0][0] = m[1][0] = m[2][0] = zero;
        m[0][1] = ab.a;
        m[1][1] = ab.b;
        m[2][1] = Jet3::constant(1.0);
        m[0][2] = -ab.a * ab.b;
        m[1][2] = 1.0 - ab.b * ab.b;
        m[2][2] = -ab.b;
        return m;
    });
    return st;
}

void validate_structure(const ParacontactStructure& st, double z_lo, double z_hi) {
    const std::array<double, 2> xs{-0.7, 0.4}, ys{-0.3, 0.8};
    const std::array<double, 3> ts{0.21, 0.5, 0.83};
    double worst = 0.0;
    ChartPoint worst_p{};
    for (double t : ts) {
        double z = z_lo + (z_hi - z_lo) * t;
        for (double x : xs)
            for (double y : ys) {
                ChartPoint p{x, y, z};
                if (!st.in_domain(p)) continue;
                double r = check_structure_axioms(st, p).max();
                if (r > worst) {
                    worst = r;
                    worst_p = p;
                }
            }
    }
    if (worst > kValidationTol) {
        std::ostringstream msg;
        msg << "structure '" << st.label << "' fails axiom validation: residual " << worst
            << " at (" << worst_p.x << ", " << worst_p.y << ", " << worst_p.z << ")";
        throw ValidationFailure(msg.str());
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ParacontactStructure build_family(FamilyCase c, const FunctionSpec& r, const FunctionSpec& f,
                                  const FunctionSpec& s, double z_min, double z_max,
                                  const std::string& label) {
    if (!(z_min < z_max)) throw DomainViolation("family domain interval is empty");
    FamilyCore fc{c, r.ast, differentiate(r.ast, 2), f.ast, s.ast};
    for (int i = 0; i < kDomainSamples; ++i) {
        double z = z_min + (z_max - z_min) * (i + 0.5) / kDomainSamples;
        double rv = eval_expr(fc.r, 0.0, 0.0, z);
        if (!(rv > kRPositiveFloor)) {
            std::ostringstream msg;
            msg << "r(z) must stay positive on the domain: r(" << z << ") = " << rv;
            throw DomainViolation(msg.str());
        }
    }
    StructureRecipe rec;
    rec.kase = c == FamilyCase::case1 ? "case1" : "case2";
    rec.r = r.source;
    rec.f = f.source;
    rec.s = s.source;
    rec.z_min = z_min;
    rec.z_max = z_max;
    std::string lbl = label.empty() ? rec.kase + "(r=" + r.source + ")" : label;
    ParacontactStructure st = assemble_family(fc, rec, lbl);
    validate_structure(st, z_min, z_max);
    return st;
}

ParacontactStructure build_family(FamilyCase c, const std::string& r, const std::string& f,
                                  const std::string& s, double z_min, double z_max,
                                  const std::string& label) {
    return build_family(c, parse_scalar_function(r), parse_scalar_function(f),
                        parse_scalar_function(s), z_min, z_max, label);
}

ParacontactStructure example_preset() {
    ParacontactStructure st =
        build_family(FamilyCase::case1, std::string("z"), "1", "2", 0.5, 5.0, "ex1");
    st.recipe.kase = "example";
    st.recipe.excluded_z = {0.0};
    st.domain = recipe_domain(st.recipe);
    st.label = "ex1";
    return st;
}

namespace {

ParacontactStructure custom_from_recipe(const StructureRecipe& rec, const std::string& label) {
    std::array<ExprPtr, 9> phi, g;
    std::array<ExprPtr, 3> xi, eta;
    for (int i = 0; i < 9; ++i) {
        phi[i] = parse_expression(rec.phi_expr[i], kVarsXYZ);
        g[i] = parse_expression(rec.g_expr[i], kVarsXYZ);
    }
    for (int i = 0; i < 3; ++i) {
        xi[i] = parse_expression(rec.xi_expr[i], kVarsXYZ);
        eta[i] = parse_expression(rec.eta_expr[i], kVarsXYZ);
    }
    ParacontactStructure st;
    st.label = label;
    st.recipe = rec;
    st.domain = recipe_domain(rec);
    st.phi = Tensor11Field([phi](const ChartPoint& p) {
        Vec3J vars = jet_seed(p);
        Mat3J m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = eval_expr(phi[i * 3 + j], vars);
        return m;
    });
    st.g = MetricField([g](const ChartPoint& p) {
        Vec3J vars = jet_seed(p);
        Mat3J m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = eval_expr(g[i * 3 + j], vars);
        return m;
    });
    st.xi = VectorField([xi](const ChartPoint& p) {
        Vec3J vars = jet_seed(p);
        return Vec3J{eval_expr(xi[0], vars), eval_expr(xi[1], vars), eval_expr(xi[2], vars)};
    });
    st.eta = OneForm([eta](const ChartPoint& p) {
        Vec3J vars = jet_seed(p);
        return Vec3J{eval_expr(eta[0], vars), eval_expr(eta[1], vars), eval_expr(eta[2], vars)};
    });
    return st;
}

} // namespace

ParacontactStructure h3_preset(double lam) {
    StructureRecipe rec;
    rec.kase = "custom";
    std::string E = "exp(" + fmt(2 * lam) + "*x)";  // e^{2 lam x}
    std::string Em = "exp(" + fmt(-2 * lam) + "*x)";
    std::string L = fmt(lam), L2 = fmt(lam * lam);
    rec.phi_expr = {"0", "2*y*" + E,        L + "*2*y^3*" + E,
                    "0", "-" + L + "*y^2*" + E, Em + " - " + L2 + "*y^4*" + E,
                    "0", E,                 L + "*y^2*" + E};
    rec.xi_expr = {"1", "0", "0"};
    rec.eta_expr = {"1", "0", "-2*y"};
    rec.g_expr = {"1",    "0",                     "-2*y",
                  "0",    "-" + E,                 "-" + L + "*y^2*" + E,
                  "-2*y", "-" + L + "*y^2*" + E,   Em + " + 4*y^2 - " + L2 + "*y^4*" + E};
    ParacontactStructure st = custom_from_recipe(rec, "h3-synthetic");
    validate_structure(st, -0.5, 0.5);
    return st;
}

ParacontactStructure k_paracontact_preset() {
    StructureRecipe rec;
    rec.kase = "custom";
    rec.phi_expr = {"0", "2*y", "0", "0", "0", "1", "0", "1", "0"};
    rec.xi_expr = {"1", "0", "0"};
    rec.eta_expr = {"1", "0", "-2*y"};
    rec.g_expr = {"1", "0", "-2*y", "0", "-1", "0", "-2*y", "0", "1 + 4*y^2"};
    ParacontactStructure st = custom_from_recipe(rec, "kpara");
    validate_structure(st, -0.5, 0.5);
    return st;
}

ParacontactStructure preset(const std::string& name) {
    if (name == "ex1") return example_preset();
    if (name == "h3") return h3_preset();
    if (name == "kpara") return k_paracontact_preset();
    throw DomainViolation("unknown preset '" + name + "' (expected ex1, h3 or kpara)");
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json recipe_to_json(const StructureRecipe& r) {
    ordered_json j;
    j["case"] = r.kase;
    if (r.kase == "example" || r.kase == "case1" || r.kase == "case2") {
        j["functions"] = {{"r", r.r}, {"f", r.f}, {"s", r.s}};
        j["domain"] = {{"z_min", r.z_min}, {"z_max", r.z_max}};
    }
    ordered_json ex;
    ex["lambda_min"] = r.lambda_min;
    ex["z"] = r.excluded_z;
    j["excluded"] = ex;
    if (r.base) {
        j["deformation"] = {{"alpha", r.alpha}, {"base", recipe_to_json(*r.base)}};
    } else if (r.kase == "custom") {
        ordered_json comp;
        auto mat = [](const std::array<std::string, 9>& m) {
            ordered_json rows = ordered_json::array();
            for (int i = 0; i < 3; ++i)
                rows.push_back(ordered_json::array({m[i * 3], m[i * 3 + 1], m[i * 3 + 2]}));
            return rows;
        };
        comp["phi"] = mat(r.phi_expr);
        comp["xi"] = ordered_json::array({r.xi_expr[0], r.xi_expr[1], r.xi_expr[2]});
        comp["eta"] = ordered_json::array({r.eta_expr[0], r.eta_expr[1], r.eta_expr[2]});
        comp["g"] = mat(r.g_expr);
        j["components"] = comp;
    }
    return j;
}

StructureRecipe recipe_from_json(const ordered_json& j) {
    StructureRecipe r;
    r.kase = j.at("case").get<std::string>();
    if (j.contains("functions")) {
        r.r = j["functions"].at("r").get<std::string>();
        r.f = j["functions"].at("f").get<std::string>();
        r.s = j["functions"].at("s").get<std::string>();
    }
    if (j.contains("domain")) {
        r.z_min = j["domain"].at("z_min").get<double>();
        r.z_max = j["domain"].at("z_max").get<double>();
    }
    if (j.contains("excluded")) {
        r.lambda_min = j["excluded"].value("lambda_min", kLambdaMin);
        if (j["excluded"].contains("z"))
            r.excluded_z = j["excluded"]["z"].get<std::vector<double>>();
    }
    if (j.contains("deformation")) {
        r.alpha = j["deformation"].at("alpha").get<double>();
        r.base = std::make_shared<StructureRecipe>(recipe_from_json(j["deformation"].at("base")));
    } else if (j.contains("components")) {
        const auto& c = j["components"];
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) {
                r.phi_expr[i * 3 + k] = c.at("phi").at(i).at(k).get<std::string>();
                r.g_expr[i * 3 + k] = c.at("g").at(i).at(k).get<std::string>();
            }
            r.xi_expr[i] = c.at("xi").at(i).get<std::string>();
            r.eta_expr[i] = c.at("eta").at(i).get<std::string>();
        }
    }
    return r;
}

} // namespace

std::string manifest_to_json(const StructureRecipe& r, const std::string& label) {
    ordered_json j;
    j["schema_version"] = 1;
    j["label"] = label;
    ordered_json body = recipe_to_json(r);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j.dump(2) + "\n";
}

ParacontactStructure structure_from_recipe(const StructureRecipe& r, const std::string& label) {
    if (r.base) {
        ParacontactStructure base = structure_from_recipe(*r.base, label);
        ParacontactStructure d = d_homothetic_deform(base, r.alpha);
        d.label = label;
        return d;
    }
    if (r.kase == "example") return example_preset();
    if (r.kase == "case1" || r.kase == "case2") {
        ParacontactStructure st =
            build_family(r.kase == "case1" ? FamilyCase::case1 : FamilyCase::case2, r.r, r.f, r.s,
                         r.z_min, r.z_max, label);
        st.recipe.excluded_z = r.excluded_z;
        st.recipe.lambda_min = r.lambda_min;
        st.domain = recipe_domain(st.recipe);
        return st;
    }
    if (r.kase == "custom") {
        ParacontactStructure st = custom_from_recipe(r, label);
        validate_structure(st, r.z_min < r.z_max ? r.z_min : -0.5,
                           r.z_min < r.z_max ? r.z_max : 0.5);
        return st;
    }
    throw ValidationFailure("unknown manifest case '" + r.kase + "'");
}

ParacontactStructure structure_from_manifest_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("valid manifest JSON (") + e.what() + ")", "<manifest>");
    }
    std::string label = j.value("label", "unnamed");
    return structure_from_recipe(recipe_from_json(j), label);
}

ParacontactStructure load_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return structure_from_manifest_json(ss.str());
}

void save_manifest_file(const ParacontactStructure& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write manifest file: " + path);
    out << manifest_to_json(s.recipe, s.label);
    if (!out) throw IoError("failed writing manifest file: " + path);
}

} // namespace pcv
