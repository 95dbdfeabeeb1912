#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcv/families.hpp"
#include "pcv/verify.hpp"

namespace {

constexpr const char* kGrammar =
    "Expression grammar (functions r, f, s use the single variable z; custom\n"
    "manifest components may also use x and y):\n"
    "  expr   := term (('+'|'-') term)*\n"
    "  term   := factor (('*'|'/') factor)*\n"
    "  factor := '-' factor | power\n"
    "  power  := atom ['^' integer]          (integer exponents only)\n"
    "  atom   := number | variable | fn '(' expr ')' | '(' expr ')'\n"
    "  fn     := sqrt | exp | ln | sin | cos\n"
    "Examples: \"z\", \"z^2 - 1\", \"sqrt(1+z^2)/z\", \"2 + 0.5*sin(3*z)\"\n"
    "\n"
    "Exit codes: 0 success / all checks pass, 1 verification failure,\n"
    "2 usage error, 3 domain or parse error, 4 I/O error.\n";

struct StructureFlags {
    std::string preset, manifest;
    std::string kase, r, f, s, label;
    std::vector<double> domain;
};

void add_structure_flags(CLI::App* cmd, StructureFlags& sf, bool require) {
    auto* preset = cmd->add_option("--preset", sf.preset,
                                   "built-in structure: ex1, h3 or kpara");
    auto* manifest = cmd->add_option("--manifest", sf.manifest, "structure manifest JSON file");
    auto* kase = cmd->add_option("--case", sf.kase, "family case: case1 or case2");
    cmd->add_option("--r", sf.r, "r(z) expression (must stay positive on the domain)");
    cmd->add_option("--f", sf.f, "f(z) expression");
    cmd->add_option("--s", sf.s, "s(z) expression");
    cmd->add_option("--domain", sf.domain, "z interval: zmin,zmax")->delimiter(',')->expected(2);
    cmd->add_option("--label", sf.label, "structure label");
    preset->excludes(manifest);
    preset->excludes(kase);
    manifest->excludes(kase);
    if (require) {
        // one of the three specs must name a structure; checked after parse
    }
}

pcv::ParacontactStructure resolve_structure(const StructureFlags& sf) {
    int specs = (!sf.preset.empty()) + (!sf.manifest.empty()) + (!sf.kase.empty());
    if (specs != 1)
        throw CLI::ValidationError(
            "structure", "give exactly one of --preset, --manifest or --case/--r/--f/--s");
    if (!sf.preset.empty()) return pcv::preset(sf.preset);
    if (!sf.manifest.empty()) return pcv::load_manifest_file(sf.manifest);
    if (sf.r.empty() || sf.domain.size() != 2)
        throw CLI::ValidationError("structure",
                                   "--case needs --r, --f, --s and --domain zmin,zmax");
    pcv::FamilyCase c =
        sf.kase == "case1" ? pcv::FamilyCase::case1
                           : (sf.kase == "case2" ? pcv::FamilyCase::case2
                                                 : throw CLI::ValidationError(
                                                       "--case", "expected case1 or case2"));
    return pcv::build_family(c, sf.r, sf.f.empty() ? "0" : sf.f, sf.s.empty() ? "0" : sf.s,
                             sf.domain[0], sf.domain[1], sf.label);
}

pcv::GridSpec parse_grid(const std::string& grid, const std::vector<double>& box,
                         std::uint64_t seed) {
    pcv::GridSpec g;
    g.seed = seed;
    if (box.size() == 6)
        g.box = {{{box[0], box[1]}, {box[2], box[3]}, {box[4], box[5]}}};
    else if (!box.empty())
        throw CLI::ValidationError("--box", "expected 6 values: x0,x1,y0,y1,z0,z1");
    auto colon = grid.find(':');
    std::string mode = grid.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : grid.substr(colon + 1);
    if (mode == "lattice") {
        g.mode = pcv::GridSpec::Mode::lattice;
        if (std::sscanf(args.c_str(), "%d,%d,%d", &g.counts[0], &g.counts[1], &g.counts[2]) != 3)
            throw CLI::ValidationError("--grid", "lattice needs counts, e.g. lattice:5,5,5");
    } else if (mode == "random") {
        g.mode = pcv::GridSpec::Mode::random;
        if (std::sscanf(args.c_str(), "%d", &g.count) != 1 || g.count <= 0)
            throw CLI::ValidationError("--grid", "random needs a count, e.g. random:100");
    } else {
        throw CLI::ValidationError("--grid", "expected lattice:nx,ny,nz or random:count");
    }
    return g;
}

pcv::ReportFormat parse_format(const std::string& f) {
    if (f == "json") return pcv::ReportFormat::json;
    if (f == "csv") return pcv::ReportFormat::csv;
    if (f == "text") return pcv::ReportFormat::text;
    throw CLI::ValidationError("--format", "expected json, csv or text");
}

void write_text(const std::string& body, const std::string& sink) {
    if (sink == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(sink, std::ios::binary);
    if (!out) throw pcv::IoError("cannot open output file: " + sink);
    out << body;
    if (!out) throw pcv::IoError("failed writing output file: " + sink);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcv - pointwise verification engine for 3-dimensional paracontact metric "
                 "structures"};
    app.footer(kGrammar);
    app.require_subcommand(1);

    StructureFlags sc, sv, sn, sd;
    std::string out = "-", format = "json", grid_str = "lattice:5,5,5", report_path = "-";
    std::vector<double> box;
    std::uint64_t seed = 0;
    std::vector<std::string> suites{"axioms"};
    double alpha = 2.0;
    bool serial = false;

    auto* construct = app.add_subcommand("construct", "validate a structure and write its "
                                                      "manifest");
    add_structure_flags(construct, sc, true);
    construct->add_option("--out", out, "manifest path or - for stdout");

    auto* verify = app.add_subcommand("verify", "run identity-check suites over a grid");
    add_structure_flags(verify, sv, true);
    verify->add_option("--suite", suites,
                       "suites: axioms, L1, L2, L3, curvature, main_theorem, deformation or "
                       "deformation(alpha)")
        ->delimiter(',');
    verify->add_option("--grid", grid_str, "lattice:nx,ny,nz or random:count");
    verify->add_option("--box", box, "x0,x1,y0,y1,z0,z1")->delimiter(',');
    verify->add_option("--seed", seed, "random grid seed");
    verify->add_option("--out", out, "report path or - for stdout");
    verify->add_option("--format", format, "json, csv or text");
    verify->add_flag("--serial", serial, "disable OpenMP grid evaluation");

    auto* nullity = app.add_subcommand("nullity", "per-point nullity scan CSV");
    add_structure_flags(nullity, sn, true);
    nullity->add_option("--grid", grid_str, "lattice:nx,ny,nz or random:count");
    nullity->add_option("--box", box, "x0,x1,y0,y1,z0,z1")->delimiter(',');
    nullity->add_option("--seed", seed, "random grid seed");
    nullity->add_option("--out", out, "CSV path or - for stdout");
    nullity->add_flag("--serial", serial, "disable OpenMP grid evaluation");

    auto* deform = app.add_subcommand("deform", "apply a homothetic deformation, write the "
                                                "deformed manifest and verify it");
    add_structure_flags(deform, sd, true);
    deform->add_option("--alpha", alpha, "deformation parameter, must be > 0")->required();
    deform->add_option("--out", out, "deformed manifest path or - for stdout");
    deform->add_option("--report", report_path, "verification report path or - for stdout");
    deform->add_option("--grid", grid_str, "lattice:nx,ny,nz or random:count");
    deform->add_option("--box", box, "x0,x1,y0,y1,z0,z1")->delimiter(',');
    deform->add_option("--seed", seed, "random grid seed");
    deform->add_option("--format", format, "json, csv or text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (construct->parsed()) {
            pcv::ParacontactStructure st = resolve_structure(sc);
            write_text(pcv::manifest_to_json(st.recipe, st.label), out);
            return 0;
        }
        if (verify->parsed()) {
            pcv::ParacontactStructure st = resolve_structure(sv);
            pcv::GridSpec g = parse_grid(grid_str, box, seed);
            pcv::CheckReport rep = pcv::run_suites(st, suites, g, {}, !serial);
            pcv::emit_report(rep, parse_format(format), out);
            return rep.all_pass() ? 0 : 1;
        }
        if (nullity->parsed()) {
            pcv::ParacontactStructure st = resolve_structure(sn);
            pcv::GridSpec g = parse_grid(grid_str, box, seed);
            pcv::NullityScan scan = pcv::nullity_scan(st, g, !serial);
            write_text(pcv::nullity_csv(scan), out);
            if (scan.errors > 0)
                std::cerr << "note: " << scan.errors << " point(s) failed to evaluate\n";
            return 0;
        }
        // deform
        pcv::ParacontactStructure st = resolve_structure(sd);
        pcv::ParacontactStructure def = pcv::d_homothetic_deform(st, alpha);
        write_text(pcv::manifest_to_json(def.recipe, def.label), out);
        pcv::GridSpec g = parse_grid(grid_str, box, seed);
        char suite[64];
        std::snprintf(suite, sizeof(suite), "deformation(%g)", alpha);
        pcv::CheckReport rep = pcv::run_suites(st, {suite}, g, {}, true);
        pcv::emit_report(rep, parse_format(format), report_path);
        return rep.all_pass() ? 0 : 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pcv::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const pcv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
