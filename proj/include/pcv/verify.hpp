#ifndef PCV_VERIFY_HPP
#define PCV_VERIFY_HPP

#include <string>
#include <vector>

#include "pcv/grid.hpp"
#include "pcv/nullity.hpp"

namespace pcv {

extern const char* kToolVersion;

/// Per-tier default tolerances: identities needing one derivative sit at
/// 1e-8, curvature-level identities (two derivatives) at 1e-7; entries that
/// divide by lambda additionally scale their tolerance by
/// max(1, 1/lambda_min_on_grid).
struct ToleranceConfig {
    double first_order = 1e-8;
    double curvature = 1e-7;
    double ricci_form = 1e-6;      // Ricci operator shape, entrywise
    double scalar_curvature = 1e-6;
    double nu_deformed = 1e-6;
};

struct WorstPoint {
    ChartPoint p;
    double residual = 0.0;
};

struct CheckEntry {
    std::string name;
    std::string anchor; // the identity being checked, in plain text
    double max_residual = 0.0;
    ChartPoint argmax{};
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false; // no applicable grid points (e.g. wrong regime)
    std::string note;
    int errors = 0;    // per-point evaluation failures
    int evaluated = 0; // points that produced a residual
    std::vector<WorstPoint> worst;
};

struct CheckReport {
    std::string structure_label;
    GridSpec grid;
    std::string tool_version;
    std::vector<std::string> suites;
    ToleranceConfig tolerances;
    std::vector<CheckEntry> entries; // sorted by name
    int points_used = 0;
    int points_excluded = 0;
    int point_errors = 0;
    double lambda_min_on_grid = 0.0;

    bool all_pass() const;
};

/// Known suites: axioms, L1, L2, L3, curvature, main_theorem, deformation
/// (optionally deformation(alpha), default alpha 2).
CheckReport run_suites(const ParacontactStructure& s, const std::vector<std::string>& suites,
                       const GridSpec& grid, const ToleranceConfig& tol = {},
                       bool parallel = true);
CheckReport run_suite(const ParacontactStructure& s, const std::string& suite,
                      const GridSpec& grid, const ToleranceConfig& tol = {},
                      bool parallel = true);

enum class ReportFormat { json, csv, text };

std::string render_report(const CheckReport& r, ReportFormat f);
/// sink "-" writes to stdout.
void emit_report(const CheckReport& r, ReportFormat f, const std::string& sink);

/// Per-point nullity table for the CSV hand-off.
struct NullityRow {
    ChartPoint p;
    double kappa = 0, mu = 0, nu = 0, lambda = 0, A = 0, B = 0, residual = 0;
};

struct NullityScan {
    std::vector<NullityRow> rows;
    int errors = 0;
};

NullityScan nullity_scan(const ParacontactStructure& s, const GridSpec& grid,
                         bool parallel = true);
std::string nullity_csv(const NullityScan& scan);

} // namespace pcv

#endif
