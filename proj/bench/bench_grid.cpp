// Times the grid evaluation kernel with OpenMP against the serial reference
// on a larger lattice, and checks the two produce identical reports.

#include <chrono>
#include <cstdio>

#include "pcv/families.hpp"
#include "pcv/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using clock_type = std::chrono::steady_clock;

static double seconds(clock_type::time_point a, clock_type::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 12;
    pcv::ParacontactStructure ex1 = pcv::example_preset();
    pcv::GridSpec grid;
    grid.mode = pcv::GridSpec::Mode::lattice;
    grid.counts = {n, n, n};
    grid.box = {{{-1.0, 1.0}, {-1.0, 1.0}, {1.0, 3.0}}};
    const std::vector<std::string> suites{"axioms", "L1", "L2", "curvature", "main_theorem"};

    std::printf("grid %dx%dx%d, suites axioms+L1+L2+curvature+main_theorem\n", n, n, n);
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both runs are serial\n");
#endif

    auto t0 = clock_type::now();
    pcv::CheckReport serial = pcv::run_suites(ex1, suites, grid, {}, false);
    auto t1 = clock_type::now();
    pcv::CheckReport parallel = pcv::run_suites(ex1, suites, grid, {}, true);
    auto t2 = clock_type::now();

    double ts = seconds(t0, t1), tp = seconds(t1, t2);
    std::printf("serial   : %8.3f s  (%d points, %zu entries)\n", ts, serial.points_used,
                serial.entries.size());
    std::printf("parallel : %8.3f s  (speedup %.2fx)\n", tp, ts / tp);

    bool same = pcv::render_report(serial, pcv::ReportFormat::json) ==
                pcv::render_report(parallel, pcv::ReportFormat::json);
    std::printf("serial/parallel reports identical: %s\n", same ? "yes" : "NO");
    std::printf("all checks pass: %s\n", serial.all_pass() ? "yes" : "NO");
    return same && serial.all_pass() ? 0 : 1;
}
