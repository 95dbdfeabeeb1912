#ifndef PCV_GRID_HPP
#define PCV_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pcv/paracontact.hpp"

namespace pcv {

/// Sample grid over a coordinate box.  Random mode uses std::mt19937_64 with
/// the raw-bits mapping u = (next() >> 11) * 2^-53, which is fully specified
/// by the standard and therefore reproducible across platforms; rejected
/// points (domain predicate, lambda floor) are skipped and counted.
struct GridSpec {
    enum class Mode { lattice, random };
    Mode mode = Mode::lattice;
    std::array<int, 3> counts{5, 5, 5}; // lattice points per axis
    int count = 100;                    // random sample size
    std::uint64_t seed = 0;
    std::array<std::array<double, 2>, 3> box{{{-1.0, 1.0}, {-1.0, 1.0}, {1.0, 3.0}}};

    std::string describe() const;
};

struct GridPoints {
    std::vector<ChartPoint> points;
    int excluded = 0;
};

/// Emit the grid, keeping only points that pass the structure's domain
/// predicate and, when a frame is required, whose pointwise lambda estimate
/// stays at or above lambda_min with h of eigen type.
GridPoints sample_grid(const GridSpec& spec, const ParacontactStructure& s, bool need_frame);

} // namespace pcv

#endif
