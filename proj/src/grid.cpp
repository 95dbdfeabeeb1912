#include "pcv/grid.hpp"

#include <random>
#include <sstream>

namespace pcv {

std::string GridSpec::describe() const {
    std::ostringstream s;
    if (mode == Mode::lattice)
        s << "lattice:" << counts[0] << "," << counts[1] << "," << counts[2];
    else
        s << "random:" << count << " seed:" << seed;
    s << " box:[" << box[0][0] << "," << box[0][1] << "]x[" << box[1][0] << "," << box[1][1]
      << "]x[" << box[2][0] << "," << box[2][1] << "]";
    return s.str();
}

namespace {

bool admissible(const ParacontactStructure& s, const ChartPoint& p, bool need_frame) {
    if (!s.in_domain(p)) return false;
    if (!need_frame) return true;
    try {
        HClassification c = classify_h_type(s, p);
        if (c.type != HType::h1 && c.type != HType::h3) return false;
        return c.lambda >= s.recipe.lambda_min;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

GridPoints sample_grid(const GridSpec& spec, const ParacontactStructure& s, bool need_frame) {
    GridPoints out;
    if (spec.mode == GridSpec::Mode::lattice) {
        auto coord = [&](int axis, int i) {
            int n = spec.counts[axis];
            double lo = spec.box[axis][0], hi = spec.box[axis][1];
            return n <= 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / double(n - 1);
        };
        for (int i = 0; i < spec.counts[0]; ++i)
            for (int j = 0; j < spec.counts[1]; ++j)
                for (int k = 0; k < spec.counts[2]; ++k) {
                    ChartPoint p{coord(0, i), coord(1, j), coord(2, k)};
                    if (admissible(s, p, need_frame))
                        out.points.push_back(p);
                    else
                        ++out.excluded;
                }
    } else {
        std::mt19937_64 rng(spec.seed);
        auto uniform = [&](double lo, double hi) {
            double u = (rng() >> 11) * 0x1.0p-53;
            return lo + (hi - lo) * u;
        };
        long attempts = 0;
        const long max_attempts = 1000L * std::max(spec.count, 1);
        while (static_cast<int>(out.points.size()) < spec.count && attempts < max_attempts) {
            ++attempts;
            ChartPoint p{uniform(spec.box[0][0], spec.box[0][1]),
                         uniform(spec.box[1][0], spec.box[1][1]),
                         uniform(spec.box[2][0], spec.box[2][1])};
            if (admissible(s, p, need_frame))
                out.points.push_back(p);
            else
                ++out.excluded;
        }
    }
    if (out.points.empty())
        throw EmptyGridAfterExclusions("no grid points survive the domain and lambda exclusions");
    return out;
}

} // namespace pcv
