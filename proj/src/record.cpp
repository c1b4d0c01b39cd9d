#include "msim/record.hpp"

#include <cmath>

namespace msim {

std::vector<MidPoint> RunLog::mid_series(double resolution, double from, double to) const {
    std::vector<MidPoint> out;
    if (resolution <= 0.0 || mids.empty()) return out;
    // multiples of `resolution` in (from, to]: the left edge is excluded so
    // chained windows never double-sample a boundary
    long long k0 = static_cast<long long>(std::floor(from / resolution + 1e-12)) + 1;
    long long k1 = static_cast<long long>(std::floor(to / resolution + 1e-12));
    size_t cursor = 0;
    for (long long k = k0; k <= k1; ++k) {
        double t = static_cast<double>(k) * resolution;
        if (mids.front().time > t) continue;  // nothing known yet
        while (cursor + 1 < mids.size() && mids[cursor + 1].time <= t) ++cursor;
        out.push_back(MidPoint{t, mids[cursor].mid_ticks});
    }
    return out;
}

}  // namespace msim
