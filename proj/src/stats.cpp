#include "catsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace catsim {

double percentile_nearest_rank(const std::vector<double>& sorted, double pct) {
    if (sorted.empty()) {
        throw std::invalid_argument("percentile of empty sample");
    }
    if (pct < 0.0 || pct > 100.0) {
        throw std::invalid_argument("percentile out of range");
    }
    if (pct == 0.0) return sorted.front();
    const auto n = static_cast<double>(sorted.size());
    const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    return sorted[rank - 1];
}

DistSummary DistSummary::of(std::vector<double> values) {
    DistSummary d;
    d.count = values.size();
    if (values.empty()) {
        return d;
    }
    std::sort(values.begin(), values.end());
    d.min = values.front();
    d.max = values.back();
    d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    d.p5 = percentile_nearest_rank(values, 5.0);
    d.p25 = percentile_nearest_rank(values, 25.0);
    d.p50 = percentile_nearest_rank(values, 50.0);
    d.p75 = percentile_nearest_rank(values, 75.0);
    d.p95 = percentile_nearest_rank(values, 95.0);
    return d;
}

}  // namespace catsim
