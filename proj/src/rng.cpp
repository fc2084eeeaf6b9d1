#include "qblfq/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qblfq {

std::vector<std::uint64_t> multinomial(const std::vector<double>& probs,
                                       std::uint64_t shots, Rng& rng) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += std::max(0.0, probs[i]);
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> counts(probs.size(), 0);
    if (acc <= 0.0) return counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.next_double() * acc;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= counts.size()) idx = counts.size() - 1;
        ++counts[idx];
    }
    return counts;
}

}  // namespace qblfq
