#include "treemppi/kernels.hpp"

namespace treemppi::kernels::scalar {

void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        out[i] = plan_metric(q, {cloud.x[i], cloud.y[i], cloud.theta[i]}, w);
    }
}

ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius) {
    ValueMatch best;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double d = plan_metric(q, {cloud.x[i], cloud.y[i], cloud.theta[i]}, w);
        if (!(d <= radius)) continue;
        const double total = d + values[i];
        if (total < best.cost) {
            best.cost = total;
            best.index = static_cast<std::ptrdiff_t>(i);
        }
    }
    return best;
}

void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst) {
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] += weight * src[k];
}

}  // namespace treemppi::kernels::scalar
