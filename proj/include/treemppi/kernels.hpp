#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and a SIMD
// variant that must agree with it bit for bit; the active variant is chosen at
// runtime from the CPU's capabilities.

#include <cstddef>
#include <span>
#include <string_view>

#include "treemppi/types.hpp"

namespace treemppi::kernels {

/// Structure-of-arrays view over a set of configurations.
struct CloudView {
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> theta;

    std::size_t size() const { return x.size(); }
};

/// Best radius-limited (metric + value) match; index is -1 when nothing
/// within the radius has a finite total.
struct ValueMatch {
    double cost = kInfinity;
    std::ptrdiff_t index = -1;
};

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend backend);
bool backend_supported(Backend backend);
Backend active_backend();
/// Overrides the automatic choice; throws std::invalid_argument if unsupported.
void set_backend(Backend backend);

/// out[i] = plan_metric(q, cloud[i], w).
void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out);

/// argmin over i with plan_metric(q, cloud[i]) <= radius of metric + values[i];
/// ties resolve to the lowest index.
ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius);

/// dst[k] += weight * src[k].
void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst);

namespace scalar {
void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out);
ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius);
void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst);
}  // namespace scalar

namespace avx2 {
void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out);
ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius);
void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst);
}  // namespace avx2

}  // namespace treemppi::kernels
