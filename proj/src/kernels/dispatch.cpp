#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "treemppi/kernels.hpp"

namespace treemppi::kernels {

#ifndef TREEMPPI_BUILD_AVX2
// Stubs keep the symbols linkable; backend_supported() never selects them.
namespace avx2 {
void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out) {
    scalar::weighted_distances(cloud, q, w, out);
}
ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius) {
    return scalar::nearest_value(cloud, values, q, w, radius);
}
void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst) {
    scalar::scaled_accumulate(weight, src, dst);
}
}  // namespace avx2
#endif

namespace {

Backend detect() {
    if (const char* forced = std::getenv("TREEMPPI_KERNELS")) {
        if (std::string(forced) == "scalar") return Backend::Scalar;
    }
    return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

}  // namespace

std::string_view backend_name(Backend backend) { return backend == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend backend) {
    if (backend == Backend::Scalar) return true;
#if defined(TREEMPPI_BUILD_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
    if (!backend_supported(backend)) {
        throw std::invalid_argument("kernel backend not supported on this CPU: " + std::string(backend_name(backend)));
    }
    current().store(backend, std::memory_order_relaxed);
}

void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out) {
    if (active_backend() == Backend::Avx2) return avx2::weighted_distances(cloud, q, w, out);
    scalar::weighted_distances(cloud, q, w, out);
}

ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius) {
    if (active_backend() == Backend::Avx2) return avx2::nearest_value(cloud, values, q, w, radius);
    return scalar::nearest_value(cloud, values, q, w, radius);
}

void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst) {
    if (active_backend() == Backend::Avx2) return avx2::scaled_accumulate(weight, src, dst);
    scalar::scaled_accumulate(weight, src, dst);
}

}  // namespace treemppi::kernels
