#include <immintrin.h>

#include "treemppi/kernels.hpp"

namespace treemppi::kernels::avx2 {

namespace {

// Lane-wise copy of wrap_angle() in types.hpp.
inline __m256d wrap(__m256d angle) {
    const __m256d pi = _mm256_set1_pd(kPi);
    const __m256d two_pi = _mm256_set1_pd(kTwoPi);
    const __m256d turns = _mm256_floor_pd(_mm256_div_pd(_mm256_add_pd(angle, pi), two_pi));
    __m256d r = _mm256_sub_pd(angle, _mm256_mul_pd(two_pi, turns));
    const __m256d too_high = _mm256_cmp_pd(r, pi, _CMP_GE_OQ);
    const __m256d too_low = _mm256_cmp_pd(r, _mm256_sub_pd(_mm256_setzero_pd(), pi), _CMP_LT_OQ);
    r = _mm256_blendv_pd(r, _mm256_sub_pd(r, two_pi), too_high);
    r = _mm256_blendv_pd(r, _mm256_add_pd(r, two_pi), too_low);
    return r;
}

struct Query {
    __m256d qx, qy, qt, wx, wy, wt;

    Query(const Configuration& q, const WeightMatrix& w)
        : qx(_mm256_set1_pd(q.x)),
          qy(_mm256_set1_pd(q.y)),
          qt(_mm256_set1_pd(q.theta)),
          wx(_mm256_set1_pd(w.x)),
          wy(_mm256_set1_pd(w.y)),
          wt(_mm256_set1_pd(w.theta)) {}

    // Same association as weighted_norm(): ((wx*dx)*dx + (wy*dy)*dy) + (wt*dt)*dt.
    __m256d metric(const double* x, const double* y, const double* theta) const {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x), qx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y), qy);
        const __m256d dt = wrap(_mm256_sub_pd(_mm256_loadu_pd(theta), qt));
        const __m256d sx = _mm256_mul_pd(_mm256_mul_pd(wx, dx), dx);
        const __m256d sy = _mm256_mul_pd(_mm256_mul_pd(wy, dy), dy);
        const __m256d st = _mm256_mul_pd(_mm256_mul_pd(wt, dt), dt);
        return _mm256_sqrt_pd(_mm256_add_pd(_mm256_add_pd(sx, sy), st));
    }
};

}  // namespace

void weighted_distances(CloudView cloud, const Configuration& q, const WeightMatrix& w, std::span<double> out) {
    const Query query(q, w);
    const std::size_t n = cloud.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out.data() + i, query.metric(cloud.x.data() + i, cloud.y.data() + i, cloud.theta.data() + i));
    }
    for (; i < n; ++i) out[i] = plan_metric(q, {cloud.x[i], cloud.y[i], cloud.theta[i]}, w);
}

ValueMatch nearest_value(CloudView cloud, std::span<const double> values, const Configuration& q,
                         const WeightMatrix& w, double radius) {
    const Query query(q, w);
    const __m256d r = _mm256_set1_pd(radius);
    const __m256d inf = _mm256_set1_pd(kInfinity);
    __m256d best = inf;
    __m256d best_index = _mm256_set1_pd(-1.0);
    __m256d index = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);

    const std::size_t n = cloud.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = query.metric(cloud.x.data() + i, cloud.y.data() + i, cloud.theta.data() + i);
        const __m256d total = _mm256_add_pd(d, _mm256_loadu_pd(values.data() + i));
        const __m256d within = _mm256_cmp_pd(d, r, _CMP_LE_OQ);
        const __m256d candidate = _mm256_blendv_pd(inf, total, within);
        // Strict less keeps the earliest index within a lane.
        const __m256d better = _mm256_cmp_pd(candidate, best, _CMP_LT_OQ);
        best = _mm256_blendv_pd(best, candidate, better);
        best_index = _mm256_blendv_pd(best_index, index, better);
        index = _mm256_add_pd(index, four);
    }

    alignas(32) double lane_best[4];
    alignas(32) double lane_index[4];
    _mm256_store_pd(lane_best, best);
    _mm256_store_pd(lane_index, best_index);
    ValueMatch match;
    for (int lane = 0; lane < 4; ++lane) {
        if (lane_index[lane] < 0.0) continue;
        const auto idx = static_cast<std::ptrdiff_t>(lane_index[lane]);
        if (lane_best[lane] < match.cost || (lane_best[lane] == match.cost && idx < match.index)) {
            match.cost = lane_best[lane];
            match.index = idx;
        }
    }
    // Tail indices exceed every vector index, so strict less preserves the tie rule.
    for (; i < n; ++i) {
        const double d = plan_metric(q, {cloud.x[i], cloud.y[i], cloud.theta[i]}, w);
        if (!(d <= radius)) continue;
        const double total = d + values[i];
        if (total < match.cost) {
            match.cost = total;
            match.index = static_cast<std::ptrdiff_t>(i);
        }
    }
    return match;
}

void scaled_accumulate(double weight, std::span<const double> src, std::span<double> dst) {
    const __m256d wv = _mm256_set1_pd(weight);
    const std::size_t n = src.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d acc = _mm256_add_pd(_mm256_loadu_pd(dst.data() + k), _mm256_mul_pd(wv, _mm256_loadu_pd(src.data() + k)));
        _mm256_storeu_pd(dst.data() + k, acc);
    }
    for (; k < n; ++k) dst[k] += weight * src[k];
}

}  // namespace treemppi::kernels::avx2
