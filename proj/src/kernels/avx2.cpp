// AVX2 variants of the edge kernels. Compiled with -mavx2 -mfma; only
// reached after a runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <algorithm>

#include "snl/kernels.hpp"

namespace snl::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline double horizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void edgeGeometry(const Coordinates& coords, EdgeIndex edges, std::span<double> diff,
                  std::span<double> xi) {
  const std::size_t q = edges.size();
  const std::size_t body = q - q % kLanes;
  for (std::size_t e = 0; e < body; e += kLanes) {
    const __m128i h = _mm_loadu_si128(reinterpret_cast<const __m128i*>(edges.head.data() + e));
    const __m128i t = _mm_loadu_si128(reinterpret_cast<const __m128i*>(edges.tail.data() + e));
    __m256d acc = _mm256_setzero_pd();
    for (int c = 0; c < coords.dim; ++c) {
      const double* p = coords.axis[static_cast<std::size_t>(c)];
      const __m256d ph = _mm256_i32gather_pd(p, h, 8);
      const __m256d pt = _mm256_i32gather_pd(p, t, 8);
      const __m256d delta = _mm256_sub_pd(ph, pt);
      _mm256_storeu_pd(diff.data() + static_cast<std::size_t>(c) * q + e, delta);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(delta, delta));
    }
    _mm256_storeu_pd(xi.data() + e, acc);
  }
  for (std::size_t e = body; e < q; ++e) {
    double acc = 0.0;
    for (int c = 0; c < coords.dim; ++c) {
      const double* p = coords.axis[static_cast<std::size_t>(c)];
      const double delta = p[edges.head[e]] - p[edges.tail[e]];
      diff[static_cast<std::size_t>(c) * q + e] = delta;
      acc = acc + delta * delta;
    }
    xi[e] = acc;
  }
}

double residualEnergy(std::span<const double> xi, std::span<const double> d2) {
  const std::size_t q = xi.size();
  const std::size_t body = q - q % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t e = 0; e < body; e += kLanes) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(xi.data() + e), _mm256_loadu_pd(d2.data() + e));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(r, r));
  }
  double sum = horizontalSum(acc);
  for (std::size_t e = body; e < q; ++e) {
    const double r = xi[e] - d2[e];
    sum += r * r;
  }
  return sum;
}

double complementary(std::span<const double> xi, std::span<const double> d2,
                     std::span<const double> tau) {
  const std::size_t q = xi.size();
  const std::size_t body = q - q % kLanes;
  const __m256d quarter = _mm256_set1_pd(0.25);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t e = 0; e < body; e += kLanes) {
    const __m256d t = _mm256_loadu_pd(tau.data() + e);
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(xi.data() + e), _mm256_loadu_pd(d2.data() + e));
    const __m256d term = _mm256_sub_pd(_mm256_mul_pd(t, r), _mm256_mul_pd(_mm256_mul_pd(t, t), quarter));
    acc = _mm256_add_pd(acc, term);
  }
  double sum = horizontalSum(acc);
  for (std::size_t e = body; e < q; ++e) {
    sum += tau[e] * (xi[e] - d2[e]) - tau[e] * tau[e] * 0.25;
  }
  return sum;
}

void dualAscent(std::span<const double> xi, std::span<const double> d2,
                std::span<const double> tau, std::span<double> out) {
  const std::size_t q = xi.size();
  const std::size_t body = q - q % kLanes;
  const __m256d half = _mm256_set1_pd(0.5);
  for (std::size_t e = 0; e < body; e += kLanes) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(xi.data() + e), _mm256_loadu_pd(d2.data() + e));
    const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(tau.data() + e), half);
    _mm256_storeu_pd(out.data() + e, _mm256_sub_pd(r, t));
  }
  for (std::size_t e = body; e < q; ++e) out[e] = (xi[e] - d2[e]) - tau[e] * 0.5;
}

void scaledResidual(std::span<const double> xi, std::span<const double> d2, double scale,
                    std::span<double> out) {
  const std::size_t q = xi.size();
  const std::size_t body = q - q % kLanes;
  const __m256d s = _mm256_set1_pd(scale);
  for (std::size_t e = 0; e < body; e += kLanes) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(xi.data() + e), _mm256_loadu_pd(d2.data() + e));
    _mm256_storeu_pd(out.data() + e, _mm256_mul_pd(s, r));
  }
  for (std::size_t e = body; e < q; ++e) out[e] = scale * (xi[e] - d2[e]);
}

void weightEdges(std::span<const double> weight, std::span<const double> diff, int dim,
                 std::span<double> out) {
  const std::size_t q = weight.size();
  const std::size_t body = q - q % kLanes;
  for (int c = 0; c < dim; ++c) {
    const std::size_t base = static_cast<std::size_t>(c) * q;
    for (std::size_t e = 0; e < body; e += kLanes) {
      const __m256d w = _mm256_loadu_pd(weight.data() + e);
      const __m256d d = _mm256_loadu_pd(diff.data() + base + e);
      _mm256_storeu_pd(out.data() + base + e, _mm256_mul_pd(w, d));
    }
    for (std::size_t e = body; e < q; ++e) out[base + e] = weight[e] * diff[base + e];
  }
}

void projectedStep(std::span<const double> x, std::span<const double> g, double alpha,
                   std::span<const double> lower, std::span<const double> upper,
                   std::span<double> out) {
  const std::size_t m = x.size();
  const std::size_t body = m - m % kLanes;
  const __m256d a = _mm256_set1_pd(alpha);
  for (std::size_t k = 0; k < body; k += kLanes) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x.data() + k),
                                    _mm256_mul_pd(a, _mm256_loadu_pd(g.data() + k)));
    const __m256d clamped = _mm256_min_pd(_mm256_max_pd(v, _mm256_loadu_pd(lower.data() + k)),
                                          _mm256_loadu_pd(upper.data() + k));
    _mm256_storeu_pd(out.data() + k, clamped);
  }
  for (std::size_t k = body; k < m; ++k) {
    const double v = x[k] - alpha * g[k];
    out[k] = std::min(std::max(v, lower[k]), upper[k]);
  }
}

double squaredDistance(std::span<const double> a, std::span<const double> b) {
  const std::size_t m = a.size();
  const std::size_t body = m - m % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t k = 0; k < body; k += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + k), _mm256_loadu_pd(b.data() + k));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double sum = horizontalSum(acc);
  for (std::size_t k = body; k < m; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

}  // namespace

const KernelTable& avx2Table() {
  static const KernelTable table{
      "avx2",         edgeGeometry, residualEnergy, complementary, dualAscent,
      scaledResidual, weightEdges,  projectedStep,  squaredDistance,
  };
  return table;
}

}  // namespace snl::kernels
