#pragma once

// Edge-parallel arithmetic kernels.
//
// Every per-edge quantity the solver needs (squared lengths, residuals,
// dual ascent directions, weighted edge vectors) is a data-parallel loop
// over a structure-of-arrays edge list. Each kernel has a scalar reference
// implementation and, where the build and CPU allow it, an AVX2 variant.
// The active table is chosen once at runtime.
//
// Elementwise kernels produce bit-identical results in both variants (no
// FMA contraction, same operation order). Reductions differ only in
// summation order.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace snl::kernels {

/// Node coordinates, one contiguous array per axis (length N + M each).
struct Coordinates {
  int dim = 0;
  std::array<const double*, 3> axis{};
};

/// Structure-of-arrays view of an edge list; head < tail for every edge.
struct EdgeIndex {
  std::span<const std::int32_t> head;
  std::span<const std::int32_t> tail;

  std::size_t size() const { return head.size(); }
};

struct KernelTable {
  const char* name;

  /// diff[c*q + e] = p_head[c] - p_tail[c];  xi[e] = sum_c diff^2.
  void (*edgeGeometry)(const Coordinates& coords, EdgeIndex edges,
                       std::span<double> diff, std::span<double> xi);

  /// sum_e (xi[e] - d2[e])^2
  double (*residualEnergy)(std::span<const double> xi, std::span<const double> d2);

  /// sum_e tau[e] (xi[e] - d2[e]) - tau[e]^2 / 4
  double (*complementary)(std::span<const double> xi, std::span<const double> d2,
                          std::span<const double> tau);

  /// out[e] = xi[e] - d2[e] - tau[e] / 2
  void (*dualAscent)(std::span<const double> xi, std::span<const double> d2,
                     std::span<const double> tau, std::span<double> out);

  /// out[e] = scale * (xi[e] - d2[e])
  void (*scaledResidual)(std::span<const double> xi, std::span<const double> d2,
                         double scale, std::span<double> out);

  /// out[c*q + e] = weight[e] * diff[c*q + e] for c < dim.
  void (*weightEdges)(std::span<const double> weight, std::span<const double> diff,
                      int dim, std::span<double> out);

  /// out[k] = clamp(x[k] - alpha g[k], lower[k], upper[k])
  void (*projectedStep)(std::span<const double> x, std::span<const double> g, double alpha,
                        std::span<const double> lower, std::span<const double> upper,
                        std::span<double> out);

  /// sum_k (a[k] - b[k])^2
  double (*squaredDistance)(std::span<const double> a, std::span<const double> b);
};

const KernelTable& scalarKernels();

/// AVX2 table, or nullptr when the build or the running CPU lacks AVX2/FMA.
const KernelTable* avx2Kernels();

/// The table used by the library: AVX2 when available unless the
/// environment variable SNL_KERNELS=scalar is set or forceScalar(true)
/// was called.
const KernelTable& active();

void forceScalar(bool enabled);

}  // namespace snl::kernels
