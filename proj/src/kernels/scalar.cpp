#include "snl/kernels.hpp"

#include <algorithm>

namespace snl::kernels {
namespace {

void edgeGeometry(const Coordinates& coords, EdgeIndex edges, std::span<double> diff,
                  std::span<double> xi) {
  const std::size_t q = edges.size();
  std::fill(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(q), 0.0);
  for (int c = 0; c < coords.dim; ++c) {
    const double* p = coords.axis[static_cast<std::size_t>(c)];
    double* d = diff.data() + static_cast<std::size_t>(c) * q;
    for (std::size_t e = 0; e < q; ++e) {
      const double delta = p[edges.head[e]] - p[edges.tail[e]];
      d[e] = delta;
      xi[e] = xi[e] + delta * delta;
    }
  }
}

double residualEnergy(std::span<const double> xi, std::span<const double> d2) {
  double sum = 0.0;
  for (std::size_t e = 0; e < xi.size(); ++e) {
    const double r = xi[e] - d2[e];
    sum += r * r;
  }
  return sum;
}

double complementary(std::span<const double> xi, std::span<const double> d2,
                     std::span<const double> tau) {
  double sum = 0.0;
  for (std::size_t e = 0; e < xi.size(); ++e) {
    sum += tau[e] * (xi[e] - d2[e]) - tau[e] * tau[e] * 0.25;
  }
  return sum;
}

void dualAscent(std::span<const double> xi, std::span<const double> d2,
                std::span<const double> tau, std::span<double> out) {
  for (std::size_t e = 0; e < xi.size(); ++e) out[e] = (xi[e] - d2[e]) - tau[e] * 0.5;
}

void scaledResidual(std::span<const double> xi, std::span<const double> d2, double scale,
                    std::span<double> out) {
  for (std::size_t e = 0; e < xi.size(); ++e) out[e] = scale * (xi[e] - d2[e]);
}

void weightEdges(std::span<const double> weight, std::span<const double> diff, int dim,
                 std::span<double> out) {
  const std::size_t q = weight.size();
  for (int c = 0; c < dim; ++c) {
    const std::size_t base = static_cast<std::size_t>(c) * q;
    for (std::size_t e = 0; e < q; ++e) out[base + e] = weight[e] * diff[base + e];
  }
}

void projectedStep(std::span<const double> x, std::span<const double> g, double alpha,
                   std::span<const double> lower, std::span<const double> upper,
                   std::span<double> out) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = x[k] - alpha * g[k];
    out[k] = std::min(std::max(v, lower[k]), upper[k]);
  }
}

double squaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

}  // namespace

const KernelTable& scalarKernels() {
  static const KernelTable table{
      "scalar",      edgeGeometry, residualEnergy, complementary, dualAscent,
      scaledResidual, weightEdges, projectedStep,  squaredDistance,
  };
  return table;
}

}  // namespace snl::kernels
