#pragma once

// Per-edge geometry for a candidate configuration, evaluated with the
// active kernel table. Internal to the library.

#include <vector>

#include "snl/common.hpp"
#include "snl/kernels.hpp"
#include "snl/network.hpp"

namespace snl::detail {

struct EdgeGeometry {
  int dim = 0;
  std::size_t q = 0;
  std::vector<double> coords;  // dim x (N + M), one row per axis
  std::vector<double> diff;    // dim x q, one row per axis
  std::vector<double> xi;      // q squared lengths

  void evaluate(const Positions& x, const SensorNetwork& net, const EdgeSet& edges,
                const kernels::KernelTable& k = kernels::active());
};

/// grad.col(i) += sum over edges of weight_e * (y_head - y_tail) with the
/// sign taken from i's role; anchor endpoints are skipped. Fixed edge order.
void scatterEdgeVectors(const EdgeSet& edges, std::span<const double> weighted, int dim,
                        Positions& grad);

void checkShape(const Positions& x, const SensorNetwork& net);

}  // namespace snl::detail
