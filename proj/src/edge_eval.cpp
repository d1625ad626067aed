#include "edge_eval.hpp"

namespace snl::detail {

void checkShape(const Positions& x, const SensorNetwork& net) {
  if (x.rows() != net.dimension() || x.cols() != net.numSensors()) {
    throw Error(ErrorCode::InvalidArgument, "positions must be dim x N");
  }
}

void EdgeGeometry::evaluate(const Positions& x, const SensorNetwork& net, const EdgeSet& edges,
                            const kernels::KernelTable& k) {
  checkShape(x, net);
  dim = net.dimension();
  q = edges.size();
  const auto nodes = static_cast<std::size_t>(net.numNodes());
  const auto sensors = static_cast<std::size_t>(net.numSensors());
  coords.resize(static_cast<std::size_t>(dim) * nodes);
  diff.resize(static_cast<std::size_t>(dim) * q);
  xi.resize(q);

  kernels::Coordinates view;
  view.dim = dim;
  for (int c = 0; c < dim; ++c) {
    double* row = coords.data() + static_cast<std::size_t>(c) * nodes;
    for (std::size_t i = 0; i < sensors; ++i) row[i] = x(c, static_cast<Eigen::Index>(i));
    for (int a = 0; a < net.numAnchors(); ++a) row[sensors + static_cast<std::size_t>(a)] = net.anchors()(c, a);
    view.axis[static_cast<std::size_t>(c)] = row;
  }
  k.edgeGeometry(view, edges.index(), diff, xi);
}

void scatterEdgeVectors(const EdgeSet& edges, std::span<const double> weighted, int dim,
                        Positions& grad) {
  const std::size_t q = edges.size();
  const int sensors = edges.numSensors();
  for (std::size_t e = 0; e < q; ++e) {
    const Edge& edge = edges[e];
    if (edge.i >= sensors) continue;  // anchor-anchor
    for (int c = 0; c < dim; ++c) {
      const double v = weighted[static_cast<std::size_t>(c) * q + e];
      grad(c, edge.i) += v;
      if (edge.j < sensors) grad(c, edge.j) -= v;
    }
  }
}

}  // namespace snl::detail
