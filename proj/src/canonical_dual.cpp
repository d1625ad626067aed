#include "snl/canonical_dual.hpp"

#include "edge_eval.hpp"

namespace snl {

namespace {

void requireSize(const Vector& v, const EdgeSet& edges, const char* what) {
  if (static_cast<std::size_t>(v.size()) != edges.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must have one entry per edge");
  }
}

std::span<const double> prefix(const Vector& v, std::size_t n) { return {v.data(), n}; }
std::span<const double> prefix(const std::vector<double>& v, std::size_t n) { return {v.data(), n}; }

}  // namespace

Matrix GroundedLaplacian::hessian(int dim) const {
  const Eigen::Index n = matrix.rows();
  Matrix q = Matrix::Zero(n * dim, n * dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (int c = 0; c < dim; ++c) q(i * dim + c, j * dim + c) = 2.0 * matrix(i, j);
  return q;
}

XiVector lambdaMap(const Positions& x, const SensorNetwork& net, const EdgeSet& edges) {
  detail::EdgeGeometry g;
  g.evaluate(x, net, edges);
  return {Eigen::Map<const Vector>(g.xi.data(), static_cast<Eigen::Index>(g.q))};
}

double phi(const XiVector& xi, const EdgeSet& edges) {
  requireSize(xi.values, edges, "xi");
  return kernels::active().residualEnergy(prefix(xi.values, edges.size()), edges.squaredDistances());
}

DualVariable dualityMap(const XiVector& xi, const EdgeSet& edges) {
  requireSize(xi.values, edges, "xi");
  DualVariable tau{Vector(xi.values.size())};
  kernels::active().scaledResidual(prefix(xi.values, edges.size()), edges.squaredDistances(), 2.0,
                                   {tau.values.data(), edges.size()});
  return tau;
}

XiVector inverseDualityMap(const DualVariable& tau, const EdgeSet& edges) {
  requireSize(tau.values, edges, "tau");
  XiVector xi{Vector(tau.values.size())};
  const auto d2 = edges.squaredDistances();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto k = static_cast<Eigen::Index>(e);
    xi.values[k] = 0.5 * tau.values[k] + d2[e];
  }
  return xi;
}

double phiStar(const DualVariable& tau, const EdgeSet& edges) {
  requireSize(tau.values, edges, "tau");
  const auto d2 = edges.squaredDistances();
  double sum = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double t = tau.values[static_cast<Eigen::Index>(e)];
    sum += 0.25 * t * t + d2[e] * t;
  }
  return sum;
}

double psi(const Positions& x, const DualVariable& tau, const SensorNetwork& net, const EdgeSet& edges) {
  requireSize(tau.values, edges, "tau");
  detail::EdgeGeometry g;
  g.evaluate(x, net, edges);
  const std::size_t active = edges.activeCount();
  return kernels::active().complementary(prefix(g.xi, active), edges.squaredDistances().first(active),
                                         prefix(tau.values, active));
}

Positions gradPsiX(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                   const EdgeSet& edges) {
  requireSize(tau.values, edges, "tau");
  const auto& k = kernels::active();
  detail::EdgeGeometry g;
  g.evaluate(x, net, edges, k);
  const Vector weight = 2.0 * tau.values;
  std::vector<double> weighted(g.diff.size());
  k.weightEdges(prefix(weight, g.q), g.diff, g.dim, weighted);
  Positions grad = Positions::Zero(net.dimension(), net.numSensors());
  detail::scatterEdgeVectors(edges, weighted, g.dim, grad);
  return grad;
}

Vector gradPsiTau(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                  const EdgeSet& edges) {
  requireSize(tau.values, edges, "tau");
  detail::EdgeGeometry g;
  g.evaluate(x, net, edges);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  const std::size_t active = edges.activeCount();
  kernels::active().dualAscent(prefix(g.xi, active), edges.squaredDistances().first(active),
                               prefix(tau.values, active), {out.data(), active});
  return out;
}

GroundedLaplacian assembleQ(const DualVariable& tau, const EdgeSet& edges) {
  requireSize(tau.values, edges, "tau");
  const int n = edges.numSensors();
  Matrix l = Matrix::Zero(n, n);
  for (std::size_t e = 0; e < edges.activeCount(); ++e) {
    const Edge& edge = edges[e];
    const double t = tau.values[static_cast<Eigen::Index>(e)];
    l(edge.i, edge.i) += t;
    if (edge.kind == EdgeKind::SensorSensor) {
      l(edge.j, edge.j) += t;
      l(edge.i, edge.j) -= t;
      l(edge.j, edge.i) -= t;
    }
  }
  return {std::move(l)};
}

double hessianPsiXCheck(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                        const EdgeSet& edges, double step) {
  const Matrix q = assembleQ(tau, edges).hessian(net.dimension());
  const Eigen::Index m = x.size();
  auto f = [&](Eigen::Index a, double sa, Eigen::Index b, double sb) {
    Positions p = x;
    p.data()[a] += sa * step;
    p.data()[b] += sb * step;
    return psi(p, tau, net, edges);
  };
  double worst = 0.0;
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a; b < m; ++b) {
      const double h = (f(a, 1, b, 1) - f(a, 1, b, -1) - f(a, -1, b, 1) + f(a, -1, b, -1)) /
                       (4.0 * step * step);
      worst = std::max(worst, std::abs(h - q(a, b)));
    }
  }
  return worst;
}

}  // namespace snl
