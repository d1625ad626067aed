#include "snl/game.hpp"

#include "edge_eval.hpp"

namespace snl {

namespace {

void requirePlayer(int player, const SensorNetwork& net) {
  if (player < 0 || player >= net.numSensors()) {
    throw Error(ErrorCode::NotAPlayer, "node " + std::to_string(player) + " is not a non-anchor node");
  }
}

/// Position of the neighbour across edge e as seen from player i.
Vector neighbourPosition(const Edge& edge, int player, const Positions& x, const SensorNetwork& net) {
  const int other = edge.i == player ? edge.j : edge.i;
  if (other < net.numSensors()) return x.col(other);
  return net.anchors().col(other - net.numSensors());
}

}  // namespace

bool StrategyProfile::feasible(double slack) const {
  if (static_cast<std::size_t>(positions.cols()) != boxes.size()) return false;
  for (Eigen::Index i = 0; i < positions.cols(); ++i) {
    if (!boxes[static_cast<std::size_t>(i)].contains(positions.col(i), slack)) return false;
  }
  return true;
}

double DeviationCheck::residual() const { return std::abs(deltaP - deltaJ); }

double payoff(int player, const Positions& x, const SensorNetwork& net, const EdgeSet& edges) {
  requirePlayer(player, net);
  detail::checkShape(x, net);
  double sum = 0.0;
  for (std::size_t e : edges.incident(player)) {
    const Vector y = neighbourPosition(edges[e], player, x, net);
    const double r = (x.col(player) - y).squaredNorm() - edges[e].squaredDistance;
    sum += r * r;
  }
  return sum;
}

double potential(const Positions& x, const SensorNetwork& net, const EdgeSet& edges) {
  detail::EdgeGeometry g;
  g.evaluate(x, net, edges);
  return kernels::active().residualEnergy(g.xi, edges.squaredDistances());
}

Positions gradPotential(const Positions& x, const SensorNetwork& net, const EdgeSet& edges) {
  const auto& k = kernels::active();
  detail::EdgeGeometry g;
  g.evaluate(x, net, edges, k);
  std::vector<double> weight(g.q);
  std::vector<double> weighted(g.diff.size());
  k.scaledResidual(g.xi, edges.squaredDistances(), 4.0, weight);
  k.weightEdges(weight, g.diff, g.dim, weighted);
  Positions grad = Positions::Zero(net.dimension(), net.numSensors());
  detail::scatterEdgeVectors(edges, weighted, g.dim, grad);
  return grad;
}

Vector gradPayoff(int player, const Positions& x, const SensorNetwork& net, const EdgeSet& edges) {
  requirePlayer(player, net);
  detail::checkShape(x, net);
  Vector grad = Vector::Zero(net.dimension());
  for (std::size_t e : edges.incident(player)) {
    const Vector delta = x.col(player) - neighbourPosition(edges[e], player, x, net);
    grad += 4.0 * (delta.squaredNorm() - edges[e].squaredDistance) * delta;
  }
  return grad;
}

DeviationCheck checkPotentialIdentity(int player, const Positions& x, const Vector& deviation,
                                      const SensorNetwork& net, const EdgeSet& edges) {
  requirePlayer(player, net);
  Positions moved = x;
  moved.col(player) = deviation;
  DeviationCheck check;
  check.player = player;
  check.from = x.col(player);
  check.to = deviation;
  check.deltaP = potential(moved, net, edges) - potential(x, net, edges);
  check.deltaJ = payoff(player, moved, net, edges) - payoff(player, x, net, edges);
  return check;
}

Vector nashStationarityResidual(const Positions& x, const std::vector<Box>& boxes,
                                const SensorNetwork& net, const EdgeSet& edges, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "probe step must be positive");
  if (boxes.size() != static_cast<std::size_t>(net.numSensors())) {
    throw Error(ErrorCode::InvalidArgument, "one box per player required");
  }
  Vector r(net.numSensors());
  for (int i = 0; i < net.numSensors(); ++i) {
    const Vector xi = x.col(i);
    const Vector trial = boxes[static_cast<std::size_t>(i)].clamp(xi - step * gradPayoff(i, x, net, edges));
    r[i] = (xi - trial).norm();
  }
  return r;
}

}  // namespace snl
