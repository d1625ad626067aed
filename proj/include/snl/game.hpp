#pragma once

// The localization game: payoffs J_i, the potential P, their gradients and
// the first-order Nash stationarity residual.
//
// J_i sums over every edge incident to player i, anchor neighbours
// included. With anchor terms left out, a unilateral deviation would change
// P (which contains the sensor-anchor edges) by a different amount than
// J_i, and the game would not be a potential game.

#include <cmath>
#include <vector>

#include "snl/common.hpp"
#include "snl/network.hpp"

namespace snl {

/// Estimated positions of all players together with their feasible boxes.
struct StrategyProfile {
  Positions positions;
  std::vector<Box> boxes;

  int numPlayers() const { return static_cast<int>(positions.cols()); }
  bool feasible(double slack = 0.0) const;
};

struct DeviationCheck {
  int player = 0;
  Vector from;
  Vector to;
  double deltaP = 0.0;
  double deltaJ = 0.0;

  double residual() const;
};

/// J_i(x); throws NotAPlayer when `player` is not a non-anchor index.
double payoff(int player, const Positions& x, const SensorNetwork& net, const EdgeSet& edges);

/// P(x) = sum over edges of (|y_i - y_j|^2 - d_ij^2)^2.
double potential(const Positions& x, const SensorNetwork& net, const EdgeSet& edges);

/// dim x N matrix; column i is the gradient of P with respect to x_i.
Positions gradPotential(const Positions& x, const SensorNetwork& net, const EdgeSet& edges);

/// Gradient of J_i in x_i, assembled from i's incident edges only.
Vector gradPayoff(int player, const Positions& x, const SensorNetwork& net, const EdgeSet& edges);

DeviationCheck checkPotentialIdentity(int player, const Positions& x, const Vector& deviation,
                                      const SensorNetwork& net, const EdgeSet& edges);

/// r_i = |x_i - Proj_box(x_i - step * grad J_i(x))| for every player.
Vector nashStationarityResidual(const Positions& x, const std::vector<Box>& boxes,
                                const SensorNetwork& net, const EdgeSet& edges, double step = 1.0);

/// Threshold below which a player's residual counts as stationary.
inline double stationarityThreshold(int dim) { return 1e-5 * std::sqrt(static_cast<double>(dim)); }

}  // namespace snl
