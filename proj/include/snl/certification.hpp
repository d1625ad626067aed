#pragma once

// Global-equilibrium certificate, deviation probes, error metrics and an
// exhaustive grid oracle for tiny instances.

#include <cstdint>
#include <vector>

#include "snl/canonical_dual.hpp"
#include "snl/common.hpp"
#include "snl/game.hpp"
#include "snl/network.hpp"
#include "snl/projection.hpp"

namespace snl {

enum class Verdict { GlobalNE, StationaryOnly, NotStationary };

const char* toString(Verdict verdict);
Verdict verdictFromString(const std::string& s);

struct CertifyOptions {
  double epsCert = 1e-4;
  /// Stationarity threshold; nonpositive means 1e-5 * sqrt(dim * N).
  double epsStat = 0.0;
  /// Step of the projected-gradient probes in both blocks.
  double probeStep = 1.0;
  ProjectionOptions projection{};
};

double defaultStationarityTolerance(const SensorNetwork& net);

struct Certificate {
  Vector dualityResiduals;  ///< |tau_e - 2 (xi_e(x) - d_e^2)| per edge
  double maxResidual = 0.0;
  double stationaryResidualX = 0.0;
  double stationaryResidualTau = 0.0;
  double epsCert = 0.0;
  double epsStat = 0.0;
  Verdict verdict = Verdict::NotStationary;
};

Certificate certify(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                    const EdgeSet& edges, const std::vector<Box>& boxes, const CertifyOptions& opts = {});

/// Most favourable feasible dual for a given x: Proj_E+(2 (Lambda(x) - d^2)).
DualVariable favourableDual(const Positions& x, const SensorNetwork& net, const EdgeSet& edges,
                            const std::vector<Box>& boxes);

/// Largest J_i(x) - J_i(x'_i, x_-i) over random x'_i in the box and the box
/// vertices. A positive value proves x is not a Nash equilibrium.
double verifyNashByDeviation(const Positions& x, const std::vector<Box>& boxes, const SensorNetwork& net,
                             const EdgeSet& edges, int samples, std::uint64_t seed);

struct ErrorReport {
  Vector perNodeError;
  double rmse = 0.0;
  double maxError = 0.0;
};

ErrorReport errorReport(const Positions& x, const SensorNetwork& net);

struct GridOptimum {
  StrategyProfile profile;
  double potential = 0.0;
  double gridPotential = 0.0;
};

/// Exhaustive search over `resolution` points per coordinate followed by a
/// projected-gradient polish with backtracking. Refuses dim * N > 6.
GridOptimum bruteForceGlobalMin(const SensorNetwork& net, const EdgeSet& edges,
                                const std::vector<Box>& boxes, int resolution);

}  // namespace snl
