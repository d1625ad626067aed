#pragma once

// Primal-dual projected gradient iteration on Psi: ascent in tau over E+,
// descent in each x_i over its box, with a decaying step.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "snl/canonical_dual.hpp"
#include "snl/common.hpp"
#include "snl/game.hpp"
#include "snl/network.hpp"
#include "snl/projection.hpp"

namespace snl {

enum class InitMode { RandomInBox, Provided };
enum class TauInit { Zero, SmallPositive };
enum class UpdateOrder { Jacobi, GaussSeidel };

struct SolverConfig {
  /// Initial step; 0 picks alphaScale / sqrt(dim * N) for the instance.
  double alpha0 = 0.0;
  double alphaScale = 1.2;
  double gamma = 0.51;
  /// k0 in alpha0 * (1 + k / k0)^(-gamma); 1 gives alpha0 * (k + 1)^(-gamma).
  double stepOffset = 1e4;
  double tol = 1e-5;
  long maxIter = 200000;
  std::uint64_t seed = 0;
  InitMode initMode = InitMode::RandomInBox;
  std::optional<Positions> initialPositions;  ///< used with InitMode::Provided
  TauInit tauInit = TauInit::Zero;
  double tauEpsilon = 1e-3;                   ///< value for TauInit::SmallPositive
  UpdateOrder order = UpdateOrder::GaussSeidel;
  bool tauNonneg = false;
  long nashEvery = 100;
  long traceEvery = 1;  ///< 0 keeps only the final row
  bool recordIterates = false;  ///< copy x and tau into each recorded row
  ProjectionOptions projection{};

  void validate() const;
};

enum class SolveStatus { Converged, MaxIter, ProjectionFailure };

const char* toString(SolveStatus status);

struct TraceRow {
  long k = 0;
  double alpha = 0.0;
  double potential = 0.0;
  double psi = 0.0;
  double dxNorm = 0.0;
  double dtauNorm = 0.0;
  std::optional<double> nashResidual;
  std::optional<Positions> x;
  std::optional<Vector> tau;
};

struct SaddleTrace {
  std::vector<TraceRow> rows;
  SolveStatus status = SolveStatus::MaxIter;
  long iterations = 0;
  double finalAlpha = 0.0;
  long projectionIterations = 0;
};

/// Receives every recorded row as it is produced.
using TraceSink = std::function<void(const TraceRow&)>;

struct SolveResult {
  StrategyProfile profile;
  DualVariable tau;
  SaddleTrace trace;
};

/// Copy of `cfg` with the automatic initial step filled in for `net`.
SolverConfig resolveStep(const SolverConfig& cfg, const SensorNetwork& net);

/// alpha0 * (1 + k / stepOffset)^(-gamma); alpha0 must already be resolved.
double stepSchedule(const SolverConfig& cfg, long k);

Positions initialPositions(const std::vector<Box>& boxes, const SolverConfig& cfg);

SolveResult solveAlg1(const SensorNetwork& net, const EdgeSet& edges, const std::vector<Box>& boxes,
                      const SolverConfig& cfg, const TraceSink& sink = {});

/// Projected gradient descent on P with the same schedule and stopping rule.
SolveResult solveBaselineDescent(const SensorNetwork& net, const EdgeSet& edges,
                                 const std::vector<Box>& boxes, const SolverConfig& cfg,
                                 const TraceSink& sink = {});

}  // namespace snl
