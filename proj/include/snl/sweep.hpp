#pragma once

// Size sweep driver: random rigid instances, one Alg. 1 solve and one
// certificate per (N, seed) cell.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "snl/certification.hpp"
#include "snl/scenario_io.hpp"
#include "snl/solver.hpp"

namespace snl {

/// M = max(dim + 1, ceil(N * perSensor)), optionally fixed.
struct AnchorsRule {
  double perSensor = 0.2;
  int fixed = 0;  ///< > 0 overrides the proportional rule

  int anchorsFor(int dim, int numSensors) const;
};

struct SweepOptions {
  std::vector<int> sizes{10, 20, 35, 50};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int dimension = 2;
  double radius = 0.9;
  AnchorsRule anchors{};
  int maxAttempts = 50;
  SolverConfig solver{};
  CertifyOptions certify{};
};

struct SweepRow {
  int numSensors = 0;
  int numAnchors = 0;
  std::uint64_t seed = 0;
  std::uint64_t instanceSeed = 0;
  int attempts = 0;
  std::size_t edges = 0;
  long iterations = 0;
  SolveStatus status = SolveStatus::MaxIter;
  Verdict verdict = Verdict::NotStationary;
  double rmse = 0.0;
  double maxError = 0.0;
  double potential = 0.0;
  double tauInf = 0.0;
  double maxResidual = 0.0;
  double wallTime = 0.0;
};

/// First instance seed, starting from a value derived from (N, seed), whose
/// network passes both rigidity tests. Throws RigidityGenerationFailed.
SensorNetwork generateRigidInstance(int dim, int numSensors, int numAnchors, double radius,
                                    std::uint64_t seed, int maxAttempts, std::uint64_t* usedSeed = nullptr,
                                    int* attempts = nullptr);

/// Called once per finished cell with its row and full result document.
using SweepCallback = std::function<void(const SweepRow&, const ResultDocument&)>;

/// Rows sorted by (N, seed).
std::vector<SweepRow> runSweep(const SweepOptions& opts, const SweepCallback& onCell = {});

void writeSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace snl
