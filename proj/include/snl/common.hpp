#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace snl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Column i holds the position estimate of non-anchor node i (dim x N).
using Positions = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  GroundTruthRequired,
  TooFewAnchors,
  NotAPlayer,
  NotRigid,
  MaxInnerIterations,
  ProjectionFailure,
  TooLarge,
  IngestError,
  RigidityGenerationFailed,
  ParseError,
};

const char* toString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by CSV ingestion; `row` is the 1-based data row (header excluded).
class IngestError : public Error {
 public:
  IngestError(long row, const std::string& message);

  long row() const { return row_; }

 private:
  long row_;
};

/// Axis-aligned box; a player's feasible set.
struct Box {
  Vector lower;
  Vector upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::Ref<const Vector>& v, double slack = 0.0) const;
  Vector clamp(const Eigen::Ref<const Vector>& v) const;
  static Box unit(int dim);
};

std::vector<Box> unitBoxes(int dim, int count);

/// Seeded generator used everywhere randomness is needed. The double draw
/// is defined bit-exactly (53 high bits of mt19937_64), so instances are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace snl
