#pragma once

// Projections used by the saddle solver: the per-player box projection and
// the Euclidean projection onto
//
//   E+ = { tau : lo <= tau <= hi, L(tau) PSD }
//
// where [lo, hi] is the per-edge range of 2 (xi - d^2) over the boxes and
// anchor-anchor slots are pinned to [0, 0].
//
// The E+ projection is solved through its dual. For a multiplier Z (PSD,
// N x N) the inner minimizer is tau(Z) = clip(tau0 + L*(Z), lo, hi), and Z
// is updated by accelerated projected gradient steps
// Z <- Proj_PSD(Z - eta L(tau(Z))). The multiplier can be carried from one
// call to the next, which makes repeated projections of nearby points cheap.

#include <optional>

#include "snl/canonical_dual.hpp"
#include "snl/common.hpp"
#include "snl/network.hpp"

namespace snl {

struct DualBounds {
  Vector lower;
  Vector upper;
};

/// Per-edge box for tau: [-2 d^2, 2 (D^2 - d^2)] with D the largest distance
/// reachable between the endpoints' feasible sets; zero on AA edges.
DualBounds dualBounds(const SensorNetwork& net, const EdgeSet& edges, const std::vector<Box>& boxes);

Vector projectBox(const Vector& v, const Box& box);

/// Adjoint of tau -> L(tau) under the Frobenius inner product.
Vector laplacianAdjoint(const Matrix& z, const EdgeSet& edges);

/// Smallest eigenvalue of L(tau).
double minEigenvalue(const DualVariable& tau, const EdgeSet& edges);

bool isInEPlus(const DualVariable& tau, const EdgeSet& edges, const DualBounds& bounds,
               double tol = 1e-8);

struct ProjectionOptions {
  double tol = 1e-8;
  int maxIter = 500;
  /// Project onto the nonnegative part of the bounds instead of E+.
  bool nonnegativeOnly = false;
};

struct ProjectionReport {
  DualVariable projected;
  int iterations = 0;
  double infeasibilityBefore = 0.0;  ///< max(0, -lambda_min(L(tau0)))
  double residual = 0.0;             ///< change of tau in the last inner step
  bool converged = true;
};

/// Stateful projector that keeps the dual multiplier between calls.
class EPlusProjector {
 public:
  EPlusProjector(const EdgeSet& edges, DualBounds bounds, ProjectionOptions opts = {});

  ProjectionReport project(const DualVariable& tau0);

  const DualBounds& bounds() const { return bounds_; }
  const ProjectionOptions& options() const { return opts_; }
  const Matrix& multiplier() const { return z_; }
  void resetMultiplier();

 private:
  Vector clip(const Vector& tau) const;
  Vector tauOf(const Vector& tau0, const Matrix& z) const;

  const EdgeSet* edges_;
  DualBounds bounds_;
  ProjectionOptions opts_;
  Matrix z_;
  double lipschitz_ = 1.0;
};

/// One-shot projection; throws MaxInnerIterations when the inner loop does
/// not converge.
ProjectionReport projectEPlus(const DualVariable& tau0, const EdgeSet& edges, const DualBounds& bounds,
                              const ProjectionOptions& opts = {});

}  // namespace snl
