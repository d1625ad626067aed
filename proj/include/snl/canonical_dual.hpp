#pragma once

// Canonical transformation of the potential.
//
//   xi_ij   = |y_i - y_j|^2                      (geometric map)
//   Phi(xi) = sum (xi_ij - d_ij^2)^2             P(x) = Phi(xi(x))
//   tau_ij  = 2 (xi_ij - d_ij^2)                 (duality map, invertible)
//   Phi*(t) = sum t^2/4 + d^2 t                  (Legendre conjugate)
//   Psi     = sum t (xi - d^2) - t^2/4           (complementary function)
//
// Psi is quadratic in x with Hessian Q(tau) = 2 (L(tau) (x) I_n), where L is
// the grounded Laplacian below, and concave in tau with Hessian -I/2.
//
// Anchor-anchor edges keep their slots in every edge-indexed vector, but
// Psi, its gradients and Q ignore them; their dual components stay pinned
// at zero.

#include "snl/common.hpp"
#include "snl/network.hpp"

namespace snl {

/// Squared edge lengths, indexed like the EdgeSet.
struct XiVector {
  Vector values;
};

/// Canonical dual variable tau, indexed like the EdgeSet.
struct DualVariable {
  Vector values;

  static DualVariable zero(std::size_t q) { return {Vector::Zero(static_cast<Eigen::Index>(q))}; }
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// N x N matrix with L_ii = sum of tau over i's SS and SA edges and
/// L_ij = -tau_ij on SS edges.
struct GroundedLaplacian {
  Matrix matrix;

  /// 2 (L (x) I_dim), ordered like the flattened dim x N positions.
  Matrix hessian(int dim) const;
};

XiVector lambdaMap(const Positions& x, const SensorNetwork& net, const EdgeSet& edges);

double phi(const XiVector& xi, const EdgeSet& edges);

DualVariable dualityMap(const XiVector& xi, const EdgeSet& edges);
XiVector inverseDualityMap(const DualVariable& tau, const EdgeSet& edges);

double phiStar(const DualVariable& tau, const EdgeSet& edges);

double psi(const Positions& x, const DualVariable& tau, const SensorNetwork& net, const EdgeSet& edges);

/// dim x N; column i is sum over i's edges of 2 tau_ij (x_i - y_j).
Positions gradPsiX(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                   const EdgeSet& edges);

/// (xi_ij - d_ij^2) - tau_ij / 2 on SS/SA edges, 0 on AA edges.
Vector gradPsiTau(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                  const EdgeSet& edges);

GroundedLaplacian assembleQ(const DualVariable& tau, const EdgeSet& edges);

/// Max-abs difference between Q(tau) and a central-difference Hessian of
/// Psi in x evaluated at x.
double hessianPsiXCheck(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                        const EdgeSet& edges, double step = 1e-3);

}  // namespace snl
