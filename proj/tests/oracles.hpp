#pragma once

// Reference computations written directly from the definitions, sharing no
// code with the library beyond plain Eigen types.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "snl/network.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct PairTerm {
  int i;
  int j;
  double d2;
};

// Every non-anchor pair (sensor-sensor or sensor-anchor) within the radius,
// found by an all-pairs scan over true positions.
inline std::vector<PairTerm> pairsWithinRadius(const MatrixXd& truth, const MatrixXd& anchors, double radius) {
  const int n = static_cast<int>(truth.cols());
  const int m = static_cast<int>(anchors.cols());
  MatrixXd all(truth.rows(), n + m);
  all << truth, anchors;
  std::vector<PairTerm> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n + m; ++b) {
      const double d2 = (all.col(a) - all.col(b)).squaredNorm();
      if (std::sqrt(d2) <= radius) out.push_back({a, b, d2});
    }
  }
  return out;
}

inline VectorXd position(const MatrixXd& x, const MatrixXd& anchors, int node) {
  const int n = static_cast<int>(x.cols());
  return node < n ? VectorXd(x.col(node)) : VectorXd(anchors.col(node - n));
}

inline double potential(const MatrixXd& x, const MatrixXd& anchors, const std::vector<PairTerm>& terms) {
  double p = 0.0;
  for (const auto& t : terms) {
    const double r = (position(x, anchors, t.i) - position(x, anchors, t.j)).squaredNorm() - t.d2;
    p += r * r;
  }
  return p;
}

inline double payoff(int player, const MatrixXd& x, const MatrixXd& anchors, const std::vector<PairTerm>& terms) {
  double p = 0.0;
  for (const auto& t : terms) {
    if (t.i != player && t.j != player) continue;
    const double r = (position(x, anchors, t.i) - position(x, anchors, t.j)).squaredNorm() - t.d2;
    p += r * r;
  }
  return p;
}

// Laplacian built from the quadratic form it must represent:
// v' L v = sum over SS edges tau (v_i - v_j)^2 + sum over SA edges tau v_i^2.
inline MatrixXd laplacian(const VectorXd& tau, const snl::EdgeSet& edges) {
  const int n = edges.numSensors();
  MatrixXd l = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      VectorXd u = VectorXd::Zero(n), v = VectorXd::Zero(n);
      u[a] += 1.0;
      v[b] += 1.0;
      // polarization of the quadratic form
      auto form = [&](const VectorXd& w) {
        double s = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const auto& ed = edges[e];
          if (ed.j < n) s += tau[static_cast<Eigen::Index>(e)] * std::pow(w[ed.i] - w[ed.j], 2);
          else if (ed.i < n) s += tau[static_cast<Eigen::Index>(e)] * w[ed.i] * w[ed.i];
        }
        return s;
      };
      l(a, b) = 0.25 * (form(u + v) - form(u - v));
    }
  }
  return l;
}

inline double minEig(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

// Projection onto C = {lo <= tau <= hi, L(tau) psd} for two or three free
// coordinates. C is convex with an interior point c, so every boundary
// point is c + rho(u) u for a unit direction u, with rho found by
// bisection. The distance to tau0 is minimised over the direction angles
// by a coarse scan followed by nested local refinement.
inline VectorXd radialProjection(const VectorXd& tau0, const VectorXd& lo, const VectorXd& hi,
                                 const snl::EdgeSet& edges) {
  const int q = static_cast<int>(tau0.size());
  auto inside = [&](const VectorXd& t) {
    for (int e = 0; e < q; ++e)
      if (t[e] < lo[e] || t[e] > hi[e]) return false;
    return minEig(laplacian(t, edges)) >= 0.0;
  };
  if (inside(tau0)) return tau0;
  const VectorXd c = 0.1 * hi;
  auto direction = [&](const VectorXd& ang) {
    VectorXd u(q);
    if (q == 2) {
      u << std::cos(ang[0]), std::sin(ang[0]);
    } else {
      u << std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]), std::cos(ang[0]);
    }
    return u;
  };
  auto boundary = [&](const VectorXd& ang) {
    const VectorXd u = direction(ang);
    double a = 0.0, b = 1.0;
    while (inside(c + b * u)) b *= 2.0;
    for (int it = 0; it < 52; ++it) {
      const double m = 0.5 * (a + b);
      (inside(c + m * u) ? a : b) = m;
    }
    return VectorXd(c + a * u);
  };
  const int dims = q - 1;
  VectorXd span(dims), best(dims);
  if (q == 2) span << 2.0 * M_PI;
  else span << M_PI, 2.0 * M_PI;
  double bestVal = std::numeric_limits<double>::infinity();
  const int coarse = 60;
  for (int a = 0; a < coarse; ++a) {
    for (int b = 0; b < (dims == 2 ? 2 * coarse : 1); ++b) {
      VectorXd ang(dims);
      ang[0] = (a + 0.5) * span[0] / coarse;
      if (dims == 2) ang[1] = (b + 0.5) * span[1] / (2 * coarse);
      const double v = (boundary(ang) - tau0).squaredNorm();
      if (v < bestVal) {
        bestVal = v;
        best = ang;
      }
    }
  }
  VectorXd half(dims);
  half[0] = span[0] / coarse;
  if (dims == 2) half[1] = span[1] / (2 * coarse);
  const int k = 8;
  while (half.maxCoeff() > 1e-8) {
    const VectorXd centre = best;
    for (int a = -k; a <= k; ++a) {
      for (int b = -k; b <= (dims == 2 ? k : -k); ++b) {
        VectorXd ang = centre;
        ang[0] += half[0] * a / k;
        if (dims == 2) ang[1] += half[1] * b / k;
        const double v = (boundary(ang) - tau0).squaredNorm();
        if (v < bestVal) {
          bestVal = v;
          best = ang;
        }
      }
    }
    half *= 0.5;
  }
  return boundary(best);
}

// Global minimiser of a function on [0,1]^2 by exhaustive grid search.
inline Eigen::Vector2d gridArgmin2(const std::function<double(double, double)>& f, int resolution) {
  Eigen::Vector2d best(0, 0);
  double bestVal = std::numeric_limits<double>::infinity();
  for (int a = 0; a <= resolution; ++a) {
    for (int b = 0; b <= resolution; ++b) {
      const double u = static_cast<double>(a) / resolution, v = static_cast<double>(b) / resolution;
      const double val = f(u, v);
      if (val < bestVal) {
        bestVal = val;
        best = {u, v};
      }
    }
  }
  return best;
}

inline MatrixXd trilaterationAnchors() {
  MatrixXd a(2, 3);
  a << 0, 1, 0, 0, 0, 1;
  return a;
}

inline snl::SensorNetwork trilateration() {
  MatrixXd truth(2, 1);
  truth << 0.25, 0.25;
  return snl::SensorNetwork(trilaterationAnchors(), truth, 2.0);
}

}  // namespace oracle
