#include "snl/gradcheck.hpp"

#include <algorithm>
#include <functional>

#include "snl/canonical_dual.hpp"
#include "snl/game.hpp"
#include "snl/network.hpp"

namespace snl {

namespace {

constexpr double kStep = 1e-6;

Vector centralDifference(const std::function<double(const Vector&)>& f, const Vector& at) {
  Vector g(at.size());
  Vector p = at;
  for (Eigen::Index k = 0; k < at.size(); ++k) {
    p[k] = at[k] + kStep;
    const double up = f(p);
    p[k] = at[k] - kStep;
    const double down = f(p);
    p[k] = at[k];
    g[k] = (up - down) / (2.0 * kStep);
  }
  return g;
}

double relativeError(const Vector& analytic, const Vector& numeric) {
  return (analytic - numeric).norm() / std::max({analytic.norm(), numeric.norm(), 1e-12});
}

Positions randomPositions(Rng& rng, int dim, int n) {
  Positions x(dim, n);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform();
  return x;
}

Vector randomTau(Rng& rng, const EdgeSet& edges) {
  Vector t = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.activeCount(); ++e) t[static_cast<Eigen::Index>(e)] = rng.uniform(-1.0, 1.0);
  return t;
}

Vector flat(const Positions& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Positions unflat(const Vector& v, int dim) { return Eigen::Map<const Positions>(v.data(), dim, v.size() / dim); }

}  // namespace

std::vector<GradcheckResult> runGradchecks(const GradcheckOptions& opts) {
  const SensorNetwork net =
      generateRandomInstance(2, opts.numSensors, opts.numAnchors, opts.radius, opts.seed);
  const EdgeSet edges = buildEdgeSet(net);
  const int dim = net.dimension();
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);

  GradcheckResult gp{"grad_potential", 0, 0.0, 1e-6};
  GradcheckResult gj{"grad_payoff", 0, 0.0, 1e-6};
  GradcheckResult gx{"grad_psi_x", 0, 0.0, 1e-6};
  GradcheckResult gt{"grad_psi_tau", 0, 0.0, 1e-6};
  GradcheckResult hq{"hessian_psi_x", 0, 0.0, 1e-4};

  for (int s = 0; s < opts.points; ++s) {
    const Positions x = randomPositions(rng, dim, net.numSensors());
    const DualVariable tau{randomTau(rng, edges)};

    const Vector fdP = centralDifference(
        [&](const Vector& v) { return potential(unflat(v, dim), net, edges); }, flat(x));
    gp.worst = std::max(gp.worst, relativeError(flat(gradPotential(x, net, edges)), fdP));
    ++gp.points;

    const int player = s % net.numSensors();
    const Vector fdJ = centralDifference(
        [&](const Vector& v) {
          Positions moved = x;
          moved.col(player) = v;
          return payoff(player, moved, net, edges);
        },
        x.col(player));
    gj.worst = std::max(gj.worst, relativeError(gradPayoff(player, x, net, edges), fdJ));
    ++gj.points;

    const Vector fdX = centralDifference(
        [&](const Vector& v) { return psi(unflat(v, dim), tau, net, edges); }, flat(x));
    gx.worst = std::max(gx.worst, relativeError(flat(gradPsiX(x, tau, net, edges)), fdX));
    ++gx.points;

    Vector fdT = centralDifference(
        [&](const Vector& v) { return psi(x, DualVariable{v}, net, edges); }, tau.values);
    gt.worst = std::max(gt.worst, relativeError(gradPsiTau(x, tau, net, edges), fdT));
    ++gt.points;
  }

  // Hessian at two unrelated x for the same tau; smaller instance keeps the
  // O((dim N)^2) double loop cheap.
  const SensorNetwork small = generateRandomInstance(2, 4, 3, 0.8, opts.seed + 1);
  const EdgeSet smallEdges = buildEdgeSet(small);
  const DualVariable tau{randomTau(rng, smallEdges)};
  for (int s = 0; s < 2; ++s) {
    const Positions x = randomPositions(rng, 2, small.numSensors());
    hq.worst = std::max(hq.worst, hessianPsiXCheck(x, tau, small, smallEdges));
    ++hq.points;
  }
  return {gp, gj, gx, gt, hq};
}

}  // namespace snl
