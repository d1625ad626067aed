#include <doctest.h>

#include "oracles.hpp"
#include "snl/certification.hpp"
#include "snl/game.hpp"
#include "snl/solver.hpp"

using namespace snl;

namespace {

SolverConfig tightConfig(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.order = UpdateOrder::GaussSeidel;
  cfg.alpha0 = 0.2;
  cfg.stepOffset = 1e4;
  cfg.tol = 1e-10;
  cfg.seed = seed;
  cfg.traceEvery = 0;
  return cfg;
}

// A single non-anchor node where plain descent from seed 0 stalls at a
// spurious stationary point.
SensorNetwork trapInstance() { return generateRandomInstance(2, 1, 3, 2.0, 9); }

SolverConfig trapDescent() {
  SolverConfig cfg;
  cfg.alpha0 = 0.05;
  cfg.stepOffset = 1e9;
  cfg.tol = 1e-12;
  cfg.seed = 0;
  cfg.traceEvery = 0;
  return cfg;
}

}  // namespace

TEST_CASE("ground truth with zero dual is certified") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SensorNetwork net = generateRandomInstance(2, 10, 4, 0.6, seed);
    const EdgeSet edges = buildEdgeSet(net);
    const Certificate c = certify(net.groundTruth(), DualVariable::zero(edges.size()), net, edges, unitBoxes(2, 10));
    CHECK(c.verdict == Verdict::GlobalNE);
    CHECK(c.maxResidual == 0.0);
    CHECK(c.stationaryResidualX == 0.0);
    CHECK(c.stationaryResidualTau == 0.0);
    CHECK(c.epsStat == doctest::Approx(1e-5 * std::sqrt(20.0)));
    CHECK(c.epsCert == 1e-4);
  }
}

TEST_CASE("a small perturbation of the truth is not stationary") {
  const SensorNetwork net = generateRandomInstance(2, 10, 4, 0.6, 2);
  const EdgeSet edges = buildEdgeSet(net);
  Positions x = net.groundTruth();
  x(0, 3) += 1e-3;
  const Certificate c = certify(x, DualVariable::zero(edges.size()), net, edges, unitBoxes(2, 10));
  CHECK(c.verdict == Verdict::NotStationary);
  // the zero dual leaves no x-gradient; the unmet duality shows up in the tau block
  CHECK(c.stationaryResidualTau > c.epsStat);
  CHECK(c.maxResidual > 0.0);
}

TEST_CASE("duality residuals follow their definition") {
  Rng rng(6);
  const SensorNetwork net = generateRandomInstance(2, 8, 4, 0.6, 5);
  const EdgeSet edges = buildEdgeSet(net);
  const auto terms = oracle::pairsWithinRadius(net.groundTruth(), net.anchors(), 0.6);
  Positions x(2, 8);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform();
  Vector tau = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.activeCount(); ++e) tau[static_cast<Eigen::Index>(e)] = rng.uniform(0, 0.1);
  const Certificate c = certify(x, DualVariable{tau}, net, edges, unitBoxes(2, 8));
  double worst = 0.0;
  for (const auto& t : terms) {
    const auto e = edges.find(t.i, t.j);
    REQUIRE(e.has_value());
    const double xi = (oracle::position(x, net.anchors(), t.i) - oracle::position(x, net.anchors(), t.j)).squaredNorm();
    const double rho = std::abs(tau[static_cast<Eigen::Index>(*e)] - 2.0 * (xi - t.d2));
    CHECK(c.dualityResiduals[static_cast<Eigen::Index>(*e)] == doctest::Approx(rho).epsilon(1e-12));
    worst = std::max(worst, rho);
  }
  CHECK(c.maxResidual == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("spurious descent limit is never certified") {
  const SensorNetwork net = trapInstance();
  const EdgeSet edges = buildEdgeSet(net);
  const auto boxes = unitBoxes(2, 1);
  const SolveResult r = solveBaselineDescent(net, edges, boxes, trapDescent());
  const Positions& x = r.profile.positions;
  CHECK(nashStationarityResidual(x, boxes, net, edges).maxCoeff() <= 1e-5);
  CHECK(potential(x, net, edges) > 1e-3);

  const auto terms = oracle::pairsWithinRadius(net.groundTruth(), net.anchors(), 2.0);
  const Eigen::Vector2d best = oracle::gridArgmin2(
      [&](double u, double v) { return oracle::potential((Matrix(2, 1) << u, v).finished(), net.anchors(), terms); },
      1000);
  CHECK(oracle::potential(best, net.anchors(), terms) < potential(x, net, edges));

  const Certificate c = certify(x, favourableDual(x, net, edges, boxes), net, edges, boxes);
  CHECK(c.verdict != Verdict::GlobalNE);
  CHECK(verifyNashByDeviation(x, boxes, net, edges, 200, 1) > 0.0);
}

TEST_CASE("deviation probe") {
  const SensorNetwork net = oracle::trilateration();
  const EdgeSet edges = buildEdgeSet(net);
  const auto boxes = unitBoxes(2, 1);
  CHECK(verifyNashByDeviation(net.groundTruth(), boxes, net, edges, 100, 3) <= 0.0);
  const Positions far = (Matrix(2, 1) << 0.9, 0.8).finished();
  CHECK(verifyNashByDeviation(far, boxes, net, edges, 100, 3) > 0.0);
  try {
    verifyNashByDeviation(far, boxes, net, edges, 0, 3);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("error report") {
  Matrix truth(2, 2);
  truth << 0.1, 0.5, 0.1, 0.5;
  const SensorNetwork net(oracle::trilaterationAnchors(), truth, 1.0);
  CHECK(errorReport(truth, net).maxError == 0.0);
  Positions x = truth;
  x(0, 0) += 0.3;
  x(1, 0) += 0.4;
  const ErrorReport r = errorReport(x, net);
  CHECK(r.maxError == doctest::Approx(0.5));
  CHECK(r.rmse == doctest::Approx(0.5 / std::sqrt(2.0)));
  CHECK(r.rmse <= r.maxError);

  const SensorNetwork blind(2, oracle::trilaterationAnchors(), std::nullopt, 2, 1.0);
  try {
    errorReport(x, blind);
    FAIL("expected GroundTruthRequired");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GroundTruthRequired);
  }
}

TEST_CASE("grid oracle") {
  const SensorNetwork tri = oracle::trilateration();
  const GridOptimum g = bruteForceGlobalMin(tri, buildEdgeSet(tri), unitBoxes(2, 1), 200);
  CHECK((g.profile.positions.col(0) - Eigen::Vector2d(0.25, 0.25)).norm() <= 1e-3);
  CHECK(g.potential <= 1e-8);

  // one range measurement: a circle of minimisers
  Matrix anchor(2, 1);
  anchor << 0.5, 0.5;
  Matrix truth(2, 1);
  truth << 0.8, 0.5;
  const SensorNetwork ring(anchor, truth, 1.0);
  const EdgeSet re = buildEdgeSet(ring);
  const GridOptimum gr = bruteForceGlobalMin(ring, re, unitBoxes(2, 1), 50);
  CHECK(gr.potential <= 1e-8);
  CHECK(potential((Matrix(2, 1) << 0.2, 0.5).finished(), ring, re) <= 1e-24);
  CHECK(potential((Matrix(2, 1) << 0.5, 0.8).finished(), ring, re) <= 1e-24);

  auto code = [&](const SensorNetwork& net, int res) {
    try {
      bruteForceGlobalMin(net, buildEdgeSet(net), unitBoxes(2, net.numSensors()), res);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code(tri, 5) == ErrorCode::InvalidArgument);
  CHECK(code(generateRandomInstance(2, 4, 3, 0.8, 1), 10) == ErrorCode::TooLarge);
}

TEST_CASE("oracle minimiser is the truth on small rigid instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 5 && seed < 200; ++seed) {
    const SensorNetwork net = generateRandomInstance(2, 1 + static_cast<int>(seed % 3), 3, 0.9, seed);
    const EdgeSet edges = buildEdgeSet(net);
    bool rigid = false;
    try {
      rigid = isGenericallyGloballyRigid(net, edges);
    } catch (const Error&) {
    }
    if (!rigid || net.numSensors() * 2 > 6) continue;
    const int res = net.numSensors() == 3 ? 12 : 60;
    const GridOptimum g = bruteForceGlobalMin(net, edges, unitBoxes(2, net.numSensors()), res);
    CHECK(g.potential <= 1e-8);
    CHECK((g.profile.positions - net.groundTruth()).cwiseAbs().maxCoeff() <= 1e-3);
    ++checked;
  }
  CHECK(checked == 5);
}

TEST_CASE("certified points are Nash stationary") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SensorNetwork net = generateRandomInstance(2, 10, 4, 0.8, seed);
    const EdgeSet edges = buildEdgeSet(net);
    const auto boxes = unitBoxes(2, 10);
    const SolveResult r = solveAlg1(net, edges, boxes, tightConfig(seed));
    CertifyOptions strict;
    strict.epsStat = 1e-8;
    const Certificate c = certify(r.profile.positions, r.tau, net, edges, boxes, strict);
    if (c.verdict != Verdict::GlobalNE) continue;
    CHECK(nashStationarityResidual(r.profile.positions, boxes, net, edges).maxCoeff() <= 1e-6);
  }
}

TEST_CASE("a looser duality threshold never weakens the verdict") {
  Rng rng(31);
  const SensorNetwork net = generateRandomInstance(2, 8, 4, 0.7, 3);
  const EdgeSet edges = buildEdgeSet(net);
  const auto boxes = unitBoxes(2, 8);
  const SolveResult r = solveAlg1(net, edges, boxes, tightConfig(2));
  for (int t = 0; t < 10; ++t) {
    Positions x = r.profile.positions;
    x(0, 0) += rng.uniform(-1, 1) * 1e-5 * t;
    CertifyOptions a, b;
    a.epsCert = 1e-4;
    b.epsCert = 1e-2;
    const Verdict va = certify(x, r.tau, net, edges, boxes, a).verdict;
    const Verdict vb = certify(x, r.tau, net, edges, boxes, b).verdict;
    if (va == Verdict::GlobalNE) CHECK(vb == Verdict::GlobalNE);
    if (va == Verdict::StationaryOnly) CHECK(vb != Verdict::NotStationary);
  }
}
