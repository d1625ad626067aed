#include <doctest.h>

#include "oracles.hpp"
#include "snl/canonical_dual.hpp"
#include "snl/projection.hpp"

using namespace snl;

namespace {

struct Instance {
  SensorNetwork net;
  EdgeSet edges;
  DualBounds bounds;
  explicit Instance(SensorNetwork n)
      : net(std::move(n)), edges(buildEdgeSet(net)), bounds(dualBounds(net, edges, unitBoxes(net.dimension(), net.numSensors()))) {}
};

Instance singleSensorEdge() {
  return Instance(SensorNetwork((Matrix(2, 1) << 50.0, 50.0).finished(),
                                (Matrix(2, 2) << 0.0, 1.0, 0.0, 0.0).finished(), 1.5));
}

Instance singleAnchorEdge() {
  return Instance(SensorNetwork(Matrix::Zero(2, 1), (Matrix(2, 1) << 1.0, 0.0).finished(), 2.0));
}

// Two sensors and one anchor, all within range: one SS and two SA edges.
Instance triangle() {
  return Instance(SensorNetwork((Matrix(2, 1) << 0.5, 0.9).finished(),
                                (Matrix(2, 2) << 0.2, 0.7, 0.3, 0.4).finished(), 2.0));
}

}  // namespace

TEST_CASE("box projection") {
  const Box b = Box::unit(2);
  CHECK(projectBox((Vector(2) << 1.5, -0.2).finished(), b) == (Vector(2) << 1.0, 0.0).finished());
  const Vector in = (Vector(2) << 0.3, 0.6).finished();
  CHECK(projectBox(in, b) == in);
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    Vector u(2), v(2);
    u << rng.uniform(-2, 3), rng.uniform(-2, 3);
    v << rng.uniform(-2, 3), rng.uniform(-2, 3);
    CHECK((projectBox(u, b) - projectBox(v, b)).norm() <= (u - v).norm());
  }
}

TEST_CASE("dual bounds follow the reachable squared distances") {
  const Instance t = triangle();
  REQUIRE(t.edges.size() == 3);
  const Vector truth0 = t.net.groundTruth().col(0), truth1 = t.net.groundTruth().col(1);
  const Vector anchor = t.net.anchors().col(0);
  // anchor (0.5, 0.9): the farthest corners of the unit square are (0,0) and (1,0)
  const double farAnchor = 0.25 + 0.81;
  for (std::size_t e = 0; e < 3; ++e) {
    const auto k = static_cast<Eigen::Index>(e);
    const double d2 = t.edges[e].squaredDistance;
    const double reach = t.edges[e].kind == EdgeKind::SensorSensor ? 2.0 : farAnchor;
    CHECK(t.bounds.lower[k] == doctest::Approx(-2.0 * d2));
    CHECK(t.bounds.upper[k] == doctest::Approx(2.0 * (reach - d2)));
  }
}

TEST_CASE("membership test") {
  const Instance s = singleSensorEdge();
  CHECK(isInEPlus(DualVariable{Vector::Constant(1, 0.5)}, s.edges, s.bounds));
  CHECK(isInEPlus(DualVariable::zero(1), s.edges, s.bounds));
  CHECK_FALSE(isInEPlus(DualVariable{Vector::Constant(1, -1.0)}, s.edges, s.bounds));
  CHECK(minEigenvalue(DualVariable{Vector::Constant(1, -1.0)}, s.edges) == doctest::Approx(-2.0));

  const SensorNetwork net = generateRandomInstance(2, 12, 4, 0.5, 3);
  const EdgeSet edges = buildEdgeSet(net);
  const DualBounds b = dualBounds(net, edges, unitBoxes(2, 12));
  Rng rng(5);
  Vector tau = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.activeCount(); ++e) tau[static_cast<Eigen::Index>(e)] = rng.uniform() * b.upper[static_cast<Eigen::Index>(e)];
  CHECK(isInEPlus(DualVariable{tau}, edges, b));
}

TEST_CASE("closed-form projections") {
  const Instance s = singleSensorEdge();
  const ProjectionReport keep = projectEPlus(DualVariable{Vector::Constant(1, 0.5)}, s.edges, s.bounds);
  CHECK(keep.projected.values[0] == 0.5);
  CHECK(keep.iterations == 1);
  const ProjectionReport r = projectEPlus(DualVariable{Vector::Constant(1, -1.0)}, s.edges, s.bounds);
  CHECK(r.projected.values[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  CHECK(r.infeasibilityBefore == doctest::Approx(2.0));

  const Instance a = singleAnchorEdge();
  CHECK(a.bounds.lower[0] == doctest::Approx(-2.0));
  const ProjectionReport ra = projectEPlus(DualVariable{Vector::Constant(1, -3.0)}, a.edges, a.bounds);
  CHECK(std::abs(ra.projected.values[0]) <= 1e-8);
}

TEST_CASE("projection matches a brute-force grid on three edges") {
  const Instance t = triangle();
  Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    Vector tau0(3);
    for (int e = 0; e < 3; ++e) tau0[e] = rng.uniform(-1.5, 1.0);
    const ProjectionReport r = projectEPlus(DualVariable{tau0}, t.edges, t.bounds);
    const Vector ref = oracle::radialProjection(tau0, t.bounds.lower, t.bounds.upper, t.edges);
    CHECK((r.projected.values - ref).cwiseAbs().maxCoeff() <= 1e-4);
    CHECK(oracle::minEig(oracle::laplacian(r.projected.values, t.edges)) >= -1e-7);
  }
}

TEST_CASE("projection properties on a random instance") {
  const SensorNetwork net = generateRandomInstance(2, 10, 4, 0.5, 2);
  const EdgeSet edges = buildEdgeSet(net);
  const DualBounds b = dualBounds(net, edges, unitBoxes(2, 10));
  const auto q = static_cast<Eigen::Index>(edges.size());
  const auto active = static_cast<Eigen::Index>(edges.activeCount());
  Rng rng(11);
  auto draw = [&] {
    Vector t = Vector::Zero(q);
    for (Eigen::Index e = 0; e < active; ++e) t[e] = rng.uniform(-1.0, 0.5);
    return t;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const Vector u = draw(), v = draw();
    ProjectionOptions opts;
    opts.maxIter = 20000;
    const ProjectionReport pu = projectEPlus(DualVariable{u}, edges, b, opts);
    const ProjectionReport pv = projectEPlus(DualVariable{v}, edges, b, opts);
    CHECK(minEigenvalue(pu.projected, edges) >= -1e-7);
    CHECK(isInEPlus(pu.projected, edges, b, 1e-7));
    CHECK(pu.projected.values.tail(q - active).isZero(0.0));
    const ProjectionReport again = projectEPlus(pu.projected, edges, b, opts);
    CHECK((again.projected.values - pu.projected.values).norm() <= 1e-8);
    CHECK((pu.projected.values - pv.projected.values).norm() <= (u - v).norm() + 1e-8);
  }
}

TEST_CASE("warm-started projector agrees with a cold start") {
  const SensorNetwork net = generateRandomInstance(2, 8, 4, 0.6, 4);
  const EdgeSet edges = buildEdgeSet(net);
  const DualBounds b = dualBounds(net, edges, unitBoxes(2, 8));
  ProjectionOptions opts;
  opts.maxIter = 20000;
  EPlusProjector warm(edges, b, opts);
  Rng rng(2);
  for (int t = 0; t < 4; ++t) {
    Vector tau = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
    for (std::size_t e = 0; e < edges.activeCount(); ++e) tau[static_cast<Eigen::Index>(e)] = rng.uniform(-0.8, 0.3);
    const ProjectionReport a = warm.project(DualVariable{tau});
    const ProjectionReport c = projectEPlus(DualVariable{tau}, edges, b, opts);
    CHECK((a.projected.values - c.projected.values).norm() <= 1e-6);
  }
}

TEST_CASE("nonnegative mode is an inner approximation") {
  const SensorNetwork net = generateRandomInstance(2, 8, 4, 0.6, 4);
  const EdgeSet edges = buildEdgeSet(net);
  const DualBounds b = dualBounds(net, edges, unitBoxes(2, 8));
  ProjectionOptions opts;
  opts.nonnegativeOnly = true;
  Rng rng(3);
  Vector tau = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.activeCount(); ++e) tau[static_cast<Eigen::Index>(e)] = rng.uniform(-1, 1);
  const ProjectionReport r = projectEPlus(DualVariable{tau}, edges, b, opts);
  CHECK(r.projected.values.minCoeff() >= 0.0);
  CHECK(isInEPlus(r.projected, edges, b));
}

TEST_CASE("Laplacian and Hessian spectra agree in sign") {
  Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    const SensorNetwork net = generateRandomInstance(2, 6, 3, 0.6, 30 + static_cast<std::uint64_t>(t));
    const EdgeSet edges = buildEdgeSet(net);
    Vector tau(static_cast<Eigen::Index>(edges.size()));
    for (Eigen::Index e = 0; e < tau.size(); ++e) tau[e] = rng.uniform(-0.3, 1.0);
    const GroundedLaplacian l = assembleQ(DualVariable{tau}, edges);
    const double lmin = oracle::minEig(l.matrix);
    const double qmin = oracle::minEig(l.hessian(2));
    CHECK((lmin >= -1e-12) == (qmin >= -1e-12));
    CHECK(qmin == doctest::Approx(2.0 * lmin).scale(1.0).epsilon(1e-10));
  }
}
