#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "snl/scenario_io.hpp"
#include "snl/sweep.hpp"

using namespace snl;

namespace {

IngestResult ingest(const std::string& text) {
  std::istringstream in(text);
  return ingestCsv(in, IngestColumns{}, 0.5);
}

}  // namespace

TEST_CASE("scenario round trip and fingerprint") {
  const SensorNetwork net = generateRandomInstance(2, 6, 3, 0.6, 4);
  Scenario s = scenarioFromNetwork(net);
  s.solver = Json{{"alpha0", 0.05}, {"order", "gauss-seidel"}};
  const Scenario back = scenarioFromJson(toJson(s));
  CHECK(back.anchors == s.anchors);
  CHECK(*back.groundTruth == *s.groundTruth);
  CHECK(back.sensingRadius == s.sensingRadius);
  CHECK(back.numSensors == 6);
  CHECK(fingerprint(back) == fingerprint(s));
  CHECK(fingerprint(s).size() == 16);

  const EdgeSet a = back.edgeSet(), b = buildEdgeSet(net);
  REQUIRE(a.size() == b.size());
  for (std::size_t e = 0; e < a.size(); ++e) CHECK(a[e].squaredDistance == b[e].squaredDistance);

  Scenario moved = s;
  (*moved.groundTruth)(0, 0) += 1e-9;
  CHECK(fingerprint(moved) != fingerprint(s));
}

TEST_CASE("measurement-only scenario") {
  const Json j = {{"schemaVersion", 1},
                  {"dimension", 2},
                  {"anchors", {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}},
                  {"numSensors", 1},
                  {"sensingRadius", 2.0},
                  {"measurements", {{0, 1, std::sqrt(0.125)}, {0, 2, std::sqrt(0.625)}, {0, 3, std::sqrt(0.625)}}}};
  const Scenario s = scenarioFromJson(j);
  CHECK_FALSE(s.groundTruth.has_value());
  const EdgeSet edges = s.edgeSet();
  CHECK(edges.activeCount() == 3);
  CHECK(edges[0].squaredDistance == doctest::Approx(0.125));
}

TEST_CASE("solver overrides") {
  SolverConfig base;
  const SolverConfig c = applyOverrides(base, Json{{"alpha0", 0.3}, {"gamma", 0.8}, {"maxIter", 7}});
  CHECK(c.alpha0 == 0.3);
  CHECK(c.gamma == 0.8);
  CHECK(c.maxIter == 7);
  CHECK(c.tol == base.tol);
  const SolverConfig again = applyOverrides(SolverConfig{}, toJson(c));
  CHECK(again.alpha0 == 0.3);
  CHECK(again.maxIter == 7);
  try {
    applyOverrides(base, Json{{"alpah0", 0.3}});
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("malformed documents") {
  auto code = [](const Json& j) {
    try {
      scenarioFromJson(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(Json{{"schemaVersion", 9}}) == ErrorCode::ParseError);
  CHECK(code(Json{{"schemaVersion", 1}, {"dimension", 2}, {"anchors", {{0.0, 0.0}}}, {"sensingRadius", 1.0}}) ==
        ErrorCode::ParseError);
}

TEST_CASE("result document round trip") {
  const SensorNetwork net = oracle::trilateration();
  ResultDocument r;
  r.scenario = scenarioFromNetwork(net);
  r.fingerprint = fingerprint(r.scenario);
  r.positions = net.groundTruth();
  r.tau = Vector::Zero(6);
  r.certificate = certify(r.positions, DualVariable{r.tau}, net, buildEdgeSet(net), unitBoxes(2, 1));
  r.iterations = 12;
  r.status = "Converged";
  const ResultDocument back = resultFromJson(toJson(r));
  CHECK(back.fingerprint == r.fingerprint);
  CHECK(back.positions == r.positions);
  CHECK(back.certificate.verdict == Verdict::GlobalNE);
  CHECK(back.iterations == 12);
  CHECK(verdictFromString(toString(Verdict::StationaryOnly)) == Verdict::StationaryOnly);
}

TEST_CASE("trace CSV") {
  std::ostringstream out;
  TraceCsvWriter w(out);
  TraceRow row;
  row.k = 3;
  row.alpha = 0.5;
  row.potential = 0.25;
  w.write(row);
  row.nashResidual = 1e-3;
  w.write(row);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,alpha,P,Psi,dx_norm,dtau_norm,nash_residual");
  std::getline(in, line);
  CHECK(line == "3,0.5,0.25,0,0,0,");
  std::getline(in, line);
  CHECK(line.rfind("3,0.5,0.25,0,0,0,0.001", 0) == 0);
}

TEST_CASE("CSV ingestion") {
  const IngestResult r = ingest("x,y,anchor\n2,0,1\n4,5,0\n6,10,true\n");
  const Scenario& s = r.scenario;
  CHECK(s.anchors.cols() == 2);
  CHECK(s.numSensors == 1);
  CHECK(s.anchors(0, 0) == 0.0);
  CHECK(s.anchors(0, 1) == 1.0);
  CHECK((*s.groundTruth)(0, 0) == 0.5);
  CHECK((*s.groundTruth)(1, 0) == 0.5);
  CHECK(r.warnings.empty());

  const IngestResult flat = ingest("x,y,anchor\n1,3,1\n2,3,0\n3,3,0\n");
  CHECK(flat.warnings.size() == 1);
  CHECK((*flat.scenario.groundTruth)(1, 1) == 0.5);

  try {
    ingest("x,y,anchor\n1,3,1\n2,,0\n");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.row() == 2);
    CHECK(e.code() == ErrorCode::IngestError);
  }
  CHECK_THROWS_AS(ingest("x,anchor\n1,1\n"), IngestError);
  CHECK_THROWS_AS(ingest("x,y,anchor\n1,3,0\n2,3,0\n"), IngestError);
}

TEST_CASE("anchor count rule") {
  AnchorsRule rule;
  CHECK(rule.anchorsFor(2, 10) == 3);
  CHECK(rule.anchorsFor(2, 20) == 4);
  CHECK(rule.anchorsFor(2, 35) == 7);
  CHECK(rule.anchorsFor(2, 50) == 10);
  CHECK(rule.anchorsFor(3, 5) == 4);
  rule.fixed = 6;
  CHECK(rule.anchorsFor(2, 50) == 6);
}

TEST_CASE("sweep rows and CSV") {
  SweepOptions opts;
  opts.sizes = {10};
  opts.solver.maxIter = 50;
  opts.solver.traceEvery = 0;
  int cells = 0;
  const auto rows = runSweep(opts, [&](const SweepRow&, const ResultDocument&) { ++cells; });
  CHECK(rows.size() == 3);
  CHECK(cells == 3);
  for (const SweepRow& r : rows) {
    CHECK(r.numSensors == 10);
    CHECK(r.numAnchors == 3);
    CHECK(r.iterations <= 50);
  }
  std::ostringstream out;
  writeSweepCsv(out, rows);
  const std::string csv = out.str();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  opts.sizes.clear();
  CHECK_THROWS_AS(runSweep(opts), Error);
}
