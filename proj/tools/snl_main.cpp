// snl: command-line front end.
//
//   snl generate --sensors 10 --anchors 4 --radius 0.9 --seed 1 -o scenario.json
//   snl solve scenario.json -o result.json --trace trace.csv
//   snl certify result.json
//   snl sweep --sizes 10,20,35,50 --seeds 1,2,3 --summary sweep.csv
//   snl gradcheck
//   snl ingest data.csv --x-col LONGITUDE --y-col LATITUDE --anchor-col anchor -o scenario.json
//
// Exit status: 0 success or certified, 1 error, 2 ran but not certified.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "snl/certification.hpp"
#include "snl/gradcheck.hpp"
#include "snl/scenario_io.hpp"
#include "snl/solver.hpp"
#include "snl/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotCertified = 2;

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-5;
  double alpha0 = 0.0;
  double gamma = 0.0;
  double radius = 0.9;
  long maxIter = 0;
  bool tauNonneg = false;
  long traceEvery = 1;
  std::string order;
  double stepOffset = 0.0;
  double epsCert = 1e-4;
  double epsStat = 0.0;

  CLI::Option* seedOpt = nullptr;
  CLI::Option* tolOpt = nullptr;
  CLI::Option* alphaOpt = nullptr;
  CLI::Option* gammaOpt = nullptr;
  CLI::Option* radiusOpt = nullptr;
  CLI::Option* maxIterOpt = nullptr;
  CLI::Option* orderOpt = nullptr;
  CLI::Option* offsetOpt = nullptr;

  /// Defaults, then scenario overrides, then flags given on the command line.
  snl::SolverConfig solverConfig(const snl::Json& overrides = snl::Json::object()) const {
    snl::SolverConfig cfg = snl::applyOverrides({}, overrides);
    if (seedOpt->count()) cfg.seed = seed;
    if (tolOpt->count()) cfg.tol = tol;
    if (alphaOpt->count()) cfg.alpha0 = alpha0;
    if (gammaOpt->count()) cfg.gamma = gamma;
    if (maxIterOpt->count()) cfg.maxIter = maxIter;
    if (offsetOpt->count()) cfg.stepOffset = stepOffset;
    if (orderOpt->count()) cfg = snl::applyOverrides(cfg, {{"order", order}});
    if (tauNonneg) cfg.tauNonneg = true;
    cfg.traceEvery = traceEvery;
    cfg.validate();
    return cfg;
  }

  snl::CertifyOptions certifyOptions() const {
    snl::CertifyOptions o;
    o.epsCert = epsCert;
    o.epsStat = epsStat;
    return o;
  }
};

void printCertificate(const snl::Certificate& c) {
  std::printf("verdict              %s\n", snl::toString(c.verdict));
  std::printf("max duality residual %.3e (eps %.1e)\n", c.maxResidual, c.epsCert);
  std::printf("stationarity x       %.3e (eps %.1e)\n", c.stationaryResidualX, c.epsStat);
  std::printf("stationarity tau     %.3e (eps %.1e)\n", c.stationaryResidualTau, c.epsStat);
}

int verdictExit(const snl::Certificate& c) { return c.verdict == snl::Verdict::GlobalNE ? kOk : kNotCertified; }

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int runGenerate(const Globals& g, int sensors, int anchors, int dim, bool requireRigid, const std::string& out) {
  std::uint64_t used = g.seed;
  int attempts = 1;
  const snl::SensorNetwork net =
      requireRigid ? snl::generateRigidInstance(dim, sensors, anchors, g.radius, g.seed, 50, &used, &attempts)
                   : snl::generateRandomInstance(dim, sensors, anchors, g.radius, g.seed);
  const snl::Scenario s = snl::scenarioFromNetwork(net);
  snl::writeJsonFile(out, snl::toJson(s));
  std::printf("wrote %s (N=%d M=%d edges=%zu instance seed %llu, %d attempt%s)\n", out.c_str(), sensors, anchors,
              s.edgeSet().size(), static_cast<unsigned long long>(used), attempts, attempts == 1 ? "" : "s");
  return kOk;
}

int runSolve(const Globals& g, const std::string& in, const std::string& out, const std::string& tracePath,
             const std::string& method) {
  const snl::Scenario scenario = snl::scenarioFromJson(snl::readJsonFile(in));
  const snl::SensorNetwork net = scenario.network();
  const snl::EdgeSet edges = scenario.edgeSet();
  const auto boxes = scenario.playerBoxes();
  const snl::SolverConfig cfg = g.solverConfig(scenario.solver);
  for (int v : edges.disconnectedNodes()) std::fprintf(stderr, "warning: node %d has no incident edge\n", v);

  std::ofstream traceFile;
  std::optional<snl::TraceCsvWriter> writer;
  snl::TraceSink sink;
  if (!tracePath.empty()) {
    traceFile.open(tracePath);
    if (!traceFile) throw snl::Error(snl::ErrorCode::InvalidArgument, "cannot write '" + tracePath + "'");
    writer.emplace(traceFile);
    sink = [&](const snl::TraceRow& row) { writer->write(row); };
  }

  const auto t0 = std::chrono::steady_clock::now();
  const snl::SolveResult res = method == "baseline" ? snl::solveBaselineDescent(net, edges, boxes, cfg, sink)
                                                    : snl::solveAlg1(net, edges, boxes, cfg, sink);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // A descent point carries no dual; pair it with the most favourable one.
  const snl::DualVariable tau =
      method == "baseline" ? snl::favourableDual(res.profile.positions, net, edges, boxes) : res.tau;

  snl::ResultDocument doc;
  doc.scenario = scenario;
  doc.fingerprint = snl::fingerprint(scenario);
  doc.method = method;
  doc.positions = res.profile.positions;
  doc.tau = tau.values;
  doc.certificate = snl::certify(res.profile.positions, tau, net, edges, boxes, g.certifyOptions());
  if (net.hasGroundTruth()) doc.error = snl::errorReport(res.profile.positions, net);
  doc.iterations = res.trace.iterations;
  doc.status = snl::toString(res.trace.status);
  doc.finalAlpha = res.trace.finalAlpha;
  doc.wallTime = wall;
  doc.config = snl::toJson(snl::resolveStep(cfg, net));
  if (!out.empty()) snl::writeJsonFile(out, snl::toJson(doc));

  std::printf("status               %s after %ld iterations (%.2f s)\n", doc.status.c_str(), doc.iterations, wall);
  std::printf("potential            %.3e\n", snl::potential(res.profile.positions, net, edges));
  if (doc.error) std::printf("rmse                 %.3e (max %.3e)\n", doc.error->rmse, doc.error->maxError);
  printCertificate(doc.certificate);
  return verdictExit(doc.certificate);
}

int runCertify(const Globals& g, const std::string& in) {
  const snl::ResultDocument doc = snl::resultFromJson(snl::readJsonFile(in));
  if (snl::fingerprint(doc.scenario) != doc.fingerprint) {
    throw snl::Error(snl::ErrorCode::ParseError, "scenario fingerprint mismatch; result was edited");
  }
  const snl::SensorNetwork net = doc.scenario.network();
  const snl::EdgeSet edges = doc.scenario.edgeSet();
  const auto boxes = doc.scenario.playerBoxes();
  const snl::Certificate cert =
      snl::certify(doc.positions, snl::DualVariable{doc.tau}, net, edges, boxes, g.certifyOptions());
  printCertificate(cert);
  if (cert.verdict != doc.certificate.verdict) {
    std::printf("note: stored verdict was %s\n", snl::toString(doc.certificate.verdict));
  }
  return verdictExit(cert);
}

int runSweepCommand(const Globals& g, const std::string& sizes, const std::string& seeds, double perSensor,
                    int fixedAnchors, const std::string& summary, const std::string& outDir) {
  snl::SweepOptions opts;
  opts.sizes.clear();
  for (const auto& s : splitList(sizes)) opts.sizes.push_back(std::stoi(s));
  opts.seeds.clear();
  for (const auto& s : splitList(seeds)) opts.seeds.push_back(std::stoull(s));
  opts.radius = g.radius;
  opts.anchors.perSensor = perSensor;
  opts.anchors.fixed = fixedAnchors;
  opts.solver = g.solverConfig();
  opts.solver.traceEvery = 0;
  opts.certify = g.certifyOptions();
  if (!outDir.empty()) std::filesystem::create_directories(outDir);

  std::printf("%4s %3s %5s %9s %-17s %-14s %10s %10s\n", "N", "M", "seed", "iters", "status", "verdict", "rmse",
              "tau_inf");
  const auto rows = snl::runSweep(opts, [&](const snl::SweepRow& r, const snl::ResultDocument& doc) {
    std::printf("%4d %3d %5llu %9ld %-17s %-14s %10.3e %10.3e\n", r.numSensors, r.numAnchors,
                static_cast<unsigned long long>(r.seed), r.iterations, snl::toString(r.status),
                snl::toString(r.verdict), r.rmse, r.tauInf);
    std::fflush(stdout);
    if (!outDir.empty()) {
      const auto name = "result_N" + std::to_string(r.numSensors) + "_s" + std::to_string(r.seed) + ".json";
      snl::writeJsonFile((std::filesystem::path(outDir) / name).string(), snl::toJson(doc));
    }
  });
  if (!summary.empty()) {
    std::ofstream out(summary);
    if (!out) throw snl::Error(snl::ErrorCode::InvalidArgument, "cannot write '" + summary + "'");
    snl::writeSweepCsv(out, rows);
  }
  int certified = 0;
  for (const auto& r : rows) certified += r.verdict == snl::Verdict::GlobalNE;
  std::printf("%d of %zu runs certified global NE\n", certified, rows.size());
  return certified == static_cast<int>(rows.size()) ? kOk : kNotCertified;
}

int runGradcheck(const Globals& g) {
  snl::GradcheckOptions opts;
  if (g.seedOpt->count()) opts.seed = g.seed;
  bool all = true;
  for (const auto& r : snl::runGradchecks(opts)) {
    std::printf("%-16s %3d points  worst %.3e  tol %.0e  %s\n", r.name.c_str(), r.points, r.worst, r.tolerance,
                r.passed() ? "ok" : "FAIL");
    all = all && r.passed();
  }
  return all ? kOk : kNotCertified;
}

int runIngest(const Globals& g, const std::string& in, const snl::IngestColumns& cols, const std::string& out) {
  const snl::IngestResult r = snl::ingestCsvFile(in, cols, g.radius);
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  snl::writeJsonFile(out, snl::toJson(r.scenario));
  std::printf("wrote %s (N=%d M=%ld R=%g)\n", out.c_str(), r.scenario.numSensors,
              static_cast<long>(r.scenario.anchors.cols()), r.scenario.sensingRadius);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range-based sensor network localization by a primal-dual saddle iteration"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.seedOpt = app.add_option("--seed", g.seed, "Random seed");
  g.tolOpt = app.add_option("--tol", g.tol, "Termination tolerance on |dx| and |dtau|")->capture_default_str();
  g.alphaOpt = app.add_option("--alpha0", g.alpha0, "Initial step size (default 1.2 / sqrt(dim N))");
  g.gammaOpt = app.add_option("--gamma", g.gamma, "Step decay exponent in (0.5, 1]");
  g.offsetOpt = app.add_option("--step-offset", g.stepOffset, "k0 in alpha0 (1 + k/k0)^-gamma");
  g.radiusOpt = app.add_option("--radius", g.radius, "Sensing radius")->capture_default_str();
  g.maxIterOpt = app.add_option("--max-iter", g.maxIter, "Iteration cap");
  g.orderOpt = app.add_option("--order", g.order, "Update order")->check(CLI::IsMember({"jacobi", "gauss-seidel"}));
  app.add_flag("--tau-nonneg", g.tauNonneg, "Project tau onto the nonnegative box instead of E+");
  app.add_option("--trace-every", g.traceEvery, "Trace row period (0: final row only)")->capture_default_str();
  app.add_option("--eps-cert", g.epsCert, "Duality residual threshold")->capture_default_str();
  app.add_option("--eps-stat", g.epsStat, "Stationarity threshold (default 1e-5 sqrt(dim N))");

  int sensors = 10, anchors = 4, dim = 2;
  bool noRigid = false;
  std::string genOut = "scenario.json";
  auto* gen = app.add_subcommand("generate", "Random instance to a scenario file");
  gen->add_option("--sensors,-N", sensors, "Non-anchor nodes")->capture_default_str();
  gen->add_option("--anchors,-M", anchors, "Anchor nodes")->capture_default_str();
  gen->add_option("--dim", dim, "Dimension (2 or 3)")->capture_default_str();
  gen->add_flag("--no-rigidity-check", noRigid, "Skip re-seeding until the network is globally rigid");
  gen->add_option("-o,--out", genOut, "Output scenario")->capture_default_str();

  std::string solveIn, solveOut, tracePath, method = "alg1";
  auto* solve = app.add_subcommand("solve", "Solve a scenario and certify the result");
  solve->add_option("scenario", solveIn, "Scenario JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("-o,--out", solveOut, "Result JSON");
  solve->add_option("--trace", tracePath, "Trace CSV");
  solve->add_option("--method", method, "alg1 or baseline")->check(CLI::IsMember({"alg1", "baseline"}));

  std::string certIn;
  auto* cert = app.add_subcommand("certify", "Re-verify the certificate of a result file");
  cert->add_option("result", certIn, "Result JSON")->required()->check(CLI::ExistingFile);

  std::string sizes = "10,20,35,50", seeds = "1,2,3", summary, outDir;
  double perSensor = 0.2;
  int fixedAnchors = 0;
  auto* sweep = app.add_subcommand("sweep", "Size sweep over random rigid instances");
  sweep->add_option("--sizes", sizes, "Comma-separated N values")->capture_default_str();
  sweep->add_option("--seeds", seeds, "Comma-separated seeds")->capture_default_str();
  sweep->add_option("--anchors-per-sensor", perSensor, "M = max(dim + 1, ceil(rate N))")->capture_default_str();
  sweep->add_option("--anchors", fixedAnchors, "Fixed anchor count");
  sweep->add_option("--summary", summary, "Summary CSV");
  sweep->add_option("--out-dir", outDir, "Directory for per-run result files");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference checks of all derivatives");

  std::string ingestIn, ingestOut = "scenario.json";
  snl::IngestColumns cols;
  std::string zCol;
  auto* ingest = app.add_subcommand("ingest", "CSV positions to a normalized scenario");
  ingest->add_option("csv", ingestIn, "Input CSV with header")->required()->check(CLI::ExistingFile);
  ingest->add_option("--x-col", cols.x, "x column")->capture_default_str();
  ingest->add_option("--y-col", cols.y, "y column")->capture_default_str();
  ingest->add_option("--z-col", zCol, "z column (3-D)");
  ingest->add_option("--anchor-col", cols.anchor, "Anchor flag column")->capture_default_str();
  ingest->add_option("-o,--out", ingestOut, "Output scenario")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*gen) return runGenerate(g, sensors, anchors, dim, !noRigid, genOut);
    if (*solve) return runSolve(g, solveIn, solveOut, tracePath, method);
    if (*cert) return runCertify(g, certIn);
    if (*sweep) return runSweepCommand(g, sizes, seeds, perSensor, fixedAnchors, summary, outDir);
    if (*grad) return runGradcheck(g);
    if (*ingest) {
      if (!zCol.empty()) cols.z = zCol;
      return runIngest(g, ingestIn, cols, ingestOut);
    }
  } catch (const snl::IngestError& e) {
    std::fprintf(stderr, "error: row %ld: %s\n", e.row(), e.what());
    return kError;
  } catch (const snl::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", snl::toString(e.code()), e.what());
    return kError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
