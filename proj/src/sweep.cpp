#include "snl/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace snl {

int AnchorsRule::anchorsFor(int dim, int numSensors) const {
  if (fixed > 0) return fixed;
  return std::max(dim + 1, static_cast<int>(std::ceil(numSensors * perSensor - 1e-12)));
}

SensorNetwork generateRigidInstance(int dim, int numSensors, int numAnchors, double radius,
                                    std::uint64_t seed, int maxAttempts, std::uint64_t* usedSeed,
                                    int* attempts) {
  const std::uint64_t base = seed * 1000003ULL + static_cast<std::uint64_t>(numSensors) * 7919ULL;
  for (int a = 0; a < maxAttempts; ++a) {
    const std::uint64_t s = base + static_cast<std::uint64_t>(a);
    SensorNetwork net = generateRandomInstance(dim, numSensors, numAnchors, radius, s);
    const EdgeSet edges = buildEdgeSet(net);
    bool ok = false;
    try {
      ok = isGenericallyGloballyRigid(net, edges);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotRigid) throw;
    }
    if (ok) {
      if (usedSeed) *usedSeed = s;
      if (attempts) *attempts = a + 1;
      return net;
    }
  }
  throw Error(ErrorCode::RigidityGenerationFailed,
              "no globally rigid instance in " + std::to_string(maxAttempts) + " attempts");
}

std::vector<SweepRow> runSweep(const SweepOptions& opts, const SweepCallback& onCell) {
  if (opts.sizes.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one size");
  if (opts.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one seed");
  std::vector<int> sizes = opts.sizes;
  std::vector<std::uint64_t> seeds = opts.seeds;
  std::sort(sizes.begin(), sizes.end());
  std::sort(seeds.begin(), seeds.end());

  std::vector<SweepRow> rows;
  for (int n : sizes) {
    for (std::uint64_t seed : seeds) {
      SweepRow row;
      row.numSensors = n;
      row.numAnchors = opts.anchors.anchorsFor(opts.dimension, n);
      row.seed = seed;
      const SensorNetwork net = generateRigidInstance(opts.dimension, n, row.numAnchors, opts.radius, seed,
                                                      opts.maxAttempts, &row.instanceSeed, &row.attempts);
      const EdgeSet edges = buildEdgeSet(net);
      const auto boxes = unitBoxes(opts.dimension, n);
      SolverConfig cfg = opts.solver;
      cfg.seed = seed;

      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult res = solveAlg1(net, edges, boxes, cfg);
      row.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const Certificate cert = certify(res.profile.positions, res.tau, net, edges, boxes, opts.certify);
      const ErrorReport err = errorReport(res.profile.positions, net);

      row.edges = edges.size();
      row.iterations = res.trace.iterations;
      row.status = res.trace.status;
      row.verdict = cert.verdict;
      row.rmse = err.rmse;
      row.maxError = err.maxError;
      row.potential = potential(res.profile.positions, net, edges);
      row.tauInf = res.tau.values.size() ? res.tau.values.cwiseAbs().maxCoeff() : 0.0;
      row.maxResidual = cert.maxResidual;
      rows.push_back(row);

      if (onCell) {
        ResultDocument doc;
        doc.scenario = scenarioFromNetwork(net);
        doc.fingerprint = fingerprint(doc.scenario);
        doc.positions = res.profile.positions;
        doc.tau = res.tau.values;
        doc.certificate = cert;
        doc.error = err;
        doc.iterations = res.trace.iterations;
        doc.status = toString(res.trace.status);
        doc.finalAlpha = res.trace.finalAlpha;
        doc.wallTime = row.wallTime;
        doc.config = toJson(resolveStep(cfg, net));
        onCell(row, doc);
      }
    }
  }
  return rows;
}

void writeSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "N,M,seed,instance_seed,attempts,edges,iterations,status,verdict,rmse,max_error,P,tau_inf,"
         "max_duality_residual,wall_time\n";
  for (const SweepRow& r : rows) {
    out << r.numSensors << ',' << r.numAnchors << ',' << r.seed << ',' << r.instanceSeed << ',' << r.attempts
        << ',' << r.edges << ',' << r.iterations << ',' << toString(r.status) << ',' << toString(r.verdict) << ','
        << formatDouble(r.rmse) << ',' << formatDouble(r.maxError) << ',' << formatDouble(r.potential) << ','
        << formatDouble(r.tauInf) << ',' << formatDouble(r.maxResidual) << ',' << formatDouble(r.wallTime)
        << '\n';
  }
}

}  // namespace snl
