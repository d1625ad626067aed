#include "snl/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace snl {

namespace {

void requireBoxes(const std::vector<Box>& boxes, const SensorNetwork& net) {
  if (boxes.size() != static_cast<std::size_t>(net.numSensors())) {
    throw Error(ErrorCode::InvalidArgument, "one box per player required");
  }
}

Positions clampAll(const Positions& x, const std::vector<Box>& boxes) {
  Positions out = x;
  for (Eigen::Index i = 0; i < x.cols(); ++i) out.col(i) = boxes[static_cast<std::size_t>(i)].clamp(x.col(i));
  return out;
}

/// Potential on flattened sensor coordinates; used in the tight grid loop.
class FlatPotential {
 public:
  FlatPotential(const SensorNetwork& net, const EdgeSet& edges)
      : dim_(net.dimension()), sensors_(net.numSensors()), anchors_(net.anchors()) {
    for (std::size_t e = 0; e < edges.activeCount(); ++e) edges_.push_back(edges[e]);
    for (std::size_t e = edges.activeCount(); e < edges.size(); ++e) {
      const double r = (anchors_.col(edges[e].i - sensors_) - anchors_.col(edges[e].j - sensors_)).squaredNorm() -
                       edges[e].squaredDistance;
      constant_ += r * r;
    }
  }

  double operator()(const double* x) const {
    double sum = constant_;
    for (const Edge& e : edges_) {
      const double* a = x + e.i * dim_;
      const double* b = e.j < sensors_ ? x + e.j * dim_ : anchors_.data() + (e.j - sensors_) * dim_;
      double xi = 0.0;
      for (int c = 0; c < dim_; ++c) {
        const double d = a[c] - b[c];
        xi += d * d;
      }
      const double r = xi - e.squaredDistance;
      sum += r * r;
    }
    return sum;
  }

 private:
  int dim_;
  int sensors_;
  const Matrix& anchors_;
  std::vector<Edge> edges_;
  double constant_ = 0.0;
};

}  // namespace

const char* toString(Verdict verdict) {
  switch (verdict) {
    case Verdict::GlobalNE: return "GlobalNE";
    case Verdict::StationaryOnly: return "StationaryOnly";
    case Verdict::NotStationary: return "NotStationary";
  }
  return "?";
}

Verdict verdictFromString(const std::string& s) {
  if (s == "GlobalNE") return Verdict::GlobalNE;
  if (s == "StationaryOnly") return Verdict::StationaryOnly;
  if (s == "NotStationary") return Verdict::NotStationary;
  throw Error(ErrorCode::ParseError, "unknown verdict '" + s + "'");
}

double defaultStationarityTolerance(const SensorNetwork& net) {
  return 1e-5 * std::sqrt(static_cast<double>(net.dimension() * net.numSensors()));
}

Certificate certify(const Positions& x, const DualVariable& tau, const SensorNetwork& net,
                    const EdgeSet& edges, const std::vector<Box>& boxes, const CertifyOptions& opts) {
  requireBoxes(boxes, net);
  if (tau.size() != edges.size()) throw Error(ErrorCode::InvalidArgument, "tau must have one entry per edge");
  if (!(opts.probeStep > 0.0)) throw Error(ErrorCode::InvalidArgument, "probe step must be positive");
  Certificate cert;
  cert.epsCert = opts.epsCert;
  cert.epsStat = opts.epsStat > 0.0 ? opts.epsStat : defaultStationarityTolerance(net);

  const XiVector xi = lambdaMap(x, net, edges);
  const DualVariable implied = dualityMap(xi, edges);
  cert.dualityResiduals = (tau.values - implied.values).cwiseAbs();
  cert.maxResidual = cert.dualityResiduals.size() ? cert.dualityResiduals.maxCoeff() : 0.0;

  const Positions gx = gradPsiX(x, tau, net, edges);
  cert.stationaryResidualX = (x - clampAll(x - opts.probeStep * gx, boxes)).norm();

  const Vector gt = gradPsiTau(x, tau, net, edges);
  ProjectionOptions popts = opts.projection;
  popts.maxIter = std::max(popts.maxIter, 20000);
  EPlusProjector projector(edges, dualBounds(net, edges, boxes), popts);
  const ProjectionReport pr = projector.project(DualVariable{tau.values + opts.probeStep * gt});
  cert.stationaryResidualTau = (tau.values - pr.projected.values).norm();

  const bool stationary = cert.stationaryResidualX <= cert.epsStat && cert.stationaryResidualTau <= cert.epsStat;
  if (!stationary) {
    cert.verdict = Verdict::NotStationary;
  } else {
    cert.verdict = cert.maxResidual <= cert.epsCert ? Verdict::GlobalNE : Verdict::StationaryOnly;
  }
  return cert;
}

DualVariable favourableDual(const Positions& x, const SensorNetwork& net, const EdgeSet& edges,
                            const std::vector<Box>& boxes) {
  requireBoxes(boxes, net);
  ProjectionOptions popts;
  popts.maxIter = 20000;
  EPlusProjector projector(edges, dualBounds(net, edges, boxes), popts);
  return projector.project(dualityMap(lambdaMap(x, net, edges), edges)).projected;
}

double verifyNashByDeviation(const Positions& x, const std::vector<Box>& boxes, const SensorNetwork& net,
                             const EdgeSet& edges, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
  requireBoxes(boxes, net);
  const int dim = net.dimension();
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  Positions trial = x;
  for (int i = 0; i < net.numSensors(); ++i) {
    const Box& box = boxes[static_cast<std::size_t>(i)];
    const double base = payoff(i, x, net, edges);
    auto probe = [&](const Vector& v) {
      trial.col(i) = v;
      worst = std::max(worst, base - payoff(i, trial, net, edges));
    };
    for (int v = 0; v < (1 << dim); ++v) {
      Vector corner(dim);
      for (int c = 0; c < dim; ++c) corner[c] = (v >> c) & 1 ? box.upper[c] : box.lower[c];
      probe(corner);
    }
    for (int s = 0; s < samples; ++s) {
      Vector v(dim);
      for (int c = 0; c < dim; ++c) v[c] = rng.uniform(box.lower[c], box.upper[c]);
      probe(v);
    }
    trial.col(i) = x.col(i);
  }
  return worst;
}

ErrorReport errorReport(const Positions& x, const SensorNetwork& net) {
  const Matrix& truth = net.groundTruth();
  if (x.rows() != truth.rows() || x.cols() != truth.cols()) {
    throw Error(ErrorCode::InvalidArgument, "positions must be dim x N");
  }
  ErrorReport r;
  r.perNodeError = (x - truth).colwise().norm().transpose();
  if (r.perNodeError.size() > 0) {
    r.rmse = std::sqrt(r.perNodeError.squaredNorm() / static_cast<double>(r.perNodeError.size()));
    r.maxError = r.perNodeError.maxCoeff();
  }
  return r;
}

GridOptimum bruteForceGlobalMin(const SensorNetwork& net, const EdgeSet& edges,
                                const std::vector<Box>& boxes, int resolution) {
  requireBoxes(boxes, net);
  const int dim = net.dimension();
  const int m = dim * net.numSensors();
  if (m > 6) throw Error(ErrorCode::TooLarge, "grid oracle limited to dim * N <= 6");
  if (resolution < 10) throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 10");

  std::vector<double> lo(static_cast<std::size_t>(m)), step(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Box& b = boxes[static_cast<std::size_t>(k / dim)];
    lo[static_cast<std::size_t>(k)] = b.lower[k % dim];
    step[static_cast<std::size_t>(k)] = (b.upper[k % dim] - b.lower[k % dim]) / (resolution - 1);
  }
  const FlatPotential p(net, edges);
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  std::vector<double> point(lo);
  std::vector<double> best(lo);
  double bestValue = std::numeric_limits<double>::infinity();
  for (;;) {
    const double v = p(point.data());
    if (v < bestValue) {
      bestValue = v;
      best = point;
    }
    int k = 0;
    for (; k < m; ++k) {
      auto& i = idx[static_cast<std::size_t>(k)];
      if (++i < resolution) {
        point[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)] + i * step[static_cast<std::size_t>(k)];
        break;
      }
      i = 0;
      point[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)];
    }
    if (k == m) break;
  }

  GridOptimum out;
  out.gridPotential = bestValue;
  Positions x = Eigen::Map<const Positions>(best.data(), dim, net.numSensors());
  double value = potential(x, net, edges);
  double alpha = 1e-2;
  for (int it = 0; it < 200000 && value > 0.0; ++it) {
    const Positions g = gradPotential(x, net, edges);
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      const Positions trial = clampAll(x - alpha * g, boxes);
      const double tv = potential(trial, net, edges);
      if (tv <= value - 1e-4 * (x - trial).squaredNorm() / alpha) {
        moved = (x - trial).norm() > 1e-15;
        x = trial;
        value = tv;
        alpha *= 2.0;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  out.profile.positions = std::move(x);
  out.profile.boxes = boxes;
  out.potential = value;
  return out;
}

}  // namespace snl
