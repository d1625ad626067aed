#include "snl/solver.hpp"

#include <cmath>

#include "edge_eval.hpp"

namespace snl {

namespace {

struct FlatBoxes {
  Vector lower;
  Vector upper;
};

FlatBoxes flatten(const std::vector<Box>& boxes, int dim) {
  const auto n = static_cast<Eigen::Index>(boxes.size());
  FlatBoxes f{Vector(n * dim), Vector(n * dim)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Box& b = boxes[static_cast<std::size_t>(i)];
    if (b.dimension() != dim) throw Error(ErrorCode::InvalidArgument, "box dimension mismatch");
    for (int c = 0; c < dim; ++c) {
      if (!(b.lower[c] <= b.upper[c])) throw Error(ErrorCode::InvalidArgument, "empty box");
      f.lower[i * dim + c] = b.lower[c];
      f.upper[i * dim + c] = b.upper[c];
    }
  }
  return f;
}

std::span<const double> view(const Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::span<double> view(Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

std::span<const double> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double maxOf(const Vector& v) { return v.size() == 0 ? 0.0 : v.maxCoeff(); }

/// Shared loop bookkeeping: step size, row recording and the stopping rule.
class Recorder {
 public:
  Recorder(const SolverConfig& cfg, const TraceSink& sink, SaddleTrace& trace)
      : cfg_(cfg), sink_(sink), trace_(trace) {}

  bool wantRow(long k, bool final) const {
    return final || (cfg_.traceEvery > 0 && k % cfg_.traceEvery == 0);
  }
  bool wantNash(long k) const { return cfg_.nashEvery > 0 && (k + 1) % cfg_.nashEvery == 0; }

  void emit(TraceRow row) {
    if (sink_) sink_(row);
    trace_.rows.push_back(std::move(row));
  }

 private:
  const SolverConfig& cfg_;
  const TraceSink& sink_;
  SaddleTrace& trace_;
};

Vector initialTau(const SolverConfig& cfg, const EdgeSet& edges, const DualBounds& bounds) {
  Vector tau = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  if (cfg.tauInit == TauInit::SmallPositive) {
    for (std::size_t e = 0; e < edges.activeCount(); ++e) tau[static_cast<Eigen::Index>(e)] = cfg.tauEpsilon;
    tau = tau.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
  }
  return tau;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha0 must be nonnegative");
  if (alpha0 == 0.0 && !(alphaScale > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha scale must be positive");
  if (!(gamma > 0.5 && gamma <= 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0.5, 1]");
  if (!(stepOffset >= 1.0)) throw Error(ErrorCode::InvalidArgument, "step offset must be at least 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (maxIter < 1) throw Error(ErrorCode::InvalidArgument, "maxIter must be at least 1");
  if (tauInit == TauInit::SmallPositive && !(tauEpsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tau epsilon must be positive");
  }
  if (nashEvery < 0 || traceEvery < 0) throw Error(ErrorCode::InvalidArgument, "negative sampling period");
  if (initMode == InitMode::Provided && !initialPositions) {
    throw Error(ErrorCode::InvalidArgument, "provided init mode needs initial positions");
  }
}

const char* toString(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::ProjectionFailure: return "ProjectionFailure";
  }
  return "?";
}

SolverConfig resolveStep(const SolverConfig& cfg, const SensorNetwork& net) {
  SolverConfig out = cfg;
  if (out.alpha0 == 0.0) {
    out.alpha0 = cfg.alphaScale / std::sqrt(static_cast<double>(net.dimension()) * std::max(1, net.numSensors()));
  }
  return out;
}

double stepSchedule(const SolverConfig& cfg, long k) {
  if (!(cfg.alpha0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "step schedule needs a resolved alpha0");
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "iteration index must be nonnegative");
  return cfg.alpha0 * std::pow(1.0 + static_cast<double>(k) / cfg.stepOffset, -cfg.gamma);
}

Positions initialPositions(const std::vector<Box>& boxes, const SolverConfig& cfg) {
  if (boxes.empty()) return Positions();
  const int dim = boxes.front().dimension();
  Positions x(dim, static_cast<Eigen::Index>(boxes.size()));
  if (cfg.initMode == InitMode::Provided) {
    if (!cfg.initialPositions || cfg.initialPositions->rows() != dim ||
        cfg.initialPositions->cols() != x.cols()) {
      throw Error(ErrorCode::InvalidArgument, "initial positions must be dim x N");
    }
    x = *cfg.initialPositions;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      if (!boxes[static_cast<std::size_t>(i)].contains(x.col(i))) {
        throw Error(ErrorCode::InvalidArgument, "initial position outside its box");
      }
    }
    return x;
  }
  Rng rng(cfg.seed);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const Box& b = boxes[static_cast<std::size_t>(i)];
    for (int c = 0; c < dim; ++c) x(c, i) = rng.uniform(b.lower[c], b.upper[c]);
  }
  return x;
}

SolveResult solveAlg1(const SensorNetwork& net, const EdgeSet& edges, const std::vector<Box>& boxes,
                      const SolverConfig& config, const TraceSink& sink) {
  config.validate();
  const SolverConfig cfg = resolveStep(config, net);
  if (boxes.size() != static_cast<std::size_t>(net.numSensors())) {
    throw Error(ErrorCode::InvalidArgument, "one box per player required");
  }
  const auto& kern = kernels::active();
  const int dim = net.dimension();
  const FlatBoxes flat = flatten(boxes, dim);
  ProjectionOptions popts = cfg.projection;
  popts.nonnegativeOnly = popts.nonnegativeOnly || cfg.tauNonneg;
  EPlusProjector projector(edges, dualBounds(net, edges, boxes), popts);

  SolveResult out;
  out.profile.boxes = boxes;
  Positions x = initialPositions(boxes, cfg);
  Vector tau = initialTau(cfg, edges, projector.bounds());
  if (!isInEPlus(DualVariable{tau}, edges, projector.bounds(), 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "initial tau is not in E+");
  }

  const std::size_t active = edges.activeCount();
  const auto d2 = edges.squaredDistances();
  detail::EdgeGeometry geo;
  Vector ascent = Vector::Zero(tau.size());
  Vector weight(tau.size());
  std::vector<double> weighted;
  Positions grad(dim, net.numSensors());
  Positions xNext(dim, net.numSensors());

  auto gradX = [&](const Vector& t) {
    weight = 2.0 * t;
    weighted.resize(geo.diff.size());
    kern.weightEdges(view(weight), geo.diff, dim, weighted);
    grad.setZero();
    detail::scatterEdgeVectors(edges, weighted, dim, grad);
  };

  Recorder rec(cfg, sink, out.trace);
  int failures = 0;
  long k = 0;
  for (;; ++k) {
    const double alpha = stepSchedule(cfg, k);
    geo.evaluate(x, net, edges, kern);
    kern.dualAscent(std::span<const double>(geo.xi).first(active), d2.first(active),
                    view(tau).first(active), view(ascent).first(active));

    const ProjectionReport pr = projector.project(DualVariable{tau + alpha * ascent});
    out.trace.projectionIterations += pr.iterations;
    failures = pr.converged ? 0 : failures + 1;

    gradX(cfg.order == UpdateOrder::GaussSeidel ? pr.projected.values : tau);
    kern.projectedStep(view(x), view(grad), alpha, view(flat.lower), view(flat.upper), view(xNext));

    const double dx = std::sqrt(kern.squaredDistance(view(xNext), view(x)));
    const double dtau = std::sqrt(kern.squaredDistance(view(pr.projected.values), view(tau)));
    x.swap(xNext);
    tau = pr.projected.values;

    const bool converged = dx <= cfg.tol && dtau <= cfg.tol;
    const bool projectionFailed = failures >= 2;
    const bool last = converged || projectionFailed || k + 1 >= cfg.maxIter;
    if (rec.wantRow(k, last)) {
      TraceRow row;
      row.k = k;
      row.alpha = alpha;
      row.potential = potential(x, net, edges);
      row.psi = psi(x, DualVariable{tau}, net, edges);
      row.dxNorm = dx;
      row.dtauNorm = dtau;
      if (rec.wantNash(k) || last) row.nashResidual = maxOf(nashStationarityResidual(x, boxes, net, edges));
      if (cfg.recordIterates) {
        row.x = x;
        row.tau = tau;
      }
      rec.emit(std::move(row));
    }
    if (last) {
      out.trace.status = converged ? SolveStatus::Converged
                         : projectionFailed ? SolveStatus::ProjectionFailure
                                            : SolveStatus::MaxIter;
      out.trace.finalAlpha = alpha;
      break;
    }
  }
  out.trace.iterations = k + 1;
  out.profile.positions = std::move(x);
  out.tau.values = std::move(tau);
  return out;
}

SolveResult solveBaselineDescent(const SensorNetwork& net, const EdgeSet& edges,
                                 const std::vector<Box>& boxes, const SolverConfig& config,
                                 const TraceSink& sink) {
  config.validate();
  const SolverConfig cfg = resolveStep(config, net);
  if (boxes.size() != static_cast<std::size_t>(net.numSensors())) {
    throw Error(ErrorCode::InvalidArgument, "one box per player required");
  }
  const auto& kern = kernels::active();
  const int dim = net.dimension();
  const FlatBoxes flat = flatten(boxes, dim);

  SolveResult out;
  out.profile.boxes = boxes;
  Positions x = initialPositions(boxes, cfg);
  Positions xNext(dim, net.numSensors());
  Recorder rec(cfg, sink, out.trace);
  long k = 0;
  for (;; ++k) {
    const double alpha = stepSchedule(cfg, k);
    const Positions grad = gradPotential(x, net, edges);
    kern.projectedStep(view(x), view(grad), alpha, view(flat.lower), view(flat.upper), view(xNext));
    const double dx = std::sqrt(kern.squaredDistance(view(xNext), view(x)));
    x.swap(xNext);
    const bool converged = dx <= cfg.tol;
    const bool last = converged || k + 1 >= cfg.maxIter;
    if (rec.wantRow(k, last)) {
      TraceRow row;
      row.k = k;
      row.alpha = alpha;
      row.potential = potential(x, net, edges);
      row.psi = row.potential;
      row.dxNorm = dx;
      if (rec.wantNash(k) || last) row.nashResidual = maxOf(nashStationarityResidual(x, boxes, net, edges));
      if (cfg.recordIterates) row.x = x;
      rec.emit(std::move(row));
    }
    if (last) {
      out.trace.status = converged ? SolveStatus::Converged : SolveStatus::MaxIter;
      out.trace.finalAlpha = alpha;
      break;
    }
  }
  out.trace.iterations = k + 1;
  out.profile.positions = std::move(x);
  out.tau = DualVariable::zero(edges.size());
  return out;
}

}  // namespace snl
