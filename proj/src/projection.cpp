#include "snl/projection.hpp"

#include <algorithm>
#include <cmath>

namespace snl {

namespace {

Matrix laplacian(const Vector& tau, const EdgeSet& edges) {
  return assembleQ(DualVariable{tau}, edges).matrix;
}

struct Spectrum {
  double min = 0.0;
  double norm = 0.0;
};

Spectrum spectrum(const Matrix& l) {
  if (l.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(l, Eigen::EigenvaluesOnly);
  const Vector& w = eig.eigenvalues();
  return {w[0], std::max(std::abs(w[0]), std::abs(w[w.size() - 1]))};
}

bool psdWithin(const Matrix& l, double tol) {
  const Spectrum s = spectrum(l);
  return s.min >= -tol * (1.0 + s.norm);
}

Matrix projectPsd(const Matrix& y) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(y);
  const Vector w = eig.eigenvalues().cwiseMax(0.0);
  const Matrix& v = eig.eigenvectors();
  return v * w.asDiagonal() * v.transpose();
}

double maxReach(const Box& a, const Box& b) {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < a.lower.size(); ++c) {
    const double r = std::max(std::abs(a.upper[c] - b.lower[c]), std::abs(b.upper[c] - a.lower[c]));
    sum += r * r;
  }
  return sum;
}

}  // namespace

DualBounds dualBounds(const SensorNetwork& net, const EdgeSet& edges, const std::vector<Box>& boxes) {
  if (boxes.size() != static_cast<std::size_t>(net.numSensors())) {
    throw Error(ErrorCode::InvalidArgument, "one box per player required");
  }
  const auto q = static_cast<Eigen::Index>(edges.size());
  DualBounds b{Vector::Zero(q), Vector::Zero(q)};
  for (std::size_t e = 0; e < edges.activeCount(); ++e) {
    const Edge& edge = edges[e];
    const Box& bi = boxes[static_cast<std::size_t>(edge.i)];
    double reach2 = 0.0;
    if (edge.kind == EdgeKind::SensorSensor) {
      reach2 = maxReach(bi, boxes[static_cast<std::size_t>(edge.j)]);
    } else {
      const Vector a = net.anchors().col(edge.j - net.numSensors());
      reach2 = maxReach(bi, Box{a, a});
    }
    const auto k = static_cast<Eigen::Index>(e);
    b.lower[k] = -2.0 * edge.squaredDistance;
    b.upper[k] = 2.0 * (std::max(reach2, edge.squaredDistance) - edge.squaredDistance);
  }
  return b;
}

Vector projectBox(const Vector& v, const Box& box) { return box.clamp(v); }

Vector laplacianAdjoint(const Matrix& z, const EdgeSet& edges) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.activeCount(); ++e) {
    const Edge& edge = edges[e];
    double v = z(edge.i, edge.i);
    if (edge.kind == EdgeKind::SensorSensor) v += z(edge.j, edge.j) - 2.0 * z(edge.i, edge.j);
    out[static_cast<Eigen::Index>(e)] = v;
  }
  return out;
}

double minEigenvalue(const DualVariable& tau, const EdgeSet& edges) {
  return spectrum(laplacian(tau.values, edges)).min;
}

bool isInEPlus(const DualVariable& tau, const EdgeSet& edges, const DualBounds& bounds, double tol) {
  if (tau.values.size() != bounds.lower.size()) return false;
  for (Eigen::Index e = 0; e < tau.values.size(); ++e) {
    const double t = tau.values[e];
    if (!std::isfinite(t)) return false;
    if (t < bounds.lower[e] - tol || t > bounds.upper[e] + tol) return false;
  }
  if (edges.numSensors() == 0) return true;
  return psdWithin(laplacian(tau.values, edges), tol);
}

EPlusProjector::EPlusProjector(const EdgeSet& edges, DualBounds bounds, ProjectionOptions opts)
    : edges_(&edges), bounds_(std::move(bounds)), opts_(opts) {
  if (!(opts_.tol > 0.0) || opts_.maxIter < 1) {
    throw Error(ErrorCode::InvalidArgument, "projection needs tol > 0 and maxIter >= 1");
  }
  if (static_cast<std::size_t>(bounds_.lower.size()) != edges.size() ||
      static_cast<std::size_t>(bounds_.upper.size()) != edges.size()) {
    throw Error(ErrorCode::InvalidArgument, "bounds must have one entry per edge");
  }
  if (opts_.nonnegativeOnly) bounds_.lower = bounds_.lower.cwiseMax(0.0);
  const int n = edges.numSensors();
  z_ = Matrix::Zero(n, n);
  if (n == 0 || edges.activeCount() == 0) return;

  // Largest eigenvalue of Z -> L(L*(Z)) by power iteration.
  Rng rng(0x1a9);
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) z(i, j) = z(j, i) = rng.uniform(-1.0, 1.0);
  double est = 0.0;
  for (int it = 0; it < 200; ++it) {
    Matrix next = laplacian(laplacianAdjoint(z, edges), edges);
    const double norm = next.norm();
    if (norm == 0.0) break;
    est = norm / z.norm();
    z = next / norm;
  }
  lipschitz_ = std::max(est * 1.01, 1e-12);
}

void EPlusProjector::resetMultiplier() { z_.setZero(); }

Vector EPlusProjector::clip(const Vector& tau) const {
  return tau.cwiseMax(bounds_.lower).cwiseMin(bounds_.upper);
}

Vector EPlusProjector::tauOf(const Vector& tau0, const Matrix& z) const {
  return clip(tau0 + laplacianAdjoint(z, *edges_));
}

ProjectionReport EPlusProjector::project(const DualVariable& tau0) {
  if (tau0.size() != edges_->size()) {
    throw Error(ErrorCode::InvalidArgument, "tau must have one entry per edge");
  }
  ProjectionReport report;
  report.iterations = 1;
  const Vector c = clip(tau0.values);

  if (opts_.nonnegativeOnly || edges_->numSensors() == 0 || c.minCoeff() >= 0.0) {
    report.projected.values = c;
    report.residual = (c - tau0.values).norm();
    return report;
  }
  const Spectrum before = spectrum(laplacian(tau0.values, *edges_));
  report.infeasibilityBefore = std::max(0.0, -before.min);
  if (psdWithin(laplacian(c, *edges_), opts_.tol)) {
    report.projected.values = c;
    report.residual = (c - tau0.values).norm();
    return report;
  }

  const double eta = 1.0 / lipschitz_;
  Matrix z = z_;
  Matrix y = z;
  double t = 1.0;
  Vector prev = tauOf(tau0.values, z);
  Vector tau = prev;
  report.converged = false;
  for (int it = 1; it <= opts_.maxIter; ++it) {
    const Matrix zNext = projectPsd(y - eta * laplacian(tauOf(tau0.values, y), *edges_));
    const Matrix step = zNext - z;
    if ((y - zNext).cwiseProduct(step).sum() > 0.0) {
      t = 1.0;
      y = zNext;
    } else {
      const double tNext = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = zNext + ((t - 1.0) / tNext) * step;
      t = tNext;
    }
    z = zNext;
    tau = tauOf(tau0.values, z);
    report.iterations = it;
    report.residual = (tau - prev).norm();
    prev = tau;
    if (report.residual <= opts_.tol && psdWithin(laplacian(tau, *edges_), opts_.tol)) {
      report.converged = true;
      break;
    }
  }
  z_ = z;
  report.projected.values = tau;
  return report;
}

ProjectionReport projectEPlus(const DualVariable& tau0, const EdgeSet& edges, const DualBounds& bounds,
                              const ProjectionOptions& opts) {
  EPlusProjector projector(edges, bounds, opts);
  ProjectionReport report = projector.project(tau0);
  if (!report.converged) {
    throw Error(ErrorCode::MaxInnerIterations,
                "E+ projection did not converge in " + std::to_string(opts.maxIter) + " iterations");
  }
  return report;
}

}  // namespace snl
