#include "snl/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snl {

namespace {

void requireFinite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

int expectedRigidRank(int dim, int nodes) {
  if (nodes >= dim) return dim * nodes - dim * (dim + 1) / 2;
  return nodes * (nodes - 1) / 2;
}

}  // namespace

SensorNetwork::SensorNetwork(int dim, Matrix anchors, std::optional<Matrix> groundTruth,
                             int numSensors, double sensingRadius)
    : dim_(dim),
      numSensors_(numSensors),
      anchors_(std::move(anchors)),
      groundTruth_(std::move(groundTruth)),
      radius_(sensingRadius) {
  if (dim_ != 2 && dim_ != 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 2 or 3");
  if (numSensors_ < 1) throw Error(ErrorCode::InvalidArgument, "need at least one non-anchor node");
  if (anchors_.cols() < 1) throw Error(ErrorCode::InvalidArgument, "need at least one anchor");
  if (anchors_.rows() != dim_) throw Error(ErrorCode::InvalidArgument, "anchor dimension mismatch");
  requireFinite(anchors_, "anchor positions");
  if (groundTruth_) {
    if (groundTruth_->rows() != dim_ || groundTruth_->cols() != numSensors_) {
      throw Error(ErrorCode::InvalidArgument, "ground truth must be dim x N");
    }
    requireFinite(*groundTruth_, "ground truth");
  }
  if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
    throw Error(ErrorCode::InvalidArgument, "sensing radius must be finite and non-negative");
  }
}

SensorNetwork::SensorNetwork(Matrix anchors, Matrix groundTruth, double sensingRadius)
    : SensorNetwork(static_cast<int>(anchors.rows()), anchors, groundTruth,
                    static_cast<int>(groundTruth.cols()), sensingRadius) {}

const Matrix& SensorNetwork::groundTruth() const {
  if (!groundTruth_) throw Error(ErrorCode::GroundTruthRequired, "instance has no ground truth");
  return *groundTruth_;
}

NodeId SensorNetwork::node(int index) const {
  if (index < 0 || index >= numNodes()) throw Error(ErrorCode::InvalidArgument, "node index out of range");
  return {index, index < numSensors_ ? NodeKind::NonAnchor : NodeKind::Anchor};
}

Matrix SensorNetwork::truePositions() const {
  Matrix all(dim_, numNodes());
  all.leftCols(numSensors_) = groundTruth();
  all.rightCols(numAnchors()) = anchors_;
  return all;
}

const char* toString(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::SensorSensor: return "SS";
    case EdgeKind::SensorAnchor: return "SA";
    case EdgeKind::AnchorAnchor: return "AA";
  }
  return "?";
}

EdgeSet::EdgeSet(std::vector<Edge> edges, int numSensors, int numNodes)
    : edges_(std::move(edges)), numSensors_(numSensors), numNodes_(numNodes) {
  if (numSensors_ < 0 || numNodes_ < numSensors_) {
    throw Error(ErrorCode::InvalidArgument, "inconsistent node counts");
  }
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= numNodes_ || e.i == e.j) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (!(e.squaredDistance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative squared distance");
    const bool iAnchor = e.i >= numSensors_;
    const bool jAnchor = e.j >= numSensors_;
    e.kind = iAnchor ? EdgeKind::AnchorAnchor : (jAnchor ? EdgeKind::SensorAnchor : EdgeKind::SensorSensor);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t e = 1; e < edges_.size(); ++e) {
    if (edges_[e].i == edges_[e - 1].i && edges_[e].j == edges_[e - 1].j) {
      throw Error(ErrorCode::InvalidArgument, "duplicate edge");
    }
  }

  head_.reserve(edges_.size());
  tail_.reserve(edges_.size());
  d2_.reserve(edges_.size());
  incident_.assign(static_cast<std::size_t>(numSensors_), {});
  std::vector<int> degree(static_cast<std::size_t>(numNodes_), 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    head_.push_back(edge.i);
    tail_.push_back(edge.j);
    d2_.push_back(edge.squaredDistance);
    ++degree[static_cast<std::size_t>(edge.i)];
    ++degree[static_cast<std::size_t>(edge.j)];
    if (edge.i < numSensors_) incident_[static_cast<std::size_t>(edge.i)].push_back(e);
    if (edge.j < numSensors_) incident_[static_cast<std::size_t>(edge.j)].push_back(e);
    if (edge.kind != EdgeKind::AnchorAnchor) active_ = e + 1;
  }
  for (int v = 0; v < numNodes_; ++v) {
    if (degree[static_cast<std::size_t>(v)] == 0) disconnected_.push_back(v);
  }
}

std::optional<std::size_t> EdgeSet::find(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{i, j},
                             [](const Edge& e, const std::pair<int, int>& key) {
                               return e.i != key.first ? e.i < key.first : e.j < key.second;
                             });
  if (it == edges_.end() || it->i != i || it->j != j) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t EdgeSet::count(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

EdgeSet buildEdgeSet(const SensorNetwork& net) {
  const Matrix p = net.truePositions();
  const int n = net.numSensors();
  const int total = net.numNodes();
  const double r2 = net.sensingRadius() * net.sensingRadius();
  std::vector<Edge> edges;
  for (int i = 0; i < total; ++i) {
    for (int j = i + 1; j < total; ++j) {
      // Same operation order as kernels::edgeGeometry so AA residuals are exactly zero.
      double d2 = 0.0;
      for (int c = 0; c < net.dimension(); ++c) {
        const double delta = p(c, i) - p(c, j);
        d2 = d2 + delta * delta;
      }
      const bool bothAnchors = i >= n;
      if (bothAnchors || d2 <= r2) {
        edges.push_back(Edge{i, j, EdgeKind::SensorSensor, std::sqrt(d2), d2});
      }
    }
  }
  return EdgeSet(std::move(edges), n, total);
}

SensorNetwork generateRandomInstance(int dim, int numSensors, int numAnchors, double radius,
                                     std::uint64_t seed) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 2 or 3");
  if (numSensors < 1) throw Error(ErrorCode::InvalidArgument, "need at least one non-anchor node");
  if (numAnchors < dim + 1) {
    throw Error(ErrorCode::TooFewAnchors, "need at least dim + 1 anchors to pin the frame");
  }
  Rng rng(seed);
  Matrix anchors(dim, numAnchors);
  for (int k = 0; k < numAnchors; ++k)
    for (int c = 0; c < dim; ++c) anchors(c, k) = rng.uniform();
  Matrix truth(dim, numSensors);
  for (int k = 0; k < numSensors; ++k)
    for (int c = 0; c < dim; ++c) truth(c, k) = rng.uniform();
  return SensorNetwork(dim, std::move(anchors), std::move(truth), numSensors, radius);
}

Matrix rigidityMatrix(const Matrix& p, const EdgeSet& edges) {
  const int dim = static_cast<int>(p.rows());
  Matrix r = Matrix::Zero(static_cast<Eigen::Index>(edges.size()), dim * p.cols());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    const Vector delta = p.col(edge.i) - p.col(edge.j);
    const auto row = static_cast<Eigen::Index>(e);
    r.block(row, static_cast<Eigen::Index>(dim) * edge.i, 1, dim) = delta.transpose();
    r.block(row, static_cast<Eigen::Index>(dim) * edge.j, 1, dim) = -delta.transpose();
  }
  return r;
}

Matrix rigidityMatrix(const SensorNetwork& net, const EdgeSet& edges) {
  return rigidityMatrix(net.truePositions(), edges);
}

int numericalRank(const Matrix& m, double relTol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cutoff = relTol * s[0];
  return static_cast<int>((s.array() > cutoff).count());
}

namespace {

Matrix perturbedPositions(const SensorNetwork& net, const RigidityOptions& opts) {
  Matrix p = net.truePositions();
  Rng rng(opts.seed);
  for (Eigen::Index k = 0; k < p.size(); ++k) p.data()[k] += rng.uniform(-opts.perturbation, opts.perturbation);
  return p;
}

bool rigidAt(const Matrix& p, const EdgeSet& edges, double relTol) {
  const int dim = static_cast<int>(p.rows());
  const int nodes = static_cast<int>(p.cols());
  return numericalRank(rigidityMatrix(p, edges), relTol) == expectedRigidRank(dim, nodes);
}

}  // namespace

bool isGenericallyRigid(const SensorNetwork& net, const EdgeSet& edges, const RigidityOptions& opts) {
  return rigidAt(perturbedPositions(net, opts), edges, opts.relTol);
}

bool isGenericallyGloballyRigid(const SensorNetwork& net, const EdgeSet& edges,
                                const RigidityOptions& opts) {
  const Matrix p = perturbedPositions(net, opts);
  const int dim = net.dimension();
  const int nodes = net.numNodes();
  if (!rigidAt(p, edges, opts.relTol)) throw Error(ErrorCode::NotRigid, "framework is not generically rigid");

  const Matrix r = rigidityMatrix(p, edges);
  const auto q = static_cast<Eigen::Index>(edges.size());

  // A random equilibrium stress: project a random vector onto null(R^T).
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  Vector probe(q);
  for (Eigen::Index e = 0; e < q; ++e) probe[e] = rng.uniform(-1.0, 1.0);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(r);
  cod.setThreshold(opts.relTol);
  const Vector stress = probe - r * cod.solve(probe);

  if (stress.norm() <= 1e-10 * probe.norm()) {
    // No self-stress: the framework is minimally rigid.
    if (nodes <= dim + 1) return true;
    std::vector<Edge> all(edges.begin(), edges.end());
    for (std::size_t skip = 0; skip < all.size(); ++skip) {
      std::vector<Edge> reduced;
      reduced.reserve(all.size() - 1);
      for (std::size_t e = 0; e < all.size(); ++e)
        if (e != skip) reduced.push_back(all[e]);
      if (!rigidAt(p, EdgeSet(std::move(reduced), edges.numSensors(), edges.numNodes()), opts.relTol)) {
        return false;
      }
    }
    return true;
  }

  Matrix omega = Matrix::Zero(nodes, nodes);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int i = edges[e].i;
    const int j = edges[e].j;
    const double w = stress[static_cast<Eigen::Index>(e)];
    omega(i, j) -= w;
    omega(j, i) -= w;
    omega(i, i) += w;
    omega(j, j) += w;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(omega, Eigen::EigenvaluesOnly);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  const int rank = static_cast<int>((eig.eigenvalues().array().abs() > opts.relTol * scale).count());
  return rank == nodes - dim - 1;
}

}  // namespace snl
