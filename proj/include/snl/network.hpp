#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "snl/common.hpp"
#include "snl/kernels.hpp"

namespace snl {

enum class NodeKind { NonAnchor, Anchor };

/// Zero-based global node index: non-anchors occupy [0, N), anchors [N, N + M).
struct NodeId {
  int index = 0;
  NodeKind kind = NodeKind::NonAnchor;
};

/// An SNL instance: anchor positions, optional non-anchor ground truth and
/// the sensing radius. Immutable after construction.
class SensorNetwork {
 public:
  /// `anchors` is dim x M; `groundTruth`, when present, is dim x numSensors.
  SensorNetwork(int dim, Matrix anchors, std::optional<Matrix> groundTruth, int numSensors,
                double sensingRadius);

  /// Convenience constructor for instances with known ground truth.
  SensorNetwork(Matrix anchors, Matrix groundTruth, double sensingRadius);

  int dimension() const { return dim_; }
  int numSensors() const { return numSensors_; }
  int numAnchors() const { return static_cast<int>(anchors_.cols()); }
  int numNodes() const { return numSensors_ + numAnchors(); }
  double sensingRadius() const { return radius_; }

  const Matrix& anchors() const { return anchors_; }
  bool hasGroundTruth() const { return groundTruth_.has_value(); }

  /// Throws GroundTruthRequired when absent.
  const Matrix& groundTruth() const;

  NodeId node(int index) const;

  /// All N + M true positions as columns (requires ground truth).
  Matrix truePositions() const;

 private:
  int dim_;
  int numSensors_;
  Matrix anchors_;
  std::optional<Matrix> groundTruth_;
  double radius_;
};

enum class EdgeKind { SensorSensor, SensorAnchor, AnchorAnchor };

const char* toString(EdgeKind kind);

struct Edge {
  int i = 0;  ///< smaller global index
  int j = 0;  ///< larger global index
  EdgeKind kind = EdgeKind::SensorSensor;
  double distance = 0.0;
  double squaredDistance = 0.0;
};

/// Lexicographically ordered edge list with its structure-of-arrays mirror
/// for the kernels and a per-sensor incidence list.
class EdgeSet {
 public:
  EdgeSet() = default;

  /// Sorts the edges, derives kinds from the endpoint indices, and rejects
  /// duplicates or out-of-range endpoints.
  EdgeSet(std::vector<Edge> edges, int numSensors, int numNodes);

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const Edge& operator[](std::size_t e) const { return edges_[e]; }
  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  int numSensors() const { return numSensors_; }
  int numNodes() const { return numNodes_; }

  std::optional<std::size_t> find(int i, int j) const;
  std::size_t count(EdgeKind kind) const;

  /// Number of SS and SA edges. Anchor-anchor edges sort last, so these
  /// form the prefix [0, activeCount()).
  std::size_t activeCount() const { return active_; }

  /// Edge indices incident to sensor i (SS and SA only).
  std::span<const std::size_t> incident(int sensor) const { return incident_[static_cast<std::size_t>(sensor)]; }

  /// Nodes with no incident edge at all (reported, not fatal).
  const std::vector<int>& disconnectedNodes() const { return disconnected_; }

  kernels::EdgeIndex index() const { return {head_, tail_}; }
  std::span<const double> squaredDistances() const { return d2_; }

 private:
  std::vector<Edge> edges_;
  int numSensors_ = 0;
  int numNodes_ = 0;
  std::vector<std::int32_t> head_;
  std::vector<std::int32_t> tail_;
  std::vector<double> d2_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<int> disconnected_;
  std::size_t active_ = 0;
};

/// Every pair within the sensing radius plus all anchor pairs, with exact
/// distances computed from the ground truth.
EdgeSet buildEdgeSet(const SensorNetwork& net);

/// Positions i.i.d. uniform on the unit hypercube; anchors drawn first.
SensorNetwork generateRandomInstance(int dim, int numSensors, int numAnchors, double radius,
                                     std::uint64_t seed);

/// q x dim(N+M) rigidity matrix at the given node positions (columns).
Matrix rigidityMatrix(const Matrix& nodePositions, const EdgeSet& edges);
Matrix rigidityMatrix(const SensorNetwork& net, const EdgeSet& edges);

/// Numerical rank with singular values above relTol * sigma_max.
int numericalRank(const Matrix& m, double relTol = 1e-8);

struct RigidityOptions {
  double perturbation = 1e-3;
  double relTol = 1e-8;
  std::uint64_t seed = 0x5eed;
};

bool isGenericallyRigid(const SensorNetwork& net, const EdgeSet& edges,
                        const RigidityOptions& opts = {});

/// Randomized stress-matrix test; throws NotRigid if the framework is not
/// generically rigid.
bool isGenericallyGloballyRigid(const SensorNetwork& net, const EdgeSet& edges,
                                const RigidityOptions& opts = {});

}  // namespace snl
