#include "snl/common.hpp"

namespace snl {

const char* toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GroundTruthRequired: return "GroundTruthRequired";
    case ErrorCode::TooFewAnchors: return "TooFewAnchors";
    case ErrorCode::NotAPlayer: return "NotAPlayer";
    case ErrorCode::NotRigid: return "NotRigid";
    case ErrorCode::MaxInnerIterations: return "MaxInnerIterations";
    case ErrorCode::ProjectionFailure: return "ProjectionFailure";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::IngestError: return "IngestError";
    case ErrorCode::RigidityGenerationFailed: return "RigidityGenerationFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(toString(code)) + ": " + message), code_(code) {}

IngestError::IngestError(long row, const std::string& message)
    : Error(ErrorCode::IngestError, "row " + std::to_string(row) + ": " + message), row_(row) {}

bool Box::contains(const Eigen::Ref<const Vector>& v, double slack) const {
  if (v.size() != lower.size()) return false;
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    if (v[c] < lower[c] - slack || v[c] > upper[c] + slack) return false;
  }
  return true;
}

Vector Box::clamp(const Eigen::Ref<const Vector>& v) const {
  return v.cwiseMax(lower).cwiseMin(upper);
}

Box Box::unit(int dim) {
  return Box{Vector::Zero(dim), Vector::Ones(dim)};
}

std::vector<Box> unitBoxes(int dim, int count) {
  return std::vector<Box>(static_cast<std::size_t>(count), Box::unit(dim));
}

}  // namespace snl
