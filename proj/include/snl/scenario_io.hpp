#pragma once

// Scenario and result documents (JSON), trace CSV output and CSV ingestion.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "snl/certification.hpp"
#include "snl/common.hpp"
#include "snl/network.hpp"
#include "snl/solver.hpp"

namespace snl {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// One range measurement, used when a scenario carries no ground truth.
struct Measurement {
  int i = 0;
  int j = 0;
  double distance = 0.0;
};

struct Scenario {
  int schemaVersion = kSchemaVersion;
  int dimension = 2;
  Matrix anchors;                    ///< dim x M
  std::optional<Matrix> groundTruth; ///< dim x N
  int numSensors = 0;
  double sensingRadius = 0.0;
  std::optional<std::vector<Box>> boxes;
  std::optional<std::vector<Measurement>> measurements;
  Json solver = Json::object();      ///< SolverConfig overrides

  SensorNetwork network() const;
  /// Edges from the ground truth, or from the measurements when present.
  EdgeSet edgeSet() const;
  std::vector<Box> playerBoxes() const;
};

Scenario scenarioFromNetwork(const SensorNetwork& net);

Json toJson(const Scenario& s);
Scenario scenarioFromJson(const Json& j);

/// 64-bit FNV-1a of the compact scenario JSON, as 16 hex digits.
std::string fingerprint(const Scenario& s);

Json toJson(const SolverConfig& cfg);
/// Applies the keys present in `overrides` on top of `cfg`.
SolverConfig applyOverrides(SolverConfig cfg, const Json& overrides);

Json toJson(const Certificate& c);
Certificate certificateFromJson(const Json& j);

struct ResultDocument {
  std::string fingerprint;
  Scenario scenario;
  std::string method = "alg1";
  Positions positions;
  Vector tau;
  Certificate certificate;
  std::optional<ErrorReport> error;
  long iterations = 0;
  std::string status;
  double finalAlpha = 0.0;
  double wallTime = 0.0;
  Json config = Json::object();
};

Json toJson(const ResultDocument& r);
ResultDocument resultFromJson(const Json& j);

Json readJsonFile(const std::string& path);
/// Pretty-printed, trailing newline.
void writeJsonFile(const std::string& path, const Json& j);

/// Streams trace rows as CSV: k,alpha,P,Psi,dx_norm,dtau_norm,nash_residual.
class TraceCsvWriter {
 public:
  explicit TraceCsvWriter(std::ostream& out);
  void write(const TraceRow& row);

 private:
  std::ostream& out_;
};

std::string formatDouble(double v);

struct IngestColumns {
  std::string x = "x";
  std::string y = "y";
  std::optional<std::string> z;
  std::string anchor = "anchor";
};

struct IngestResult {
  Scenario scenario;
  std::vector<std::string> warnings;
};

/// Reads a CSV with a header row, min-max normalizes every axis over all
/// rows (a constant axis maps to 0.5) and splits rows into anchors and
/// non-anchors by the flag column.
IngestResult ingestCsv(std::istream& in, const IngestColumns& columns, double radius);
IngestResult ingestCsvFile(const std::string& path, const IngestColumns& columns, double radius);

}  // namespace snl
