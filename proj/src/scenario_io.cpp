#include "snl/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace snl {

namespace {

Json matrixColumns(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Json col = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    out.push_back(std::move(col));
  }
  return out;
}

Matrix columnsMatrix(const Json& j, int dim, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array");
  Matrix m(dim, static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Json& col = j[c];
    if (!col.is_array() || col.size() != static_cast<std::size_t>(dim)) {
      throw Error(ErrorCode::ParseError, std::string(what) + " entries must have " + std::to_string(dim) + " coordinates");
    }
    for (int r = 0; r < dim; ++r) m(r, static_cast<Eigen::Index>(c)) = col[static_cast<std::size_t>(r)].get<double>();
  }
  return m;
}

Json vectorJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

Vector jsonVector(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected a number array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  return v;
}

const char* toString(UpdateOrder o) { return o == UpdateOrder::Jacobi ? "jacobi" : "gauss-seidel"; }

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> splitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parseDouble(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end && std::isfinite(v);
}

std::optional<bool> parseFlag(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "y" || s == "anchor") return true;
  if (s == "0" || s == "false" || s == "no" || s == "n" || s == "sensor" || s.empty()) return false;
  return std::nullopt;
}

}  // namespace

SensorNetwork Scenario::network() const {
  if (schemaVersion != kSchemaVersion) {
    throw Error(ErrorCode::ParseError, "unsupported schema version " + std::to_string(schemaVersion));
  }
  return SensorNetwork(dimension, anchors, groundTruth, numSensors, sensingRadius);
}

EdgeSet Scenario::edgeSet() const {
  if (!measurements) return buildEdgeSet(network());
  std::vector<Edge> edges;
  edges.reserve(measurements->size());
  for (const Measurement& m : *measurements) {
    if (!(m.distance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative distance");
    edges.push_back(Edge{m.i, m.j, EdgeKind::SensorSensor, m.distance, m.distance * m.distance});
  }
  return EdgeSet(std::move(edges), numSensors, numSensors + static_cast<int>(anchors.cols()));
}

std::vector<Box> Scenario::playerBoxes() const {
  if (!boxes) return unitBoxes(dimension, numSensors);
  if (boxes->size() != static_cast<std::size_t>(numSensors)) {
    throw Error(ErrorCode::InvalidArgument, "one box per non-anchor node required");
  }
  return *boxes;
}

Scenario scenarioFromNetwork(const SensorNetwork& net) {
  Scenario s;
  s.dimension = net.dimension();
  s.anchors = net.anchors();
  if (net.hasGroundTruth()) s.groundTruth = net.groundTruth();
  s.numSensors = net.numSensors();
  s.sensingRadius = net.sensingRadius();
  return s;
}

Json toJson(const Scenario& s) {
  Json j;
  j["schemaVersion"] = s.schemaVersion;
  j["dimension"] = s.dimension;
  j["numSensors"] = s.numSensors;
  j["sensingRadius"] = s.sensingRadius;
  j["anchors"] = matrixColumns(s.anchors);
  if (s.groundTruth) j["groundTruth"] = matrixColumns(*s.groundTruth);
  if (s.boxes) {
    Json b = Json::array();
    for (const Box& box : *s.boxes) b.push_back({{"lower", vectorJson(box.lower)}, {"upper", vectorJson(box.upper)}});
    j["boxes"] = std::move(b);
  }
  if (s.measurements) {
    Json m = Json::array();
    for (const Measurement& e : *s.measurements) m.push_back({e.i, e.j, e.distance});
    j["measurements"] = std::move(m);
  }
  if (!s.solver.empty()) j["solver"] = s.solver;
  return j;
}

Scenario scenarioFromJson(const Json& j) {
  try {
    Scenario s;
    s.schemaVersion = j.at("schemaVersion").get<int>();
    if (s.schemaVersion != kSchemaVersion) {
      throw Error(ErrorCode::ParseError, "unsupported schema version " + std::to_string(s.schemaVersion));
    }
    s.dimension = j.at("dimension").get<int>();
    s.sensingRadius = j.at("sensingRadius").get<double>();
    s.anchors = columnsMatrix(j.at("anchors"), s.dimension, "anchors");
    if (j.contains("groundTruth")) s.groundTruth = columnsMatrix(j["groundTruth"], s.dimension, "groundTruth");
    if (j.contains("numSensors")) {
      s.numSensors = j["numSensors"].get<int>();
    } else if (s.groundTruth) {
      s.numSensors = static_cast<int>(s.groundTruth->cols());
    } else {
      throw Error(ErrorCode::ParseError, "numSensors required without groundTruth");
    }
    if (s.groundTruth && s.groundTruth->cols() != s.numSensors) {
      throw Error(ErrorCode::ParseError, "groundTruth size does not match numSensors");
    }
    if (j.contains("boxes")) {
      std::vector<Box> boxes;
      for (const Json& b : j["boxes"]) boxes.push_back(Box{jsonVector(b.at("lower")), jsonVector(b.at("upper"))});
      s.boxes = std::move(boxes);
    }
    if (j.contains("measurements")) {
      std::vector<Measurement> m;
      for (const Json& e : j["measurements"]) m.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
      s.measurements = std::move(m);
    }
    if (!s.groundTruth && !s.measurements) {
      throw Error(ErrorCode::ParseError, "scenario needs groundTruth or measurements");
    }
    if (j.contains("solver")) s.solver = j["solver"];
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed scenario: ") + e.what());
  }
}

std::string fingerprint(const Scenario& s) {
  const std::string text = toJson(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json toJson(const SolverConfig& cfg) {
  return {{"alpha0", cfg.alpha0},
          {"alphaScale", cfg.alphaScale},
          {"gamma", cfg.gamma},
          {"stepOffset", cfg.stepOffset},
          {"tol", cfg.tol},
          {"maxIter", cfg.maxIter},
          {"seed", cfg.seed},
          {"tauInit", cfg.tauInit == TauInit::Zero ? "zero" : "small-positive"},
          {"tauEpsilon", cfg.tauEpsilon},
          {"order", toString(cfg.order)},
          {"tauNonneg", cfg.tauNonneg},
          {"nashEvery", cfg.nashEvery},
          {"projectionTol", cfg.projection.tol},
          {"projectionMaxIter", cfg.projection.maxIter}};
}

SolverConfig applyOverrides(SolverConfig cfg, const Json& o) {
  if (!o.is_object()) throw Error(ErrorCode::ParseError, "solver overrides must be an object");
  try {
    for (auto it = o.begin(); it != o.end(); ++it) {
      const std::string& key = it.key();
      const Json& v = it.value();
      if (key == "alpha0") cfg.alpha0 = v.get<double>();
      else if (key == "alphaScale") cfg.alphaScale = v.get<double>();
      else if (key == "gamma") cfg.gamma = v.get<double>();
      else if (key == "stepOffset") cfg.stepOffset = v.get<double>();
      else if (key == "tol") cfg.tol = v.get<double>();
      else if (key == "maxIter") cfg.maxIter = v.get<long>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "tauEpsilon") cfg.tauEpsilon = v.get<double>();
      else if (key == "tauNonneg") cfg.tauNonneg = v.get<bool>();
      else if (key == "nashEvery") cfg.nashEvery = v.get<long>();
      else if (key == "projectionTol") cfg.projection.tol = v.get<double>();
      else if (key == "projectionMaxIter") cfg.projection.maxIter = v.get<int>();
      else if (key == "tauInit") {
        const auto s = v.get<std::string>();
        if (s == "zero") cfg.tauInit = TauInit::Zero;
        else if (s == "small-positive") cfg.tauInit = TauInit::SmallPositive;
        else throw Error(ErrorCode::ParseError, "unknown tauInit '" + s + "'");
      } else if (key == "order") {
        const auto s = v.get<std::string>();
        if (s == "jacobi") cfg.order = UpdateOrder::Jacobi;
        else if (s == "gauss-seidel") cfg.order = UpdateOrder::GaussSeidel;
        else throw Error(ErrorCode::ParseError, "unknown update order '" + s + "'");
      } else {
        throw Error(ErrorCode::ParseError, "unknown solver key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed solver overrides: ") + e.what());
  }
  return cfg;
}

Json toJson(const Certificate& c) {
  return {{"verdict", toString(c.verdict)},
          {"maxResidual", c.maxResidual},
          {"stationaryResidualX", c.stationaryResidualX},
          {"stationaryResidualTau", c.stationaryResidualTau},
          {"epsCert", c.epsCert},
          {"epsStat", c.epsStat},
          {"dualityResiduals", vectorJson(c.dualityResiduals)}};
}

Certificate certificateFromJson(const Json& j) {
  Certificate c;
  c.verdict = verdictFromString(j.at("verdict").get<std::string>());
  c.maxResidual = j.at("maxResidual").get<double>();
  c.stationaryResidualX = j.at("stationaryResidualX").get<double>();
  c.stationaryResidualTau = j.at("stationaryResidualTau").get<double>();
  c.epsCert = j.at("epsCert").get<double>();
  c.epsStat = j.at("epsStat").get<double>();
  c.dualityResiduals = jsonVector(j.at("dualityResiduals"));
  return c;
}

Json toJson(const ResultDocument& r) {
  Json j;
  j["schemaVersion"] = kSchemaVersion;
  j["fingerprint"] = r.fingerprint;
  j["method"] = r.method;
  j["status"] = r.status;
  j["iterations"] = r.iterations;
  j["finalAlpha"] = r.finalAlpha;
  j["wallTime"] = r.wallTime;
  j["positions"] = matrixColumns(r.positions);
  j["tau"] = vectorJson(r.tau);
  j["certificate"] = toJson(r.certificate);
  if (r.error) {
    j["error"] = {{"rmse", r.error->rmse}, {"maxError", r.error->maxError},
                  {"perNodeError", vectorJson(r.error->perNodeError)}};
  }
  j["config"] = r.config;
  j["scenario"] = toJson(r.scenario);
  return j;
}

ResultDocument resultFromJson(const Json& j) {
  try {
    ResultDocument r;
    if (j.at("schemaVersion").get<int>() != kSchemaVersion) throw Error(ErrorCode::ParseError, "unsupported schema version");
    r.scenario = scenarioFromJson(j.at("scenario"));
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.iterations = j.at("iterations").get<long>();
    r.finalAlpha = j.at("finalAlpha").get<double>();
    r.wallTime = j.at("wallTime").get<double>();
    r.positions = columnsMatrix(j.at("positions"), r.scenario.dimension, "positions");
    r.tau = jsonVector(j.at("tau"));
    r.certificate = certificateFromJson(j.at("certificate"));
    if (j.contains("error")) {
      const Json& e = j["error"];
      r.error = ErrorReport{jsonVector(e.at("perNodeError")), e.at("rmse").get<double>(), e.at("maxError").get<double>()};
    }
    r.config = j.at("config");
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed result: ") + e.what());
  }
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void writeJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TraceCsvWriter::TraceCsvWriter(std::ostream& out) : out_(out) {
  out_ << "k,alpha,P,Psi,dx_norm,dtau_norm,nash_residual\n";
}

void TraceCsvWriter::write(const TraceRow& row) {
  out_ << row.k << ',' << formatDouble(row.alpha) << ',' << formatDouble(row.potential) << ','
       << formatDouble(row.psi) << ',' << formatDouble(row.dxNorm) << ',' << formatDouble(row.dtauNorm) << ',';
  if (row.nashResidual) out_ << formatDouble(*row.nashResidual);
  out_ << '\n';
}

IngestResult ingestCsv(std::istream& in, const IngestColumns& columns, double radius) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError(0, "empty file, header row expected");
  const std::vector<std::string> header = splitCsv(line);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IngestError(0, "column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> axes{column(columns.x), column(columns.y)};
  if (columns.z) axes.push_back(column(*columns.z));
  const std::size_t flagColumn = column(columns.anchor);
  const int dim = static_cast<int>(axes.size());

  std::vector<Vector> points;
  std::vector<bool> isAnchor;
  long row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> fields = splitCsv(line);
    Vector p(dim);
    for (int c = 0; c < dim; ++c) {
      const std::size_t col = axes[static_cast<std::size_t>(c)];
      if (col >= fields.size() || !parseDouble(fields[col], p[c])) {
        throw IngestError(row, "missing or unparseable value in column '" + header[col] + "'");
      }
    }
    const auto flag = flagColumn < fields.size() ? parseFlag(fields[flagColumn]) : std::optional<bool>(false);
    if (!flag) throw IngestError(row, "unrecognised anchor flag '" + fields[flagColumn] + "'");
    points.push_back(std::move(p));
    isAnchor.push_back(*flag);
  }
  if (points.empty()) throw IngestError(0, "no data rows");

  IngestResult result;
  for (int c = 0; c < dim; ++c) {
    double lo = points.front()[c], hi = lo;
    for (const Vector& p : points) {
      lo = std::min(lo, p[c]);
      hi = std::max(hi, p[c]);
    }
    if (hi == lo) {
      result.warnings.push_back("axis " + std::to_string(c) + " is constant; mapped to 0.5");
      for (Vector& p : points) p[c] = 0.5;
    } else {
      for (Vector& p : points) p[c] = (p[c] - lo) / (hi - lo);
    }
  }

  const auto anchors = std::count(isAnchor.begin(), isAnchor.end(), true);
  const auto sensors = static_cast<long>(points.size()) - anchors;
  if (anchors == 0) throw IngestError(0, "no anchor rows");
  if (sensors == 0) throw IngestError(0, "no non-anchor rows");
  Scenario& s = result.scenario;
  s.dimension = dim;
  s.numSensors = static_cast<int>(sensors);
  s.sensingRadius = radius;
  s.anchors.resize(dim, anchors);
  Matrix truth(dim, sensors);
  Eigen::Index a = 0, n = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (isAnchor[k]) s.anchors.col(a++) = points[k];
    else truth.col(n++) = points[k];
  }
  s.groundTruth = std::move(truth);
  return result;
}

IngestResult ingestCsvFile(const std::string& path, const IngestColumns& columns, double radius) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  return ingestCsv(in, columns, radius);
}

}  // namespace snl
