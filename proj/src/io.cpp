#include "mgn/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "mgn/error.hpp"

namespace mgn {

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorCode::kIo, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      fail(ErrorCode::kIo, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorCode::kIo, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

// Iterates lines with their 1-based numbers; a final empty line is ignored.
template <class Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t start = 0;
  int number = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++number;
    fn(number, trim(std::string_view(text).substr(start, end - start)));
    start = end + 1;
  }
}

[[noreturn]] void schema_error(const fs::path& path, int line, const std::string& what) {
  fail(ErrorCode::kSchema, path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void write_dataset(const Dataset& data, const fs::path& path) {
  data.validate();
  std::string out = std::string(kDatasetHeader) + "\n";
  out.reserve(out.size() + data.size() * 96);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec3& z = data.inputs[i];
    out += format_double(z[0]) + "," + format_double(z[1]) + "," + format_double(z[2]) + "," +
           format_double(data.outputs[i]) + "\n";
  }
  write_file_atomic(path, out);
}

DatasetReadReport read_dataset(const fs::path& path, double L0) {
  const std::string text = read_file(path);
  DatasetReadReport report;
  report.data.provenance = path.string();
  bool header_seen = false;
  std::size_t outside = 0;
  int first_outside = 0;
  for_each_line(text, [&](int number, std::string_view line) {
    if (line.empty()) return;
    if (!header_seen) {
      if (line != kDatasetHeader) {
        schema_error(path, number, "expected header '" + std::string(kDatasetHeader) + "', found '" +
                                       std::string(line) + "'");
      }
      header_seen = true;
      return;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 4) {
      schema_error(path, number, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    double v[4];
    static const char* names[4] = {"theta_a", "theta_b", "d", "energy"};
    for (int k = 0; k < 4; ++k) {
      if (!parse_double(fields[k], v[k])) {
        schema_error(path, number, std::string("cannot parse ") + names[k] + " '" +
                                       std::string(trim(fields[k])) + "'");
      }
      if (!std::isfinite(v[k])) schema_error(path, number, std::string("non-finite ") + names[k]);
    }
    const Vec3 z(v[0], v[1], v[2]);
    if (!inside_sampling_cube(z, L0)) {
      if (outside++ == 0) first_outside = number;
    }
    report.data.inputs.push_back(z);
    report.data.outputs.push_back(v[3]);
  });
  if (!header_seen) schema_error(path, 1, "empty file; expected header '" + std::string(kDatasetHeader) + "'");
  if (outside > 0) {
    report.warnings.push_back(std::to_string(outside) +
                              " row(s) lie outside the sampling cube (first at line " +
                              std::to_string(first_outside) + ")");
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON helpers

namespace {

[[noreturn]] void bad_field(const std::string& where, const std::string& what) {
  fail(ErrorCode::kSchema, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad_field(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad_field(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number()) bad_field(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> number_array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad_field(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) bad_field(where, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd matrix(const Json& j, Eigen::Index cols, const std::string& where) {
  if (!j.is_array()) bad_field(where, "expected an array of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = number_array(j[r], where);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      bad_field(where, "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = row[c];
  }
  return m;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchema, path.string() + ": malformed JSON (" + e.what() + ")");
  }
}

Json oracle_spec_to_json(const AnalyticOracleSpec& s) {
  return Json{{"k_d", s.k_d}, {"k_s", s.k_s}, {"k_t", s.k_t},
              {"c_couple", s.c_couple}, {"q4", s.q4}, {"d_star", s.d_star}};
}

AnalyticOracleSpec oracle_spec_from_json(const Json& j) {
  const std::string where = "oracle spec";
  if (!j.is_object()) bad_field(where, "expected an object");
  AnalyticOracleSpec s;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) bad_field(where, "field '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "k_d") s.k_d = v;
    else if (key == "k_s") s.k_s = v;
    else if (key == "k_t") s.k_t = v;
    else if (key == "c_couple") s.c_couple = v;
    else if (key == "q4") s.q4 = v;
    else if (key == "d_star") s.d_star = v;
    else bad_field(where, "unknown field '" + key + "'");
  }
  return s;
}

Json model_to_json(const EdgeEnergyModel& model, const ModelFileInfo& info) {
  Json j;
  j["format"] = "mgn-model";
  j["version"] = 1;
  j["kind"] = model.kind();
  j["reference_offset"] = model.reference_offset();
  if (const auto* o = dynamic_cast<const AnalyticOracle*>(&model)) {
    j["oracle"] = oracle_spec_to_json(o->spec());
  } else if (const auto* g = dynamic_cast<const GprModel*>(&model)) {
    j["L0"] = g->L0();
    j["input_scaling"] = "theta_a, theta_b, d / L0";
    j["hyperparams"] = {{"sigma2", g->hyperparams().sigma2},
                        {"length_scale", g->hyperparams().length_scale},
                        {"noise2", g->hyperparams().noise2}};
    j["inputs"] = matrix_json(g->inputs());
    j["outputs"] = vector_json(g->outputs());
    j["alpha"] = vector_json(g->alpha());
  } else if (const auto* m = dynamic_cast<const MlpModel*>(&model)) {
    j["L0"] = m->L0();
    j["input_scaling"] = "theta_a, theta_b, d / L0";
    j["activation"] = "relu";
    Json layers = Json::array();
    for (const auto& layer : m->layers()) {
      layers.push_back({{"W", matrix_json(layer.W)}, {"b", vector_json(layer.b)}});
    }
    j["layers"] = std::move(layers);
  } else {
    fail(ErrorCode::kInvalidArgument, "cannot serialize model of kind '" + model.kind() + "'");
  }
  if (info.bounds) j["scaling_bounds"] = {{"y_min", info.bounds->y_min}, {"y_max", info.bounds->y_max}};
  if (info.split_seed) j["split_seed"] = *info.split_seed;
  if (!info.extra.empty()) j["training"] = info.extra;
  return j;
}

ModelPtr model_from_json(const Json& j, ModelFileInfo* info) {
  const std::string where = "model";
  const Json& fmt = field(j, "format", where);
  if (!fmt.is_string() || fmt.get<std::string>() != "mgn-model") {
    bad_field(where, "'format' must be \"mgn-model\"");
  }
  const Json& ver = field(j, "version", where);
  if (!ver.is_number_integer() || ver.get<int>() != 1) bad_field(where, "unsupported 'version' (expected 1)");
  const Json& kind_j = field(j, "kind", where);
  if (!kind_j.is_string()) bad_field(where, "'kind' must be a string");
  const std::string kind = kind_j.get<std::string>();
  const double offset = number(j, "reference_offset", where);

  std::unique_ptr<EdgeEnergyModel> model;
  try {
    if (kind == "oracle") {
      model = std::make_unique<AnalyticOracle>(oracle_spec_from_json(field(j, "oracle", where)));
    } else if (kind == "gpr") {
      const double L0 = number(j, "L0", where);
      const Json& h = field(j, "hyperparams", where);
      GprHyperparams hp{number(h, "sigma2", "model.hyperparams"),
                        number(h, "length_scale", "model.hyperparams"),
                        number(h, "noise2", "model.hyperparams")};
      Eigen::MatrixXd Z = matrix(field(j, "inputs", where), 3, "model.inputs");
      Eigen::VectorXd y = to_vector(number_array(field(j, "outputs", where), "model.outputs"));
      Eigen::VectorXd alpha = to_vector(number_array(field(j, "alpha", where), "model.alpha"));
      if (y.size() != Z.rows() || alpha.size() != Z.rows()) {
        bad_field(where, "inputs, outputs and alpha must have equal length");
      }
      model = std::make_unique<GprModel>(std::move(Z), std::move(y), std::move(alpha), hp, L0);
    } else if (kind == "mlp") {
      const double L0 = number(j, "L0", where);
      const Json& layers_j = field(j, "layers", where);
      if (!layers_j.is_array() || layers_j.empty()) bad_field(where, "'layers' must be a non-empty array");
      std::vector<MlpLayer> layers;
      for (std::size_t k = 0; k < layers_j.size(); ++k) {
        const std::string lw = "model.layers[" + std::to_string(k) + "]";
        const auto b = number_array(field(layers_j[k], "b", lw), lw + ".b");
        const Json& W_j = field(layers_j[k], "W", lw);
        if (!W_j.is_array() || W_j.empty()) bad_field(lw, "'W' must be a non-empty array");
        const auto cols = W_j[0].is_array() ? static_cast<Eigen::Index>(W_j[0].size()) : 0;
        layers.push_back({matrix(W_j, cols, lw + ".W"), to_vector(b)});
      }
      model = std::make_unique<MlpModel>(std::move(layers), L0);
    } else {
      bad_field(where, "unknown kind '" + kind + "' (expected gpr, mlp or oracle)");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchema) throw;
    fail(ErrorCode::kSchema, "model: " + std::string(e.what()));
  }
  model->set_reference_offset(offset);

  if (info) {
    *info = {};
    if (auto it = j.find("scaling_bounds"); it != j.end()) {
      info->bounds = ScalingBounds{number(*it, "y_min", "model.scaling_bounds"),
                                   number(*it, "y_max", "model.scaling_bounds")};
    }
    if (auto it = j.find("split_seed"); it != j.end()) {
      if (!it->is_number_unsigned()) bad_field(where, "'split_seed' must be a non-negative integer");
      info->split_seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("training"); it != j.end()) info->extra = *it;
  }
  return ModelPtr(std::move(model));
}

void save_model(const EdgeEnergyModel& model, const fs::path& path, const ModelFileInfo& info) {
  write_file_atomic(path, model_to_json(model, info).dump(1) + "\n");
}

ModelPtr load_model(const fs::path& path, ModelFileInfo* info) {
  const Json j = read_json(path);
  try {
    return model_from_json(j, info);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

Json lattice_to_json(const Lattice& lattice) {
  Json j;
  j["format"] = "mgn-lattice";
  j["rows"] = lattice.rows();
  j["cols"] = lattice.cols();
  j["shape"] = {{"xi", lattice.shape().xi}, {"phi0", lattice.shape().phi0}, {"L0", lattice.L0()}};
  Json nodes = Json::array();
  for (std::size_t i = 0; i < lattice.node_count(); ++i) {
    nodes.push_back({{"x", lattice.ref_positions()[i][0]},
                     {"y", lattice.ref_positions()[i][1]},
                     {"theta", lattice.ref_orientations()[i]},
                     {"mass", lattice.masses()[i]},
                     {"inertia", lattice.inertias()[i]}});
  }
  j["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const Edge& e : lattice.edges()) edges.push_back({e.a, e.b});
  j["edges"] = std::move(edges);
  return j;
}

Lattice lattice_from_json(const Json& j) {
  const std::string where = "lattice";
  const Json& rows_j = field(j, "rows", where);
  const Json& cols_j = field(j, "cols", where);
  if (!rows_j.is_number_integer() || !cols_j.is_number_integer()) {
    bad_field(where, "'rows' and 'cols' must be integers");
  }
  const Json& s = field(j, "shape", where);
  PoreShape shape{number(s, "xi", "lattice.shape"), number(s, "phi0", "lattice.shape"),
                  number(s, "L0", "lattice.shape")};
  const Json& nodes = field(j, "nodes", where);
  if (!nodes.is_array()) bad_field(where, "'nodes' must be an array");
  std::vector<Vec2> x;
  std::vector<double> theta, mass, inertia;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string nw = "lattice.nodes[" + std::to_string(i) + "]";
    x.emplace_back(number(nodes[i], "x", nw), number(nodes[i], "y", nw));
    theta.push_back(number(nodes[i], "theta", nw));
    mass.push_back(number(nodes[i], "mass", nw));
    inertia.push_back(number(nodes[i], "inertia", nw));
  }
  const Json& edges_j = field(j, "edges", where);
  if (!edges_j.is_array()) bad_field(where, "'edges' must be an array");
  std::vector<Edge> edges;
  for (const auto& e : edges_j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      bad_field(where, "each edge must be a pair of node indices");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  try {
    return Lattice(rows_j.get<int>(), cols_j.get<int>(), shape, std::move(x), std::move(theta),
                   std::move(mass), std::move(inertia), std::move(edges));
  } catch (const Error& e) {
    fail(ErrorCode::kSchema, "lattice: " + std::string(e.what()));
  }
}

void save_lattice(const Lattice& lattice, const fs::path& path) {
  write_file_atomic(path, lattice_to_json(lattice).dump(1) + "\n");
}

Lattice load_lattice(const fs::path& path) { return lattice_from_json(read_json(path)); }

std::string snapshot_csv(const Snapshot& s) {
  std::string out = std::string(kSnapshotHeader) + "\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    out += std::to_string(i) + "," + format_double(s.x[i][0]) + "," + format_double(s.x[i][1]) +
           "," + format_double(s.theta[i]) + "," + format_double(s.v[i][0]) + "," +
           format_double(s.v[i][1]) + "," + format_double(s.omega[i]) + "\n";
  }
  return out;
}

std::string log_csv(const std::vector<LogEntry>& log) {
  std::string out = std::string(kLogHeader) + "\n";
  for (const auto& e : log) {
    out += std::to_string(e.step) + "," + format_double(e.time) + "," + format_double(e.kinetic) +
           "," + format_double(e.potential) + "," + format_double(e.tracked_kinetic) + "\n";
  }
  return out;
}

std::vector<fs::path> write_trajectory(const Trajectory& traj, const fs::path& dir) {
  std::vector<fs::path> written;
  for (const auto& s : traj.snapshots) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%08ld.csv", s.step);
    written.push_back(dir / name);
    write_file_atomic(written.back(), snapshot_csv(s));
  }
  written.push_back(dir / "log.csv");
  write_file_atomic(written.back(), log_csv(traj.log));
  return written;
}

Snapshot read_snapshot(const fs::path& path) {
  const std::string text = read_file(path);
  Snapshot s;
  bool header_seen = false;
  for_each_line(text, [&](int number, std::string_view line) {
    if (line.empty()) return;
    if (!header_seen) {
      if (line != kSnapshotHeader) {
        schema_error(path, number, "expected header '" + std::string(kSnapshotHeader) + "'");
      }
      header_seen = true;
      return;
    }
    const auto f = split_csv(line);
    if (f.size() != 7) schema_error(path, number, "expected 7 fields, found " + std::to_string(f.size()));
    double v[7];
    for (int k = 0; k < 7; ++k) {
      if (!parse_double(f[k], v[k]) || !std::isfinite(v[k])) {
        schema_error(path, number, "cannot parse field " + std::to_string(k + 1));
      }
    }
    if (v[0] != static_cast<double>(s.x.size())) {
      schema_error(path, number, "nodes must be listed in order starting at 0");
    }
    s.x.emplace_back(v[1], v[2]);
    s.theta.push_back(v[3]);
    s.v.emplace_back(v[4], v[5]);
    s.omega.push_back(v[6]);
  });
  if (!header_seen) schema_error(path, 1, "empty snapshot file");
  return s;
}

}  // namespace mgn
