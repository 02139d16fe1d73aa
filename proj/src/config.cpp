#include "mgn/config.hpp"

#include <set>
#include <type_traits>

#include "mgn/error.hpp"

namespace mgn {

namespace {

// Reads the keys of one JSON object, rejecting unknown ones on finish().
class Section {
 public:
  Section(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) bad("expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const Json& raw(const char* key) { return j_.at(key); }

  void get(const char* key, double& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
    out = v.get<double>();
  }
  void get(const char* key, int& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) bad(std::string("'") + key + "' must be an integer");
    out = v.get<int>();
  }
  void get(const char* key, long& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) bad(std::string("'") + key + "' must be an integer");
    out = v.get<long>();
  }
  template <class U>
    requires(std::is_unsigned_v<U> && !std::is_same_v<U, bool>)
  void get(const char* key, U& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_unsigned()) bad(std::string("'") + key + "' must be a non-negative integer");
    out = v.get<U>();
  }
  void get(const char* key, bool& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) bad(std::string("'") + key + "' must be true or false");
    out = v.get<bool>();
  }
  void get(const char* key, std::string& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_string()) bad(std::string("'") + key + "' must be a string");
    out = v.get<std::string>();
  }
  void get(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_array()) bad(std::string("'") + key + "' must be an array of numbers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number()) bad(std::string("'") + key + "' must be an array of numbers");
      out.push_back(e.get<double>());
    }
  }
  void get(const char* key, std::vector<int>& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_array()) bad(std::string("'") + key + "' must be an array of integers");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_number_integer()) bad(std::string("'") + key + "' must be an array of integers");
      out.push_back(e.get<int>());
    }
  }
  void get(const char* key, std::optional<double>& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (v.is_null()) {
      out.reset();
      return;
    }
    if (!v.is_number()) bad(std::string("'") + key + "' must be a number or null");
    out = v.get<double>();
  }
  void get(const char* key, std::optional<std::uint64_t>& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (v.is_null()) {
      out.reset();
      return;
    }
    if (!v.is_number_unsigned()) bad(std::string("'") + key + "' must be a non-negative integer or null");
    out = v.get<std::uint64_t>();
  }

  Section sub(const char* key) {
    seen_.insert(key);
    return Section(j_.at(key), where_ + "." + key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) bad("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void bad(const std::string& what) const {
    fail(ErrorCode::kSchema, "config " + where_ + ": " + what);
  }

  const std::string& where() const { return where_; }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

const char* dir_name(EdgeDirection d) { return d == EdgeDirection::kHorizontal ? "horizontal" : "vertical"; }

}  // namespace

Json defects_to_json(const DefectPattern& p) {
  switch (p.kind) {
    case DefectPattern::Kind::kNone:
      return Json{{"kind", "none"}};
    case DefectPattern::Kind::kExplicit: {
      Json edges = Json::array();
      for (const Edge& e : p.edges) edges.push_back({e.a, e.b});
      return Json{{"kind", "explicit"}, {"edges", edges}};
    }
    case DefectPattern::Kind::kPeriodicBlock: {
      Json removed = Json::array();
      for (const auto& b : p.removed) {
        removed.push_back({{"row", b.row}, {"col", b.col}, {"dir", dir_name(b.dir)}});
      }
      return Json{{"kind", "periodic-block"},
                  {"block_rows", p.block_rows},
                  {"block_cols", p.block_cols},
                  {"removed", removed}};
    }
  }
  return Json{{"kind", "none"}};
}

DefectPattern defects_from_json(const Json& j) {
  Section s(j, "lattice.defects");
  std::string kind = "none";
  s.get("kind", kind);
  DefectPattern p;
  if (kind == "none") {
    p = DefectPattern::none();
  } else if (kind == "explicit") {
    std::vector<Edge> edges;
    if (s.has("edges")) {
      const Json& a = s.raw("edges");
      if (!a.is_array()) s.bad("'edges' must be an array of [a, b] pairs");
      for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
          s.bad("'edges' must be an array of [a, b] pairs");
        }
        edges.push_back({e[0].get<int>(), e[1].get<int>()});
      }
    }
    p = DefectPattern::explicit_edges(std::move(edges));
  } else if (kind == "periodic-block") {
    int br = 0, bc = 0;
    s.get("block_rows", br);
    s.get("block_cols", bc);
    std::vector<BlockEdge> removed;
    if (s.has("removed")) {
      const Json& a = s.raw("removed");
      if (!a.is_array()) s.bad("'removed' must be an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        Section r(a[i], s.where() + ".removed[" + std::to_string(i) + "]");
        BlockEdge b;
        std::string dir = "horizontal";
        r.get("row", b.row);
        r.get("col", b.col);
        r.get("dir", dir);
        r.finish();
        if (dir == "horizontal") b.dir = EdgeDirection::kHorizontal;
        else if (dir == "vertical") b.dir = EdgeDirection::kVertical;
        else r.bad("'dir' must be horizontal or vertical");
        removed.push_back(b);
      }
    }
    try {
      p = DefectPattern::periodic_block(br, bc, std::move(removed));
    } catch (const Error& e) {
      s.bad(e.what());
    }
  } else {
    s.bad("unknown defect kind '" + kind + "' (expected none, explicit or periodic-block)");
  }
  s.finish();
  return p;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  const auto& l = c.lattice;
  j["lattice"] = {{"rows", l.rows}, {"cols", l.cols}, {"xi", l.xi}, {"phi0", l.phi0}, {"L0", l.L0},
                  {"density", l.density}, {"inertia", l.inertia ? Json(*l.inertia) : Json(nullptr)},
                  {"defects", defects_to_json(l.defects)}};
  j["oracle"] = oracle_spec_to_json(c.oracle);
  j["data"] = {{"n", c.data.n},
               {"path", c.data.path},
               {"split", {c.data.split.train, c.data.split.validation, c.data.split.test}},
               {"split_seed", c.data.split_seed ? Json(*c.data.split_seed) : Json(nullptr)}};
  const auto& g = c.surrogate.gpr;
  const auto& m = c.surrogate.mlp.settings;
  j["surrogate"] = {
      {"model", c.surrogate.model},
      {"model_path", c.surrogate.model_path},
      {"gpr",
       {{"sigma2", g.init.sigma2}, {"length_scale", g.init.length_scale}, {"noise2", g.init.noise2},
        {"restarts", g.restarts}, {"max_iterations", g.max_iterations}, {"optimize", g.optimize}}},
      {"mlp",
       {{"preset", c.surrogate.mlp.preset}, {"hidden_layers", m.hidden_layers}, {"width", m.width},
        {"learning_rate", m.learning_rate}, {"batch_size", m.batch_size}, {"epochs", m.epochs},
        {"patience", m.patience}, {"beta1", m.beta1}, {"beta2", m.beta2}, {"epsilon", m.epsilon}}}};
  const auto& s = c.simulation;
  j["simulation"] = {{"protocol", s.protocol},
                     {"strain", s.params.strain},
                     {"axis", s.params.axis == Axis::kX ? "x" : "y"},
                     {"ramp_time", s.params.ramp_time},
                     {"impulse_rate", s.params.impulse_rate},
                     {"impulse_duration", s.params.impulse_duration},
                     {"shear_amplitude", s.params.shear_amplitude},
                     {"shear_period", s.params.shear_period},
                     {"dt", s.dt},
                     {"duration", s.duration},
                     {"c_v", s.damping.c_v},
                     {"c_omega", s.damping.c_omega},
                     {"snapshot_stride", s.snapshot_stride},
                     {"tracked_rows", s.tracked_rows},
                     {"perturb_position", s.perturb_position},
                     {"perturb_theta", s.perturb_theta}};
  j["relax"] = {{"tol_v", c.relax.tol_v}, {"tol_omega", c.relax.tol_omega},
                {"tol_force", c.relax.tol_force}, {"max_steps", c.relax.max_steps},
                {"ramp_time", c.relax.ramp_time}};
  j["wavespeed"] = {{"source_row", c.wave.source_row}, {"target_row", c.wave.target_row},
                    {"threshold", c.wave.threshold}};
  j["contour"] = {{"d", c.contour.d}, {"resolution", c.contour.resolution}};
  const auto& r = c.render.svg;
  j["render"] = {{"state", c.render.state}, {"arm", r.arm}, {"cross_width", r.cross_width},
                 {"edge_width", r.edge_width}, {"pixels_per_L0", r.pixels_per_L0}};
  Json sizes = Json::array();
  for (const auto& [rows, cols] : c.bench.sizes) sizes.push_back({rows, cols});
  j["bench"] = {{"sizes", sizes}, {"steps", c.bench.steps}, {"repetitions", c.bench.repetitions}};
  return j;
}

ExperimentConfig config_from_json(const Json& root) {
  const Json* jp = &root;
  if (root.is_object() && root.contains("config") && root.value("format", "") == "mgn-manifest") {
    jp = &root.at("config");
  }
  Section top(*jp, "root");
  ExperimentConfig c;
  top.get("seed", c.seed);
  top.get("threads", c.threads);
  top.get("output_dir", c.output_dir);

  if (top.has("lattice")) {
    Section s = top.sub("lattice");
    auto& l = c.lattice;
    s.get("rows", l.rows);
    s.get("cols", l.cols);
    s.get("xi", l.xi);
    s.get("phi0", l.phi0);
    s.get("L0", l.L0);
    s.get("density", l.density);
    s.get("inertia", l.inertia);
    if (s.has("defects")) l.defects = defects_from_json(s.raw("defects"));
    s.finish();
  }
  if (top.has("oracle")) {
    try {
      c.oracle = oracle_spec_from_json(top.raw("oracle"));
    } catch (const Error& e) {
      fail(ErrorCode::kSchema, std::string("config ") + e.what());
    }
  }
  if (top.has("data")) {
    Section s = top.sub("data");
    s.get("n", c.data.n);
    s.get("path", c.data.path);
    std::vector<double> split;
    s.get("split", split);
    if (!split.empty()) {
      if (split.size() != 3) s.bad("'split' must hold three ratios");
      c.data.split = {split[0], split[1], split[2]};
    }
    s.get("split_seed", c.data.split_seed);
    s.finish();
  }
  if (top.has("surrogate")) {
    Section s = top.sub("surrogate");
    s.get("model", c.surrogate.model);
    s.get("model_path", c.surrogate.model_path);
    if (s.has("gpr")) {
      Section g = s.sub("gpr");
      auto& gc = c.surrogate.gpr;
      g.get("sigma2", gc.init.sigma2);
      g.get("length_scale", gc.init.length_scale);
      g.get("noise2", gc.init.noise2);
      g.get("restarts", gc.restarts);
      g.get("max_iterations", gc.max_iterations);
      g.get("optimize", gc.optimize);
      g.finish();
    }
    if (s.has("mlp")) {
      Section m = s.sub("mlp");
      auto& mc = c.surrogate.mlp;
      m.get("preset", mc.preset);
      try {
        mc.settings = mlp_preset(mc.preset);
      } catch (const Error& e) {
        m.bad(e.what());
      }
      m.get("hidden_layers", mc.settings.hidden_layers);
      m.get("width", mc.settings.width);
      m.get("learning_rate", mc.settings.learning_rate);
      m.get("batch_size", mc.settings.batch_size);
      m.get("epochs", mc.settings.epochs);
      m.get("patience", mc.settings.patience);
      m.get("beta1", mc.settings.beta1);
      m.get("beta2", mc.settings.beta2);
      m.get("epsilon", mc.settings.epsilon);
      m.finish();
    }
    s.finish();
  }
  if (top.has("simulation")) {
    Section s = top.sub("simulation");
    auto& sc = c.simulation;
    s.get("protocol", sc.protocol);
    s.get("strain", sc.params.strain);
    std::string axis = sc.params.axis == Axis::kX ? "x" : "y";
    s.get("axis", axis);
    if (axis == "x") sc.params.axis = Axis::kX;
    else if (axis == "y") sc.params.axis = Axis::kY;
    else s.bad("'axis' must be x or y");
    s.get("ramp_time", sc.params.ramp_time);
    s.get("impulse_rate", sc.params.impulse_rate);
    s.get("impulse_duration", sc.params.impulse_duration);
    s.get("shear_amplitude", sc.params.shear_amplitude);
    s.get("shear_period", sc.params.shear_period);
    s.get("dt", sc.dt);
    s.get("duration", sc.duration);
    s.get("c_v", sc.damping.c_v);
    s.get("c_omega", sc.damping.c_omega);
    s.get("snapshot_stride", sc.snapshot_stride);
    s.get("tracked_rows", sc.tracked_rows);
    s.get("perturb_position", sc.perturb_position);
    s.get("perturb_theta", sc.perturb_theta);
    s.finish();
  }
  if (top.has("relax")) {
    Section s = top.sub("relax");
    s.get("tol_v", c.relax.tol_v);
    s.get("tol_omega", c.relax.tol_omega);
    s.get("tol_force", c.relax.tol_force);
    s.get("max_steps", c.relax.max_steps);
    s.get("ramp_time", c.relax.ramp_time);
    s.finish();
  }
  if (top.has("wavespeed")) {
    Section s = top.sub("wavespeed");
    s.get("source_row", c.wave.source_row);
    s.get("target_row", c.wave.target_row);
    s.get("threshold", c.wave.threshold);
    s.finish();
  }
  if (top.has("contour")) {
    Section s = top.sub("contour");
    s.get("d", c.contour.d);
    s.get("resolution", c.contour.resolution);
    s.finish();
  }
  if (top.has("render")) {
    Section s = top.sub("render");
    s.get("state", c.render.state);
    s.get("arm", c.render.svg.arm);
    s.get("cross_width", c.render.svg.cross_width);
    s.get("edge_width", c.render.svg.edge_width);
    s.get("pixels_per_L0", c.render.svg.pixels_per_L0);
    s.finish();
  }
  if (top.has("bench")) {
    Section s = top.sub("bench");
    if (s.has("sizes")) {
      const Json& a = s.raw("sizes");
      if (!a.is_array()) s.bad("'sizes' must be an array of [rows, cols] pairs");
      c.bench.sizes.clear();
      for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
          s.bad("'sizes' must be an array of [rows, cols] pairs");
        }
        c.bench.sizes.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    }
    s.get("steps", c.bench.steps);
    s.get("repetitions", c.bench.repetitions);
    s.finish();
  }
  top.finish();

  if (c.threads < 1) fail(ErrorCode::kSchema, "config root: 'threads' must be >= 1");
  if (c.contour.resolution < 3) fail(ErrorCode::kSchema, "config contour: 'resolution' must be >= 3");
  if (c.simulation.snapshot_stride < 1) {
    fail(ErrorCode::kSchema, "config simulation: 'snapshot_stride' must be >= 1");
  }
  if (c.bench.repetitions < 5) fail(ErrorCode::kSchema, "config bench: 'repetitions' must be >= 5");
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  try {
    return config_from_json(read_json(path));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

Lattice make_lattice(const LatticeConfig& c) {
  LatticeSpec spec;
  spec.rows = c.rows;
  spec.cols = c.cols;
  spec.shape = {c.xi, c.phi0, c.L0};
  spec.density = c.density;
  if (c.inertia) {
    spec.inertia_policy = InertiaPolicy::kConfigValue;
    spec.inertia_value = *c.inertia;
  }
  return apply_defects(build_lattice(spec), c.defects);
}

}  // namespace mgn
