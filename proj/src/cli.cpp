#include "mgn/cli.hpp"

#include <cstdlib>
#include <map>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mgn/bench.hpp"
#include "mgn/error.hpp"
#include "mgn/pipeline.hpp"

namespace mgn {

namespace {

struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir;

  std::size_t n = 0;
  std::string output;
  std::string model_kind;
  int preset = 1;
  std::string data_path;
  std::string model_file;
  std::vector<double> d_values;
  int resolution = 0;
  std::string protocol;
  double duration = 0.0;
  double dt = 0.0;
  double strain = 0.0;
  int rows = 0;
  int cols = 0;
  int stride = 0;
  int source_row = 0;
  int target_row = 0;
  double threshold = 0.0;
  std::string state;
  std::string sizes;
  int steps = 0;
  int repetitions = 0;
};

struct Context {
  std::string subcommand;
  std::vector<std::string> argv;
  ExperimentConfig config;
  fs::path out_dir;
  std::vector<std::string> outputs;
  std::ostream& out;
  std::ostream& err;

  fs::path emit(const std::string& name, const std::string& content) {
    const fs::path p = out_dir / name;
    write_file_atomic(p, content);
    outputs.push_back(name);
    return p;
  }
};

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(item);
      out.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidArgument, "cannot parse size '" + item + "' (expected ROWSxCOLS)");
    }
  }
  return out;
}

fs::path resolve(const Context& ctx, const std::string& p, const char* fallback) {
  if (!p.empty()) return p;
  return ctx.out_dir / fallback;
}

ModelPtr load_surrogate(Context& ctx, const Lattice& lattice) {
  const auto& path = ctx.config.surrogate.model_path;
  if (path.empty()) return calibrate_reference(AnalyticOracle(ctx.config.oracle), lattice);
  const ModelPtr m = load_model(path);
  const auto residual = reference_residual(*calibrate_reference(*m, lattice), lattice);
  ctx.err << "note: reference residual of the surrogate: max force " << residual.max_force
          << ", max torque " << residual.max_torque << "\n";
  return calibrate_reference(*m, lattice);
}

Dataset load_or_generate(Context& ctx, const fs::path& path) {
  const auto& c = ctx.config;
  if (fs::exists(path)) {
    auto report = read_dataset(path, c.lattice.L0);
    for (const auto& w : report.warnings) ctx.err << "warning: " << path.string() << ": " << w << "\n";
    return std::move(report.data);
  }
  ctx.err << "note: " << path.string() << " not found; labelling " << c.data.n
          << " oracle samples with seed " << c.seed << "\n";
  const AnalyticOracle oracle(c.oracle);
  return label_dataset(oracle, sample_features(c.data.n, c.lattice.L0, c.seed), "oracle");
}

LoadProtocol protocol_for(const ExperimentConfig& c, const Lattice& lattice) {
  return make_protocol(c.simulation.protocol, c.simulation.params, lattice);
}

std::vector<int> tracked_nodes(const ExperimentConfig& c, const Lattice& lattice) {
  std::vector<int> nodes;
  for (int r : c.simulation.tracked_rows) {
    const int row = r < 0 ? lattice.rows() + r : r;
    if (row < 0 || row >= lattice.rows()) {
      fail(ErrorCode::kInvalidArgument, "tracked row " + std::to_string(r) + " out of range");
    }
    for (int n : lattice.row_nodes(row)) nodes.push_back(n);
  }
  return nodes;
}

Trajectory run_simulation(Context& ctx, const Lattice& lattice, const ModelPtr& model) {
  const auto& c = ctx.config;
  SimConfig sim;
  sim.lattice = &lattice;
  sim.model = model;
  sim.protocol = protocol_for(c, lattice);
  sim.dt = c.simulation.dt;
  sim.duration = c.simulation.duration;
  sim.damping = c.simulation.damping;
  sim.snapshot_stride = c.simulation.snapshot_stride;
  sim.tracked_nodes = tracked_nodes(c, lattice);
  sim.initial.perturb_position = c.simulation.perturb_position * lattice.L0();
  sim.initial.perturb_theta = c.simulation.perturb_theta;
  sim.initial.seed = c.seed;
  sim.threads = c.threads;
  return simulate(sim);
}

int cmd_gen_data(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  const AnalyticOracle oracle(c.oracle);
  const Dataset data = label_dataset(oracle, sample_features(c.data.n, c.lattice.L0, c.seed), "oracle");
  const fs::path path = resolve(ctx, c.data.path, "data.csv");
  write_dataset(data, path);
  ctx.outputs.push_back(path.string());
  ctx.out << dump({{"rows", data.size()}, {"path", path.string()}, {"seed", c.seed}});
  return 0;
}

int cmd_train(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  const Dataset data = load_or_generate(ctx, resolve(ctx, c.data.path, "data.csv"));
  const std::uint64_t split_seed = c.data.split_seed.value_or(c.seed);
  const auto outcome = train_surrogates(data, c.surrogate.model, c.surrogate.gpr, c.surrogate.mlp,
                                        c.data.split, split_seed, c.seed, c.lattice.L0, c.threads);
  ModelFileInfo info;
  info.bounds = outcome.bounds;
  info.split_seed = split_seed;
  info.extra = {{"selected", outcome.best_name}, {"seed", c.seed}, {"dataset_rows", data.size()}};
  const fs::path model_path = ctx.out_dir / "model.json";
  save_model(*outcome.best, model_path, info);
  ctx.outputs.push_back(model_path.string());

  Json report;
  report["selected"] = outcome.best_name;
  report["model"] = model_path.string();
  report["split"] = {{"train", outcome.split.train.size()},
                     {"validation", outcome.split.validation.size()},
                     {"test", outcome.split.test.size()}};
  Json cands = Json::array();
  for (const auto& cr : outcome.candidates) {
    Json r{{"name", cr.name}, {"ok", cr.ok}};
    if (cr.ok) {
      r["train_smse"] = cr.train_smse;
      r["validation_smse"] = cr.validation_smse;
    } else {
      r["error"] = cr.error;
    }
    r["details"] = cr.details;
    cands.push_back(std::move(r));
    ctx.out << cr.name << ": ";
    if (cr.ok) {
      ctx.out << "train_smse=" << cr.train_smse << " validation_smse=" << cr.validation_smse;
    } else {
      ctx.out << "failed (" << cr.error << ")";
    }
    ctx.out << " [" << cr.seconds << " s]\n";
  }
  report["candidates"] = cands;
  ctx.emit("train_report.json", dump(report));
  ctx.out << "selected " << outcome.best_name << " -> " << model_path.string() << "\n";
  return 0;
}

int cmd_eval(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  const fs::path model_path = resolve(ctx, c.surrogate.model_path, "model.json");
  ModelFileInfo info;
  const ModelPtr model = load_model(model_path, &info);
  const Dataset data = load_or_generate(ctx, resolve(ctx, c.data.path, "data.csv"));
  const auto split = split_dataset(data, c.data.split, info.split_seed.value_or(c.data.split_seed.value_or(c.seed)));
  const Dataset test = subset(data, split.test);
  const ScalingBounds bounds =
      info.bounds ? *info.bounds : ScalingBounds::from_outputs(subset(data, split.train).outputs);
  const auto pred = predict_all(*model, test.inputs);
  const double err = smse(pred, test.outputs, bounds);
  std::string table = "theta_a,theta_b,d,true,predicted\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    table += format_double(test.inputs[i][0]) + "," + format_double(test.inputs[i][1]) + "," +
             format_double(test.inputs[i][2]) + "," + format_double(test.outputs[i]) + "," +
             format_double(pred[i]) + "\n";
  }
  ctx.emit("eval_predictions.csv", table);
  ctx.emit("eval_report.json", dump({{"model", model_path.string()}, {"kind", model->kind()},
                                     {"test_rows", test.size()}, {"test_smse", err}}));
  ctx.out << "test_smse=" << err << " (" << test.size() << " rows, " << model->kind() << ")\n";
  return 0;
}

int cmd_contour(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  ModelPtr model;
  if (c.surrogate.model_path.empty()) {
    model = std::make_shared<AnalyticOracle>(c.oracle);
  } else {
    model = load_model(c.surrogate.model_path);
  }
  Json summary = Json::array();
  for (std::size_t k = 0; k < c.contour.d.size(); ++k) {
    const double d = c.contour.d[k] * c.lattice.L0;
    const auto grid = energy_contour(*model, d, c.contour.resolution);
    const std::string name = "contour_" + std::to_string(k) + ".csv";
    ctx.emit(name, contour_csv(grid));
    summary.push_back({{"d_over_L0", c.contour.d[k]}, {"file", name}, {"minima", grid.minima}});
    ctx.out << "d=" << c.contour.d[k] << "L0 minima=" << grid.minima << " -> " << name << "\n";
  }
  ctx.emit("contour.json", dump({{"resolution", c.contour.resolution}, {"grids", summary}}));
  return 0;
}

int cmd_simulate(Context& ctx, const Flags&) {
  const Lattice lattice = make_lattice(ctx.config.lattice);
  const ModelPtr model = load_surrogate(ctx, lattice);
  const Trajectory traj = run_simulation(ctx, lattice, model);
  for (const auto& p : write_trajectory(traj, ctx.out_dir / "trajectory")) {
    ctx.outputs.push_back(fs::relative(p, ctx.out_dir).string());
  }
  const Snapshot& last = traj.snapshots.back();
  ctx.emit("final.svg", render_svg(last.x, last.theta, lattice, ctx.config.render.svg));
  const LogEntry end = traj.log.empty() ? LogEntry{} : traj.log.back();
  ctx.out << dump({{"steps", traj.log.size()}, {"dt", traj.dt}, {"snapshots", traj.snapshots.size()},
                   {"final_kinetic", end.kinetic}, {"final_potential", end.potential}});
  return 0;
}

int cmd_relax(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  const Lattice lattice = make_lattice(c.lattice);
  const ModelPtr model = load_surrogate(ctx, lattice);
  RelaxOptions opt;
  opt.damping = c.simulation.damping;
  opt.dt = c.simulation.dt;
  opt.ramp_time = c.relax.ramp_time;
  opt.tol_v = c.relax.tol_v;
  opt.tol_omega = c.relax.tol_omega;
  opt.tol_force = c.relax.tol_force;
  opt.max_steps = c.relax.max_steps;
  opt.threads = c.threads;
  opt.initial.perturb_position = c.simulation.perturb_position * lattice.L0();
  opt.initial.perturb_theta = c.simulation.perturb_theta;
  opt.initial.seed = c.seed;
  const auto res = quasi_static_relax(lattice, *model, protocol_for(c, lattice), opt);
  const Snapshot snap{res.state.step, res.state.t, res.state.x, res.state.theta, res.state.v, res.state.omega};
  ctx.emit("relaxed.csv", snapshot_csv(snap));
  ctx.emit("relaxed.svg", render_svg(snap.x, snap.theta, lattice, c.render.svg));
  const double energy = assemble_energy(lattice, res.state.configuration(), *model).global_energy;
  ctx.out << dump({{"steps", res.steps}, {"residual_force", res.residual_force}, {"energy", energy}});
  return 0;
}

int cmd_wavespeed(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  const Lattice lattice = make_lattice(c.lattice);
  const ModelPtr model = load_surrogate(ctx, lattice);
  const Trajectory traj = run_simulation(ctx, lattice, model);
  const int src = c.wave.source_row < 0 ? lattice.rows() + c.wave.source_row : c.wave.source_row;
  const int tgt = c.wave.target_row < 0 ? lattice.rows() + c.wave.target_row : c.wave.target_row;
  const auto w = measure_wave_speed(traj, lattice, src, tgt, c.wave.threshold);
  ctx.emit("log.csv", log_csv(traj.log));
  const Json j{{"speed", w.speed}, {"distance", w.distance}, {"start_time", w.start_time},
               {"arrival_time", w.arrival_time}, {"source_row", src}, {"target_row", tgt}};
  ctx.emit("wavespeed.json", dump(j));
  ctx.out << dump(j);
  return 0;
}

int cmd_render(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  const Lattice lattice = make_lattice(c.lattice);
  std::vector<Vec2> x = lattice.ref_positions();
  std::vector<double> theta = lattice.ref_orientations();
  if (!c.render.state.empty()) {
    const Snapshot s = read_snapshot(c.render.state);
    if (s.x.size() != lattice.node_count()) {
      fail(ErrorCode::kInvalidArgument, "snapshot has " + std::to_string(s.x.size()) +
                                            " nodes, lattice has " + std::to_string(lattice.node_count()));
    }
    x = s.x;
    theta = s.theta;
  }
  ctx.emit("render.svg", render_svg(x, theta, lattice, c.render.svg));
  ctx.out << "rendered " << lattice.node_count() << " crosses, " << lattice.edge_count() << " edges\n";
  return 0;
}

int cmd_bench(Context& ctx, const Flags&) {
  const auto& c = ctx.config;
  LatticeSpec base;
  base.shape = {c.lattice.xi, c.lattice.phi0, c.lattice.L0};
  base.density = c.lattice.density;
  if (c.lattice.inertia) {
    base.inertia_policy = InertiaPolicy::kConfigValue;
    base.inertia_value = *c.lattice.inertia;
  }
  ModelPtr model;
  if (c.surrogate.model_path.empty()) {
    model = std::make_shared<AnalyticOracle>(c.oracle);
  } else {
    model = load_model(c.surrogate.model_path);
  }
  BenchOptions opt;
  opt.steps = c.bench.steps;
  opt.repetitions = c.bench.repetitions;
  opt.threads = c.threads;
  opt.seed = c.seed;
  const auto report = bench_scaling(c.bench.sizes, *model, base, opt);
  ctx.emit("bench.csv", bench_csv(report));
  for (const auto& e : report.entries) {
    ctx.out << e.rows << "x" << e.cols << " edges=" << e.edges;
    if (e.error.empty()) {
      ctx.out << " mean=" << e.mean_step_seconds << " s/step stddev=" << e.stddev_step_seconds << "\n";
    } else {
      ctx.out << " error=" << e.error << "\n";
    }
  }
  if (report.entries.empty()) ctx.out << "empty report (steps = 0)\n";
  return 0;
}

void write_manifest(Context& ctx) {
  Json m;
  m["format"] = "mgn-manifest";
  m["version"] = kVersion;
  m["subcommand"] = ctx.subcommand;
  m["argv"] = ctx.argv;
  m["seed"] = ctx.config.seed;
  m["config"] = config_to_json(ctx.config);
  m["outputs"] = ctx.outputs;
  write_file_atomic(ctx.out_dir / ("manifest_" + ctx.subcommand + ".json"), dump(m));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metamaterial graph network: surrogate training and lattice simulation", "mgn"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  Flags f;

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(Context&, const Flags&);
  };
  const Sub subs[] = {
      {"gen-data", "Sample the feature cube and label it with the analytic oracle", cmd_gen_data},
      {"train", "Fit GPR and/or MLP surrogates and keep the best by validation SMSE", cmd_train},
      {"eval", "Test-split SMSE and a predicted-vs-true table", cmd_eval},
      {"contour", "Energy grids over (theta_a, theta_b) at fixed elongations", cmd_contour},
      {"simulate", "Leap-frog dynamics under a loading protocol", cmd_simulate},
      {"relax", "Damped quasi-static relaxation", cmd_relax},
      {"wavespeed", "Simulate and measure the wave speed between two rows", cmd_wavespeed},
      {"render", "SVG snapshot of a lattice state", cmd_render},
      {"bench", "Per-step timing over lattice sizes", cmd_bench},
  };

  std::map<std::string, CLI::App*> apps;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    apps[s.name] = sub;
    auto& o = opts[s.name];
    o["config"] = sub->add_option("--config", f.config_path, "JSON config or run manifest")->check(CLI::ExistingFile);
    o["seed"] = sub->add_option("--seed", f.seed, "Random seed");
    o["threads"] = sub->add_option("--threads", f.threads, "Force-assembly threads")->check(CLI::PositiveNumber);
    o["out"] = sub->add_option("--out", f.out_dir, "Output directory (env MGN_OUTPUT_DIR)");
  }
  auto& o = opts;
  o["gen-data"]["n"] = apps["gen-data"]->add_option("--n", f.n, "Number of samples");
  o["gen-data"]["output"] = apps["gen-data"]->add_option("--output", f.output, "CSV path (sets data.path)");

  o["train"]["model"] = apps["train"]->add_option("--model", f.model_kind, "gpr | mlp | all")
                            ->check(CLI::IsMember({"gpr", "mlp", "all"}));
  o["train"]["preset"] = apps["train"]->add_option("--preset", f.preset, "MLP preset 1-3")->check(CLI::Range(1, 3));
  o["train"]["data"] = apps["train"]->add_option("--data", f.data_path, "Dataset CSV");

  o["eval"]["model-file"] = apps["eval"]->add_option("--model-file", f.model_file, "Model JSON");
  o["eval"]["data"] = apps["eval"]->add_option("--data", f.data_path, "Dataset CSV");

  o["contour"]["d"] = apps["contour"]->add_option("--d", f.d_values, "Elongation in units of L0 (repeatable)")
                          ->allow_extra_args(false);
  o["contour"]["resolution"] = apps["contour"]->add_option("--resolution", f.resolution, "Grid points per axis");
  o["contour"]["model-file"] = apps["contour"]->add_option("--model-file", f.model_file, "Model JSON");

  for (const char* name : {"simulate", "relax", "wavespeed"}) {
    CLI::App* sub = apps[name];
    o[name]["protocol"] = sub->add_option("--protocol", f.protocol, "uniaxial | impulse | shear | custom");
    o[name]["dt"] = sub->add_option("--dt", f.dt, "Timestep (default from the model's stiffness)");
    o[name]["rows"] = sub->add_option("--rows", f.rows, "Lattice rows");
    o[name]["cols"] = sub->add_option("--cols", f.cols, "Lattice columns");
    o[name]["model-file"] = sub->add_option("--model-file", f.model_file, "Model JSON (default: oracle)");
    o[name]["strain"] = sub->add_option("--strain", f.strain, "Uniaxial strain");
  }
  for (const char* name : {"simulate", "wavespeed"}) {
    o[name]["duration"] = apps[name]->add_option("--duration", f.duration, "Simulated time");
    o[name]["stride"] = apps[name]->add_option("--stride", f.stride, "Snapshot stride");
  }
  o["wavespeed"]["source-row"] = apps["wavespeed"]->add_option("--source-row", f.source_row, "Excited row");
  o["wavespeed"]["target-row"] = apps["wavespeed"]->add_option("--target-row", f.target_row, "Observed row");
  o["wavespeed"]["threshold"] = apps["wavespeed"]->add_option("--threshold", f.threshold, "Onset fraction of peak");

  o["render"]["state"] = apps["render"]->add_option("--state", f.state, "Snapshot CSV");
  o["render"]["rows"] = apps["render"]->add_option("--rows", f.rows, "Lattice rows");
  o["render"]["cols"] = apps["render"]->add_option("--cols", f.cols, "Lattice columns");

  o["bench"]["sizes"] = apps["bench"]->add_option("--sizes", f.sizes, "Comma list of ROWSxCOLS");
  o["bench"]["steps"] = apps["bench"]->add_option("--steps", f.steps, "Steps per repetition");
  o["bench"]["repetitions"] = apps["bench"]->add_option("--repetitions", f.repetitions, "Timed repetitions (>= 5)");
  o["bench"]["model-file"] = apps["bench"]->add_option("--model-file", f.model_file, "Model JSON (default: oracle)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  auto given = [&](const char* key) {
    auto it = opts[name].find(key);
    return it != opts[name].end() && it->second->count() > 0;
  };

  Context ctx{name, args, {}, {}, {}, out, err};
  try {
    if (given("config")) ctx.config = load_config(f.config_path);
    auto& c = ctx.config;
    if (given("seed")) c.seed = f.seed;
    if (given("threads")) c.threads = f.threads;
    if (given("out")) c.output_dir = f.out_dir;
    else if (const char* env = std::getenv("MGN_OUTPUT_DIR"); env && *env) c.output_dir = env;
    if (c.output_dir.empty()) c.output_dir = "mgn_out";

    if (given("n")) c.data.n = f.n;
    if (given("model")) c.surrogate.model = f.model_kind;
    if (given("preset")) {
      c.surrogate.mlp.preset = f.preset;
      const int epochs = c.surrogate.mlp.settings.epochs, patience = c.surrogate.mlp.settings.patience;
      c.surrogate.mlp.settings = mlp_preset(f.preset);
      c.surrogate.mlp.settings.epochs = epochs;
      c.surrogate.mlp.settings.patience = patience;
    }
    if (given("data")) c.data.path = f.data_path;
    if (given("output")) c.data.path = f.output;
    if (given("model-file")) c.surrogate.model_path = f.model_file;
    if (given("d")) c.contour.d = f.d_values;
    if (given("resolution")) c.contour.resolution = f.resolution;
    if (given("protocol")) c.simulation.protocol = f.protocol;
    if (given("dt")) c.simulation.dt = f.dt;
    if (given("duration")) c.simulation.duration = f.duration;
    if (given("stride")) c.simulation.snapshot_stride = f.stride;
    if (given("strain")) c.simulation.params.strain = f.strain;
    if (given("rows")) c.lattice.rows = f.rows;
    if (given("cols")) c.lattice.cols = f.cols;
    if (given("source-row")) c.wave.source_row = f.source_row;
    if (given("target-row")) c.wave.target_row = f.target_row;
    if (given("threshold")) c.wave.threshold = f.threshold;
    if (given("state")) c.render.state = f.state;
    if (given("sizes")) c.bench.sizes = parse_sizes(f.sizes);
    if (given("steps")) c.bench.steps = f.steps;
    if (given("repetitions")) c.bench.repetitions = f.repetitions;
    // Round-trip through JSON so flag values pass the same validation as files.
    c = config_from_json(config_to_json(c));

    ctx.out_dir = c.output_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) fail(ErrorCode::kIo, "cannot create output directory " + ctx.out_dir.string() + ": " + ec.message());

    int status = 1;
    for (const auto& s : subs) {
      if (name == s.name) status = s.run(ctx, f);
    }
    write_manifest(ctx);
    return status;
  } catch (const Error& e) {
    err << Json{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"subcommand", name}}}}.dump()
        << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << Json{{"error", {{"code", "internal"}, {"message", e.what()}, {"subcommand", name}}}}.dump() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace mgn
