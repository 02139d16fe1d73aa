#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mgn/bench.hpp"
#include "mgn/cli.hpp"
#include "mgn/config.hpp"
#include "mgn/dynamics.hpp"
#include "mgn/error.hpp"
#include "mgn/features.hpp"
#include "mgn/gpr.hpp"
#include "mgn/graph.hpp"
#include "mgn/io.hpp"
#include "mgn/lattice.hpp"
#include "mgn/mlp.hpp"
#include "mgn/pipeline.hpp"
#include "mgn/protocol.hpp"
#include "mgn/surrogate.hpp"
#include "mgn/svg.hpp"

namespace py = pybind11;
using namespace mgn;

namespace {

using Rows2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using Rows3 = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using ModelHandle = std::shared_ptr<EdgeEnergyModel>;

Rows2 to_rows(const std::vector<Vec2>& v) {
  Rows2 out(static_cast<Eigen::Index>(v.size()), 2);
  for (std::size_t i = 0; i < v.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<Vec2> from_rows(const Rows2& m) {
  std::vector<Vec2> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m.row(i);
  return out;
}

std::vector<Vec3> from_rows3(const Rows3& m) {
  std::vector<Vec3> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m.row(i);
  return out;
}

Rows3 to_rows3(const std::vector<Vec3>& v) {
  Rows3 out(static_cast<Eigen::Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

ModelHandle handle(ModelPtr p) { return std::const_pointer_cast<EdgeEnergyModel>(std::move(p)); }

Dataset make_dataset(const Rows3& z, const std::vector<double>& y) {
  Dataset d;
  d.inputs = from_rows3(z);
  d.outputs = y;
  d.provenance = "python";
  d.validate();
  return d;
}

Configuration make_configuration(const Lattice& l, const std::optional<Rows2>& x,
                                 const std::optional<std::vector<double>>& theta) {
  Configuration q = Configuration::reference(l);
  if (x) q.x = from_rows(*x);
  if (theta) q.theta = *theta;
  if (q.x.size() != l.node_count() || q.theta.size() != l.node_count()) {
    fail(ErrorCode::kInvalidArgument, "configuration size does not match the lattice");
  }
  return q;
}

Axis parse_axis(const std::string& a) {
  if (a == "x") return Axis::kX;
  if (a == "y") return Axis::kY;
  fail(ErrorCode::kInvalidArgument, "axis must be 'x' or 'y'");
}

LoadProtocol protocol_for(const Lattice& l, const std::string& kind, const py::dict& kw) {
  ProtocolParams p;
  for (auto [k, v] : kw) {
    const auto key = k.cast<std::string>();
    if (key == "strain") p.strain = v.cast<double>();
    else if (key == "axis") p.axis = parse_axis(v.cast<std::string>());
    else if (key == "ramp_time") p.ramp_time = v.cast<double>();
    else if (key == "impulse_rate") p.impulse_rate = v.cast<double>();
    else if (key == "impulse_duration") p.impulse_duration = v.cast<double>();
    else if (key == "shear_amplitude") p.shear_amplitude = v.cast<double>();
    else if (key == "shear_period") p.shear_period = v.cast<double>();
    else fail(ErrorCode::kInvalidArgument, "unknown protocol parameter '" + key + "'");
  }
  return make_protocol(kind, p, l);
}

InitialConditions initial_conditions(double perturb_position, double perturb_theta,
                                     std::uint64_t seed) {
  InitialConditions ic;
  ic.perturb_position = perturb_position;
  ic.perturb_theta = perturb_theta;
  ic.seed = seed;
  return ic;
}

py::dict state_dict(const std::vector<Vec2>& x, const std::vector<double>& theta,
                    const std::vector<Vec2>& v, const std::vector<double>& omega, long step,
                    double t) {
  py::dict d;
  d["x"] = to_rows(x);
  d["theta"] = theta;
  d["v"] = to_rows(v);
  d["omega"] = omega;
  d["step"] = step;
  d["t"] = t;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mgn, m) {
  m.doc() = "Mechanical graph network lattices with learned edge energies";
  m.attr("__version__") = kVersion;

  static py::exception<Error> exc(m, "MgnError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(exc.ptr(), inst.ptr());
    }
  });

  // lattice
  m.def("base_radius", [](double xi, double phi0, double L0) {
    return base_radius({xi, phi0, L0});
  }, py::arg("xi"), py::arg("phi0") = 0.5, py::arg("L0") = 1.0);
  m.def("pore_radius", [](double xi, double phi0, double L0, double alpha) {
    return pore_radius({xi, phi0, L0}, alpha);
  }, py::arg("xi"), py::arg("phi0"), py::arg("L0"), py::arg("alpha"));
  m.def("validate_pore_shape", [](double xi, double phi0, double L0) {
    const ShapeValidity v = validate_pore_shape({xi, phi0, L0});
    py::dict checks;
    for (const auto& c : v.checks) {
      checks[py::str(c.name)] = py::dict(py::arg("ok") = c.ok, py::arg("margin") = c.margin,
                                         py::arg("worst_alpha") = c.worst_alpha,
                                         py::arg("detail") = c.detail);
    }
    return py::make_tuple(v.valid, checks);
  }, py::arg("xi"), py::arg("phi0") = 0.5, py::arg("L0") = 1.0);

  py::class_<Lattice>(m, "Lattice")
      .def_property_readonly("rows", &Lattice::rows)
      .def_property_readonly("cols", &Lattice::cols)
      .def_property_readonly("L0", &Lattice::L0)
      .def_property_readonly("node_count", &Lattice::node_count)
      .def_property_readonly("edge_count", &Lattice::edge_count)
      .def_property_readonly("ref_positions", [](const Lattice& l) { return to_rows(l.ref_positions()); })
      .def_property_readonly("ref_orientations", &Lattice::ref_orientations)
      .def_property_readonly("masses", &Lattice::masses)
      .def_property_readonly("inertias", &Lattice::inertias)
      .def_property_readonly("edges", [](const Lattice& l) {
        std::vector<std::pair<int, int>> e;
        for (const auto& x : l.edges()) e.emplace_back(x.a, x.b);
        return e;
      })
      .def("node_index", &Lattice::node_index, py::arg("row"), py::arg("col"))
      .def("row_nodes", &Lattice::row_nodes, py::arg("row"))
      .def("col_nodes", &Lattice::col_nodes, py::arg("col"))
      .def("to_json", [](const Lattice& l) { return lattice_to_json(l).dump(); })
      .def_static("from_json", [](const std::string& s) { return lattice_from_json(Json::parse(s)); })
      .def("__repr__", [](const Lattice& l) {
        std::ostringstream o;
        o << "<Lattice " << l.rows() << "x" << l.cols() << ", " << l.edge_count() << " edges>";
        return o.str();
      });

  m.def("build_lattice", [](int rows, int cols, double xi, double phi0, double L0, double density,
                            std::optional<double> inertia) {
    LatticeConfig c;
    c.rows = rows;
    c.cols = cols;
    c.xi = xi;
    c.phi0 = phi0;
    c.L0 = L0;
    c.density = density;
    c.inertia = inertia;
    return make_lattice(c);
  }, py::arg("rows"), py::arg("cols"), py::arg("xi") = 0.0, py::arg("phi0") = 0.5,
     py::arg("L0") = 1.0, py::arg("density") = 1.0, py::arg("inertia") = py::none());
  m.def("full_grid_edge_count", &full_grid_edge_count, py::arg("rows"), py::arg("cols"));
  m.def("apply_defects", [](const Lattice& l, const std::string& defects_json) {
    return apply_defects(l, defects_from_json(Json::parse(defects_json)));
  }, py::arg("lattice"), py::arg("defects_json"),
     "Remove edges; the pattern uses the config file's 'defects' JSON form.");
  m.def("remove_edges", [](const Lattice& l, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Edge> e;
    for (auto [a, b] : edges) e.push_back({a, b});
    return apply_defects(l, DefectPattern::explicit_edges(std::move(e)));
  }, py::arg("lattice"), py::arg("edges"));

  // features
  m.def("wrap_angle", &wrap_angle, py::arg("angle"));
  m.def("edge_features", [](const Vec2& xa, double ta, const Vec2& xb, double tb,
                            const Vec2& xa_ref, double ta_ref, const Vec2& xb_ref, double tb_ref) {
    const EdgeFeatures z = edge_features({xa, ta, xa_ref, ta_ref}, {xb, tb, xb_ref, tb_ref});
    return py::make_tuple(z.theta_a, z.theta_b, z.d);
  }, py::arg("xa"), py::arg("theta_a"), py::arg("xb"), py::arg("theta_b"), py::arg("xa_ref"),
     py::arg("theta_a_ref"), py::arg("xb_ref"), py::arg("theta_b_ref"));
  m.def("edge_feature_jacobian", [](const Vec2& xa, double ta, const Vec2& xb, double tb,
                                    const Vec2& xa_ref, double ta_ref, const Vec2& xb_ref,
                                    double tb_ref) -> Eigen::MatrixXd {
    return edge_feature_jacobian({xa, ta, xa_ref, ta_ref}, {xb, tb, xb_ref, tb_ref});
  }, py::arg("xa"), py::arg("theta_a"), py::arg("xb"), py::arg("theta_b"), py::arg("xa_ref"),
     py::arg("theta_a_ref"), py::arg("xb_ref"), py::arg("theta_b_ref"));

  // models
  py::class_<EdgeEnergyModel, ModelHandle>(m, "EdgeEnergyModel")
      .def_property_readonly("kind", &EdgeEnergyModel::kind)
      .def_property("reference_offset", &EdgeEnergyModel::reference_offset,
                    &EdgeEnergyModel::set_reference_offset)
      .def("energy", [](const EdgeEnergyModel& mdl, const Vec3& z) {
        return mdl.energy(EdgeFeatures::from_vector(z));
      }, py::arg("z"))
      .def("raw_energy", [](const EdgeEnergyModel& mdl, const Vec3& z) {
        return mdl.raw_energy(EdgeFeatures::from_vector(z));
      }, py::arg("z"))
      .def("gradient", [](const EdgeEnergyModel& mdl, const Vec3& z) -> Vec3 {
        return mdl.gradient(EdgeFeatures::from_vector(z));
      }, py::arg("z"))
      .def("energies", [](const EdgeEnergyModel& mdl, const Rows3& z) {
        return predict_all(mdl, from_rows3(z));
      }, py::arg("Z"), "Offset-corrected energies of an (n, 3) feature array.")
      .def("to_json", [](const EdgeEnergyModel& mdl) { return model_to_json(mdl).dump(); })
      .def("save", [](const EdgeEnergyModel& mdl, const std::string& path) { save_model(mdl, path); },
           py::arg("path"));

  py::class_<AnalyticOracle, EdgeEnergyModel, std::shared_ptr<AnalyticOracle>>(m, "AnalyticOracle")
      .def(py::init([](double k_d, double k_s, double k_t, double c_couple, double q4,
                       double d_star) {
        return std::make_shared<AnalyticOracle>(
            AnalyticOracleSpec{k_d, k_s, k_t, c_couple, q4, d_star});
      }), py::arg("k_d") = 1.0, py::arg("k_s") = 0.2, py::arg("k_t") = 0.1,
          py::arg("c_couple") = 0.1, py::arg("q4") = 1.0, py::arg("d_star") = 2.0)
      .def_static("axial", [](double k) {
        return std::make_shared<AnalyticOracle>(AnalyticOracleSpec::axial(k));
      }, py::arg("k_d"))
      .def_property_readonly("spec", [](const AnalyticOracle& o) {
        return oracle_spec_to_json(o.spec()).dump();
      });

  py::class_<GprModel, EdgeEnergyModel, std::shared_ptr<GprModel>>(m, "GprModel")
      .def_property_readonly("hyperparams", [](const GprModel& g) {
        const auto& h = g.hyperparams();
        return py::dict(py::arg("sigma2") = h.sigma2, py::arg("length_scale") = h.length_scale,
                        py::arg("noise2") = h.noise2);
      })
      .def_property_readonly("size", [](const GprModel& g) { return g.outputs().size(); })
      .def_property_readonly("L0", &GprModel::L0)
      .def("predict", [](const GprModel& g, const Vec3& z) {
        const GprPrediction p = g.predict(EdgeFeatures::from_vector(z));
        return py::make_tuple(p.mean, p.variance);
      }, py::arg("z"), "Posterior (mean, variance).");

  py::class_<MlpModel, EdgeEnergyModel, std::shared_ptr<MlpModel>>(m, "MlpModel")
      .def_property_readonly("layer_sizes", &MlpModel::layer_sizes)
      .def_property_readonly("L0", &MlpModel::L0);

  m.def("load_model", [](const std::string& path) { return handle(load_model(path)); },
        py::arg("path"));
  m.def("model_from_json", [](const std::string& s) { return handle(model_from_json(Json::parse(s))); },
        py::arg("text"));

  // data and training
  m.def("sample_features", [](std::size_t n, double L0, std::uint64_t seed) {
    return to_rows3(sample_features(n, L0, seed));
  }, py::arg("n"), py::arg("L0") = 1.0, py::arg("seed") = 0);
  m.def("smse", [](const std::vector<double>& pred, const std::vector<double>& truth,
                   const std::vector<double>& train_outputs) {
    return smse(pred, truth, ScalingBounds::from_outputs(train_outputs));
  }, py::arg("predictions"), py::arg("truths"), py::arg("train_outputs"),
     "SMSE with bounds taken from the training outputs.");
  m.def("scaled_inputs", [](const Rows3& z, double L0) -> Eigen::MatrixXd {
    return scaled_inputs(from_rows3(z), L0);
  }, py::arg("Z"), py::arg("L0") = 1.0);
  m.def("log_marginal_likelihood", [](const Eigen::MatrixXd& Zs, const Eigen::VectorXd& y,
                                      double sigma2, double length_scale, double noise2) {
    const auto r = log_marginal_likelihood(Zs, y, {sigma2, length_scale, noise2});
    return py::make_tuple(r.value, Vec3(r.gradient));
  }, py::arg("Z_scaled"), py::arg("y"), py::arg("sigma2"), py::arg("length_scale"),
     py::arg("noise2"));
  m.def("gpr_fit", [](const Rows3& z, const std::vector<double>& y, double sigma2,
                      double length_scale, double noise2, double L0) {
    return std::make_shared<GprModel>(
        gpr_fit(make_dataset(z, y), {sigma2, length_scale, noise2}, L0));
  }, py::arg("Z"), py::arg("y"), py::arg("sigma2") = 1.0, py::arg("length_scale") = 1.0,
     py::arg("noise2") = 1e-4, py::arg("L0") = 1.0);
  m.def("gpr_optimize", [](const Rows3& z, const std::vector<double>& y, double L0, int restarts,
                           int max_iterations, std::uint64_t seed, int threads) {
    const Eigen::MatrixXd Zs = scaled_inputs(from_rows3(z), L0);
    const Eigen::VectorXd yy = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    GprOptimizeResult r;
    {
      py::gil_scoped_release nogil;
      r = gpr_optimize_hyperparams(Zs, yy, {1.0, 1.0, 1e-4},
                                   {restarts, max_iterations, seed, threads});
    }
    return py::dict(py::arg("sigma2") = r.hyperparams.sigma2,
                    py::arg("length_scale") = r.hyperparams.length_scale,
                    py::arg("noise2") = r.hyperparams.noise2, py::arg("lml") = r.lml,
                    py::arg("initial_lml") = r.initial_lml,
                    py::arg("successful_runs") = r.successful_runs);
  }, py::arg("Z"), py::arg("y"), py::arg("L0") = 1.0, py::arg("restarts") = 8,
     py::arg("max_iterations") = 200, py::arg("seed") = 0, py::arg("threads") = 1);
  m.def("mlp_preset", [](int i) {
    const MlpSettings s = mlp_preset(i);
    return py::dict(py::arg("hidden_layers") = s.hidden_layers, py::arg("width") = s.width,
                    py::arg("learning_rate") = s.learning_rate, py::arg("batch_size") = s.batch_size,
                    py::arg("epochs") = s.epochs, py::arg("patience") = s.patience);
  }, py::arg("index"));
  m.def("train_surrogates", [](const Rows3& z, const std::vector<double>& y, const std::string& which,
                               std::uint64_t seed, std::optional<std::uint64_t> split_seed,
                               double L0, int threads, int gpr_restarts, int gpr_iterations,
                               int mlp_preset_index, std::optional<int> mlp_epochs) {
    const Dataset data = make_dataset(z, y);
    GprConfig g;
    g.restarts = gpr_restarts;
    g.max_iterations = gpr_iterations;
    MlpConfig mc;
    mc.preset = mlp_preset_index;
    mc.settings = mlp_preset(mlp_preset_index);
    if (mlp_epochs) mc.settings.epochs = *mlp_epochs;
    TrainOutcome out;
    {
      py::gil_scoped_release nogil;
      out = train_surrogates(data, which, g, mc, SplitRatios{}, split_seed.value_or(seed), seed,
                             L0, threads);
    }
    py::list cands;
    for (const auto& c : out.candidates) {
      cands.append(py::dict(py::arg("name") = c.name, py::arg("ok") = c.ok,
                            py::arg("error") = c.error, py::arg("train_smse") = c.train_smse,
                            py::arg("validation_smse") = c.validation_smse,
                            py::arg("seconds") = c.seconds));
    }
    return py::dict(py::arg("best") = handle(out.best), py::arg("best_name") = out.best_name,
                    py::arg("candidates") = cands, py::arg("train") = out.split.train,
                    py::arg("validation") = out.split.validation, py::arg("test") = out.split.test);
  }, py::arg("Z"), py::arg("y"), py::arg("which") = "gpr", py::arg("seed") = 0,
     py::arg("split_seed") = py::none(), py::arg("L0") = 1.0, py::arg("threads") = 1,
     py::arg("gpr_restarts") = 8, py::arg("gpr_iterations") = 200, py::arg("mlp_preset") = 1,
     py::arg("mlp_epochs") = py::none());

  // assembly
  m.def("assemble_energy", [](const Lattice& l, const EdgeEnergyModel& mdl,
                              std::optional<Rows2> x, std::optional<std::vector<double>> theta,
                              int threads) {
    const MetamaterialGraph g = assemble_energy(l, make_configuration(l, x, theta), mdl, threads);
    return py::make_tuple(g.global_energy, g.edge_energies);
  }, py::arg("lattice"), py::arg("model"), py::arg("x") = py::none(),
     py::arg("theta") = py::none(), py::arg("threads") = 1,
     "(total energy, per-edge energies); omitted x/theta use the reference state.");
  m.def("assemble_forces", [](const Lattice& l, const EdgeEnergyModel& mdl,
                              std::optional<Rows2> x, std::optional<std::vector<double>> theta,
                              int threads) {
    const GeneralizedForces f =
        assemble_generalized_forces(l, make_configuration(l, x, theta), mdl, threads);
    return py::make_tuple(to_rows(f.force), f.torque, f.energy);
  }, py::arg("lattice"), py::arg("model"), py::arg("x") = py::none(),
     py::arg("theta") = py::none(), py::arg("threads") = 1, "(forces, torques, energy)");
  m.def("calibrate_reference", [](const EdgeEnergyModel& mdl, const Lattice& l) {
    return handle(calibrate_reference(mdl, l));
  }, py::arg("model"), py::arg("lattice"));

  // dynamics
  m.def("estimate_omega_max", &estimate_omega_max, py::arg("model"), py::arg("lattice"));
  m.def("default_timestep", &default_timestep, py::arg("model"), py::arg("lattice"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("dt", &Trajectory::dt)
      .def("__len__", [](const Trajectory& t) { return t.snapshots.size(); })
      .def_property_readonly("snapshots", [](const Trajectory& t) {
        py::list out;
        for (const auto& s : t.snapshots) out.append(state_dict(s.x, s.theta, s.v, s.omega, s.step, s.t));
        return out;
      })
      .def_property_readonly("log", [](const Trajectory& t) {
        py::dict d;
        std::vector<long> step;
        std::vector<double> time, ke, pe, tk;
        for (const auto& e : t.log) {
          step.push_back(e.step);
          time.push_back(e.time);
          ke.push_back(e.kinetic);
          pe.push_back(e.potential);
          tk.push_back(e.tracked_kinetic);
        }
        d["step"] = step;
        d["time"] = time;
        d["kinetic"] = ke;
        d["potential"] = pe;
        d["tracked_kinetic"] = tk;
        return d;
      })
      .def("write", [](const Trajectory& t, const std::string& dir) {
        std::vector<std::string> out;
        for (const auto& p : write_trajectory(t, dir)) out.push_back(p.string());
        return out;
      }, py::arg("directory"));

  m.def("simulate", [](const Lattice& l, ModelHandle mdl, const std::string& protocol,
                       double duration, double dt, int snapshot_stride,
                       std::vector<int> tracked_nodes, double c_v, double c_omega,
                       double perturb_position, double perturb_theta, std::uint64_t seed,
                       int threads, const py::dict& protocol_params) {
    SimConfig c;
    c.lattice = &l;
    c.model = mdl;
    c.protocol = protocol_for(l, protocol, protocol_params);
    c.dt = dt;
    c.duration = duration;
    c.damping = {c_v, c_omega};
    c.snapshot_stride = snapshot_stride;
    c.tracked_nodes = std::move(tracked_nodes);
    c.initial = initial_conditions(perturb_position, perturb_theta, seed);
    c.threads = threads;
    py::gil_scoped_release nogil;
    return simulate(c);
  }, py::arg("lattice"), py::arg("model"), py::arg("protocol") = "none",
     py::arg("duration") = 0.0, py::arg("dt") = 0.0, py::arg("snapshot_stride") = 1,
     py::arg("tracked_nodes") = std::vector<int>{}, py::arg("c_v") = 0.0,
     py::arg("c_omega") = 0.0, py::arg("perturb_position") = 0.0,
     py::arg("perturb_theta") = 0.0, py::arg("seed") = 0, py::arg("threads") = 1,
     py::arg("protocol_params") = py::dict());

  m.def("quasi_static_relax", [](const Lattice& l, const EdgeEnergyModel& mdl,
                                 const std::string& protocol, double tol_force, long max_steps,
                                 double perturb_position, double perturb_theta,
                                 std::uint64_t seed, int threads, const py::dict& protocol_params) {
    const LoadProtocol p = protocol_for(l, protocol, protocol_params);
    RelaxOptions o;
    o.tol_force = tol_force;
    o.max_steps = max_steps;
    o.threads = threads;
    o.initial = initial_conditions(perturb_position, perturb_theta, seed);
    RelaxResult r;
    {
      py::gil_scoped_release nogil;
      r = quasi_static_relax(l, mdl, p, o);
    }
    py::dict d = state_dict(r.state.x, r.state.theta, r.state.v, r.state.omega, r.state.step,
                            r.state.t);
    d["residual_force"] = r.residual_force;
    d["steps"] = r.steps;
    return d;
  }, py::arg("lattice"), py::arg("model"), py::arg("protocol") = "uniaxial",
     py::arg("tol_force") = -1.0, py::arg("max_steps") = 2'000'000,
     py::arg("perturb_position") = 0.0, py::arg("perturb_theta") = 0.0, py::arg("seed") = 0,
     py::arg("threads") = 1, py::arg("protocol_params") = py::dict());

  m.def("measure_wave_speed", [](const Trajectory& t, const Lattice& l, int source_row,
                                 int target_row, double threshold) {
    const WaveSpeed w = measure_wave_speed(t, l, source_row, target_row, threshold);
    return py::dict(py::arg("speed") = w.speed, py::arg("start_time") = w.start_time,
                    py::arg("arrival_time") = w.arrival_time, py::arg("distance") = w.distance);
  }, py::arg("trajectory"), py::arg("lattice"), py::arg("source_row"), py::arg("target_row"),
     py::arg("threshold") = 0.01);

  // analysis and output
  m.def("energy_contour", [](const EdgeEnergyModel& mdl, double d, int resolution) {
    const ContourGrid g = energy_contour(mdl, d, resolution);
    Eigen::MatrixXd e(resolution, resolution);
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) e(j, i) = g.energy[static_cast<std::size_t>(j * resolution + i)];
    return py::make_tuple(g.axis, e, g.minima);
  }, py::arg("model"), py::arg("d"), py::arg("resolution") = 101,
     "(axis, energy[j, i] at (axis[i], axis[j]), local minima count)");
  m.def("render_svg", [](const Lattice& l, std::optional<Rows2> x,
                         std::optional<std::vector<double>> theta) {
    const Configuration q = make_configuration(l, x, theta);
    return render_svg(q.x, q.theta, l);
  }, py::arg("lattice"), py::arg("x") = py::none(), py::arg("theta") = py::none());
  m.def("bench_scaling", [](const std::vector<std::pair<int, int>>& sizes,
                            const EdgeEnergyModel& mdl, int steps, int repetitions, int threads) {
    BenchOptions o;
    o.steps = steps;
    o.repetitions = repetitions;
    o.threads = threads;
    LatticeSpec base;
    BenchReport r;
    {
      py::gil_scoped_release nogil;
      r = bench_scaling(sizes, mdl, base, o);
    }
    py::list out;
    for (const auto& e : r.entries) {
      out.append(py::dict(py::arg("rows") = e.rows, py::arg("cols") = e.cols,
                          py::arg("edges") = e.edges,
                          py::arg("mean_step_seconds") = e.mean_step_seconds,
                          py::arg("error") = e.error));
    }
    return out;
  }, py::arg("sizes"), py::arg("model"), py::arg("steps") = 10, py::arg("repetitions") = 5,
     py::arg("threads") = 1);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release nogil;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run the command-line tool in process: (exit code, stdout, stderr).");
}
