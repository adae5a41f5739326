// Command-line front end: one subcommand per experiment, each writing its
// tables and a manifest into the output directory.
#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "chargedrop/analysis.hpp"
#include "chargedrop/error.hpp"
#include "chargedrop/experiments.hpp"
#include "chargedrop/io.hpp"
#include "chargedrop/optimizer.hpp"
#include "chargedrop/parallel.hpp"
#include "chargedrop/smoothing.hpp"
#include "chargedrop/stability.hpp"
#include "chargedrop/surface_geometry.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace chargedrop;

namespace {

struct Common {
  std::optional<double> alpha;
  double eta = 0.0;
  double charge = 0.0;
  double lambda = 0.0;
  std::optional<double> penalty;
  std::optional<int> band_limit;
  std::size_t panels = 2048;
  std::size_t cells = 2000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out;
};

class Run {
 public:
  Run(std::string command, const Common& c, const std::vector<std::string>& argv) : command_(std::move(command)), c_(c), argv_(argv) {
    dir_ = c.out;
    if (dir_.empty()) {
      const char* env = std::getenv("CHARGEDROP_OUT");
      dir_ = (env != nullptr && *env != '\0') ? fs::path(env) : fs::path("chargedrop-out");
    }
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCategory::io_error, "cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    io::save_text((dir_ / name).string(), content);
    files_.push_back(name);
  }

  void set_seed(std::uint64_t seed) { c_.seed = seed; }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish(const json& summary) {
    json m;
    m["command"] = command_;
    m["arguments"] = argv_;
    m["seed"] = c_.seed;
    m["threads"] = c_.threads;
    m["versions"] = {{"chargedrop", CHARGEDROP_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION},
                     {"compiler", __VERSION__}};
    m["files"] = files_;
    write(command_ + ".manifest.json", m.dump(2) + "\n");
    std::cout << summary.dump(2) << std::endl;
  }

 private:
  std::string command_;
  Common c_;
  std::vector<std::string> argv_;
  fs::path dir_;
  std::vector<std::string> files_;
};

energy::ModelParams params_for(const Common& c, int dimension) {
  energy::ModelParams p;
  p.dimension = dimension;
  p.alpha = c.alpha.value_or(dimension == 3 ? 2.0 : 1.0);
  p.eta = c.eta;
  p.charge = c.charge;
  p.lambda = c.lambda;
  p.penalty = c.penalty.value_or(energy::default_penalty(c.charge));
  p.validate();
  return p;
}

energy::CapacityDiscretization discretization_for(const Common& c) {
  energy::CapacityDiscretization d;
  d.panels = c.panels;
  d.cells = c.cells;
  return d;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    v.push_back(io::parse_double(item, what));
  }
  if (v.empty()) fail(ErrorCategory::invalid_argument, std::string(what) + ": empty list");
  return v;
}

std::string csv_text(const std::function<void(std::ostream&)>& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

// ---------------------------------------------------------------- commands

void cmd_energy(Run& run, const Common& c, const std::string& path, bool solve) {
  const auto kind = io::detect_kind(path);
  energy::EnergyBreakdown b;
  json extra = json::object();
  auto disc = discretization_for(c);
  disc.always_solve = solve;
  energy::ModelParams p;
  if (kind == io::ShapeKind::field) {
    const auto f = io::load_field(path);
    p = params_for(c, 3);
    b = energy::evaluate(f.phi, f.radius, p, disc);
    const auto geom = sphere::surface_from_field(f.phi, f.radius);
    extra["gauss_bonnet_defect"] = sphere::gauss_bonnet_defect(geom);
    extra["relation_residual"] = energy::relation_residual(b);
  } else if (kind == io::ShapeKind::curve) {
    const auto shape = io::load_curve(path);
    p = params_for(c, 2);
    b = energy::evaluate(shape, p, disc);
  } else {
    fail(ErrorCategory::parse_error, path + ":1: not a field or curve file");
  }
  const auto guard = energy::sphere_type_guard(b);
  json j = {{"shape", path}, {"params", io::to_json(p)}, {"breakdown", io::to_json(b)},
            {"guard", {{"warning", guard.warning}, {"message", guard.message}}}};
  j.update(extra);
  run.write_json("energy.json", j);
  run.write("energy.csv", std::string(io::kBreakdownSchema) + "\n" + io::breakdown_csv_header() + "\n" +
                              io::breakdown_csv_row(b) + "\n");
  run.finish(j);
}

void cmd_capacity(Run& run, const Common& c, const std::string& path, double scale) {
  auto set = io::load_set(path);
  if (scale != 1.0) set = capacity::dilated(set, scale);
  const capacity::RieszKernelSpec spec{set.dimension, c.alpha.value_or(set.dimension == 3 ? 2.0 : 1.0), c.eta};
  const auto mu = capacity::equilibrium_measure(set, spec);
  run.write_json("charges.json", io::to_json(mu));
  json j = {{"set", path},
            {"scale", scale},
            {"elements", set.size()},
            {"spec", io::to_json(spec)},
            {"value", mu.value},
            {"capacity", 1.0 / mu.value},
            {"iterations", mu.iterations},
            {"relative_residual", mu.relative_residual},
            {"validated_regime", mu.validated_regime}};
  run.write_json("capacity.json", j);
  run.finish(j);
}

void cmd_minimize(Run& run, const Common& c, const std::string& path, const CLI::App& sub) {
  const json cfg_json = [&] {
    try {
      return json::parse(io::load_text(path));
    } catch (const json::parse_error& e) {
      fail(ErrorCategory::parse_error, path + ": " + e.what());
    }
  }();
  auto cfg = io::config_from_json(cfg_json);
  // Flags given explicitly override the file.
  if (sub.count("--alpha") > 0) cfg.params.alpha = *c.alpha;
  if (sub.count("--eta") > 0) cfg.params.eta = c.eta;
  if (sub.count("--charge") > 0) cfg.params.charge = c.charge;
  if (sub.count("--lambda-perimeter") > 0) cfg.params.lambda = c.lambda;
  if (sub.count("--penalty") > 0) cfg.params.penalty = *c.penalty;
  else if (sub.count("--charge") > 0) cfg.params.penalty = energy::default_penalty(c.charge);
  if (sub.count("--band-limit") > 0) cfg.band_limit = *c.band_limit;
  if (sub.count("--panels") > 0) cfg.capacity.panels = c.panels;
  if (sub.count("--cells") > 0) cfg.capacity.cells = c.cells;
  if (sub.count("--seed") > 0) cfg.seed = c.seed;
  cfg.validate();
  run.set_seed(cfg.seed);

  const json initial = cfg_json.value("initial", json{{"kind", "random"}});
  const std::string kind = initial.value("kind", "random");
  const double size = initial.value("size", 0.2);
  const int max_degree = initial.value("max_degree", 4);
  json summary;
  optimize::TrajectoryRecord traj;
  if (cfg.params.dimension == 3) {
    const optimize::Shape3D start = [&]() -> optimize::Shape3D {
      if (kind == "random") return optimize::random_initial_shape(cfg, size, max_degree);
      if (kind == "ball")
        return {sphere::SphereField(sphere::SphereGrid::create(cfg.band_limit, cfg.grid_oversample)),
                std::cbrt(3.0 * cfg.params.target() / (4.0 * M_PI))};
      if (kind == "file") {
        const auto f = io::load_field(initial.at("path").get<std::string>());
        return {f.phi, f.radius};
      }
      fail(ErrorCategory::parse_error, path + ": initial.kind must be random, ball or file");
    }();
    const auto r = optimize::minimize(start, cfg);
    traj = r.trajectory;
    run.write("final_shape.txt", csv_text([&](std::ostream& o) { io::write_field(o, r.shape.phi, r.shape.radius); }));
  } else {
    curve::CurveShape start;
    if (kind == "random") {
      start = optimize::random_initial_curve(cfg, size, max_degree);
    } else if (kind == "ball") {
      start = curve::CurveShape(cfg.band_limit, cfg.curve_samples, std::sqrt(cfg.params.target() / M_PI));
    } else if (kind == "file") {
      start = io::load_curve(initial.at("path").get<std::string>());
    } else {
      fail(ErrorCategory::parse_error, path + ": initial.kind must be random, ball or file");
    }
    const auto r = optimize::minimize(start, cfg);
    traj = r.trajectory;
    run.write("final_shape.txt", csv_text([&](std::ostream& o) { io::write_curve(o, r.shape); }));
  }
  run.write("trajectory.csv", csv_text([&](std::ostream& o) { io::write_trajectory_csv(o, traj); }));
  summary = {{"config", io::to_json(cfg)},
             {"initial", initial},
             {"status", optimize::status_name(traj.status)},
             {"accepted_steps", traj.accepted_steps},
             {"final_objective", traj.final_objective},
             {"distance_to_ball", traj.distance_to_ball},
             {"seed", traj.seed},
             {"final_breakdown", io::to_json(traj.iterations.back().breakdown)}};
  run.write_json("minimize.json", summary);
  run.finish(summary);
}

stability::HessianOptions hessian_options(const Common& c, int max_degree, double step, bool all_orders) {
  stability::HessianOptions o;
  o.max_degree = max_degree;
  o.step = step;
  o.zonal_only = !all_orders;
  o.capacity.panels = c.panels;
  o.capacity.cells = c.cells;
  return o;
}

void cmd_hessian(Run& run, const Common& c, int dimension, int max_degree, double step, bool all_orders) {
  const auto p = params_for(c, dimension);
  const auto r = stability::hessian_at_ball(p, hessian_options(c, max_degree, step, all_orders));
  run.write("hessian.csv", csv_text([&](std::ostream& o) { io::write_hessian_csv(o, r); }));
  json modes = json::array();
  for (const auto& m : r.modes) {
    modes.push_back({{"degree", m.degree}, {"order", m.order}, {"geometric", m.geometric},
                     {"capacity", m.capacity}, {"eigenvalue", m.eigenvalue(p, p.charge)},
                     {"consistent", m.consistent}});
  }
  json j = {{"params", io::to_json(p)},
            {"step", r.step},
            {"consistent", r.consistent},
            {"critical_charge", r.critical_charge},
            {"critical_degree", r.critical_degree},
            {"modes", modes}};
  run.write_json("hessian.json", j);
  j.erase("modes");
  run.finish(j);
}

void cmd_sweep(Run& run, const Common& c, int dimension, const std::string& masses, int max_degree, double step) {
  const auto p = params_for(c, dimension);
  const auto s = stability::threshold_sweep(p, parse_list(masses, "--masses"), hessian_options(c, max_degree, step, false));
  run.write("sweep.csv", csv_text([&](std::ostream& o) { io::write_sweep_csv(o, s); }));
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back({{"mass", r.mass}, {"critical_charge", r.critical_charge}, {"critical_degree", r.critical_degree}});
  json j = {{"params", io::to_json(p)}, {"slope", s.slope}, {"intercept", s.intercept}, {"rows", rows}};
  run.write_json("sweep.json", j);
  run.finish(j);
}

void cmd_smooth(Run& run, const Common& c, const std::string& map_path, std::size_t inputs, const std::string& eps_list,
                bool write_maps) {
  const auto eps = parse_list(eps_list, "--eps");
  std::vector<smoothing::ParametrizedMap> maps;
  if (!map_path.empty()) {
    maps.push_back(io::load_map(map_path));
  } else {
    const auto grid = sphere::SphereGrid::create(c.band_limit.value_or(16), 1);
    maps = smoothing::admissible_inputs(grid, inputs, c.seed);
  }
  std::ostringstream csv;
  csv << io::kSmoothingSchema << "\ninput,eps,min_wedge,max_gradient,w22_distance,resolution_difference,resolution_ok,bounds_hold\n";
  bool all_hold = true, all_monotone = true;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    double previous = std::numeric_limits<double>::infinity();
    auto sorted = eps;
    std::sort(sorted.rbegin(), sorted.rend());
    for (double e : sorted) {
      const auto r = smoothing::mollify(maps[i], e);
      const auto b = smoothing::wedge_and_grad_bounds(r.map);
      const double d = smoothing::sobolev_distance(r.map, maps[i]);
      const bool hold = b.min_wedge >= smoothing::kMinWedge && b.max_gradient <= smoothing::kMaxGradient;
      all_hold = all_hold && hold;
      all_monotone = all_monotone && d < previous;
      previous = d;
      csv << i << ',' << io::format_double(e) << ',' << io::format_double(b.min_wedge) << ','
          << io::format_double(b.max_gradient) << ',' << io::format_double(d) << ','
          << io::format_double(r.resolution_difference) << ',' << (r.resolution_ok ? 1 : 0) << ',' << (hold ? 1 : 0)
          << '\n';
      if (write_maps) {
        std::ostringstream name;
        name << "map_" << i << "_eps_" << io::format_double(e) << ".txt";
        run.write(name.str(), csv_text([&](std::ostream& o) { io::write_map(o, r.map); }));
      }
    }
  }
  run.write("smoothing.csv", csv.str());
  json j = {{"inputs", maps.size()}, {"eps", eps}, {"bounds_hold", all_hold}, {"distance_monotone", all_monotone}};
  run.write_json("smooth.json", j);
  run.finish(j);
}

void cmd_decay(Run& run, const Common& c, double theta, double gamma, double delta, double lambda, double r0,
               int samples, std::size_t random_draws) {
  const auto d = analysis::decay_exponent(theta, gamma, delta);
  const auto hyp = analysis::saturated_hypothesis(theta, gamma, delta, lambda, r0, 1.0, samples);
  const auto check = analysis::verify_decay(hyp, d.beta, d.C, samples);
  std::size_t failures = 0;
  std::mt19937_64 rng(c.seed);
  for (std::size_t i = 0; i < random_draws; ++i) {
    const auto h = analysis::random_hypothesis(rng, samples);
    const auto k = analysis::decay_exponent(h.theta, h.gamma, h.delta);
    const auto v = analysis::verify_decay(h, k.beta, k.C, samples);
    if (!v.hypothesis_holds || !v.conclusion_holds || !(h.gamma < std::pow(h.theta, k.beta))) ++failures;
  }
  std::ostringstream csv;
  csv << io::kDecaySchema << "\nk,radius,psi,bound\n";
  const double scale = hyp.psi(r0) + lambda * std::pow(r0, d.beta);
  for (int k = 0; k <= samples; ++k) {
    const double r = r0 * std::pow(theta, k);
    csv << k << ',' << io::format_double(r) << ',' << io::format_double(hyp.psi(r)) << ','
        << io::format_double(d.C * std::pow(r / r0, d.beta) * scale) << '\n';
  }
  run.write("decay.csv", csv.str());
  json j = {{"theta", theta}, {"gamma", gamma}, {"delta", delta}, {"beta", d.beta}, {"C", d.C},
            {"gamma_below_theta_beta", gamma < std::pow(theta, d.beta)},
            {"saturated_conclusion_holds", check.conclusion_holds}, {"max_violation", check.max_violation},
            {"random_draws", random_draws}, {"random_failures", failures}};
  run.write_json("decay.json", j);
  run.finish(j);
}

void cmd_compare_reg(Run& run, const Common& c, const std::string& rhos) {
  experiments::BumpOptions o;
  o.alpha = c.alpha.value_or(2.0);
  o.eta = c.eta;
  o.charge = c.charge;
  const auto s = experiments::bump_study(parse_list(rhos, "--rhos"), o);
  std::ostringstream csv;
  csv << io::kBumpSchema << "\nrho,panels,willmore_increase,capacity_decrease,capacitary_gain,net_change,volume_change,"
                            "log_rho,log_willmore_increase,log_capacity_decrease\n";
  json rows = json::array();
  bool net_positive = true;
  for (const auto& r : s.records) {
    csv << io::format_double(r.rho) << ',' << r.panels << ',' << io::format_double(r.willmore_increase) << ','
        << io::format_double(r.capacity_decrease) << ',' << io::format_double(r.capacitary_gain) << ','
        << io::format_double(r.net_change) << ',' << io::format_double(r.volume_change) << ','
        << io::format_double(std::log(r.rho)) << ',' << io::format_double(std::log(r.willmore_increase)) << ','
        << io::format_double(std::log(r.capacity_decrease)) << '\n';
    rows.push_back({{"rho", r.rho}, {"willmore_increase", r.willmore_increase},
                    {"capacity_decrease", r.capacity_decrease}, {"net_change", r.net_change}});
    net_positive = net_positive && r.net_change > 0.0;
  }
  run.write("bump.csv", csv.str());
  json j = {{"alpha", o.alpha}, {"charge", o.charge}, {"capacity_slope", s.capacity_slope},
            {"willmore_slope", s.willmore_slope}, {"net_change_positive", net_positive}, {"rows", rows}};
  run.write_json("compare_reg.json", j);
  run.finish(j);
}

void cmd_harness(Run& run, const Common& c, const std::string& family, const std::string& amplitudes) {
  const auto t = parse_list(amplitudes, "--amplitudes");
  analysis::HarnessOptions o;
  o.capacity.panels = c.panels;
  o.capacity.cells = c.cells;
  analysis::StabilitySummary s;
  if (family == "y20") {
    s = analysis::stability_ratio_harness(family, t, analysis::harmonic_family(c.band_limit.value_or(8), 2, 0, t),
                                          c.alpha.value_or(2.0), o);
  } else if (family == "cos2") {
    s = analysis::stability_ratio_harness(family, t, analysis::cosine_family(2, t), c.alpha.value_or(1.0), o);
  } else {
    fail(ErrorCategory::invalid_argument, "--family must be y20 or cos2");
  }
  run.write("harness.csv", csv_text([&](std::ostream& o2) { io::write_harness_csv(o2, s); }));
  json j = {{"family", family}, {"all_nonnegative", s.all_nonnegative}, {"spread", s.spread()},
            {"max_perimeter_over_willmore", s.max_perimeter_over_willmore},
            {"max_capacity_over_perimeter", s.max_capacity_over_perimeter}};
  run.write_json("harness.json", j);
  run.finish(j);
}

void print_error(ErrorCategory cat, const std::string& message) {
  std::cerr << json{{"error", {{"category", std::string(category_name(cat))}, {"message", message}}}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chargedrop: charged drops with bending energy"};
  app.require_subcommand(1);
  Common c;
  const std::vector<std::string> args(argv + 1, argv + argc);

  auto add_common = [&](CLI::App* s) {
    s->add_option("--alpha", c.alpha, "Riesz exponent alpha (kernel |x-y|^-(d-alpha))");
    s->add_option("--eta", c.eta, "L2 regularization weight eta in [0, 1]");
    s->add_option("--charge", c.charge, "charge Q");
    s->add_option("--lambda-perimeter", c.lambda, "perimeter weight lambda");
    s->add_option("--penalty", c.penalty, "volume penalty weight (default 10 Q^2)");
    s->add_option("--band-limit", c.band_limit, "harmonic band limit / highest mode");
    s->add_option("--panels", c.panels, "boundary panels for 3D capacity");
    s->add_option("--cells", c.cells, "volumetric cells for 2D or eta > 0 capacity");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--threads", c.threads, "worker threads (1 is bit-reproducible; 0 = all cores)");
    s->add_option("--out", c.out, "output directory (default $CHARGEDROP_OUT or ./chargedrop-out)");
  };

  std::string shape_path, set_path, config_path, map_path;
  bool solve = false, all_orders = false, write_maps = false;
  double scale = 1.0, step = 0.01, theta = 0.5, gamma = 0.5, delta = 1.0, lam = 1.0, r0 = 1.0;
  int dimension = 3, max_degree = 8, samples = 100;
  std::size_t inputs = 20, draws = 0;
  std::string masses = "0.5,1,2,4,8", eps = "0.2,0.1,0.05", rhos = "0.2,0.1,0.05", family = "y20",
              amplitudes = "0.02,0.04,0.06,0.08,0.1";

  auto* energy_cmd = app.add_subcommand("energy", "evaluate all energies of a field or curve file");
  energy_cmd->add_option("shape", shape_path, "shape file")->required();
  energy_cmd->add_flag("--solve-capacity", solve, "solve the capacity problem even when Q = 0");
  add_common(energy_cmd);

  auto* cap_cmd = app.add_subcommand("capacity", "equilibrium measure and capacity of a discretized set");
  cap_cmd->add_option("set", set_path, "discretized-set file")->required();
  cap_cmd->add_option("--scale", scale, "dilate the set by this factor first");
  add_common(cap_cmd);

  auto* min_cmd = app.add_subcommand("minimize", "minimize the relaxed (3D) or full (2D) energy");
  min_cmd->add_option("config", config_path, "JSON configuration")->required();
  add_common(min_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "instability threshold of the ball against its volume");
  sweep_cmd->add_option("--dimension", dimension)->check(CLI::IsMember({2, 3}));
  sweep_cmd->add_option("--masses", masses, "comma-separated volumes (areas in 2D)");
  sweep_cmd->add_option("--max-degree", max_degree);
  sweep_cmd->add_option("--step", step, "differencing amplitude");
  add_common(sweep_cmd);

  auto* hess_cmd = app.add_subcommand("hessian", "second variation of the energy at the ball, per mode");
  hess_cmd->add_option("--dimension", dimension)->check(CLI::IsMember({2, 3}));
  hess_cmd->add_option("--max-degree", max_degree);
  hess_cmd->add_option("--step", step, "differencing amplitude");
  hess_cmd->add_flag("--all-orders", all_orders, "every order m (3D) or both cos/sin (2D), not only zonal modes");
  add_common(hess_cmd);

  auto* smooth_cmd = app.add_subcommand("smooth", "mollify sphere maps and check the immersion bounds");
  smooth_cmd->add_option("--map", map_path, "map file (default: generated admissible inputs)");
  smooth_cmd->add_option("--inputs", inputs, "number of generated inputs");
  smooth_cmd->add_option("--eps", eps, "comma-separated mollification radii");
  smooth_cmd->add_flag("--write-maps", write_maps, "write every mollified map");
  add_common(smooth_cmd);

  auto* decay_cmd = app.add_subcommand("decay", "exponent and constant of the decay iteration");
  decay_cmd->add_option("--theta", theta);
  decay_cmd->add_option("--gamma", gamma);
  decay_cmd->add_option("--delta", delta);
  decay_cmd->add_option("--lambda", lam);
  decay_cmd->add_option("--r0", r0);
  decay_cmd->add_option("--samples", samples);
  decay_cmd->add_option("--random", draws, "also verify this many random hypothesis-satisfying instances");
  add_common(decay_cmd);

  auto* reg_cmd = app.add_subcommand("compare-reg", "bending cost against capacity gain of shrinking bumps");
  reg_cmd->add_option("--rhos", rhos, "comma-separated bump scales");
  add_common(reg_cmd);

  auto* harness_cmd = app.add_subcommand("harness", "deficit ratios along a one-parameter family");
  harness_cmd->add_option("--family", family, "y20 (3D) or cos2 (2D)");
  harness_cmd->add_option("--amplitudes", amplitudes);
  add_common(harness_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    print_error(ErrorCategory::invalid_argument, e.what());
    return exit_code(ErrorCategory::invalid_argument);
  }

  try {
    set_thread_count(c.threads);
    auto* sub = app.get_subcommands().front();
    Run run(sub->get_name(), c, args);
    if (sub == energy_cmd) cmd_energy(run, c, shape_path, solve);
    else if (sub == cap_cmd) cmd_capacity(run, c, set_path, scale);
    else if (sub == min_cmd) cmd_minimize(run, c, config_path, *min_cmd);
    else if (sub == sweep_cmd) cmd_sweep(run, c, dimension, masses, max_degree, step);
    else if (sub == hess_cmd) cmd_hessian(run, c, dimension, max_degree, step, all_orders);
    else if (sub == smooth_cmd) cmd_smooth(run, c, map_path, inputs, eps, write_maps);
    else if (sub == decay_cmd) cmd_decay(run, c, theta, gamma, delta, lam, r0, samples, draws);
    else if (sub == reg_cmd) cmd_compare_reg(run, c, rhos);
    else if (sub == harness_cmd) cmd_harness(run, c, family, amplitudes);
  } catch (const Error& e) {
    print_error(e.category(), e.what());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"category", "internal"}, {"message", e.what()}}}}.dump() << std::endl;
    return 1;
  }
  return 0;
}
