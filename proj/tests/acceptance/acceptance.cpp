// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are fixed here; a criterion passes only if its checks hold and it
// finishes inside its budget.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "chargedrop/analysis.hpp"
#include "chargedrop/experiments.hpp"
#include "chargedrop/io.hpp"
#include "chargedrop/optimizer.hpp"
#include "chargedrop/parallel.hpp"
#include "chargedrop/set_builders.hpp"
#include "chargedrop/smoothing.hpp"
#include "chargedrop/stability.hpp"
#include "chargedrop/surface_geometry.hpp"
#include "riesz_oracle.hpp"

namespace fs = std::filesystem;
using namespace chargedrop;

namespace {

struct Context {
  std::string cli;
  fs::path scratch;
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a check; failed checks are marked in the detail text.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.str().empty()) detail << "; ";
    detail << (ok ? "" : "FAILED ") << what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

capacity::DiscretizedSet unit_sphere_panels(std::size_t n) {
  return capacity::boundary_panels(capacity::ring_partition(n), capacity::zonal_surface([](double, double& R, double& dR) {
                                     R = 1.0;
                                     dR = 0.0;
                                   }));
}

double energy_of(const capacity::DiscretizedSet& set, const capacity::RieszKernelSpec& spec) {
  return capacity::equilibrium_measure(set, spec).value;
}

// ------------------------------------------------------------------ criteria

void sphere_identities(const Context&, Outcome& out) {
  const auto g = sphere::SphereGrid::create(32);
  const auto geo = sphere::surface_from_field(sphere::SphereField(g), 1.0);
  const auto b = sphere::bending_energies(geo);
  double worst = 0;
  worst = std::max(worst, rel(0.25 * b.mean_sq, 4.0 * M_PI));
  worst = std::max(worst, rel(b.second_form_sq, 8.0 * M_PI));
  worst = std::max(worst, rel(0.25 * b.second_form_sq, 2.0 * M_PI));
  worst = std::max(worst, rel(sphere::area(geo), 4.0 * M_PI));
  worst = std::max(worst, rel(sphere::volume(geo), 4.0 * M_PI / 3.0));
  out.check(worst < 1e-8, "max relative error " + fmt("%.2e", worst) + " < 1e-8 at L = 32");
}

void gauss_bonnet(const Context&, Outcome& out) {
  const auto g = sphere::SphereGrid::create(32);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> size(0.01, 0.3);
  double worst = 0, largest = 0;
  for (int t = 0; t < 100; ++t) {
    sphere::RandomFieldOptions o;
    o.max_degree = 32;
    o.target = size(rng);
    const auto phi = sphere::random_field(g, rng, o);
    largest = std::max(largest, phi.sup_norm());
    const auto b = sphere::bending_energies(sphere::surface_from_field(phi, 1.0));
    worst = std::max(worst, std::abs(0.25 * b.mean_sq - 0.25 * b.second_form_sq - 2.0 * M_PI));
  }
  out.check(largest <= 0.3, "100 fields with sup norm <= " + fmt("%.3f", largest));
  out.check(worst < 1e-8, "max |W - (1/4) int |A|^2 - 2 pi| = " + fmt("%.2e", worst) + " < 1e-8");
}

void capacity_oracle(const Context&, Outcome& out) {
  const double i2048 = energy_of(unit_sphere_panels(2048), {3, 2.0, 0.0});
  const double i8192 = energy_of(unit_sphere_panels(8192), {3, 2.0, 0.0});
  const double e2048 = i2048 - 1.0, e8192 = i8192 - 1.0;
  // Panel width h ~ n^(-1/2), so the two runs differ by a factor 2 in h; the
  // first-order extrapolation is 2 I(h/2) - I(h).
  const double extrapolated = 2.0 * i8192 - i2048;
  out.check(std::abs(e2048) < 0.01, "I_2 at 2048 panels " + fmt("%.8f", i2048) + " within 1%");
  out.check(std::abs(e8192) < 0.0025, "at 8192 panels " + fmt("%.8f", i8192) + " within 0.25%");
  out.check(std::abs(e8192) < std::abs(e2048) && std::abs(extrapolated - 1.0) < std::abs(e8192),
            "refinement trend: errors " + fmt("%.2e", e2048) + " -> " + fmt("%.2e", e8192) + " -> extrapolated " +
                fmt("%.2e", extrapolated - 1.0));
  const double exact = oracle::uniform_sphere_energy(0.5);
  const double i52 = energy_of(unit_sphere_panels(2048), {3, 2.5, 0.0});
  out.check(rel(i52, exact) < 0.01,
            "I_5/2 " + fmt("%.7f", i52) + " vs 1D integral " + fmt("%.7f", exact) + " within 1%");
}

void scaling_laws(const Context&, Outcome& out) {
  struct Case {
    std::string name;
    capacity::DiscretizedSet set;
    int dimension;
    std::vector<double> alphas;
  };
  const curve::CurveShape disk(4, 64, 1.0);
  const auto wavy = curve::CurveShape::from_coefficients({0, 0, 0.1, 0, 0.02}, {0, 0, 0, 0.04, 0}, 1.0, 256);
  const auto g = sphere::SphereGrid::create(8);
  const auto blob = sphere::SphereField::from_function(g, [](const sphere::Vec3& x) { return 0.1 * x.z() * x.z(); });
  const std::vector<Case> identity_cases{
      {"sphere panels", unit_sphere_panels(512), 3, {2.0, 2.5}},
      {"blob panels", capacity::field_boundary_panels(blob, 1.0, 512), 3, {2.0, 2.7}},
      {"disk cells", capacity::disk_cells(disk, 600), 2, {0.5, 1.0, 1.5}},
  };
  double worst = 0;
  for (const auto& c : identity_cases)
    for (double a : c.alphas) {
      const capacity::RieszKernelSpec spec{c.dimension, a, 0.0};
      const double base = energy_of(c.set, spec);
      for (double lambda : {0.5, 1.7, 3.0}) {
        const auto s = capacity::scaling_check(c.set, spec, lambda);
        worst = std::max(worst, std::abs(s.lhs / (s.equality_factor * base) - 1.0));
      }
    }
  out.check(worst < 1e-10, "eta = 0 dilation identity, max relative defect " + fmt("%.1e", worst) + " < 1e-10");

  const std::vector<Case> inequality_cases{
      {"ball cells", capacity::field_volume_cells(sphere::SphereField(g), 1.0, 800), 3, {1.0, 2.0}},
      {"blob cells", capacity::field_volume_cells(blob, 1.0, 800), 3, {2.0}},
      {"disk cells", capacity::disk_cells(disk, 600), 2, {0.5, 1.5}},
      {"wavy cells", capacity::disk_cells(wavy, 600), 2, {1.0}},
  };
  std::size_t checked = 0, held = 0;
  double tightest = INFINITY;
  for (const auto& c : inequality_cases)
    for (double a : c.alphas)
      for (double eta : {0.25, 1.0})
        for (double lambda : {0.5, 0.8, 1.25, 2.0}) {
          const auto s = capacity::scaling_check(c.set, {c.dimension, a, eta}, lambda);
          ++checked;
          if (s.lhs <= s.rhs * (1.0 + 1e-12)) ++held;
          tightest = std::min(tightest, s.rhs / s.lhs - 1.0);
        }
  out.check(held == checked, "eta > 0 inequality held on " + std::to_string(held) + "/" + std::to_string(checked) +
                                 " cases (smallest slack " + fmt("%.2e", tightest) + ")");
}

void ball_stability(const Context&, Outcome& out) {
  energy::ModelParams p;
  stability::HessianOptions o;
  o.max_degree = 8;
  o.capacity.panels = 2048;
  const auto r = stability::hessian_at_ball(p, o);
  out.check(r.consistent, "step-halving consistency");
  double l1 = 0, min_pos = INFINITY;
  for (const auto& m : r.modes) {
    const double e = m.eigenvalue(p, 0.0);
    if (m.degree == 1) l1 = std::max(l1, std::abs(e));
    else min_pos = std::min(min_pos, e);
  }
  out.check(l1 < 1e-6, "|eig| of l = 1 modes <= " + fmt("%.1e", l1) + " < 1e-6");
  out.check(min_pos > 0.0, "min eig over 2 <= l <= 8 = " + fmt("%.4g", min_pos) + " > 0");
  const double qstar = r.critical_charge;
  out.check(std::isfinite(qstar), "Q* = " + fmt("%.6f", qstar));
  // eig(Q) = eig(0) - c Q^2 with c from least squares through eig(0).
  double worst = 0;
  for (const auto& m : r.modes) {
    if (m.degree < 2) continue;
    const double e0 = m.eigenvalue(p, 0.0);
    std::vector<double> q2, e;
    for (double f : {0.02, 0.04, 0.06, 0.08, 0.1}) {
      q2.push_back(f * f * qstar * qstar);
      e.push_back(m.eigenvalue(p, f * qstar));
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < q2.size(); ++i) {
      num += (e0 - e[i]) * q2[i];
      den += q2[i] * q2[i];
    }
    const double c = num / den;
    for (std::size_t i = 0; i < q2.size(); ++i)
      worst = std::max(worst, std::abs(e0 - c * q2[i] - e[i]) / std::abs(e[i]));
  }
  out.check(worst < 0.01, "quadratic-in-Q fit residual " + fmt("%.1e", worst) + " < 1%");
}

void small_charge_minimizers(const Context&, Outcome& out) {
  // 3D: relaxed energy, alpha = 2.
  optimize::OptimizerConfig c;
  c.band_limit = 4;
  c.capacity.panels = 512;
  stability::HessianOptions ho;
  ho.max_degree = 4;
  ho.zonal_only = true;
  ho.capacity = c.capacity;
  const double qstar = stability::hessian_at_ball(c.params, ho).critical_charge;
  c.params.charge = 0.1 * qstar;
  c.params.penalty = energy::default_penalty(c.params.charge);
  const double ball = energy::evaluate(sphere::SphereField(sphere::SphereGrid::create(c.band_limit, c.grid_oversample)),
                                       1.0, c.params, c.capacity)
                          .total_penalized;
  int good = 0;
  double worst_dist = 0, worst_gap = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    c.seed = seed;
    const auto start = optimize::random_initial_shape(c, 0.2, 4);
    const auto r = optimize::minimize(start, c);
    const double gap = std::abs(r.trajectory.final_objective - ball);
    worst_dist = std::max(worst_dist, r.trajectory.distance_to_ball);
    worst_gap = std::max(worst_gap, gap);
    if (r.trajectory.distance_to_ball < 1e-3 && gap < 1e-4) ++good;
  }
  out.check(good == 10, "3D: " + std::to_string(good) + "/10 seeds reach the ball at Q = " + fmt("%.4f", c.params.charge) +
                            " (max distance " + fmt("%.1e", worst_dist) + ", max energy gap " + fmt("%.1e", worst_gap) + ")");

  // 2D: full energy lambda P + W + Q^2 I, alpha = 1.5, lambda = 1.
  optimize::OptimizerConfig d;
  d.band_limit = 6;
  d.params.dimension = 2;
  d.params.alpha = 1.5;
  d.params.lambda = 1.0;
  stability::HessianOptions h2;
  h2.max_degree = 6;
  h2.zonal_only = true;
  h2.curve_samples = d.curve_samples;
  h2.capacity = d.capacity;
  const double qstar2 = stability::hessian_at_ball(d.params, h2).critical_charge;
  d.params.charge = 0.1 * qstar2;
  d.params.penalty = energy::default_penalty(d.params.charge);
  const double circle = energy::evaluate(curve::CurveShape(d.band_limit, d.curve_samples, 1.0), d.params, d.capacity).total_penalized;
  good = 0;
  worst_dist = worst_gap = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    d.seed = seed;
    const auto r = optimize::minimize(optimize::random_initial_curve(d, 0.2, 4), d);
    const double gap = std::abs(r.trajectory.final_objective - circle);
    worst_dist = std::max(worst_dist, r.trajectory.distance_to_ball);
    worst_gap = std::max(worst_gap, gap);
    if (r.trajectory.distance_to_ball < 1e-3 && gap < 1e-4) ++good;
  }
  out.check(good == 10, "2D: " + std::to_string(good) + "/10 seeds reach the circle at Q = " + fmt("%.4f", d.params.charge) +
                            " (max distance " + fmt("%.1e", worst_dist) + ", max energy gap " + fmt("%.1e", worst_gap) + ")");
}

void threshold_scaling(const Context&, Outcome& out) {
  const std::vector<double> masses{0.5, 1.0, 2.0, 4.0, 8.0};
  stability::HessianOptions o;
  o.max_degree = 8;
  o.zonal_only = true;
  o.capacity.panels = 2048;
  for (double alpha : {2.0, 2.5}) {
    energy::ModelParams p;
    p.alpha = alpha;
    const auto s = stability::threshold_sweep(p, masses, o);
    const double target = (3.0 - alpha) / 6.0;
    out.check(std::abs(s.slope - target) < 0.02,
              "3D alpha " + fmt("%.1f", alpha) + ": slope " + fmt("%.4f", s.slope) + " vs " + fmt("%.4f", target));
  }
  energy::ModelParams p2;
  p2.dimension = 2;
  p2.alpha = 1.5;
  stability::HessianOptions o2;
  o2.max_degree = 6;
  o2.zonal_only = true;
  o2.capacity.cells = 2000;
  const auto s2 = stability::threshold_sweep(p2, masses, o2);
  const double target2 = -(p2.alpha - 1.0) / 2.0;
  out.check(std::abs(s2.slope - target2) < 0.02,
            "2D alpha 1.5: slope " + fmt("%.4f", s2.slope) + " vs " + fmt("%.4f", target2));
}

void perturbation_bound(const Context&, Outcome& out) {
  experiments::BumpOptions o;
  o.alpha = 2.0;
  const auto s = experiments::bump_study({0.05, 0.1, 0.2}, o);
  const double floor = (3.0 - o.alpha) - 0.3;
  out.check(s.capacity_slope >= floor,
            "alpha 2: slope of I(E) - I(E_rho) " + fmt("%.3f", s.capacity_slope) + " >= " + fmt("%.1f", floor));
  bool net = true;
  double min_dw = INFINITY;
  for (const auto& r : s.records) {
    net = net && r.net_change > 0.0;
    min_dw = std::min(min_dw, r.willmore_increase);
  }
  out.check(net, "Q = 0 net energy change positive at every rho (min bending increase " + fmt("%.3f", min_dw) + ")");
}

void stability_harness(const Context&, Outcome& out) {
  const std::vector<double> t{0.02, 0.04, 0.06, 0.08, 0.1};
  const analysis::HarnessOptions o;
  const auto sphere_family = analysis::stability_ratio_harness("Y20", t, analysis::harmonic_family(8, 2, 0, t), 2.0, o);
  const auto curve_family = analysis::stability_ratio_harness("cos2", t, analysis::cosine_family(2, t), 1.5, o);
  for (const auto* s : {&sphere_family, &curve_family}) {
    bool finite = true;
    for (const auto& r : s->rows)
      finite = finite && r.included && std::isfinite(r.perimeter_over_willmore) && std::isfinite(r.capacity_over_perimeter) &&
               r.perimeter_over_willmore > 0.0 && r.capacity_over_perimeter > 0.0;
    out.check(s->all_nonnegative, s->family + " differences nonnegative");
    out.check(finite, s->family + " ratios finite");
    out.check(s->spread() < 0.2, s->family + " spread " + fmt("%.2f%%", 100.0 * s->spread()) + " < 20%");
  }
}

void decay_iteration(const Context&, Outcome& out) {
  std::mt19937_64 rng(99);
  int strict = 0, passed = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto h = analysis::random_hypothesis(rng, 100);
    const auto d = analysis::decay_exponent(h.theta, h.gamma, h.delta);
    if (h.gamma < std::pow(h.theta, d.beta) && d.beta < h.delta) ++strict;
    const auto c = analysis::verify_decay(h, d.beta, d.C, 100);
    if (c.hypothesis_holds && c.conclusion_holds) ++passed;
  }
  out.check(strict == 10000, "gamma < theta^beta and beta < delta on " + std::to_string(strict) + "/10000");
  out.check(passed == 10000, "verify_decay passed on " + std::to_string(passed) + "/10000");
}

void mollification(const Context&, Outcome& out) {
  const auto g = sphere::SphereGrid::create(16, 1);
  const auto inputs = smoothing::admissible_inputs(g, 21, 7);
  int bounded = 0, monotone = 0, resolved = 0;
  double min_wedge = INFINITY, max_grad = 0;
  for (const auto& psi : inputs) {
    bool ok = true, mono = true, res = true;
    double last = INFINITY;
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto r = smoothing::mollify(psi, eps);
      const auto b = smoothing::wedge_and_grad_bounds(r.map);
      min_wedge = std::min(min_wedge, b.min_wedge);
      max_grad = std::max(max_grad, b.max_gradient);
      ok = ok && b.min_wedge >= smoothing::kMinWedge && b.max_gradient <= smoothing::kMaxGradient;
      res = res && r.resolution_ok;
      const double dist = smoothing::sobolev_distance(r.map, psi);
      mono = mono && dist < last;
      last = dist;
    }
    bounded += ok;
    monotone += mono;
    resolved += res;
  }
  const int n = static_cast<int>(inputs.size());
  out.check(n >= 20, std::to_string(n) + " admissible inputs");
  out.check(bounded == n, "bounds on " + std::to_string(bounded) + "/" + std::to_string(n) + " (min wedge " +
                              fmt("%.3f", min_wedge) + ", max gradient " + fmt("%.3f", max_grad) + ")");
  out.check(monotone == n, "W22 distance decreasing as eps halves on " + std::to_string(monotone) + "/" + std::to_string(n));
  out.check(resolved == n, "quadrature resolution check on " + std::to_string(resolved) + "/" + std::to_string(n));
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(const Context& ctx, Outcome& out) {
  if (ctx.cli.empty()) {
    out.check(false, "no CLI path given");
    return;
  }
  const std::string fixtures = CHARGEDROP_FIXTURE_DIR;
  const fs::path root = ctx.scratch / "determinism";
  fs::create_directories(root);
  const fs::path config = root / "minimize.json";
  std::ofstream(config) << R"({"params": {"charge": 0.3}, "band_limit": 4, "capacity": {"panels": 256},
  "max_iterations": 8, "seed": 4, "initial": {"kind": "random", "size": 0.15, "max_degree": 4}})";
  const std::vector<std::pair<std::string, std::string>> commands{
      {"energy", "energy " + fixtures + "/perturbed_ball.field --charge 0.5 --panels 512"},
      {"capacity", "capacity " + fixtures + "/unit_sphere_512.set --alpha 2.5"},
      {"minimize", "minimize " + config.string()},
      {"sweep", "sweep --masses 1,2 --max-degree 3 --panels 256"},
      {"hessian", "hessian --max-degree 3 --panels 256 --charge 1 --all-orders"},
      {"smooth", "smooth --inputs 2 --eps 0.2,0.1 --band-limit 8 --seed 3"},
      {"decay", "decay --random 200 --seed 5"},
      {"compare-reg", "compare-reg --rhos 0.2,0.1"},
      {"harness", "harness --family cos2 --alpha 1 --cells 500"},
  };
  int identical = 0;
  std::string mismatched;
  for (const auto& [name, args] : commands) {
    std::vector<fs::path> dirs;
    bool ran = true;
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / (name + "_" + std::to_string(run));
      fs::remove_all(dir);
      dirs.push_back(dir);
      // The output root comes from the environment so both runs see identical arguments.
      const std::string cmd = "CHARGEDROP_OUT='" + dir.string() + "' '" + ctx.cli + "' " + args + " --threads 1 > '" +
                              (root / (name + "_" + std::to_string(run) + ".stdout")).string() + "'";
      ran = ran && std::system(cmd.c_str()) == 0;
    }
    bool same = ran && read_all(root / (name + "_0.stdout")) == read_all(root / (name + "_1.stdout"));
    std::size_t files = 0;
    if (same) {
      for (const auto& e : fs::directory_iterator(dirs[0])) {
        ++files;
        same = same && read_all(e.path()) == read_all(dirs[1] / e.path().filename());
      }
      same = same && files > 1;
    }
    if (same) ++identical;
    else mismatched += " " + name;
  }
  out.check(identical == static_cast<int>(commands.size()),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " commands bit-identical across two runs" + (mismatched.empty() ? "" : " (differs:" + mismatched + ")"));
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(const Context&, Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "sphere identities", 1, sphere_identities},
      {2, "Gauss-Bonnet identity", 10, gauss_bonnet},
      {3, "capacity oracle", 60, capacity_oracle},
      {4, "capacity scaling laws", 30, scaling_laws},
      {5, "ball stability", 300, ball_stability},
      {6, "small-charge minimizers are balls", 900, small_charge_minimizers},
      {7, "threshold scaling", 600, threshold_scaling},
      {8, "bump perturbation bound", 120, perturbation_bound},
      {9, "stability-inequality harness", 120, stability_harness},
      {10, "decay iteration", 30, decay_iteration},
      {11, "mollification bounds", 120, mollification},
      {12, "determinism", 300, determinism},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chargedrop acceptance suite"};
  std::vector<int> only;
  Context ctx;
  std::string scratch = (fs::temp_directory_path() / "chargedrop_acceptance").string();
  app.add_option("--criterion", only, "run only these criteria (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--cli", ctx.cli, "path of the chargedrop executable (criterion 12)");
  app.add_option("--scratch", scratch, "directory for temporary outputs");
  CLI11_PARSE(app, argc, argv);
  ctx.scratch = scratch;
  set_thread_count(1);

  int failures = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(ctx, out);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.check(seconds < c.budget_seconds, fmt("%.1f s", seconds) + " < " + fmt("%.0f s", c.budget_seconds));
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << out.detail.str()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
