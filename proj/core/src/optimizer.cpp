#include "chargedrop/optimizer.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>

#include "chargedrop/error.hpp"
#include "chargedrop/parallel.hpp"
#include "chargedrop/surface_geometry.hpp"

namespace chargedrop::optimize {

namespace {

struct Evaluation {
  double value = 0;
  energy::EnergyBreakdown breakdown;
  double max_abs_perturbation = 0;
  Eigen::VectorXd solution;  // capacity solve, reused as a warm start
};

// A shape family parametrized by a coefficient vector.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::size_t size() const = 0;
  virtual Eigen::VectorXd initial() const = 0;
  // Returns nothing for inadmissible shapes. Safe to call concurrently.
  virtual std::optional<Evaluation> evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd* warm) const = 0;
};

bool is_inadmissible(const Error& e) { return e.category() == ErrorCategory::inadmissible_shape; }

class SphereProblem final : public Problem {
 public:
  SphereProblem(const Shape3D& start, const OptimizerConfig& c) : config_(c) {
    grid_ = sphere::SphereGrid::create(c.band_limit, c.grid_oversample);
    base_.assign(sphere::coeff_count(c.band_limit), 0.0);
    const auto& src = start.phi.coeffs();
    for (std::size_t k = 0; k < std::min(src.size(), base_.size()); ++k) base_[k] = src[k];
    const int lmin = c.free_translations ? 1 : 2;
    for (int l = lmin; l <= c.band_limit; ++l)
      for (int m = -l; m <= l; ++m) slots_.push_back(sphere::coeff_index(l, m));
    radius_ = start.radius;
  }

  std::size_t size() const override {
    return slots_.size() + (config_.volume_mode == VolumeMode::penalty ? 1 : 0);
  }

  Eigen::VectorXd initial() const override {
    Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
    for (std::size_t k = 0; k < slots_.size(); ++k) x[static_cast<Eigen::Index>(k)] = base_[slots_[k]];
    if (config_.volume_mode == VolumeMode::penalty) x[x.size() - 1] = std::log(radius_);
    return x;
  }

  Shape3D shape(const Eigen::VectorXd& x) const {
    auto c = base_;
    for (std::size_t k = 0; k < slots_.size(); ++k) c[slots_[k]] = x[static_cast<Eigen::Index>(k)];
    auto phi = sphere::SphereField::from_coefficients(grid_, std::move(c));
    double r = radius_;
    if (config_.volume_mode == VolumeMode::penalty) {
      r = std::exp(x[x.size() - 1]);
    } else {
      r = energy::projected_radius(phi, 1.0, config_.params.target());
    }
    return {std::move(phi), r};
  }

  std::optional<Evaluation> evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd* warm) const override {
    try {
      const auto s = shape(x);
      Evaluation e;
      energy::EvaluationExtras extras{warm, &e.solution};
      e.breakdown = energy::evaluate(s.phi, s.radius, config_.params, config_.capacity, extras);
      e.value = e.breakdown.total_penalized;
      e.max_abs_perturbation = s.phi.sup_norm();
      return e;
    } catch (const Error& err) {
      if (is_inadmissible(err)) return std::nullopt;
      throw;
    }
  }

 private:
  const OptimizerConfig& config_;
  sphere::GridPtr grid_;
  std::vector<double> base_;
  std::vector<std::size_t> slots_;
  double radius_ = 1.0;
};

class CurveProblem final : public Problem {
 public:
  CurveProblem(const curve::CurveShape& start, const OptimizerConfig& c) : config_(c) {
    const auto K = static_cast<std::size_t>(c.band_limit);
    cos_.assign(K + 1, 0.0);
    sin_.assign(K + 1, 0.0);
    for (std::size_t k = 0; k <= std::min<std::size_t>(K, static_cast<std::size_t>(start.modes())); ++k) {
      cos_[k] = start.cos_coeffs()[k];
      sin_[k] = start.sin_coeffs()[k];
    }
    kmin_ = c.free_translations ? 1 : 2;
    radius_ = start.radius();
  }

  std::size_t size() const override {
    const std::size_t modes = static_cast<std::size_t>(std::max(0, config_.band_limit - kmin_ + 1));
    return 2 * modes + (config_.volume_mode == VolumeMode::penalty ? 1 : 0);
  }

  Eigen::VectorXd initial() const override {
    Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
    Eigen::Index i = 0;
    for (int k = kmin_; k <= config_.band_limit; ++k) {
      x[i++] = cos_[static_cast<std::size_t>(k)];
      x[i++] = sin_[static_cast<std::size_t>(k)];
    }
    if (config_.volume_mode == VolumeMode::penalty) x[i] = std::log(radius_);
    return x;
  }

  curve::CurveShape shape(const Eigen::VectorXd& x) const {
    auto c = cos_, s = sin_;
    Eigen::Index i = 0;
    for (int k = kmin_; k <= config_.band_limit; ++k) {
      c[static_cast<std::size_t>(k)] = x[i++];
      s[static_cast<std::size_t>(k)] = x[i++];
    }
    auto shape = curve::CurveShape::from_coefficients(std::move(c), std::move(s), 1.0, config_.curve_samples);
    if (config_.volume_mode == VolumeMode::penalty) return shape.with_radius(std::exp(x[i]));
    return shape.with_radius(energy::projected_radius(shape, config_.params.target()));
  }

  std::optional<Evaluation> evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd* warm) const override {
    try {
      const auto s = shape(x);
      Evaluation e;
      energy::EvaluationExtras extras{warm, &e.solution};
      e.breakdown = energy::evaluate(s, config_.params, config_.capacity, extras);
      e.value = e.breakdown.total_penalized;
      double peak = 0.0;
      for (double v : s.sample_values()) peak = std::max(peak, std::abs(v));
      e.max_abs_perturbation = peak;
      return e;
    } catch (const Error& err) {
      if (is_inadmissible(err)) return std::nullopt;
      throw;
    }
  }

 private:
  const OptimizerConfig& config_;
  std::vector<double> cos_, sin_;
  int kmin_ = 2;
  double radius_ = 1.0;
};

IterationRecord make_record(int iteration, bool accepted, double step, const Evaluation& e, double gnorm) {
  IterationRecord r;
  r.iteration = iteration;
  r.accepted = accepted;
  r.step = step;
  r.objective = e.value;
  r.breakdown = e.breakdown;
  r.volume = e.breakdown.volume;
  r.gradient_norm = gnorm;
  r.max_abs_perturbation = e.max_abs_perturbation;
  return r;
}

Eigen::VectorXd fd_gradient(const Problem& p, const Eigen::VectorXd& x, double f0, const Eigen::VectorXd* warm,
                            double h) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<std::optional<double>> values(2 * n);
  parallel_for(0, 2 * n, [&](std::size_t task) {
    Eigen::VectorXd y = x;
    const auto i = static_cast<Eigen::Index>(task / 2);
    y[i] += (task % 2 == 0) ? h : -h;
    const auto e = p.evaluate(y, warm);
    if (e) values[task] = e->value;
  });
  Eigen::VectorXd g(x.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& fp = values[2 * i];
    const auto& fm = values[2 * i + 1];
    double gi = 0.0;
    if (fp && fm) gi = (*fp - *fm) / (2.0 * h);
    else if (fp) gi = (*fp - f0) / h;
    else if (fm) gi = (f0 - *fm) / h;
    g[static_cast<Eigen::Index>(i)] = gi;
  }
  return g;
}

struct Memory {
  std::deque<Eigen::VectorXd> s, y;
  std::deque<double> rho;
  void clear() {
    s.clear();
    y.clear();
    rho.clear();
  }
};

Eigen::VectorXd lbfgs_direction(const Memory& mem, const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  const std::size_t k = mem.s.size();
  std::vector<double> a(k);
  for (std::size_t i = k; i-- > 0;) {
    a[i] = mem.rho[i] * mem.s[i].dot(q);
    q -= a[i] * mem.y[i];
  }
  if (k > 0) q *= mem.s.back().dot(mem.y.back()) / mem.y.back().squaredNorm();
  for (std::size_t i = 0; i < k; ++i) {
    const double b = mem.rho[i] * mem.y[i].dot(q);
    q += (a[i] - b) * mem.s[i];
  }
  return -q;
}

TrajectoryRecord run(const Problem& problem, const OptimizerConfig& c, Eigen::VectorXd& x) {
  TrajectoryRecord traj;
  traj.seed = c.seed;
  x = problem.initial();
  auto current = problem.evaluate(x, nullptr);
  if (!current) fail(ErrorCategory::inadmissible_shape, "initial shape is not admissible");
  Eigen::VectorXd g = fd_gradient(problem, x, current->value, &current->solution, c.fd_step);
  traj.iterations.push_back(make_record(0, true, 0.0, *current, g.norm()));

  Memory mem;
  traj.status = Status::budget_exhausted;
  int iteration = 0;
  while (true) {
    if (g.norm() < c.gradient_tolerance) {
      traj.status = Status::converged_gradient;
      break;
    }
    if (iteration >= c.max_iterations) break;
    ++iteration;

    bool accepted = false;
    std::optional<Evaluation> next;
    Eigen::VectorXd x_next;
    double t_accepted = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d = mem.s.empty() ? Eigen::VectorXd(-c.initial_step * g) : lbfgs_direction(mem, g);
      double slope = g.dot(d);
      if (!(slope < 0.0)) {
        mem.clear();
        d = -c.initial_step * g;
        slope = g.dot(d);
      }
      const double biggest = d.cwiseAbs().maxCoeff();
      if (biggest > c.max_coefficient_step) {
        d *= c.max_coefficient_step / biggest;
        slope = g.dot(d);
      }
      double t = 1.0;
      for (int b = 0; b <= c.max_backtracks; ++b, t *= c.backtracking) {
        Eigen::VectorXd trial = x + t * d;
        auto e = problem.evaluate(trial, &current->solution);
        if (e && e->value <= current->value + c.armijo * t * slope) {
          accepted = true;
          next = std::move(e);
          x_next = std::move(trial);
          t_accepted = t;
          break;
        }
        if (e) {
          traj.iterations.push_back(
              make_record(iteration, false, t, *e, std::numeric_limits<double>::quiet_NaN()));
        }
      }
      if (!accepted) {
        if (mem.s.empty()) break;
        mem.clear();  // retry once along steepest descent
      }
    }
    if (!accepted) {
      traj.status = Status::line_search_failed;
      break;
    }

    const Eigen::VectorXd g_next = fd_gradient(problem, x_next, next->value, &next->solution, c.fd_step);
    const Eigen::VectorXd s = x_next - x, y = g_next - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      mem.s.push_back(s);
      mem.y.push_back(y);
      mem.rho.push_back(1.0 / sy);
      if (static_cast<int>(mem.s.size()) > c.lbfgs_memory) {
        mem.s.pop_front();
        mem.y.pop_front();
        mem.rho.pop_front();
      }
    }
    const double change = current->value - next->value;
    x = x_next;
    g = g_next;
    current = std::move(next);
    ++traj.accepted_steps;
    traj.iterations.push_back(make_record(iteration, true, t_accepted, *current, g.norm()));
    if (change <= c.energy_tolerance * std::max(1.0, std::abs(current->value))) {
      traj.status = g.norm() < c.gradient_tolerance ? Status::converged_gradient : Status::converged_energy;
      break;
    }
  }
  traj.final_objective = current->value;
  return traj;
}

}  // namespace

void OptimizerConfig::validate() const {
  params.validate();
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCategory::invalid_argument, std::string(name) + " must be positive");
  };
  positive(initial_step, "initial step");
  positive(max_coefficient_step, "maximum coefficient step");
  positive(gradient_tolerance, "gradient tolerance");
  positive(energy_tolerance, "energy tolerance");
  if (!(backtracking > 0.0 && backtracking < 1.0)) fail(ErrorCategory::invalid_argument, "backtracking factor must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) fail(ErrorCategory::invalid_argument, "Armijo constant must lie in (0, 1)");
  if (!(fd_step >= 1e-6 && fd_step <= 1e-2)) fail(ErrorCategory::invalid_argument, "finite-difference step must lie in [1e-6, 1e-2]");
  if (band_limit < 2) fail(ErrorCategory::invalid_argument, "band limit must be at least 2");
  if (max_iterations < 0 || max_backtracks < 0 || lbfgs_memory < 0) {
    fail(ErrorCategory::invalid_argument, "iteration budgets must be nonnegative");
  }
}

std::string status_name(Status s) {
  switch (s) {
    case Status::converged_gradient: return "converged_gradient";
    case Status::converged_energy: return "converged_energy";
    case Status::budget_exhausted: return "budget_exhausted";
    case Status::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

double distance_to_ball(const sphere::SphereField& phi, double radius) {
  const auto centred = sphere::recentered(phi, radius);
  const double mean = 1.0 + centred.coeff(0, 0) / std::sqrt(4.0 * M_PI);
  return centred.degree_norm(2) / mean;
}

double distance_to_disk(const curve::CurveShape& shape) {
  const auto centred = curve::recentered(shape);
  return centred.mode_norm(2) / (1.0 + centred.cos_coeffs()[0]);
}

Result3D minimize(const Shape3D& initial, const OptimizerConfig& config) {
  config.validate();
  if (config.params.dimension != 3) fail(ErrorCategory::invalid_argument, "3D minimization needs dimension 3");
  SphereProblem problem(initial, config);
  Eigen::VectorXd x;
  Result3D out{problem.shape(problem.initial()), {}};
  out.trajectory = run(problem, config, x);
  out.shape = problem.shape(x);
  out.trajectory.distance_to_ball = distance_to_ball(out.shape.phi, out.shape.radius);
  return out;
}

Result2D minimize(const curve::CurveShape& initial, const OptimizerConfig& config) {
  config.validate();
  if (config.params.dimension != 2) fail(ErrorCategory::invalid_argument, "2D minimization needs dimension 2");
  CurveProblem problem(initial, config);
  Eigen::VectorXd x;
  Result2D out{initial, {}};
  out.trajectory = run(problem, config, x);
  out.shape = problem.shape(x);
  out.trajectory.distance_to_ball = distance_to_disk(out.shape);
  return out;
}

Shape3D random_initial_shape(const OptimizerConfig& config, double c1_size, int max_degree) {
  std::mt19937_64 rng(config.seed);
  auto grid = sphere::SphereGrid::create(config.band_limit, config.grid_oversample);
  sphere::RandomFieldOptions o;
  o.min_degree = 2;
  o.max_degree = std::min(max_degree, config.band_limit);
  o.norm = sphere::RandomFieldOptions::Norm::c1;
  o.target = c1_size;
  auto phi = sphere::random_field(grid, rng, o);
  return {phi, energy::projected_radius(phi, 1.0, config.params.target())};
}

curve::CurveShape random_initial_curve(const OptimizerConfig& config, double size, int max_mode) {
  std::mt19937_64 rng(config.seed);
  auto shape = curve::random_curve(rng, 2, std::min(max_mode, config.band_limit), 2.0, size, config.band_limit,
                                   config.curve_samples);
  return shape.with_radius(energy::projected_radius(shape, config.params.target()));
}

}  // namespace chargedrop::optimize
