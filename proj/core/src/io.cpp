#include "chargedrop/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "chargedrop/error.hpp"

namespace chargedrop::io {

namespace {

using nlohmann::json;

// Splits input into whitespace-separated tokens line by line, skipping blank
// lines and '#' comments, and tracks line numbers for diagnostics.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::vector<std::string> expect(std::size_t count, const char* what) {
    std::vector<std::string> t;
    if (!next(t)) error(std::string("unexpected end of input, expected ") + what);
    if (t.size() != count) {
      error(std::string("expected ") + what + " (" + std::to_string(count) + " fields), got " +
            std::to_string(t.size()) + " fields");
    }
    return t;
  }

  // "key value" line.
  std::string keyed(const char* key) {
    const auto t = expect(2, key);
    if (t[0] != key) error(std::string("expected '") + key + "', got '" + t[0] + "'");
    return t[1];
  }

  double number(const std::string& token) { return parse_double(token, where()); }

  long long integer(const std::string& token) {
    long long v = 0;
    const auto r = std::from_chars(token.data(), token.data() + token.size(), v);
    if (r.ec != std::errc() || r.ptr != token.data() + token.size()) error("malformed integer '" + token + "'");
    return v;
  }

  void header(const char* magic) {
    std::vector<std::string> t;
    if (!next(t)) error("empty input");
    if (t.size() != 2 || t[0] != magic) error(std::string("expected header '") + magic + " 1'");
    if (t[1] != "1") error("unsupported format version '" + t[1] + "'");
  }

  void finish() {
    std::vector<std::string> t;
    if (next(t)) error("trailing content after the last record");
  }

  std::string where() const { return source_ + ":" + std::to_string(line_no_); }
  [[noreturn]] void error(const std::string& msg) const { fail(ErrorCategory::parse_error, where() + ": " + msg); }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_no_ = 0;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::io_error, "cannot open '" + path + "' for reading");
  return in;
}

const char* mode_name(capacity::SetMode m) { return m == capacity::SetMode::boundary ? "boundary" : "volumetric"; }
const char* rule_name(capacity::DiagonalRule r) {
  return r == capacity::DiagonalRule::lattice_corrected ? "lattice_corrected" : "equal_measure_body";
}
capacity::DiagonalRule rule_from(const std::string& s) {
  if (s == "lattice_corrected") return capacity::DiagonalRule::lattice_corrected;
  if (s == "equal_measure_body") return capacity::DiagonalRule::equal_measure_body;
  fail(ErrorCategory::parse_error, "unknown diagonal rule '" + s + "'");
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) fail(ErrorCategory::parse_error, where + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) fail(ErrorCategory::parse_error, "unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read_key(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCategory::parse_error, where + "." + key + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view token, const std::string& where) {
  double v = 0.0;
  const auto r = std::from_chars(token.data(), token.data() + token.size(), v);
  if (r.ec != std::errc() || r.ptr != token.data() + token.size()) {
    fail(ErrorCategory::parse_error, where + ": malformed number '" + std::string(token) + "'");
  }
  if (!std::isfinite(v)) fail(ErrorCategory::parse_error, where + ": non-finite number '" + std::string(token) + "'");
  return v;
}

ShapeKind detect_kind(const std::string& path) {
  auto in = open_input(path);
  std::string word;
  in >> word;
  if (word == "chargedrop-field") return ShapeKind::field;
  if (word == "chargedrop-curve") return ShapeKind::curve;
  if (word == "chargedrop-set") return ShapeKind::set;
  if (word == "chargedrop-map") return ShapeKind::map;
  return ShapeKind::unknown;
}

void write_field(std::ostream& out, const sphere::SphereField& phi, double radius) {
  const auto& g = *phi.grid();
  out << "chargedrop-field 1\n";
  out << "band_limit " << g.band_limit() << "\n";
  out << "oversample " << g.oversample() << "\n";
  out << "# grid " << g.nlat() << " colatitudes x " << g.nlon() << " longitudes\n";
  out << "radius " << format_double(radius) << "\n";
  out << "# l m coefficient\n";
  for (int l = 0; l <= g.band_limit(); ++l) {
    for (int m = -l; m <= l; ++m) out << l << ' ' << m << ' ' << format_double(phi.coeff(l, m)) << '\n';
  }
}

FieldFile read_field(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("chargedrop-field");
  const auto L = r.integer(r.keyed("band_limit"));
  if (L < 0 || L > 512) r.error("band limit out of range");
  const auto k = r.integer(r.keyed("oversample"));
  if (k < 1 || k > 16) r.error("oversample out of range");
  const double radius = r.number(r.keyed("radius"));
  if (!(radius > 0.0)) r.error("radius must be positive");
  const int Li = static_cast<int>(L);
  std::vector<double> coeffs(sphere::coeff_count(Li), 0.0);
  std::vector<bool> seen(coeffs.size(), false);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    const auto t = r.expect(3, "'l m coefficient'");
    const auto l = r.integer(t[0]), m = r.integer(t[1]);
    if (l < 0 || l > L || m < -l || m > l) r.error("degree/order outside the band limit");
    const auto idx = sphere::coeff_index(static_cast<int>(l), static_cast<int>(m));
    if (seen[idx]) r.error("duplicate coefficient");
    seen[idx] = true;
    coeffs[idx] = r.number(t[2]);
  }
  r.finish();
  auto grid = sphere::SphereGrid::create(Li, static_cast<int>(k));
  return {sphere::SphereField::from_coefficients(grid, std::move(coeffs)), radius};
}

void write_curve(std::ostream& out, const curve::CurveShape& shape) {
  out << "chargedrop-curve 1\n";
  out << "modes " << shape.modes() << "\n";
  out << "samples " << shape.samples() << "\n";
  out << "radius " << format_double(shape.radius()) << "\n";
  out << "# k cos sin\n";
  for (int k = 0; k <= shape.modes(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    out << k << ' ' << format_double(shape.cos_coeffs()[i]) << ' ' << format_double(shape.sin_coeffs()[i]) << '\n';
  }
}

curve::CurveShape read_curve(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("chargedrop-curve");
  const auto K = r.integer(r.keyed("modes"));
  if (K < 0 || K > 100000) r.error("mode count out of range");
  const auto n = r.integer(r.keyed("samples"));
  if (n < 2 * K + 2) r.error("sample count must exceed twice the mode count");
  const double radius = r.number(r.keyed("radius"));
  if (!(radius > 0.0)) r.error("radius must be positive");
  std::vector<double> c(static_cast<std::size_t>(K) + 1), s(c.size());
  for (long long k = 0; k <= K; ++k) {
    const auto t = r.expect(3, "'k cos sin'");
    if (r.integer(t[0]) != k) r.error("modes must be listed in order starting at 0");
    c[static_cast<std::size_t>(k)] = r.number(t[1]);
    s[static_cast<std::size_t>(k)] = r.number(t[2]);
  }
  r.finish();
  return curve::CurveShape::from_coefficients(std::move(c), std::move(s), radius, static_cast<std::size_t>(n));
}

void write_set(std::ostream& out, const capacity::DiscretizedSet& set) {
  out << "chargedrop-set 1\n";
  out << "dimension " << set.dimension << "\n";
  out << "mode " << mode_name(set.mode) << "\n";
  out << "elements " << set.elements.size() << "\n";
  out << "# x y z measure diameter\n";
  for (const auto& e : set.elements) {
    out << format_double(e.centroid.x()) << ' ' << format_double(e.centroid.y()) << ' '
        << format_double(e.centroid.z()) << ' ' << format_double(e.measure) << ' ' << format_double(e.diameter)
        << '\n';
  }
}

capacity::DiscretizedSet read_set(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("chargedrop-set");
  capacity::DiscretizedSet set;
  const auto d = r.integer(r.keyed("dimension"));
  if (d != 2 && d != 3) r.error("dimension must be 2 or 3");
  set.dimension = static_cast<int>(d);
  const auto mode = r.keyed("mode");
  if (mode == "boundary") set.mode = capacity::SetMode::boundary;
  else if (mode == "volumetric") set.mode = capacity::SetMode::volumetric;
  else r.error("mode must be 'boundary' or 'volumetric'");
  const auto n = r.integer(r.keyed("elements"));
  if (n < 1 || n > 100000000) r.error("element count out of range");
  set.elements.resize(static_cast<std::size_t>(n));
  for (auto& e : set.elements) {
    const auto t = r.expect(5, "'x y z measure diameter'");
    e.centroid = {r.number(t[0]), r.number(t[1]), r.number(t[2])};
    e.measure = r.number(t[3]);
    e.diameter = r.number(t[4]);
    if (!(e.measure > 0.0)) r.error("element measure must be positive");
    if (!(e.diameter >= 0.0)) r.error("element diameter must be nonnegative");
    if (set.dimension == 2 && e.centroid.z() != 0.0) r.error("2D elements need z = 0");
  }
  r.finish();
  return set;
}

void write_map(std::ostream& out, const smoothing::ParametrizedMap& map) {
  const auto& g = *map.grid();
  out << "chargedrop-map 1\n";
  out << "band_limit " << g.band_limit() << "\n";
  out << "oversample " << g.oversample() << "\n";
  out << "nodes " << g.size() << "\n";
  out << "# x y z per node, colatitude-major\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto v = map.value(k);
    out << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  }
}

smoothing::ParametrizedMap read_map(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("chargedrop-map");
  const auto L = r.integer(r.keyed("band_limit"));
  if (L < 0 || L > 512) r.error("band limit out of range");
  const auto k = r.integer(r.keyed("oversample"));
  if (k < 1 || k > 16) r.error("oversample out of range");
  auto grid = sphere::SphereGrid::create(static_cast<int>(L), static_cast<int>(k));
  const auto n = r.integer(r.keyed("nodes"));
  if (n != static_cast<long long>(grid->size())) r.error("node count does not match the grid");
  std::array<std::vector<double>, 3> v;
  for (auto& c : v) c.resize(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto t = r.expect(3, "'x y z'");
    for (std::size_t c = 0; c < 3; ++c) v[c][i] = r.number(t[c]);
  }
  r.finish();
  return smoothing::ParametrizedMap::from_values(grid, std::move(v));
}

FieldFile load_field(const std::string& path) {
  auto in = open_input(path);
  return read_field(in, path);
}
curve::CurveShape load_curve(const std::string& path) {
  auto in = open_input(path);
  return read_curve(in, path);
}
capacity::DiscretizedSet load_set(const std::string& path) {
  auto in = open_input(path);
  return read_set(in, path);
}
smoothing::ParametrizedMap load_map(const std::string& path) {
  auto in = open_input(path);
  return read_map(in, path);
}

void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorCategory::io_error, "write to '" + path + "' failed");
}

std::string load_text(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json to_json(const capacity::RieszKernelSpec& spec) {
  return {{"dimension", spec.dimension}, {"alpha", spec.alpha}, {"eta", spec.eta}, {"exponent", spec.exponent()}};
}

json to_json(const capacity::ChargeDistribution& mu) {
  return {{"spec", to_json(mu.spec)},
          {"value", mu.value},
          {"capacity", 1.0 / mu.value},
          {"riesz_part", mu.riesz_part},
          {"l2_part", mu.l2_part},
          {"iterations", mu.iterations},
          {"relative_residual", mu.relative_residual},
          {"validated_regime", mu.validated_regime},
          {"densities", mu.densities}};
}

json to_json(const energy::EnergyBreakdown& b) {
  return {{"dimension", b.dimension},
          {"perimeter", b.perimeter},
          {"willmore", b.willmore},
          {"bending", b.bending},
          {"traceless", b.traceless},
          {"capacity", b.capacity},
          {"capacity_solved", b.capacity_solved},
          {"capacitary", b.capacitary},
          {"volume", b.volume},
          {"volume_penalty", b.volume_penalty},
          {"total_F", b.total_F},
          {"total_F_eta", b.total_F_eta},
          {"total_relaxed", b.total_relaxed},
          {"total_penalized", b.total_penalized}};
}

json to_json(const energy::ModelParams& p) {
  return {{"dimension", p.dimension}, {"lambda", p.lambda},   {"charge", p.charge},
          {"alpha", p.alpha},         {"eta", p.eta},         {"penalty", p.penalty},
          {"target_volume", p.target_volume}};
}

energy::ModelParams params_from_json(const json& j, energy::ModelParams p) {
  reject_unknown(j, {"dimension", "lambda", "charge", "alpha", "eta", "penalty", "target_volume"}, "params");
  read_key(j, "dimension", p.dimension, "params");
  read_key(j, "lambda", p.lambda, "params");
  read_key(j, "charge", p.charge, "params");
  read_key(j, "alpha", p.alpha, "params");
  read_key(j, "eta", p.eta, "params");
  read_key(j, "penalty", p.penalty, "params");
  if (!j.contains("penalty")) p.penalty = energy::default_penalty(p.charge);
  read_key(j, "target_volume", p.target_volume, "params");
  return p;
}

json to_json(const optimize::OptimizerConfig& c) {
  return {{"params", to_json(c.params)},
          {"capacity",
           {{"panels", c.capacity.panels},
            {"cells", c.capacity.cells},
            {"rule", rule_name(c.capacity.rule)},
            {"tolerance", c.capacity.tolerance}}},
          {"band_limit", c.band_limit},
          {"grid_oversample", c.grid_oversample},
          {"curve_samples", c.curve_samples},
          {"initial_step", c.initial_step},
          {"max_coefficient_step", c.max_coefficient_step},
          {"backtracking", c.backtracking},
          {"max_backtracks", c.max_backtracks},
          {"armijo", c.armijo},
          {"fd_step", c.fd_step},
          {"gradient_tolerance", c.gradient_tolerance},
          {"energy_tolerance", c.energy_tolerance},
          {"max_iterations", c.max_iterations},
          {"volume_mode", c.volume_mode == optimize::VolumeMode::dilation ? "dilation" : "penalty"},
          {"free_translations", c.free_translations},
          {"lbfgs_memory", c.lbfgs_memory},
          {"seed", c.seed}};
}

optimize::OptimizerConfig config_from_json(const json& j) {
  // "initial" describes the starting shape and is interpreted by the caller.
  reject_unknown(j,
                 {"params", "capacity", "band_limit", "grid_oversample", "curve_samples", "initial_step",
                  "max_coefficient_step", "backtracking", "max_backtracks", "armijo", "fd_step",
                  "gradient_tolerance", "energy_tolerance", "max_iterations", "volume_mode", "free_translations",
                  "lbfgs_memory", "seed", "initial"},
                 "config");
  optimize::OptimizerConfig c;
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  if (j.contains("capacity")) {
    const auto& cj = j.at("capacity");
    reject_unknown(cj, {"panels", "cells", "rule", "tolerance"}, "capacity");
    read_key(cj, "panels", c.capacity.panels, "capacity");
    read_key(cj, "cells", c.capacity.cells, "capacity");
    read_key(cj, "tolerance", c.capacity.tolerance, "capacity");
    if (cj.contains("rule")) {
      std::string rule;
      read_key(cj, "rule", rule, "capacity");
      c.capacity.rule = rule_from(rule);
    }
  }
  read_key(j, "band_limit", c.band_limit, "config");
  read_key(j, "grid_oversample", c.grid_oversample, "config");
  read_key(j, "curve_samples", c.curve_samples, "config");
  read_key(j, "initial_step", c.initial_step, "config");
  read_key(j, "max_coefficient_step", c.max_coefficient_step, "config");
  read_key(j, "backtracking", c.backtracking, "config");
  read_key(j, "max_backtracks", c.max_backtracks, "config");
  read_key(j, "armijo", c.armijo, "config");
  read_key(j, "fd_step", c.fd_step, "config");
  read_key(j, "gradient_tolerance", c.gradient_tolerance, "config");
  read_key(j, "energy_tolerance", c.energy_tolerance, "config");
  read_key(j, "max_iterations", c.max_iterations, "config");
  read_key(j, "free_translations", c.free_translations, "config");
  read_key(j, "lbfgs_memory", c.lbfgs_memory, "config");
  read_key(j, "seed", c.seed, "config");
  if (j.contains("volume_mode")) {
    std::string mode;
    read_key(j, "volume_mode", mode, "config");
    if (mode == "dilation") c.volume_mode = optimize::VolumeMode::dilation;
    else if (mode == "penalty") c.volume_mode = optimize::VolumeMode::penalty;
    else fail(ErrorCategory::parse_error, "config.volume_mode must be 'dilation' or 'penalty'");
  }
  return c;
}

std::string breakdown_csv_header() {
  return "dimension,perimeter,willmore,bending,traceless,capacity,capacity_solved,capacitary,volume,volume_penalty,"
         "total_F,total_F_eta,total_relaxed,total_penalized";
}

std::string breakdown_csv_row(const energy::EnergyBreakdown& b) {
  std::ostringstream s;
  s << b.dimension << ',' << format_double(b.perimeter) << ',' << format_double(b.willmore) << ','
    << format_double(b.bending) << ',' << format_double(b.traceless) << ',' << format_double(b.capacity) << ','
    << (b.capacity_solved ? 1 : 0) << ',' << format_double(b.capacitary) << ',' << format_double(b.volume) << ','
    << format_double(b.volume_penalty) << ',' << format_double(b.total_F) << ',' << format_double(b.total_F_eta)
    << ',' << format_double(b.total_relaxed) << ',' << format_double(b.total_penalized);
  return s.str();
}

void write_trajectory_csv(std::ostream& out, const optimize::TrajectoryRecord& t) {
  out << kTrajectorySchema << "\n# seed " << t.seed << " status " << optimize::status_name(t.status) << "\n";
  out << "iteration,accepted,step,objective,volume,gradient_norm,max_abs_perturbation," << breakdown_csv_header()
      << '\n';
  for (const auto& r : t.iterations) {
    out << r.iteration << ',' << (r.accepted ? 1 : 0) << ',' << format_double(r.step) << ','
        << format_double(r.objective) << ',' << format_double(r.volume) << ',' << format_double(r.gradient_norm)
        << ',' << format_double(r.max_abs_perturbation) << ',' << breakdown_csv_row(r.breakdown) << '\n';
  }
}

void write_hessian_csv(std::ostream& out, const stability::HessianReport& r) {
  out << kHessianSchema << "\n# critical_charge " << format_double(r.critical_charge) << " degree "
      << r.critical_degree << "\n";
  out << "degree,order,geometric,capacity,geometric_half_step,capacity_half_step,consistent,eigenvalue_at_charge\n";
  for (const auto& m : r.modes) {
    out << m.degree << ',' << m.order << ',' << format_double(m.geometric) << ',' << format_double(m.capacity) << ','
        << format_double(m.geometric_half_step) << ',' << format_double(m.capacity_half_step) << ','
        << (m.consistent ? 1 : 0) << ',' << format_double(m.eigenvalue(r.params, r.params.charge)) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const stability::SweepResult& s) {
  out << kSweepSchema << "\n# slope " << format_double(s.slope) << " intercept " << format_double(s.intercept)
      << "\n";
  out << "mass,critical_charge,critical_degree\n";
  for (const auto& r : s.rows) {
    out << format_double(r.mass) << ',' << format_double(r.critical_charge) << ',' << r.critical_degree << '\n';
  }
}

void write_harness_csv(std::ostream& out, const analysis::StabilitySummary& s) {
  out << kHarnessSchema << "\n# family " << s.family << " spread " << format_double(s.spread())
      << " all_nonnegative " << (s.all_nonnegative ? 1 : 0) << "\n";
  out << "family,parameter,willmore_excess,perimeter_excess,capacity_deficit,included,perimeter_over_willmore,"
         "capacity_over_perimeter\n";
  for (const auto& r : s.rows) {
    out << r.family << ',' << format_double(r.parameter) << ',' << format_double(r.willmore_excess) << ','
        << format_double(r.perimeter_excess) << ',' << format_double(r.capacity_deficit) << ','
        << (r.included ? 1 : 0) << ',' << format_double(r.perimeter_over_willmore) << ','
        << format_double(r.capacity_over_perimeter) << '\n';
  }
}

}  // namespace chargedrop::io
