#pragma once

// Command dispatch for the hc3 tool. Parsing of argv lives in tools/hc3.cpp;
// everything here works on a RunConfig so tests can drive it directly.
//
// Output: JSON objects carry "schema": "hc3/1" and keep a fixed key order;
// CSV has one header row. Reals are printed with 12 significant digits.
// Exit codes: 0 ok, 2 invalid input, 3 solver failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hc3/asymptotic_series.hpp"
#include "hc3/boundary_gauge.hpp"
#include "hc3/constants.hpp"
#include "hc3/critical_field.hpp"
#include "hc3/disc_spectrum.hpp"
#include "hc3/error.hpp"
#include "hc3/model_operator.hpp"
#include "hc3/parallel.hpp"
#include "hc3/perturbation.hpp"

namespace hc3::cli {

enum class Command { constants, mu, disc_lambda, hc3, series, gauge_check, trial_check, sweep };
enum class Format { json, csv };

inline const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"constants", Command::constants},     {"mu", Command::mu},
      {"disc-lambda", Command::disc_lambda}, {"hc3", Command::hc3},
      {"series", Command::series},           {"gauge-check", Command::gauge_check},
      {"trial-check", Command::trial_check}, {"sweep", Command::sweep}};
  return names;
}

inline std::optional<Command> parse_command(const std::string& name) {
  const auto& names = command_names();
  if (auto it = names.find(name); it != names.end()) return it->second;
  return std::nullopt;
}

inline std::optional<Format> parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  return std::nullopt;
}

struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;

  /// min, min + step, ... up to max (inclusive within 1e-9 step).
  std::vector<double> values() const {
    std::vector<double> v;
    const auto count = static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) v.push_back(min + step * static_cast<double>(i));
    return v;
  }
};

struct RunConfig {
  Command command = Command::constants;
  std::optional<Format> format;  // unset: json for single-record commands, csv for tables
  std::optional<double> b;
  std::optional<Range> b_range;
  std::optional<double> kappa;
  std::optional<Range> kappa_range;
  std::optional<double> at;  // zeta for the `mu` command; default xi0
  std::optional<std::string> zeta_path;
  int order = 8;
  double k_max = 1.0;
  double k2 = 0.0;
  double grid_l = 20.0;
  std::size_t grid_n = 4001;
  double radial_n = 100.0;  // radial cells per unit of tau

  HalfLineGrid grid() const { return {grid_l, grid_n}; }
  RadialGrid radial() const { return {1.0 / radial_n, 12.0, true}; }

  Format output_format() const {
    if (format) return *format;
    switch (command) {
      case Command::disc_lambda:
      case Command::hc3:
      case Command::trial_check:
      case Command::sweep:
        return Format::csv;
      default:
        return Format::json;
    }
  }

  std::vector<double> b_values() const { return b_range ? b_range->values() : std::vector<double>{*b}; }
  std::vector<double> kappa_values() const {
    return kappa_range ? kappa_range->values() : std::vector<double>{*kappa};
  }

  void validate() const {
    auto check_range = [](const std::optional<Range>& r, const char* name) {
      if (!r) return;
      const std::string n(name);
      require(std::isfinite(r->min) && r->min > 0.0, "--" + n + "-min must be positive");
      require(std::isfinite(r->max) && r->max >= r->min, "--" + n + "-max must be at least --" + n + "-min");
      require(std::isfinite(r->step) && r->step > 0.0, "--" + n + "-step must be positive");
      require((r->max - r->min) / r->step <= 1e5, "--" + n + " range has too many points");
    };
    check_range(b_range, "b");
    check_range(kappa_range, "kappa");
    if (b) require(std::isfinite(*b) && *b > 0.0, "--b must be positive");
    if (kappa) require(std::isfinite(*kappa) && *kappa > 0.0, "--kappa must be positive");
    if (at) require(std::isfinite(*at), "--at must be finite");
    require(order >= 0 && order <= 64, "--order must lie in [0, 64]");
    require(std::isfinite(k_max), "--k-max must be finite");
    require(std::isfinite(k2) && k2 >= 0.0, "--k2 must be nonnegative");
    require(std::isfinite(grid_l) && grid_l > 0.0, "--grid-l must be positive");
    require(grid_n >= 16, "--grid-n must be at least 16");
    require(std::isfinite(radial_n) && radial_n > 0.0, "--radial-n must be positive");
    require(!(b && b_range), "give either --b or a --b-min/--b-max/--b-step range, not both");
    require(!(kappa && kappa_range), "give either --kappa or a --kappa range, not both");
    switch (command) {
      case Command::disc_lambda:
        require(b || b_range, "disc-lambda needs --b or a --b range");
        break;
      case Command::hc3:
        require(kappa || kappa_range, "hc3 needs --kappa or a --kappa range");
        break;
      case Command::trial_check:
        for (double x : (b || b_range) ? b_values() : std::vector<double>{16.0}) {
          require(x >= 16.0, "trial-check needs B >= 16");
        }
        break;
      case Command::sweep:
        require((b_range != std::nullopt) != (kappa_range != std::nullopt),
                "sweep needs exactly one of a --b range or a --kappa range");
        break;
      default:
        break;
    }
  }
};

/// The value printed with 12 significant digits, read back as a double.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

using Json = nlohmann::ordered_json;

inline Json number(double x) { return std::isfinite(x) ? Json(round12(x)) : Json(nullptr); }

/// Rows of named columns, rendered as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        const Json& v = row[i];
        if (v.is_number_float()) out << format12(v.get<double>());
        else if (v.is_null()) out << "nan";
        else if (v.is_string()) out << v.get<std::string>();
        else out << v.dump();
      }
      out << '\n';
    }
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

inline Json header(const std::string& command) {
  Json j = Json::object();
  j["schema"] = "hc3/1";
  j["command"] = command;
  return j;
}

/// Constants on the configured grid; the default grid reuses the cached set.
inline const DeGennesConstants& constants_for(const RunConfig& config) {
  if (config.grid() == HalfLineGrid{}) return default_constants();
  static std::mutex mutex;
  static std::map<std::pair<double, std::size_t>, DeGennesConstants> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(config.grid_l, config.grid_n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_constants(config.grid())).first;
  return it->second;
}

/// CSV rows "j,zeta_j"; blank lines, '#' comments and a non-numeric header
/// row are skipped.
inline std::vector<double> read_zeta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open zeta file: " + path);
  std::vector<double> zeta;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument("zeta file line " + std::to_string(line_no) + ": expected j,zeta_j");
    const std::string js = line.substr(0, comma), vs = line.substr(comma + 1);
    char* end = nullptr;
    const long j = std::strtol(js.c_str(), &end, 10);
    if (end == js.c_str()) {
      if (line_no == 1) continue;  // header
      throw InvalidArgument("zeta file line " + std::to_string(line_no) + ": bad index");
    }
    if (j < 0 || j > 1000) throw InvalidArgument("zeta file line " + std::to_string(line_no) + ": index out of range");
    const double v = std::strtod(vs.c_str(), &end);
    if (end == vs.c_str() || !std::isfinite(v)) {
      throw InvalidArgument("zeta file line " + std::to_string(line_no) + ": bad value");
    }
    if (zeta.size() <= static_cast<std::size_t>(j)) zeta.resize(static_cast<std::size_t>(j) + 1, 0.0);
    zeta[static_cast<std::size_t>(j)] = v;
  }
  return zeta;
}

namespace detail {

inline Table disc_table(const RunConfig& config, const std::vector<double>& Bs,
                        const std::function<void(std::size_t)>& progress) {
  const DeGennesConstants& c = constants_for(config);
  const RadialGrid grid = config.radial();
  auto rows = parallel_map(
      Bs,
      [&](double B) {
        const DiscEigenvalue d = lambda1_disc(B, c, grid);
        const OneSidedDerivative r = right_derivative(B, -1.0, c, grid);
        return std::vector<Json>{number(B),         Json(d.m_star),  number(d.lambda1),
                                 number(d.delta_m), number(d.Delta_B), number(expansion_residual(d, c)),
                                 number(r.right)};
      },
      progress);
  return {{"B", "m_star", "lambda1", "delta_m", "Delta_B", "residual", "right_derivative"}, std::move(rows)};
}

inline Table hc3_table(const RunConfig& config, const std::vector<double>& kappas,
                       const std::function<void(std::size_t)>& progress) {
  const DeGennesConstants& c = constants_for(config);
  const Lambda1Cache cache(c, config.radial());
  auto rows = parallel_map(
      kappas,
      [&](double kappa) {
        const CriticalFieldResult r = critical_field(kappa, cache);
        return std::vector<Json>{number(kappa),         number(r.H),           number(r.residual),
                                 number(r.lower_local), number(r.upper_local), number(r.asymptotic_gap(c))};
      },
      progress);
  return {{"kappa", "H", "residual", "lower_local", "upper_local", "asymptotic_gap"}, std::move(rows)};
}

inline void emit_table(const RunConfig& config, const std::string& command, const Table& t, std::ostream& out) {
  if (config.output_format() == Format::csv) {
    t.write_csv(out);
  } else {
    Json j = header(command);
    j["rows"] = t.to_json();
    out << j.dump(2) << '\n';
  }
}

/// key,value CSV for flat records.
inline void emit_record(const RunConfig& config, Json record, std::ostream& out) {
  if (config.output_format() == Format::json) {
    out << record.dump(2) << '\n';
    return;
  }
  out << "key,value\n";
  for (const auto& [key, value] : record.items()) {
    if (key == "schema" || key == "command") continue;
    if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) {
        out << key << '.' << k2 << ',' << (v2.is_number_float() ? format12(v2.get<double>()) : v2.dump()) << '\n';
      }
    } else {
      out << key << ',' << (value.is_number_float() ? format12(value.get<double>()) : value.dump()) << '\n';
    }
  }
}

inline void run_constants(const RunConfig& config, std::ostream& out) {
  const DeGennesConstants& c = constants_for(config);
  Json j = header("constants");
  j["xi0"] = number(c.xi0);
  j["theta0"] = number(c.theta0);
  j["C1"] = number(c.C1);
  j["I2"] = number(c.I2);
  j["delta0"] = number(c.delta0);
  j["C0"] = number(c.C0);
  j["lambda2"] = {{"a2", number(c.lambda2.a2)}, {"a1", number(c.lambda2.a1)}, {"a0", number(c.lambda2.a0)}};
  j["grid"] = {{"L", number(c.grid.length())}, {"n", c.grid.points()}, {"extrapolated", c.extrapolated}};
  emit_record(config, std::move(j), out);
}

inline void run_mu(const RunConfig& config, std::ostream& out) {
  const HalfLineGrid grid = config.grid();
  const double zeta = config.at ? *config.at : constants_for(config).xi0;
  const GroundMode u = ground_state(zeta, grid);
  const double fine = mu(zeta, grid.refined());
  Json j = header("mu");
  j["zeta"] = number(zeta);
  j["mu"] = number(u.mu);
  j["mu_extrapolated"] = number(richardson(u.mu, fine));
  j["mu_derivative"] = number(mu_derivative(u));
  j["boundary_value"] = number(u.boundary_value());
  j["grid"] = {{"L", number(grid.length())}, {"n", grid.points()}};
  emit_record(config, std::move(j), out);
}

inline void run_series(const RunConfig& config, std::ostream& out) {
  const DeGennesConstants& c = constants_for(config);
  std::vector<double> zeta;
  if (config.zeta_path) zeta = read_zeta_file(*config.zeta_path);
  const ExpansionInputs in = ExpansionInputs::from_constants(c, config.k_max, config.k2, zeta);
  const Series lam = lambda1_series(in, config.order);
  const CriticalFieldSeries inv = invert_critical_field(lam, config.order);
  const Series residual = resubstitution_residual(lam, inv);
  double worst = 0.0;
  for (int p = 0; p <= residual.truncation_order(); ++p) worst = std::max(worst, std::abs(residual[p]));

  // exponent e on the kappa^{-1/8} lattice is kappa^{-e/8}
  Table terms{{"exponent", "coefficient"}, {}};
  for (int e = inv.H.lowest_exponent(); e <= inv.H.highest_exponent(); ++e) {
    if (inv.H[e] == 0.0) continue;
    terms.rows.push_back({number(-e / 8.0), number(inv.H[e])});
  }
  if (config.output_format() == Format::csv) {
    out << "term,index,exponent,coefficient\n";
    for (std::size_t j = 0; j < inv.eta.size(); ++j) {
      out << "eta," << j << ",," << format12(inv.eta[j]) << '\n';
    }
    for (const auto& row : terms.rows) {
      out << "H,," << format12(row[0].get<double>()) << ',' << format12(row[1].get<double>()) << '\n';
    }
    return;
  }
  Json j = header("series");
  j["order"] = config.order;
  j["k_max"] = number(config.k_max);
  j["k2"] = number(config.k2);
  Json eta = Json::array();
  for (double e : inv.eta) eta.push_back(number(e));
  j["eta"] = std::move(eta);
  j["H_terms"] = terms.to_json();
  j["max_resubstitution_residual"] = number(worst);
  out << j.dump(2) << '\n';
}

inline void run_gauge_check(const RunConfig& config, std::ostream& out) {
  const BoundaryParametrization disc = BoundaryParametrization::disc();
  const CollarField unit = CollarField::unit_field();
  const double g0 = gamma0(disc, 1.0);
  Table t{{"s", "t", "A1_bar", "polynomial", "difference"}, {}};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double s = 0.5 * std::numbers::pi * i;
    for (int k = 0; k <= 5; ++k) {
      const double tt = 0.05 * k;
      const double a = normal_form_A1(disc, unit, g0, s, tt);
      const double p = 0.5 - tt + 0.5 * tt * tt;
      worst = std::max(worst, std::abs(a - p));
      t.rows.push_back({number(s), number(tt), number(a), number(p), number(a - p)});
    }
  }
  // Perturbed field 1 + eps t: b_bound / eps should not move under halving.
  auto b_bound = [&](double eps) {
    CollarField f{[eps](double, double tt) { return 1.0 + eps * tt; }, false};
    return gauge_normal_form(disc, f, g0, 8, 16).b_bound;
  };
  const double eps = 0.1;
  const double b1 = b_bound(eps), b2 = b_bound(0.5 * eps);
  if (config.output_format() == Format::csv) {
    t.write_csv(out);
    return;
  }
  Json j = header("gauge-check");
  j["gamma0"] = number(g0);
  j["gamma0_expected"] = number(0.5);
  j["max_difference"] = number(worst);
  j["perturbed"] = {{"epsilon", number(eps)},
                    {"b_bound", number(b1)},
                    {"b_bound_half_epsilon", number(b2)},
                    {"ratio", number(b1 / eps)},
                    {"ratio_half_epsilon", number(b2 / (0.5 * eps))}};
  j["rows"] = t.to_json();
  out << j.dump(2) << '\n';
}

inline void run_trial_check(const RunConfig& config, std::ostream& out) {
  const DeGennesConstants& c = constants_for(config);
  const std::vector<double> Bs =
      (config.b || config.b_range) ? config.b_values() : std::vector<double>{100.0, 400.0, 1600.0};
  Table t{{"B", "delta", "norm", "residual", "scaled_residual", "scaled_norm_defect"}, {}};
  for (double B : Bs) {
    for (double delta : {0.0, c.delta0}) {
      const TrialState s = build_trial_state(delta, B, c.ground_mode);
      t.rows.push_back({number(B), number(delta), number(s.norm), number(s.residual),
                        number(s.residual * std::pow(B, 1.5)), number((s.norm - 1.0) * std::sqrt(B))});
    }
  }
  emit_table(config, "trial-check", t, out);
}

}  // namespace detail

/// Runs one command; returns the process exit code.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    std::ostringstream buffer;  // nothing reaches `out` unless the command succeeds
    const auto quiet = std::function<void(std::size_t)>{};
    switch (config.command) {
      case Command::constants:
        detail::run_constants(config, buffer);
        break;
      case Command::mu:
        detail::run_mu(config, buffer);
        break;
      case Command::disc_lambda:
        detail::emit_table(config, "disc-lambda", detail::disc_table(config, config.b_values(), quiet), buffer);
        break;
      case Command::hc3:
        detail::emit_table(config, "hc3", detail::hc3_table(config, config.kappa_values(), quiet), buffer);
        break;
      case Command::series:
        detail::run_series(config, buffer);
        break;
      case Command::gauge_check:
        detail::run_gauge_check(config, buffer);
        break;
      case Command::trial_check:
        detail::run_trial_check(config, buffer);
        break;
      case Command::sweep: {
        const bool over_b = config.b_range.has_value();
        const std::vector<double> points = over_b ? config.b_values() : config.kappa_values();
        auto progress = [&](std::size_t done) {
          err << "sweep: " << done << "/" << points.size() << '\n' << std::flush;
        };
        const Table t = over_b ? detail::disc_table(config, points, progress)
                               : detail::hc3_table(config, points, progress);
        detail::emit_table(config, "sweep", t, buffer);
        break;
      }
    }
    out << buffer.str();
    return 0;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace hc3::cli
