#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "ifsthermo/errors.hpp"
#include "ifsthermo/format.hpp"
#include "ifsthermo/gibbs.hpp"
#include "ifsthermo/hoelder.hpp"
#include "ifsthermo/thermo.hpp"

namespace ifsthermo::cli {

namespace {

using nlohmann::json;

// RFC 4180 quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) { return format_double(v); }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Common {
  std::string config_path;
  std::optional<int> depth;
  std::string out_path;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON run configuration")->required();
  cmd->add_option("--depth", c.depth, "pressure depth (scan depth for scan-point)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out_path, "output file (default: standard output)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig load(const Common& c, bool depth_is_pressure_depth) {
  RunConfig config = load_config(c.config_path);
  apply_budget_override(config);
  if (c.depth && depth_is_pressure_depth) config.numerics.depth = *c.depth;
  if (!c.out_path.empty()) config.out_path = c.out_path;
  if (!c.format.empty()) config.format = c.format;
  return config;
}

std::string cmd_pressure(const RunConfig& config) {
  const Thermo thermo(config.system, config.numerics);
  const PressureEstimate est = thermo.pressure_estimate(scaled_geometric(config.pressure.t));
  std::ostringstream out;
  if (config.format == "json") {
    json rows = json::array();
    for (const auto& [n, p] : est.per_level) rows.push_back({{"n", n}, {"P_n", json_number(p)}});
    json doc = {{"t", config.pressure.t},
                {"depth", est.depth},
                {"value", json_number(est.value)},
                {"error_indicator", json_number(est.error_indicator)},
                {"per_level", rows}};
    out << doc.dump(2) << '\n';
  } else {
    // The last row is the final estimate P_depth.
    out << "n,P_n\n";
    for (const auto& [n, p] : est.per_level) out << n << ',' << num(p) << '\n';
  }
  return out.str();
}

std::string cmd_beta_curve(const RunConfig& config) {
  const Thermo thermo(config.system, config.numerics);
  const PotentialSpec psi = resolve_potential(config.potential, thermo);
  const double alpha = config.alpha;
  thermo.require_admissible(psi, alpha, "beta-curve");
  const BetaCurveConfig& bc = config.beta_curve;
  if (bc.steps < 2) throw InputError("beta-curve: steps must be at least 2");
  const double t_max = bc.t_max.value_or(alpha + 0.2);
  if (!(t_max > bc.t_min)) throw InputError("beta-curve: t_max must exceed t_min");

  std::vector<double> ts;
  for (int i = 0; i < bc.steps; ++i) ts.push_back(bc.t_min + (t_max - bc.t_min) * i / (bc.steps - 1));
  ts.push_back(thermo.delta());
  ts.push_back(alpha);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<BetaPoint> points;
  for (double t : ts) points.push_back(thermo.beta(psi, alpha, t));

  std::ostringstream out;
  if (config.format == "json") {
    json rows = json::array();
    for (const auto& p : points) {
      rows.push_back({{"t", p.t}, {"beta", json_number(p.beta)}, {"residual", json_number(p.residual)}});
    }
    json doc = {{"alpha", alpha}, {"delta", thermo.delta()}, {"potential", psi.describe()}, {"points", rows}};
    out << doc.dump(2) << '\n';
  } else {
    out << "t,beta,residual\n";
    for (const auto& p : points) out << num(p.t) << ',' << num(p.beta) << ',' << num(p.residual) << '\n';
  }
  return out.str();
}

std::string cmd_dimensions(const RunConfig& config) {
  const Thermo thermo(config.system, config.numerics);
  const PotentialSpec psi = resolve_potential(config.potential, thermo);
  const LambdaReport r = lambda_dimension(thermo, psi, config.alpha);
  std::ostringstream out;
  if (config.format == "json") {
    json doc = {{"delta", r.delta}, {"dim_nu", r.dim_nu},       {"s", r.s},
                {"s_0", r.s0},      {"s_1", r.s1},              {"min_ratio", r.min_ratio},
                {"alpha", r.alpha}, {"ordering_note", r.ordering_note}};
    out << doc.dump(2) << '\n';
  } else {
    out << "delta,dim_nu,s,s_0,s_1,min_ratio,ordering_note\n";
    out << num(r.delta) << ',' << num(r.dim_nu) << ',' << num(r.s) << ',' << num(r.s0) << ',' << num(r.s1) << ','
        << num(r.min_ratio) << ',' << csv_field(r.ordering_note) << '\n';
  }
  return out.str();
}

std::string cmd_staircase(const RunConfig& config) {
  const Thermo thermo(config.system, config.numerics);
  const PotentialSpec psi = resolve_potential(config.potential, thermo);
  const StaircaseSample sample = staircase_sample(config.system, psi, config.staircase.level, config.numerics);
  std::ostringstream out;
  if (config.format == "json") {
    json rows = json::array();
    for (const auto& p : sample.points) rows.push_back({{"x", p.x}, {"F_lower", p.f_lower}, {"F_upper", p.f_upper}});
    json doc = {{"level", sample.level}, {"count", sample.points.size()}, {"points", rows}};
    out << doc.dump(2) << '\n';
  } else {
    write_staircase_csv(out, sample);
  }
  return out.str();
}

struct ScanFlags {
  std::string prefix, period;
  std::optional<int> constant;
  std::string construct;
  std::optional<std::size_t> min_length;
  std::optional<double> ceiling;
};

std::string cmd_scan_point(RunConfig config, const ScanFlags& flags, std::optional<int> depth) {
  ScanConfig& sc = config.scan;
  if (!flags.prefix.empty()) sc.prefix = parse_word(flags.prefix, "--prefix");
  if (!flags.period.empty()) sc.period = parse_word(flags.period, "--period");
  if (flags.constant) sc.period = {static_cast<Symbol>(*flags.constant)};
  if (!flags.construct.empty()) sc.construct_blocks = true;
  if (flags.min_length) sc.min_length = *flags.min_length;
  if (flags.ceiling) sc.ceiling = *flags.ceiling;
  if (depth) sc.depth = *depth;

  const Thermo thermo(config.system, config.numerics);
  const PotentialSpec psi = resolve_potential(config.potential, thermo);
  thermo.require_admissible(psi, config.alpha, "scan-point");

  CodedPoint point;
  if (sc.construct_blocks) {
    point = block_construction_point(config.system, psi, config.alpha, sc.min_length, sc.level_step);
  } else {
    if (sc.period.empty()) throw InputError("scan-point: the point needs a period (--period or --constant)");
    point = CodedPoint::periodic(sc.prefix, sc.period);
  }
  check_word(config.system, point.prefix);
  check_word(config.system, point.period);
  const int scan_depth =
      sc.depth > 0 ? sc.depth : static_cast<int>(std::max<std::size_t>(256, point.prefix.size() + 2 * point.period.size()));

  OscillationOptions opts;
  opts.ceiling = sc.ceiling;
  opts.min_chain = sc.min_chain;
  const OscillationSeries series = oscillation_score_series(config.system, psi, config.alpha, point, scan_depth, opts);
  std::vector<bool> in_chain(series.events.size(), false);
  for (std::size_t j : series.chain) in_chain[j] = true;

  std::ostringstream out;
  if (config.format == "json") {
    json rows = json::array();
    for (std::size_t j = 0; j < series.events.size(); ++j) {
      const BlockEvent& e = series.events[j];
      rows.push_back({{"n", e.level},
                      {"k", e.length},
                      {"i", e.symbol},
                      {"birkhoff_chi", e.birkhoff_chi},
                      {"score", e.score},
                      {"in_chain", bool(in_chain[j])}});
    }
    json doc = {{"depth", scan_depth},
                {"prefix_length", point.prefix.size()},
                {"ceiling", series.ceiling},
                {"oscillation_candidate", series.oscillation_candidate},
                {"heuristic", true},
                {"events", rows}};
    out << doc.dump(2) << '\n';
  } else {
    out << "n,k,i,score,in_chain,oscillation_candidate\n";
    for (std::size_t j = 0; j < series.events.size(); ++j) {
      const BlockEvent& e = series.events[j];
      out << e.level << ',' << e.length << ',' << e.symbol << ',' << num(e.score) << ',' << (in_chain[j] ? 1 : 0) << ','
          << (series.oscillation_candidate ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

// Returns the report and whether everything passed.
std::pair<std::string, bool> cmd_validate(const RunConfig& config) {
  ValidationOptions opts;
  opts.grid_points = config.validation_grid;
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& v : validate_ifs(config.system, opts)) rows.emplace_back(v.condition, v.detail);
  if (rows.empty()) {
    const Thermo thermo(config.system, config.numerics);
    const PotentialSpec psi = resolve_potential(config.potential, thermo);
    for (const auto& f : thermo.admissibility(psi, config.alpha).failures) rows.emplace_back("admissibility", f);
  }
  std::ostringstream out;
  if (config.format == "json") {
    json list = json::array();
    for (const auto& [c, d] : rows) list.push_back({{"condition", c}, {"detail", d}});
    json doc = {{"valid", rows.empty()}, {"violations", list}};
    out << doc.dump(2) << '\n';
  } else {
    out << "condition,detail\n";
    for (const auto& [c, d] : rows) out << csv_field(c) << ',' << csv_field(d) << '\n';
  }
  return {out.str(), rows.empty()};
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot open output file " + config.out_path);
  file << text;
  if (!file.flush()) throw InputError("failed to write output file " + config.out_path);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return kExitInput;
    case ErrorKind::numerical: return kExitNumerical;
    case ErrorKind::resource: return kExitResource;
  }
  return kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermodynamic formalism for interval iterated function systems", "ifsthermo"};
  app.require_subcommand(1);

  Common pressure_c, beta_c, dims_c, stair_c, scan_c, valid_c;
  std::optional<double> t, t_min, t_max;
  std::optional<int> steps, level, grid;
  ScanFlags scan;

  auto* pressure = app.add_subcommand("pressure", "pressure P_n(t phi) for n = 1..depth");
  add_common(pressure, pressure_c);
  pressure->add_option("--t", t, "multiplier of phi");

  auto* beta_curve = app.add_subcommand("beta-curve", "beta_alpha(t) on a grid, with t = delta and t = alpha added");
  add_common(beta_curve, beta_c);
  beta_curve->add_option("--t-min", t_min);
  beta_curve->add_option("--t-max", t_max);
  beta_curve->add_option("--steps", steps)->check(CLI::Range(2, 1 << 20));

  auto* dimensions = app.add_subcommand("dimensions", "delta, dim nu_psi and the dimension s of the exceptional set");
  add_common(dimensions, dims_c);

  auto* staircase = app.add_subcommand("staircase", "distribution function at all cylinder endpoints of a level");
  add_common(staircase, stair_c);
  staircase->add_option("--level", level)->check(CLI::PositiveNumber);

  auto* scan_point = app.add_subcommand("scan-point", "i-block scores of a coded point");
  add_common(scan_point, scan_c);
  scan_point->add_option("--prefix", scan.prefix, "comma-separated prefix symbols");
  scan_point->add_option("--period", scan.period, "comma-separated period symbols");
  scan_point->add_option("--constant", scan.constant, "constant tail symbol");
  scan_point->add_option("--construct", scan.construct, "build a point instead")->check(CLI::IsMember({"blocks"}));
  scan_point->add_option("--min-length", scan.min_length, "prefix length of the constructed point");
  scan_point->add_option("--ceiling", scan.ceiling, "score ceiling of the heuristic flag");

  auto* validate = app.add_subcommand("validate", "check the system and the potential");
  add_common(validate, valid_c);
  validate->add_option("--grid", grid, "validation grid points per map")->check(CLI::Range(2, 1 << 24));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ifsthermo: input error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    std::string text;
    RunConfig config;
    int code = kExitOk;
    if (pressure->parsed()) {
      config = load(pressure_c, true);
      if (t) config.pressure.t = *t;
      text = cmd_pressure(config);
    } else if (beta_curve->parsed()) {
      config = load(beta_c, true);
      if (t_min) config.beta_curve.t_min = *t_min;
      if (t_max) config.beta_curve.t_max = *t_max;
      if (steps) config.beta_curve.steps = *steps;
      text = cmd_beta_curve(config);
    } else if (dimensions->parsed()) {
      config = load(dims_c, true);
      text = cmd_dimensions(config);
    } else if (staircase->parsed()) {
      config = load(stair_c, true);
      if (level) config.staircase.level = *level;
      text = cmd_staircase(config);
    } else if (scan_point->parsed()) {
      config = load(scan_c, false);
      text = cmd_scan_point(config, scan, scan_c.depth);
    } else {
      config = load(valid_c, true);
      if (grid) config.validation_grid = *grid;
      auto [report, ok] = cmd_validate(config);
      text = std::move(report);
      if (!ok) {
        err << "ifsthermo: input error: the configuration violates the standing hypotheses\n";
        code = kExitInput;
      }
    }
    emit(config, text, out);
    return code;
  } catch (const Error& e) {
    err << "ifsthermo: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "ifsthermo: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ifsthermo::cli
