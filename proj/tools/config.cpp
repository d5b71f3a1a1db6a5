#include "config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ifsthermo/errors.hpp"

namespace ifsthermo::cli {

namespace {

using nlohmann::json;

// A JSON object together with its path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw InputError("config: " + path_ + ": " + what); }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!keys.count(it.key())) child_path_fail(it.key(), "unknown key");
    }
  }

  bool has(const char* key) const { return value_.contains(key) && !value_.at(key).is_null(); }

  Node at(const std::string& key) const {
    if (!value_.contains(key)) child_path_fail(key, "missing required field");
    return Node(value_.at(key), path_ + "." + key);
  }

  Node at(std::size_t index) const { return Node(value_.at(index), path_ + "[" + std::to_string(index) + "]"); }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be positive");
    return v;
  }

  long long integer(long long min) const {
    if (!value_.is_number_integer()) fail("expected an integer");
    const long long v = value_.get<long long>();
    if (v < min) fail("must be at least " + std::to_string(min));
    return v;
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::vector<double> numbers() const {
    if (!value_.is_array()) fail("expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.push_back(at(i).number());
    return out;
  }

  Word word() const {
    if (!value_.is_array()) fail("expected an array of symbols");
    Word out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.push_back(static_cast<Symbol>(at(i).integer(0)));
    return out;
  }

 private:
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& what) const {
    throw InputError("config: " + path_ + "." + key + ": " + what);
  }

  const json& value_;
  std::string path_;
};

IfsSpec read_system(const Node& n) {
  n.require_object({"domain", "maps", "ratios"});
  IfsSpec spec;
  if (n.has("domain")) {
    const Node d = n.at("domain");
    const auto v = d.numbers();
    if (v.size() != 2 || !(v[0] < v[1])) d.fail("expected [lo, hi] with lo < hi");
    spec.domain = {v[0], v[1]};
  }
  if (n.has("ratios") == n.has("maps")) n.fail("give exactly one of \"maps\" or \"ratios\"");
  if (n.has("ratios")) {
    // Two-map shorthand: f_0(x) = a0 x, f_1(x) = a1 x + 1 - a1 on [0, 1].
    const Node r = n.at("ratios");
    const auto v = r.numbers();
    if (v.size() != 2) r.fail("expected two ratios");
    if (n.has("domain")) n.fail("\"ratios\" fixes the domain to [0, 1]");
    return IfsSpec::two_map_affine(v[0], v[1]);
  }
  const Node maps = n.at("maps");
  if (!maps.value().is_array()) maps.fail("expected an array of maps");
  for (std::size_t i = 0; i < maps.value().size(); ++i) {
    const Node m = maps.at(i);
    m.require_object({"kind", "ratio", "offset", "c", "d", "e"});
    const std::string kind = m.at("kind").string();
    if (kind == "affine") {
      spec.maps.emplace_back(AffineMap{m.at("ratio").number(), m.at("offset").number()});
    } else if (kind == "nonlinear") {
      spec.maps.emplace_back(QuadraticMap{m.at("c").number(), m.at("d").number(), m.at("e").number()});
    } else {
      m.at("kind").fail("unknown map kind \"" + kind + "\" (expected affine or nonlinear)");
    }
  }
  return spec;
}

PotentialConfig read_potential(const Node& n) {
  n.require_object({"form", "t", "coeff_phi", "coeff_base", "base", "probabilities"});
  PotentialConfig p;
  p.form = n.at("form").string();
  if (p.form == "scaled-geometric") {
    p.t = n.at("t").number();
  } else if (p.form == "linear-combination") {
    p.coeff_phi = n.at("coeff_phi").number();
    p.coeff_base = n.at("coeff_base").number();
    p.base = std::make_shared<PotentialConfig>(read_potential(n.at("base")));
  } else if (p.form == "bernoulli") {
    const Node probs = n.at("probabilities");
    p.probabilities = probs.numbers();
    for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
      if (!(p.probabilities[i] > 0.0)) probs.at(i).fail("probabilities must be positive");
    }
  } else if (p.form != "geometric" && p.form != "darst-shift" && p.form != "conformal") {
    n.at("form").fail("unknown potential form \"" + p.form +
                      "\" (expected geometric, scaled-geometric, darst-shift, conformal, linear-combination or "
                      "bernoulli)");
  }
  return p;
}

void read_numerics(const Node& n, RunConfig& c) {
  n.require_object({"depth", "enumeration_budget", "root_tolerance", "max_iterations", "fd_step", "richardson",
                    "pressure_tolerance", "admissibility_depth", "positivity_margin", "validation_grid"});
  ThermoSettings& s = c.numerics;
  if (n.has("depth")) s.depth = static_cast<int>(n.at("depth").integer(1));
  if (n.has("enumeration_budget")) s.enumeration_budget = static_cast<std::uint64_t>(n.at("enumeration_budget").integer(1));
  if (n.has("root_tolerance")) s.root_tolerance = n.at("root_tolerance").positive();
  if (n.has("max_iterations")) s.max_iterations = static_cast<int>(n.at("max_iterations").integer(1));
  if (n.has("fd_step")) s.fd_step = n.at("fd_step").positive();
  if (n.has("richardson")) s.richardson = n.at("richardson").boolean();
  if (n.has("pressure_tolerance")) s.pressure_tolerance = n.at("pressure_tolerance").positive();
  if (n.has("admissibility_depth")) s.admissibility_depth = static_cast<int>(n.at("admissibility_depth").integer(1));
  if (n.has("positivity_margin")) s.positivity_margin = n.at("positivity_margin").number();
  if (n.has("validation_grid")) c.validation_grid = static_cast<int>(n.at("validation_grid").integer(2));
}

void read_output(const Node& n, RunConfig& c) {
  n.require_object({"format", "path"});
  if (n.has("format")) {
    c.format = n.at("format").string();
    if (c.format != "csv" && c.format != "json") n.at("format").fail("expected \"csv\" or \"json\"");
  }
  if (n.has("path")) c.out_path = n.at("path").string();
}

void read_commands(const Node& root, RunConfig& c) {
  if (root.has("pressure")) {
    const Node n = root.at("pressure");
    n.require_object({"t"});
    if (n.has("t")) c.pressure.t = n.at("t").number();
  }
  if (root.has("beta_curve")) {
    const Node n = root.at("beta_curve");
    n.require_object({"t_min", "t_max", "steps"});
    if (n.has("t_min")) c.beta_curve.t_min = n.at("t_min").number();
    if (n.has("t_max")) c.beta_curve.t_max = n.at("t_max").number();
    if (n.has("steps")) c.beta_curve.steps = static_cast<int>(n.at("steps").integer(2));
  }
  if (root.has("staircase")) {
    const Node n = root.at("staircase");
    n.require_object({"level"});
    if (n.has("level")) c.staircase.level = static_cast<int>(n.at("level").integer(1));
  }
  if (root.has("scan")) {
    const Node n = root.at("scan");
    n.require_object({"prefix", "period", "construct", "min_length", "level_step", "depth", "ceiling", "min_chain"});
    ScanConfig& s = c.scan;
    if (n.has("prefix")) s.prefix = n.at("prefix").word();
    if (n.has("period")) s.period = n.at("period").word();
    if (n.has("construct")) {
      const std::string how = n.at("construct").string();
      if (how != "blocks") n.at("construct").fail("expected \"blocks\"");
      s.construct_blocks = true;
    }
    if (n.has("min_length")) s.min_length = static_cast<std::size_t>(n.at("min_length").integer(1));
    if (n.has("level_step")) s.level_step = n.at("level_step").positive();
    if (n.has("depth")) s.depth = static_cast<int>(n.at("depth").integer(3));
    if (n.has("ceiling")) s.ceiling = n.at("ceiling").number();
    if (n.has("min_chain")) s.min_chain = static_cast<std::size_t>(n.at("min_chain").integer(1));
  }
}

std::string line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw InputError(source + ": " + line_and_column(text, e.byte) + ": " + what);
  }
  const Node root(doc, "$");
  root.require_object({"system", "potential", "alpha", "numerics", "output", "pressure", "beta_curve", "staircase",
                       "scan"});
  RunConfig c;
  c.system = read_system(root.at("system"));
  if (root.has("potential")) c.potential = read_potential(root.at("potential"));
  if (root.has("alpha")) c.alpha = root.at("alpha").positive();
  if (root.has("numerics")) read_numerics(root.at("numerics"), c);
  if (root.has("output")) read_output(root.at("output"), c);
  read_commands(root, c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

void apply_budget_override(RunConfig& config) {
  const char* raw = std::getenv(kBudgetEnv);
  if (raw == nullptr || *raw == '\0') return;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || end == raw || *end != '\0' || v == 0 || raw[0] == '-') {
    throw InputError(std::string(kBudgetEnv) + ": expected a positive integer, got \"" + raw + "\"");
  }
  config.numerics.enumeration_budget = v;
}

PotentialSpec resolve_potential(const PotentialConfig& p, const Thermo& thermo) {
  if (p.form == "geometric") return geometric_potential();
  if (p.form == "scaled-geometric") return scaled_geometric(p.t);
  if (p.form == "darst-shift") return thermo.darst_shift();
  if (p.form == "conformal") return thermo.conformal_potential();
  if (p.form == "linear-combination") return linear_combination(p.coeff_phi, p.coeff_base, resolve_potential(*p.base, thermo));
  if (p.form == "bernoulli") {
    if (p.probabilities.size() != thermo.spec().alphabet_size()) {
      throw InputError("config: $.potential.probabilities: expected " + std::to_string(thermo.spec().alphabet_size()) +
                       " entries, one per map");
    }
    return bernoulli_potential(p.probabilities);
  }
  throw InputError("config: $.potential.form: unknown form " + p.form);
}

Word parse_word(const std::string& text, const std::string& what) {
  Word out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (item.empty() || *end != '\0' || v < 0) throw InputError(what + ": expected comma-separated symbols, got \"" + text + "\"");
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

}  // namespace ifsthermo::cli
