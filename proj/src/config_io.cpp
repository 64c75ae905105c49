#include "oscsim/config_io.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "oscsim/csv.hpp"
#include "oscsim/errors.hpp"
#include "oscsim/rng.hpp"
#include "oscsim/topology.hpp"

namespace oscsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_f64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.empty() || text[0] == '-')
      throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + text +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

// Pulls keys out of the raw map, canonicalizes values, and records which
// keys were consumed so leftovers can be reported as unknown.
class Resolver {
 public:
  explicit Resolver(const KeyValueMap& raw) : raw_(raw) {}

  std::optional<std::string> peek(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::string require(const std::string& key, const std::string& context) {
    auto v = peek(key);
    if (!v) throw ConfigError("key '" + key + "' is required for " + context);
    return *v;
  }

  double f64(const std::string& key, double def) {
    auto v = peek(key);
    const double x = v ? parse_f64(key, *v) : def;
    out_[key] = format_double(x);
    return x;
  }

  double f64_required(const std::string& key, const std::string& context) {
    const double x = parse_f64(key, require(key, context));
    out_[key] = format_double(x);
    return x;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) {
    auto v = peek(key);
    const std::uint64_t x = v ? parse_u64(key, *v) : def;
    out_[key] = std::to_string(x);
    return x;
  }

  std::size_t size(const std::string& key, std::size_t def) {
    return static_cast<std::size_t>(u64(key, def));
  }

  std::size_t size_required(const std::string& key, const std::string& context) {
    const std::uint64_t x = parse_u64(key, require(key, context));
    out_[key] = std::to_string(x);
    return static_cast<std::size_t>(x);
  }

  bool boolean(const std::string& key, bool def) {
    auto v = peek(key);
    const bool x = v ? parse_bool(key, *v) : def;
    out_[key] = x ? "true" : "false";
    return x;
  }

  std::string token(const std::string& key, const std::string& def,
                    const std::vector<std::string>& allowed) {
    auto v = peek(key);
    const std::string x = v ? *v : def;
    for (const auto& a : allowed)
      if (x == a) {
        out_[key] = x;
        return x;
      }
    std::string opts;
    for (const auto& a : allowed) {
      if (!opts.empty()) opts += ", ";
      opts += a;
    }
    throw ConfigError("key '" + key + "': expected one of {" + opts + "}, got '" + x +
                      "'");
  }

  std::string text_required(const std::string& key, const std::string& context) {
    const std::string x = require(key, context);
    out_[key] = x;
    return x;
  }

  void finish() {
    std::vector<std::string> leftover;
    for (const auto& [k, v] : raw_) {
      if (k.rfind("meta.", 0) == 0) {
        out_[k] = v;
        continue;
      }
      if (!used_.count(k)) leftover.push_back(k);
    }
    if (!leftover.empty()) {
      std::string msg = "unknown or inapplicable key(s):";
      for (const auto& k : leftover) msg += " " + k;
      throw ConfigError(msg);
    }
  }

  bool has(const std::string& key) const { return raw_.count(key) != 0; }
  KeyValueMap take_out() { return std::move(out_); }

 private:
  const KeyValueMap& raw_;
  std::set<std::string> used_;
  KeyValueMap out_;
};

std::vector<double> load_delay_matrix(const std::filesystem::path& path, std::size_t p) {
  const std::string text = read_text_file(path);
  std::vector<double> m;
  m.reserve(p * p);
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0, line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != p)
      throw ConfigError("delay matrix " + path.string() + " line " +
                        std::to_string(line_no) + ": expected " + std::to_string(p) +
                        " columns, got " + std::to_string(cells.size()));
    for (const auto& c : cells) m.push_back(parse_f64("delay.file cell", trim(c)));
    ++row;
  }
  if (row != p)
    throw ConfigError("delay matrix " + path.string() + ": expected " +
                      std::to_string(p) + " rows, got " + std::to_string(row));
  return m;
}

}  // namespace

KeyValueMap parse_config_text(const std::string& text) {
  KeyValueMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key or value");
    if (map.count(key))
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                        key + "'");
    map[key] = value;
  }
  return map;
}

KeyValueMap load_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

void apply_override(KeyValueMap& map, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty())
    throw ConfigError("override '" + assignment + "': empty key or value");
  map[key] = value;
}

KeyValueMap resolve_config(const KeyValueMap& raw) {
  Resolver r(raw);

  const std::uint64_t master = r.u64("seed", 1);
  r.size("oscillators", 2);
  r.f64("t_comp", 0.9);
  r.f64("t_comm", 0.1);
  r.token("protocol", "eager", {"eager", "rendezvous"});
  r.f64("kappa", 1.0);
  r.f64("t_end", 1.0);

  const std::string topo =
      r.token("topology.kind", "none", {"none", "chain", "mesh", "random", "file"});
  if (topo == "chain") {
    r.token("topology.direction", "bidir", {"uni", "bidir"});
    r.boolean("topology.periodic", false);
  } else if (topo == "mesh") {
    r.size_required("topology.rows", "topology.kind = mesh");
    r.size_required("topology.cols", "topology.kind = mesh");
    r.boolean("topology.periodic", false);
  } else if (topo == "random") {
    r.f64_required("topology.probability", "topology.kind = random");
    r.boolean("topology.directed", false);
    r.u64("topology.seed", derive_seed(master, kTopologyStreamTag));
  } else if (topo == "file") {
    r.text_required("topology.file", "topology.kind = file");
  }

  const std::string pot = r.token("potential.kind", "sin",
                                  {"sin", "tanh", "piecewise_sin", "fourier"});
  if (pot == "tanh") {
    r.f64("potential.sharpness", 1.0);
  } else if (pot == "piecewise_sin") {
    r.f64("potential.width", kPi / 6.0);
  } else if (pot == "fourier") {
    r.f64("potential.a", 0.25);
    r.f64("potential.b", 0.25);
    r.size("potential.harmonics", 3);
  }

  // Integrator before noise/delay: refresh intervals default off min_step.
  r.f64("integrator.rel_tol", 1e-6);
  r.f64("integrator.abs_tol", 1e-9);
  r.f64("integrator.init_step", 1e-3);
  r.f64("integrator.max_step", 0.05);
  const double min_step = r.f64("integrator.min_step", 1e-4);
  r.f64("integrator.sample_interval", 0.01);

  r.f64("noise.coefficient", 0.0);
  r.token("noise.base", "intrinsic", {"intrinsic", "velocity"});
  r.f64("noise.refresh_interval", 100.0 * min_step);
  r.u64("noise.seed", derive_seed(master, kNoiseStreamTag));

  const std::string delay =
      r.token("delay.kind", "none", {"none", "constant", "stochastic"});
  if (delay == "constant") {
    const bool has_tau = r.has("delay.tau");
    const bool has_file = r.has("delay.file");
    if (has_tau == has_file)
      throw ConfigError(
          "delay.kind = constant needs exactly one of delay.tau or delay.file");
    if (has_tau)
      r.f64_required("delay.tau", "delay.kind = constant");
    else
      r.text_required("delay.file", "delay.kind = constant");
  } else if (delay == "stochastic") {
    r.f64_required("delay.mean", "delay.kind = stochastic");
    r.f64("delay.jitter", 0.0);
    r.f64("delay.refresh_interval", 100.0 * min_step);
    r.u64("delay.seed", derive_seed(master, kDelayStreamTag));
  }

  const std::string init =
      r.token("initial.kind", "uniform", {"uniform", "random", "linear", "localized"});
  if (init == "random") {
    r.u64("initial.seed", derive_seed(master, kInitialStreamTag));
  } else if (init == "localized") {
    r.size("initial.count", 1);
    r.f64("initial.value", 0.0);
  }

  r.f64("output.heatmap_interval", 0.0);
  r.boolean("output.wrap_heatmap", false);
  r.boolean("output.wrapped_gradient", false);
  r.boolean("output.circle", false);

  r.finish();
  return r.take_out();
}

LoadedConfig build_config(const KeyValueMap& raw) {
  KeyValueMap m = resolve_config(raw);
  auto get = [&m](const std::string& k) -> const std::string& {
    auto it = m.find(k);
    if (it == m.end()) throw ConfigError("internal: missing resolved key " + k);
    return it->second;
  };

  LoadedConfig lc;
  SimulationConfig& cfg = lc.sim;
  const std::size_t p = static_cast<std::size_t>(parse_u64("oscillators", get("oscillators")));
  cfg.oscillator_count = p;
  cfg.t_comp = parse_f64("t_comp", get("t_comp"));
  cfg.t_comm = parse_f64("t_comm", get("t_comm"));
  cfg.protocol_factor = get("protocol") == "rendezvous" ? 2 : 1;
  cfg.comm_distance = parse_f64("kappa", get("kappa"));
  cfg.t_end = parse_f64("t_end", get("t_end"));

  const std::string topo = get("topology.kind");
  if (topo == "none") {
    cfg.topology = TopologyMatrix(p);
  } else if (topo == "chain") {
    const auto dir = get("topology.direction") == "uni" ? ChainDirection::unidirectional
                                                        : ChainDirection::bidirectional;
    cfg.topology = chain_topology(p, dir, get("topology.periodic") == "true");
  } else if (topo == "mesh") {
    cfg.topology = mesh2d_topology(
        static_cast<std::size_t>(parse_u64("topology.rows", get("topology.rows"))),
        static_cast<std::size_t>(parse_u64("topology.cols", get("topology.cols"))),
        get("topology.periodic") == "true");
    if (cfg.topology.size() != p)
      throw ConfigError("topology.rows * topology.cols must equal oscillators");
  } else if (topo == "random") {
    cfg.topology = random_topology(p, parse_f64("topology.probability",
                                                get("topology.probability")),
                                   parse_u64("topology.seed", get("topology.seed")),
                                   get("topology.directed") == "true");
  } else {
    cfg.topology = load_topology_csv(get("topology.file"));
    if (cfg.topology.size() != p)
      throw ConfigError("topology file size does not match oscillators");
  }

  const std::string pot = get("potential.kind");
  if (pot == "sin") {
    cfg.potential = SinPotential{};
  } else if (pot == "tanh") {
    cfg.potential =
        TanhPotential{parse_f64("potential.sharpness", get("potential.sharpness"))};
  } else if (pot == "piecewise_sin") {
    cfg.potential =
        PiecewiseSinPotential{parse_f64("potential.width", get("potential.width"))};
  } else {
    cfg.potential = FourierPotential{
        parse_f64("potential.a", get("potential.a")),
        parse_f64("potential.b", get("potential.b")),
        static_cast<int>(parse_u64("potential.harmonics", get("potential.harmonics")))};
  }

  cfg.noise.coefficient = parse_f64("noise.coefficient", get("noise.coefficient"));
  cfg.noise.base =
      get("noise.base") == "velocity" ? NoiseBase::velocity : NoiseBase::intrinsic;
  cfg.noise.refresh_interval =
      parse_f64("noise.refresh_interval", get("noise.refresh_interval"));
  cfg.noise.seed = parse_u64("noise.seed", get("noise.seed"));

  const std::string delay = get("delay.kind");
  if (delay == "none") {
    cfg.delay = NoDelay{};
  } else if (delay == "constant") {
    ConstantDelay cd;
    if (m.count("delay.tau")) {
      const double tau = parse_f64("delay.tau", get("delay.tau"));
      cd.tau.assign(p * p, tau);
      for (std::size_t i = 0; i < p; ++i) cd.tau[i * p + i] = 0.0;
    } else {
      cd.tau = load_delay_matrix(get("delay.file"), p);
    }
    cfg.delay = std::move(cd);
  } else {
    StochasticDelay sd;
    sd.mean = parse_f64("delay.mean", get("delay.mean"));
    sd.jitter = parse_f64("delay.jitter", get("delay.jitter"));
    sd.refresh_interval =
        parse_f64("delay.refresh_interval", get("delay.refresh_interval"));
    sd.seed = parse_u64("delay.seed", get("delay.seed"));
    cfg.delay = sd;
  }

  const std::string init = get("initial.kind");
  if (init == "uniform") {
    cfg.initial = UniformStart{};
  } else if (init == "random") {
    cfg.initial = RandomStart{parse_u64("initial.seed", get("initial.seed"))};
  } else if (init == "linear") {
    cfg.initial = LinearlySpacedStart{};
  } else {
    cfg.initial = LocalizedPerturbation{
        static_cast<std::size_t>(parse_u64("initial.count", get("initial.count"))),
        parse_f64("initial.value", get("initial.value"))};
  }

  cfg.integrator.rel_tol = parse_f64("integrator.rel_tol", get("integrator.rel_tol"));
  cfg.integrator.abs_tol = parse_f64("integrator.abs_tol", get("integrator.abs_tol"));
  cfg.integrator.initial_step =
      parse_f64("integrator.init_step", get("integrator.init_step"));
  cfg.integrator.max_step = parse_f64("integrator.max_step", get("integrator.max_step"));
  cfg.integrator.min_step = parse_f64("integrator.min_step", get("integrator.min_step"));
  cfg.integrator.sample_interval =
      parse_f64("integrator.sample_interval", get("integrator.sample_interval"));

  lc.output.heatmap_interval =
      parse_f64("output.heatmap_interval", get("output.heatmap_interval"));
  lc.output.wrap_heatmap = get("output.wrap_heatmap") == "true";
  lc.output.wrapped_gradient = get("output.wrapped_gradient") == "true";
  lc.output.circle = get("output.circle") == "true";

  const ValidationReport report = validate(cfg);
  if (!report.ok()) throw ConfigError(report.summary());

  lc.resolved = std::move(m);
  return lc;
}

std::string serialize_config(const KeyValueMap& resolved) {
  std::string text;
  for (const auto& [k, v] : resolved) {
    text += k;
    text += " = ";
    text += v;
    text += '\n';
  }
  return text;
}

}  // namespace oscsim
