#include "wsnd/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "wsnd/errors.hpp"
#include "wsnd/format.hpp"

namespace wsnd {

namespace {

constexpr std::uint64_t kSensorStream = 0x53454e53;
constexpr std::uint64_t kTopologyStream = 0x544f504f;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double to_double(const std::string& v) {
  double d = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw std::invalid_argument(v);
  return d;
}

long to_long(const std::string& v) {
  long d = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw std::invalid_argument(v);
  return d;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t d = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), d);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw std::invalid_argument(v);
  return d;
}

std::string_view stop_name(ConsensusStop s) {
  return s == ConsensusStop::kOracle ? "oracle" : "local_window";
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct Field {
  const char* key;
  bool required;
  Setter set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
std::string join(const std::vector<T>& v, auto&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

const std::vector<Field>& fields() {
  auto dbl = [](double ExperimentConfig::*m) {
    return std::pair<Setter, std::function<std::string(const ExperimentConfig&)>>{
        [m](ExperimentConfig& c, const std::string& v) { c.*m = to_double(v); },
        [m](const ExperimentConfig& c) { return format_double(c.*m); }};
  };
  auto sdbl = [](double SolverConfig::*m) {
    return std::pair<Setter, std::function<std::string(const ExperimentConfig&)>>{
        [m](ExperimentConfig& c, const std::string& v) { c.solver.*m = to_double(v); },
        [m](const ExperimentConfig& c) { return format_double(c.solver.*m); }};
  };
  auto sint = [](int SolverConfig::*m) {
    return std::pair<Setter, std::function<std::string(const ExperimentConfig&)>>{
        [m](ExperimentConfig& c, const std::string& v) { c.solver.*m = static_cast<int>(to_long(v)); },
        [m](const ExperimentConfig& c) { return std::to_string(c.solver.*m); }};
  };
  auto integer = [](int ExperimentConfig::*m) {
    return std::pair<Setter, std::function<std::string(const ExperimentConfig&)>>{
        [m](ExperimentConfig& c, const std::string& v) { c.*m = static_cast<int>(to_long(v)); },
        [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
  };
  auto make = [](const char* key, bool req, auto pair) {
    return Field{key, req, std::move(pair.first), std::move(pair.second)};
  };

  static const std::vector<Field> table = [&] {
    std::vector<Field> t;
    t.push_back(make("schema_version", true, integer(&ExperimentConfig::schema_version)));
    t.push_back({"name", false, [](ExperimentConfig& c, const std::string& v) { c.name = v; },
                 [](const ExperimentConfig& c) { return c.name; }});
    t.push_back({"seed", true, [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64(v); },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
    t.push_back(make("sensors", true, integer(&ExperimentConfig::sensors)));
    t.push_back(make("samples", true, integer(&ExperimentConfig::samples)));
    t.push_back(make("U", true, dbl(&ExperimentConfig::U)));
    t.push_back(make("Pt", true, dbl(&ExperimentConfig::Pt)));
    t.push_back(make("Pfa", true, dbl(&ExperimentConfig::Pfa)));
    t.push_back(make("xi_a_db", true, dbl(&ExperimentConfig::xi_a_db)));
    t.push_back(make("signal_amplitude", false, dbl(&ExperimentConfig::signal_amplitude)));
    t.push_back(make("zeta", false, dbl(&ExperimentConfig::zeta)));
    t.push_back(make("sigma2_min", false, dbl(&ExperimentConfig::sigma2_min)));
    t.push_back(make("sigma2_max", false, dbl(&ExperimentConfig::sigma2_max)));
    t.push_back({"channel", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v == "rayleigh") c.channel = ChannelModel::kRayleigh;
                   else if (v == "unit") c.channel = ChannelModel::kUnit;
                   else throw std::invalid_argument(v);
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.channel == ChannelModel::kUnit ? "unit" : "rayleigh");
                 }});
    t.push_back(make("topology_radius", false, dbl(&ExperimentConfig::topology_radius)));
    t.push_back({"topology_file", false,
                 [](ExperimentConfig& c, const std::string& v) { c.topology_file = v; },
                 [](const ExperimentConfig& c) { return c.topology_file; }});
    t.push_back(make("lambda0_init", false, sdbl(&SolverConfig::lambda0_init)));
    t.push_back(make("kappa", false, sdbl(&SolverConfig::kappa)));
    t.push_back({"step_rule", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v != "lambda_over_k") throw std::invalid_argument(v);
                   c.solver.step_rule = StepRule::kLambdaOverK;
                 },
                 [](const ExperimentConfig&) { return std::string("lambda_over_k"); }});
    t.push_back(make("lambda_min", false, sdbl(&SolverConfig::lambda_min)));
    t.push_back(make("consensus_tol", false, sdbl(&SolverConfig::consensus_tol)));
    t.push_back(make("consensus_max_iter", false, sint(&SolverConfig::consensus_max_iter)));
    t.push_back({"consensus_stop", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v == "oracle") c.solver.consensus_stop = ConsensusStop::kOracle;
                   else if (v == "local_window") c.solver.consensus_stop = ConsensusStop::kLocalWindow;
                   else throw std::invalid_argument(v);
                 },
                 [](const ExperimentConfig& c) { return std::string(stop_name(c.solver.consensus_stop)); }});
    t.push_back(make("consensus_window", false, sint(&SolverConfig::consensus_window)));
    t.push_back(make("outer_max_iter", false, sint(&SolverConfig::outer_max_iter)));
    t.push_back({"schemes", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   c.schemes.clear();
                   for (const auto& s : split_list(v)) c.schemes.push_back(parse_scheme(s));
                 },
                 [](const ExperimentConfig& c) {
                   return join(c.schemes, [](Scheme s) { return std::string(to_string(s)); });
                 }});
    t.push_back({"sweep_pt", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   c.sweep_pt.clear();
                   for (const auto& s : split_list(v)) c.sweep_pt.push_back(to_double(s));
                 },
                 [](const ExperimentConfig& c) { return join(c.sweep_pt, format_double); }});
    t.push_back({"sweep_pfa", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   c.sweep_pfa.clear();
                   for (const auto& s : split_list(v)) c.sweep_pfa.push_back(to_double(s));
                 },
                 [](const ExperimentConfig& c) { return join(c.sweep_pfa, format_double); }});
    t.push_back({"sweep_n", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   c.sweep_n.clear();
                   for (const auto& s : split_list(v)) c.sweep_n.push_back(static_cast<int>(to_long(s)));
                 },
                 [](const ExperimentConfig& c) {
                   return join(c.sweep_n, [](int n) { return std::to_string(n); });
                 }});
    t.push_back({"trials", false, [](ExperimentConfig& c, const std::string& v) { c.trials = to_long(v); },
                 [](const ExperimentConfig& c) { return std::to_string(c.trials); }});
    t.push_back({"threshold", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v == "analytic") c.threshold = ThresholdSource::kAnalytic;
                   else if (v == "empirical") c.threshold = ThresholdSource::kEmpirical;
                   else throw std::invalid_argument(v);
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.threshold == ThresholdSource::kAnalytic ? "analytic" : "empirical");
                 }});
    t.push_back({"power_method", false,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v != "central" && v != "distributed") throw std::invalid_argument(v);
                   c.power_method = v;
                 },
                 [](const ExperimentConfig& c) { return c.power_method; }});
    return t;
  }();
  return table;
}

void validate(const ExperimentConfig& c, const std::string& src) {
  auto fail = [&](const std::string& msg) { throw ConfigError(src + ": " + msg); };
  if (c.schema_version != 1) fail("unsupported schema_version " + std::to_string(c.schema_version));
  if (c.sensors < 1) fail("'sensors' must be at least 1");
  if (c.samples < 1) fail("'samples' must be at least 1");
  if (!(c.U > 0.0)) fail("'U' must be positive");
  if (!(c.Pt > 0.0)) fail("'Pt' must be positive");
  if (!(c.Pfa > 0.0 && c.Pfa < 1.0)) fail("'Pfa' must lie in (0,1)");
  if (!(c.zeta > 0.0)) fail("'zeta' must be positive");
  if (!(c.sigma2_min > 0.0) || c.sigma2_max < c.sigma2_min) fail("invalid sigma2 range");
  if (c.signal_amplitude == 0.0) fail("'signal_amplitude' must be nonzero");
  if (!(c.topology_radius > 0.0)) fail("'topology_radius' must be positive");
  if (c.trials < 1) fail("'trials' must be at least 1");
  for (double p : c.sweep_pt) if (!(p > 0.0)) fail("'sweep_pt' entries must be positive");
  for (std::size_t i = 0; i < c.sweep_pfa.size(); ++i) {
    if (!(c.sweep_pfa[i] > 0.0 && c.sweep_pfa[i] < 1.0) ||
        (i > 0 && c.sweep_pfa[i] <= c.sweep_pfa[i - 1])) {
      fail("'sweep_pfa' must be increasing inside (0,1)");
    }
  }
  for (int n : c.sweep_n) if (n < 1) fail("'sweep_n' entries must be at least 1");
  const auto& s = c.solver;
  if (!(s.lambda0_init > 0.0) || !(s.kappa > 0.0) || !(s.lambda_min > 0.0) || !(s.consensus_tol > 0.0)) {
    fail("solver constants must be positive");
  }
  if (s.outer_max_iter < 1 || s.consensus_max_iter < 0 || s.consensus_window < 1) {
    fail("solver iteration caps must be positive");
  }
}

} // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  const std::string src(source);
  ExperimentConfig cfg;
  std::map<std::string, const Field*> by_key;
  for (const auto& f : fields()) by_key[f.key] = &f;
  std::set<std::string> seen;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto where = src + ":" + std::to_string(lineno) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError(where + "unknown field '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate field '" + key + "'");
    try {
      it->second->set(cfg, value);
    } catch (const std::exception&) {
      throw ConfigError(where + "invalid value for '" + key + "': '" + value + "'");
    }
  }
  for (const auto& f : fields()) {
    if (f.required && !seen.count(f.key)) {
      throw ConfigError(src + ": missing required field '" + f.key + "'");
    }
  }
  validate(cfg, src);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config(ss.str(), path.string());
  if (!cfg.topology_file.empty()) {
    const std::filesystem::path tf(cfg.topology_file);
    if (tf.is_relative()) cfg.topology_file = (path.parent_path() / tf).string();
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

std::string config_digest(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario build_scenario(const ExperimentConfig& cfg, std::optional<int> samples_override,
                        std::optional<double> pt_override) {
  PopulationSpec pop;
  pop.sensors = cfg.sensors;
  pop.samples = samples_override.value_or(cfg.samples);
  pop.signal_amplitude = cfg.signal_amplitude;
  pop.xi_a_db = cfg.xi_a_db;
  pop.zeta = cfg.zeta;
  pop.sigma2_min = cfg.sigma2_min;
  pop.sigma2_max = cfg.sigma2_max;
  pop.channel = cfg.channel;

  Scenario sc;
  Rng sensor_rng = make_stream(cfg.seed, kSensorStream);
  sc.sensors = draw_population(pop, sensor_rng);
  sc.U = cfg.U;
  sc.Pt = pt_override.value_or(cfg.Pt);
  sc.Pfa = cfg.Pfa;
  sc.seed = cfg.seed;
  sc.solver = cfg.solver;
  if (!cfg.topology_file.empty()) {
    std::ifstream in(cfg.topology_file);
    if (!in) throw ConfigError(cfg.topology_file + ": cannot open topology file");
    sc.topology = read_edge_list(in);
  } else {
    Rng topo_rng = make_stream(cfg.seed, kTopologyStream);
    sc.topology = random_geometric_graph(cfg.sensors, cfg.topology_radius, topo_rng);
  }
  sc.validate();
  return sc;
}

} // namespace wsnd
