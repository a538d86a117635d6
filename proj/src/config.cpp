#include "alfven/config.hpp"

#include <fstream>
#include <sstream>

namespace alfven {

void RunConfig::validate() const {
  Grid3 g(grid, box);  // validates dims/box
  if (mu < 0.0) throw ConfigError("mu must be >= 0");
  if (!(b0 > 0.0)) throw ConfigError("b0 must be > 0");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
  if (diag_every < 1) throw ConfigError("diag_every must be >= 1");
  if (flux_every < 1) throw ConfigError("flux_every must be >= 1");
  if (deriv_budget < 0) throw ConfigError("deriv_budget must be >= 0");
  if (marker_stride < 1) throw ConfigError("marker_stride must be >= 1");
  if (cfl_max <= 0.0) throw ConfigError("cfl_max must be > 0");
  weights.validate();
  if (t_final * b0 * (1.0 + margin()) > 0.4 * box[2] + 1e-12)
    throw ConfigError(
        "no-wrap contract violated: t_final * b0 * (1 + margin) = " +
        std::to_string(t_final * b0 * (1.0 + margin())) +
        " exceeds 0.4 * L3 = " + std::to_string(0.4 * box[2]));
  if (!flux_levels.empty() && !enable_frame)
    throw ConfigError("flux accumulation requires enable_frame = true");
  if (enable_scattering && mu != 0.0)
    throw ConfigError(
        "scattering accumulation is defined for the ideal system only "
        "(mu = 0)");
  for (double a : amplitudes)
    if (!(a > 0.0)) throw ConfigError("amplitudes must be positive");
  for (double m : mu_list)
    if (m < 0.0) throw ConfigError("mu_list entries must be >= 0");
}

namespace {

struct Parser {
  std::map<std::string, std::string> kv;
  std::map<std::string, bool> used;

  bool has(const std::string& k) const { return kv.count(k) > 0; }

  std::string raw(const std::string& k) {
    used[k] = true;
    return kv.at(k);
  }

  template <class T>
  T get(const std::string& k, T fallback);

  std::vector<std::string> tokens(const std::string& k) {
    std::istringstream is(raw(k));
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  }
};

double parse_double(const std::string& k, const std::string& v) {
  std::size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + k + "': cannot parse '" + v + "' as a number");
  }
  if (pos != v.size())
    throw ConfigError("key '" + k + "': trailing characters in '" + v + "'");
  return d;
}

long parse_long(const std::string& k, const std::string& v) {
  std::size_t pos = 0;
  long n;
  try {
    n = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + k + "': cannot parse '" + v + "' as an integer");
  }
  if (pos != v.size())
    throw ConfigError("key '" + k + "': trailing characters in '" + v + "'");
  return n;
}

bool parse_bool(const std::string& k, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("key '" + k + "': expected a boolean, got '" + v + "'");
}

template <>
double Parser::get<double>(const std::string& k, double fallback) {
  if (!has(k)) return fallback;
  return parse_double(k, raw(k));
}
template <>
int Parser::get<int>(const std::string& k, int fallback) {
  if (!has(k)) return fallback;
  return static_cast<int>(parse_long(k, raw(k)));
}
template <>
std::uint64_t Parser::get<std::uint64_t>(const std::string& k,
                                         std::uint64_t fallback) {
  if (!has(k)) return fallback;
  return static_cast<std::uint64_t>(parse_long(k, raw(k)));
}
template <>
bool Parser::get<bool>(const std::string& k, bool fallback) {
  if (!has(k)) return fallback;
  return parse_bool(k, raw(k));
}
template <>
std::string Parser::get<std::string>(const std::string& k,
                                     std::string fallback) {
  if (!has(k)) return fallback;
  return raw(k);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  Parser p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ": empty key or value");
    if (p.kv.count(key))
      throw ConfigError("duplicate key '" + key + "'");
    p.kv[key] = val;
  }

  RunConfig c;
  if (p.has("grid")) {
    auto t = p.tokens("grid");
    if (t.size() != 3) throw ConfigError("grid: expected three integers");
    for (int a = 0; a < 3; ++a)
      c.grid[a] = static_cast<int>(parse_long("grid", t[a]));
  }
  if (p.has("box")) {
    auto t = p.tokens("box");
    if (t.size() != 3) throw ConfigError("box: expected three lengths");
    for (int a = 0; a < 3; ++a) c.box[a] = parse_double("box", t[a]);
  }
  if (p.has("family")) {
    const std::string f = p.raw("family");
    if (f == "low_frequency")
      c.data.family = DataFamily::low_frequency;
    else if (f == "oscillatory")
      c.data.family = DataFamily::oscillatory;
    else if (f == "random_band")
      c.data.family = DataFamily::random_band;
    else if (f == "single_mode")
      c.data.family = DataFamily::single_mode;
    else if (f == "custom_checkpoint")
      c.data.family = DataFamily::custom_checkpoint;
    else
      throw ConfigError("unknown data family: " + f);
  }
  c.data.amplitude = p.get<double>("amplitude", c.data.amplitude);
  c.data.envelope_scale = p.get<double>("envelope_scale", c.data.envelope_scale);
  if (p.has("band")) {
    auto t = p.tokens("band");
    if (t.size() != 2) throw ConfigError("band: expected two mode numbers");
    c.data.band_lo = static_cast<int>(parse_long("band", t[0]));
    c.data.band_hi = static_cast<int>(parse_long("band", t[1]));
  }
  c.data.spectral_slope = p.get<double>("spectral_slope", c.data.spectral_slope);
  if (p.has("mode")) {
    auto t = p.tokens("mode");
    if (t.size() != 3) throw ConfigError("mode: expected three integers");
    for (int a = 0; a < 3; ++a)
      c.data.mode[a] = static_cast<int>(parse_long("mode", t[a]));
  }
  if (p.has("sides")) {
    const std::string s = p.raw("sides");
    if (s == "both")
      c.data.sides = DataSides::both;
    else if (s == "plus_only")
      c.data.sides = DataSides::plus_only;
    else if (s == "minus_only")
      c.data.sides = DataSides::minus_only;
    else
      throw ConfigError("sides must be both|plus_only|minus_only");
  }
  c.data.checkpoint_path = p.get<std::string>("checkpoint", std::string());
  c.seed = p.get<std::uint64_t>("seed", c.seed);
  c.data.seed = c.seed;

  c.mu = p.get<double>("mu", c.mu);
  c.b0 = p.get<double>("b0", c.b0);
  c.dt = p.get<double>("dt", c.dt);
  c.t_final = p.get<double>("t_final", c.t_final);
  c.diag_every = p.get<int>("diag_every", c.diag_every);
  c.flux_every = p.get<int>("flux_every", c.flux_every);
  c.markers_every = p.get<int>("markers_every", c.markers_every);
  c.checkpoint_every = p.get<int>("checkpoint_every", c.checkpoint_every);
  if (p.has("weight_mode")) {
    const std::string m = p.raw("weight_mode");
    if (m == "hybrid_log")
      c.weights.mode = WeightMode::hybrid_log;
    else if (m == "ideal_power")
      c.weights.mode = WeightMode::ideal_power;
    else
      throw ConfigError("weight_mode must be hybrid_log|ideal_power");
  }
  c.weights.R = p.get<double>("weight_R", c.weights.R);
  c.weights.delta = p.get<double>("weight_delta", c.weights.delta);
  c.deriv_budget = p.get<int>("deriv_budget", c.deriv_budget);
  c.marker_stride = p.get<int>("marker_stride", c.marker_stride);
  c.enable_frame = p.get<bool>("enable_frame", c.enable_frame);
  c.enable_markers = p.get<bool>("enable_markers", c.enable_markers);
  c.enable_scattering = p.get<bool>("enable_scattering", c.enable_scattering);
  if (p.has("flux_levels")) {
    for (const auto& t : p.tokens("flux_levels"))
      c.flux_levels.push_back(parse_double("flux_levels", t));
  }
  if (p.has("flux_kinds")) {
    c.flux_kinds.clear();
    for (const auto& t : p.tokens("flux_kinds"))
      c.flux_kinds.push_back(flux_kind_from_string(t));
  }
  c.flux_order = p.get<int>("flux_order", c.flux_order);
  c.cfl_max = p.get<double>("cfl_max", c.cfl_max);
  c.amplitude_margin = p.get<double>("amplitude_margin", c.amplitude_margin);
  c.compare_transport = p.get<bool>("compare_transport", c.compare_transport);
  c.out_dir = p.get<std::string>("out", c.out_dir);
  if (p.has("mutation")) {
    const std::string m = p.raw("mutation");
    if (m == "none")
      c.mutation = Mutation::none;
    else if (m == "pressure-sign")
      c.mutation = Mutation::pressure_sign;
    else
      throw ConfigError("mutation must be none|pressure-sign");
  }
  if (p.has("mu_list"))
    for (const auto& t : p.tokens("mu_list"))
      c.mu_list.push_back(parse_double("mu_list", t));
  if (p.has("amplitudes"))
    for (const auto& t : p.tokens("amplitudes"))
      c.amplitudes.push_back(parse_double("amplitudes", t));
  c.parabolic_constant = p.get<double>("parabolic_constant",
                                       c.parabolic_constant);
  c.decay_mu_auto = p.get<bool>("decay_mu_auto", c.decay_mu_auto);

  for (const auto& [k, v] : p.kv)
    if (!p.used.count(k)) throw ConfigError("unknown key '" + k + "'");

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_reference() {
  return
      "grid N1 N2 N3          grid points per axis (even, >= 8)\n"
      "box L1 L2 L3           box lengths\n"
      "family NAME            low_frequency|oscillatory|random_band|"
      "single_mode|custom_checkpoint\n"
      "amplitude X            family size parameter (see README)\n"
      "envelope_scale X       low_frequency template width multiplier\n"
      "band LO HI             random_band mode-number band\n"
      "spectral_slope S       random_band |a(k)|^2 ~ |k|^-S\n"
      "mode M1 M2 M3          single_mode indices\n"
      "sides S                both|plus_only|minus_only\n"
      "checkpoint PATH        custom_checkpoint source\n"
      "seed N                 RNG seed (bit-reproducible data)\n"
      "mu X                   viscosity >= 0\n"
      "b0 X                   background field strength > 0\n"
      "dt X                   time step\n"
      "t_final X              end time (no-wrap contract applies)\n"
      "diag_every N           diagnostics cadence in steps\n"
      "flux_every N           flux accumulation cadence in steps\n"
      "markers_every N        marker CSV cadence (0 = off)\n"
      "checkpoint_every N     checkpoint cadence (0 = final only)\n"
      "weight_mode M          hybrid_log|ideal_power\n"
      "weight_R X             weight offset (hybrid requires >= 100)\n"
      "weight_delta X         ideal-mode exponent delta, omega = 1 + delta\n"
      "deriv_budget K         energy orders 0..K (plus mu-weighted K+1)\n"
      "marker_stride N        marker sub-lattice stride\n"
      "enable_frame B         evolve transported coordinates\n"
      "enable_markers B       evolve marker clouds\n"
      "enable_scattering B    accumulate characteristic-line records\n"
      "flux_levels C1 C2 ...  u-levels for flux surfaces\n"
      "flux_kinds K1 K2 ...   unit|z2|gradz2|j2\n"
      "flux_order N           derivative order for j2 fluxes\n"
      "cfl_max X              CFL guard\n"
      "amplitude_margin X     no-wrap margin override (default: amplitude)\n"
      "compare_transport B    decoupled runs: track exact-shift error\n"
      "out DIR                output directory\n"
      "mutation M             none|pressure-sign (verification hook)\n"
      "mu_list X1 X2 ...      viscous-compare viscosities\n"
      "amplitudes A1 A2 ...   scatter linearization amplitudes\n"
      "parabolic_constant C   eps_mu = C * mu threshold in decay studies\n"
      "decay_mu_auto B        decay-study: size mu = 2.5/L3 per member\n";
}

}  // namespace alfven
