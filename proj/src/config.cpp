#include "topopump/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "topopump/errors.hpp"

namespace topopump {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"topology", "", "chain geometry: even | odd | interface | router (required)"},
      {"cells", "10", "unit cells N: 2N sites (even), 2N+1 sites (odd, interface; N even)"},
      {"branches", "4", "router branch count K >= 2"},
      {"branch_sites", "10", "sites per router branch N (even); L = K*N + 1"},
      {"protocol", "exponential", "drive: exponential | cosine | three_step"},
      {"alpha", "3.2", "exponential protocol parameter"},
      {"onsite_variant", "as_printed", "exponential Vb(t): as_printed | time_symmetric"},
      {"t_star", "100", "total drive time in 1/J0"},
      {"J0", "1", "coupling unit; fixed to 1"},
      {"t_op", "10", "three-step operation time"},
      {"J1_0", "1", "three-step initial J1"},
      {"J2_0", "0", "three-step initial J2"},
      {"dt", "0", "RK4 step; 0 selects min(0.005, t*/20000)"},
      {"stability_limit", "0.1", "upper bound on dt*|H(t)|"},
      {"record_frames", "true", "store population frames in evolve"},
      {"max_frames", "500", "maximum number of stored frames"},
      {"n_k", "4096", "Brillouin-zone points for winding numbers"},
      {"degeneracy_tol", "1e-10", "eigenvalue degeneracy tolerance"},
      {"J1", "1", "static J1 for winding/dispersion/spectrum tables"},
      {"J2", "0.6", "static J2 for winding/dispersion/spectrum tables"},
      {"Va", "0", "static a-site energy (Vb = -Va) for winding/dispersion"},
      {"J1_grid", "", "J1 values for the static spectrum and winding tables"},
      {"spectrum_samples", "101", "time samples over [0, t*] for instantaneous spectra"},
      {"sweep", "t_star", "sweep type: t_star (fidelity curve) | alpha (alpha x t* phase diagram)"},
      {"t_grid", "", "t* grid for sweeps"},
      {"alpha_grid", "", "alpha grid for phase diagrams and min-gap tables"},
      {"theta", "0.99", "fidelity threshold for stabilization times"},
      {"samples", "100", "ensemble size M"},
      {"ensemble", "disorder", "ensemble type: disorder | loss"},
      {"disorder_kind", "diagonal", "diagonal | off_diagonal"},
      {"disorder_symmetry", "symmetric", "symmetric (mirror/branch identical) | asymmetric"},
      {"disorder_granularity", "per_element", "per_element | global"},
      {"strength_grid", "0", "disorder strengths omega_s"},
      {"gamma_grid", "0", "loss rates gamma in J0"},
      {"loss_asymmetric", "false", "draw per-half b-site loss asymmetries"},
      {"loss_spread", "0.1", "asymmetry range: dgamma in [-spread, spread]"},
      {"L_list", "5,9,13,17,21", "interface chain lengths for scalability fits"},
      {"K_list", "2,3,4,5,6", "router branch counts for the branch sweep"},
      {"fixed_alpha", "", "exponential alpha for length sweeps; empty uses the cubic rule"},
      {"loss_gamma", "0", "fit: also tabulate lossy fidelity vs L at this gamma when > 0"},
      {"search_t_min", "5", "stabilization search start"},
      {"search_t_max", "300", "stabilization search end"},
      {"search_step", "5", "stabilization search resolution"},
      {"search_coarse_step", "0", "coarse pre-scan spacing; 0 scans at full resolution"},
      {"seed", "1", "master seed (unsigned 64-bit)"},
      {"out", "out", "output directory"},
  };
  return schema;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field, "expected a number, got an empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(field, "expected a finite number, got '" + t + "'");
  return v;
}

long to_integer(const std::string& field, const std::string& text) {
  const double v = to_number(field, text);
  if (v != std::floor(v) || std::abs(v) > 1e15) throw ConfigError(field, "expected an integer, got '" + trim(text) + "'");
  return static_cast<long>(v);
}

bool known_key(const std::string& key) {
  const auto& s = config_schema();
  return std::any_of(s.begin(), s.end(), [&](const ConfigKey& k) { return k.name == key; });
}

template <typename Fn>
auto as_config_error(const std::string& field, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field, "grid is empty");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError(field, "range grid must be start:step:stop");
    const double a = to_number(field, parts[0]);
    const double step = to_number(field, parts[1]);
    const double b = to_number(field, parts[2]);
    if (!(step > 0.0)) throw ConfigError(field, "grid step must be positive");
    if (b < a) throw ConfigError(field, "grid stop must not precede its start");
    out = uniform_grid(a, step, b);
  } else {
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_number(field, p));
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) throw ConfigError(field, "grid must be strictly increasing");
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig::RunConfig() {
  for (const ConfigKey& k : config_schema()) values_[k.name] = k.default_value;
}

RunConfig RunConfig::parse(std::string_view text, const std::string& source) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    try {
      c.set(key, trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw e.located(source + ":" + std::to_string(lineno));
    }
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!known_key(key)) throw ConfigError(key, "unknown configuration key");
  values_[key] = trim(value);
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("", "override '" + assignment + "' must be key=value");
  set(trim(std::string_view(assignment).substr(0, eq)), std::string(assignment.substr(eq + 1)));
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const ConfigKey& k : config_schema()) os << k.name << " = " << values_.at(k.name) << '\n';
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  std::ostringstream os;
  for (const ConfigKey& k : config_schema())
    if (k.name != "out") os << k.name << " = " << values_.at(k.name) << '\n';
  return fnv1a64(os.str());
}

std::string RunConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

bool RunConfig::has(const std::string& key) const { return !get(key).empty(); }

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown configuration key");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return to_number(key, get(key)); }
long RunConfig::integer(const std::string& key) const { return to_integer(key, get(key)); }

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::uint64_t RunConfig::seed() const {
  const std::string& v = get("seed");
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("seed", "expected an unsigned 64-bit integer, got '" + v + "'");
  errno = 0;
  const unsigned long long s = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError("seed", "value does not fit in 64 bits");
  return s;
}

std::vector<double> RunConfig::grid(const std::string& key) const { return parse_grid(key, get(key)); }

std::vector<int> RunConfig::int_list(const std::string& key) const {
  std::vector<int> out;
  for (double v : grid(key)) {
    if (v != std::floor(v)) throw ConfigError(key, "expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void RunConfig::validate() const {
  if (!has("topology")) throw ConfigError("topology", "required field is missing");
  const std::string& topo = get("topology");
  if (topo != "even" && topo != "odd" && topo != "interface" && topo != "router")
    throw ConfigError("topology", "expected even, odd, interface or router, got '" + topo + "'");
  if (number("J0") != 1.0) throw ConfigError("J0", "couplings are expressed in units of J0, which must be 1");
  const std::string& p = get("protocol");
  if (p != "exponential" && p != "cosine" && p != "three_step")
    throw ConfigError("protocol", "expected exponential, cosine or three_step, got '" + p + "'");
  if (!(number("t_star") > 0.0)) throw ConfigError("t_star", "must be positive");
  if (number("dt") < 0.0) throw ConfigError("dt", "must be non-negative");
  if (!(number("stability_limit") > 0.0)) throw ConfigError("stability_limit", "must be positive");
  if (integer("samples") < 1) throw ConfigError("samples", "must be at least 1");
  if (integer("n_k") < 8) throw ConfigError("n_k", "must be at least 8");
  if (integer("spectrum_samples") < 2) throw ConfigError("spectrum_samples", "must be at least 2");
  const std::string& sw = get("sweep");
  if (sw != "t_star" && sw != "alpha") throw ConfigError("sweep", "expected t_star or alpha, got '" + sw + "'");
  const std::string& e = get("ensemble");
  if (e != "disorder" && e != "loss") throw ConfigError("ensemble", "expected disorder or loss, got '" + e + "'");
  flag("record_frames");
  flag("loss_asymmetric");
  seed();
  chain();
  schedule();
  disorder();
  search();
}

ChainSpec RunConfig::chain() const {
  if (!has("topology")) throw ConfigError("topology", "required field is missing");
  const std::string& topo = get("topology");
  if (topo == "router")
    return as_config_error("branch_sites", [&] {
      return ChainSpec::router(static_cast<int>(integer("branches")), static_cast<int>(integer("branch_sites")));
    });
  const int n = static_cast<int>(integer("cells"));
  return as_config_error("cells", [&] {
    if (topo == "even") return ChainSpec::even_ssh(n);
    if (topo == "odd") return ChainSpec::odd_ssh(n);
    if (topo == "interface") return ChainSpec::interface_chain(n);
    throw ConfigError("topology", "expected even, odd, interface or router, got '" + topo + "'");
  });
}

DriveSchedule RunConfig::schedule() const {
  const std::string& p = get("protocol");
  const double t_star = number("t_star");
  if (p == "cosine") return as_config_error("t_star", [&] { return DriveSchedule::cosine(t_star); });
  if (p == "three_step")
    return as_config_error("t_op", [&] {
      return DriveSchedule::three_step(number("t_op"), t_star, number("J1_0"), number("J2_0"));
    });
  if (p != "exponential") throw ConfigError("protocol", "expected exponential, cosine or three_step, got '" + p + "'");
  const std::string& v = get("onsite_variant");
  OnsiteVariant variant;
  if (v == "as_printed") {
    variant = OnsiteVariant::AsPrinted;
  } else if (v == "time_symmetric") {
    variant = OnsiteVariant::TimeSymmetric;
  } else {
    throw ConfigError("onsite_variant", "expected as_printed or time_symmetric, got '" + v + "'");
  }
  return as_config_error("alpha", [&] { return DriveSchedule::exponential(number("alpha"), t_star, 1.0, variant); });
}

EvolveOptions RunConfig::evolve_options() const {
  EvolveOptions o;
  o.dt = number("dt");
  o.stability_limit = number("stability_limit");
  o.record_frames = flag("record_frames");
  o.max_frames = static_cast<int>(integer("max_frames"));
  if (o.max_frames < 2) throw ConfigError("max_frames", "must be at least 2");
  return o;
}

DisorderConfig RunConfig::disorder() const {
  DisorderConfig d;
  const std::string& k = get("disorder_kind");
  if (k == "diagonal") {
    d.kind = DisorderKind::Diagonal;
  } else if (k == "off_diagonal") {
    d.kind = DisorderKind::OffDiagonal;
  } else {
    throw ConfigError("disorder_kind", "expected diagonal or off_diagonal, got '" + k + "'");
  }
  const std::string& s = get("disorder_symmetry");
  if (s == "symmetric") {
    d.symmetry = DisorderSymmetry::MirrorSymmetric;
  } else if (s == "asymmetric") {
    d.symmetry = DisorderSymmetry::Asymmetric;
  } else {
    throw ConfigError("disorder_symmetry", "expected symmetric or asymmetric, got '" + s + "'");
  }
  const std::string& g = get("disorder_granularity");
  if (g == "per_element") {
    d.granularity = DisorderGranularity::PerElement;
  } else if (g == "global") {
    d.granularity = DisorderGranularity::Global;
  } else {
    throw ConfigError("disorder_granularity", "expected per_element or global, got '" + g + "'");
  }
  return d;
}

StabilizationSearch RunConfig::search() const {
  StabilizationSearch s;
  s.t_min = number("search_t_min");
  s.t_max = number("search_t_max");
  s.step = number("search_step");
  s.coarse_step = number("search_coarse_step");
  s.theta = number("theta");
  if (!(s.t_min > 0.0)) throw ConfigError("search_t_min", "must be positive");
  if (s.t_max < s.t_min) throw ConfigError("search_t_max", "must not precede search_t_min");
  if (!(s.step > 0.0)) throw ConfigError("search_step", "must be positive");
  if (s.coarse_step < 0.0 || (s.coarse_step > 0.0 && s.coarse_step < s.step))
    throw ConfigError("search_coarse_step", "must be 0 or at least search_step");
  if (!(s.theta > 0.0 && s.theta <= 1.0)) throw ConfigError("theta", "must lie in (0, 1]");
  return s;
}

}  // namespace topopump
