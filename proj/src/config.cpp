#include <itg/config.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace itg {

using nlohmann::json;

namespace {

using PathElem = std::variant<std::string, std::size_t>;
using Path = std::vector<PathElem>;

std::string path_string(const Path& path) {
  std::string out;
  for (const auto& e : path) {
    if (const auto* k = std::get_if<std::string>(&e)) {
      if (!out.empty()) out += '.';
      out += *k;
    } else {
      out += '[' + std::to_string(std::get<std::size_t>(e)) + ']';
    }
  }
  return out.empty() ? std::string("<root>") : out;
}

// Finds the line of the value (or object key) at `path` by rescanning the
// already-validated JSON text. Returns 0 when not found.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  std::size_t line_of(const Path& path) const {
    std::size_t pos = 0;
    std::size_t line = 0;
    skip_ws(pos);
    if (!find(pos, path, 0, line)) return 0;
    return line;
  }

 private:
  std::size_t line_at(std::size_t pos) const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) n += text_[i] == '\n';
    return n;
  }

  void skip_ws(std::size_t& pos) const {
    while (pos < text_.size() && (text_[pos] == ' ' || text_[pos] == '\t' || text_[pos] == '\n' ||
                                  text_[pos] == '\r')) {
      ++pos;
    }
  }

  std::string read_string(std::size_t& pos) const {
    std::string out;
    ++pos;  // opening quote
    while (pos < text_.size() && text_[pos] != '"') {
      if (text_[pos] == '\\' && pos + 1 < text_.size()) {
        out += text_[pos + 1];
        pos += 2;
      } else {
        out += text_[pos++];
      }
    }
    ++pos;
    return out;
  }

  void skip_value(std::size_t& pos) const {
    skip_ws(pos);
    if (pos >= text_.size()) return;
    const char ch = text_[pos];
    if (ch == '"') {
      read_string(pos);
    } else if (ch == '{' || ch == '[') {
      int depth = 0;
      while (pos < text_.size()) {
        const char c = text_[pos];
        if (c == '"') {
          read_string(pos);
          continue;
        }
        if (c == '{' || c == '[') ++depth;
        if (c == '}' || c == ']') {
          --depth;
          if (depth == 0) {
            ++pos;
            return;
          }
        }
        ++pos;
      }
    } else {
      while (pos < text_.size() && text_[pos] != ',' && text_[pos] != '}' && text_[pos] != ']') ++pos;
    }
  }

  bool find(std::size_t pos, const Path& path, std::size_t idx, std::size_t& line) const {
    skip_ws(pos);
    if (idx == path.size()) {
      line = line_at(pos);
      return true;
    }
    if (pos >= text_.size()) return false;
    if (text_[pos] == '{') {
      const auto* want = std::get_if<std::string>(&path[idx]);
      if (!want) return false;
      ++pos;
      for (;;) {
        skip_ws(pos);
        if (pos >= text_.size() || text_[pos] == '}') return false;
        const std::size_t key_pos = pos;
        const std::string key = read_string(pos);
        skip_ws(pos);
        ++pos;  // ':'
        if (key == *want) {
          if (idx + 1 == path.size()) {
            line = line_at(key_pos);
            return true;
          }
          return find(pos, path, idx + 1, line);
        }
        skip_value(pos);
        skip_ws(pos);
        if (pos < text_.size() && text_[pos] == ',') ++pos;
      }
    }
    if (text_[pos] == '[') {
      const auto* want = std::get_if<std::size_t>(&path[idx]);
      if (!want) return false;
      ++pos;
      for (std::size_t i = 0;; ++i) {
        skip_ws(pos);
        if (pos >= text_.size() || text_[pos] == ']') return false;
        if (i == *want) return find(pos, path, idx + 1, line);
        skip_value(pos);
        skip_ws(pos);
        if (pos < text_.size() && text_[pos] == ',') ++pos;
      }
    }
    return false;
  }

  std::string_view text_;
};

struct Context {
  std::string source;
  Locator locator;

  [[noreturn]] void fail(const Path& path, const std::string& what) const {
    std::ostringstream os;
    os << source;
    if (const auto line = locator.line_of(path)) os << ':' << line;
    os << ": " << path_string(path) << ": " << what;
    throw ConfigError(os.str());
  }
};

// A section as seen by one scenario: per-scenario overrides first, then the
// top-level defaults.
struct Section {
  const Context* ctx{};
  const json* over{};
  const json* base{};
  Path over_path;
  Path base_path;

  const json* lookup(const std::string& key, Path& where) const {
    if (over && over->contains(key)) {
      where = over_path;
      where.emplace_back(key);
      return &(*over)[key];
    }
    if (base && base->contains(key)) {
      where = base_path;
      where.emplace_back(key);
      return &(*base)[key];
    }
    return nullptr;
  }

  Path path_of(const std::string& key) const {
    Path where;
    if (lookup(key, where)) return where;
    where = over ? over_path : base_path;
    where.emplace_back(key);
    return where;
  }

  Section child(const std::string& key) const {
    Section s{ctx, nullptr, nullptr, over_path, base_path};
    s.over_path.emplace_back(key);
    s.base_path.emplace_back(key);
    if (over && over->contains(key)) {
      s.over = &(*over)[key];
      if (!s.over->is_object()) ctx->fail(s.over_path, "must be an object");
    }
    if (base && base->contains(key)) {
      s.base = &(*base)[key];
      if (!s.base->is_object()) ctx->fail(s.base_path, "must be an object");
    }
    return s;
  }

  void check_keys(const std::set<std::string>& allowed) const {
    for (auto [obj, path] : {std::pair{over, over_path}, std::pair{base, base_path}}) {
      if (!obj) continue;
      for (const auto& [k, v] : obj->items()) {
        if (!allowed.count(k)) {
          Path p = path;
          p.emplace_back(k);
          ctx->fail(p, "unknown key");
        }
      }
    }
  }

  double number(const std::string& key, double fallback) const {
    Path where;
    const json* v = lookup(key, where);
    if (!v) return fallback;
    if (!v->is_number()) ctx->fail(where, "expected a number");
    return v->get<double>();
  }

  std::optional<double> optional_number(const std::string& key) const {
    Path where;
    const json* v = lookup(key, where);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) ctx->fail(where, "expected a number");
    return v->get<double>();
  }

  int integer(const std::string& key, int fallback) const {
    Path where;
    const json* v = lookup(key, where);
    if (!v) return fallback;
    if (!v->is_number_integer()) ctx->fail(where, "expected an integer");
    return v->get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    Path where;
    const json* v = lookup(key, where);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) ctx->fail(where, "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    Path where;
    const json* v = lookup(key, where);
    if (!v) return fallback;
    if (!v->is_string()) ctx->fail(where, "expected a string");
    return v->get<std::string>();
  }

  // Angle given in degrees under `key` or radians under `key_rad`.
  double angle(const std::string& key, double fallback_rad) const {
    Path where_deg, where_rad;
    const json* deg = lookup(key, where_deg);
    const json* rad = lookup(key + "_rad", where_rad);
    if (deg && rad) ctx->fail(where_rad, "give either " + key + " (degrees) or " + key + "_rad, not both");
    if (rad) {
      if (!rad->is_number()) ctx->fail(where_rad, "expected a number");
      return rad->get<double>();
    }
    if (deg) {
      if (!deg->is_number()) ctx->fail(where_deg, "expected a number");
      return deg2rad(deg->get<double>());
    }
    return fallback_rad;
  }

  // Rethrows a validation failure at the first key named in the message.
  template <typename Fn>
  void validate(Fn&& fn, const std::set<std::string>& keys) const {
    try {
      fn();
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      std::size_t best = std::string::npos;
      std::string best_key;
      for (const auto& k : keys) {
        for (const auto& cand : {k, k + "_rad", k + "_g"}) {
          Path where;
          if (!lookup(cand, where)) continue;
          const auto pos = msg.find(k);
          if (pos != std::string::npos && (best == std::string::npos || pos < best)) {
            best = pos;
            best_key = cand;
          }
        }
      }
      ctx->fail(best_key.empty() ? (over ? over_path : base_path) : path_of(best_key), msg);
    }
  }
};

const std::set<std::string> kEngagementKeys{"r0", "theta_L0", "theta_L0_rad", "gamma_M0", "gamma_M0_rad", "V_M",
                                            "t_d", "law"};
const std::set<std::string> kGainKeys{"kappa1_bar", "kappa3_bar",   "beta_bar",      "p",
                                      "N",          "sigma_max",    "sigma_max_rad", "xi",
                                      "p_f",        "q_f",          "c",             "sigma_d",
                                      "sigma_d_rad", "epsilon_t1",  "boundary_layer", "hold_gain",
                                      "terminal_hold", "png_handover"};
const std::set<std::string> kActuatorKeys{"a_max", "a_max_g", "n", "rho", "autopilot"};
const std::set<std::string> kAutopilotKeys{"order", "tau1", "tau2"};
const std::set<std::string> kNoiseKeys{"angle_sigma", "range_rel_bound", "sample_rate", "seed", "range_filter",
                                       "angle_filter"};
const std::set<std::string> kFilterKeys{"alpha", "beta"};
const std::set<std::string> kRunKeys{"dt", "t_max", "r_lethal", "log_every"};
const std::set<std::string> kScenarioKeys{"label", "engagement", "gains", "actuator", "noise", "run"};
const std::set<std::string> kTopKeys{"suite", "engagement", "gains", "actuator", "noise", "run", "scenarios",
                                     "expected"};

const std::vector<std::string> kMetricNames{
    "intercepted",      "impact_time",         "miss_distance",        "control_effort",
    "peak_abs_a_M",     "peak_abs_sigma",      "barrier_violated",     "fov_violated",
    "actuator_violated", "realized_switch_time", "terminal_sigma",     "terminal_a_M",
    "peak_abs_a_M_c",   "terminal_window_abs_sigma", "terminal_window_abs_a_M", "rho_settle_time",
    "switch_tgo_mismatch", "analytic_switch_time", "stage1_max_sigma_error", "command_clamped",
    "barrier_degenerate", "envelope_exceeded",  "past_desired_time", "filtered_los_rms",
    "filtered_heading_rms"};

ScenarioConfig build_scenario(const Context& ctx, const json& top, const json* entry, std::size_t index,
                              bool many) {
  Path entry_path{std::string("scenarios"), index};
  auto section = [&](const std::string& name) {
    Section s{&ctx, nullptr, nullptr, entry_path, Path{name}};
    s.over_path.emplace_back(name);
    if (entry && entry->contains(name) && !(*entry)[name].is_null()) {
      s.over = &(*entry)[name];
      if (!s.over->is_object()) ctx.fail(s.over_path, "must be an object");
    }
    if (top.contains(name) && !top[name].is_null()) {
      s.base = &top[name];
      if (!s.base->is_object()) ctx.fail(s.base_path, "must be an object");
    }
    return s;
  };

  ScenarioConfig cfg;
  if (entry) {
    Section s{&ctx, entry, nullptr, entry_path, {}};
    s.check_keys(kScenarioKeys);
    cfg.label = s.string("label", many ? "scenario-" + std::to_string(index) : cfg.label);
  }

  const Section eng = section("engagement");
  eng.check_keys(kEngagementKeys);
  cfg.r0 = eng.number("r0", cfg.r0);
  cfg.theta_L0 = eng.angle("theta_L0", cfg.theta_L0);
  cfg.gamma_M0 = eng.angle("gamma_M0", cfg.gamma_M0);
  cfg.V_M = eng.number("V_M", cfg.V_M);
  cfg.t_d = eng.number("t_d", cfg.t_d);
  const std::string law = eng.string("law", to_string(cfg.law));
  try {
    cfg.law = parse_law(law);
  } catch (const ConfigError& e) {
    ctx.fail(eng.path_of("law"), e.what());
  }

  const Section g = section("gains");
  g.check_keys(kGainKeys);
  auto& gn = cfg.gains;
  gn.kappa1_bar = g.number("kappa1_bar", gn.kappa1_bar);
  gn.kappa3_bar = g.number("kappa3_bar", gn.kappa3_bar);
  gn.beta_bar = g.number("beta_bar", gn.beta_bar);
  gn.p = g.integer("p", gn.p);
  gn.N = g.number("N", gn.N);
  gn.sigma_max = g.angle("sigma_max", gn.sigma_max);
  gn.xi = g.number("xi", gn.xi);
  gn.p_f = g.integer("p_f", gn.p_f);
  gn.q_f = g.integer("q_f", gn.q_f);
  gn.c = g.number("c", gn.c);
  gn.sigma_d = g.angle("sigma_d", gn.sigma_d);
  gn.epsilon_t1 = g.number("epsilon_t1", gn.epsilon_t1);
  gn.boundary_layer = g.number("boundary_layer", gn.boundary_layer);
  gn.hold_gain = g.number("hold_gain", gn.hold_gain);
  gn.terminal_hold = g.number("terminal_hold", gn.terminal_hold);
  gn.png_handover = g.number("png_handover", gn.png_handover);
  g.validate([&] { gn.validate(); }, kGainKeys);

  const Section a = section("actuator");
  a.check_keys(kActuatorKeys);
  auto& ac = cfg.actuator;
  {
    Path w1, w2;
    const bool si = a.lookup("a_max", w1) != nullptr;
    const bool gs = a.lookup("a_max_g", w2) != nullptr;
    if (si && gs) ctx.fail(w2, "give either a_max (m/s^2) or a_max_g, not both");
    if (gs) ac.a_max = a.number("a_max_g", 20.0) * kGravity;
    if (si) ac.a_max = a.number("a_max", ac.a_max);
  }
  ac.n = a.integer("n", ac.n);
  ac.rho = a.number("rho", ac.rho);
  const Section ap = a.child("autopilot");
  ap.check_keys(kAutopilotKeys);
  try {
    ac.autopilot.order = parse_autopilot_order(ap.string("order", to_string(ac.autopilot.order)));
  } catch (const ConfigError& e) {
    ctx.fail(ap.path_of("order"), e.what());
  }
  ac.autopilot.tau1 = ap.number("tau1", ac.autopilot.tau1);
  ac.autopilot.tau2 = ap.number("tau2", ac.autopilot.tau2);
  a.validate([&] { ac.validate(); }, {"a_max", "n", "rho"});
  ap.validate([&] { ac.autopilot.validate(); }, kAutopilotKeys);

  bool noisy = top.contains("noise") && !top["noise"].is_null();
  if (entry && entry->contains("noise")) noisy = !(*entry)["noise"].is_null();
  if (noisy) {
    const Section nz = section("noise");
    nz.check_keys(kNoiseKeys);
    NoiseConfig n;
    n.angle_sigma = nz.number("angle_sigma", n.angle_sigma);
    n.range_rel_bound = nz.number("range_rel_bound", n.range_rel_bound);
    n.sample_rate = nz.number("sample_rate", n.sample_rate);
    n.seed = nz.unsigned_integer("seed", n.seed);
    for (auto [name, filter] : {std::pair{"range_filter", &n.range_filter}, std::pair{"angle_filter", &n.angle_filter}}) {
      const Section f = nz.child(name);
      f.check_keys(kFilterKeys);
      filter->alpha = f.number("alpha", filter->alpha);
      filter->beta = f.number("beta", filter->beta);
      f.validate([&] { filter->validate(); }, kFilterKeys);
    }
    nz.validate([&] { n.validate(); }, kNoiseKeys);
    cfg.noise = n;
  }

  const Section run = section("run");
  run.check_keys(kRunKeys);
  cfg.dt = run.number("dt", cfg.dt);
  cfg.t_max = run.optional_number("t_max");
  cfg.r_lethal = run.number("r_lethal", cfg.r_lethal);
  cfg.log_every = run.integer("log_every", cfg.log_every);

  // Whole-scenario constraints: attribute to the most specific key named.
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const auto* s : {&eng, &run, &g}) {
      for (const auto& key : {"t_d", "r0", "V_M", "dt", "t_max", "r_lethal", "log_every", "sigma_max"}) {
        Path where;
        if (msg.find(key) != std::string::npos && s->lookup(key, where)) ctx.fail(where, msg);
      }
    }
    if (msg.find("lead angle") != std::string::npos) ctx.fail(eng.path_of("gamma_M0"), msg);
    ctx.fail(entry ? entry_path : Path{}, msg);
  }
  return cfg;
}

json gains_json(const GuidanceGains<double>& g) {
  return {{"kappa1_bar", g.kappa1_bar},
          {"kappa3_bar", g.kappa3_bar},
          {"beta_bar", g.beta_bar},
          {"p", g.p},
          {"N", g.N},
          {"sigma_max_rad", g.sigma_max},
          {"xi", g.xi},
          {"p_f", g.p_f},
          {"q_f", g.q_f},
          {"c", g.c},
          {"sigma_d_rad", g.sigma_d},
          {"epsilon_t1", g.epsilon_t1},
          {"boundary_layer", g.boundary_layer},
          {"hold_gain", g.hold_gain},
          {"terminal_hold", g.terminal_hold},
          {"png_handover", g.png_handover}};
}

}  // namespace

Law parse_law(std::string_view s) {
  for (auto law : {Law::blf, Law::multi_stage, Law::png, Law::deviated_pursuit}) {
    if (s == to_string(law)) return law;
  }
  throw ConfigError("unknown law '" + std::string(s) + "' (expected blf, multi_stage, png or deviated_pursuit)");
}

const char* to_string(AutopilotOrder order) {
  switch (order) {
    case AutopilotOrder::none: return "none";
    case AutopilotOrder::first: return "first";
    case AutopilotOrder::second: return "second";
  }
  return "?";
}

AutopilotOrder parse_autopilot_order(std::string_view s) {
  for (auto o : {AutopilotOrder::none, AutopilotOrder::first, AutopilotOrder::second}) {
    if (s == to_string(o)) return o;
  }
  throw ConfigError("unknown autopilot order '" + std::string(s) + "' (expected none, first or second)");
}

ExperimentSuite parse_config_text(std::string_view text, const std::string& source) {
  json top;
  try {
    top = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  const Context ctx{source, Locator(text)};
  if (!top.is_object()) ctx.fail({}, "top level must be an object");
  for (const auto& [k, v] : top.items()) {
    if (!kTopKeys.count(k)) ctx.fail({k}, "unknown key");
  }

  ExperimentSuite suite;
  if (top.contains("suite")) {
    if (!top["suite"].is_string()) ctx.fail({std::string("suite")}, "expected a string");
    suite.name = top["suite"].get<std::string>();
  }

  if (top.contains("scenarios")) {
    const json& list = top["scenarios"];
    if (!list.is_array() || list.empty()) ctx.fail({std::string("scenarios")}, "expected a non-empty array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_object()) ctx.fail({std::string("scenarios"), i}, "must be an object");
      suite.scenarios.push_back(build_scenario(ctx, top, &list[i], i, list.size() > 1));
      if (!labels.insert(suite.scenarios.back().label).second) {
        ctx.fail({std::string("scenarios"), i, std::string("label")}, "duplicate scenario label");
      }
    }
  } else {
    suite.scenarios.push_back(build_scenario(ctx, top, nullptr, 0, false));
  }

  if (top.contains("expected")) {
    const json& list = top["expected"];
    if (!list.is_array()) ctx.fail({std::string("expected")}, "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Path at{std::string("expected"), i};
      Section s{&ctx, &list[i], nullptr, at, {}};
      if (!list[i].is_object()) ctx.fail(at, "must be an object");
      s.check_keys({"scenario", "metric", "value", "tolerance"});
      ExpectedCheck c;
      c.scenario = s.string("scenario", "");
      c.metric = s.string("metric", "");
      c.value = s.number("value", std::nan(""));
      c.tolerance = s.number("tolerance", 0.0);
      bool found = false;
      for (const auto& sc : suite.scenarios) found = found || sc.label == c.scenario;
      if (!found) ctx.fail(s.path_of("scenario"), "no scenario labelled '" + c.scenario + "'");
      if (!is_known_metric(c.metric)) ctx.fail(s.path_of("metric"), "unknown metric '" + c.metric + "'");
      if (!std::isfinite(c.value)) ctx.fail(s.path_of("value"), "a finite value is required");
      if (!(c.tolerance >= 0)) ctx.fail(s.path_of("tolerance"), "tolerance must be non-negative");
      suite.expected.push_back(c);
    }
  }
  return suite;
}

ExperimentSuite parse_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string serialize_config(const ExperimentSuite& suite) {
  json top;
  top["suite"] = suite.name;
  json list = json::array();
  for (const auto& c : suite.scenarios) {
    json s;
    s["label"] = c.label;
    s["engagement"] = {{"r0", c.r0},       {"theta_L0_rad", c.theta_L0}, {"gamma_M0_rad", c.gamma_M0},
                       {"V_M", c.V_M},     {"t_d", c.t_d},               {"law", to_string(c.law)}};
    s["gains"] = gains_json(c.gains);
    s["actuator"] = {{"a_max", c.actuator.a_max},
                     {"n", c.actuator.n},
                     {"rho", c.actuator.rho},
                     {"autopilot",
                      {{"order", to_string(c.actuator.autopilot.order)},
                       {"tau1", c.actuator.autopilot.tau1},
                       {"tau2", c.actuator.autopilot.tau2}}}};
    if (c.noise) {
      const auto& n = *c.noise;
      s["noise"] = {{"angle_sigma", n.angle_sigma},
                    {"range_rel_bound", n.range_rel_bound},
                    {"sample_rate", n.sample_rate},
                    {"seed", n.seed},
                    {"range_filter", {{"alpha", n.range_filter.alpha}, {"beta", n.range_filter.beta}}},
                    {"angle_filter", {{"alpha", n.angle_filter.alpha}, {"beta", n.angle_filter.beta}}}};
    } else {
      s["noise"] = nullptr;
    }
    s["run"] = {{"dt", c.dt}, {"r_lethal", c.r_lethal}, {"log_every", c.log_every}};
    if (c.t_max) s["run"]["t_max"] = *c.t_max;
    list.push_back(std::move(s));
  }
  top["scenarios"] = std::move(list);
  if (!suite.expected.empty()) {
    json checks = json::array();
    for (const auto& e : suite.expected) {
      checks.push_back({{"scenario", e.scenario}, {"metric", e.metric}, {"value", e.value}, {"tolerance", e.tolerance}});
    }
    top["expected"] = std::move(checks);
  }
  return top.dump(2) + "\n";
}

bool is_known_metric(std::string_view metric) {
  for (const auto& n : kMetricNames) {
    if (n == metric) return true;
  }
  return false;
}

double metric_value(const RunMetrics& m, std::string_view metric) {
  const std::map<std::string_view, double> values{
      {"intercepted", m.success() ? 1.0 : 0.0},
      {"impact_time", m.impact_time},
      {"miss_distance", m.miss_distance},
      {"control_effort", m.control_effort},
      {"peak_abs_a_M", m.peak_abs_a_M},
      {"peak_abs_sigma", m.peak_abs_sigma},
      {"barrier_violated", m.barrier_violated ? 1.0 : 0.0},
      {"fov_violated", m.fov_violated ? 1.0 : 0.0},
      {"actuator_violated", m.actuator_violated ? 1.0 : 0.0},
      {"realized_switch_time", m.realized_switch_time.value_or(std::nan(""))},
      {"terminal_sigma", m.terminal_sigma},
      {"terminal_a_M", m.terminal_a_M},
      {"peak_abs_a_M_c", m.peak_abs_a_M_c},
      {"terminal_window_abs_sigma", m.terminal_window_abs_sigma},
      {"terminal_window_abs_a_M", m.terminal_window_abs_a_M},
      {"rho_settle_time", m.rho_settle_time},
      {"switch_tgo_mismatch", m.switch_tgo_mismatch},
      {"analytic_switch_time", m.analytic_switch_time},
      {"stage1_max_sigma_error", m.stage1_max_sigma_error},
      {"command_clamped", m.command_clamped ? 1.0 : 0.0},
      {"barrier_degenerate", m.barrier_degenerate ? 1.0 : 0.0},
      {"envelope_exceeded", m.envelope_exceeded ? 1.0 : 0.0},
      {"past_desired_time", m.past_desired_time ? 1.0 : 0.0},
      {"filtered_los_rms", m.filtered_los_rms},
      {"filtered_heading_rms", m.filtered_heading_rms}};
  const auto it = values.find(metric);
  if (it == values.end()) throw ConfigError("unknown metric '" + std::string(metric) + "'");
  return it->second;
}

std::vector<CheckOutcome> evaluate_checks(const ExperimentSuite& suite, std::span<const RunMetrics> metrics) {
  std::vector<CheckOutcome> out;
  for (const auto& c : suite.expected) {
    CheckOutcome o{c, std::nan(""), false, {}};
    const RunMetrics* m = nullptr;
    for (const auto& x : metrics) {
      if (x.label == c.scenario) m = &x;
    }
    if (!m) {
      o.note = "scenario not run";
    } else {
      o.actual = metric_value(*m, c.metric);
      o.passed = std::abs(o.actual - c.value) <= c.tolerance;
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace itg
