#include <itg/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace itg {

namespace {

const char* const kTrajectoryHeader =
    "t,r,theta_L,sigma,x,y,a_M_c,a_M,a_M_achieved,rho,rho1,rho2,t_go,s_surface,stage";
const char* const kDiagnosticsHeader =
    "t,alpha1,alpha1_dot,mu,kappa2_bar,z2_bar,F_p,G_p,rho_L,rho_U,rho_L_alt,rho_U_alt,active_stage";
const char* const kMetricsHeader =
    "label,status,impact_time,miss_distance,control_effort,peak_abs_a_M,peak_abs_sigma,barrier_violated,"
    "fov_violated,actuator_violated,realized_switch_time,terminal_sigma,terminal_a_M,peak_abs_a_M_c,"
    "terminal_window_abs_sigma,terminal_window_abs_a_M,rho_settle_time,switch_tgo_mismatch,"
    "analytic_switch_time,stage1_max_sigma_error,command_clamped,barrier_degenerate,envelope_exceeded,"
    "past_desired_time,filtered_los_rms,filtered_heading_rms,diagnostic";

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_header(std::istream& is, const char* header, const char* what) {
  std::string line;
  if (!std::getline(is, line) || strip_cr(line) != header) {
    throw std::runtime_error(std::string(what) + " CSV: unexpected header");
  }
}

std::vector<std::vector<std::string>> read_rows(std::istream& is, std::size_t columns, const char* what) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns) {
      throw std::runtime_error(std::string(what) + " CSV line " + std::to_string(lineno) + ": expected " +
                               std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

bool parse_flag(std::string_view s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::runtime_error("bad flag '" + std::string(s) + "'");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buf, ptr};
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string quote_csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

RunStatus parse_run_status(std::string_view s) {
  for (auto st : {RunStatus::intercepted, RunStatus::timeout, RunStatus::aborted}) {
    if (s == to_string(st)) return st;
  }
  throw std::runtime_error("unknown run status '" + std::string(s) + "'");
}

ActiveStage parse_active_stage(std::string_view s) {
  for (auto st : {ActiveStage::blf, ActiveStage::sliding, ActiveStage::hold, ActiveStage::clamped,
                  ActiveStage::baseline, ActiveStage::terminal}) {
    if (s == to_string(st)) return st;
  }
  throw std::runtime_error("unknown stage '" + std::string(s) + "'");
}

void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryRecord> rows) {
  os << kTrajectoryHeader << '\n';
  for (const auto& r : rows) {
    for (double v : {r.t, r.r, r.theta_L, r.sigma, r.x, r.y, r.a_M_c, r.a_M, r.a_M_achieved, r.rho, r.rho1,
                     r.rho2, r.t_go, r.s_surface}) {
      os << format_double(v) << ',';
    }
    os << r.stage << '\n';
  }
}

std::vector<TrajectoryRecord> read_trajectory_csv(std::istream& is) {
  expect_header(is, kTrajectoryHeader, "trajectory");
  std::vector<TrajectoryRecord> out;
  for (const auto& f : read_rows(is, 15, "trajectory")) {
    TrajectoryRecord r;
    double* fields[] = {&r.t,   &r.r,    &r.theta_L, &r.sigma, &r.x,    &r.y,    &r.a_M_c,
                        &r.a_M, &r.a_M_achieved, &r.rho, &r.rho1, &r.rho2, &r.t_go, &r.s_surface};
    for (std::size_t i = 0; i < 14; ++i) *fields[i] = parse_double(f[i]);
    r.stage = std::stoi(f[14]);
    out.push_back(r);
  }
  return out;
}

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticRecord> rows) {
  os << kDiagnosticsHeader << '\n';
  for (const auto& d : rows) {
    for (double v : {d.t, d.alpha1, d.alpha1_dot, d.mu, d.kappa2_bar, d.z2_bar, d.F_p, d.G_p, d.rho_L, d.rho_U,
                     d.rho_L_alt, d.rho_U_alt}) {
      os << format_double(v) << ',';
    }
    os << to_string(d.active_stage) << '\n';
  }
}

std::vector<DiagnosticRecord> read_diagnostics_csv(std::istream& is) {
  expect_header(is, kDiagnosticsHeader, "diagnostics");
  std::vector<DiagnosticRecord> out;
  for (const auto& f : read_rows(is, 13, "diagnostics")) {
    DiagnosticRecord d;
    double* fields[] = {&d.t,   &d.alpha1, &d.alpha1_dot, &d.mu,    &d.kappa2_bar, &d.z2_bar,
                        &d.F_p, &d.G_p,    &d.rho_L,      &d.rho_U, &d.rho_L_alt,  &d.rho_U_alt};
    for (std::size_t i = 0; i < 12; ++i) *fields[i] = parse_double(f[i]);
    d.active_stage = parse_active_stage(f[12]);
    out.push_back(d);
  }
  return out;
}

void write_metrics_csv(std::ostream& os, std::span<const RunMetrics> rows) {
  os << kMetricsHeader << '\n';
  auto num = [&](double v) { os << format_double(v) << ','; };
  auto flag = [&](bool b) { os << (b ? '1' : '0') << ','; };
  for (const auto& m : rows) {
    os << quote_csv_field(m.label) << ',' << to_string(m.status) << ',';
    num(m.impact_time);
    num(m.miss_distance);
    num(m.control_effort);
    num(m.peak_abs_a_M);
    num(m.peak_abs_sigma);
    flag(m.barrier_violated);
    flag(m.fov_violated);
    flag(m.actuator_violated);
    if (m.realized_switch_time) os << format_double(*m.realized_switch_time);
    os << ',';
    num(m.terminal_sigma);
    num(m.terminal_a_M);
    num(m.peak_abs_a_M_c);
    num(m.terminal_window_abs_sigma);
    num(m.terminal_window_abs_a_M);
    num(m.rho_settle_time);
    num(m.switch_tgo_mismatch);
    num(m.analytic_switch_time);
    num(m.stage1_max_sigma_error);
    flag(m.command_clamped);
    flag(m.barrier_degenerate);
    flag(m.envelope_exceeded);
    flag(m.past_desired_time);
    num(m.filtered_los_rms);
    num(m.filtered_heading_rms);
    os << quote_csv_field(m.diagnostic) << '\n';
  }
}

std::vector<RunMetrics> read_metrics_csv(std::istream& is) {
  expect_header(is, kMetricsHeader, "metrics");
  std::vector<RunMetrics> out;
  for (const auto& f : read_rows(is, 27, "metrics")) {
    RunMetrics m;
    std::size_t i = 0;
    auto num = [&] { return parse_double(f[i++]); };
    auto flag = [&] { return parse_flag(f[i++]); };
    m.label = f[i++];
    m.status = parse_run_status(f[i++]);
    m.impact_time = num();
    m.miss_distance = num();
    m.control_effort = num();
    m.peak_abs_a_M = num();
    m.peak_abs_sigma = num();
    m.barrier_violated = flag();
    m.fov_violated = flag();
    m.actuator_violated = flag();
    if (!f[i].empty()) m.realized_switch_time = parse_double(f[i]);
    ++i;
    m.terminal_sigma = num();
    m.terminal_a_M = num();
    m.peak_abs_a_M_c = num();
    m.terminal_window_abs_sigma = num();
    m.terminal_window_abs_a_M = num();
    m.rho_settle_time = num();
    m.switch_tgo_mismatch = num();
    m.analytic_switch_time = num();
    m.stage1_max_sigma_error = num();
    m.command_clamped = flag();
    m.barrier_degenerate = flag();
    m.envelope_exceeded = flag();
    m.past_desired_time = flag();
    m.filtered_los_rms = num();
    m.filtered_heading_rms = num();
    m.diagnostic = f[i++];
    out.push_back(std::move(m));
  }
  return out;
}

std::string file_stem(std::string_view label) {
  std::string out(label);
  for (char& ch : out) {
    const bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') ||
                    ch == '.' || ch == '_' || ch == '-';
    if (!ok) ch = '_';
  }
  return out.empty() ? std::string("scenario") : out;
}

void write_plot_data(const std::filesystem::path& dir, const std::string& label, double t_d,
                     std::span<const TrajectoryRecord> rows) {
  std::filesystem::create_directories(dir);
  const std::string stem = file_stem(label);
  auto open = [&](const char* suffix, const char* header) {
    std::ofstream f(dir / (stem + suffix));
    if (!f) throw std::runtime_error("cannot write " + (dir / (stem + suffix)).string());
    f << "# " << header << '\n';
    return f;
  };
  auto xy = open("_xy.dat", "x y");
  auto tgo = open("_tgo.dat", "t t_go t_go_d t_go_M");
  auto am = open("_am_sigma.dat", "t a_M sigma");
  auto amc = open("_amc.dat", "t a_M_c a_M_achieved");
  for (const auto& r : rows) {
    const double t_go_d = t_d - r.t;
    xy << format_double(r.x) << ' ' << format_double(r.y) << '\n';
    tgo << format_double(r.t) << ' ' << format_double(r.t_go) << ' ' << format_double(t_go_d) << ' '
        << format_double(r.rho1 + t_go_d) << '\n';
    am << format_double(r.t) << ' ' << format_double(r.a_M) << ' ' << format_double(r.sigma) << '\n';
    amc << format_double(r.t) << ' ' << format_double(r.a_M_c) << ' ' << format_double(r.a_M_achieved) << '\n';
  }
}

void write_run_outputs(const std::filesystem::path& dir, std::span<const ScenarioConfig> cfgs,
                       std::span<const RunResult> results) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "trajectories");
  fs::create_directories(dir / "diagnostics");
  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  std::vector<RunMetrics> metrics;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const std::string stem = file_stem(r.metrics.label);
    {
      auto f = open(dir / "trajectories" / (stem + ".csv"));
      write_trajectory_csv(f, r.trajectory);
    }
    {
      auto f = open(dir / "diagnostics" / (stem + ".csv"));
      write_diagnostics_csv(f, r.diagnostics);
    }
    write_plot_data(dir / "plots", r.metrics.label, cfgs[i].t_d, r.trajectory);
    metrics.push_back(r.metrics);
  }
  {
    auto f = open(dir / "metrics.csv");
    write_metrics_csv(f, metrics);
  }
  const auto table = effort_table(metrics);
  open(dir / "effort_table.csv") << table.csv;
  open(dir / "effort_table.txt") << table.text;
}

}  // namespace itg
