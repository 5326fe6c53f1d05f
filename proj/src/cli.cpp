#include "esl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>

#include "esl/builder.hpp"
#include "esl/errors.hpp"
#include "esl/validation.hpp"

namespace esl::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Angle as a multiple of pi, for column names: "0.25pi".
std::string pi_multiple(double angle) { return format_number(angle / kPi) + "pi"; }

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

json params_json(const ECParams& p) {
  return {{"mag", p.mag()},
          {"theta", p.theta()},
          {"source_phase", p.source_phase()},
          {"dtheta", p.phase_difference()}};
}

json tolerances_json(const Tolerances& t) {
  return {{"norm_tol", t.norm_tol},
          {"limit_tol", t.limit_tol},
          {"grid_tol", t.grid_tol},
          {"truncation_tail_tol", t.truncation_tail_tol}};
}

json grid_json(const GridSpec& g) {
  return {{"re_min", g.re_min}, {"re_max", g.re_max}, {"im_min", g.im_min},
          {"im_max", g.im_max}, {"nx", g.nx},         {"ny", g.ny}};
}

void require_points(const RunConfig& c) {
  if (c.points.empty()) {
    throw InvalidArgument(std::string(to_string(c.command)) +
                          " needs EC parameters (--mag plus --dtheta or --source-phase)");
  }
}

int max_truncation(const RunConfig& c) {
  int n = 0;
  for (const ECParams& p : c.points) n = std::max(n, resolve_truncation(c, p.mag()));
  return n;
}

const char* quantity_of(const RunConfig& c) {
  switch (c.command) {
    case Command::photon_dist: return "photon-number distribution P_n of the EC state (closed form)";
    case Command::stats:
      return "photon statistics of the EC state: <n>, <n^2>, delta n, Mandel Q, M, emptiness "
             "(closed form)";
    case Command::phase_dist: return "Pegg-Barnett phase distribution P(phi) of the EC state";
    case Command::quadrature:
      return "quadrature means and variances of X1, X2 for the EC state, with squeezing flags "
             "(closed form)";
    case Command::husimi:
      return c.numeric ? "Husimi Q(alpha) of the EC state (Fock-space overlap)"
                       : "Husimi Q(alpha) of the EC state (closed form)";
    case Command::wigner:
      return c.numeric ? "Wigner W(alpha) of the EC state (displaced parity)"
                       : "Wigner W(alpha) of the EC state (closed form)";
    case Command::build_empty:
      return "numeric empty state: Richardson-extrapolated difference quotient along the source "
             "direction";
    case Command::empty_fock: return "empty-Fock state from the R family double limit R -> 0";
    case Command::validate: return "acceptance checks";
    case Command::figure: break;
  }
  return "";
}

const char* gnuplot_hint(int figure) {
  switch (figure) {
    case 1: return "set datafile separator ','; plot for [c=2:4] 'FILE' using 1:c with linespoints";
    case 2: return "set datafile separator ','; plot for [b=0:3] 'FILE' index b using 4:7 with lines";
    case 3: return "set datafile separator ','; plot for [b=0:5] 'FILE' index b using 1:8 with lines";
    case 4: return "set datafile separator ','; plot for [b=0:11] 'FILE' index b using 1:7 with lines";
    case 5:
    case 6: return "set datafile separator ','; set pm3d map; splot 'FILE' index 0 using 1:2:3";
    default: return nullptr;
  }
}

std::vector<Cell> amplitude_row(std::size_t n, cplx c) {
  return {static_cast<double>(n), c.real(), c.imag(), std::norm(c)};
}

Block amplitude_block(const FockVector& v) {
  Block b;
  b.label = "state";
  b.columns = {"n", "re", "im", "abs2"};
  for (std::size_t n = 0; n < v.dim(); ++n) b.rows.push_back(amplitude_row(n, v[n]));
  return b;
}

// Splits one-row-per-point output into the configured series blocks.
std::vector<Block> split_series(const RunConfig& c, Block all) {
  if (c.series_length == 0 || c.series_length >= all.rows.size()) {
    if (!c.series_labels.empty()) all.label = c.series_labels.front();
    return {std::move(all)};
  }
  std::vector<Block> out;
  for (std::size_t start = 0, k = 0; start < all.rows.size(); start += c.series_length, ++k) {
    Block b;
    b.columns = all.columns;
    b.label = k < c.series_labels.size() ? json(c.series_labels[k]) : json(k);
    const std::size_t stop = std::min(all.rows.size(), start + c.series_length);
    b.rows.assign(all.rows.begin() + static_cast<std::ptrdiff_t>(start),
                  all.rows.begin() + static_cast<std::ptrdiff_t>(stop));
    out.push_back(std::move(b));
  }
  return out;
}

void compute_photon_dist(const RunConfig& c, Dataset& d) {
  require_points(c);
  const int n_max = max_truncation(c);
  d.meta["truncation"] = n_max;
  Block b;
  b.label = "P_n";
  b.columns.push_back("n");
  std::vector<std::vector<double>> cols;
  for (const ECParams& p : c.points) {
    b.columns.push_back("P(dtheta=" + pi_multiple(p.phase_difference()) + ")");
    cols.push_back(photon_distribution_closed(p, n_max));
    double kept = 0.0;
    for (double x : cols.back()) kept += x;
    if (1.0 - kept > c.tol.truncation_tail_tol) {
      throw TruncationOverflow("photon-dist: P_n beyond N = " + std::to_string(n_max) +
                                   " carries weight " + format_number(1.0 - kept),
                               default_truncation(p.mag()));
    }
  }
  for (int n = 0; n <= n_max; ++n) {
    std::vector<Cell> row{static_cast<double>(n)};
    for (const auto& col : cols) row.emplace_back(col[static_cast<std::size_t>(n)]);
    b.rows.push_back(std::move(row));
  }
  d.blocks.push_back(std::move(b));
}

void compute_stats(const RunConfig& c, Dataset& d) {
  require_points(c);
  d.meta["truncation"] = nullptr;
  Block b;
  b.label = "stats";
  b.columns = {"mag", "theta", "source_phase", "dtheta", "mean_n",
               "mean_n2", "delta_n", "mandel_q", "M", "emptiness"};
  for (const ECParams& p : c.points) {
    const PhotonStats s = photon_stats_closed(p);
    b.rows.push_back({p.mag(), p.theta(), p.source_phase(), p.phase_difference(), s.mean_n,
                      s.mean_n2, s.delta_n, s.mandel_q, s.M, *s.emptiness});
  }
  d.blocks = split_series(c, std::move(b));
}

void compute_phase_dist(const RunConfig& c, Dataset& d) {
  require_points(c);
  const int n_max = max_truncation(c);
  d.meta["truncation"] = n_max;
  d.meta["resolution"] = c.phase_resolution;
  Block b;
  b.label = "P(phi)";
  b.columns.push_back("phi");
  std::vector<PhaseDistribution> dists;
  for (const ECParams& p : c.points) {
    b.columns.push_back("P(dtheta=" + pi_multiple(p.phase_difference()) + ")");
    dists.push_back(phase_distribution(ec_state(p, n_max, c.tol), c.phase_resolution));
  }
  json peaks = json::array();
  for (const auto& dist : dists) peaks.push_back(dist.peaks().size());
  d.meta["peak_counts"] = peaks;
  for (int k = 0; k < c.phase_resolution; ++k) {
    std::vector<Cell> row{dists.front().angles[static_cast<std::size_t>(k)]};
    for (const auto& dist : dists) row.emplace_back(dist.densities[static_cast<std::size_t>(k)]);
    b.rows.push_back(std::move(row));
  }
  d.blocks.push_back(std::move(b));
}

void compute_quadrature(const RunConfig& c, Dataset& d) {
  require_points(c);
  d.meta["truncation"] = nullptr;
  Block b;
  b.label = "quadrature";
  b.columns = {"mag", "theta", "source_phase", "dtheta", "mean_x1", "mean_x2",
               "var_x1", "var_x2", "squeezed_x1", "squeezed_x2"};
  for (const ECParams& p : c.points) {
    const auto [m1, m2] = quadrature_means_closed(p);
    const QuadratureVariances v = quadrature_variances_closed(p);
    const SqueezingReport s = squeezing_report(p);
    b.rows.push_back({p.mag(), p.theta(), p.source_phase(), p.phase_difference(), m1, m2, v.var_x1,
                      v.var_x2, s.squeezed_x1 ? 1.0 : 0.0, s.squeezed_x2 ? 1.0 : 0.0});
  }
  d.blocks = split_series(c, std::move(b));
}

void compute_grid(const RunConfig& c, Dataset& d, DistributionKind kind) {
  require_points(c);
  const GridSpec spec = c.grid.value_or(GridSpec{});
  spec.validate();
  d.meta["grid"] = grid_json(spec);
  d.meta["truncation"] = c.numeric ? json(max_truncation(c)) : json(nullptr);
  for (const ECParams& p : c.points) {
    DistributionSource source = p;
    if (c.numeric) source = ec_state(p, max_truncation(c), c.tol);
    const DistributionGrid g = evaluate_grid(kind, source, spec, c.tol);
    Block b;
    b.label = params_json(p);
    b.label["min"] = g.min();
    b.label["max"] = g.max();
    b.columns = {"re", "im", "value"};
    b.scan_length = static_cast<std::size_t>(spec.nx);
    b.rows.reserve(g.values.size());
    for (int iy = 0; iy < spec.ny; ++iy) {
      for (int ix = 0; ix < spec.nx; ++ix) {
        b.rows.push_back({spec.re_at(ix), spec.im_at(iy), g.at(ix, iy)});
      }
    }
    d.blocks.push_back(std::move(b));
  }
}

void compute_build_empty(const RunConfig& c, Dataset& d) {
  std::optional<StateFamily> fam;
  std::vector<double> params;
  double direction = 0.0;
  std::optional<FockVector> closed;
  int n_max = 0;

  if (c.family == FamilyKind::r_state) {
    if (!c.r_params) throw InvalidArgument("build-empty --family r-state needs --n, --m, --R");
    const RStateParams& r = *c.r_params;
    r.validate();
    n_max = c.truncation.value_or(std::max(r.n, r.m));
    fam = r_state_family(r.n, r.m, n_max);
    params = {r.R.real(), r.R.imag()};
    direction = c.source_phase;
    closed = empty_r_state_directional(r, direction, n_max);
    d.meta["parameters"] = {{"n", r.n}, {"m", r.m}, {"R_re", r.R.real()}, {"R_im", r.R.imag()},
                            {"source_phase", direction}};
  } else {
    require_points(c);
    const ECParams& p = c.points.front();
    n_max = resolve_truncation(c, p.mag());
    direction = p.source_phase();
    if (c.family == FamilyKind::coherent) {
      fam = coherent_family(n_max);
      params = {p.mag(), p.theta()};
      closed = ec_state(p, n_max, c.tol);
    } else {
      fam = norm_varying_family(n_max);
      params = {p.alpha().real(), p.alpha().imag()};
    }
  }
  d.meta["family"] = to_string(c.family);
  d.meta["truncation"] = n_max;

  const EmptyBuildReport rep = build_empty_state(*fam, params, direction, c.tol);
  json steps = json::array();
  for (double h : rep.steps_used) steps.push_back(h);
  d.meta["builder"] = {{"g1_real", rep.g1_real},
                       {"g2_real", rep.g2_real},
                       {"condition_met", rep.condition_met},
                       {"extrapolation_error", rep.extrapolation_error},
                       {"steps", steps}};
  if (!rep.condition_met) {
    d.status = kExitCondition;
    return;
  }
  if (closed) d.meta["builder"]["fidelity_with_closed_form"] = fidelity(*rep.state, *closed);
  d.blocks.push_back(amplitude_block(*rep.state));
}

void compute_empty_fock(const RunConfig& c, Dataset& d) {
  const RStateParams r = c.r_params.value_or(RStateParams{});
  r.validate();
  d.meta["parameters"] = {{"n", r.n}, {"m", r.m}, {"source_phase", c.source_phase}};
  d.meta["truncation"] = std::max(r.n, r.m) + 1;
  d.blocks.push_back(amplitude_block(empty_fock_double_limit(r, c.source_phase, c.tol)));
}

void compute_validate(Dataset& d) {
  d.meta["truncation"] = nullptr;
  Block b;
  b.label = "checks";
  b.columns = {"id", "name", "passed", "detail"};
  for (const CheckResult& r : run_all_checks()) {
    b.rows.push_back({static_cast<double>(r.id), r.name, r.passed ? "true" : "false", r.detail});
    if (!r.passed) d.status = kExitFailure;
  }
  d.blocks.push_back(std::move(b));
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void write_cell(std::ostream& out, const Cell& cell) {
  if (const double* x = std::get_if<double>(&cell)) {
    out << format_number(*x);
    return;
  }
  const auto& s = std::get<std::string>(cell);
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char ch : s) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::photon_dist: return "photon-dist";
    case Command::stats: return "stats";
    case Command::phase_dist: return "phase-dist";
    case Command::quadrature: return "quadrature";
    case Command::husimi: return "husimi";
    case Command::wigner: return "wigner";
    case Command::build_empty: return "build-empty";
    case Command::empty_fock: return "empty-fock";
    case Command::validate: return "validate";
    case Command::figure: return "figure";
  }
  return "";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::photon_dist, Command::stats, Command::phase_dist, Command::quadrature,
                    Command::husimi, Command::wigner, Command::build_empty, Command::empty_fock,
                    Command::validate, Command::figure}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(FamilyKind f) {
  switch (f) {
    case FamilyKind::coherent: return "coherent";
    case FamilyKind::r_state: return "r-state";
    case FamilyKind::norm_varying: return "norm-varying";
  }
  return "";
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

RunConfig figure_preset(int id) {
  RunConfig c;
  c.figure = id;
  auto linspace = [](double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
    return v;
  };
  auto label = [](const std::string& key, double angle_or_value, bool angle) {
    return key + "=" + (angle ? pi_multiple(angle_or_value) : format_number(angle_or_value));
  };

  switch (id) {
    case 1:
      c.command = Command::photon_dist;
      for (double dth : {0.0, kPi / 4.0, kPi / 2.0}) {
        c.points.push_back(ECParams::from_phase_difference(4.0, 0.0, dth));
      }
      break;
    case 2: {
      c.command = Command::stats;
      const auto dths = linspace(0.0, kPi, 91);
      for (double mag : {0.5, 1.0, 2.0, 3.0}) {
        for (double dth : dths) c.points.push_back(ECParams::from_phase_difference(mag, 0.0, dth));
        c.series_labels.push_back(label("mag", mag, false));
      }
      c.series_length = dths.size();
      break;
    }
    case 3: {
      c.command = Command::stats;
      const auto mags = linspace(0.05, 5.0, 100);
      for (double dth : {0.0, kPi / 20.0, kPi / 10.0, kPi / 5.0, 3.0 * kPi / 10.0, kPi / 2.0}) {
        for (double mag : mags) c.points.push_back(ECParams::from_phase_difference(mag, 0.0, dth));
        c.series_labels.push_back(label("dtheta", dth, true));
      }
      c.series_length = mags.size();
      break;
    }
    case 4: {
      c.command = Command::quadrature;
      const auto mags = linspace(0.05, 5.0, 100);
      for (double source : {0.0, kPi / 4.0, kPi / 2.0}) {
        for (double dth : {0.0, kPi / 8.0, kPi / 4.0, kPi / 2.0}) {
          for (double mag : mags) c.points.push_back(ECParams(mag, source - dth, source));
          c.series_labels.push_back(label("source_phase", source, true) + " " +
                                    label("dtheta", dth, true));
        }
      }
      c.series_length = mags.size();
      break;
    }
    case 5:
    case 6:
      c.command = id == 5 ? Command::husimi : Command::wigner;
      for (double dth : {0.0, kPi / 4.0, kPi / 2.0}) {
        c.points.push_back(ECParams::from_phase_difference(1.0, 0.0, dth));
      }
      c.grid = GridSpec{};
      break;
    default:
      throw InvalidArgument("figure id must be in 1..6, got " + std::to_string(id));
  }
  return c;
}

int resolve_truncation(const RunConfig& config, double mag) {
  if (config.truncation) {
    if (*config.truncation < 1) throw InvalidArgument("--trunc must be >= 1");
    return *config.truncation;
  }
  if (const char* env = std::getenv("ESL_DEFAULT_TRUNC"); env && *env) {
    const std::string_view s(env);
    int n = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || n < 1) {
      throw InvalidArgument("ESL_DEFAULT_TRUNC must be a positive integer, got '" +
                            std::string(s) + "'");
    }
    return n;
  }
  return default_truncation(mag);
}

Dataset compute(const RunConfig& config) {
  config.tol.validate();
  if (config.command == Command::figure) {
    throw InvalidArgument("figure configs must be expanded with figure_preset first");
  }
  Dataset d;
  d.meta["tool"] = "esl";
  d.meta["version"] = kVersion;
  d.meta["command"] = to_string(config.command);
  if (config.figure != 0) d.meta["figure"] = config.figure;
  d.meta["quantity"] = quantity_of(config);
  if (!config.points.empty()) {
    json pts = json::array();
    for (const ECParams& p : config.points) pts.push_back(params_json(p));
    d.meta["parameters"] = pts;
  }
  d.meta["angle_unit"] = "radians";
  d.meta["tolerances"] = tolerances_json(config.tol);

  switch (config.command) {
    case Command::photon_dist: compute_photon_dist(config, d); break;
    case Command::stats: compute_stats(config, d); break;
    case Command::phase_dist: compute_phase_dist(config, d); break;
    case Command::quadrature: compute_quadrature(config, d); break;
    case Command::husimi: compute_grid(config, d, DistributionKind::husimi); break;
    case Command::wigner: compute_grid(config, d, DistributionKind::wigner); break;
    case Command::build_empty: compute_build_empty(config, d); break;
    case Command::empty_fock: compute_empty_fock(config, d); break;
    case Command::validate: compute_validate(d); break;
    case Command::figure: break;
  }
  if (const char* hint = gnuplot_hint(config.figure)) d.meta["gnuplot"] = hint;
  d.meta["generated_at"] = utc_timestamp();
  return d;
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (const auto& [key, value] : data.meta.items()) {
    out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
        << '\n';
  }
  for (std::size_t b = 0; b < data.blocks.size(); ++b) {
    const Block& block = data.blocks[b];
    if (b > 0) out << "\n\n";
    out << "# block " << b << ": "
        << (block.label.is_string() ? block.label.get<std::string>() : block.label.dump()) << '\n';
    for (std::size_t k = 0; k < block.columns.size(); ++k) {
      out << (k ? "," : "") << block.columns[k];
    }
    out << '\n';
    for (std::size_t r = 0; r < block.rows.size(); ++r) {
      const auto& row = block.rows[r];
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out << ',';
        write_cell(out, row[k]);
      }
      out << '\n';
      if (block.scan_length && (r + 1) % block.scan_length == 0 && r + 1 < block.rows.size()) {
        out << '\n';
      }
    }
  }
}

nlohmann::ordered_json to_json(const Dataset& data) {
  json blocks = json::array();
  for (const Block& block : data.blocks) {
    json rows = json::array();
    for (const auto& row : block.rows) {
      json r = json::array();
      for (const Cell& cell : row) {
        if (const double* x = std::get_if<double>(&cell)) r.push_back(number(*x));
        else r.push_back(std::get<std::string>(cell));
      }
      rows.push_back(std::move(r));
    }
    blocks.push_back({{"label", block.label}, {"columns", block.columns}, {"rows", std::move(rows)}});
  }
  return {{"meta", data.meta}, {"data", std::move(blocks)}};
}

void write_json(const Dataset& data, std::ostream& out) { out << to_json(data).dump() << '\n'; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const TruncationOverflow*>(&e)) return kExitTruncation;
  if (dynamic_cast<const LimitDivergence*>(&e)) return kExitDivergence;
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const InvalidFamily*>(&e) ||
      dynamic_cast<const GridTooLarge*>(&e) || dynamic_cast<const SingularPoint*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const UndefinedQuantity*>(&e)) {
    return kExitConfig;
  }
  return kExitFailure;
}

std::string error_line(const std::exception& e) {
  json j;
  const auto* err = dynamic_cast<const Error*>(&e);
  j["error"] = err ? err->code() : std::string("internal");
  j["exit"] = exit_code_for(e);
  j["message"] = e.what();
  if (const auto* t = dynamic_cast<const TruncationOverflow*>(&e)) j["required_n"] = t->required_n();
  return j.dump();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Dataset data = compute(config);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.output_path.empty() && config.output_path != "-") {
      file.open(config.output_path, std::ios::binary | std::ios::trunc);
      if (!file) {
        err << json{{"error", "io"}, {"exit", kExitConfig},
                    {"message", "cannot open output file " + config.output_path}}.dump()
            << '\n';
        return kExitConfig;
      }
      sink = &file;
    }
    if (config.format == Format::json) write_json(data, *sink);
    else write_csv(data, *sink);
    sink->flush();

    if (data.status == kExitCondition) {
      err << json{{"error", "condition-not-met"}, {"exit", kExitCondition},
                  {"message", "necessary condition Re(g1) = 0 fails; g1_real = " +
                                  format_number(data.meta["builder"]["g1_real"].get<double>())}}.dump()
          << '\n';
    } else if (data.status == kExitFailure) {
      err << json{{"error", "validation-failed"}, {"exit", kExitFailure},
                  {"message", "one or more acceptance checks failed"}}.dump()
          << '\n';
    }
    return data.status;
  } catch (const std::exception& e) {
    err << error_line(e) << '\n';
    return exit_code_for(e);
  }
}

}  // namespace esl::cli
