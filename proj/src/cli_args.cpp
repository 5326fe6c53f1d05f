// Argument parsing for the esl tool (CLI11).

#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "esl/cli.hpp"
#include "esl/errors.hpp"

namespace esl::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
  std::optional<double> mag;
  std::optional<double> theta;
  std::vector<double> dtheta;
  std::optional<double> source_phase;
  bool radians = false;
  std::optional<double> beta;
  std::optional<double> beta_re;
  std::optional<double> beta_im;

  int n = 0;
  int m = 1;
  std::optional<double> r_re;
  double r_im = 0.0;
  std::string family = "coherent";

  std::string grid;
  bool numeric = false;
  int resolution = kDefaultPhaseResolution;

  std::optional<int> trunc;
  std::string format = "csv";
  std::string out;
  Tolerances tol;

  int figure_id = 0;
};

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "Output file (default: stdout)");
  sub->add_option("--trunc", o.trunc, "Fock truncation N (overrides ESL_DEFAULT_TRUNC)")
      ->check(CLI::PositiveNumber);
}

void add_tolerance_options(CLI::App* sub, Options& o) {
  sub->add_option("--norm-tol", o.tol.norm_tol, "Normalization tolerance");
  sub->add_option("--limit-tol", o.tol.limit_tol, "Limit / necessary-condition tolerance");
  sub->add_option("--grid-tol", o.tol.grid_tol, "Grid comparison tolerance");
  sub->add_option("--tail-tol", o.tol.truncation_tail_tol, "Truncation tail tolerance");
}

void add_ec_options(CLI::App* sub, Options& o) {
  sub->add_option("--mag", o.mag, "|alpha|")->check(CLI::NonNegativeNumber);
  sub->add_option("--theta", o.theta, "Phase theta of alpha (multiples of pi)");
  sub->add_option("--dtheta,--delta-theta", o.dtheta,
                  "Phase difference dtheta (multiples of pi); comma list for a series")
      ->delimiter(',');
  sub->add_option("--source-phase", o.source_phase, "Source phase (multiples of pi)");
  sub->add_flag("--radians", o.radians, "Read angles in radians instead of multiples of pi");
  sub->add_option("--beta", o.beta, "Real beta (sets |beta| and theta)");
  sub->add_option("--beta-re", o.beta_re, "Re beta");
  sub->add_option("--beta-im", o.beta_im, "Im beta");
}

void add_r_options(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Index n of the R family")->check(CLI::NonNegativeNumber);
  sub->add_option("--m", o.m, "Index m of the R family")->check(CLI::NonNegativeNumber);
  sub->add_option("--R", o.r_re, "R (real part)");
  sub->add_option("--R-im", o.r_im, "Im R");
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 6) {
    throw InvalidArgument("--grid expects re0,re1,im0,im1,nx,ny, got '" + text + "'");
  }
  GridSpec g;
  try {
    std::size_t used = 0;
    auto real = [&](const std::string& s) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    };
    auto integer = [&](const std::string& s) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    };
    g.re_min = real(parts[0]);
    g.re_max = real(parts[1]);
    g.im_min = real(parts[2]);
    g.im_max = real(parts[3]);
    g.nx = integer(parts[4]);
    g.ny = integer(parts[5]);
  } catch (const std::logic_error&) {
    throw InvalidArgument("--grid has a malformed number: '" + text + "'");
  }
  g.validate();
  return g;
}

bool same_angle(double a, double b) { return std::abs(wrap_angle(a - b)) <= 1e-12; }

// EC parameter points from --mag/--theta/--beta*, --dtheta and --source-phase.
std::vector<ECParams> resolve_points(const Options& o, Command cmd) {
  const double unit = o.radians ? 1.0 : kPi;
  const bool has_beta = o.beta || o.beta_re || o.beta_im;
  if (has_beta && (o.mag || o.theta)) {
    throw InvalidArgument("give either --beta/--beta-re/--beta-im or --mag/--theta, not both");
  }
  if (o.beta && (o.beta_re || o.beta_im)) {
    throw InvalidArgument("--beta is real; use --beta-re/--beta-im for complex beta");
  }

  double mag = 0.0;
  double theta = 0.0;
  bool theta_given = false;
  if (o.beta) {
    mag = std::abs(*o.beta);
    theta = *o.beta < 0.0 ? kPi : 0.0;
    theta_given = true;
  } else if (o.beta_re || o.beta_im) {
    const cplx b{o.beta_re.value_or(0.0), o.beta_im.value_or(0.0)};
    mag = std::abs(b);
    theta = std::arg(b);
    theta_given = true;
  } else if (o.mag) {
    mag = *o.mag;
    theta = o.theta.value_or(0.0) * unit;
    theta_given = o.theta.has_value();
  } else {
    throw InvalidArgument(std::string(to_string(cmd)) + " needs --mag (or --beta)");
  }

  if (cmd == Command::quadrature && (o.dtheta.empty() || !o.source_phase)) {
    throw InvalidArgument(
        "quadrature needs both --dtheta and --source-phase; the variances depend on both angles");
  }
  if (o.dtheta.empty() && !o.source_phase) {
    throw InvalidArgument(std::string(to_string(cmd)) + " needs --dtheta or --source-phase");
  }

  std::vector<ECParams> points;
  if (o.dtheta.empty()) {
    points.emplace_back(mag, theta, *o.source_phase * unit);
    return points;
  }
  for (double d : o.dtheta) {
    const double dth = d * unit;
    if (o.source_phase) {
      const double source = *o.source_phase * unit;
      if (theta_given && !same_angle(source - dth, theta)) {
        throw InvalidArgument("--theta, --dtheta and --source-phase are inconsistent "
                              "(dtheta = source_phase - theta)");
      }
      points.push_back(ECParams(mag, source - dth, source));
    } else {
      points.push_back(ECParams::from_phase_difference(mag, theta, dth));
    }
  }
  return points;
}

std::string config_error_line(const std::string& message) {
  return nlohmann::json{{"error", "config"}, {"exit", kExitConfig}, {"message", message}}.dump();
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"esl: empty states, the EC state and its observables"};
  app.name("esl");
  app.require_subcommand(1, 1);
  Options o;

  struct Entry {
    Command cmd;
    const char* help;
  };
  const Entry entries[] = {
      {Command::photon_dist, "Photon-number distribution P_n (one column per dtheta)"},
      {Command::stats, "Photon statistics <n>, <n^2>, dn, Mandel Q, M, emptiness"},
      {Command::phase_dist, "Pegg-Barnett phase distribution"},
      {Command::quadrature, "Quadrature means/variances and squeezing flags"},
      {Command::husimi, "Husimi Q function on a grid"},
      {Command::wigner, "Wigner function on a grid"},
      {Command::build_empty, "Numeric empty state of a state family"},
      {Command::empty_fock, "Empty-Fock state from the R family double limit"},
      {Command::validate, "Run the acceptance checks"},
      {Command::figure, "Preset figure datasets (1..6)"},
  };

  std::map<CLI::App*, Command> by_app;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(to_string(e.cmd), e.help);
    by_app[sub] = e.cmd;
    add_output_options(sub, o);
    switch (e.cmd) {
      case Command::photon_dist:
      case Command::stats:
      case Command::quadrature:
        add_ec_options(sub, o);
        break;
      case Command::phase_dist:
        add_ec_options(sub, o);
        sub->add_option("--resolution", o.resolution, "Number of phase samples (>= 64)");
        break;
      case Command::husimi:
      case Command::wigner:
        add_ec_options(sub, o);
        sub->add_option("--grid", o.grid, "re0,re1,im0,im1,nx,ny");
        sub->add_flag("--numeric", o.numeric, "Evaluate through the Fock-space routines");
        add_tolerance_options(sub, o);
        break;
      case Command::build_empty:
        add_ec_options(sub, o);
        add_r_options(sub, o);
        sub->add_option("--family", o.family, "State family")
            ->check(CLI::IsMember({"coherent", "r-state", "norm-varying"}));
        add_tolerance_options(sub, o);
        break;
      case Command::empty_fock:
        add_r_options(sub, o);
        sub->add_option("--source-phase", o.source_phase, "Source phase (multiples of pi)");
        sub->add_flag("--radians", o.radians, "Read angles in radians");
        add_tolerance_options(sub, o);
        break;
      case Command::validate:
        break;
      case Command::figure:
        sub->add_option("id", o.figure_id, "Figure number 1..6")->required();
        break;
    }
  }

  std::vector<std::string> args;
  for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << config_error_line(e.what()) << '\n';
    return kExitConfig;
  }

  const Command cmd = by_app.at(app.get_subcommands().front());
  RunConfig config;
  try {
    if (cmd == Command::figure) {
      config = figure_preset(o.figure_id);
    } else {
      config.command = cmd;
      const double unit = o.radians ? 1.0 : kPi;
      switch (cmd) {
        case Command::photon_dist:
        case Command::stats:
        case Command::phase_dist:
        case Command::quadrature:
        case Command::husimi:
        case Command::wigner:
          config.points = resolve_points(o, cmd);
          break;
        case Command::build_empty:
          config.family = o.family == "r-state"        ? FamilyKind::r_state
                          : o.family == "norm-varying" ? FamilyKind::norm_varying
                                                       : FamilyKind::coherent;
          if (config.family == FamilyKind::r_state) {
            config.r_params = RStateParams{o.n, o.m, cplx{o.r_re.value_or(0.0), o.r_im}};
            config.source_phase = o.source_phase.value_or(0.0) * unit;
          } else {
            config.points = resolve_points(o, cmd);
          }
          break;
        case Command::empty_fock:
          config.r_params = RStateParams{o.n, o.m, 0.0};
          config.source_phase = o.source_phase.value_or(0.0) * unit;
          break;
        default:
          break;
      }
      if (!o.grid.empty()) config.grid = parse_grid(o.grid);
      config.numeric = o.numeric;
      config.phase_resolution = o.resolution;
      config.tol = o.tol;
      config.tol.validate();
    }
    config.truncation = o.trunc;
    config.output_path = o.out;
    config.format = o.format == "json" ? Format::json : Format::csv;
  } catch (const std::exception& e) {
    err << error_line(e) << '\n';
    return exit_code_for(e);
  }
  return run(config, out, err);
}

}  // namespace esl::cli
