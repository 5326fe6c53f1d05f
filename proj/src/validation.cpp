#include "esl/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>

#include "esl/builder.hpp"
#include "esl/families.hpp"
#include "esl/observables.hpp"
#include "esl/quasiprob.hpp"

namespace esl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoOverPi = 2.0 / kPi;

// The standard parameter grid: |alpha| x theta x dtheta.
constexpr double kMags[] = {0.5, 1.0, 2.0};
constexpr double kThetas[] = {0.0, kPi / 3.0, -2.0 * kPi / 3.0};
constexpr double kPhases[] = {0.0, kPi / 4.0, kPi / 2.0};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

CheckResult guarded(int id, const char* name, const std::function<CheckResult()>& body) {
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = name;
  return r;
}

double residual_norm(const FockVector& a, const FockVector& b) {
  return std::sqrt((a - b).norm_squared());
}

// Log-log slope of |normalize(d_h) - exact| against h.
double convergence_slope(const StateFamily& fam, const ParamPath& path, const FockVector& exact) {
  const GCoefficients g = estimate_g_coefficients(fam, path);
  std::vector<double> x, y;
  for (double h : {4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3}) {
    x.push_back(std::log(h));
    y.push_back(std::log(max_abs_diff(normalize(difference_quotient(fam, path, h, g.g2_real)), exact)));
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

CheckResult check_mean_photon_bound() {
  return guarded(1, "mean photon bound", [] {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_bound = 0.0;  // most negative slack
    double worst_diff = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double mag = 6.0 * (1.0 - u(rng));  // (0, 6]
      const double dth = kPi * u(rng);
      const ECParams p = ECParams::from_phase_difference(mag, 0.0, dth);
      const double closed = photon_stats_closed(p).mean_n;
      const double generic = expectation_number(ec_state(p, default_truncation(mag)));
      const double m2 = mag * mag;
      worst_bound = std::min({worst_bound, closed - (1.0 + m2), (2.0 + m2) - closed});
      worst_diff = std::max(worst_diff, std::abs(closed - generic));
    }
    CheckResult r;
    r.passed = worst_bound >= -1e-12 && worst_diff <= 1e-8;
    r.detail = fmt("min bound slack %.3g, max |closed - generic| %.3g", worst_bound, worst_diff);
    return r;
  });
}

CheckResult check_fluctuation_endpoints() {
  return guarded(2, "fluctuation endpoints", [] {
    double worst = 0.0;
    for (double mag : {1.0, 2.0, 4.0}) {
      const ECParams p(mag, 0.0, 0.0);
      const double target = std::sqrt(3.0) * mag;
      worst = std::max(worst, std::abs(photon_stats_closed(p).delta_n - target));
      const PhotonStats g = photon_stats_generic(ec_state(p, default_truncation(mag)));
      worst = std::max(worst, std::abs(g.delta_n - target));
    }
    CheckResult r;
    r.passed = worst <= 1e-9;
    r.detail = fmt("max |dn - sqrt(3)|a|| %.3g", worst);
    return r;
  });
}

CheckResult check_interference_zero() {
  return guarded(3, "interference zero", [] {
    const ECParams p(2.0, 0.0, 0.0);
    const int n_max = default_truncation(2.0);
    const double closed = photon_distribution_closed(p, n_max)[4];
    const double numeric = std::norm(ec_state(p, n_max)[4]);
    CheckResult r;
    r.passed = closed <= 1e-12 && numeric <= 1e-12;
    r.detail = fmt("P_4 closed %.3g, from amplitudes %.3g", closed, numeric);
    return r;
  });
}

CheckResult check_r_orthogonality() {
  return guarded(4, "R orthogonality", [] {
    double worst = 0.0;
    for (double rr : {0.5, 1.0, 3.0}) {
      const RStateParams p{0, 1, rr};
      worst = std::max(worst, std::abs(inner_product(r_state(p, 1), empty_r_state(p, 1))));
    }
    CheckResult r;
    r.passed = worst <= 1e-12;
    r.detail = fmt("max |<R|E_R>| %.3g", worst);
    return r;
  });
}

CheckResult check_vacuum_limit() {
  return guarded(5, "vacuum limit", [] {
    const int n_max = 20;
    double worst_fid = 1.0;
    double worst_phase = 0.0;
    for (double phase : {0.0, kPi / 2.0}) {
      const FockVector target = std::polar(1.0, phase) * fock_state(1, n_max);
      for (const FockVector& v : {ec_vacuum_double_limit(phase, n_max), ec_vacuum_limit(phase, n_max)}) {
        worst_fid = std::min(worst_fid, fidelity(v, fock_state(1, n_max)));
        worst_phase = std::max(worst_phase, std::abs(v[1] - target[1]));
      }
    }
    CheckResult r;
    r.passed = worst_fid >= 1.0 - 1e-6 && worst_phase <= 1e-3;
    r.detail = fmt("min fidelity with |1> 1 - %.3g, max |c_1 - e^{i phase}| %.3g",
                   1.0 - worst_fid, worst_phase);
    return r;
  });
}

CheckResult check_numeric_vs_closed_empty_state() {
  return guarded(6, "numeric vs closed empty state", [] {
    double worst_fid = 1.0;
    for (double mag : kMags) {
      const int n_max = default_truncation(mag);
      const StateFamily fam = coherent_family(n_max);
      for (double theta : kThetas) {
        for (double phase : kPhases) {
          const std::vector<double> params{mag, theta};
          const EmptyBuildReport rep = build_empty_state(fam, params, phase);
          if (!rep.state) return CheckResult{0, "", false, "condition not met on coherent family"};
          worst_fid = std::min(worst_fid, fidelity(*rep.state, ec_state(ECParams(mag, theta, phase), n_max)));
        }
      }
    }
    const StateFamily rfam = r_state_family(0, 1, 1);
    for (double mag : {0.5, 1.0, 3.0}) {
      for (double theta : kThetas) {
        for (double phase : kPhases) {
          const cplx big_r = std::polar(mag, theta);
          const std::vector<double> params{big_r.real(), big_r.imag()};
          const EmptyBuildReport rep = build_empty_state(rfam, params, phase);
          if (!rep.state) return CheckResult{0, "", false, "condition not met on R family"};
          worst_fid = std::min(worst_fid, fidelity(*rep.state, empty_r_state_directional({0, 1, big_r}, phase, 1)));
        }
      }
    }

    const int n_max = default_truncation(1.0);
    const StateFamily fam = coherent_family(n_max);
    const std::vector<double> cparams{1.0, 0.0};
    const double slope_c = convergence_slope(fam, source_path(fam, cparams, 0.5),
                                             ec_state(ECParams(1.0, 0.0, 0.5), n_max));
    const cplx big_r{1.0, 0.5};
    const std::vector<double> rparams{big_r.real(), big_r.imag()};
    const double slope_r = convergence_slope(rfam, source_path(rfam, rparams, 0.7),
                                             empty_r_state_directional({0, 1, big_r}, 0.7, 1));
    CheckResult r;
    r.passed = worst_fid >= 1.0 - 1e-8 && std::abs(slope_c - 1.0) <= 0.2 &&
               std::abs(slope_r - 1.0) <= 0.2;
    r.detail = fmt("min fidelity 1 - %.3g, convergence order %.3f (coherent), %.3f (R)",
                   1.0 - worst_fid, slope_c, slope_r);
    return r;
  });
}

CheckResult check_squeezing_numbers() {
  return guarded(7, "squeezing numbers", [] {
    const QuadratureVariances v = quadrature_variances_closed(ECParams(std::sqrt(3.0), 0.0, kPi / 2.0));
    const double err = std::max(std::abs(v.var_x1 - 3.0 / 16.0), std::abs(v.var_x2 - 3.0 / 8.0));

    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 20; ++i) {
      const double mag = 0.25 * (i + 1);  // 0.25 .. 5
      for (int j = 0; j < 20; ++j) {
        const double dth = kPi * j / 19.0;
        for (int k = 0; k < 20; ++k) {
          const double source = 2.0 * kPi * k / 20.0;
          const QuadratureVariances q = quadrature_variances_closed(ECParams(mag, source - dth, source));
          lo = std::min(lo, q.var_x1 * q.var_x2);
          hi = std::max(hi, q.var_x1 * q.var_x2);
        }
      }
    }
    CheckResult r;
    r.passed = err <= 1e-10 && lo >= 1.0 / 16.0 - 1e-12 && hi <= 9.0 / 16.0 + 1e-12;
    r.detail = fmt("variance error %.3g, product range [%.6g, %.6g]", err, lo, hi);
    return r;
  });
}

CheckResult check_wigner_cross_validation() {
  return guarded(8, "wigner cross-validation", [] {
    GridSpec grid;
    grid.nx = 21;
    grid.ny = 21;
    double worst = 0.0;
    bool all_negative = true;
    for (double mag : kMags) {
      for (double dth : kPhases) {
        const ECParams p(mag, 0.0, dth);
        const DistributionGrid closed = evaluate_grid(DistributionKind::wigner, p, grid);
        const DistributionGrid numeric =
            evaluate_grid(DistributionKind::wigner, ec_state(p, default_truncation(mag)), grid);
        for (std::size_t k = 0; k < closed.values.size(); ++k) {
          worst = std::max(worst, std::abs(closed.values[k] - numeric.values[k]));
        }
        all_negative = all_negative && closed.min() < 0.0;
      }
    }

    // beta = 1: the deepest minimum sits at alpha = beta for dtheta = 0.
    double min_at_zero = 0.0;
    bool zero_is_deepest = true;
    for (double dth : kPhases) {
      const double m = evaluate_grid(DistributionKind::wigner, ECParams(1.0, 0.0, dth), grid).min();
      if (dth == 0.0) min_at_zero = m;
      else zero_is_deepest = zero_is_deepest && min_at_zero <= m;
    }
    const double min_err = std::abs(min_at_zero + kTwoOverPi);

    CheckResult r;
    r.passed = worst <= 1e-6 && min_err <= 1e-8 && all_negative && zero_is_deepest;
    r.detail = fmt("max |closed - numeric| %.3g, |min + 2/pi| %.3g", worst, min_err) +
               (all_negative ? ", every grid has negative values" : ", a grid has no negative value") +
               (zero_is_deepest ? "" : ", dtheta = 0 is not the deepest minimum");
    return r;
  });
}

CheckResult check_husimi_positivity_and_ring() {
  return guarded(9, "husimi positivity and ring", [] {
    const GridSpec grid;  // [-2,4] x [-3,3], 201 x 201
    double lowest = 1e300;
    for (double dth : kPhases) {
      lowest = std::min(lowest, evaluate_grid(DistributionKind::husimi, ECParams(1.0, 0.0, dth), grid).min());
    }
    const ECParams ring(1.0, 0.0, 0.0);
    const double center = std::abs(husimi_closed(ring, 1.0));
    const DistributionGrid q = evaluate_grid(DistributionKind::husimi, ring, grid);
    double worst = 0.0;
    for (int iy = 0; iy < grid.ny; ++iy) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const double d2 = std::norm(grid.point(ix, iy) - 1.0);
        worst = std::max(worst, std::abs(q.at(ix, iy) - d2 * std::exp(-d2) / kPi));
      }
    }
    CheckResult r;
    r.passed = lowest >= -1e-12 && center <= 1e-12 && worst <= 1e-10;
    r.detail = fmt("grid minimum %.3g, Q(beta) %.3g, max |Q - reduced ring| %.3g", lowest, center, worst);
    return r;
  });
}

CheckResult check_phase_distribution() {
  return guarded(10, "phase distribution", [] {
    const int n_max = default_truncation(4.0);
    const PhaseDistribution d0 = phase_distribution(ec_state(ECParams(4.0, 0.0, 0.0), n_max), 1024);
    const PhaseDistribution d90 = phase_distribution(ec_state(ECParams(4.0, 0.0, kPi / 2.0), n_max), 1024);
    const double err = std::max(std::abs(d0.integral() - 1.0), std::abs(d90.integral() - 1.0));
    const std::size_t p0 = d0.peaks().size();
    const std::size_t p90 = d90.peaks().size();
    CheckResult r;
    r.passed = err <= 1e-6 && p0 == 2 && p90 == 1;
    r.detail = fmt("integral error %.3g, peaks %.0f at dtheta = 0 and %.0f at pi/2", err,
                   static_cast<double>(p0), static_cast<double>(p90));
    return r;
  });
}

CheckResult check_eigen_equation() {
  return guarded(11, "eigen-equation", [] {
    double worst = 0.0;
    for (double mag : kMags) {
      for (double theta : kThetas) {
        for (double dth : kPhases) {
          const ECParams p = ECParams::from_phase_difference(mag, theta, dth);
          const FockVector e = ec_state(p, default_truncation(mag));
          const FockVector ae = apply_annihilation(e);
          const FockVector lhs = 2.0 * ae - (1.0 / p.alpha()) * apply_annihilation(ae);
          worst = std::max(worst, residual_norm(lhs, p.alpha() * e));
        }
      }
    }
    CheckResult r;
    r.passed = worst <= 1e-8;
    r.detail = fmt("max residual norm %.3g", worst);
    return r;
  });
}

CheckResult check_necessary_condition_detector() {
  return guarded(12, "necessary-condition detector", [] {
    double worst_g1 = 0.0;
    bool coherent_met = true;
    for (double mag : kMags) {
      const StateFamily fam = coherent_family(default_truncation(mag));
      for (double theta : kThetas) {
        for (double phase : kPhases) {
          const std::vector<double> params{mag, theta};
          const EmptyBuildReport rep = build_empty_state(fam, params, phase);
          worst_g1 = std::max(worst_g1, std::abs(rep.g1_real));
          coherent_met = coherent_met && rep.condition_met;
        }
      }
    }
    const StateFamily bad = norm_varying_family(default_truncation(1.0));
    const std::vector<double> unit{1.0, 0.0};
    const EmptyBuildReport rejected = build_empty_state(bad, unit, 0.0);

    CheckResult r;
    r.passed = worst_g1 < 1e-6 && coherent_met && !rejected.condition_met && !rejected.state;
    r.detail = fmt("coherent max |Re g1| %.3g; synthetic family Re g1 %.6g", worst_g1,
                   rejected.g1_real) +
               (rejected.condition_met ? " (accepted)" : " (rejected)");
    return r;
  });
}

std::vector<CheckResult> run_all_checks() {
  return {check_mean_photon_bound(),
          check_fluctuation_endpoints(),
          check_interference_zero(),
          check_r_orthogonality(),
          check_vacuum_limit(),
          check_numeric_vs_closed_empty_state(),
          check_squeezing_numbers(),
          check_wigner_cross_validation(),
          check_husimi_positivity_and_ring(),
          check_phase_distribution(),
          check_eigen_equation(),
          check_necessary_condition_detector()};
}

}  // namespace esl
