#include "esl/builder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "esl/errors.hpp"

namespace esl {

namespace {

// Least squares fit of y_k = A t_k^p + B t_k^q; returns A.
double fit_leading(std::span<const double> t, std::span<const double> y, int p, int q) {
  double spp = 0.0, spq = 0.0, sqq = 0.0, spy = 0.0, sqy = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double bp = std::pow(t[k], p);
    const double bq = std::pow(t[k], q);
    spp += bp * bp;
    spq += bp * bq;
    sqq += bq * bq;
    spy += bp * y[k];
    sqy += bq * y[k];
  }
  const double det = spp * sqq - spq * spq;
  return (spy * sqq - sqy * spq) / det;
}

FockVector eval_checked(const StateFamily& fam, const std::vector<double>& params) {
  if (!fam.in_domain(params)) {
    throw FamilyEvaluationError("family '" + fam.name + "' evaluated outside its domain");
  }
  return fam.eval(params);
}

void validate_schedule(const StepSchedule& s) {
  if (!(s.h0 > 0.0) || !std::isfinite(s.h0) || s.levels < 2) {
    throw InvalidArgument("step schedule needs h0 > 0 and at least 2 levels");
  }
}

}  // namespace

std::vector<double> StepSchedule::steps() const {
  validate_schedule(*this);
  std::vector<double> h(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) h[static_cast<std::size_t>(k)] = std::ldexp(h0, -k);
  return h;
}

ParamPath source_path(const StateFamily& fam, std::span<const double> params,
                      double direction_phase) {
  if (params.size() != fam.param_count()) {
    throw InvalidArgument("family '" + fam.name + "' expects " +
                          std::to_string(fam.param_count()) + " parameters");
  }
  const cplx dir = std::polar(1.0, wrap_angle(direction_phase));
  std::vector<double> base(params.begin(), params.end());
  auto shift = fam.shift;
  return [base, dir, shift](double h) {
    if (h == 0.0) return base;
    return shift(base, h * dir);
  };
}

ParamPath parameter_path(const StateFamily& fam, std::span<const double> params,
                         std::size_t var_index, double direction_phase) {
  if (params.size() != fam.param_count()) {
    throw InvalidArgument("family '" + fam.name + "' expects " +
                          std::to_string(fam.param_count()) + " parameters");
  }
  if (var_index >= fam.param_count()) {
    throw InvalidArgument("var_index " + std::to_string(var_index) + " out of range for family '" +
                          fam.name + "'");
  }
  const double phase = wrap_angle(direction_phase);
  if (std::abs(std::sin(phase)) > 1e-12) {
    throw InvalidArgument("a real parameter can only be perturbed with phase 0 or pi");
  }
  const double sign = std::cos(phase) > 0.0 ? 1.0 : -1.0;
  std::vector<double> base(params.begin(), params.end());
  return [base, var_index, sign](double h) {
    std::vector<double> p = base;
    p[var_index] += sign * h;
    return p;
  };
}

GCoefficients estimate_g_coefficients(const StateFamily& fam, const ParamPath& path,
                                      const StepSchedule& schedule, const Tolerances& tol) {
  const auto steps = schedule.steps();
  const FockVector base = eval_checked(fam, path(0.0));
  if (!base.is_normalized(tol.norm_tol)) {
    throw FamilyEvaluationError("family '" + fam.name + "' returned a non-normalized state (|v|^2 = " +
                                std::to_string(base.norm_squared()) + ")");
  }

  auto gap = [&](double h) {
    const double s = 2.0 - 2.0 * inner_product(base, eval_checked(fam, path(h))).real();
    if (!std::isfinite(s)) {
      throw FamilyEvaluationError("non-finite inner product in family '" + fam.name + "'");
    }
    return s;
  };

  // s(h) = -2 Re(g1) h + Re(g2) h^2 + c3 h^3 + c4 h^4 + ...; the odd and even
  // parts are fitted separately from +h and -h steps so the cubic and quartic
  // terms do not leak into g1 and g2.
  std::vector<double> t(steps.size()), odd(steps.size()), even(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double sp = gap(steps[k]);
    const double sm = gap(-steps[k]);
    t[k] = steps[k] / schedule.h0;
    odd[k] = 0.5 * (sp - sm);
    even[k] = 0.5 * (sp + sm);
  }
  const double h0 = schedule.h0;
  return {-fit_leading(t, odd, 1, 3) / (2.0 * h0), fit_leading(t, even, 2, 4) / (h0 * h0)};
}

GCoefficients estimate_g_coefficients(const StateFamily& fam, std::span<const double> params,
                                      double direction_phase, const StepSchedule& schedule,
                                      const Tolerances& tol) {
  return estimate_g_coefficients(fam, source_path(fam, params, direction_phase), schedule, tol);
}

FockVector difference_quotient(const StateFamily& fam, const ParamPath& path, double h,
                               double g2_real) {
  if (!(g2_real > 0.0)) throw InvalidArgument("difference_quotient needs Re(g2) > 0");
  FockVector d = eval_checked(fam, path(h)) - eval_checked(fam, path(0.0));
  d *= 1.0 / (h * std::sqrt(g2_real));
  return d;
}

EmptyBuildReport build_empty_state(const StateFamily& fam, const ParamPath& path,
                                   const Tolerances& tol, const StepSchedule& schedule) {
  tol.validate();
  EmptyBuildReport report;
  report.steps_used = schedule.steps();

  const GCoefficients g = estimate_g_coefficients(fam, path, schedule, tol);
  report.g1_real = g.g1_real;
  report.g2_real = g.g2_real;
  report.condition_met = std::abs(g.g1_real) <= tol.limit_tol;
  if (!report.condition_met) return report;

  if (!(g.g2_real > 0.0)) {
    throw LimitDivergence("family '" + fam.name +
                          "' does not move along the source direction (Re g2 <= 0)");
  }

  // First-order Richardson on the two finest levels: 2 d_{h/2} - d_h.
  const std::size_t last = report.steps_used.size() - 1;
  const FockVector coarse = difference_quotient(fam, path, report.steps_used[last - 1], g.g2_real);
  const FockVector fine = difference_quotient(fam, path, report.steps_used[last], g.g2_real);
  report.extrapolation_error = max_abs_diff(coarse, fine);
  report.state = normalize(2.0 * fine - coarse);
  return report;
}

EmptyBuildReport build_empty_state(const StateFamily& fam, std::span<const double> params,
                                   double direction_phase, const Tolerances& tol,
                                   const StepSchedule& schedule) {
  return build_empty_state(fam, source_path(fam, params, direction_phase), tol, schedule);
}

EmptyBuildReport build_empty_state_multivar(const StateFamily& fam,
                                            std::span<const double> params,
                                            std::size_t var_index, double direction_phase,
                                            const Tolerances& tol,
                                            const StepSchedule& schedule) {
  return build_empty_state(fam, parameter_path(fam, params, var_index, direction_phase), tol,
                           schedule);
}

FockVector empty_state_double_limit(const StateFamily& fam,
                                    const std::function<std::vector<double>(double)>& base_at,
                                    double direction_phase, const Tolerances& tol,
                                    const OuterLimitSchedule& outer, const StepSchedule& inner) {
  if (!(outer.r0 > 0.0)) throw InvalidArgument("outer limit needs r0 > 0");

  std::array<std::optional<FockVector>, 3> levels;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double t = std::ldexp(outer.r0, -static_cast<int>(k));
    const auto params = base_at(t);
    const EmptyBuildReport r = build_empty_state(fam, params, direction_phase, tol, inner);
    if (!r.condition_met) {
      throw LimitDivergence("inner limit failed at outer level t = " + std::to_string(t) +
                            " (Re g1 = " + std::to_string(r.g1_real) + ")");
    }
    levels[k] = *r.state;
  }
  const FockVector& e1 = *levels[0];
  const FockVector& e2 = *levels[1];
  const FockVector& e3 = *levels[2];

  // A convergent sequence at least halves its increments per level.
  const double d12 = max_abs_diff(e1, e2);
  const double d23 = max_abs_diff(e2, e3);
  if (d23 > tol.limit_tol && d23 > 0.75 * d12) {
    throw LimitDivergence("outer limit does not settle: level increments " + std::to_string(d12) +
                          " then " + std::to_string(d23));
  }

  // Second-order Richardson over t, r0/2, r0/4.
  FockVector limit = 8.0 * e3 - 6.0 * e2 + e1;
  limit *= 1.0 / 3.0;
  return normalize(limit);
}

FockVector empty_fock_double_limit(const RStateParams& aux, double direction_phase,
                                   const Tolerances& tol) {
  aux.validate();
  const int n_max = std::max(aux.n, aux.m) + 1;
  const StateFamily fam = r_state_family(aux.n, aux.m, n_max);
  return empty_state_double_limit(
      fam, [](double t) { return std::vector<double>{t, 0.0}; }, direction_phase, tol);
}

FockVector ec_vacuum_double_limit(double direction_phase, int n_max, const Tolerances& tol) {
  const StateFamily fam = coherent_family(n_max);
  return empty_state_double_limit(
      fam, [](double t) { return std::vector<double>{t, 0.0}; }, direction_phase, tol);
}

}  // namespace esl
