#pragma once

// Numeric empty-state construction for an arbitrary StateFamily:
//
//   |E_r> = lim_{h->0} (|r + h e^{i phi}> - |r>) / (h sqrt(Re g2)),
//
// where 2 - <r|r+dr> - c.c. ~ -2 Re(g1) h + Re(g2) h^2. A nonvanishing limit
// requires Re(g1) = 0; the builder checks this before extrapolating.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "esl/families.hpp"
#include "esl/fock.hpp"

namespace esl {

struct StepSchedule {
  double h0 = 1e-2;
  int levels = 4;  // h0, h0/2, ..., h0/2^(levels-1)

  std::vector<double> steps() const;
};

struct GCoefficients {
  double g1_real;
  double g2_real;
};

struct EmptyBuildReport {
  // Extrapolated, renormalized empty state; empty when the necessary
  // condition fails.
  std::optional<FockVector> state;
  double g1_real = 0.0;
  double g2_real = 0.0;
  double extrapolation_error = 0.0;
  bool condition_met = false;
  std::vector<double> steps_used;
};

// A one-parameter path through the family's parameter space: returns the
// parameters at signed step h (h = 0 is the base point).
using ParamPath = std::function<std::vector<double>(double h)>;

// Path r + h e^{i phase} along the family's source variable.
ParamPath source_path(const StateFamily& fam, std::span<const double> params,
                      double direction_phase);

// Path moving only parameter `var_index`, by h cos(phase); the phase must be a
// multiple of pi because the parameter is real.
ParamPath parameter_path(const StateFamily& fam, std::span<const double> params,
                         std::size_t var_index, double direction_phase);

GCoefficients estimate_g_coefficients(const StateFamily& fam, const ParamPath& path,
                                      const StepSchedule& schedule = {},
                                      const Tolerances& tol = {});

GCoefficients estimate_g_coefficients(const StateFamily& fam, std::span<const double> params,
                                      double direction_phase, const StepSchedule& schedule = {},
                                      const Tolerances& tol = {});

// d_h = (|path(h)> - |path(0)>) / (h sqrt(g2)).
FockVector difference_quotient(const StateFamily& fam, const ParamPath& path, double h,
                               double g2_real);

EmptyBuildReport build_empty_state(const StateFamily& fam, const ParamPath& path,
                                   const Tolerances& tol = {}, const StepSchedule& schedule = {});

EmptyBuildReport build_empty_state(const StateFamily& fam, std::span<const double> params,
                                   double direction_phase, const Tolerances& tol = {},
                                   const StepSchedule& schedule = {});

EmptyBuildReport build_empty_state_multivar(const StateFamily& fam,
                                            std::span<const double> params,
                                            std::size_t var_index, double direction_phase,
                                            const Tolerances& tol = {},
                                            const StepSchedule& schedule = {});

struct OuterLimitSchedule {
  double r0 = 1e-2;  // outer levels r0, r0/2, r0/4
};

// lim_{t->0} lim_{h->0}: builds the empty state at base points base_at(t) for
// the outer levels and extrapolates t -> 0. Throws LimitDivergence when the
// levels do not settle or the inner construction fails.
FockVector empty_state_double_limit(const StateFamily& fam,
                                    const std::function<std::vector<double>(double)>& base_at,
                                    double direction_phase, const Tolerances& tol = {},
                                    const OuterLimitSchedule& outer = {},
                                    const StepSchedule& inner = {});

// Empty-Fock state from the auxiliary |R> family: R -> 0 along the real axis,
// source phase `direction_phase`. Expected result e^{i phase}|m>.
FockVector empty_fock_double_limit(const RStateParams& aux, double direction_phase,
                                   const Tolerances& tol = {});

// Same double limit on the coherent family, alpha -> 0 along the real axis.
// Expected result e^{i phase}|1>.
FockVector ec_vacuum_double_limit(double direction_phase, int n_max,
                                  const Tolerances& tol = {});

}  // namespace esl
