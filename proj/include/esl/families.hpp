#pragma once

// Closed-form constructors for coherent states, the two-level |R> example,
// and their empty states, plus the StateFamily abstraction consumed by the
// numeric builder.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "esl/fock.hpp"

namespace esl {

// Below this |alpha| the EC closed form (which divides by |alpha|) is not
// evaluated; the vacuum limit e^{i dtheta}|1> applies instead.
inline constexpr double kVacuumEps = 1e-8;

// Reduces an angle to (-pi, pi].
double wrap_angle(double x);

// Parameters of an empty coherent (EC) state: alpha = mag e^{i theta},
// source phase Delta-theta. The phase difference dtheta = Delta-theta - theta
// is derived and cannot be set on its own.
class ECParams {
 public:
  ECParams(double mag, double theta, double source_phase);

  static ECParams from_phase_difference(double mag, double theta, double phase_difference);
  static ECParams from_alpha(cplx alpha, double source_phase);

  double mag() const noexcept { return mag_; }
  double theta() const noexcept { return theta_; }
  double source_phase() const noexcept { return source_phase_; }
  double phase_difference() const noexcept { return phase_difference_; }
  cplx alpha() const { return std::polar(mag_, theta_); }

  // K = 1 / sqrt(1 + |alpha|^2 sin^2(dtheta)), in (0, 1].
  double K() const;

 private:
  double mag_;
  double theta_;
  double source_phase_;
  double phase_difference_;
};

// F (|n> + R |m>), F = 1/sqrt(1 + |R|^2).
struct RStateParams {
  int n = 0;
  int m = 1;
  cplx R{0.0, 0.0};

  // Throws InvalidFamily if n == m or either index is negative.
  void validate() const;
};

// Coherent state, c_{n+1} = c_n alpha / sqrt(n+1). Throws TruncationOverflow
// when the neglected Poisson tail exceeds tol.truncation_tail_tol.
FockVector coherent(cplx alpha, int n_max, const Tolerances& tol = {});

FockVector r_state(const RStateParams& p, int n_max);

// (-R|n> + |m>)/sqrt(1+R^2); defined for real R only.
FockVector empty_r_state(const RStateParams& p, int n_max);

// Empty state of the R family for complex R and source phase phi: the
// normalized derivative
//   -F^3 Re(R^* e^{i phi}) (|n> + R|m>) + F e^{i phi} |m>.
// Reduces to empty_r_state for real R and phi = 0.
FockVector empty_r_state_directional(const RStateParams& p, double source_phase, int n_max);

// d|alpha>/d|alpha| (not normalized as a formula, but of unit norm).
FockVector coherent_radial_derivative(cplx alpha, int n_max, const Tolerances& tol = {});

// The EC state
//   c_n = e^{-|a|^2/2} a^n/sqrt(n!) [e^{i dtheta} n/|a| - |a| cos dtheta] K.
// Throws SingularPoint for mag <= kVacuumEps (use ec_vacuum_limit).
FockVector ec_state(const ECParams& p, int n_max, const Tolerances& tol = {});

// |alpha| -> 0 limit of the EC state: e^{i source_phase}|1>.
FockVector ec_vacuum_limit(double source_phase, int n_max);

// Applies the generator A = K [e^{i dtheta}(a/|a|) a^dag - cos(dtheta)(|a|/a) a],
// which maps |alpha> onto the EC state.
FockVector generator_operator_apply(const ECParams& p, const FockVector& v,
                                    const Tolerances& tol = {});

// <alpha|E_beta> in closed form.
cplx coherent_ec_overlap(cplx alpha, const ECParams& beta);

struct ParamRange {
  double lo;
  double hi;
};

// A parametrized family of normalized states. Parameters are real; the
// family's "source variable" r (a complex number built from them) is moved by
// `shift`, which is what the single-variable empty-state construction perturbs.
struct StateFamily {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<ParamRange> domain;
  std::size_t var_index = 0;

  std::function<FockVector(std::span<const double>)> eval;
  std::function<std::vector<double>(std::span<const double>, cplx)> shift;

  std::size_t param_count() const noexcept { return param_names.size(); }
  bool in_domain(std::span<const double> params) const;
};

// Parameters (mag, theta); source variable alpha = mag e^{i theta}.
StateFamily coherent_family(int n_max);

// Parameters (Re R, Im R) for fixed n, m; source variable R.
StateFamily r_state_family(int n, int m, int n_max);

// Diagnostic family |z| |z> with parameters (Re z, Im z). Normalized only on
// the unit circle, so radial perturbations violate the necessary condition
// (Re g1 = 1 at the unit circle). Not part of builtin_families.
StateFamily norm_varying_family(int n_max);

// Coherent family and the R family with (n, m) = (0, 1).
std::vector<StateFamily> builtin_families(int n_max);

}  // namespace esl
