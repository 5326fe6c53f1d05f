#include "esl/families.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "esl/errors.hpp"

namespace esl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_truncation(int n_max) {
  if (n_max < 0) throw InvalidArgument("truncation N must be >= 0");
}

// Coherent amplitudes by the forward recurrence; no truncation check.
std::vector<cplx> coherent_amplitudes(cplx alpha, int n_max) {
  std::vector<cplx> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 0; n + 1 < c.size(); ++n) {
    c[n + 1] = c[n] * alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return c;
}

// Analytically normalized states lose 1 - |v|^2 of weight beyond N.
void require_captured(const std::vector<cplx>& amps, double mag, const Tolerances& tol,
                      const char* what) {
  double s = 0.0;
  for (const cplx& c : amps) s += std::norm(c);
  const double lost = 1.0 - s;
  if (lost > tol.truncation_tail_tol) {
    throw TruncationOverflow(std::string(what) + ": weight " + std::to_string(lost) +
                                 " lost beyond N = " + std::to_string(amps.size() - 1),
                             default_truncation(mag));
  }
}

}  // namespace

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

ECParams::ECParams(double mag, double theta, double source_phase)
    : mag_(mag),
      theta_(wrap_angle(theta)),
      source_phase_(wrap_angle(source_phase)),
      phase_difference_(wrap_angle(source_phase - theta)) {
  if (!(mag >= 0.0) || !std::isfinite(mag)) throw InvalidArgument("|alpha| must be finite and >= 0");
  if (!std::isfinite(theta) || !std::isfinite(source_phase)) {
    throw InvalidArgument("EC angles must be finite");
  }
}

ECParams ECParams::from_phase_difference(double mag, double theta, double phase_difference) {
  return ECParams(mag, theta, theta + phase_difference);
}

ECParams ECParams::from_alpha(cplx alpha, double source_phase) {
  return ECParams(std::abs(alpha), std::arg(alpha), source_phase);
}

double ECParams::K() const {
  const double s = mag_ * std::sin(phase_difference_);
  return 1.0 / std::sqrt(1.0 + s * s);
}

void RStateParams::validate() const {
  if (n < 0 || m < 0) throw InvalidFamily("R state: Fock indices must be >= 0");
  if (n == m) throw InvalidFamily("R state: n and m must differ");
  if (!std::isfinite(R.real()) || !std::isfinite(R.imag())) {
    throw InvalidFamily("R state: R must be finite");
  }
}

FockVector coherent(cplx alpha, int n_max, const Tolerances& tol) {
  require_truncation(n_max);
  auto c = coherent_amplitudes(alpha, n_max);
  require_captured(c, std::abs(alpha), tol, "coherent");
  return FockVector(std::move(c));
}

FockVector r_state(const RStateParams& p, int n_max) {
  p.validate();
  if (p.n > n_max || p.m > n_max) throw InvalidArgument("R state: n, m must be <= N");
  const double f = 1.0 / std::sqrt(1.0 + std::norm(p.R));
  FockVector v(static_cast<std::size_t>(n_max) + 1);
  v[static_cast<std::size_t>(p.n)] = f;
  v[static_cast<std::size_t>(p.m)] = f * p.R;
  return v;
}

FockVector empty_r_state(const RStateParams& p, int n_max) {
  p.validate();
  if (p.R.imag() != 0.0) {
    throw InvalidArgument("empty_r_state: closed form exists for real R only");
  }
  if (p.n > n_max || p.m > n_max) throw InvalidArgument("R state: n, m must be <= N");
  const double r = p.R.real();
  const double f = 1.0 / std::sqrt(1.0 + r * r);
  FockVector v(static_cast<std::size_t>(n_max) + 1);
  v[static_cast<std::size_t>(p.n)] = -r * f;
  v[static_cast<std::size_t>(p.m)] = f;
  return v;
}

FockVector empty_r_state_directional(const RStateParams& p, double source_phase, int n_max) {
  p.validate();
  if (p.n > n_max || p.m > n_max) throw InvalidArgument("R state: n, m must be <= N");
  const cplx dir = std::polar(1.0, source_phase);
  const double f = 1.0 / std::sqrt(1.0 + std::norm(p.R));
  const double radial = -f * f * f * (std::conj(p.R) * dir).real();
  FockVector v(static_cast<std::size_t>(n_max) + 1);
  v[static_cast<std::size_t>(p.n)] = radial;
  v[static_cast<std::size_t>(p.m)] = radial * p.R + f * dir;
  return normalize(v);
}

FockVector coherent_radial_derivative(cplx alpha, int n_max, const Tolerances& tol) {
  require_truncation(n_max);
  const double mag = std::abs(alpha);
  if (mag == 0.0) {
    throw SingularPoint("d|alpha>/d|alpha| is singular at alpha = 0; use the EC vacuum limit");
  }
  auto c = coherent_amplitudes(alpha, n_max);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= static_cast<double>(n) / mag - mag;
  require_captured(c, mag, tol, "coherent_radial_derivative");
  return FockVector(std::move(c));
}

FockVector ec_state(const ECParams& p, int n_max, const Tolerances& tol) {
  require_truncation(n_max);
  const double mag = p.mag();
  if (mag <= kVacuumEps) {
    throw SingularPoint("ec_state: |alpha| <= vacuum_eps; use ec_vacuum_limit");
  }
  const double dth = p.phase_difference();
  const cplx rot = std::polar(1.0, dth);
  const double shift = mag * std::cos(dth);
  const double k = p.K();

  auto c = coherent_amplitudes(p.alpha(), n_max);
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n] *= (rot * (static_cast<double>(n) / mag) - shift) * k;
  }
  require_captured(c, mag, tol, "ec_state");
  return FockVector(std::move(c));
}

FockVector ec_vacuum_limit(double source_phase, int n_max) {
  if (n_max < 1) throw InvalidArgument("ec_vacuum_limit needs N >= 1");
  FockVector v = fock_state(1, n_max);
  v[1] = std::polar(1.0, source_phase);
  return v;
}

FockVector generator_operator_apply(const ECParams& p, const FockVector& v,
                                    const Tolerances& tol) {
  if (p.mag() == 0.0) throw SingularPoint("generator operator is singular at alpha = 0");
  const cplx alpha = p.alpha();
  const double mag = p.mag();
  const double dth = p.phase_difference();

  const cplx up = std::polar(1.0, dth) * alpha / mag;
  const cplx down = std::cos(dth) * mag / alpha;

  FockVector out = up * apply_creation(v, tol.truncation_tail_tol);
  out -= down * apply_annihilation(v);
  out *= p.K();
  return out;
}

cplx coherent_ec_overlap(cplx alpha, const ECParams& beta) {
  const double mag = beta.mag();
  if (mag <= kVacuumEps) throw SingularPoint("coherent_ec_overlap: |beta| <= vacuum_eps");
  const cplx b = beta.alpha();
  const double dth = beta.phase_difference();
  const cplx i{0.0, 1.0};

  const cplx envelope = std::exp(-0.5 * std::norm(alpha) - 0.5 * mag * mag + b * std::conj(alpha));
  const cplx bracket =
      std::polar(1.0, dth) * (b * std::conj(alpha) / mag - mag) + i * mag * std::sin(dth);
  return envelope * beta.K() * bracket;
}

bool StateFamily::in_domain(std::span<const double> params) const {
  if (params.size() != param_count()) return false;
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!(params[k] >= domain[k].lo && params[k] <= domain[k].hi)) return false;
  }
  return true;
}

StateFamily coherent_family(int n_max) {
  require_truncation(n_max);
  StateFamily fam;
  fam.name = "coherent";
  fam.param_names = {"mag", "theta"};
  fam.domain = {{0.0, kInf}, {-kInf, kInf}};
  fam.var_index = 0;
  fam.eval = [n_max](std::span<const double> p) {
    return coherent(std::polar(p[0], p[1]), n_max);
  };
  fam.shift = [](std::span<const double> p, cplx delta) {
    const cplx moved = std::polar(p[0], p[1]) + delta;
    return std::vector<double>{std::abs(moved), std::arg(moved)};
  };
  return fam;
}

StateFamily r_state_family(int n, int m, int n_max) {
  RStateParams{n, m, 0.0}.validate();
  if (n > n_max || m > n_max) throw InvalidArgument("R family: n, m must be <= N");
  StateFamily fam;
  fam.name = "r-state";
  fam.param_names = {"re_R", "im_R"};
  fam.domain = {{-kInf, kInf}, {-kInf, kInf}};
  fam.var_index = 0;
  fam.eval = [n, m, n_max](std::span<const double> p) {
    return r_state(RStateParams{n, m, cplx{p[0], p[1]}}, n_max);
  };
  fam.shift = [](std::span<const double> p, cplx delta) {
    return std::vector<double>{p[0] + delta.real(), p[1] + delta.imag()};
  };
  return fam;
}

StateFamily norm_varying_family(int n_max) {
  require_truncation(n_max);
  StateFamily fam;
  fam.name = "norm-varying";
  fam.param_names = {"re_z", "im_z"};
  fam.domain = {{-kInf, kInf}, {-kInf, kInf}};
  fam.var_index = 0;
  fam.eval = [n_max](std::span<const double> p) {
    const cplx z{p[0], p[1]};
    return std::abs(z) * coherent(z, n_max);
  };
  fam.shift = [](std::span<const double> p, cplx delta) {
    return std::vector<double>{p[0] + delta.real(), p[1] + delta.imag()};
  };
  return fam;
}

std::vector<StateFamily> builtin_families(int n_max) {
  return {coherent_family(n_max), r_state_family(0, 1, std::max(n_max, 1))};
}

}  // namespace esl
