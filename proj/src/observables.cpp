#include "esl/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "esl/errors.hpp"

namespace esl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_nonvacuum(const ECParams& p, const char* what) {
  if (p.mag() <= kVacuumEps) {
    throw SingularPoint(std::string(what) + ": |alpha| <= vacuum_eps; the state is e^{i dtheta}|1>");
  }
}

}  // namespace

std::vector<double> photon_distribution_closed(const ECParams& p, int n_max) {
  require_nonvacuum(p, "photon_distribution_closed");
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  const double mag = p.mag();
  const double a2 = mag * mag;
  const double c2 = std::pow(std::cos(p.phase_difference()), 2);
  const double k2 = p.K() * p.K();
  const double log_mag = std::log(mag);

  std::vector<double> dist(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double nn = n;
    const double poisson = std::exp(-a2 + 2.0 * nn * log_mag - std::lgamma(nn + 1.0));
    double pn = poisson * (nn * nn / a2 + c2 * (a2 - 2.0 * nn)) * k2;
    if (pn < 0.0) {
      if (pn < -1e-14) throw std::logic_error("negative photon probability " + std::to_string(pn));
      pn = 0.0;
    }
    dist[static_cast<std::size_t>(n)] = pn;
  }
  return dist;
}

PhotonStats photon_stats_closed(const ECParams& p) {
  require_nonvacuum(p, "photon_stats_closed");
  const double a2 = p.mag() * p.mag();
  const double sin_d = std::sin(p.phase_difference());
  const double x = a2 * sin_d * sin_d;
  const double M = (1.0 + 2.0 * x) / (1.0 + x);

  PhotonStats s;
  s.M = M;
  s.mean_n = a2 + M;
  s.mean_n2 = a2 * a2 + 5.0 * a2 + M;
  s.delta_n = std::sqrt(std::max(0.0, a2 * (5.0 - 2.0 * M) + M * (1.0 - M)));
  s.mandel_q = (2.0 * a2 * (2.0 - M) - M * M) / (a2 + M);
  s.emptiness = std::abs(sin_d) <= 1e-14 ? std::numeric_limits<double>::infinity()
                                         : 1.0 / (p.mag() * std::abs(sin_d));
  return s;
}

PhotonStats photon_stats_generic(const FockVector& v) {
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t n = 0; n < v.dim(); ++n) {
    const double pn = std::norm(v[n]);
    const double nn = static_cast<double>(n);
    m1 += nn * pn;
    m2 += nn * nn * pn;
  }
  if (m1 == 0.0) throw UndefinedQuantity("Mandel Q is undefined for <n> = 0");

  PhotonStats s;
  s.mean_n = m1;
  s.mean_n2 = m2;
  const double var = m2 - m1 * m1;
  s.delta_n = std::sqrt(std::max(0.0, var));
  s.mandel_q = (var - m1) / m1;
  return s;
}

double PhaseDistribution::integral() const {
  double s = 0.0;
  for (double d : densities) s += d;
  return s * kTwoPi / static_cast<double>(densities.size());
}

std::vector<std::size_t> PhaseDistribution::peaks(double relative_floor) const {
  std::vector<std::size_t> out;
  const std::size_t n = densities.size();
  if (n < 3) return out;
  const double floor = relative_floor * *std::max_element(densities.begin(), densities.end());
  for (std::size_t k = 0; k < n; ++k) {
    const double here = densities[k];
    const double prev = densities[(k + n - 1) % n];
    const double next = densities[(k + 1) % n];
    if (here > prev && here > next && here >= floor) out.push_back(k);
  }
  return out;
}

PhaseDistribution phase_distribution(const FockVector& v, int resolution) {
  if (resolution < 64) throw InvalidArgument("phase distribution resolution must be >= 64");
  PhaseDistribution dist;
  dist.resolution = resolution;
  dist.angles.resize(static_cast<std::size_t>(resolution));
  dist.densities.resize(static_cast<std::size_t>(resolution));

  for (int k = 0; k < resolution; ++k) {
    const double phi = kTwoPi * k / resolution;
    cplx sum{0.0, 0.0};
    for (std::size_t n = 0; n < v.dim(); ++n) {
      sum += std::polar(1.0, -static_cast<double>(n) * phi) * v[n];
    }
    dist.angles[static_cast<std::size_t>(k)] = phi;
    dist.densities[static_cast<std::size_t>(k)] = std::norm(sum) / kTwoPi;
  }
  return dist;
}

QuadratureVariances quadrature_variances_closed(const ECParams& p) {
  const double a2 = p.mag() * p.mag();
  const double k2 = p.K() * p.K();
  const double s2 = std::pow(std::sin(p.phase_difference()), 2);
  const double sin_src = std::sin(p.source_phase());
  const double cos_src = std::cos(p.source_phase());
  return {0.25 + k2 * (0.5 - a2 * k2 * s2 * sin_src * sin_src),
          0.25 + k2 * (0.5 - a2 * k2 * s2 * cos_src * cos_src)};
}

std::pair<double, double> quadrature_means_closed(const ECParams& p) {
  const cplx alpha = p.alpha();
  const double shift = p.mag() * p.K() * p.K() * std::sin(p.phase_difference());
  return {alpha.real() + shift * std::sin(p.source_phase()),
          alpha.imag() - shift * std::cos(p.source_phase())};
}

SqueezingReport squeezing_report(const ECParams& p) {
  const auto [v1, v2] = quadrature_variances_closed(p);
  return {v1 < 0.25, v2 < 0.25, 0.25 - std::min(v1, v2)};
}

bool x1_squeezing_condition(const ECParams& p) {
  const double lhs =
      p.mag() * p.K() * std::abs(std::sin(p.phase_difference()) * std::sin(p.source_phase()));
  return lhs > std::numbers::sqrt2 / 2.0;
}

}  // namespace esl
