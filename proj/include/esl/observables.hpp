#pragma once

// Photon statistics, Pegg-Barnett phase distribution and quadrature squeezing.
// EC-specific closed forms sit next to generic versions that work on any
// FockVector, so each can check the other.

#include <optional>
#include <vector>

#include "esl/families.hpp"
#include "esl/fock.hpp"

namespace esl {

struct PhotonStats {
  double mean_n = 0.0;
  double mean_n2 = 0.0;
  double delta_n = 0.0;
  double mandel_q = 0.0;
  // Share of the two-photon-like term: M = (1 + 2x)/(1 + x), x = |a|^2 sin^2 dtheta.
  // Only meaningful for EC closed-form stats.
  double M = 0.0;
  // 1/(|alpha| |sin dtheta|), +inf at sin dtheta = 0. Unset for generic stats.
  std::optional<double> emptiness;
};

// P_n for n = 0..n_max. Values within 1e-14 below zero are clamped to 0.
std::vector<double> photon_distribution_closed(const ECParams& p, int n_max);

PhotonStats photon_stats_closed(const ECParams& p);

// Throws UndefinedQuantity when <n> = 0 (Mandel Q undefined).
PhotonStats photon_stats_generic(const FockVector& v);

struct PhaseDistribution {
  std::vector<double> angles;     // uniform on [0, 2 pi)
  std::vector<double> densities;  // P(phi) >= 0
  int resolution = 0;

  // Periodic trapezoidal integral over [0, 2 pi).
  double integral() const;

  // Strict local maxima on the periodic grid whose density is at least
  // `relative_floor` times the global maximum. The floor drops side lobes that
  // sit many orders of magnitude below the main peaks.
  std::vector<std::size_t> peaks(double relative_floor = 1e-6) const;
};

inline constexpr int kDefaultPhaseResolution = 1024;

// P(phi_k) = (1/2pi) |sum_n e^{-i n phi_k} c_n|^2. Requires resolution >= 64.
PhaseDistribution phase_distribution(const FockVector& v,
                                     int resolution = kDefaultPhaseResolution);

struct QuadratureVariances {
  double var_x1;
  double var_x2;
};

QuadratureVariances quadrature_variances_closed(const ECParams& p);

// <X1>, <X2> of the EC state in closed form.
std::pair<double, double> quadrature_means_closed(const ECParams& p);

struct SqueezingReport {
  bool squeezed_x1;
  bool squeezed_x2;
  double margin;  // 1/4 - min(var_x1, var_x2); positive when squeezed
};

SqueezingReport squeezing_report(const ECParams& p);

// Analytic X1 squeezing test, equivalent to var_x1 < 1/4:
//   |alpha| K |sin(dtheta) sin(source_phase)| > 1/sqrt(2).
bool x1_squeezing_condition(const ECParams& p);

}  // namespace esl
