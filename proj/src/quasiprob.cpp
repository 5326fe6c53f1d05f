#include "esl/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>

#include "esl/errors.hpp"

namespace esl {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonvacuum(const ECParams& beta, const char* what) {
  if (beta.mag() <= kVacuumEps) {
    throw SingularPoint(std::string(what) + ": |beta| <= vacuum_eps");
  }
}

void require_small_tail(const FockVector& v, const Tolerances& tol, const char* what) {
  const double tail = std::abs(v[v.dim() - 1]);
  if (tail > tol.truncation_tail_tol) {
    throw TruncationOverflow(std::string(what) + ": tail amplitude |c_N| = " +
                                 std::to_string(tail) + " is not negligible",
                             v.truncation() + default_truncation(0.0));
  }
}

}  // namespace

void GridSpec::validate() const {
  const bool finite = std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) &&
                      std::isfinite(im_max);
  if (!finite || !(re_min < re_max) || !(im_min < im_max)) {
    throw InvalidArgument("grid bounds must be finite with re_min < re_max and im_min < im_max");
  }
  if (nx < 1 || ny < 1) throw InvalidArgument("grid needs nx, ny >= 1");
  if (size() > kMaxNodes) {
    throw GridTooLarge("grid has " + std::to_string(size()) + " nodes; limit is " +
                       std::to_string(kMaxNodes));
  }
}

double GridSpec::re_at(int ix) const {
  return nx == 1 ? re_min : re_min + ix * (re_max - re_min) / (nx - 1);
}

double GridSpec::im_at(int iy) const {
  return ny == 1 ? im_min : im_min + iy * (im_max - im_min) / (ny - 1);
}

const char* to_string(DistributionKind kind) {
  return kind == DistributionKind::husimi ? "husimi" : "wigner";
}

double DistributionGrid::min() const { return *std::min_element(values.begin(), values.end()); }
double DistributionGrid::max() const { return *std::max_element(values.begin(), values.end()); }

double DistributionGrid::integral() const {
  if (spec.nx < 2 || spec.ny < 2) throw InvalidArgument("integral needs nx, ny >= 2");
  const double dx = (spec.re_max - spec.re_min) / (spec.nx - 1);
  const double dy = (spec.im_max - spec.im_min) / (spec.ny - 1);
  double s = 0.0;
  for (int iy = 0; iy < spec.ny; ++iy) {
    const double wy = (iy == 0 || iy == spec.ny - 1) ? 0.5 : 1.0;
    for (int ix = 0; ix < spec.nx; ++ix) {
      const double wx = (ix == 0 || ix == spec.nx - 1) ? 0.5 : 1.0;
      s += wx * wy * at(ix, iy);
    }
  }
  return s * dx * dy;
}

double husimi_closed(const ECParams& beta, cplx alpha) {
  require_nonvacuum(beta, "husimi_closed");
  const cplx b = beta.alpha();
  const double dth = beta.phase_difference();
  const double d2 = std::norm(alpha - b);
  const double c = std::cos(dth);
  const double s = std::sin(dth);
  // (alpha^* beta - beta^* alpha) / 2i
  const double cross = (std::conj(alpha) * b).imag();
  const double bracket = d2 * c * c + std::norm(alpha) * s * s + cross * std::sin(2.0 * dth);
  const double k2 = beta.K() * beta.K();
  const double q = k2 / kPi * std::exp(-d2) * bracket;
  if (q < -1e-12) throw std::logic_error("husimi_closed: negative value " + std::to_string(q));
  return std::max(0.0, q);
}

double husimi_generic(const FockVector& v, cplx point, const Tolerances& tol) {
  require_small_tail(v, tol, "husimi_generic");
  cplx overlap{0.0, 0.0};
  cplx c = std::exp(-0.5 * std::norm(point));
  for (std::size_t n = 0; n < v.dim(); ++n) {
    if (n > 0) c *= point / std::sqrt(static_cast<double>(n));
    overlap += std::conj(c) * v[n];
  }
  return std::norm(overlap) / kPi;
}

cplx characteristic_antinormal(const ECParams& beta, cplx lambda) {
  require_nonvacuum(beta, "characteristic_antinormal");
  const cplx b = beta.alpha();
  const cplx bs = std::conj(b);
  const cplx ls = std::conj(lambda);
  const double b2 = std::norm(b);
  const double l2 = std::norm(lambda);
  const double dth = beta.phase_difference();
  const cplx i{0.0, 1.0};

  const cplx drift = bs * lambda - b * ls;
  const cplx bracket = 2.0 + b2 + drift - 2.0 * l2 - (drift + b2) * std::cos(2.0 * dth) +
                       i * (bs * lambda + b * ls) * std::sin(2.0 * dth);
  const double k2 = beta.K() * beta.K();
  return 0.5 * k2 * std::exp(drift - l2) * bracket;
}

cplx characteristic_wigner(const ECParams& beta, cplx lambda) {
  return characteristic_antinormal(beta, lambda) * std::exp(0.5 * std::norm(lambda));
}

double wigner_closed(const ECParams& beta, cplx alpha) {
  require_nonvacuum(beta, "wigner_closed");
  const cplx b = beta.alpha();
  const cplx as = std::conj(alpha);
  const cplx bs = std::conj(b);
  const double dth = beta.phase_difference();
  const double c2 = std::cos(2.0 * dth);
  const cplx i{0.0, 1.0};

  const cplx bracket = 2.0 - 8.0 * std::norm(alpha) - std::norm(b) * (5.0 + 3.0 * c2) +
                       (as * b + alpha * bs) * (6.0 + 2.0 * c2) +
                       2.0 * i * (as * b - alpha * bs) * std::sin(2.0 * dth);
  if (std::abs(bracket.imag()) > 1e-12 * std::max(1.0, std::abs(bracket.real()))) {
    throw std::logic_error("wigner_closed: bracket has imaginary residue " +
                           std::to_string(bracket.imag()));
  }
  const double k2 = beta.K() * beta.K();
  return -k2 / kPi * std::exp(-2.0 * std::norm(alpha - b)) * bracket.real();
}

std::vector<cplx> displacement_matrix(cplx gamma, std::size_t rows, std::size_t cols) {
  std::vector<cplx> d(rows * cols, cplx{0.0, 0.0});
  auto at = [&](std::size_t m, std::size_t n) -> cplx& { return d[n * rows + m]; };

  const double mag = std::abs(gamma);
  if (mag == 0.0) {
    for (std::size_t k = 0; k < std::min(rows, cols); ++k) at(k, k) = 1.0;
    return d;
  }
  const double x = mag * mag;
  const double log_mag = std::log(mag);
  const cplx down = gamma / mag;           // phase of <j+k|D|j>
  const cplx up = -std::conj(gamma) / mag;  // phase of <j|D|j+k>

  const std::size_t size = std::max(rows, cols);
  std::vector<double> log_fact(size + 1);
  for (std::size_t j = 0; j <= size; ++j) log_fact[j] = std::lgamma(static_cast<double>(j) + 1.0);

  std::vector<double> lag;
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t below = rows > k ? std::min(cols, rows - k) : 0;  // (j+k, j)
    const std::size_t above = cols > k ? std::min(rows, cols - k) : 0;  // (j, j+k)
    const std::size_t count = std::max(below, above);
    if (count == 0) continue;

    // L_j^{(k)}(x), j = 0..count-1
    const double kk = static_cast<double>(k);
    lag.assign(count, 0.0);
    lag[0] = 1.0;
    if (count > 1) lag[1] = 1.0 + kk - x;
    for (std::size_t j = 1; j + 1 < count; ++j) {
      const double jj = static_cast<double>(j);
      lag[j + 1] = ((2.0 * jj + 1.0 + kk - x) * lag[j] - (jj + kk) * lag[j - 1]) / (jj + 1.0);
    }

    const cplx phase_down = std::pow(down, static_cast<int>(k));
    const cplx phase_up = std::pow(up, static_cast<int>(k));
    for (std::size_t j = 0; j < count; ++j) {
      const double scale =
          std::exp(0.5 * (log_fact[j] - log_fact[j + k]) + kk * log_mag - 0.5 * x) * lag[j];
      if (j < below) at(j + k, j) = scale * phase_down;
      if (k > 0 && j < above) at(j, j + k) = scale * phase_up;
    }
  }
  return d;
}

int displaced_truncation(int n_max, cplx point) {
  const double r = std::abs(point);
  return n_max + static_cast<int>(std::ceil(4.0 * (r * r + r)));
}

double wigner_numeric(const FockVector& v, cplx point, const Tolerances& tol) {
  require_small_tail(v, tol, "wigner_numeric");
  const std::size_t cols = v.dim();
  const std::size_t rows = static_cast<std::size_t>(displaced_truncation(v.truncation(), point)) + 1;
  const std::vector<cplx> d = displacement_matrix(-point, rows, cols);

  double parity_sum = 0.0;
  for (std::size_t m = 0; m < rows; ++m) {
    cplx w{0.0, 0.0};
    for (std::size_t n = 0; n < cols; ++n) w += d[n * rows + m] * v[n];
    parity_sum += (m % 2 == 0 ? 1.0 : -1.0) * std::norm(w);
  }
  return 2.0 / kPi * parity_sum;
}

DistributionGrid evaluate_grid(DistributionKind kind, const DistributionSource& source,
                               const GridSpec& spec, const Tolerances& tol) {
  spec.validate();
  DistributionGrid grid;
  grid.spec = spec;
  grid.kind = kind;
  grid.values.assign(spec.size(), 0.0);

  auto node = [&](cplx p) -> double {
    if (const auto* ec = std::get_if<ECParams>(&source)) {
      return kind == DistributionKind::husimi ? husimi_closed(*ec, p) : wigner_closed(*ec, p);
    }
    const auto& v = std::get<FockVector>(source);
    return kind == DistributionKind::husimi ? husimi_generic(v, p, tol) : wigner_numeric(v, p, tol);
  };

  // Surface precondition failures before fanning out.
  node(spec.point(0, 0));

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int iy = 0; iy < spec.ny; ++iy) {
    try {
      for (int ix = 0; ix < spec.nx; ++ix) {
        grid.values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(spec.nx) +
                    static_cast<std::size_t>(ix)] = node(spec.point(ix, iy));
      }
    } catch (...) {
#pragma omp critical(esl_grid_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

}  // namespace esl
