#pragma once

// Phase-space quasi-probability distributions: Husimi Q, the antinormally
// ordered characteristic function, and the Wigner function. Closed forms are
// specific to the EC state; the generic routines take any FockVector.

#include <cstddef>
#include <variant>
#include <vector>

#include "esl/families.hpp"
#include "esl/fock.hpp"

namespace esl {

// Rectangular grid over the complex plane. Nodes include both endpoints of
// each axis (a single node sits at the lower bound).
struct GridSpec {
  double re_min = -2.0;
  double re_max = 4.0;
  double im_min = -3.0;
  double im_max = 3.0;
  int nx = 201;
  int ny = 201;

  static constexpr std::size_t kMaxNodes = 10'000'000;

  // Throws InvalidArgument for inverted bounds or empty axes, GridTooLarge
  // when nx*ny exceeds kMaxNodes.
  void validate() const;

  double re_at(int ix) const;
  double im_at(int iy) const;
  cplx point(int ix, int iy) const { return {re_at(ix), im_at(iy)}; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

enum class DistributionKind { husimi, wigner };

const char* to_string(DistributionKind kind);

struct DistributionGrid {
  GridSpec spec;
  DistributionKind kind = DistributionKind::husimi;
  // Row-major with the imaginary axis outer: values[iy * nx + ix].
  std::vector<double> values;

  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(spec.nx) +
                  static_cast<std::size_t>(ix)];
  }
  double min() const;
  double max() const;
  // 2-D trapezoidal integral over the grid rectangle.
  double integral() const;
};

double husimi_closed(const ECParams& beta, cplx alpha);

// |<point|v>|^2 / pi. Throws TruncationOverflow when v's tail amplitude is
// not negligible.
double husimi_generic(const FockVector& v, cplx point, const Tolerances& tol = {});

// C_A(lambda) = int d^2 alpha Q(alpha) e^{lambda alpha^* - lambda^* alpha}.
cplx characteristic_antinormal(const ECParams& beta, cplx lambda);

// C_W(lambda) = C_A(lambda) e^{|lambda|^2 / 2}.
cplx characteristic_wigner(const ECParams& beta, cplx lambda);

double wigner_closed(const ECParams& beta, cplx alpha);

// <m|D(gamma)|n> for m, n = 0..rows-1 / 0..cols-1, from the associated
// Laguerre closed form (three-term recurrence in the polynomial degree).
// Column-major: element (m, n) at n * rows + m.
std::vector<cplx> displacement_matrix(cplx gamma, std::size_t rows, std::size_t cols);

// Basis padding used by wigner_numeric: N' = N + ceil(4(|p|^2 + |p|)).
int displaced_truncation(int n_max, cplx point);

// W(alpha) = (2/pi) sum_k (-1)^k |<k|D(-alpha) v>|^2.
double wigner_numeric(const FockVector& v, cplx point, const Tolerances& tol = {});

using DistributionSource = std::variant<ECParams, FockVector>;

// Closed form for ECParams sources, generic numeric routine for FockVector
// sources. Nodes are evaluated in parallel when OpenMP is available.
DistributionGrid evaluate_grid(DistributionKind kind, const DistributionSource& source,
                               const GridSpec& spec, const Tolerances& tol = {});

}  // namespace esl
