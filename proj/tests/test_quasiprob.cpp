#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "esl/errors.hpp"
#include "esl/families.hpp"
#include "esl/quasiprob.hpp"

using namespace esl;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOneOverEPi = 0.117099663048638321380484536933;
constexpr double kTwoOverPi = 0.63661977236758134307553505349;

GridSpec centered_grid(cplx center, double half_width, int nodes) {
  GridSpec g;
  g.re_min = center.real() - half_width;
  g.re_max = center.real() + half_width;
  g.im_min = center.imag() - half_width;
  g.im_max = center.imag() + half_width;
  g.nx = nodes;
  g.ny = nodes;
  return g;
}

}  // namespace

TEST(quasiprob, grid_spec_nodes_and_guards) {
  const GridSpec g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_DOUBLE_EQ(g.re_at(0), -2.0);
  EXPECT_DOUBLE_EQ(g.re_at(200), 4.0);
  EXPECT_DOUBLE_EQ(g.im_at(100), 0.0);

  GridSpec big;
  big.nx = 4000;
  big.ny = 4000;
  EXPECT_THROW(big.validate(), GridTooLarge);
  GridSpec inverted;
  inverted.re_min = 1.0;
  inverted.re_max = 0.0;
  EXPECT_THROW(inverted.validate(), InvalidArgument);
  GridSpec empty;
  empty.nx = 0;
  EXPECT_THROW(empty.validate(), InvalidArgument);
  EXPECT_THROW(evaluate_grid(DistributionKind::husimi, ECParams(1.0, 0.0, 0.0), big),
               GridTooLarge);
}

TEST(quasiprob, husimi_examples) {
  const ECParams in_phase(1.0, 0.0, 0.0);
  // Ring of radius 1 around beta with a zero at its center.
  EXPECT_NEAR(husimi_closed(in_phase, 1.0), 0.0, 1e-16);
  EXPECT_NEAR(husimi_closed(in_phase, 2.0), kOneOverEPi, 1e-15);
  EXPECT_NEAR(husimi_closed(in_phase, cplx{1.0, 1.0}), kOneOverEPi, 1e-15);
  EXPECT_THROW(husimi_closed(ECParams(0.0, 0.0, 0.0), 0.0), SingularPoint);
}

TEST(quasiprob, husimi_generic_examples) {
  EXPECT_NEAR(husimi_generic(fock_state(0, 10), 0.0), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(husimi_generic(fock_state(1, 10), 1.0), kOneOverEPi, 1e-15);
  EXPECT_THROW(husimi_generic(fock_state(10, 10), 0.0), TruncationOverflow);
}

TEST(quasiprob, husimi_closed_matches_generic_on_grid) {
  const Tolerances tol;
  for (double dth : {0.0, kPi / 4.0, kPi / 2.0, 2.0}) {
    const ECParams p = ECParams::from_phase_difference(1.0, 0.3, dth);
    const FockVector v = ec_state(p, default_truncation(4.0));
    GridSpec g;
    g.nx = 21;
    g.ny = 21;
    const DistributionGrid closed = evaluate_grid(DistributionKind::husimi, p, g);
    const DistributionGrid generic = evaluate_grid(DistributionKind::husimi, v, g);
    for (std::size_t k = 0; k < closed.values.size(); ++k) {
      EXPECT_NEAR(closed.values[k], generic.values[k], tol.grid_tol) << dth;
    }
  }
}

TEST(quasiprob, husimi_peak_grows_with_phase_difference) {
  GridSpec g = centered_grid(1.0, 3.0, 121);
  const double q0 = evaluate_grid(DistributionKind::husimi, ECParams(1.0, 0.0, 0.0), g).max();
  const double q90 =
      evaluate_grid(DistributionKind::husimi, ECParams(1.0, 0.0, kPi / 2.0), g).max();
  EXPECT_NEAR(q0, kOneOverEPi, 1e-3);
  EXPECT_GT(q90, q0);
}

TEST(quasiprob, husimi_normalized) {
  for (double dth : {0.0, kPi / 3.0, kPi / 2.0}) {
    const ECParams p = ECParams::from_phase_difference(1.5, 0.5, dth);
    const DistributionGrid grid =
        evaluate_grid(DistributionKind::husimi, p, centered_grid(p.alpha(), 7.0, 281));
    EXPECT_NEAR(grid.integral(), 1.0, 1e-6) << dth;
    EXPECT_GE(grid.min(), 0.0);
  }
}

TEST(quasiprob, characteristic_function_basics) {
  for (double dth : {0.0, 1.0, kPi / 2.0}) {
    const ECParams p = ECParams::from_phase_difference(1.2, -0.3, dth);
    EXPECT_LE(std::abs(characteristic_antinormal(p, 0.0) - 1.0), 1e-14);
    EXPECT_LE(std::abs(characteristic_wigner(p, 0.0) - 1.0), 1e-14);
    for (cplx l : {cplx{0.3, 0.1}, cplx{-1.0, 0.5}, cplx{0.0, 2.0}}) {
      EXPECT_LE(std::abs(characteristic_antinormal(p, -l) - std::conj(characteristic_antinormal(p, l))),
                1e-13);
    }
  }
}

TEST(quasiprob, characteristic_function_is_fourier_transform_of_husimi) {
  const ECParams p(1.0, 0.0, 0.0);
  const cplx lambda{0.3, 0.1};
  const GridSpec g = centered_grid(p.alpha(), 6.0, 400);
  const double dx = (g.re_max - g.re_min) / (g.nx - 1);
  const double dy = (g.im_max - g.im_min) / (g.ny - 1);
  cplx sum{0.0, 0.0};
  for (int iy = 0; iy < g.ny; ++iy) {
    const double wy = (iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
      const cplx a = g.point(ix, iy);
      if (std::abs(a - p.alpha()) > 6.0) continue;
      sum += wx * wy * husimi_closed(p, a) * std::exp(lambda * std::conj(a) - std::conj(lambda) * a);
    }
  }
  sum *= dx * dy;
  EXPECT_LE(std::abs(sum - characteristic_antinormal(p, lambda)), 1e-4);
}

TEST(quasiprob, wigner_of_fock_states) {
  EXPECT_NEAR(wigner_numeric(fock_state(0, 10), 0.0), kTwoOverPi, 1e-14);
  EXPECT_NEAR(wigner_numeric(fock_state(1, 10), 0.0), -kTwoOverPi, 1e-14);
  // W_0(a) = (2/pi) e^{-2|a|^2}
  EXPECT_NEAR(wigner_numeric(fock_state(0, 10), cplx{0.5, -0.5}), kTwoOverPi * std::exp(-1.0),
              1e-13);
  EXPECT_NEAR(wigner_numeric(coherent(cplx{1.0, 0.5}, 40), cplx{1.0, 0.5}), kTwoOverPi, 1e-12);
}

TEST(quasiprob, wigner_closed_value_at_center) {
  // At dtheta = 0 the Wigner function reaches -2/pi at alpha = beta.
  for (cplx b : {cplx{1.0, 0.0}, cplx{0.5, -1.5}, cplx{2.0, 2.0}}) {
    EXPECT_NEAR(wigner_closed(ECParams::from_alpha(b, std::arg(b)), b), -kTwoOverPi, 1e-13);
  }
}

TEST(quasiprob, wigner_closed_matches_numeric) {
  for (double mag : {0.5, 1.0, 2.0}) {
    for (double dth : {0.0, kPi / 4.0, kPi / 2.0, -2.2}) {
      const ECParams p = ECParams::from_phase_difference(mag, 0.7, dth);
      const FockVector v = ec_state(p, default_truncation(mag));
      const GridSpec g = centered_grid(p.alpha(), 2.5, 11);
      for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
          const cplx a = g.point(ix, iy);
          EXPECT_NEAR(wigner_closed(p, a), wigner_numeric(v, a), 1e-6)
              << "mag " << mag << " dth " << dth << " at " << a;
        }
      }
    }
  }
}

TEST(quasiprob, wigner_normalized_and_negative) {
  for (double dth : {0.0, kPi / 4.0, kPi / 2.0}) {
    const ECParams p = ECParams::from_phase_difference(1.0, 0.0, dth);
    const DistributionGrid grid =
        evaluate_grid(DistributionKind::wigner, p, centered_grid(p.alpha(), 5.0, 201));
    EXPECT_NEAR(grid.integral(), 1.0, 1e-3) << dth;
    EXPECT_LT(grid.min(), 0.0) << dth;
  }
  GridSpec g = centered_grid(1.0, 2.0, 41);
  const DistributionGrid in_phase = evaluate_grid(DistributionKind::wigner, ECParams(1.0, 0.0, 0.0), g);
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < in_phase.values.size(); ++k) {
    if (in_phase.values[k] < in_phase.values[argmin]) argmin = k;
  }
  const cplx at = g.point(static_cast<int>(argmin % g.nx), static_cast<int>(argmin / g.nx));
  EXPECT_LE(std::abs(at - 1.0), 1e-12);
}

TEST(quasiprob, grid_from_fock_source_matches_closed) {
  const ECParams p = ECParams::from_phase_difference(1.0, 0.2, 1.0);
  const FockVector v = ec_state(p, 40);
  GridSpec g;
  g.nx = 9;
  g.ny = 7;
  const DistributionGrid a = evaluate_grid(DistributionKind::wigner, p, g);
  const DistributionGrid b = evaluate_grid(DistributionKind::wigner, v, g);
  ASSERT_EQ(a.values.size(), 63u);
  for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-6);
  EXPECT_STREQ(to_string(a.kind), "wigner");
}

TEST(quasiprob, displacement_matrix_properties) {
  const cplx gamma{0.7, -0.4};
  const std::size_t rows = 60, cols = 20;
  const auto d = displacement_matrix(gamma, rows, cols);
  // Columns of D are orthonormal once the row basis is large enough.
  for (std::size_t a = 0; a < cols; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      cplx s{0.0, 0.0};
      for (std::size_t m = 0; m < rows; ++m) s += std::conj(d[a * rows + m]) * d[b * rows + m];
      EXPECT_LE(std::abs(s - (a == b ? 1.0 : 0.0)), 1e-12) << a << "," << b;
    }
  }
  const FockVector c = coherent(gamma, static_cast<int>(rows) - 1);
  for (std::size_t m = 0; m < rows; ++m) EXPECT_LE(std::abs(d[m] - c[m]), 1e-14);

  const auto id = displacement_matrix(0.0, 4, 4);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(id[k * 4 + k], cplx(1.0, 0.0));
  EXPECT_EQ(displaced_truncation(10, 1.0), 18);
}
