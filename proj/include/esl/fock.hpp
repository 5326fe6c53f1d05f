#pragma once

// Truncated single-mode Fock space: state vectors and matrix-free ladder
// operator actions.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace esl {

using cplx = std::complex<double>;

struct Tolerances {
  double norm_tol = 1e-10;
  double limit_tol = 1e-6;
  double grid_tol = 1e-8;
  double truncation_tail_tol = 1e-12;

  // Throws InvalidArgument unless every field is strictly positive and finite.
  void validate() const;
};

// Amplitudes c_0..c_N of a state truncated at photon number N.
class FockVector {
 public:
  explicit FockVector(std::size_t dim);
  explicit FockVector(std::vector<cplx> amps);

  std::size_t dim() const noexcept { return amps_.size(); }
  int truncation() const noexcept { return static_cast<int>(amps_.size()) - 1; }

  cplx operator[](std::size_t n) const { return amps_[n]; }
  cplx& operator[](std::size_t n) { return amps_[n]; }

  std::span<const cplx> amps() const noexcept { return amps_; }
  std::span<cplx> amps() noexcept { return amps_; }

  double norm_squared() const;
  bool is_normalized(double tol = 1e-10) const;

  // Copy resized to `dim`: zero padded, or cut (dropping the tail).
  FockVector resized(std::size_t dim) const;

  FockVector& operator+=(const FockVector& rhs);
  FockVector& operator-=(const FockVector& rhs);
  FockVector& operator*=(cplx s);

  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(cplx s, FockVector v) { return v *= s; }
  friend FockVector operator*(FockVector v, cplx s) { return v *= s; }

 private:
  std::vector<cplx> amps_;
};

// |n> in a basis truncated at N.
FockVector fock_state(int n, int n_max);

// Default truncation for a state centred on coherent amplitude |alpha|:
// ceil(|alpha|^2 + 10 sqrt(|alpha|^2 + 1) + 20).
int default_truncation(double mag);

// Returns v / |v|. Throws InvalidArgument for the zero vector.
FockVector normalize(const FockVector& v);

// sum_n conj(a_n) b_n
cplx inner_product(const FockVector& a, const FockVector& b);

// Largest componentwise |a_n - b_n|.
double max_abs_diff(const FockVector& a, const FockVector& b);

// |<a|b>|^2 / (<a|a><b|b>)
double fidelity(const FockVector& a, const FockVector& b);

FockVector apply_annihilation(const FockVector& v);

// Throws TruncationOverflow when |v_N| exceeds `tail_tol`: the photon pushed
// out of the basis would be silently lost.
FockVector apply_creation(const FockVector& v, double tail_tol = 1e-12);

double expectation_number(const FockVector& v);

struct QuadratureMoments {
  double mean_x1;
  double mean_x2;
  double mean_x1_sq;
  double mean_x2_sq;

  double var_x1() const { return mean_x1_sq - mean_x1 * mean_x1; }
  double var_x2() const { return mean_x2_sq - mean_x2 * mean_x2; }
};

// X1 = (a + a^dag)/2, X2 = (a - a^dag)/(2i).
QuadratureMoments quadrature_moments(const FockVector& v, double tail_tol = 1e-12);

// Returns the real part of an expectation value after checking the imaginary
// residue is below 1e-10 (throws std::logic_error otherwise).
double real_expectation(cplx value, const char* what);

}  // namespace esl
