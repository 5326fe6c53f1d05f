#include "esl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "esl/errors.hpp"

namespace esl {

namespace {

void require_same_dim(const FockVector& a, const FockVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch(a.dim(), b.dim());
}

// Truncation the caller should use instead, estimated from the mean photon
// number of the offending vector.
int suggested_truncation(const FockVector& v) {
  double nbar = 0.0;
  double norm = 0.0;
  for (std::size_t n = 0; n < v.dim(); ++n) {
    const double p = std::norm(v[n]);
    nbar += static_cast<double>(n) * p;
    norm += p;
  }
  if (norm > 0.0) nbar /= norm;
  return std::max(v.truncation() + 1, default_truncation(std::sqrt(nbar)));
}

void require_small_tail(const FockVector& v, double tail_tol, const char* op) {
  const double tail = std::abs(v[v.dim() - 1]);
  if (tail > tail_tol) {
    throw TruncationOverflow(std::string(op) + ": tail amplitude |c_N| = " + std::to_string(tail) +
                                 " exceeds " + std::to_string(tail_tol) + " at N = " +
                                 std::to_string(v.truncation()),
                             suggested_truncation(v));
  }
}

}  // namespace

void Tolerances::validate() const {
  for (double t : {norm_tol, limit_tol, grid_tol, truncation_tail_tol}) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw InvalidArgument("tolerances must be strictly positive and finite");
    }
  }
}

FockVector::FockVector(std::size_t dim) : amps_(dim, cplx{0.0, 0.0}) {
  if (dim == 0) throw InvalidArgument("FockVector dimension must be >= 1");
}

FockVector::FockVector(std::vector<cplx> amps) : amps_(std::move(amps)) {
  if (amps_.empty()) throw InvalidArgument("FockVector dimension must be >= 1");
  for (const cplx& c : amps_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgument("FockVector amplitudes must be finite");
    }
  }
}

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const cplx& c : amps_) s += std::norm(c);
  return s;
}

bool FockVector::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

FockVector FockVector::resized(std::size_t dim) const {
  std::vector<cplx> out(dim, cplx{0.0, 0.0});
  std::copy_n(amps_.begin(), std::min(dim, amps_.size()), out.begin());
  return FockVector(std::move(out));
}

FockVector& FockVector::operator+=(const FockVector& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t n = 0; n < amps_.size(); ++n) amps_[n] += rhs.amps_[n];
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t n = 0; n < amps_.size(); ++n) amps_[n] -= rhs.amps_[n];
  return *this;
}

FockVector& FockVector::operator*=(cplx s) {
  for (cplx& c : amps_) c *= s;
  return *this;
}

FockVector fock_state(int n, int n_max) {
  if (n_max < 0 || n < 0 || n > n_max) {
    throw InvalidArgument("fock_state: need 0 <= n <= N (n = " + std::to_string(n) +
                          ", N = " + std::to_string(n_max) + ")");
  }
  FockVector v(static_cast<std::size_t>(n_max) + 1);
  v[static_cast<std::size_t>(n)] = 1.0;
  return v;
}

int default_truncation(double mag) {
  const double m2 = mag * mag;
  return static_cast<int>(std::ceil(m2 + 10.0 * std::sqrt(m2 + 1.0) + 20.0));
}

FockVector normalize(const FockVector& v) {
  const double norm = std::sqrt(v.norm_squared());
  if (!(norm > 0.0)) throw InvalidArgument("cannot normalize the zero vector");
  FockVector out = v;
  out *= 1.0 / norm;
  return out;
}

cplx inner_product(const FockVector& a, const FockVector& b) {
  require_same_dim(a, b);
  cplx s{0.0, 0.0};
  for (std::size_t n = 0; n < a.dim(); ++n) s += std::conj(a[n]) * b[n];
  return s;
}

double max_abs_diff(const FockVector& a, const FockVector& b) {
  require_same_dim(a, b);
  double m = 0.0;
  for (std::size_t n = 0; n < a.dim(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

double fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(inner_product(a, b)) / (a.norm_squared() * b.norm_squared());
}

FockVector apply_annihilation(const FockVector& v) {
  if (v.dim() < 2) throw InvalidArgument("apply_annihilation needs dim >= 2");
  FockVector out(v.dim());
  for (std::size_t n = 0; n + 1 < v.dim(); ++n) {
    out[n] = std::sqrt(static_cast<double>(n + 1)) * v[n + 1];
  }
  return out;
}

FockVector apply_creation(const FockVector& v, double tail_tol) {
  require_small_tail(v, tail_tol, "apply_creation");
  FockVector out(v.dim());
  for (std::size_t n = 1; n < v.dim(); ++n) {
    out[n] = std::sqrt(static_cast<double>(n)) * v[n - 1];
  }
  return out;
}

double real_expectation(cplx value, const char* what) {
  if (std::abs(value.imag()) > 1e-10) {
    throw std::logic_error(std::string(what) + ": imaginary residue " +
                           std::to_string(value.imag()) + " on a hermitian expectation");
  }
  return value.real();
}

double expectation_number(const FockVector& v) {
  double s = 0.0;
  for (std::size_t n = 0; n < v.dim(); ++n) s += static_cast<double>(n) * std::norm(v[n]);
  return s;
}

QuadratureMoments quadrature_moments(const FockVector& v, double tail_tol) {
  const FockVector av = apply_annihilation(v);
  const FockVector cv = apply_creation(v, tail_tol);
  const cplx i{0.0, 1.0};

  // X1 and X2 are hermitian, so <X^2> = |X v|^2.
  const FockVector x1v = 0.5 * (av + cv);
  const FockVector x2v = (1.0 / (2.0 * i)) * (av - cv);

  return {real_expectation(inner_product(v, x1v), "<X1>"),
          real_expectation(inner_product(v, x2v), "<X2>"),
          real_expectation(inner_product(x1v, x1v), "<X1^2>"),
          real_expectation(inner_product(x2v, x2v), "<X2^2>")};
}

}  // namespace esl
