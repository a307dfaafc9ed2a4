#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace majorant {

using cplx = std::complex<double>;

/// Widest sequence accepted at the library boundary (problem inputs).
/// Internal convolution results may grow beyond this up to kConvGuard.
inline constexpr std::int64_t kMaxWindow = 4096;

/// Hard guard on any single convolution result, against runaway windows.
inline constexpr std::int64_t kConvGuard = std::int64_t{1} << 20;

/// Stored boundary coefficients with magnitude at or below this are
/// treated as zeros when trimming. Values are never rounded.
inline constexpr double kTrimEps = 1e-300;

/// Raised when two independent evaluation paths disagree beyond tolerance.
class consistency_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finitely supported complex sequence on the integers, stored as a dense
/// window: the index of the first stored coefficient plus a contiguous list.
/// The representation is canonical: boundary coefficients of magnitude
/// <= kTrimEps are trimmed, and the zero sequence is (start 0, empty list).
class SeqZ {
 public:
  SeqZ() = default;
  SeqZ(std::int64_t start, std::vector<cplx> coeffs);
  SeqZ(std::int64_t start, const std::vector<double>& coeffs);

  static SeqZ delta(std::int64_t n, cplx value = 1.0);

  bool is_zero() const { return coeffs_.empty(); }
  std::int64_t start() const { return start_; }
  /// Index of the last stored coefficient. Meaningless for the zero sequence.
  std::int64_t last() const {
    return start_ + static_cast<std::int64_t>(coeffs_.size()) - 1;
  }
  std::int64_t width() const { return static_cast<std::int64_t>(coeffs_.size()); }
  std::span<const cplx> coeffs() const { return coeffs_; }

  /// Coefficient at index n; zero outside the stored window.
  cplx at(std::int64_t n) const {
    if (is_zero() || n < start_ || n > last()) return {};
    return coeffs_[static_cast<std::size_t>(n - start_)];
  }

  bool is_real() const;
  double max_abs() const;

  friend bool operator==(const SeqZ& x, const SeqZ& y) {
    return x.start_ == y.start_ && x.coeffs_ == y.coeffs_;
  }

 private:
  void trim();

  std::int64_t start_ = 0;
  std::vector<cplx> coeffs_;
};

/// result(n) = sum_m x(m) y(n-m), by direct compensated summation.
SeqZ convolve(const SeqZ& x, const SeqZ& y);

/// result(n) = conj(x(-n)).
SeqZ involute(const SeqZ& x);

/// m-fold convolution power; conv_power(x, 0) is the unit delta_0.
SeqZ conv_power(const SeqZ& x, int m);

/// N_j(x) = [(x~ * x)^{*j}](0), the 2j-th power of the L^{2j} norm of the
/// trigonometric polynomial with coefficients x. Computed two ways: direct
/// convolution powers and exact uniform-grid quadrature; the two must agree
/// to path_tol relative or a consistency_error is raised. Returns the grid
/// value.
double norm_2j_pow(const SeqZ& x, int j, double path_tol = 1e-9);

/// Convolution-power path only. This is the verifier's ground-truth route.
double norm_2j_pow_direct(const SeqZ& x, int j);

/// (b * b~)^{*(j-1)} * b; equals b when j = 1. For real b the result is
/// exactly real; for real nonnegative b it is coefficient-wise nonnegative.
SeqZ majorant_coeffs(const SeqZ& b, int j);

/// L^p norm of the trigonometric polynomial with coefficients x, by uniform
/// grid quadrature with grid_len points. Not exact for p that are not even
/// integers; callers comparing two such norms should use one grid_len.
double pnorm_grid(const SeqZ& x, double p, std::int64_t grid_len);

/// Coefficient-wise absolute value.
SeqZ abs_seq(const SeqZ& x);

SeqZ operator+(const SeqZ& x, const SeqZ& y);
SeqZ operator*(const SeqZ& x, cplx s);
inline SeqZ operator*(cplx s, const SeqZ& x) { return x * s; }

}  // namespace majorant
