#include "majorant/seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace majorant {

namespace {

// Neumaier compensated accumulator.
struct Kahan {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double value() const { return s + c; }
};

struct KahanC {
  Kahan re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("SeqZ: window bounds exceed index range");
  }
  return r;
}

}  // namespace

SeqZ::SeqZ(std::int64_t start, std::vector<cplx> coeffs)
    : start_(start), coeffs_(std::move(coeffs)) {
  trim();
}

SeqZ::SeqZ(std::int64_t start, const std::vector<double>& coeffs) : start_(start) {
  coeffs_.reserve(coeffs.size());
  for (double v : coeffs) coeffs_.emplace_back(v, 0.0);
  trim();
}

SeqZ SeqZ::delta(std::int64_t n, cplx value) { return SeqZ(n, std::vector<cplx>{value}); }

void SeqZ::trim() {
  auto stored_zero = [](cplx z) { return std::abs(z) <= kTrimEps; };
  std::size_t lo = 0;
  std::size_t hi = coeffs_.size();
  while (lo < hi && stored_zero(coeffs_[lo])) ++lo;
  while (hi > lo && stored_zero(coeffs_[hi - 1])) --hi;
  if (lo == hi) {
    coeffs_.clear();
    start_ = 0;
    return;
  }
  if (lo > 0 || hi < coeffs_.size()) {
    coeffs_ = std::vector<cplx>(coeffs_.begin() + static_cast<std::ptrdiff_t>(lo),
                                coeffs_.begin() + static_cast<std::ptrdiff_t>(hi));
    start_ += static_cast<std::int64_t>(lo);
  }
}

bool SeqZ::is_real() const {
  for (cplx z : coeffs_) {
    if (z.imag() != 0.0) return false;
  }
  return true;
}

double SeqZ::max_abs() const {
  double m = 0.0;
  for (cplx z : coeffs_) m = std::max(m, std::abs(z));
  return m;
}

SeqZ convolve(const SeqZ& x, const SeqZ& y) {
  if (x.is_zero() || y.is_zero()) return {};
  const std::int64_t rs = checked_add(x.start(), y.start());
  const std::int64_t re = checked_add(x.last(), y.last());
  const std::int64_t rw = re - rs + 1;
  if (rw > kConvGuard) {
    throw std::length_error("convolve: result window exceeds guard (" +
                            std::to_string(rw) + " coefficients)");
  }
  const auto xc = x.coeffs();
  const auto yc = y.coeffs();
  const std::int64_t wx = x.width();
  const std::int64_t wy = y.width();
  std::vector<cplx> out(static_cast<std::size_t>(rw));
  for (std::int64_t o = 0; o < rw; ++o) {
    const std::int64_t k_lo = std::max<std::int64_t>(0, o - wy + 1);
    const std::int64_t k_hi = std::min(wx - 1, o);
    KahanC acc;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
      acc.add(xc[static_cast<std::size_t>(k)] * yc[static_cast<std::size_t>(o - k)]);
    }
    out[static_cast<std::size_t>(o)] = acc.value();
  }
  return SeqZ(rs, std::move(out));
}

SeqZ involute(const SeqZ& x) {
  if (x.is_zero()) return {};
  std::vector<cplx> out(static_cast<std::size_t>(x.width()));
  const auto xc = x.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::conj(xc[xc.size() - 1 - i]);
  }
  return SeqZ(-x.last(), std::move(out));
}

SeqZ conv_power(const SeqZ& x, int m) {
  if (m < 0) throw std::invalid_argument("conv_power: negative exponent");
  if (m == 0) return SeqZ::delta(0);
  SeqZ p = x;
  for (int i = 1; i < m; ++i) p = convolve(p, x);
  return p;
}

namespace {

// Grid values of |X(theta_k)|^2 on the uniform L-point grid. Phases are
// reduced exactly in integer arithmetic, so there is no recurrence drift.
std::vector<double> grid_abs2(const SeqZ& x, std::int64_t L) {
  std::vector<cplx> roots(static_cast<std::size_t>(L));
  for (std::int64_t m = 0; m < L; ++m) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(L);
    roots[static_cast<std::size_t>(m)] = std::polar(1.0, ang);
  }
  const auto xc = x.coeffs();
  std::vector<double> out(static_cast<std::size_t>(L));
  for (std::int64_t k = 0; k < L; ++k) {
    KahanC acc;
    for (std::int64_t i = 0; i < x.width(); ++i) {
      const std::int64_t n = x.start() + i;
      std::int64_t m = (k % L) * (n % L) % L;  // |k|,|n mod L| < L, no overflow for L <= 2^31
      m %= L;
      if (m < 0) m += L;
      acc.add(xc[static_cast<std::size_t>(i)] * roots[static_cast<std::size_t>(m)]);
    }
    out[static_cast<std::size_t>(k)] = std::norm(acc.value());
  }
  return out;
}

}  // namespace

double norm_2j_pow_direct(const SeqZ& x, int j) {
  if (j < 1) throw std::invalid_argument("norm_2j_pow: j must be >= 1");
  if (x.is_zero()) return 0.0;
  const SeqZ u = convolve(involute(x), x);
  return conv_power(u, j).at(0).real();
}

double norm_2j_pow(const SeqZ& x, int j, double path_tol) {
  if (j < 1) throw std::invalid_argument("norm_2j_pow: j must be >= 1");
  if (x.is_zero()) return 0.0;
  const double direct = norm_2j_pow_direct(x, j);

  // |X|^{2j} is a trigonometric polynomial of degree j*(W-1); an L-point
  // uniform grid integrates it exactly once L exceeds the degree.
  const std::int64_t L = 2 * static_cast<std::int64_t>(j) * (x.width() - 1) + 1;
  const std::vector<double> a2 = grid_abs2(x, L);
  Kahan mean;
  for (double v : a2) {
    double p = v;
    for (int i = 1; i < j; ++i) p *= v;
    mean.add(p);
  }
  const double grid = mean.value() / static_cast<double>(L);

  const double scale = std::max(std::abs(direct), std::abs(grid));
  if (std::abs(direct - grid) > path_tol * scale) {
    throw consistency_error("norm_2j_pow: convolution and quadrature paths disagree (" +
                            std::to_string(direct) + " vs " + std::to_string(grid) + ")");
  }
  return grid;
}

SeqZ majorant_coeffs(const SeqZ& b, int j) {
  if (j < 1) throw std::invalid_argument("majorant_coeffs: j must be >= 1");
  if (b.is_zero()) return {};
  if (j == 1) return b;
  const SeqZ u = convolve(b, involute(b));
  return convolve(conv_power(u, j - 1), b);
}

double pnorm_grid(const SeqZ& x, double p, std::int64_t grid_len) {
  if (!(p > 0.0)) throw std::invalid_argument("pnorm_grid: p must be positive");
  if (grid_len < 1) throw std::invalid_argument("pnorm_grid: grid_len must be >= 1");
  if (x.is_zero()) return 0.0;
  const std::vector<double> a2 = grid_abs2(x, grid_len);
  Kahan mean;
  for (double v : a2) mean.add(std::pow(v, p / 2.0));
  return std::pow(mean.value() / static_cast<double>(grid_len), 1.0 / p);
}

SeqZ abs_seq(const SeqZ& x) {
  std::vector<cplx> out(x.coeffs().begin(), x.coeffs().end());
  for (cplx& z : out) z = cplx(std::abs(z), 0.0);
  return SeqZ(x.start(), std::move(out));
}

SeqZ operator+(const SeqZ& x, const SeqZ& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  const std::int64_t rs = std::min(x.start(), y.start());
  const std::int64_t re = std::max(x.last(), y.last());
  if (re - rs + 1 > kConvGuard) {
    throw std::length_error("SeqZ sum: window exceeds guard");
  }
  std::vector<cplx> out(static_cast<std::size_t>(re - rs + 1));
  for (std::int64_t n = rs; n <= re; ++n) {
    out[static_cast<std::size_t>(n - rs)] = x.at(n) + y.at(n);
  }
  return SeqZ(rs, std::move(out));
}

SeqZ operator*(const SeqZ& x, cplx s) {
  std::vector<cplx> out(x.coeffs().begin(), x.coeffs().end());
  for (cplx& z : out) z *= s;
  return SeqZ(x.start(), std::move(out));
}

}  // namespace majorant
