#include "majorant/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace majorant {

namespace {

constexpr double kGolden = 0.6180339887498949;

double sup_distance(const SeqZ& x, const SeqZ& y) {
  if (x.is_zero() && y.is_zero()) return 0.0;
  const std::int64_t lo = std::min(x.is_zero() ? y.start() : x.start(),
                                   y.is_zero() ? x.start() : y.start());
  const std::int64_t hi = std::max(x.is_zero() ? y.last() : x.last(),
                                   y.is_zero() ? x.last() : y.last());
  double m = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) m = std::max(m, std::abs(x.at(n) - y.at(n)));
  return m;
}

struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

Report verify_solution(const Problem& problem, const Solution& sol, double tol) {
  Report rep;
  const int j = problem.j;
  const SeqZ& a = problem.a;
  const SeqZ& b = sol.b;

  // Everything below is recomputed from (a, j, b) alone, by direct
  // convolution: no solver intermediates and no quadrature path.
  const SeqZ c = a.is_zero() ? SeqZ{} : convolve(a, conv_power(convolve(involute(a), a), j - 1));
  const double norm_a = norm_2j_pow_direct(a, j);
  const double norm_b = norm_2j_pow_direct(b, j);
  const SeqZ fhat = majorant_coeffs(b, j);
  const double max_c = c.max_abs();
  const double max_b = b.max_abs();

  std::vector<std::int64_t> support;
  std::vector<double> abs_c;
  if (!c.is_zero()) {
    for (std::int64_t n = c.start(); n <= c.last(); ++n) {
      const double mag = std::abs(c.at(n));
      if (mag > 1e-12 * max_c) {
        support.push_back(n);
        abs_c.push_back(mag);
      }
    }
  }

  // (1) b >= 0, real
  if (!b.is_real()) {
    double worst = 0.0;
    for (cplx z : b.coeffs()) worst = std::max(worst, std::abs(z.imag()));
    rep.nonneg_margin = -worst;
  } else if (!b.is_zero()) {
    double lo = 0.0;
    bool first = true;
    for (cplx z : b.coeffs()) {
      lo = first ? z.real() : std::min(lo, z.real());
      first = false;
    }
    rep.nonneg_margin = lo;
  }
  rep.pass_nonneg = rep.nonneg_margin >= -tol * std::max(max_b, 1e-300);

  // (2) b vanishes off S
  if (!b.is_zero()) {
    std::size_t si = 0;
    for (std::int64_t n = b.start(); n <= b.last(); ++n) {
      while (si < support.size() && support[si] < n) ++si;
      const bool in_s = si < support.size() && support[si] == n;
      if (!in_s) rep.support_leak = std::max(rep.support_leak, std::abs(b.at(n)));
    }
  }
  rep.pass_support = rep.support_leak <= tol * std::max(max_b, 1e-300);

  // (3) matched norm
  rep.norm_gap = norm_a > 0.0 ? std::abs(norm_b - norm_a) / norm_a : (norm_b == 0.0 ? 0.0 : 1.0);
  rep.pass_norm = rep.norm_gap <= tol;

  // (4) Fhat >= |c| on S
  if (!support.empty()) {
    double lo = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const double m = (fhat.at(support[i]).real() - abs_c[i]) / max_c;
      lo = first ? m : std::min(lo, m);
      first = false;
    }
    rep.majorization_margin = lo;
  }
  rep.pass_majorization = rep.majorization_margin >= -tol;

  // auxiliary inequalities
  if (!a.is_zero() && !b.is_zero() && b.is_real()) {
    rep.hoelder_margin = check_hoelder(a, b, j);
    const double rhs = std::pow(norm_b, 1.0 / (2.0 * j)) *
                       std::pow(norm_a, (2.0 * j - 1.0) / (2.0 * j));
    rep.pass_hoelder = rep.hoelder_margin >= -tol * std::max(rhs, 1e-300);
    const double norm_fhat = norm_2j_pow_direct(fhat, j);
    rep.upper_majorant_margin = norm_fhat - norm_2j_pow_direct(c, j);
    rep.pass_upper_majorant = rep.upper_majorant_margin >= -tol * std::max(norm_fhat, 1e-300);
  } else {
    rep.pass_hoelder = true;
    rep.pass_upper_majorant = true;
  }

  double m_val = 0.0;
  if (b.is_real()) {
    for (std::size_t i = 0; i < support.size(); ++i) {
      m_val += b.at(support[i]).real() * abs_c[i];
    }
  }
  rep.ratio = m_val > 0.0 ? norm_b / m_val : 1.0;

  rep.passed = rep.pass_nonneg && rep.pass_support && rep.pass_norm && rep.pass_majorization;
  return rep;
}

double check_hoelder(const SeqZ& a, const SeqZ& k, int j) {
  if (j < 1) throw std::invalid_argument("check_hoelder: j must be >= 1");
  const SeqZ c = a.is_zero() ? SeqZ{} : convolve(a, conv_power(convolve(involute(a), a), j - 1));
  const double lhs = std::abs(convolve(involute(k), c).at(0));
  const double rhs = std::pow(norm_2j_pow_direct(k, j), 1.0 / (2.0 * j)) *
                     std::pow(norm_2j_pow_direct(a, j), (2.0 * j - 1.0) / (2.0 * j));
  return rhs - lhs;
}

double check_upper_majorant(const SeqZ& b, const SeqZ& d, int j) {
  if (j < 1) throw std::invalid_argument("check_upper_majorant: j must be >= 1");
  if (!b.is_real()) throw std::invalid_argument("check_upper_majorant: b must be real");
  const std::int64_t lo = std::min(b.is_zero() ? std::int64_t{0} : b.start(),
                                   d.is_zero() ? std::int64_t{0} : d.start());
  const std::int64_t hi = std::max(b.is_zero() ? std::int64_t{0} : b.last(),
                                   d.is_zero() ? std::int64_t{0} : d.last());
  const double slack = 1e-12 * std::max(b.max_abs(), 1.0);
  for (std::int64_t n = lo; n <= hi; ++n) {
    if (b.at(n).real() < std::abs(d.at(n)) - slack) {
      throw std::invalid_argument("check_upper_majorant: b does not majorize d");
    }
  }
  return norm_2j_pow_direct(b, j) - norm_2j_pow_direct(d, j);
}

bool is_sidon_bj(const std::vector<std::int64_t>& s, int j) {
  if (j < 1 || j > 4 || s.size() > 24) {
    throw std::invalid_argument("is_sidon_bj: |S| <= 24 and 1 <= j <= 4 required");
  }
  std::vector<std::int64_t> set = s;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (set.size() <= 1) return true;

  // Enumerate nondecreasing index tuples of length j; a repeated sum from
  // two distinct tuples breaks the B_j property.
  std::map<std::int64_t, std::vector<std::size_t>> first_rep;
  std::vector<std::size_t> idx(static_cast<std::size_t>(j), 0);
  while (true) {
    std::int64_t sum = 0;
    for (std::size_t t : idx) sum += set[t];
    auto [it, fresh] = first_rep.emplace(sum, idx);
    if (!fresh && it->second != idx) return false;

    int pos = j - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == set.size() - 1) --pos;
    if (pos < 0) break;
    const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
    for (std::size_t t = static_cast<std::size_t>(pos); t < idx.size(); ++t) idx[t] = next;
  }
  return true;
}

double exactness_gap(const SeqZ& a, int j) {
  if (j < 1) throw std::invalid_argument("exactness_gap: j must be >= 1");
  const double gap = norm_2j_pow_direct(abs_seq(a), j) - norm_2j_pow_direct(a, j);
  return std::max(0.0, gap);
}

namespace {

// N_j of the point x on the support lattice, through seq_core only.
double oracle_objective(const Problem& problem, const std::vector<double>& x) {
  const std::int64_t lo = problem.support.front();
  std::vector<double> win(static_cast<std::size_t>(problem.support.back() - lo + 1), 0.0);
  for (std::size_t i = 0; i < problem.support.size(); ++i) {
    win[static_cast<std::size_t>(problem.support[i] - lo)] = x[i];
  }
  return norm_2j_pow_direct(SeqZ(lo, std::move(win)), problem.j);
}

void enumerate_compositions(int total, std::size_t parts, std::vector<int>& cur,
                            const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    enumerate_compositions(total - k, parts - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

SeqZ oracle_solve(const Problem& problem, int grid_density) {
  if (problem.trivial || problem.support.empty()) return {};
  const std::size_t ns = problem.support.size();
  if (ns > 4) throw std::invalid_argument("oracle_solve: |S| <= 4 required");
  if (grid_density < 1) throw std::invalid_argument("oracle_solve: grid_density must be >= 1");

  const std::vector<double>& w = problem.abs_c;

  // Grid seeding over barycentric weights k/grid_density.
  std::vector<double> best;
  double best_val = 0.0;
  std::vector<int> cur;
  enumerate_compositions(grid_density, ns, cur, [&](const std::vector<int>& k) {
    std::vector<double> x(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      x[i] = static_cast<double>(k[i]) / (static_cast<double>(grid_density) * w[i]);
    }
    const double val = oracle_objective(problem, x);
    if (best.empty() || val < best_val) {
      best = x;
      best_val = val;
    }
  });

  // Pairwise coordinate descent along hyperplane-preserving directions
  // e_i/w_i - e_k/w_k, each minimized exactly by golden section.
  for (int sweep = 0; sweep < 300; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t k = 0; k < ns; ++k) {
        if (i == k) continue;
        double t_lo = -best[i] * w[i];
        double t_hi = best[k] * w[k];
        if (t_hi - t_lo <= 0.0) continue;
        const auto at = [&](double t) {
          std::vector<double> x = best;
          x[i] = std::max(0.0, x[i] + t / w[i]);
          x[k] = std::max(0.0, x[k] - t / w[k]);
          return oracle_objective(problem, x);
        };
        double m1 = t_hi - kGolden * (t_hi - t_lo);
        double m2 = t_lo + kGolden * (t_hi - t_lo);
        double f1 = at(m1), f2 = at(m2);
        for (int it = 0; it < 90; ++it) {
          if (f1 < f2) {
            t_hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = t_hi - kGolden * (t_hi - t_lo);
            f1 = at(m1);
          } else {
            t_lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = t_lo + kGolden * (t_hi - t_lo);
            f2 = at(m2);
          }
        }
        const double t = 0.5 * (t_lo + t_hi);
        const double val = at(t);
        if (val < best_val) {
          best_val = val;
          moved = std::max(moved, std::abs(t));
          best[i] = std::max(0.0, best[i] + t / w[i]);
          best[k] = std::max(0.0, best[k] - t / w[k]);
        }
      }
    }
    const double scale = *std::max_element(best.begin(), best.end());
    if (moved <= 1e-12 * std::max(scale, 1e-300)) break;
  }

  const double t = std::pow(problem.norm_a / best_val, 1.0 / (2.0 * problem.j));
  const std::int64_t lo = problem.support.front();
  std::vector<double> win(static_cast<std::size_t>(problem.support.back() - lo + 1), 0.0);
  for (std::size_t i = 0; i < ns; ++i) {
    win[static_cast<std::size_t>(problem.support[i] - lo)] = t * best[i];
  }
  return SeqZ(lo, std::move(win));
}

double uniqueness_probe(const Problem& problem, const SolverConfig& cfg, int* converged_runs) {
  if (cfg.restarts < 2) throw std::invalid_argument("uniqueness_probe: restarts >= 2 required");
  if (converged_runs) *converged_runs = 0;
  if (problem.trivial || problem.support.empty()) {
    if (converged_runs) *converged_runs = cfg.restarts;
    return 0.0;
  }
  std::vector<SeqZ> optimizers;
  for (int rep = 0; rep < cfg.restarts; ++rep) {
    SplitMix rng(cfg.seed ^ (0x5851f42d4c957f2dULL * static_cast<std::uint64_t>(rep + 1)));
    std::vector<double> h0(problem.support.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < h0.size(); ++i) {
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      h0[i] = -std::log(u);
      denom += problem.abs_c[i] * h0[i];
    }
    for (double& v : h0) v /= denom;
    const Solution sol = solve_from(problem, cfg, std::move(h0));
    if (sol.converged) {
      optimizers.push_back(sol.b);
      if (converged_runs) ++(*converged_runs);
    }
  }
  double dist = 0.0;
  for (std::size_t i = 0; i < optimizers.size(); ++i) {
    for (std::size_t k = i + 1; k < optimizers.size(); ++k) {
      dist = std::max(dist, sup_distance(optimizers[i], optimizers[k]));
    }
  }
  return dist;
}

}  // namespace majorant
