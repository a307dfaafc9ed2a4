#include "majorant/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace majorant {

namespace {

// Real windowed sequence: the solver's internal fast path. All reported
// quantities are recomputed through seq_core at the end of solve.
struct RWin {
  std::int64_t start = 0;
  std::vector<double> v;
  std::int64_t last() const { return start + static_cast<std::int64_t>(v.size()) - 1; }
};

RWin rconv(const RWin& a, const RWin& b) {
  RWin r;
  r.start = a.start + b.start;
  r.v.assign(a.v.size() + b.v.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double ai = a.v[i];
    if (ai == 0.0) continue;
    for (std::size_t k = 0; k < b.v.size(); ++k) r.v[i + k] += ai * b.v[k];
  }
  return r;
}

RWin rreverse(const RWin& a) {
  RWin r;
  r.start = -a.last();
  r.v.assign(a.v.rbegin(), a.v.rend());
  return r;
}

// (p * q)(0) = sum_k p(k) q(-k)
double dot_at_zero(const RWin& p, const RWin& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    const std::int64_t k = p.start + static_cast<std::int64_t>(i);
    const std::int64_t qi = -k - q.start;
    if (qi >= 0 && qi < static_cast<std::int64_t>(q.v.size())) {
      s += p.v[i] * q.v[static_cast<std::size_t>(qi)];
    }
  }
  return s;
}

// Objective/gradient engine over a dense window with a designated variable
// subset. Weights may be zero (the enlarged-support mode).
struct Engine {
  int j = 1;
  std::int64_t win_start = 0;
  std::int64_t win_len = 0;
  std::vector<std::int64_t> var_off;  // variable offsets within the window
  std::vector<double> w;              // objective weight per variable

  std::size_t nvar() const { return var_off.size(); }

  RWin embed(const std::vector<double>& h) const {
    RWin r;
    r.start = win_start;
    r.v.assign(static_cast<std::size_t>(win_len), 0.0);
    for (std::size_t i = 0; i < var_off.size(); ++i) {
      r.v[static_cast<std::size_t>(var_off[i])] = h[i];
    }
    return r;
  }

  // u^{*(j-1)} for u = h~ * h; the unit delta for j = 1.
  RWin corr_power(const RWin& hw) const {
    if (j == 1) return RWin{0, {1.0}};
    RWin u = rconv(rreverse(hw), hw);
    RWin p = u;
    for (int i = 2; i < j; ++i) p = rconv(p, u);
    return p;
  }

  double objective(const std::vector<double>& h) const {
    const RWin hw = embed(h);
    const RWin u = rconv(rreverse(hw), hw);
    if (j == 1) return u.v[static_cast<std::size_t>(-u.start)];
    RWin p = u;
    for (int i = 2; i < j; ++i) p = rconv(p, u);
    return dot_at_zero(p, u);
  }

  // Fills g with the gradient over variables and returns N_j(h).
  double objective_grad(const std::vector<double>& h, std::vector<double>& g) const {
    const RWin hw = embed(h);
    const RWin a = corr_power(hw);  // u^{*(j-1)}
    g.resize(nvar());
    double n_val = 0.0;
    for (std::size_t i = 0; i < nvar(); ++i) {
      const std::int64_t n = win_start + var_off[i];
      // (a * h)(n) = sum_k a(k) h(n - k)
      double f = 0.0;
      for (std::size_t t = 0; t < a.v.size(); ++t) {
        const std::int64_t k = a.start + static_cast<std::int64_t>(t);
        const std::int64_t hi = n - k - hw.start;
        if (hi >= 0 && hi < static_cast<std::int64_t>(hw.v.size())) {
          f += a.v[t] * hw.v[static_cast<std::size_t>(hi)];
        }
      }
      g[i] = 2.0 * j * f;
      n_val += f * h[i];
    }
    return n_val;
  }

  // Exact Hessian-vector product at h:
  //   Hv = 2j [ (j-1) u^{*(j-2)} * s * h  +  u^{*(j-1)} * v ],
  // with u = h~*h and s = h~*v + v~*h, restricted to the variables.
  std::vector<double> hessian_vec(const std::vector<double>& h,
                                  const std::vector<double>& v) const {
    std::vector<double> out(nvar(), 0.0);
    if (j == 1) {
      for (std::size_t i = 0; i < nvar(); ++i) out[i] = 2.0 * v[i];
      return out;
    }
    const RWin hw = embed(h);
    const RWin vw = embed(v);
    const RWin u = rconv(rreverse(hw), hw);
    RWin s = rconv(rreverse(hw), vw);
    {
      const RWin s2 = rconv(rreverse(vw), hw);
      // windows coincide by symmetry
      for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] += s2.v[i];
    }
    RWin term = rconv(corr_power(hw), vw);  // u^{*(j-1)} * v
    if (j >= 2) {
      RWin up = RWin{0, {1.0}};
      for (int i = 2; i < j; ++i) up = rconv(up, u);  // u^{*(j-2)}
      RWin cross = rconv(rconv(up, s), hw);
      for (std::size_t i = 0; i < cross.v.size(); ++i) {
        const std::int64_t n = cross.start + static_cast<std::int64_t>(i);
        const std::int64_t ti = n - term.start;
        if (ti >= 0 && ti < static_cast<std::int64_t>(term.v.size())) {
          term.v[static_cast<std::size_t>(ti)] += (j - 1) * cross.v[i];
        }
      }
    }
    for (std::size_t i = 0; i < nvar(); ++i) {
      const std::int64_t n = win_start + var_off[i];
      const std::int64_t ti = n - term.start;
      double val = 0.0;
      if (ti >= 0 && ti < static_cast<std::int64_t>(term.v.size())) {
        val = term.v[static_cast<std::size_t>(ti)];
      }
      out[i] = 2.0 * j * val;
    }
    return out;
  }
};

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

// Projection with mixed weights: zero-weight coordinates decouple from the
// hyperplane and just clamp at zero.
std::vector<double> project_mixed(const std::vector<double>& v, const std::vector<double>& w) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) pos.push_back(i);
  }
  std::vector<double> out(v.size(), 0.0);
  if (pos.size() == v.size()) {
    return project_weighted_simplex(v, w);
  }
  std::vector<double> sub_v(pos.size()), sub_w(pos.size());
  for (std::size_t t = 0; t < pos.size(); ++t) {
    sub_v[t] = v[pos[t]];
    sub_w[t] = w[pos[t]];
  }
  const std::vector<double> sub = project_weighted_simplex(std::move(sub_v), sub_w);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i]);
  for (std::size_t t = 0; t < pos.size(); ++t) out[pos[t]] = sub[t];
  return out;
}

// Relative first-order residual of min N_j s.t. h in weighted simplex.
// lambda is pinned to 2j*N(h), its exact value at the optimum.
double kkt_residual(const Engine& eng, const std::vector<double>& h,
                    const std::vector<double>& g, double n_val) {
  const double lam = 2.0 * eng.j * n_val;
  double scale = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    scale = std::max(scale, std::max(std::abs(g[i]), lam * eng.w[i]));
  }
  if (scale == 0.0) return 0.0;
  double res = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double e = g[i] - lam * eng.w[i];
    res = std::max(res, h[i] > 0.0 ? std::abs(e) : std::max(0.0, -e));
  }
  return res / scale;
}

double estimate_lipschitz(const Engine& eng, const std::vector<double>& h,
                          std::uint64_t seed) {
  if (eng.j == 1) return 2.0;
  SplitMix rng(seed ^ 0xa5a5a5a5deadbeefULL);
  std::vector<double> v(eng.nvar());
  for (auto& x : v) x = rng.uniform() - 0.5;
  double lam = 0.0;
  for (int it = 0; it < 25; ++it) {
    std::vector<double> hv = eng.hessian_vec(h, v);
    double norm = std::sqrt(std::inner_product(hv.begin(), hv.end(), hv.begin(), 0.0));
    if (norm == 0.0) break;
    lam = norm;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = hv[i] / norm;
  }
  return std::max(lam, 1e-300);
}

struct CoreResult {
  std::vector<double> h;
  int iters = 0;
  double kkt = 0.0;
  bool converged = false;
};

CoreResult minimize_on_simplex(const Engine& eng, const SolverConfig& cfg,
                               const std::vector<double>& h0, const IterObserver& observer) {
  CoreResult res;
  std::vector<double> h = project_mixed(h0, eng.w);
  std::vector<double> g;
  double n_val = eng.objective_grad(h, g);
  if (observer) observer(h, n_val);

  const double lhat = estimate_lipschitz(eng, h, cfg.seed);
  double alpha = 1.0 / lhat;
  const double alpha_floor = 1e-12 / lhat;
  const double alpha_cap = 1e12 / lhat;
  std::vector<double> h_prev, g_prev;

  std::vector<double> best_h = h;
  double best_kkt = kkt_residual(eng, h, g, n_val);
  int best_iter = 0;

  for (int it = 0; it < cfg.max_iters; ++it) {
    const double kkt = kkt_residual(eng, h, g, n_val);
    if (kkt < best_kkt) {
      best_kkt = kkt;
      best_h = h;
      best_iter = it;
    }
    if (best_kkt <= cfg.kkt_tol) break;
    if (it - best_iter > 500) break;  // stationarity stalled at the fp floor

    // Barzilai-Borwein trial step, safeguarded; Armijo keeps descent monotone
    // up to round-off noise in the objective.
    if (!h_prev.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double s = h[i] - h_prev[i];
        ss += s * s;
        sy += s * (g[i] - g_prev[i]);
      }
      alpha = sy > 0.0 ? std::clamp(ss / sy, alpha_floor, alpha_cap)
                       : std::min(alpha * cfg.step_grow, alpha_cap);
    }

    constexpr double kArmijo = 1e-4;
    const double noise = 32.0 * std::numeric_limits<double>::epsilon() * std::abs(n_val);
    std::vector<double> y;
    double n_trial = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      std::vector<double> step(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) step[i] = h[i] - alpha * g[i];
      y = project_mixed(step, eng.w);
      double decr = 0.0;
      bool moved = false;
      for (std::size_t i = 0; i < h.size(); ++i) {
        decr += g[i] * (y[i] - h[i]);
        moved = moved || y[i] != h[i];
      }
      if (!moved) break;
      n_trial = eng.objective(y);
      if (n_trial <= n_val + kArmijo * decr + noise) {
        accepted = true;
        break;
      }
      alpha *= cfg.step_shrink;
      if (alpha < alpha_floor) break;
    }
    if (!accepted) {
      // Backtracking cannot certify decrease once objective differences sit
      // below round-off; fall back to the safe step 1/L, whose descent is
      // guaranteed without measuring it, and keep polishing the fixed point.
      alpha = 1.0 / lhat;
      std::vector<double> step(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) step[i] = h[i] - alpha * g[i];
      y = project_mixed(step, eng.w);
      bool moved = false;
      for (std::size_t i = 0; i < h.size(); ++i) moved = moved || y[i] != h[i];
      if (!moved) break;  // exact fixed point of the gradient mapping
    }

    h_prev = std::move(h);
    g_prev = std::move(g);
    h = std::move(y);
    n_val = eng.objective_grad(h, g);
    res.iters = it + 1;
    if (observer) observer(h, n_val);
  }
  {
    const double kkt = kkt_residual(eng, h, g, n_val);
    if (kkt < best_kkt) {
      best_kkt = kkt;
      best_h = std::move(h);
    }
  }
  res.kkt = best_kkt;
  res.converged = best_kkt <= cfg.kkt_tol;
  res.h = std::move(best_h);
  return res;
}

Engine make_engine(const Problem& problem, std::int64_t pad) {
  Engine eng;
  eng.j = problem.j;
  const std::int64_t lo = problem.support.front() - pad;
  const std::int64_t hi = problem.support.back() + pad;
  eng.win_start = lo;
  eng.win_len = hi - lo + 1;
  if (pad == 0) {
    for (std::size_t i = 0; i < problem.support.size(); ++i) {
      eng.var_off.push_back(problem.support[i] - lo);
      eng.w.push_back(problem.abs_c[i]);
    }
  } else {
    // every window index is a variable; weight |c(n)| on S, zero elsewhere
    std::size_t si = 0;
    for (std::int64_t n = lo; n <= hi; ++n) {
      eng.var_off.push_back(n - lo);
      if (si < problem.support.size() && problem.support[si] == n) {
        eng.w.push_back(problem.abs_c[si]);
        ++si;
      } else {
        eng.w.push_back(0.0);
      }
    }
  }
  return eng;
}

Solution trivial_solution() {
  Solution sol;
  sol.converged = true;
  return sol;
}

Solution assemble(const Problem& problem, const Engine& eng, CoreResult core) {
  Solution sol;
  const int j = problem.j;
  const double n_h = eng.objective(core.h);
  const double t = std::pow(problem.norm_a / n_h, 1.0 / (2.0 * j));
  std::vector<double> bw(static_cast<std::size_t>(eng.win_len), 0.0);
  for (std::size_t i = 0; i < eng.nvar(); ++i) {
    bw[static_cast<std::size_t>(eng.var_off[i])] = t * core.h[i];
  }
  sol.b = SeqZ(eng.win_start, std::move(bw));
  sol.N = norm_2j_pow_direct(sol.b, j);
  sol.M = phi(sol.b, problem);
  sol.r = sol.M > 0.0 ? sol.N / sol.M : 1.0;
  sol.lambda = 2.0 * j * sol.r;
  sol.Fhat = majorant_coeffs(sol.b, j);
  sol.FhatMin = sol.Fhat * cplx(1.0 / sol.r, 0.0);
  sol.iters = core.iters;
  sol.kkt_residual = core.kkt;
  sol.converged = core.converged;
  return sol;
}

std::vector<double> default_init(const Engine& eng) {
  double denom = 0.0;
  for (double wi : eng.w) denom += wi * wi;
  std::vector<double> h0(eng.nvar(), 0.0);
  for (std::size_t i = 0; i < eng.nvar(); ++i) h0[i] = eng.w[i] / denom;
  return h0;
}

}  // namespace

namespace {

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.support_eps > 0.0) || !(cfg.kkt_tol > 0.0)) {
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  }
  if (!(cfg.step_shrink > 0.0 && cfg.step_shrink < 1.0 && cfg.step_grow > 1.0)) {
    throw std::invalid_argument("SolverConfig: need 0 < step_shrink < 1 < step_grow");
  }
  if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
}

}  // namespace

Problem derive_target(const SeqZ& a, int j, const SolverConfig& cfg) {
  if (j < 1) throw std::invalid_argument("derive_target: j must be >= 1");
  validate_config(cfg);
  if (a.width() > kMaxWindow) {
    throw std::invalid_argument("derive_target: input window exceeds cap");
  }
  Problem p;
  p.j = j;
  p.a = a;
  if (a.is_zero()) {
    p.trivial = true;
    return p;
  }
  p.c = convolve(a, conv_power(convolve(involute(a), a), j - 1));
  const double max_c = p.c.max_abs();
  const double thresh = cfg.support_eps * max_c;
  for (std::int64_t n = p.c.start(); n <= p.c.last(); ++n) {
    const double mag = std::abs(p.c.at(n));
    if (mag > thresh) {
      p.support.push_back(n);
      p.abs_c.push_back(mag);
    }
    if (mag > thresh * 1e-2 && mag <= thresh * 1e2) p.borderline.push_back(n);
  }
  p.norm_a = norm_2j_pow(a, j);
  if (!std::isfinite(p.norm_a) || p.norm_a <= 0.0) {
    throw std::invalid_argument("derive_target: N_j(a) over- or underflows double range");
  }
  return p;
}

double phi(const SeqZ& b, const Problem& problem) {
  if (!b.is_real()) throw std::invalid_argument("phi: b must be real-valued");
  double s = 0.0;
  for (std::size_t i = 0; i < problem.support.size(); ++i) {
    s += b.at(problem.support[i]).real() * problem.abs_c[i];
  }
  return s;
}

std::vector<double> project_weighted_simplex(std::vector<double> v,
                                             const std::vector<double>& w) {
  const std::size_t n = v.size();
  if (w.size() != n) throw std::invalid_argument("project_weighted_simplex: size mismatch");
  for (double wi : w) {
    if (!(wi > 0.0)) throw std::invalid_argument("project_weighted_simplex: weights must be positive");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t k) { return v[i] / w[i] > v[k] / w[k]; });
  double acc_wv = 0.0, acc_w2 = 0.0, lambda = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = order[t];
    const double cand_wv = acc_wv + w[i] * v[i];
    const double cand_w2 = acc_w2 + w[i] * w[i];
    const double cand_lambda = (cand_wv - 1.0) / cand_w2;
    if (v[i] / w[i] > cand_lambda) {
      acc_wv = cand_wv;
      acc_w2 = cand_w2;
      lambda = cand_lambda;
    } else {
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(0.0, v[i] - lambda * w[i]);
  return v;
}

SeqZ grad_norm(const SeqZ& b, int j) {
  if (!b.is_real()) throw std::invalid_argument("grad_norm: b must be real-valued");
  return majorant_coeffs(b, j) * cplx(2.0 * j, 0.0);
}

Solution solve(const Problem& problem, const SolverConfig& cfg, const IterObserver& observer) {
  validate_config(cfg);
  if (problem.trivial || problem.support.empty()) return trivial_solution();
  const Engine eng = make_engine(problem, 0);
  return assemble(problem, eng, minimize_on_simplex(eng, cfg, default_init(eng), observer));
}

Solution solve_from(const Problem& problem, const SolverConfig& cfg, std::vector<double> h0,
                    const IterObserver& observer) {
  validate_config(cfg);
  if (problem.trivial || problem.support.empty()) return trivial_solution();
  const Engine eng = make_engine(problem, 0);
  if (h0.size() != eng.nvar()) throw std::invalid_argument("solve_from: h0 size mismatch");
  return assemble(problem, eng, minimize_on_simplex(eng, cfg, std::move(h0), observer));
}

Solution solve_enlarged(const Problem& problem, const SolverConfig& cfg, std::int64_t pad) {
  validate_config(cfg);
  if (pad < 0) throw std::invalid_argument("solve_enlarged: pad must be >= 0");
  if (problem.trivial || problem.support.empty()) return trivial_solution();
  const Engine eng = make_engine(problem, pad);
  std::vector<double> h0(eng.nvar(), 0.0);
  double denom = 0.0;
  for (double wi : eng.w) denom += wi * wi;
  for (std::size_t i = 0; i < eng.nvar(); ++i) h0[i] = eng.w[i] / denom;
  return assemble(problem, eng, minimize_on_simplex(eng, cfg, std::move(h0), {}));
}

SeqZ minimal_majorant(const Solution& sol) {
  if (!sol.converged) throw std::invalid_argument("minimal_majorant: solution did not converge");
  return sol.FhatMin;
}

SeqZ alternative_majorant(const Solution& sol, const SeqZ& h, const Problem& problem) {
  constexpr double kRatioTol = 1e-9;
  if (sol.r <= 1.0 + kRatioTol) {
    throw std::domain_error("alternative_majorant: r <= 1, no slack to add mass");
  }
  if (h.is_zero()) throw std::invalid_argument("alternative_majorant: h must be nonzero");
  if (!h.is_real()) throw std::invalid_argument("alternative_majorant: h must be real");
  for (cplx z : h.coeffs()) {
    if (z.real() < 0.0) throw std::invalid_argument("alternative_majorant: h must be nonnegative");
  }

  const int j = problem.j;
  const double p = 2.0 * j / (2.0 * j - 1.0);
  const std::int64_t grid = 1 << 15;
  const double target = pnorm_grid(problem.c, p, grid);

  const auto norm_at = [&](double s) { return pnorm_grid(sol.FhatMin + h * cplx(s, 0.0), p, grid); };

  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (norm_at(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("alternative_majorant: bisection bracket failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = norm_at(mid);
    if (std::abs(val - target) <= 1e-10 * target) {
      lo = hi = mid;
      break;
    }
    (val < target ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  if (std::abs(norm_at(s) - target) > 1e-9 * target) {
    throw std::runtime_error("alternative_majorant: bisection failed to meet tolerance");
  }
  return sol.FhatMin + h * cplx(s, 0.0);
}

}  // namespace majorant
