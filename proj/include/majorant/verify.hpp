#pragma once

#include <cstdint>
#include <vector>

#include "majorant/solver.hpp"

namespace majorant {

/// Signed margins and pass flags for the four majorant conclusions plus the
/// auxiliary inequality checks. Margins are recomputed from scratch through
/// the direct-convolution path only.
struct Report {
  double nonneg_margin = 0.0;         // min over the window of b(n)
  double support_leak = 0.0;          // max |b(n)| outside S
  double norm_gap = 0.0;              // |N_j(b) - N_j(a)| / N_j(a)
  double majorization_margin = 0.0;   // min over S of (Fhat(n) - |c(n)|) / max|c|
  double hoelder_margin = 0.0;        // RHS - LHS with k = b
  double upper_majorant_margin = 0.0; // N_j(Fhat) - N_j(c)
  double ratio = 1.0;                 // N_j(b) / Phi(b)

  bool pass_nonneg = false;
  bool pass_support = false;
  bool pass_norm = false;
  bool pass_majorization = false;
  bool pass_hoelder = false;
  bool pass_upper_majorant = false;
  bool passed = false;  // the four main conclusions
};

Report verify_solution(const Problem& problem, const Solution& sol, double tol = 1e-7);

/// RHS - LHS of the convolution Hoelder inequality
///   |[k~ * (a*a~)^{*(j-1)} * a](0)|
///     <= [(k~*k)^{*j}(0)]^{1/2j} [(a~*a)^{*j}(0)]^{(2j-1)/2j}.
double check_hoelder(const SeqZ& a, const SeqZ& k, int j);

/// N_j(b) - N_j(d) for real b with b(n) >= |d(n)| everywhere; nonnegative by
/// the even-exponent monotonicity of majorization.
double check_upper_majorant(const SeqZ& b, const SeqZ& d, int j);

/// True iff every j-fold sum of elements of S has a unique representation
/// modulo permutation of the summands. Exact integer enumeration;
/// |S| <= 24 and j <= 4.
bool is_sidon_bj(const std::vector<std::int64_t>& s, int j);

/// N_j(|a|) - N_j(a), clamped at zero from below. Zero gap predicts r = 1
/// and b = |a|.
double exactness_gap(const SeqZ& a, int j);

/// Brute-force minimizer of N_j on the weighted simplex: barycentric grid
/// search (grid_density points per free coordinate) followed by pairwise
/// coordinate descent with golden-section line minimization. |S| <= 4.
SeqZ oracle_solve(const Problem& problem, int grid_density);

/// Max pairwise sup-norm distance between rescaled optimizers found from
/// cfg.restarts random feasible starts. converged_runs, when given, receives
/// the number of restarts that met the stationarity tolerance.
double uniqueness_probe(const Problem& problem, const SolverConfig& cfg,
                        int* converged_runs = nullptr);

}  // namespace majorant
