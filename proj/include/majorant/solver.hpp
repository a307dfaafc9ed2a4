#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "majorant/seq.hpp"

namespace majorant {

struct SolverConfig {
  double support_eps = 1e-12;  // support threshold, relative to max |c(n)|
  double kkt_tol = 1e-12;      // first-order stationarity tolerance (relative)
  double step_shrink = 0.5;    // backtracking factor
  double step_grow = 2.0;      // step recovery factor between iterations
  int max_iters = 50000;
  int restarts = 5;            // random restarts used by the uniqueness probe
  std::uint64_t seed = 0;
};

/// The variational problem of the matched-norm majorant: order j, input a,
/// derived target c = a*(a~*a)^{*(j-1)}, feasible index set S = supp(c).
struct Problem {
  int j = 1;
  SeqZ a;
  SeqZ c;
  std::vector<std::int64_t> support;     // S, sorted ascending
  std::vector<double> abs_c;             // |c(n)| for n in S
  std::vector<std::int64_t> borderline;  // indices with |c(n)| within 100x of the threshold
  double norm_a = 0.0;                   // N_j(a)
  bool trivial = false;                  // a == 0
};

struct Solution {
  SeqZ b;                     // optimizer: real, nonnegative, supported on S
  double M = 0.0;             // Phi(b) = sum b(n)|c(n)|
  double N = 0.0;             // N_j(b)
  double r = 1.0;             // N / M  (>= 1 at optimality)
  SeqZ Fhat;                  // (b*b~)^{*(j-1)}*b, the matched-norm majorant
  SeqZ FhatMin;               // Fhat / r, the minimal majorant
  int iters = 0;
  double kkt_residual = 0.0;  // relative stationarity residual at exit
  bool converged = true;
  double lambda = 0.0;        // hyperplane multiplier 2j*N/M
};

/// Observer invoked once per accepted iterate with the feasible point h
/// (values over the solver's variable index set) and N_j(h).
using IterObserver = std::function<void(const std::vector<double>&, double)>;

Problem derive_target(const SeqZ& a, int j, const SolverConfig& cfg = {});

/// Phi objective: sum over S of b(n)|c(n)|. Requires b real-valued.
double phi(const SeqZ& b, const Problem& problem);

/// Euclidean projection of v onto { h >= 0 : sum w(n) h(n) = 1 }, all
/// w(n) > 0, by the sort-and-threshold method. Exact for the returned
/// active set: entries off it are exact zeros.
std::vector<double> project_weighted_simplex(std::vector<double> v,
                                             const std::vector<double>& w);

/// Exact gradient of h -> N_j(h) at real nonnegative b along real coordinate
/// perturbations: 2j * majorant_coeffs(b, j).
SeqZ grad_norm(const SeqZ& b, int j);

/// Minimize N_j over the weighted simplex {h >= 0, supp(h) in S, Phi(h) = 1}
/// by projected gradient descent with Armijo backtracking, then rescale so
/// N_j(b) = N_j(a).
Solution solve(const Problem& problem, const SolverConfig& cfg = {},
               const IterObserver& observer = {});

/// As solve, but starting from h0 (values over S; must be feasible or it is
/// projected first). Used by the uniqueness probe.
Solution solve_from(const Problem& problem, const SolverConfig& cfg,
                    std::vector<double> h0, const IterObserver& observer = {});

/// As solve, but with the variable window enlarged by pad indices on each
/// side of S (zero objective weight there, coefficients free nonnegative).
/// The optimizer provably vanishes on the padding; the returned b keeps any
/// numerical leak so callers can measure it.
Solution solve_enlarged(const Problem& problem, const SolverConfig& cfg,
                        std::int64_t pad);

/// The unique minimal-norm majorant coefficients, Fhat / r.
SeqZ minimal_majorant(const Solution& sol);

/// A same-norm majorant different from Fhat: FhatMin + s*h with s > 0 chosen
/// by bisection so the L^{2j/(2j-1)} grid norm matches that of c. Requires
/// r > 1 and h nonzero, real, coefficient-wise nonnegative.
SeqZ alternative_majorant(const Solution& sol, const SeqZ& h, const Problem& problem);

}  // namespace majorant
