#include "majorant/solver.hpp"

#include <cmath>

#include "doctest.h"
#include "support.hpp"

using majorant::cplx;
using majorant::Problem;
using majorant::SeqZ;
using majorant::Solution;
using majorant::SolverConfig;
using testsup::Rng;

namespace {

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

double sup_dist(const SeqZ& x, const SeqZ& y) {
  if (x.is_zero() && y.is_zero()) return 0.0;
  const std::int64_t lo = std::min(x.is_zero() ? y.start() : x.start(),
                                   y.is_zero() ? x.start() : y.start());
  const std::int64_t hi = std::max(x.is_zero() ? y.last() : x.last(),
                                   y.is_zero() ? x.last() : y.last());
  double m = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) m = std::max(m, std::abs(x.at(n) - y.at(n)));
  return m;
}

SeqZ random_instance(std::uint64_t seed, std::uint64_t idx, std::int64_t max_width = 8) {
  Rng rng = Rng::stream(seed, idx);
  return testsup::random_seq(rng, rng.range(1, max_width), rng.uniform() < 0.5,
                             rng.range(-4, 4));
}

}  // namespace

TEST_CASE("derive_target: frozen examples") {
  SUBCASE("signed three-point input") {
    const SeqZ a(0, std::vector<double>{1.0, -1.0, 1.0});
    const Problem p = derive_target(a, 2);
    CHECK(p.c == SeqZ(-2, std::vector<double>{1.0, -3.0, 6.0, -7.0, 6.0, -3.0, 1.0}));
    CHECK(p.support.size() == 7);
    CHECK(p.norm_a == doctest::Approx(19.0).epsilon(1e-12));
  }
  SUBCASE("single spike") {
    const Problem p = derive_target(SeqZ::delta(5, 2.0), 2);
    CHECK(p.c == SeqZ::delta(5, 8.0));
    CHECK(p.support == std::vector<std::int64_t>{5});
    CHECK(p.norm_a == doctest::Approx(16.0).epsilon(1e-12));
  }
  SUBCASE("j = 1 keeps the input") {
    for (int t = 0; t < 10; ++t) {
      const SeqZ a = random_instance(3, static_cast<std::uint64_t>(t));
      const Problem p = derive_target(a, 1);
      CHECK(p.c == a);
    }
  }
  SUBCASE("zero input is trivial") {
    const Problem p = derive_target(SeqZ{}, 3);
    CHECK(p.trivial);
    CHECK(p.support.empty());
  }
  SUBCASE("window cap is enforced") {
    std::vector<double> wide(static_cast<std::size_t>(majorant::kMaxWindow + 1), 1.0);
    CHECK_THROWS_AS((void)derive_target(SeqZ(0, std::move(wide)), 2), std::invalid_argument);
  }
  SUBCASE("norms outside double range are rejected") {
    CHECK_THROWS_AS((void)derive_target(SeqZ::delta(0, 1e200), 2), std::invalid_argument);
    CHECK_THROWS_AS((void)derive_target(SeqZ::delta(0, 1e-200), 2), std::invalid_argument);
  }
}

TEST_CASE("phi: direct sums") {
  const SeqZ a(0, std::vector<double>{3.0, 4.0});
  const Problem p = derive_target(a, 1);  // c = a, |c| = (3,4)
  CHECK(phi(SeqZ(0, std::vector<double>{1.0, 2.0}), p) == doctest::Approx(11.0));
  CHECK(phi(SeqZ{}, p) == 0.0);
  CHECK(phi(majorant::abs_seq(a), p) == doctest::Approx(25.0));
  CHECK_THROWS_AS((void)phi(SeqZ(0, std::vector<cplx>{{0.0, 1.0}}), p), std::invalid_argument);
}

TEST_CASE("project_weighted_simplex: frozen examples and KKT structure") {
  using majorant::project_weighted_simplex;
  const std::vector<double> ones{1.0, 1.0};

  auto p1 = project_weighted_simplex({0.3, 0.9}, ones);
  CHECK(p1[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(p1[1] == doctest::Approx(0.8).epsilon(1e-14));

  auto p2 = project_weighted_simplex({-0.5, 1.2}, ones);
  CHECK(p2[0] == 0.0);
  CHECK(p2[1] == doctest::Approx(1.0).epsilon(1e-14));

  auto p3 = project_weighted_simplex({0.25, 0.75}, ones);  // already feasible
  CHECK(p3[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p3[1] == doctest::Approx(0.75).epsilon(1e-14));

  CHECK_THROWS_AS((void)project_weighted_simplex({1.0}, {0.0}), std::invalid_argument);

  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(41, static_cast<std::uint64_t>(t));
    const std::size_t n = static_cast<std::size_t>(rng.range(1, 12));
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = 4.0 * rng.uniform() - 2.0;
      w[i] = 0.1 + 3.0 * rng.uniform();
    }
    const std::vector<double> x = project_weighted_simplex(v, w);

    double feas = 0.0, lambda = 0.0;
    bool lambda_set = false;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(x[i] >= 0.0);
      feas += w[i] * x[i];
      if (x[i] > 0.0 && !lambda_set) {
        lambda = (v[i] - x[i]) / w[i];
        lambda_set = true;
      }
    }
    CHECK(feas == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(lambda_set);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] > 0.0) {
        CHECK(std::abs(v[i] - lambda * w[i] - x[i]) <= 1e-10 * (1.0 + std::abs(v[i])));
      } else {
        CHECK(v[i] - lambda * w[i] <= 1e-10 * (1.0 + std::abs(v[i])));
      }
    }

    // projecting the projection is a fixed point
    const std::vector<double> x2 = project_weighted_simplex(x, w);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x2[i] - x[i]) <= 1e-12);
  }
}

TEST_CASE("grad_norm: closed forms and finite differences") {
  SUBCASE("j = 1 doubles the input") {
    const SeqZ b(0, std::vector<double>{0.5, 2.0, 1.0});
    CHECK(grad_norm(b, 1) == b * cplx(2.0, 0.0));
  }
  SUBCASE("single spike") {
    const double alpha = 1.3;
    const SeqZ g = grad_norm(SeqZ::delta(2, alpha), 2);
    CHECK(g.width() == 1);
    CHECK(g.at(2).real() == doctest::Approx(4.0 * alpha * alpha * alpha).epsilon(1e-14));
  }
  SUBCASE("central finite differences") {
    for (int t = 0; t < 25; ++t) {
      Rng rng = Rng::stream(43, static_cast<std::uint64_t>(t));
      const int j = 1 + static_cast<int>(rng.range(0, 2));
      std::vector<double> vals(static_cast<std::size_t>(rng.range(1, 7)));
      for (auto& v : vals) v = 0.2 + rng.uniform();
      const SeqZ b(rng.range(-3, 3), vals);
      const SeqZ g = grad_norm(b, j);
      const double h = 1e-5;
      for (std::int64_t n = b.start() - 1; n <= b.last() + 1; ++n) {
        const SeqZ up = b + SeqZ::delta(n, h);
        const SeqZ dn = b + SeqZ::delta(n, -h);
        const double fd =
            (norm_2j_pow_direct(up, j) - norm_2j_pow_direct(dn, j)) / (2.0 * h);
        const double scale = std::max(1.0, std::abs(fd));
        CHECK(std::abs(g.at(n).real() - fd) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("solve: j = 1 returns the exact majorant") {
  for (int t = 0; t < 25; ++t) {
    const SeqZ a = random_instance(47, static_cast<std::uint64_t>(t));
    const Problem p = derive_target(a, 1);
    const Solution sol = solve(p);
    CHECK(sol.converged);
    CHECK(sup_dist(sol.b, majorant::abs_seq(a)) <= 1e-12 * std::max(1.0, a.max_abs()));
    CHECK(std::abs(sol.r - 1.0) <= 1e-12);
  }
}

TEST_CASE("solve: single spike") {
  const Problem p = derive_target(SeqZ::delta(5, 2.0), 2);
  const Solution sol = solve(p);
  CHECK(sol.converged);
  CHECK(sup_dist(sol.b, SeqZ::delta(5, 2.0)) <= 1e-12);
  CHECK(sup_dist(sol.Fhat, SeqZ::delta(5, 8.0)) <= 1e-11);
  CHECK(std::abs(sol.r - 1.0) <= 1e-12);
}

TEST_CASE("solve: Sidon support keeps the exact majorant") {
  std::vector<cplx> vals{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
  const SeqZ a(0, std::move(vals));  // support {0,1,3}
  const Problem p = derive_target(a, 2);
  const Solution sol = solve(p);
  CHECK(sol.converged);
  const SeqZ expect(0, std::vector<double>{1.0, 1.0, 0.0, 1.0});
  CHECK(sup_dist(sol.b, expect) <= 1e-7);
  CHECK(std::abs(sol.r - 1.0) <= 1e-7);
}

TEST_CASE("solve: the (1, i, 1) instance") {
  const SeqZ a(0, std::vector<cplx>{{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
  const Problem p = derive_target(a, 2);
  REQUIRE(p.support.size() == 7);
  CHECK(p.norm_a == doctest::Approx(11.0).epsilon(1e-12));

  const Solution sol = solve(p);
  CHECK(sol.converged);
  // independently computed by symmetry reduction + golden section
  CHECK(sol.r == doctest::Approx(1.101999494156786).epsilon(1e-7));
  const SeqZ expect(0, std::vector<double>{1.0739836999, 0.4633287208, 1.0739836999});
  CHECK(sup_dist(sol.b, expect) <= 1e-6);
  CHECK(rel_diff(sol.N, 11.0) <= 1e-10);

  // strengthened majorization: Fhat >= r |c| on S
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    CHECK(sol.Fhat.at(p.support[i]).real() >=
          sol.r * p.abs_c[i] - 1e-8 * p.c.max_abs());
  }
}

TEST_CASE("solve: trivial problem short-circuits") {
  const Problem p = derive_target(SeqZ{}, 2);
  const Solution sol = solve(p);
  CHECK(sol.converged);
  CHECK(sol.b.is_zero());
  CHECK(sol.r == 1.0);
  CHECK(sol.N == 0.0);
}

TEST_CASE("solve: iteration cap reports non-convergence") {
  const SeqZ a(0, std::vector<cplx>{{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
  const Problem p = derive_target(a, 2);
  SolverConfig cfg;
  cfg.max_iters = 1;
  const Solution sol = solve(p, cfg);
  CHECK_FALSE(sol.converged);
  CHECK(sol.kkt_residual > cfg.kkt_tol);
}

TEST_CASE("solve: iterates stay feasible and monotone") {
  for (int t = 0; t < 10; ++t) {
    const SeqZ a = random_instance(53, static_cast<std::uint64_t>(t));
    const int j = 2 + t % 2;
    const Problem p = derive_target(a, j);
    if (p.trivial) continue;

    double prev = 0.0;
    bool first = true;
    const majorant::IterObserver obs = [&](const std::vector<double>& h, double n_val) {
      double feas = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(h[i] >= 0.0);
        feas += h[i] * p.abs_c[i];
      }
      CHECK(std::abs(feas - 1.0) <= 1e-12);
      if (!first) CHECK(n_val <= prev + 1e-12 * std::max(1.0, prev));
      prev = n_val;
      first = false;
    };
    const Solution sol = solve(p, {}, obs);
    CHECK(sol.converged);
  }
}

TEST_CASE("solve: optimality certificate at the returned point") {
  for (int t = 0; t < 20; ++t) {
    const SeqZ a = random_instance(59, static_cast<std::uint64_t>(t));
    const int j = 2 + t % 2;
    const Problem p = derive_target(a, j);
    if (p.trivial) continue;
    const Solution sol = solve(p);
    REQUIRE(sol.converged);

    CHECK(sol.r >= 1.0 - 1e-9);
    const double lambda = 2.0 * j * sol.N / sol.M;
    CHECK(rel_diff(lambda, sol.lambda) <= 1e-12);
    const double gscale = 2.0 * j * sol.Fhat.max_abs();
    for (std::size_t i = 0; i < p.support.size(); ++i) {
      const std::int64_t n = p.support[i];
      const double e = 2.0 * j * sol.Fhat.at(n).real() - lambda * p.abs_c[i];
      CHECK(e >= -1e-7 * gscale);  // dual feasibility (Fhat >= r|c| on S)
      CHECK(std::abs(sol.b.at(n).real() * e) <= 1e-7 * gscale * sol.b.max_abs());
    }
    // strengthened majorization
    for (std::size_t i = 0; i < p.support.size(); ++i) {
      CHECK(sol.Fhat.at(p.support[i]).real() >= sol.r * p.abs_c[i] - 1e-8 * p.c.max_abs());
    }
  }
}

TEST_CASE("norm functional is convex along feasible segments") {
  for (int t = 0; t < 20; ++t) {
    Rng rng = Rng::stream(61, static_cast<std::uint64_t>(t));
    const SeqZ a = random_instance(61, static_cast<std::uint64_t>(t) + 100);
    const int j = 2 + t % 2;
    const Problem p = derive_target(a, j);
    if (p.trivial || p.support.size() < 2) continue;

    const auto rand_feasible = [&]() {
      std::vector<double> h(p.support.size());
      double denom = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] = -std::log(1.0 - rng.uniform());
        denom += h[i] * p.abs_c[i];
      }
      for (double& v : h) v /= denom;
      return h;
    };
    const auto embed_norm = [&](const std::vector<double>& h) {
      std::vector<double> win(static_cast<std::size_t>(p.support.back() - p.support.front() + 1));
      for (std::size_t i = 0; i < h.size(); ++i) {
        win[static_cast<std::size_t>(p.support[i] - p.support.front())] = h[i];
      }
      return norm_2j_pow_direct(SeqZ(p.support.front(), std::move(win)), j);
    };

    const std::vector<double> h1 = rand_feasible(), h2 = rand_feasible();
    const double lam = rng.uniform();
    std::vector<double> mid(h1.size());
    for (std::size_t i = 0; i < h1.size(); ++i) mid[i] = lam * h1[i] + (1.0 - lam) * h2[i];
    const double lhs = embed_norm(mid);
    const double rhs = lam * embed_norm(h1) + (1.0 - lam) * embed_norm(h2);
    CHECK(lhs <= rhs + 1e-10 * std::max(1.0, rhs));
  }
}

TEST_CASE("solve: scaling and modulation equivariance") {
  for (int t = 0; t < 8; ++t) {
    const SeqZ a = random_instance(67, static_cast<std::uint64_t>(t));
    const int j = 2 + t % 2;
    const Problem p = derive_target(a, j);
    if (p.trivial) continue;
    const Solution base = solve(p);
    REQUIRE(base.converged);

    const double scale_factor = 3.0;
    const Solution scaled = solve(derive_target(a * cplx(scale_factor, 0.0), j));
    CHECK(sup_dist(scaled.b, base.b * cplx(scale_factor, 0.0)) <=
          1e-9 * scale_factor * std::max(1.0, base.b.max_abs()));
    CHECK(rel_diff(scaled.r, base.r) <= 1e-9);

    const double alpha = 0.7;
    std::vector<cplx> mod(a.coeffs().begin(), a.coeffs().end());
    for (std::size_t i = 0; i < mod.size(); ++i) {
      const double ang = alpha * static_cast<double>(a.start() + static_cast<std::int64_t>(i));
      mod[i] *= std::polar(1.0, ang);
    }
    const Solution modulated = solve(derive_target(SeqZ(a.start(), std::move(mod)), j));
    CHECK(sup_dist(modulated.b, base.b) <= 1e-9 * std::max(1.0, base.b.max_abs()));
    CHECK(rel_diff(modulated.r, base.r) <= 1e-9);
  }
}

TEST_CASE("solve_enlarged: no mass leaks outside supp(c)") {
  for (int t = 0; t < 10; ++t) {
    const SeqZ a = random_instance(71, static_cast<std::uint64_t>(t));
    const int j = 2 + t % 2;
    const Problem p = derive_target(a, j);
    if (p.trivial) continue;
    const Solution sol = majorant::solve_enlarged(p, {}, 3);
    REQUIRE(sol.converged);
    double leak = 0.0;
    for (std::int64_t n = sol.b.start(); n <= sol.b.last(); ++n) {
      if (!std::binary_search(p.support.begin(), p.support.end(), n)) {
        leak = std::max(leak, std::abs(sol.b.at(n)));
      }
    }
    CHECK(leak <= 1e-8 * std::max(sol.b.max_abs(), 1e-300));
  }
}

TEST_CASE("minimal_majorant and alternative_majorant") {
  const SeqZ a(0, std::vector<cplx>{{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
  const Problem p = derive_target(a, 2);
  const Solution sol = solve(p);
  REQUIRE(sol.converged);
  REQUIRE(sol.r > 1.0 + 1e-6);

  const SeqZ fmin = minimal_majorant(sol);
  CHECK(sup_dist(fmin, sol.Fhat * cplx(1.0 / sol.r, 0.0)) == 0.0);
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    CHECK(fmin.at(p.support[i]).real() >= p.abs_c[i] - 1e-8 * p.c.max_abs());
  }

  SUBCASE("proportional direction recovers Fhat with s = r - 1") {
    const SeqZ alt = alternative_majorant(sol, fmin, p);
    CHECK(sup_dist(alt, sol.Fhat) <= 1e-5 * sol.Fhat.max_abs());
  }

  SUBCASE("a delta direction gives a different same-norm majorant") {
    const SeqZ alt = alternative_majorant(sol, SeqZ::delta(0), p);
    // still majorizes |c| on S
    for (std::size_t i = 0; i < p.support.size(); ++i) {
      CHECK(alt.at(p.support[i]).real() >= p.abs_c[i] - 1e-8 * p.c.max_abs());
    }
    // same grid p-norm as f, but a different sequence than Fhat
    const double pp = 4.0 / 3.0;
    const double target = majorant::pnorm_grid(p.c, pp, 1 << 15);
    CHECK(rel_diff(majorant::pnorm_grid(alt, pp, 1 << 15), target) <= 1e-9);
    CHECK(std::abs(alt.at(0).real() - sol.Fhat.at(0).real()) > 1e-3);
  }

  SUBCASE("rejected when r = 1") {
    const Problem sidon = derive_target(SeqZ(0, std::vector<double>{1.0, 1.0}), 2);
    const Solution ssol = solve(sidon);
    REQUIRE(ssol.converged);
    CHECK_THROWS_AS((void)alternative_majorant(ssol, SeqZ::delta(0), sidon), std::domain_error);
  }
}

TEST_CASE("minimal_majorant requires convergence") {
  Solution sol;
  sol.converged = false;
  CHECK_THROWS_AS((void)minimal_majorant(sol), std::invalid_argument);
}
