// Command-line front end: solve for the matched-norm majorant of a sequence,
// verify solutions, test Sidon supports, report exactness gaps, and run
// benchmark sweeps over a corpus directory.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "majorant/io.hpp"
#include "majorant/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitVerifyFail = 4;

using majorant::SeqZ;

void print_seq(const std::string& name, const SeqZ& x) {
  if (x.is_zero()) {
    std::printf("%-8s : (zero)\n", name.c_str());
    return;
  }
  std::printf("%-8s : window [%lld..%lld]\n", name.c_str(), static_cast<long long>(x.start()),
              static_cast<long long>(x.last()));
  for (std::int64_t n = x.start(); n <= x.last(); ++n) {
    const majorant::cplx z = x.at(n);
    if (z.imag() == 0.0) {
      std::printf("  %6lld  % .12g\n", static_cast<long long>(n), z.real());
    } else {
      std::printf("  %6lld  % .12g %+.12gi\n", static_cast<long long>(n), z.real(), z.imag());
    }
  }
}

void print_report(const majorant::Report& rep) {
  const auto flag = [](bool ok) { return ok ? "ok  " : "FAIL"; };
  std::printf("verification:\n");
  std::printf("  nonnegativity  %s  margin % .3e\n", flag(rep.pass_nonneg), rep.nonneg_margin);
  std::printf("  support        %s  leak   % .3e\n", flag(rep.pass_support), rep.support_leak);
  std::printf("  matched norm   %s  gap    % .3e\n", flag(rep.pass_norm), rep.norm_gap);
  std::printf("  majorization   %s  margin % .3e\n", flag(rep.pass_majorization),
              rep.majorization_margin);
  std::printf("  hoelder        %s  margin % .3e\n", flag(rep.pass_hoelder), rep.hoelder_margin);
  std::printf("  upper majorant %s  margin % .3e\n", flag(rep.pass_upper_majorant),
              rep.upper_majorant_margin);
  std::printf("  ratio r = %.12g\n", rep.ratio);
}

int cmd_majorize(const std::string& input, const std::string& out_path, double tol,
                 int max_iters, std::uint64_t seed) {
  majorant::SequenceFile file;
  try {
    file = majorant::load_sequence_file(input);
  } catch (const majorant::parse_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  }
  majorant::SolverConfig cfg;
  cfg.max_iters = max_iters;
  cfg.seed = seed;

  std::printf("# seed=%llu\n", static_cast<unsigned long long>(seed));
  majorant::Problem problem;
  try {
    problem = majorant::derive_target(file.seq, file.j, cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  }
  std::printf("j = %d, |S| = %zu, N_j(a) = %.17g\n", problem.j, problem.support.size(),
              problem.norm_a);
  for (std::int64_t n : problem.borderline) {
    std::printf("note: |c(%lld)| is within a factor 100 of the support threshold\n",
                static_cast<long long>(n));
  }

  const majorant::Solution sol = majorant::solve(problem, cfg);
  std::printf("iterations = %d, kkt_residual = %.3e, converged = %s\n", sol.iters,
              sol.kkt_residual, sol.converged ? "yes" : "no");
  std::printf("M = Phi(b) = %.17g\n", sol.M);
  std::printf("N = N_j(b) = %.17g\n", sol.N);
  std::printf("r = N/M    = %.17g\n", sol.r);
  print_seq("b", sol.b);
  print_seq("Fhat", sol.Fhat);
  print_seq("FhatMin", sol.FhatMin);

  const majorant::Report rep = majorant::verify_solution(problem, sol, tol);
  print_report(rep);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::fprintf(stderr, "input error: cannot write %s\n", out_path.c_str());
      return kExitInput;
    }
    out << majorant::solution_to_json(sol, problem.j, seed).dump(2) << "\n";
  }
  if (!sol.converged) return kExitNoConverge;
  if (!rep.passed) return kExitVerifyFail;
  return kExitOk;
}

int cmd_verify(const std::string& sol_path, const std::string& prob_path, double tol,
               std::uint64_t seed) {
  SeqZ b;
  majorant::SequenceFile file;
  try {
    b = majorant::load_solution_b(sol_path);
    file = majorant::load_sequence_file(prob_path);
  } catch (const majorant::parse_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  }
  std::printf("# seed=%llu\n", static_cast<unsigned long long>(seed));
  const majorant::Problem problem = majorant::derive_target(file.seq, file.j);
  majorant::Solution sol;
  sol.b = b;
  sol.Fhat = majorant::majorant_coeffs(b, problem.j);
  const majorant::Report rep = majorant::verify_solution(problem, sol, tol);
  print_report(rep);
  std::printf("%s\n", rep.passed ? "PASS" : "FAIL");
  return rep.passed ? kExitOk : kExitVerifyFail;
}

int cmd_sidon(const std::string& list, int j) {
  std::vector<std::int64_t> set;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      set.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      std::fprintf(stderr, "input error: bad index '%s'\n", tok.c_str());
      return kExitInput;
    }
  }
  try {
    std::printf("%s\n", majorant::is_sidon_bj(set, j) ? "true" : "false");
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}

int cmd_gap(const std::string& input) {
  majorant::SequenceFile file;
  try {
    file = majorant::load_sequence_file(input);
  } catch (const majorant::parse_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  }
  const double gap = majorant::exactness_gap(file.seq, file.j);
  const double scale = majorant::norm_2j_pow_direct(majorant::abs_seq(file.seq), file.j);
  std::printf("exactness_gap = %.17g\n", gap);
  std::printf("predicted: %s\n", gap <= 1e-10 * scale ? "r = 1 (exact majorant)" : "r > 1");
  return kExitOk;
}

int cmd_bench(const std::string& dir, int workers, std::uint64_t seed) {
  namespace fs = std::filesystem;
  std::vector<fs::path> inputs;
  try {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        inputs.push_back(entry.path());
      }
    }
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  }
  std::sort(inputs.begin(), inputs.end());

  struct Row {
    std::string name;
    std::size_t card_s = 0;
    int j = 0;
    int iters = 0;
    double kkt = 0.0;
    double r = 0.0;
    double wall_ms = 0.0;
    bool ok = false;
    std::string error;
  };
  std::vector<Row> rows(inputs.size());

  std::atomic<std::size_t> cursor{0};
  const auto work = [&]() {
    for (std::size_t i = cursor.fetch_add(1); i < inputs.size(); i = cursor.fetch_add(1)) {
      Row& row = rows[i];
      row.name = inputs[i].filename().string();
      try {
        const majorant::SequenceFile file = majorant::load_sequence_file(inputs[i].string());
        majorant::SolverConfig cfg;
        cfg.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        const majorant::Problem problem = majorant::derive_target(file.seq, file.j, cfg);
        const majorant::Solution sol = majorant::solve(problem, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        row.card_s = problem.support.size();
        row.j = problem.j;
        row.iters = sol.iters;
        row.kkt = sol.kkt_residual;
        row.r = sol.r;
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::printf("# seed=%llu\n", static_cast<unsigned long long>(seed));
  std::printf("instance,card_S,j,iters,kkt_residual,r,wall_ms\n");
  for (const Row& row : rows) {
    if (!row.ok) {
      std::fprintf(stderr, "input error: %s: %s\n", row.name.c_str(), row.error.c_str());
      return kExitInput;
    }
    std::printf("%s,%zu,%d,%d,%.3e,%.12g,%.3f\n", row.name.c_str(), row.card_s, row.j, row.iters,
                row.kkt, row.r, row.wall_ms);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matched-norm Fourier majorants on the integers"};
  app.require_subcommand(1);

  std::string input, out_path, sol_path, prob_path, set_list, dir;
  double tol = 1e-7;
  int max_iters = 50000;
  std::uint64_t seed = 0;
  int j = 1;
  int workers = 1;

  auto* majorize = app.add_subcommand("majorize", "solve for the matched-norm majorant");
  majorize->add_option("file", input, "sequence JSON file")->required();
  majorize->add_option("--out", out_path, "write the solution JSON here");
  majorize->add_option("--tol", tol, "verification tolerance");
  majorize->add_option("--max-iters", max_iters, "iteration cap");
  majorize->add_option("--seed", seed, "random seed");

  auto* verify = app.add_subcommand("verify", "re-verify a stored solution");
  verify->add_option("solution", sol_path, "solution JSON file")->required();
  verify->add_option("problem", prob_path, "problem sequence JSON file")->required();
  verify->add_option("--tol", tol, "verification tolerance");
  verify->add_option("--seed", seed, "random seed (echoed)");

  auto* sidon = app.add_subcommand("sidon", "test whether an index set is Sidon B_j");
  sidon->add_option("set", set_list, "comma-separated integers, e.g. 0,1,3")->required();
  sidon->add_option("--j", j, "order j")->required();

  auto* gap = app.add_subcommand("gap", "exactness gap N_j(|a|) - N_j(a)");
  gap->add_option("file", input, "sequence JSON file")->required();

  auto* bench = app.add_subcommand("bench", "solve every *.json in a directory, CSV to stdout");
  bench->add_option("dir", dir, "corpus directory")->required();
  bench->add_option("--workers", workers, "parallel workers");
  bench->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (majorize->parsed()) return cmd_majorize(input, out_path, tol, max_iters, seed);
    if (verify->parsed()) return cmd_verify(sol_path, prob_path, tol, seed);
    if (sidon->parsed()) return cmd_sidon(set_list, j);
    if (gap->parsed()) return cmd_gap(input);
    if (bench->parsed()) return cmd_bench(dir, workers, seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
