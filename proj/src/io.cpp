#include "majorant/io.hpp"

#include <fstream>

namespace majorant {

namespace {

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return doc;
}

}  // namespace

SeqZ seq_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw parse_error("coeffs must be an array");
  std::vector<std::int64_t> idx;
  std::vector<cplx> vals;
  for (const auto& rec : arr) {
    if (!rec.is_object() || !rec.contains("n") || !rec.contains("re") || !rec.contains("im")) {
      throw parse_error("coefficient records need integer n and numeric re, im");
    }
    if (!rec["n"].is_number_integer() || !rec["re"].is_number() || !rec["im"].is_number()) {
      throw parse_error("coefficient records need integer n and numeric re, im");
    }
    const std::int64_t n = rec["n"].get<std::int64_t>();
    if (!idx.empty() && n <= idx.back()) {
      throw parse_error("coefficient indices must be strictly increasing");
    }
    idx.push_back(n);
    vals.emplace_back(rec["re"].get<double>(), rec["im"].get<double>());
  }
  if (idx.empty()) return {};
  const std::int64_t lo = idx.front();
  const std::int64_t width = idx.back() - lo + 1;
  if (width > kMaxWindow) throw parse_error("sequence window exceeds cap");
  std::vector<cplx> dense(static_cast<std::size_t>(width));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    dense[static_cast<std::size_t>(idx[i] - lo)] = vals[i];
  }
  return SeqZ(lo, std::move(dense));
}

nlohmann::json seq_to_json(const SeqZ& x) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::int64_t n = 0; n < x.width(); ++n) {
    const cplx z = x.coeffs()[static_cast<std::size_t>(n)];
    arr.push_back({{"n", x.start() + n}, {"re", z.real()}, {"im", z.imag()}});
  }
  return arr;
}

SequenceFile sequence_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("j") || !doc.contains("coeffs")) {
    throw parse_error("sequence file needs j and coeffs");
  }
  if (!doc["j"].is_number_integer()) throw parse_error("j must be an integer");
  SequenceFile f;
  f.j = doc["j"].get<int>();
  if (f.j < 1) throw parse_error("j must be >= 1");
  f.seq = seq_from_json(doc["coeffs"]);
  return f;
}

SequenceFile load_sequence_file(const std::string& path) {
  return sequence_from_json(parse_file(path));
}

nlohmann::json solution_to_json(const Solution& sol, int j, std::uint64_t seed) {
  return nlohmann::json{{"seed", seed},
                        {"j", j},
                        {"converged", sol.converged},
                        {"iters", sol.iters},
                        {"kkt_residual", sol.kkt_residual},
                        {"M", sol.M},
                        {"N", sol.N},
                        {"r", sol.r},
                        {"lambda", sol.lambda},
                        {"b", seq_to_json(sol.b)},
                        {"Fhat", seq_to_json(sol.Fhat)},
                        {"FhatMin", seq_to_json(sol.FhatMin)}};
}

SeqZ load_solution_b(const std::string& path) {
  const nlohmann::json doc = parse_file(path);
  if (!doc.is_object() || !doc.contains("b")) throw parse_error("solution file needs b");
  return seq_from_json(doc["b"]);
}

}  // namespace majorant
