#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "majorant/solver.hpp"

namespace majorant {

/// Raised on malformed input files; the CLI maps it to exit code 2.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// On-disk problem input: {"j": int, "coeffs": [{"n": int, "re": f, "im": f}, ...]},
/// indices strictly increasing. An empty coeffs list is the zero sequence.
struct SequenceFile {
  int j = 1;
  SeqZ seq;
};

SequenceFile load_sequence_file(const std::string& path);
SequenceFile sequence_from_json(const nlohmann::json& doc);

nlohmann::json seq_to_json(const SeqZ& x);
SeqZ seq_from_json(const nlohmann::json& arr);

nlohmann::json solution_to_json(const Solution& sol, int j, std::uint64_t seed);

/// Reads back a solution written by solution_to_json; only b is required,
/// everything else is recomputed by the verifier.
SeqZ load_solution_b(const std::string& path);

}  // namespace majorant
