#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hjw/certificate.hpp"
#include "hjw/kinds.hpp"

namespace hjw {

// A CNF instance in memory; clauses hold nonzero DIMACS literals.
struct CnfDocument {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> comments;

  std::string to_dimacs() const;
};

// Satisfiable iff a bad coloring exists at this size.  Two colors use one
// variable per point; more colors use one-hot variables with exactly-one
// constraints.  Monochromatic-forbidding kinds emit not-all-equal clauses per
// candidate; profile and count kinds introduce one equality variable per
// required-equal pair plus one some-pair-differs clause per candidate.
// Throws std::length_error when the clause limit is exceeded.
CnfDocument export_cnf(const KindSpec& spec, int size,
                       std::uint64_t max_clauses = 5'000'000);

// A total assignment, parsed from solver output ("v" lines or bare literals).
struct CnfModel {
  std::vector<bool> value;  // index 1..num_vars

  static CnfModel parse(const std::string& text, int num_vars);
};

// The decoded model was not a bad coloring: the encoder and the search
// disagree, which a correct pipeline never produces.
struct InconsistentModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reconstructs the coloring from a satisfying assignment, re-verifies that it
// admits no witness, and wraps it in a bad certificate.  Throws
// std::invalid_argument on a malformed model (one-hot violations) and
// InconsistentModelError when the coloring verifies good.
Certificate decode_cnf_model(const KindSpec& spec, int size, const CnfModel& model);

}  // namespace hjw
