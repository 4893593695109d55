#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "hjw/checkers.hpp"
#include "hjw/kinds.hpp"

namespace hjw {

struct SearchBudget {
  std::uint64_t max_nodes = UINT64_MAX;
  double max_seconds = 1e18;
};

struct SearchOptions {
  bool color_symmetry = true;   // canonical first-use order on colors
  bool value_symmetry = true;   // letter relabeling (cube) / axis permutation (grid, omega)
  bool coord_symmetry = false;  // cube coordinate permutations (optional)
  bool enforce_divisibility = true;
  int threads = 1;
  std::uint64_t seed = 0;
  SearchBudget budget;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  double seconds = 0.0;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct SearchVerdict {
  enum class Kind { Bad, NoneExists, BudgetExceeded };
  Kind kind = Kind::NoneExists;
  std::optional<Coloring> bad;  // present iff kind == Bad
  SearchStats stats;
};

// A candidate witness together with the point classes its defining condition
// requires to be constant (classes with fewer than two points are dropped).
struct Candidate {
  Witness witness;
  std::vector<std::vector<PointRank>> classes;
};

// Every candidate witness of the instance, in canonical order.  fn returning
// false stops the walk.
void for_each_candidate(const KindSpec& spec, int size,
                        const std::function<bool(Candidate&&)>& fn);

// Searches for a coloring admitting no witness.  Deterministic for a fixed
// seed at one thread; multi-threaded runs return the same verdict but may
// return a different bad coloring.  Throws on an inadmissible size.
SearchVerdict exists_bad_coloring(const KindSpec& spec, int size,
                                  const SearchOptions& opts = {});

// Reference implementation: enumerates every coloring and sweeps the finders.
SearchVerdict exists_bad_coloring_naive(const KindSpec& spec, int size);

struct NumberResult {
  KindSpec spec;
  std::optional<int> value;  // exact, when the scan reached an exhausted size
  int lower = 1;             // always valid: the number is >= lower
  std::optional<int> upper;
  std::optional<std::pair<int, Coloring>> last_bad;       // largest refuted size
  std::optional<std::pair<int, SearchStats>> exhaustion;  // the succeeding size
  bool budget_exhausted = false;
  SearchStats total;
};

// Scans admissible sizes upward; the first exhausted size is the exact value
// (the witness property is closed upward, see lift_witness_up).
NumberResult compute_number(const KindSpec& spec, int max_size,
                            const SearchOptions& opts = {});

// Restriction of a coloring at size k+1 to size k (fixing the new coordinate
// to anchor_letter through the anchor), with the witness-lifting map back up.
struct LiftedRestriction {
  KindSpec spec;
  int reduced_size = 0;
  Letter anchor_letter = 0;
  Coloring restricted;

  Witness lift(const Witness& w) const;
};

LiftedRestriction lift_witness_up(const KindSpec& spec, const Coloring& d_up,
                                  Letter anchor_letter);

}  // namespace hjw
