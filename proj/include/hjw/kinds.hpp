#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hjw/core.hpp"

namespace hjw {

// The partition-number families the workbench can search.
//
//   HJ    monochromatic m-dimensional subspace
//   HJEQ  monochromatic m-dimensional subspace, equal block sizes
//   F8    m blocks (any sizes), constant on the balanced points
//   F9    as F8 with equal block sizes
//   F8S   m blocks (any sizes), color determined by the block profile
//   F9S   as F8S with equal block sizes
//   F9SN  as F9S with every block of size n
//   F13   position set N of size m, color determined by letter counts on N
//   VDW   monochromatic m-term arithmetic progression in an interval
//   GW    monochromatic homothetic (m+1)^h grid cube
//   OPLUS h bumped compositions of a common base share a color
enum class Kind { HJ, HJEQ, F8, F9, F8S, F9S, F9SN, F13, VDW, GW, OPLUS };

bool kind_is_f_family(Kind k);   // F8, F9, F8S, F9S, F9SN
bool kind_uses_cube(Kind k);     // everything except VDW, GW, OPLUS
std::string kind_name(Kind k);
Kind parse_kind(const std::string& name);

struct KindSpec {
  Kind kind = Kind::HJ;
  int h = 2;  // alphabet size (cube kinds, OPLUS) or grid dimension (GW)
  int c = 2;  // number of colors
  int m = 1;  // dimension / progression length; unused for OPLUS
  int n = 1;  // block size, F9SN only

  void validate() const;  // throws std::invalid_argument
  // Sizes the defining minimum ranges over.  The f-family requires sizes
  // divisible by h; the flag lifts that for sensitivity analysis.
  bool size_admissible(int size, bool enforce_divisibility = true) const;
  int first_admissible(bool enforce_divisibility = true) const;
  int next_admissible(int size, bool enforce_divisibility = true) const;
  Ground ground_for(int size) const;

  std::string key() const;                 // "hj:m=1:h=2:c=2" (db key)
  std::string display(int value = -1) const;  // "hj(1;2,2)=2"
  bool operator==(const KindSpec&) const = default;
};

// The existentially quantified object of each definition.
struct SubspaceWitness {
  BlockSystem system;
  bool operator==(const SubspaceWitness&) const = default;
};
struct F13Witness {
  int k = 0;
  std::vector<Pos> positions;    // N, sorted
  std::vector<Letter> anchor;    // length k, kNoLetter exactly on N
  bool operator==(const F13Witness&) const = default;
};
struct ApWitness {
  long long start = 0;
  long long step = 1;
  bool operator==(const ApWitness&) const = default;
};
struct GwWitness {
  std::vector<long long> corner;  // one coordinate per grid dimension
  long long step = 1;
  bool operator==(const GwWitness&) const = default;
};
struct OplusWitness {
  std::vector<long long> base;  // one part per letter
  long long step = 1;
  bool operator==(const OplusWitness&) const = default;
};

using Witness = std::variant<SubspaceWitness, F13Witness, ApWitness, GwWitness, OplusWitness>;

std::string witness_to_string(const Witness& w);

}  // namespace hjw
