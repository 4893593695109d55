#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hjw {

using Letter = int;
using Pos = int;
using PointRank = std::uint64_t;

// A word is a function [k] -> {0..h-1}, stored letter-by-position.
using Word = std::vector<Letter>;

constexpr Letter kNoLetter = -1;

std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

// Mixed-radix (big-endian base-h) rank of a word; unrank is its inverse.
PointRank rank_word(const Word& w, int h);
Word unrank_word(PointRank r, int k, int h);

// An m-dimensional subspace of the k-cube: m pairwise disjoint non-empty
// blocks of positions (ordered by minimum element) plus an anchor assigning a
// letter to every position outside the blocks.  anchor has length k and holds
// kNoLetter exactly on block positions.
struct BlockSystem {
  int k = 0;
  std::vector<std::vector<Pos>> blocks;
  std::vector<Letter> anchor;

  int dim() const { return static_cast<int>(blocks.size()); }
  void validate(int h) const;  // throws std::invalid_argument
  bool operator==(const BlockSystem&) const = default;
};

// The h^m points of the subspace, ordered by the big-endian rank of their
// block-letter assignment (block 0 most significant).
std::vector<Word> subspace_points(const BlockSystem& s, int h);

// Word of the subspace with the given per-block letters.
Word subspace_point(const BlockSystem& s, std::span<const Letter> block_letters);

enum class BlockConstraint { Any, EqualSize, FixedSize };

// Enumerates every canonical block system of dimension m in the k-cube that
// satisfies the constraint, paired with every anchor.  fn returning false
// stops the enumeration; for_each returns false iff it was stopped.
bool for_each_block_system(int k, int m, int h, BlockConstraint bc, int fixed_size,
                           const std::function<bool(const BlockSystem&)>& fn);
std::vector<BlockSystem> enumerate_block_systems(int k, int m, int h,
                                                 BlockConstraint bc, int fixed_size = 0);
std::vector<BlockSystem> enumerate_lines(int k, int h);
std::uint64_t line_count(int k, int h);  // (h+1)^k - h^k

// Per-letter counts with their declared total.
struct CountProfile {
  std::vector<int> counts;
  int total = 0;
  bool operator==(const CountProfile&) const = default;
};

// counts[a] = number of blocks of s on which nu is constantly a.
// Throws if nu is not a member of the subspace.
CountProfile block_profile(const Word& nu, const BlockSystem& s, int h);

// counts[a] = |{i in positions : eta(i) = a}|.
CountProfile letter_counts(const Word& eta, std::span<const Pos> positions, int h);

// Words agree up to a permutation of the positions in `positions`,
// equivalently have equal letter counts there.
bool e_equiv(const Word& a, const Word& b, std::span<const Pos> positions, int h);

// A point of the composition space: h parts summing to a fixed total.
using OmegaPoint = std::vector<int>;

std::uint64_t omega_count(int total, int h);  // C(total+h-1, h-1)
// All weak compositions of `total` into h parts, lexicographic.  When
// include_full_parts is false, compositions with a part equal to `total`
// (the corner points) are excluded.
std::vector<OmegaPoint> omega_enumerate(int total, int h, bool include_full_parts = true);
std::uint64_t omega_rank(const OmegaPoint& p);
OmegaPoint omega_unrank(std::uint64_t r, int total, int h);

// base with part `alpha` increased by step; throws if the result would leave
// the composition space of `total`.
OmegaPoint omega_bump(const OmegaPoint& base, int step, Letter alpha, int total);

// Grid points are h-tuples with entries in [n], ranked big-endian base n.
using GridPoint = std::vector<int>;
PointRank rank_grid_point(const GridPoint& p, int n);
GridPoint unrank_grid_point(PointRank r, int h, int n);

enum class GroundType { Cube, Interval, Grid, Omega };

// A finite ground set a coloring lives on.  `size` is the scanned axis
// (cube side k, interval length n, grid side n, composition total m*);
// `h` is the alphabet size / grid dimension / number of parts.
struct Ground {
  GroundType type = GroundType::Cube;
  int size = 0;
  int h = 1;

  static Ground cube(int k, int h) { return {GroundType::Cube, k, h}; }
  static Ground interval(int n) { return {GroundType::Interval, n, 1}; }
  static Ground grid(int h, int n) { return {GroundType::Grid, n, h}; }
  static Ground omega(int total, int h) { return {GroundType::Omega, total, h}; }

  std::uint64_t point_count() const;
  std::string to_string() const;                 // e.g. "cube(3,2)"
  static Ground parse(const std::string& text);  // throws on malformed input
  bool operator==(const Ground&) const = default;
};

// A total coloring of a ground set, stored as a dense rank-indexed table.
struct Coloring {
  Ground ground;
  int colors = 1;
  std::vector<std::uint8_t> table;

  static Coloring constant(Ground g, int colors, int color = 0);
  int color_of(PointRank r) const { return table[static_cast<size_t>(r)]; }
  void validate() const;  // throws std::invalid_argument
  std::string encode_table() const;  // base-c digit string, rank order
  static Coloring decode(Ground g, int colors, const std::string& digits);
};

// Guards for exact evaluation of fast-growing functions.
struct GrowthBudget {
  long max_bits = 4096;
  long max_steps = 1'000'000;
};

}  // namespace hjw
