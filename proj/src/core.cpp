#include "hjw/core.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hjw {

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw std::overflow_error("checked_pow: overflow");
    r *= base;
  }
  return r;
}

PointRank rank_word(const Word& w, int h) {
  if (h < 1) throw std::invalid_argument("rank_word: alphabet size must be positive");
  PointRank r = 0;
  for (Letter a : w) {
    if (a < 0 || a >= h) throw std::invalid_argument("rank_word: invalid letter");
    r = r * static_cast<PointRank>(h) + static_cast<PointRank>(a);
  }
  return r;
}

Word unrank_word(PointRank r, int k, int h) {
  if (h < 1) throw std::invalid_argument("unrank_word: alphabet size must be positive");
  Word w(static_cast<size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    w[static_cast<size_t>(i)] = static_cast<Letter>(r % static_cast<PointRank>(h));
    r /= static_cast<PointRank>(h);
  }
  if (r != 0) throw std::invalid_argument("unrank_word: rank out of range");
  return w;
}

void BlockSystem::validate(int h) const {
  if (k < 0) throw std::invalid_argument("block system: negative side");
  if (anchor.size() != static_cast<size_t>(k))
    throw std::invalid_argument("block system: anchor length mismatch");
  std::vector<char> covered(static_cast<size_t>(k), 0);
  Pos prev_min = -1;
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("block system: empty block");
    if (!std::is_sorted(b.begin(), b.end()))
      throw std::invalid_argument("block system: block positions not sorted");
    if (b.front() <= prev_min)
      throw std::invalid_argument("block system: blocks not ordered by minimum");
    prev_min = b.front();
    for (Pos p : b) {
      if (p < 0 || p >= k) throw std::invalid_argument("block system: position out of range");
      if (covered[static_cast<size_t>(p)])
        throw std::invalid_argument("block system: blocks overlap");
      covered[static_cast<size_t>(p)] = 1;
    }
  }
  for (Pos p = 0; p < k; ++p) {
    Letter a = anchor[static_cast<size_t>(p)];
    if (covered[static_cast<size_t>(p)]) {
      if (a != kNoLetter)
        throw std::invalid_argument("block system: anchor set on a block position");
    } else {
      if (a < 0 || a >= h)
        throw std::invalid_argument("block system: anchor letter out of range");
    }
  }
}

Word subspace_point(const BlockSystem& s, std::span<const Letter> block_letters) {
  Word w(s.anchor.begin(), s.anchor.end());
  for (size_t l = 0; l < s.blocks.size(); ++l)
    for (Pos p : s.blocks[l]) w[static_cast<size_t>(p)] = block_letters[l];
  return w;
}

std::vector<Word> subspace_points(const BlockSystem& s, int h) {
  s.validate(h);
  const int m = s.dim();
  std::vector<Word> out;
  out.reserve(static_cast<size_t>(checked_pow(static_cast<std::uint64_t>(h),
                                              static_cast<unsigned>(m))));
  std::vector<Letter> letters(static_cast<size_t>(m), 0);
  while (true) {
    out.push_back(subspace_point(s, letters));
    int i = m - 1;
    while (i >= 0 && letters[static_cast<size_t>(i)] == h - 1) {
      letters[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++letters[static_cast<size_t>(i)];
  }
  return out;
}

namespace {

// Recursively extend a block tuple; blocks come in increasing order of their
// minimum element.  free_mask lists the positions not used so far.
bool extend_blocks(int k, int m, int h, BlockConstraint bc, int fixed_size,
                   std::vector<std::vector<Pos>>& blocks, std::uint32_t used_mask,
                   const std::function<bool(const BlockSystem&)>& fn) {
  if (static_cast<int>(blocks.size()) == m) {
    BlockSystem s;
    s.k = k;
    s.blocks = blocks;
    s.anchor.assign(static_cast<size_t>(k), kNoLetter);
    std::vector<Pos> free_pos;
    for (Pos p = 0; p < k; ++p)
      if (!(used_mask >> p & 1u)) free_pos.push_back(p);
    // all anchors, by big-endian rank over the free positions
    std::vector<Letter> a(free_pos.size(), 0);
    while (true) {
      for (size_t i = 0; i < free_pos.size(); ++i)
        s.anchor[static_cast<size_t>(free_pos[i])] = a[i];
      if (!fn(s)) return false;
      size_t i = free_pos.size();
      while (i > 0 && a[i - 1] == h - 1) a[--i] = 0;
      if (i == 0) break;
      ++a[i - 1];
    }
    return true;
  }

  int min_start = blocks.empty() ? 0 : blocks.back().front() + 1;
  for (Pos lead = min_start; lead < k; ++lead) {
    if (used_mask >> lead & 1u) continue;
    // candidates for the rest of this block: free positions above `lead`
    std::vector<Pos> rest;
    for (Pos p = lead + 1; p < k; ++p)
      if (!(used_mask >> p & 1u)) rest.push_back(p);
    int want = -1;  // required block size, -1 = any
    if (bc == BlockConstraint::FixedSize) want = fixed_size;
    if (bc == BlockConstraint::EqualSize && !blocks.empty())
      want = static_cast<int>(blocks.front().size());
    // every subset of `rest` (ascending submask order), prepended with lead
    const std::uint32_t nsub = 1u << rest.size();
    for (std::uint32_t sub = 0; sub < nsub; ++sub) {
      std::vector<Pos> blk{lead};
      std::uint32_t mask = used_mask | (1u << lead);
      for (size_t i = 0; i < rest.size(); ++i)
        if (sub >> i & 1u) {
          blk.push_back(rest[i]);
          mask |= 1u << rest[i];
        }
      if (want >= 0 && static_cast<int>(blk.size()) != want) continue;
      blocks.push_back(std::move(blk));
      bool keep = extend_blocks(k, m, h, bc, fixed_size, blocks, mask, fn);
      blocks.pop_back();
      if (!keep) return false;
    }
  }
  return true;
}

}  // namespace

bool for_each_block_system(int k, int m, int h, BlockConstraint bc, int fixed_size,
                           const std::function<bool(const BlockSystem&)>& fn) {
  if (m < 1 || k < m) return true;  // empty enumeration
  if (k > 31) throw std::invalid_argument("for_each_block_system: side too large");
  if (bc == BlockConstraint::FixedSize && fixed_size < 1)
    throw std::invalid_argument("for_each_block_system: fixed size must be positive");
  std::vector<std::vector<Pos>> blocks;
  return extend_blocks(k, m, h, bc, fixed_size, blocks, 0, fn);
}

std::vector<BlockSystem> enumerate_block_systems(int k, int m, int h,
                                                 BlockConstraint bc, int fixed_size) {
  std::vector<BlockSystem> out;
  for_each_block_system(k, m, h, bc, fixed_size, [&](const BlockSystem& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::vector<BlockSystem> enumerate_lines(int k, int h) {
  return enumerate_block_systems(k, 1, h, BlockConstraint::Any);
}

std::uint64_t line_count(int k, int h) {
  return checked_pow(static_cast<std::uint64_t>(h) + 1, static_cast<unsigned>(k)) -
         checked_pow(static_cast<std::uint64_t>(h), static_cast<unsigned>(k));
}

CountProfile block_profile(const Word& nu, const BlockSystem& s, int h) {
  s.validate(h);
  if (nu.size() != static_cast<size_t>(s.k))
    throw std::invalid_argument("block_profile: word length mismatch");
  CountProfile prof;
  prof.counts.assign(static_cast<size_t>(h), 0);
  for (Pos p = 0; p < s.k; ++p) {
    Letter a = s.anchor[static_cast<size_t>(p)];
    if (a != kNoLetter && nu[static_cast<size_t>(p)] != a)
      throw std::invalid_argument("block_profile: word not in the subspace");
  }
  for (const auto& b : s.blocks) {
    Letter a = nu[static_cast<size_t>(b.front())];
    for (Pos p : b)
      if (nu[static_cast<size_t>(p)] != a)
        throw std::invalid_argument("block_profile: word not constant on a block");
    if (a < 0 || a >= h) throw std::invalid_argument("block_profile: invalid letter");
    ++prof.counts[static_cast<size_t>(a)];
  }
  prof.total = s.dim();
  return prof;
}

CountProfile letter_counts(const Word& eta, std::span<const Pos> positions, int h) {
  CountProfile prof;
  prof.counts.assign(static_cast<size_t>(h), 0);
  for (Pos p : positions) {
    if (p < 0 || p >= static_cast<Pos>(eta.size()))
      throw std::invalid_argument("letter_counts: position out of range");
    Letter a = eta[static_cast<size_t>(p)];
    if (a < 0 || a >= h) throw std::invalid_argument("letter_counts: invalid letter");
    ++prof.counts[static_cast<size_t>(a)];
    ++prof.total;
  }
  return prof;
}

bool e_equiv(const Word& a, const Word& b, std::span<const Pos> positions, int h) {
  if (a.size() != b.size()) throw std::invalid_argument("e_equiv: length mismatch");
  return letter_counts(a, positions, h) == letter_counts(b, positions, h);
}

std::uint64_t omega_count(int total, int h) {
  // C(total+h-1, h-1)
  std::uint64_t num = 1, den = 1;
  for (int i = 1; i <= h - 1; ++i) {
    num *= static_cast<std::uint64_t>(total + i);
    den *= static_cast<std::uint64_t>(i);
  }
  return num / den;
}

namespace {

void omega_rec(int total, int h, int part, OmegaPoint& cur, std::vector<OmegaPoint>& out) {
  if (part == h - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    omega_rec(total - v, h, part + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<OmegaPoint> omega_enumerate(int total, int h, bool include_full_parts) {
  if (total < 0 || h < 1) throw std::invalid_argument("omega_enumerate: bad parameters");
  std::vector<OmegaPoint> out;
  OmegaPoint cur;
  omega_rec(total, h, 0, cur, out);
  if (!include_full_parts && total > 0) {
    std::erase_if(out, [&](const OmegaPoint& p) {
      return std::any_of(p.begin(), p.end(), [&](int v) { return v == total; });
    });
  }
  return out;
}

std::uint64_t omega_rank(const OmegaPoint& p) {
  const int h = static_cast<int>(p.size());
  int rem = std::accumulate(p.begin(), p.end(), 0);
  std::uint64_t rank = 0;
  for (int i = 0; i < h - 1; ++i) {
    for (int v = 0; v < p[static_cast<size_t>(i)]; ++v)
      rank += omega_count(rem - v, h - 1 - i);
    rem -= p[static_cast<size_t>(i)];
  }
  return rank;
}

OmegaPoint omega_unrank(std::uint64_t r, int total, int h) {
  OmegaPoint p(static_cast<size_t>(h), 0);
  int rem = total;
  for (int i = 0; i < h - 1; ++i) {
    int v = 0;
    while (true) {
      std::uint64_t c = omega_count(rem - v, h - 1 - i);
      if (r < c) break;
      r -= c;
      ++v;
    }
    p[static_cast<size_t>(i)] = v;
    rem -= v;
  }
  p[static_cast<size_t>(h - 1)] = rem;
  if (r != 0) throw std::invalid_argument("omega_unrank: rank out of range");
  return p;
}

OmegaPoint omega_bump(const OmegaPoint& base, int step, Letter alpha, int total) {
  if (step <= 0) throw std::invalid_argument("omega_bump: step must be positive");
  if (alpha < 0 || alpha >= static_cast<int>(base.size()))
    throw std::invalid_argument("omega_bump: letter out of range");
  OmegaPoint out = base;
  out[static_cast<size_t>(alpha)] += step;
  int sum = std::accumulate(out.begin(), out.end(), 0);
  if (sum != total)
    throw std::invalid_argument("omega_bump: result leaves the composition space");
  for (int v : out)
    if (v < 0 || v > total)
      throw std::invalid_argument("omega_bump: part out of range");
  return out;
}

PointRank rank_grid_point(const GridPoint& p, int n) {
  PointRank r = 0;
  for (int x : p) {
    if (x < 0 || x >= n) throw std::invalid_argument("rank_grid_point: coordinate out of range");
    r = r * static_cast<PointRank>(n) + static_cast<PointRank>(x);
  }
  return r;
}

GridPoint unrank_grid_point(PointRank r, int h, int n) {
  GridPoint p(static_cast<size_t>(h));
  for (int i = h - 1; i >= 0; --i) {
    p[static_cast<size_t>(i)] = static_cast<int>(r % static_cast<PointRank>(n));
    r /= static_cast<PointRank>(n);
  }
  if (r != 0) throw std::invalid_argument("unrank_grid_point: rank out of range");
  return p;
}

std::uint64_t Ground::point_count() const {
  switch (type) {
    case GroundType::Cube:
      return checked_pow(static_cast<std::uint64_t>(h), static_cast<unsigned>(size));
    case GroundType::Interval:
      return static_cast<std::uint64_t>(size);
    case GroundType::Grid:
      return checked_pow(static_cast<std::uint64_t>(size), static_cast<unsigned>(h));
    case GroundType::Omega:
      return omega_count(size, h);
  }
  return 0;
}

std::string Ground::to_string() const {
  char buf[64];
  switch (type) {
    case GroundType::Cube:
      std::snprintf(buf, sizeof buf, "cube(%d,%d)", size, h);
      break;
    case GroundType::Interval:
      std::snprintf(buf, sizeof buf, "interval(%d)", size);
      break;
    case GroundType::Grid:
      std::snprintf(buf, sizeof buf, "grid(%d,%d)", h, size);
      break;
    case GroundType::Omega:
      std::snprintf(buf, sizeof buf, "omega(%d,%d)", size, h);
      break;
  }
  return buf;
}

Ground Ground::parse(const std::string& text) {
  int a = 0, b = 0;
  if (std::sscanf(text.c_str(), "cube(%d,%d)", &a, &b) == 2) return cube(a, b);
  if (std::sscanf(text.c_str(), "interval(%d)", &a) == 1) return interval(a);
  if (std::sscanf(text.c_str(), "grid(%d,%d)", &a, &b) == 2) return grid(a, b);
  if (std::sscanf(text.c_str(), "omega(%d,%d)", &a, &b) == 2) return omega(a, b);
  throw std::invalid_argument("Ground::parse: unrecognized ground '" + text + "'");
}

Coloring Coloring::constant(Ground g, int colors, int color) {
  Coloring c;
  c.ground = g;
  c.colors = colors;
  c.table.assign(static_cast<size_t>(g.point_count()), static_cast<std::uint8_t>(color));
  c.validate();
  return c;
}

void Coloring::validate() const {
  if (colors < 1 || colors > 255)
    throw std::invalid_argument("coloring: color count out of range");
  if (table.size() != ground.point_count())
    throw std::invalid_argument("coloring: table length mismatch");
  for (std::uint8_t v : table)
    if (static_cast<int>(v) >= colors) throw std::invalid_argument("coloring: entry out of range");
}

namespace {
constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
}

std::string Coloring::encode_table() const {
  if (colors > 36) throw std::invalid_argument("coloring: too many colors to encode");
  std::string s;
  s.reserve(table.size());
  for (std::uint8_t v : table) s.push_back(kDigits[v]);
  return s;
}

Coloring Coloring::decode(Ground g, int colors, const std::string& digits) {
  Coloring c;
  c.ground = g;
  c.colors = colors;
  c.table.reserve(digits.size());
  for (char ch : digits) {
    const char* p = std::char_traits<char>::find(kDigits, 36, ch);
    if (p == nullptr) throw std::invalid_argument("coloring: bad digit");
    c.table.push_back(static_cast<std::uint8_t>(p - kDigits));
  }
  c.validate();
  return c;
}

}  // namespace hjw
