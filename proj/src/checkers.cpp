#include "hjw/checkers.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hjw {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_ground(const Coloring& d, GroundType t, const char* msg) {
  require(d.ground.type == t, msg);
  d.validate();
}

// Does d satisfy the color constraint on this block system?
bool system_qualifies(const Coloring& d, const BlockSystem& s, int h, ColorConstraint cc) {
  const int m = s.dim();
  std::vector<Letter> letters(static_cast<size_t>(m), 0);
  // per-profile first color, keyed by the block letter multiset
  std::map<std::vector<int>, int> profile_color;
  int mono_color = -1;
  bool first = true;
  while (true) {
    Word nu = subspace_point(s, letters);
    int color = d.color_of(rank_word(nu, h));
    switch (cc) {
      case ColorConstraint::Monochromatic: {
        if (first) mono_color = color;
        else if (color != mono_color) return false;
        break;
      }
      case ColorConstraint::BalancedConstant: {
        std::vector<int> counts(static_cast<size_t>(h), 0);
        for (Letter a : letters) ++counts[static_cast<size_t>(a)];
        bool balanced = std::all_of(counts.begin(), counts.end(),
                                    [&](int v) { return v == m / h; });
        if (balanced) {
          if (mono_color == -1) mono_color = color;
          else if (color != mono_color) return false;
        }
        break;
      }
      case ColorConstraint::ProfileInvariant: {
        std::vector<int> counts(static_cast<size_t>(h), 0);
        for (Letter a : letters) ++counts[static_cast<size_t>(a)];
        auto [it, inserted] = profile_color.emplace(std::move(counts), color);
        if (!inserted && it->second != color) return false;
        break;
      }
    }
    first = false;
    int i = m - 1;
    while (i >= 0 && letters[static_cast<size_t>(i)] == h - 1) letters[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
    ++letters[static_cast<size_t>(i)];
  }
  return true;
}

}  // namespace

std::optional<Witness> find_subspace_witness(const Coloring& d, int m,
                                             BlockConstraint bc, int fixed_size,
                                             ColorConstraint cc) {
  require_ground(d, GroundType::Cube, "find_subspace_witness: cube coloring required");
  const int k = d.ground.size;
  const int h = d.ground.h;
  require(m >= 1, "find_subspace_witness: dimension must be positive");
  if (cc == ColorConstraint::BalancedConstant)
    require(m % h == 0, "find_subspace_witness: balanced constraint needs h | m");
  std::optional<Witness> found;
  for_each_block_system(k, m, h, bc, fixed_size, [&](const BlockSystem& s) {
    if (system_qualifies(d, s, h, cc)) {
      found = Witness{SubspaceWitness{s}};
      return false;
    }
    return true;
  });
  return found;
}

std::optional<Witness> find_f13_witness(const Coloring& d, int m) {
  require_ground(d, GroundType::Cube, "find_f13_witness: cube coloring required");
  const int k = d.ground.size;
  const int h = d.ground.h;
  require(m >= 1, "find_f13_witness: dimension must be positive");
  if (m > k) return std::nullopt;
  // Position sets of size m, as singleton-block systems joined into one N:
  // enumerate subsets of [k] of size m in lexicographic order of the sorted
  // position list, each with every anchor by rank.
  std::vector<Pos> sel;
  std::optional<Witness> found;

  auto try_candidate = [&](const std::vector<Pos>& positions) -> bool {
    std::vector<Pos> rest;
    for (Pos p = 0; p < k; ++p)
      if (!std::binary_search(positions.begin(), positions.end(), p)) rest.push_back(p);
    std::vector<Letter> a(rest.size(), 0);
    while (true) {
      // color must be a function of letter counts on N
      std::map<std::vector<int>, int> class_color;
      bool ok = true;
      Word w(static_cast<size_t>(k), 0);
      for (size_t i = 0; i < rest.size(); ++i) w[static_cast<size_t>(rest[i])] = a[i];
      std::vector<Letter> inner(positions.size(), 0);
      while (true) {
        for (size_t i = 0; i < positions.size(); ++i)
          w[static_cast<size_t>(positions[i])] = inner[i];
        std::vector<int> counts(static_cast<size_t>(h), 0);
        for (Letter x : inner) ++counts[static_cast<size_t>(x)];
        int color = d.color_of(rank_word(w, h));
        auto [it, inserted] = class_color.emplace(std::move(counts), color);
        if (!inserted && it->second != color) {
          ok = false;
          break;
        }
        size_t i = inner.size();
        while (i > 0 && inner[i - 1] == h - 1) inner[--i] = 0;
        if (i == 0) break;
        ++inner[i - 1];
      }
      if (ok) {
        F13Witness fw;
        fw.k = k;
        fw.positions = positions;
        fw.anchor.assign(static_cast<size_t>(k), kNoLetter);
        for (size_t i = 0; i < rest.size(); ++i) fw.anchor[static_cast<size_t>(rest[i])] = a[i];
        found = Witness{std::move(fw)};
        return true;
      }
      size_t i = a.size();
      while (i > 0 && a[i - 1] == h - 1) a[--i] = 0;
      if (i == 0) break;
      ++a[i - 1];
    }
    return false;
  };

  std::function<bool(Pos, int)> rec = [&](Pos start, int need) -> bool {
    if (need == 0) return try_candidate(sel);
    for (Pos p = start; p <= k - need; ++p) {
      sel.push_back(p);
      bool hit = rec(p + 1, need - 1);
      sel.pop_back();
      if (hit) return true;
    }
    return false;
  };
  rec(0, m);
  return found;
}

std::optional<Witness> find_ap_witness(const Coloring& d, int m) {
  require_ground(d, GroundType::Interval, "find_ap_witness: interval coloring required");
  const long long n = d.ground.size;
  require(m >= 1, "find_ap_witness: length must be positive");
  if (m == 1) {
    // any single point qualifies; canonical first is (0, 1)
    if (n < 1) return std::nullopt;
    return Witness{ApWitness{0, 1}};
  }
  for (long long a = 0; a < n; ++a) {
    for (long long step = 1; a + static_cast<long long>(m - 1) * step < n; ++step) {
      int color = d.color_of(static_cast<PointRank>(a));
      bool mono = true;
      for (int i = 1; i < m; ++i)
        if (d.color_of(static_cast<PointRank>(a + i * step)) != color) {
          mono = false;
          break;
        }
      if (mono) return Witness{ApWitness{a, step}};
    }
  }
  return std::nullopt;
}

std::optional<Witness> find_gallai_witt_witness(const Coloring& d, int m) {
  require_ground(d, GroundType::Grid, "find_gallai_witt_witness: grid coloring required");
  const int h = d.ground.h;
  const long long n = d.ground.size;
  require(m >= 1, "find_gallai_witt_witness: dimension must be positive");
  const std::uint64_t points = d.ground.point_count();
  for (PointRank cr = 0; cr < points; ++cr) {
    GridPoint corner = unrank_grid_point(cr, h, static_cast<int>(n));
    long long max_coord = *std::max_element(corner.begin(), corner.end());
    for (long long step = 1; max_coord + step * m < n; ++step) {
      // all (m+1)^h points corner + step * i, each i_e <= m
      bool mono = true;
      int color = -1;
      std::vector<int> idx(static_cast<size_t>(h), 0);
      while (mono) {
        GridPoint p = corner;
        for (int e = 0; e < h; ++e) p[static_cast<size_t>(e)] += static_cast<int>(step) * idx[static_cast<size_t>(e)];
        int c = d.color_of(rank_grid_point(p, static_cast<int>(n)));
        if (color == -1) color = c;
        else if (c != color) mono = false;
        int e = h - 1;
        while (e >= 0 && idx[static_cast<size_t>(e)] == m) idx[static_cast<size_t>(e--)] = 0;
        if (e < 0) break;
        ++idx[static_cast<size_t>(e)];
      }
      if (mono) {
        GwWitness gw;
        gw.corner.assign(corner.begin(), corner.end());
        gw.step = step;
        return Witness{std::move(gw)};
      }
    }
  }
  return std::nullopt;
}

std::optional<Witness> find_oplus_witness(const Coloring& d) {
  require_ground(d, GroundType::Omega, "find_oplus_witness: omega coloring required");
  const int total = d.ground.size;
  const int h = d.ground.h;
  require(total >= 1, "find_oplus_witness: total must be positive");
  for (int step = 1; step <= total; ++step) {
    for (const OmegaPoint& base : omega_enumerate(total - step, h)) {
      int color = -1;
      bool ok = true;
      for (Letter a = 0; a < h && ok; ++a) {
        OmegaPoint bumped = base;
        bumped[static_cast<size_t>(a)] += step;
        int c = d.color_of(omega_rank(bumped));
        if (color == -1) color = c;
        else if (c != color) ok = false;
      }
      if (ok) {
        OplusWitness ow;
        ow.base.assign(base.begin(), base.end());
        ow.step = step;
        return Witness{std::move(ow)};
      }
    }
  }
  return std::nullopt;
}

std::optional<Witness> find_witness(const KindSpec& spec, const Coloring& d) {
  spec.validate();
  switch (spec.kind) {
    case Kind::HJ:
      return find_subspace_witness(d, spec.m, BlockConstraint::Any, 0,
                                   ColorConstraint::Monochromatic);
    case Kind::HJEQ:
      return find_subspace_witness(d, spec.m, BlockConstraint::EqualSize, 0,
                                   ColorConstraint::Monochromatic);
    case Kind::F8:
      return find_subspace_witness(d, spec.m, BlockConstraint::Any, 0,
                                   ColorConstraint::BalancedConstant);
    case Kind::F9:
      return find_subspace_witness(d, spec.m, BlockConstraint::EqualSize, 0,
                                   ColorConstraint::BalancedConstant);
    case Kind::F8S:
      return find_subspace_witness(d, spec.m, BlockConstraint::Any, 0,
                                   ColorConstraint::ProfileInvariant);
    case Kind::F9S:
      return find_subspace_witness(d, spec.m, BlockConstraint::EqualSize, 0,
                                   ColorConstraint::ProfileInvariant);
    case Kind::F9SN:
      return find_subspace_witness(d, spec.m, BlockConstraint::FixedSize, spec.n,
                                   ColorConstraint::ProfileInvariant);
    case Kind::F13:
      return find_f13_witness(d, spec.m);
    case Kind::VDW:
      return find_ap_witness(d, spec.m);
    case Kind::GW:
      return find_gallai_witt_witness(d, spec.m);
    case Kind::OPLUS:
      return find_oplus_witness(d);
  }
  return std::nullopt;
}

namespace {

// --- independent re-validation, by direct evaluation from the payload ---

bool verify_subspace(const KindSpec& spec, int size, const Coloring& d,
                     const SubspaceWitness& w) {
  const int h = spec.h;
  const BlockSystem& s = w.system;
  require(s.k == size, "verify: witness side does not match the instance size");
  s.validate(h);
  require(s.dim() == spec.m, "verify: block count does not match the kind");

  // structural block-shape requirements
  switch (spec.kind) {
    case Kind::HJEQ:
    case Kind::F9:
    case Kind::F9S:
      for (const auto& b : s.blocks)
        if (b.size() != s.blocks.front().size()) return false;
      break;
    case Kind::F9SN:
      for (const auto& b : s.blocks)
        if (static_cast<int>(b.size()) != spec.n) return false;
      break;
    default:
      break;
  }

  const int m = s.dim();
  std::vector<Letter> letters(static_cast<size_t>(m), 0);
  std::map<std::vector<Letter>, int> seen_by_profile;
  int constant_color = -1;
  while (true) {
    Word nu(s.anchor.begin(), s.anchor.end());
    for (int l = 0; l < m; ++l)
      for (Pos p : s.blocks[static_cast<size_t>(l)])
        nu[static_cast<size_t>(p)] = letters[static_cast<size_t>(l)];
    const int color = d.color_of(rank_word(nu, h));

    switch (spec.kind) {
      case Kind::HJ:
      case Kind::HJEQ: {
        if (constant_color == -1) constant_color = color;
        else if (color != constant_color) return false;
        break;
      }
      case Kind::F8:
      case Kind::F9: {
        std::vector<Letter> prof(static_cast<size_t>(h), 0);
        for (Letter a : letters) ++prof[static_cast<size_t>(a)];
        if (std::all_of(prof.begin(), prof.end(), [&](int v) { return v == m / h; })) {
          if (constant_color == -1) constant_color = color;
          else if (color != constant_color) return false;
        }
        break;
      }
      case Kind::F8S:
      case Kind::F9S:
      case Kind::F9SN: {
        std::vector<Letter> prof(static_cast<size_t>(h), 0);
        for (Letter a : letters) ++prof[static_cast<size_t>(a)];
        auto [it, inserted] = seen_by_profile.emplace(std::move(prof), color);
        if (!inserted && it->second != color) return false;
        break;
      }
      default:
        throw std::invalid_argument("verify: subspace witness for a non-subspace kind");
    }

    int i = m - 1;
    while (i >= 0 && letters[static_cast<size_t>(i)] == h - 1) letters[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
    ++letters[static_cast<size_t>(i)];
  }
  return true;
}

bool verify_f13(const KindSpec& spec, int size, const Coloring& d, const F13Witness& w) {
  const int h = spec.h;
  require(w.k == size, "verify: witness side does not match the instance size");
  require(static_cast<int>(w.positions.size()) == spec.m,
          "verify: position-set size does not match the kind");
  require(std::is_sorted(w.positions.begin(), w.positions.end()),
          "verify: positions must be sorted");
  require(static_cast<int>(w.anchor.size()) == size, "verify: anchor length mismatch");
  std::vector<char> in_n(static_cast<size_t>(size), 0);
  for (Pos p : w.positions) {
    require(p >= 0 && p < size, "verify: position out of range");
    require(!in_n[static_cast<size_t>(p)], "verify: duplicate position");
    in_n[static_cast<size_t>(p)] = 1;
  }
  for (Pos p = 0; p < size; ++p) {
    Letter a = w.anchor[static_cast<size_t>(p)];
    if (in_n[static_cast<size_t>(p)]) require(a == kNoLetter, "verify: anchor set inside N");
    else require(a >= 0 && a < h, "verify: anchor letter out of range");
  }

  const int m = spec.m;
  std::map<std::vector<int>, int> color_by_counts;
  Word word(w.anchor.begin(), w.anchor.end());
  std::vector<Letter> inner(static_cast<size_t>(m), 0);
  while (true) {
    std::vector<int> counts(static_cast<size_t>(h), 0);
    for (int i = 0; i < m; ++i) {
      word[static_cast<size_t>(w.positions[static_cast<size_t>(i)])] = inner[static_cast<size_t>(i)];
      ++counts[static_cast<size_t>(inner[static_cast<size_t>(i)])];
    }
    int color = d.color_of(rank_word(word, h));
    auto [it, inserted] = color_by_counts.emplace(std::move(counts), color);
    if (!inserted && it->second != color) return false;
    int i = m - 1;
    while (i >= 0 && inner[static_cast<size_t>(i)] == h - 1) inner[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
    ++inner[static_cast<size_t>(i)];
  }
  return true;
}

bool verify_ap(const KindSpec& spec, int size, const Coloring& d, const ApWitness& w) {
  require(w.step > 0, "verify: progression step must be positive");
  require(w.start >= 0, "verify: progression start must be nonnegative");
  require(w.start + static_cast<long long>(spec.m - 1) * w.step < size,
          "verify: progression leaves the interval");
  int color = d.color_of(static_cast<PointRank>(w.start));
  for (int i = 1; i < spec.m; ++i)
    if (d.color_of(static_cast<PointRank>(w.start + i * w.step)) != color) return false;
  return true;
}

bool verify_gw(const KindSpec& spec, int size, const Coloring& d, const GwWitness& w) {
  const int h = spec.h;
  require(static_cast<int>(w.corner.size()) == h, "verify: corner dimension mismatch");
  require(w.step > 0, "verify: grid step must be positive");
  for (long long c : w.corner)
    require(c >= 0 && c + w.step * spec.m < size, "verify: grid copy leaves the ground");
  std::vector<int> idx(static_cast<size_t>(h), 0);
  int color = -1;
  while (true) {
    GridPoint p(static_cast<size_t>(h));
    for (int e = 0; e < h; ++e)
      p[static_cast<size_t>(e)] = static_cast<int>(w.corner[static_cast<size_t>(e)] +
                                                   w.step * idx[static_cast<size_t>(e)]);
    int c = d.color_of(rank_grid_point(p, size));
    if (color == -1) color = c;
    else if (c != color) return false;
    int e = h - 1;
    while (e >= 0 && idx[static_cast<size_t>(e)] == spec.m) idx[static_cast<size_t>(e--)] = 0;
    if (e < 0) break;
    ++idx[static_cast<size_t>(e)];
  }
  return true;
}

bool verify_oplus(const KindSpec& spec, int size, const Coloring& d, const OplusWitness& w) {
  const int h = spec.h;
  require(static_cast<int>(w.base.size()) == h, "verify: base dimension mismatch");
  require(w.step > 0, "verify: bump step must be positive");
  long long sum = 0;
  for (long long v : w.base) {
    require(v >= 0, "verify: base part negative");
    sum += v;
  }
  require(sum + w.step == size, "verify: base and step do not fill the total");
  int color = -1;
  for (Letter a = 0; a < h; ++a) {
    OmegaPoint bumped(w.base.begin(), w.base.end());
    bumped[static_cast<size_t>(a)] += static_cast<int>(w.step);
    int c = d.color_of(omega_rank(bumped));
    if (color == -1) color = c;
    else if (c != color) return false;
  }
  return true;
}

}  // namespace

bool verify_witness(const KindSpec& spec, int size, const Coloring& d, const Witness& w) {
  spec.validate();
  d.validate();
  require(d.ground == spec.ground_for(size), "verify: coloring ground mismatch");
  require(d.colors == spec.c, "verify: color count mismatch");
  switch (spec.kind) {
    case Kind::HJ:
    case Kind::HJEQ:
    case Kind::F8:
    case Kind::F9:
    case Kind::F8S:
    case Kind::F9S:
    case Kind::F9SN: {
      const auto* s = std::get_if<SubspaceWitness>(&w);
      require(s != nullptr, "verify: expected a subspace witness");
      return verify_subspace(spec, size, d, *s);
    }
    case Kind::F13: {
      const auto* f = std::get_if<F13Witness>(&w);
      require(f != nullptr, "verify: expected an f13 witness");
      return verify_f13(spec, size, d, *f);
    }
    case Kind::VDW: {
      const auto* a = std::get_if<ApWitness>(&w);
      require(a != nullptr, "verify: expected a progression witness");
      return verify_ap(spec, size, d, *a);
    }
    case Kind::GW: {
      const auto* g = std::get_if<GwWitness>(&w);
      require(g != nullptr, "verify: expected a grid witness");
      return verify_gw(spec, size, d, *g);
    }
    case Kind::OPLUS: {
      const auto* o = std::get_if<OplusWitness>(&w);
      require(o != nullptr, "verify: expected a bump witness");
      return verify_oplus(spec, size, d, *o);
    }
  }
  return false;
}

}  // namespace hjw
