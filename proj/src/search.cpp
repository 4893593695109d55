#include "hjw/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace hjw {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// candidate enumeration
// ---------------------------------------------------------------------------

void subspace_candidates(const KindSpec& spec, int size,
                         const std::function<bool(Candidate&&)>& fn) {
  const int h = spec.h;
  const int m = spec.m;
  BlockConstraint bc = BlockConstraint::Any;
  if (spec.kind == Kind::HJEQ || spec.kind == Kind::F9 || spec.kind == Kind::F9S)
    bc = BlockConstraint::EqualSize;
  if (spec.kind == Kind::F9SN) bc = BlockConstraint::FixedSize;
  const bool mono = spec.kind == Kind::HJ || spec.kind == Kind::HJEQ;
  const bool balanced = spec.kind == Kind::F8 || spec.kind == Kind::F9;

  for_each_block_system(size, m, h, bc, spec.n, [&](const BlockSystem& s) {
    Candidate cand;
    cand.witness = SubspaceWitness{s};
    std::vector<Letter> letters(static_cast<size_t>(m), 0);
    std::map<std::vector<int>, std::vector<PointRank>> groups;
    std::vector<PointRank> single;
    while (true) {
      PointRank r = rank_word(subspace_point(s, letters), h);
      if (mono) {
        single.push_back(r);
      } else {
        std::vector<int> prof(static_cast<size_t>(h), 0);
        for (Letter a : letters) ++prof[static_cast<size_t>(a)];
        if (balanced) {
          if (std::all_of(prof.begin(), prof.end(), [&](int v) { return v == m / h; }))
            single.push_back(r);
        } else {
          groups[prof].push_back(r);
        }
      }
      int i = m - 1;
      while (i >= 0 && letters[static_cast<size_t>(i)] == h - 1) letters[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++letters[static_cast<size_t>(i)];
    }
    if (mono || balanced) {
      if (single.size() >= 2) cand.classes.push_back(std::move(single));
    } else {
      for (auto& [prof, pts] : groups)
        if (pts.size() >= 2) cand.classes.push_back(std::move(pts));
    }
    return fn(std::move(cand));
  });
}

void f13_candidates(const KindSpec& spec, int size,
                    const std::function<bool(Candidate&&)>& fn) {
  const int h = spec.h;
  const int m = spec.m;
  if (m > size) return;
  std::vector<Pos> sel;
  std::function<bool(Pos, int)> rec = [&](Pos start, int need) -> bool {
    if (need == 0) {
      std::vector<Pos> rest;
      for (Pos p = 0; p < size; ++p)
        if (!std::binary_search(sel.begin(), sel.end(), p)) rest.push_back(p);
      std::vector<Letter> a(rest.size(), 0);
      while (true) {
        F13Witness w;
        w.k = size;
        w.positions = sel;
        w.anchor.assign(static_cast<size_t>(size), kNoLetter);
        for (size_t i = 0; i < rest.size(); ++i)
          w.anchor[static_cast<size_t>(rest[i])] = a[i];
        Candidate cand;
        std::map<std::vector<int>, std::vector<PointRank>> groups;
        Word word(w.anchor.begin(), w.anchor.end());
        std::vector<Letter> inner(static_cast<size_t>(m), 0);
        while (true) {
          std::vector<int> counts(static_cast<size_t>(h), 0);
          for (int i = 0; i < m; ++i) {
            word[static_cast<size_t>(sel[static_cast<size_t>(i)])] = inner[static_cast<size_t>(i)];
            ++counts[static_cast<size_t>(inner[static_cast<size_t>(i)])];
          }
          groups[counts].push_back(rank_word(word, h));
          int i = m - 1;
          while (i >= 0 && inner[static_cast<size_t>(i)] == h - 1) inner[static_cast<size_t>(i--)] = 0;
          if (i < 0) break;
          ++inner[static_cast<size_t>(i)];
        }
        for (auto& [counts, pts] : groups)
          if (pts.size() >= 2) cand.classes.push_back(std::move(pts));
        cand.witness = std::move(w);
        if (!fn(std::move(cand))) return false;
        size_t i = a.size();
        while (i > 0 && a[i - 1] == h - 1) a[--i] = 0;
        if (i == 0) break;
        ++a[i - 1];
      }
      return true;
    }
    for (Pos p = start; p <= size - need; ++p) {
      sel.push_back(p);
      bool keep = rec(p + 1, need - 1);
      sel.pop_back();
      if (!keep) return false;
    }
    return true;
  };
  rec(0, m);
}

void ap_candidates(const KindSpec& spec, int size,
                   const std::function<bool(Candidate&&)>& fn) {
  const int m = spec.m;
  for (long long a = 0; a < size; ++a)
    for (long long step = 1; a + static_cast<long long>(m - 1) * step < size; ++step) {
      Candidate cand;
      cand.witness = ApWitness{a, step};
      std::vector<PointRank> pts;
      for (int i = 0; i < m; ++i) pts.push_back(static_cast<PointRank>(a + i * step));
      if (pts.size() >= 2) cand.classes.push_back(std::move(pts));
      if (!fn(std::move(cand))) return;
      if (m == 1) break;  // step is irrelevant for single points
    }
}

void gw_candidates(const KindSpec& spec, int size,
                   const std::function<bool(Candidate&&)>& fn) {
  const int h = spec.h;
  const int m = spec.m;
  const std::uint64_t points = Ground::grid(h, size).point_count();
  for (PointRank cr = 0; cr < points; ++cr) {
    GridPoint corner = unrank_grid_point(cr, h, size);
    long long max_coord = *std::max_element(corner.begin(), corner.end());
    for (long long step = 1; max_coord + step * m < size; ++step) {
      Candidate cand;
      GwWitness w;
      w.corner.assign(corner.begin(), corner.end());
      w.step = step;
      cand.witness = std::move(w);
      std::vector<PointRank> pts;
      std::vector<int> idx(static_cast<size_t>(h), 0);
      while (true) {
        GridPoint p = corner;
        for (int e = 0; e < h; ++e)
          p[static_cast<size_t>(e)] += static_cast<int>(step) * idx[static_cast<size_t>(e)];
        pts.push_back(rank_grid_point(p, size));
        int e = h - 1;
        while (e >= 0 && idx[static_cast<size_t>(e)] == m) idx[static_cast<size_t>(e--)] = 0;
        if (e < 0) break;
        ++idx[static_cast<size_t>(e)];
      }
      if (pts.size() >= 2) cand.classes.push_back(std::move(pts));
      if (!fn(std::move(cand))) return;
    }
  }
}

void oplus_candidates(const KindSpec& spec, int size,
                      const std::function<bool(Candidate&&)>& fn) {
  const int h = spec.h;
  for (int step = 1; step <= size; ++step)
    for (const OmegaPoint& base : omega_enumerate(size - step, h)) {
      Candidate cand;
      OplusWitness w;
      w.base.assign(base.begin(), base.end());
      w.step = step;
      cand.witness = std::move(w);
      std::vector<PointRank> pts;
      for (Letter a = 0; a < h; ++a) {
        OmegaPoint bumped = base;
        bumped[static_cast<size_t>(a)] += step;
        pts.push_back(omega_rank(bumped));
      }
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      if (pts.size() >= 2) cand.classes.push_back(std::move(pts));
      if (!fn(std::move(cand))) return;
    }
}

}  // namespace

void for_each_candidate(const KindSpec& spec, int size,
                        const std::function<bool(Candidate&&)>& fn) {
  spec.validate();
  switch (spec.kind) {
    case Kind::HJ:
    case Kind::HJEQ:
    case Kind::F8:
    case Kind::F9:
    case Kind::F8S:
    case Kind::F9S:
    case Kind::F9SN:
      subspace_candidates(spec, size, fn);
      return;
    case Kind::F13:
      f13_candidates(spec, size, fn);
      return;
    case Kind::VDW:
      ap_candidates(spec, size, fn);
      return;
    case Kind::GW:
      gw_candidates(spec, size, fn);
      return;
    case Kind::OPLUS:
      oplus_candidates(spec, size, fn);
      return;
  }
}

namespace {

// ---------------------------------------------------------------------------
// symmetry permutations on point ranks
// ---------------------------------------------------------------------------

std::vector<std::vector<std::uint32_t>> rank_permutations(const Ground& g,
                                                          bool value_symmetry,
                                                          bool coord_symmetry) {
  std::vector<std::vector<std::uint32_t>> sigmas;
  const std::uint64_t points = g.point_count();
  if (points > (1u << 22)) return sigmas;

  auto add_sigma = [&](const std::function<PointRank(PointRank)>& image) {
    std::vector<std::uint32_t> sig(points);
    bool identity = true;
    for (PointRank r = 0; r < points; ++r) {
      sig[static_cast<size_t>(r)] = static_cast<std::uint32_t>(image(r));
      identity &= sig[static_cast<size_t>(r)] == r;
    }
    if (!identity) sigmas.push_back(std::move(sig));
  };

  switch (g.type) {
    case GroundType::Cube: {
      const int k = g.size, h = g.h;
      if (value_symmetry && h >= 2 && h <= 6) {
        std::vector<Letter> perm(static_cast<size_t>(h));
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
          add_sigma([&](PointRank r) {
            Word w = unrank_word(r, k, h);
            for (Letter& a : w) a = perm[static_cast<size_t>(a)];
            return rank_word(w, h);
          });
        }
      }
      if (coord_symmetry && k >= 2 && k <= 6) {
        std::vector<Pos> perm(static_cast<size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
          add_sigma([&](PointRank r) {
            Word w = unrank_word(r, k, h);
            Word v(w.size());
            for (int i = 0; i < k; ++i)
              v[static_cast<size_t>(i)] = w[static_cast<size_t>(perm[static_cast<size_t>(i)])];
            return rank_word(v, h);
          });
        }
      }
      break;
    }
    case GroundType::Grid: {
      const int h = g.h, n = g.size;
      if (value_symmetry && h >= 2 && h <= 6) {
        std::vector<int> perm(static_cast<size_t>(h));
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
          add_sigma([&](PointRank r) {
            GridPoint p = unrank_grid_point(r, h, n);
            GridPoint q(p.size());
            for (int i = 0; i < h; ++i)
              q[static_cast<size_t>(i)] = p[static_cast<size_t>(perm[static_cast<size_t>(i)])];
            return rank_grid_point(q, n);
          });
        }
      }
      break;
    }
    case GroundType::Omega: {
      const int total = g.size, h = g.h;
      if (value_symmetry && h >= 2 && h <= 6) {
        std::vector<int> perm(static_cast<size_t>(h));
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
          add_sigma([&](PointRank r) {
            OmegaPoint p = omega_unrank(r, total, h);
            OmegaPoint q(p.size());
            for (int i = 0; i < h; ++i)
              q[static_cast<size_t>(i)] = p[static_cast<size_t>(perm[static_cast<size_t>(i)])];
            return omega_rank(q);
          });
        }
      }
      break;
    }
    case GroundType::Interval:
      break;
  }
  return sigmas;
}

// ---------------------------------------------------------------------------
// DFS over color tables
// ---------------------------------------------------------------------------

struct SearchContext {
  KindSpec spec;
  int size = 0;
  SearchOptions opts;
  std::uint64_t points = 0;
  int colors = 1;
  bool vacuous_witness = false;  // some candidate can never be violated

  // flattened classes: class -> points, class -> owning candidate
  std::vector<std::vector<std::uint32_t>> class_pts;
  std::vector<std::uint32_t> class_owner;
  std::vector<std::uint32_t> cand_size;   // points per candidate (over kept classes)
  std::vector<std::vector<std::uint32_t>> point_classes;  // point -> class ids
  std::vector<std::vector<std::uint32_t>> sigmas;
};

SearchContext build_context(const KindSpec& spec, int size, const SearchOptions& opts) {
  SearchContext ctx;
  ctx.spec = spec;
  ctx.size = size;
  ctx.opts = opts;
  ctx.colors = spec.c;
  ctx.points = spec.ground_for(size).point_count();
  if (ctx.points > (1u << 22)) throw std::invalid_argument("search: ground too large");
  ctx.point_classes.resize(static_cast<size_t>(ctx.points));

  for_each_candidate(spec, size, [&](Candidate&& cand) {
    if (cand.classes.empty()) {
      ctx.vacuous_witness = true;  // this candidate is a witness for every coloring
      return false;
    }
    const std::uint32_t ci = static_cast<std::uint32_t>(ctx.cand_size.size());
    std::uint32_t total = 0;
    for (auto& cls : cand.classes) {
      const std::uint32_t gid = static_cast<std::uint32_t>(ctx.class_pts.size());
      for (PointRank p : cls) ctx.point_classes[static_cast<size_t>(p)].push_back(gid);
      total += static_cast<std::uint32_t>(cls.size());
      std::vector<std::uint32_t> pts(cls.begin(), cls.end());
      ctx.class_pts.push_back(std::move(pts));
      ctx.class_owner.push_back(ci);
    }
    ctx.cand_size.push_back(total);
    return true;
  });

  if (!ctx.vacuous_witness)
    ctx.sigmas = rank_permutations(spec.ground_for(size), opts.value_symmetry,
                                   opts.coord_symmetry);
  return ctx;
}

class Searcher {
 public:
  Searcher(const SearchContext& ctx, Clock::time_point deadline,
           std::uint64_t max_nodes, std::atomic<bool>* cancel)
      : ctx_(ctx), deadline_(deadline), max_nodes_(max_nodes), cancel_(cancel) {
    color_.assign(static_cast<size_t>(ctx.points), -1);
    forbidden_.assign(static_cast<size_t>(ctx.points), 0);
    cand_unassigned_ = ctx.cand_size;
    cand_violated_.assign(ctx.cand_size.size(), 0);
    class_color_.assign(ctx.class_pts.size(), -1);
    sym_idx_.assign(ctx.sigmas.size(), 0);
    sym_settled_.assign(ctx.sigmas.size(), 0);
  }

  // Assigns point p; on conflict rolls itself back and returns false.
  bool try_assign(std::uint32_t p, int g) {
    const size_t mark = trail_.size();
    color_[p] = static_cast<std::int16_t>(g);
    bool conflict = false;
    at_one_.clear();
    for (std::uint32_t cls : ctx_.point_classes[p]) {
      const std::uint32_t cand = ctx_.class_owner[cls];
      --cand_unassigned_[cand];
      if (cand_violated_[cand]) continue;
      if (class_color_[cls] == -1) {
        class_color_[cls] = static_cast<std::int16_t>(g);
        trail_.push_back({EntryKind::ClassColor, cls, 0, 0});
      } else if (class_color_[cls] != g) {
        cand_violated_[cand] = 1;
        trail_.push_back({EntryKind::Violated, cand, 0, 0});
        continue;
      }
      if (cand_unassigned_[cand] == 0) conflict = true;
      else if (cand_unassigned_[cand] == 1) at_one_.push_back(cand);
    }

    if (!conflict) conflict = !advance_symmetry(p);
    if (!conflict) conflict = !propagate();

    if (conflict) {
      rollback(mark, p);
      return false;
    }
    return true;
  }

  // true = bad coloring found (in colors()); aborted() distinguishes budget.
  bool dfs(std::uint32_t p, int max_used) {
    if (p == ctx_.points) return true;
    const int c = ctx_.colors;
    const int cap = ctx_.opts.color_symmetry ? std::min(c - 1, max_used + 1) : c - 1;
    for (int g = 0; g <= cap; ++g) {
      if (forbidden_[p] >> g & 1u) continue;
      if (++nodes_ > max_nodes_ || (nodes_ % 1024 == 0 && over_budget())) {
        aborted_ = true;
        return false;
      }
      if (aborted_) return false;
      const size_t mark = trail_.size();
      if (try_assign(p, g)) {
        if (dfs(p + 1, std::max(max_used, g))) return true;
        rollback(mark, p);
        if (aborted_) return false;
      }
    }
    return false;
  }

  bool aborted() const { return aborted_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::int16_t>& colors() const { return color_; }

 private:
  enum class EntryKind : std::uint8_t { ClassColor, Violated, Forbid, Sym };
  struct Entry {
    EntryKind kind;
    std::uint32_t a;  // class / candidate / point / sigma id
    std::uint32_t b;  // old mask / old idx
    std::uint8_t c;   // old settled
  };

  bool over_budget() {
    if (nodes_ > max_nodes_ || Clock::now() > deadline_ ||
        (cancel_ != nullptr && cancel_->load(std::memory_order_relaxed))) {
      aborted_ = true;
      return true;
    }
    return false;
  }

  bool advance_symmetry(std::uint32_t p) {
    for (std::uint32_t s = 0; s < ctx_.sigmas.size(); ++s) {
      if (sym_settled_[s]) continue;
      const auto& sig = ctx_.sigmas[s];
      std::uint32_t idx = sym_idx_[s];
      const std::uint32_t old_idx = idx;
      bool settled = false, bad = false;
      while (idx <= p && sig[idx] <= p) {
        const int a = color_[idx];
        const int b = color_[sig[idx]];
        if (a < b) {
          settled = true;
          break;
        }
        if (a > b) {
          bad = true;
          break;
        }
        ++idx;
      }
      if (idx != old_idx || settled) {
        trail_.push_back({EntryKind::Sym, s, old_idx, sym_settled_[s]});
        sym_idx_[s] = idx;
        sym_settled_[s] = settled ? 1 : 0;
      }
      if (bad) return false;
    }
    return true;
  }

  bool propagate() {
    if (ctx_.colors > 31) return true;
    const std::uint32_t full = (1u << ctx_.colors) - 1u;
    for (std::uint32_t cand : at_one_) {
      if (cand_violated_[cand] || cand_unassigned_[cand] != 1) continue;
      // locate the single unassigned point; completing its class kills us
      bool handled = false;
      for (std::uint32_t cls = first_class_of(cand);
           !handled && cls < ctx_.class_pts.size() && ctx_.class_owner[cls] == cand; ++cls) {
        for (std::uint32_t q : ctx_.class_pts[cls]) {
          if (color_[q] != -1) continue;
          const int forced_away = class_color_[cls];
          if (forced_away >= 0) {
            const std::uint32_t bit = 1u << forced_away;
            if (!(forbidden_[q] & bit)) {
              trail_.push_back({EntryKind::Forbid, q, forbidden_[q], 0});
              forbidden_[q] |= bit;
              if (forbidden_[q] == full) return false;  // no color left for q
            }
          }
          handled = true;
          break;
        }
      }
    }
    return true;
  }

  std::uint32_t first_class_of(std::uint32_t cand) const {
    // classes of a candidate are contiguous by construction
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(ctx_.class_owner.size());
    while (lo < hi) {
      std::uint32_t mid = (lo + hi) / 2;
      if (ctx_.class_owner[mid] < cand) lo = mid + 1;
      else hi = mid;
    }
    return lo;
  }

  void rollback(size_t mark, std::uint32_t p) {
    while (trail_.size() > mark) {
      const Entry e = trail_.back();
      trail_.pop_back();
      switch (e.kind) {
        case EntryKind::ClassColor:
          class_color_[e.a] = -1;
          break;
        case EntryKind::Violated:
          cand_violated_[e.a] = 0;
          break;
        case EntryKind::Forbid:
          forbidden_[e.a] = e.b;
          break;
        case EntryKind::Sym:
          sym_idx_[e.a] = e.b;
          sym_settled_[e.a] = e.c;
          break;
      }
    }
    for (std::uint32_t cls : ctx_.point_classes[p]) ++cand_unassigned_[ctx_.class_owner[cls]];
    color_[p] = -1;
  }

  const SearchContext& ctx_;
  Clock::time_point deadline_;
  std::uint64_t max_nodes_;
  std::atomic<bool>* cancel_;
  std::vector<std::int16_t> color_;
  std::vector<std::uint32_t> forbidden_;
  std::vector<std::uint32_t> cand_unassigned_;
  std::vector<std::uint8_t> cand_violated_;
  std::vector<std::int16_t> class_color_;
  std::vector<std::uint32_t> sym_idx_;
  std::vector<std::uint8_t> sym_settled_;
  std::vector<std::uint32_t> at_one_;
  std::vector<Entry> trail_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

Coloring coloring_from(const SearchContext& ctx, const std::vector<std::int16_t>& colors) {
  Coloring d;
  d.ground = ctx.spec.ground_for(ctx.size);
  d.colors = ctx.colors;
  d.table.reserve(colors.size());
  for (std::int16_t v : colors) d.table.push_back(static_cast<std::uint8_t>(v));
  d.validate();
  return d;
}

}  // namespace

SearchVerdict exists_bad_coloring(const KindSpec& spec, int size, const SearchOptions& opts) {
  spec.validate();
  if (!spec.size_admissible(size, opts.enforce_divisibility))
    throw std::invalid_argument("exists_bad_coloring: size not admissible for this kind");

  const auto t0 = Clock::now();
  SearchContext ctx = build_context(spec, size, opts);
  SearchVerdict verdict;
  verdict.stats.threads = std::max(1, opts.threads);
  verdict.stats.seed = opts.seed;

  if (ctx.vacuous_witness) {
    verdict.kind = SearchVerdict::Kind::NoneExists;
    verdict.stats.seconds = seconds_since(t0);
    return verdict;
  }

  // cap the horizon so the conversion to the clock's tick type cannot overflow
  const auto deadline =
      t0 + std::chrono::duration_cast<Clock::duration>(
               std::chrono::duration<double>(std::clamp(opts.budget.max_seconds, 0.0, 1e9)));

  std::optional<Coloring> bad;
  std::uint64_t nodes = 0;
  bool exceeded = false;

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    Searcher s(ctx, deadline, opts.budget.max_nodes, nullptr);
    if (s.dfs(0, -1)) bad = coloring_from(ctx, s.colors());
    nodes = s.nodes();
    exceeded = s.aborted();
  } else {
    // split the tree by color-table prefix; workers pull prefixes from a counter
    int depth = 0;
    std::uint64_t combos = 1;
    while (depth < static_cast<int>(ctx.points) && combos < static_cast<std::uint64_t>(threads) * 8 &&
           combos * static_cast<std::uint64_t>(ctx.colors) <= 4096)
      combos *= static_cast<std::uint64_t>(ctx.colors), ++depth;

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> cancel{false};
    std::atomic<std::uint64_t> node_sum{0};
    std::atomic<bool> any_exceeded{false};
    std::mutex result_mu;

    auto work = [&]() {
      while (!cancel.load(std::memory_order_relaxed)) {
        const std::uint64_t prefix = next.fetch_add(1);
        if (prefix >= combos) break;
        Searcher s(ctx, deadline, opts.budget.max_nodes, &cancel);
        // replay the prefix (base-c digits, big-endian over the first points)
        bool alive = true;
        int max_used = -1;
        std::uint64_t replayed = 0;
        for (int i = 0; i < depth && alive; ++i) {
          std::uint64_t div = 1;
          for (int j = i + 1; j < depth; ++j) div *= static_cast<std::uint64_t>(ctx.colors);
          const int g = static_cast<int>(prefix / div % static_cast<std::uint64_t>(ctx.colors));
          if (opts.color_symmetry && g > max_used + 1) alive = false;
          else {
            ++replayed;
            alive = s.try_assign(static_cast<std::uint32_t>(i), g);
          }
          max_used = std::max(max_used, g);
        }
        if (alive && s.dfs(static_cast<std::uint32_t>(depth), max_used)) {
          std::lock_guard<std::mutex> lock(result_mu);
          if (!bad) bad = coloring_from(ctx, s.colors());
          cancel.store(true);
        }
        if (s.aborted()) any_exceeded.store(true);
        node_sum.fetch_add(s.nodes() + replayed);
      }
    };

    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    nodes = node_sum.load();
    exceeded = any_exceeded.load() && !bad;
  }

  verdict.stats.nodes = nodes;
  verdict.stats.seconds = seconds_since(t0);
  if (bad) {
    // the table defeats every candidate; cross-check against the finders
    if (find_witness(spec, *bad).has_value())
      throw std::logic_error("exists_bad_coloring: internal disagreement with finders");
    verdict.kind = SearchVerdict::Kind::Bad;
    verdict.bad = std::move(bad);
  } else if (exceeded) {
    verdict.kind = SearchVerdict::Kind::BudgetExceeded;
  } else {
    verdict.kind = SearchVerdict::Kind::NoneExists;
  }
  return verdict;
}

SearchVerdict exists_bad_coloring_naive(const KindSpec& spec, int size) {
  spec.validate();
  const auto t0 = Clock::now();
  Ground g = spec.ground_for(size);
  const std::uint64_t points = g.point_count();
  double space = std::pow(static_cast<double>(spec.c), static_cast<double>(points));
  if (space > 1e8) throw std::invalid_argument("naive search: coloring space too large");

  Coloring d;
  d.ground = g;
  d.colors = spec.c;
  d.table.assign(static_cast<size_t>(points), 0);
  SearchVerdict verdict;
  std::uint64_t visited = 0;
  while (true) {
    ++visited;
    if (!find_witness(spec, d).has_value()) {
      verdict.kind = SearchVerdict::Kind::Bad;
      verdict.bad = d;
      break;
    }
    // next table, odometer over the last position
    size_t i = d.table.size();
    while (i > 0 && d.table[i - 1] == spec.c - 1) d.table[--i] = 0;
    if (i == 0) {
      verdict.kind = SearchVerdict::Kind::NoneExists;
      break;
    }
    ++d.table[i - 1];
  }
  verdict.stats.nodes = visited;
  verdict.stats.seconds = seconds_since(t0);
  return verdict;
}

NumberResult compute_number(const KindSpec& spec, int max_size, const SearchOptions& opts) {
  spec.validate();
  const auto t0 = Clock::now();
  NumberResult res;
  res.spec = spec;
  res.lower = spec.first_admissible(opts.enforce_divisibility);
  res.total.threads = std::max(1, opts.threads);
  res.total.seed = opts.seed;

  for (int s = spec.first_admissible(opts.enforce_divisibility); s <= max_size;
       s = spec.next_admissible(s, opts.enforce_divisibility)) {
    SearchOptions step_opts = opts;
    step_opts.budget.max_seconds = opts.budget.max_seconds - seconds_since(t0);
    if (step_opts.budget.max_seconds <= 0) {
      res.budget_exhausted = true;
      break;
    }
    SearchVerdict v = exists_bad_coloring(spec, s, step_opts);
    res.total.nodes += v.stats.nodes;
    switch (v.kind) {
      case SearchVerdict::Kind::Bad:
        res.last_bad = {s, std::move(*v.bad)};
        res.lower = spec.next_admissible(s, opts.enforce_divisibility);
        break;
      case SearchVerdict::Kind::NoneExists:
        res.value = s;
        res.upper = s;
        res.exhaustion = {s, v.stats};
        break;
      case SearchVerdict::Kind::BudgetExceeded:
        res.budget_exhausted = true;
        break;
    }
    if (res.value || res.budget_exhausted) break;
  }
  res.total.seconds = seconds_since(t0);
  return res;
}

LiftedRestriction lift_witness_up(const KindSpec& spec, const Coloring& d_up,
                                  Letter anchor_letter) {
  spec.validate();
  d_up.validate();
  const Ground up = d_up.ground;
  const int k = up.size - 1;
  if (k < 0) throw std::invalid_argument("lift_witness_up: nothing to restrict");
  if (up != spec.ground_for(k + 1))
    throw std::invalid_argument("lift_witness_up: ground does not match the kind");

  LiftedRestriction out;
  out.spec = spec;
  out.reduced_size = k;
  out.anchor_letter = anchor_letter;
  Ground down = spec.ground_for(k);
  Coloring d;
  d.ground = down;
  d.colors = d_up.colors;
  const std::uint64_t points = down.point_count();
  d.table.resize(static_cast<size_t>(points));
  for (PointRank r = 0; r < points; ++r) {
    PointRank target = 0;
    switch (down.type) {
      case GroundType::Cube: {
        if (anchor_letter < 0 || anchor_letter >= up.h)
          throw std::invalid_argument("lift_witness_up: anchor letter out of range");
        Word w = unrank_word(r, k, down.h);
        w.push_back(anchor_letter);
        target = rank_word(w, up.h);
        break;
      }
      case GroundType::Interval:
        target = r;
        break;
      case GroundType::Grid: {
        GridPoint p = unrank_grid_point(r, down.h, down.size);
        target = rank_grid_point(p, up.size);
        break;
      }
      case GroundType::Omega: {
        if (anchor_letter < 0 || anchor_letter >= up.h)
          throw std::invalid_argument("lift_witness_up: anchor letter out of range");
        OmegaPoint p = omega_unrank(r, down.size, down.h);
        p[static_cast<size_t>(anchor_letter)] += 1;
        target = omega_rank(p);
        break;
      }
    }
    d.table[static_cast<size_t>(r)] = static_cast<std::uint8_t>(d_up.color_of(target));
  }
  d.validate();
  out.restricted = std::move(d);
  return out;
}

Witness LiftedRestriction::lift(const Witness& w) const {
  Witness out = w;
  switch (spec.ground_for(reduced_size).type) {
    case GroundType::Cube: {
      if (auto* s = std::get_if<SubspaceWitness>(&out)) {
        s->system.k += 1;
        s->system.anchor.push_back(anchor_letter);
      } else if (auto* f = std::get_if<F13Witness>(&out)) {
        f->k += 1;
        f->anchor.push_back(anchor_letter);
      } else {
        throw std::invalid_argument("lift: unexpected witness shape for a cube kind");
      }
      break;
    }
    case GroundType::Interval:
    case GroundType::Grid:
      break;  // the witness carries over unchanged
    case GroundType::Omega: {
      auto* o = std::get_if<OplusWitness>(&out);
      if (o == nullptr)
        throw std::invalid_argument("lift: unexpected witness shape for a bump kind");
      o->base[static_cast<size_t>(anchor_letter)] += 1;
      break;
    }
  }
  return out;
}

}  // namespace hjw
