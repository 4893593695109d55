#include "hjw/reductions.hpp"

#include <algorithm>
#include <numeric>

namespace hjw {

using nlohmann::json;

Word grid_flatten_map(const Word& eta, int n, int m, int h) {
  if (static_cast<int>(eta.size()) != n)
    throw std::invalid_argument("grid_flatten_map: word length mismatch");
  const std::uint64_t composite = checked_pow(static_cast<std::uint64_t>(h),
                                              static_cast<unsigned>(m));
  Word out(static_cast<size_t>(n) * static_cast<size_t>(m));
  for (int i = 0; i < n; ++i) {
    const Letter big = eta[static_cast<size_t>(i)];
    if (big < 0 || static_cast<std::uint64_t>(big) >= composite)
      throw std::invalid_argument("grid_flatten_map: composite letter out of range");
    Word tuple = unrank_word(static_cast<PointRank>(big), m, h);
    for (int l = 0; l < m; ++l)
      out[static_cast<size_t>(i) * m + l] = tuple[static_cast<size_t>(l)];
  }
  return out;
}

Coloring pullback_grid_flatten(const Coloring& d, int n, int m, int h) {
  d.validate();
  if (d.ground != Ground::cube(n * m, h))
    throw std::invalid_argument("pullback_grid_flatten: coloring must live on cube(n*m, h)");
  const int composite = static_cast<int>(checked_pow(static_cast<std::uint64_t>(h),
                                                     static_cast<unsigned>(m)));
  Coloring e;
  e.ground = Ground::cube(n, composite);
  e.colors = d.colors;
  const std::uint64_t points = e.ground.point_count();
  e.table.resize(static_cast<size_t>(points));
  for (PointRank r = 0; r < points; ++r) {
    Word eta = unrank_word(r, n, composite);
    e.table[static_cast<size_t>(r)] =
        static_cast<std::uint8_t>(d.color_of(rank_word(grid_flatten_map(eta, n, m, h), h)));
  }
  return e;
}

SubspaceWitness grid_lift_witness(const SubspaceWitness& line, const Coloring& d,
                                  int n, int m, int h) {
  const int composite = static_cast<int>(checked_pow(static_cast<std::uint64_t>(h),
                                                     static_cast<unsigned>(m)));
  Coloring e = pullback_grid_flatten(d, n, m, h);
  KindSpec line_kind{Kind::HJ, composite, d.colors, 1};
  if (!verify_witness(line_kind, n, e, Witness{line}))
    throw InvalidInputWitnessError("grid_lift_witness: input line fails against the pullback");

  const BlockSystem& src = line.system;
  SubspaceWitness out;
  out.system.k = n * m;
  out.system.anchor.assign(static_cast<size_t>(n) * m, kNoLetter);
  const std::vector<Pos>& moving = src.blocks.front();
  for (int l = 0; l < m; ++l) {
    std::vector<Pos> block;
    for (Pos i : moving) block.push_back(i * m + l);
    out.system.blocks.push_back(std::move(block));
  }
  std::sort(out.system.blocks.begin(), out.system.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (Pos i = 0; i < n; ++i) {
    Letter big = src.anchor[static_cast<size_t>(i)];
    if (big == kNoLetter) continue;
    Word tuple = unrank_word(static_cast<PointRank>(big), m, h);
    for (int l = 0; l < m; ++l)
      out.system.anchor[static_cast<size_t>(i) * m + l] = tuple[static_cast<size_t>(l)];
  }

  KindSpec target{Kind::HJEQ, h, d.colors, m};
  if (!verify_witness(target, n * m, d, Witness{out}))
    throw std::logic_error("grid_lift_witness: lifted witness failed re-verification");
  return out;
}

SubspaceWitness singleton_blocks(const F13Witness& w, const Coloring& d) {
  d.validate();
  if (d.ground.type != GroundType::Cube)
    throw std::invalid_argument("singleton_blocks: cube coloring required");
  KindSpec f13{Kind::F13, d.ground.h, d.colors, static_cast<int>(w.positions.size())};
  if (!verify_witness(f13, w.k, d, Witness{w}))
    throw InvalidInputWitnessError("singleton_blocks: input witness fails verification");

  SubspaceWitness out;
  out.system.k = w.k;
  for (Pos p : w.positions) out.system.blocks.push_back({p});
  out.system.anchor = w.anchor;

  // the unit-block kinds exist only when the alphabet divides the block
  // count; below that the conversion is still valid (profile-invariance on
  // unit blocks is the count condition already verified above)
  const int m = static_cast<int>(w.positions.size());
  if (m % d.ground.h == 0) {
    KindSpec target{Kind::F9SN, d.ground.h, d.colors, m, 1};
    if (!verify_witness(target, w.k, d, Witness{out}))
      throw std::logic_error("singleton_blocks: converted witness failed re-verification");
  }
  return out;
}

Word blocks_embed(const BlockSystem& s, const Word& eta, int h) {
  s.validate(h);
  if (static_cast<int>(eta.size()) != s.dim())
    throw std::invalid_argument("blocks_embed: one letter per block required");
  for (Letter a : eta)
    if (a < 0 || a >= h) throw std::invalid_argument("blocks_embed: invalid letter");
  return subspace_point(s, eta);
}

Coloring pullback_blocks_embed(const Coloring& d, const BlockSystem& s, bool verify_input) {
  d.validate();
  if (d.ground.type != GroundType::Cube)
    throw std::invalid_argument("pullback_blocks_embed: cube coloring required");
  const int h = d.ground.h;
  if (verify_input) {
    KindSpec f8s{Kind::F8S, h, d.colors, s.dim()};
    if (s.dim() % h != 0 || !verify_witness(f8s, d.ground.size, d, Witness{SubspaceWitness{s}}))
      throw InvalidInputWitnessError("pullback_blocks_embed: witness fails verification");
  }
  Coloring e;
  e.ground = Ground::cube(s.dim(), h);
  e.colors = d.colors;
  const std::uint64_t points = e.ground.point_count();
  e.table.resize(static_cast<size_t>(points));
  for (PointRank r = 0; r < points; ++r) {
    Word eta = unrank_word(r, s.dim(), h);
    e.table[static_cast<size_t>(r)] =
        static_cast<std::uint8_t>(d.color_of(rank_word(blocks_embed(s, eta, h), h)));
  }
  return e;
}

SubspaceWitness embed_lift_line(const SubspaceWitness& line_for_e, const BlockSystem& s,
                                const Coloring& d) {
  d.validate();
  const int h = d.ground.h;
  Coloring e = pullback_blocks_embed(d, s, /*verify_input=*/true);
  KindSpec line_kind{Kind::HJ, h, d.colors, 1};
  if (!verify_witness(line_kind, s.dim(), e, Witness{line_for_e}))
    throw InvalidInputWitnessError("embed_lift_line: input line fails against the pullback");

  const BlockSystem& src = line_for_e.system;
  SubspaceWitness out;
  out.system.k = s.k;
  out.system.anchor = s.anchor;  // start from the embedding anchor off all blocks
  std::vector<Pos> moving;
  for (Pos l : src.blocks.front())
    for (Pos t : s.blocks[static_cast<size_t>(l)]) moving.push_back(t);
  std::sort(moving.begin(), moving.end());
  out.system.blocks.push_back(std::move(moving));
  for (int l = 0; l < s.dim(); ++l) {
    Letter tau = src.anchor[static_cast<size_t>(l)];
    if (tau == kNoLetter) continue;  // a moving block
    for (Pos t : s.blocks[static_cast<size_t>(l)])
      out.system.anchor[static_cast<size_t>(t)] = tau;
  }

  if (!verify_witness(line_kind, s.k, d, Witness{out}))
    throw std::logic_error("embed_lift_line: lifted line failed re-verification");
  return out;
}

Word canonical_word(const OmegaPoint& counts, int total, int h) {
  if (static_cast<int>(counts.size()) != h)
    throw std::invalid_argument("canonical_word: one count per letter required");
  int sum = 0;
  for (int v : counts) {
    if (v < 0) throw std::invalid_argument("canonical_word: negative count");
    sum += v;
  }
  if (sum != total) throw std::invalid_argument("canonical_word: counts do not fill the total");
  Word w;
  w.reserve(static_cast<size_t>(total));
  for (Letter a = 0; a < h; ++a)
    w.insert(w.end(), static_cast<size_t>(counts[static_cast<size_t>(a)]), a);
  return w;
}

OmegaPoint grid_composition_image(const GridPoint& eta, int h, int n) {
  OmegaPoint out(static_cast<size_t>(h));
  long long sum = std::accumulate(eta.begin(), eta.end(), 0LL);
  for (int e = 0; e < h; ++e)
    out[static_cast<size_t>(e)] =
        static_cast<int>(h * static_cast<long long>(eta[static_cast<size_t>(e)]) + h * n - sum);
  return out;
}

OplusSolution solve_oplus_via_gallai_witt(const Coloring& d, int h, int n,
                                          const GwSearchFn& gw_search) {
  d.validate();
  if (h < 2)
    throw std::invalid_argument("solve_oplus_via_gallai_witt: needs at least two letters");
  const int total = h * h * n;
  if (d.ground != Ground::omega(total, h))
    throw std::invalid_argument("solve_oplus_via_gallai_witt: coloring must live on omega(h*h*n, h)");

  auto image = [&](const GridPoint& eta) { return grid_composition_image(eta, h, n); };

  Coloring e;
  e.ground = Ground::grid(h, n);
  e.colors = d.colors;
  const std::uint64_t points = e.ground.point_count();
  e.table.resize(static_cast<size_t>(points));
  for (PointRank r = 0; r < points; ++r)
    e.table[static_cast<size_t>(r)] =
        static_cast<std::uint8_t>(d.color_of(omega_rank(image(unrank_grid_point(r, h, n)))));

  std::optional<GwWitness> gw;
  if (gw_search) {
    gw = gw_search(e);
  } else {
    auto found = find_gallai_witt_witness(e, 1);
    if (found) gw = std::get<GwWitness>(*found);
  }
  if (!gw)
    throw PipelineError("oplus", "no monochromatic box at grid side " + std::to_string(n));

  const long long delta = gw->step;
  long long corner_sum = std::accumulate(gw->corner.begin(), gw->corner.end(), 0LL);
  const long long offset = static_cast<long long>(h) * n - corner_sum - delta;

  OplusSolution sol;
  sol.step = static_cast<long long>(h) * delta;
  for (int i = 0; i < h; ++i)
    sol.base.push_back(h * gw->corner[static_cast<size_t>(i)] + offset);

  // the bumped compositions are the images of the box's bumped corners
  long long base_sum = std::accumulate(sol.base.begin(), sol.base.end(), 0LL);
  if (base_sum + sol.step != total)
    throw std::logic_error("solve_oplus_via_gallai_witt: base and step do not fill the total");
  int color = -1;
  json bumps = json::array();
  for (int a = 0; a < h; ++a) {
    OmegaPoint bumped(sol.base.begin(), sol.base.end());
    bumped[static_cast<size_t>(a)] += static_cast<int>(sol.step);
    GridPoint corner(gw->corner.begin(), gw->corner.end());
    corner[static_cast<size_t>(a)] += static_cast<int>(delta);
    if (image(corner) != bumped)
      throw std::logic_error("solve_oplus_via_gallai_witt: bump does not match the box image");
    int cc = d.color_of(omega_rank(bumped));
    if (color == -1) color = cc;
    else if (cc != color)
      throw PipelineError("oplus", "grid witness does not yield a constant bump set");
    bumps.push_back(bumped);
  }

  sol.trace = {{"stage", "oplus-via-grid"},
               {"grid", {{"h", h}, {"n", n}}},
               {"corner", gw->corner},
               {"grid_step", delta},
               {"offset", offset},
               {"base", sol.base},
               {"step_used", sol.step},
               {"step_grid_reading", delta},
               {"bumps", bumps}};
  return sol;
}

PipelineResult find_monochromatic_line_main(const Coloring& d, const BlockSystem& s,
                                            const OplusRoute& route) {
  d.validate();
  if (d.ground.type != GroundType::Cube)
    throw std::invalid_argument("find_monochromatic_line_main: cube coloring required");
  const int h = d.ground.h;
  const int mstar = s.dim();
  json trace = json::array();

  // gate: the embedding witness must verify before anything runs
  KindSpec f8s{Kind::F8S, h, d.colors, mstar};
  if (mstar % h != 0 ||
      !verify_witness(f8s, d.ground.size, d, Witness{SubspaceWitness{s}}))
    throw InvalidInputWitnessError("find_monochromatic_line_main: embedding witness invalid");
  trace.push_back({{"stage", "input-witness"},
                   {"kind", "f8s"},
                   {"blocks", s.blocks},
                   {"cube_side", d.ground.size}});

  Coloring e = pullback_blocks_embed(d, s, /*verify_input=*/false);
  if (e.table.size() <= 4096)
    trace.push_back({{"stage", "pullback"}, {"table", e.encode_table()}});

  // coloring of the composition space through the canonical word
  Coloring comp;
  comp.ground = Ground::omega(mstar, h);
  comp.colors = d.colors;
  const std::uint64_t cpoints = comp.ground.point_count();
  comp.table.resize(static_cast<size_t>(cpoints));
  for (PointRank r = 0; r < cpoints; ++r) {
    Word g = canonical_word(omega_unrank(r, mstar, h), mstar, h);
    comp.table[static_cast<size_t>(r)] = static_cast<std::uint8_t>(e.color_of(rank_word(g, h)));
  }
  if (comp.table.size() <= 4096)
    trace.push_back({{"stage", "composition-coloring"}, {"table", comp.encode_table()}});

  OplusSolution sol;
  if (route.mode == OplusRoute::Mode::GallaiWitt) {
    if (h * h * route.n != mstar)
      throw PipelineError("oplus", "grid side does not match the block count");
    GwSearchFn search;
    if (route.planted) {
      GwWitness planted = *route.planted;
      search = [planted](const Coloring&) { return std::optional<GwWitness>{planted}; };
    }
    sol = solve_oplus_via_gallai_witt(comp, h, route.n, search);
  } else {
    auto w = find_oplus_witness(comp);
    if (!w) throw PipelineError("oplus", "no bump witness on the composition space");
    const auto& ow = std::get<OplusWitness>(*w);
    sol.base = ow.base;
    sol.step = ow.step;
    sol.trace = {{"stage", "oplus-direct"}, {"base", sol.base}, {"step_used", sol.step}};
  }
  trace.push_back(sol.trace);

  // line for the pullback: letter intervals from the base, moving tail block
  SubspaceWitness line_e;
  line_e.system.k = mstar;
  line_e.system.anchor.assign(static_cast<size_t>(mstar), kNoLetter);
  {
    int at = 0;
    for (Letter a = 0; a < h; ++a)
      for (long long i = 0; i < sol.base[static_cast<size_t>(a)]; ++i)
        line_e.system.anchor[static_cast<size_t>(at++)] = a;
    std::vector<Pos> moving;
    for (; at < mstar; ++at) moving.push_back(at);
    line_e.system.blocks.push_back(std::move(moving));
  }
  KindSpec line_kind{Kind::HJ, h, d.colors, 1};
  if (!verify_witness(line_kind, mstar, e, Witness{line_e}))
    throw PipelineError("line-for-pullback", "constructed line is not monochromatic");
  trace.push_back({{"stage", "line-for-pullback"},
                   {"moving", line_e.system.blocks.front()},
                   {"anchor_tail", static_cast<int>(mstar - sol.step)}});

  SubspaceWitness lifted = embed_lift_line(line_e, s, d);
  if (!verify_witness(line_kind, d.ground.size, d, Witness{lifted}))
    throw PipelineError("final-verify", "lifted line is not monochromatic");
  trace.push_back({{"stage", "lift"}, {"witness", witness_to_string(Witness{lifted})}});

  return PipelineResult{std::move(lifted), std::move(trace)};
}

}  // namespace hjw
