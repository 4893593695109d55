#include "hjw/search.hpp"

#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace hjw;

TEST_CASE("bad-coloring search on single lines") {
  KindSpec hj{Kind::HJ, 2, 2, 1};

  auto v1 = exists_bad_coloring(hj, 1);
  REQUIRE(v1.kind == SearchVerdict::Kind::Bad);
  CHECK(v1.bad->encode_table() == "01");  // the single line {0,1} bichromatic

  auto v2 = exists_bad_coloring(hj, 2);
  CHECK(v2.kind == SearchVerdict::Kind::NoneExists);
}

TEST_CASE("bad-coloring search refutes the profile pair at k=2") {
  KindSpec f8s{Kind::F8S, 2, 2, 2};
  auto v = exists_bad_coloring(f8s, 2);
  REQUIRE(v.kind == SearchVerdict::Kind::Bad);
  // the only 2-block system needs d(01)=d(10); a bad coloring splits the pair
  CHECK(v.bad->color_of(rank_word({0, 1}, 2)) != v.bad->color_of(rank_word({1, 0}, 2)));
}

TEST_CASE("inadmissible sizes are rejected for the f-family") {
  KindSpec f9{Kind::F9, 2, 2, 2};
  CHECK_THROWS_AS(exists_bad_coloring(f9, 3), std::invalid_argument);
  SearchOptions relaxed;
  relaxed.enforce_divisibility = false;
  CHECK_NOTHROW(exists_bad_coloring(f9, 3, relaxed));
}

TEST_CASE("number computation") {
  KindSpec hj{Kind::HJ, 2, 2, 1};
  auto r = compute_number(hj, 6);
  REQUIRE(r.value.has_value());
  CHECK(*r.value == 2);
  REQUIRE(r.last_bad.has_value());
  CHECK(r.last_bad->first == 1);

  // one color: minimal side admitting two disjoint non-empty blocks
  KindSpec hj1{Kind::HJ, 2, 1, 2};
  auto r1 = compute_number(hj1, 6);
  REQUIRE(r1.value.has_value());
  CHECK(*r1.value == 2);
  CHECK(r1.last_bad.has_value());  // at k=1 no system exists, so anything is bad

  KindSpec vdw{Kind::VDW, 1, 2, 3};
  auto rv = compute_number(vdw, 12);
  REQUIRE(rv.value.has_value());
  CHECK(*rv.value == 9);
  REQUIRE(rv.last_bad.has_value());
  CHECK(rv.last_bad->first == 8);
  CHECK(rv.last_bad->second.encode_table() == "00110011");
}

TEST_CASE("three-letter line number") {
  // the classical value: side 3 is refuted, side 4 forces a line
  KindSpec hj3{Kind::HJ, 3, 2, 1};
  auto r = compute_number(hj3, 4);
  REQUIRE(r.value.has_value());
  CHECK(*r.value == 4);
  CHECK(r.last_bad->first == 3);
}

TEST_CASE("search agrees with naive enumeration on a spot grid") {
  std::vector<std::pair<KindSpec, int>> instances = {
      {{Kind::HJ, 2, 2, 1}, 1},   {{Kind::HJ, 2, 2, 1}, 2},  {{Kind::HJ, 2, 2, 1}, 3},
      {{Kind::HJ, 2, 3, 1}, 2},   {{Kind::HJ, 2, 2, 2}, 3},  {{Kind::HJEQ, 2, 2, 2}, 3},
      {{Kind::F8, 2, 2, 2}, 2},   {{Kind::F8S, 2, 2, 2}, 4}, {{Kind::F9S, 2, 2, 2}, 4},
      {{Kind::F13, 2, 2, 2}, 3},  {{Kind::F13, 2, 3, 2}, 3}, {{Kind::VDW, 1, 2, 3}, 8},
      {{Kind::VDW, 1, 2, 3}, 9},  {{Kind::VDW, 1, 3, 2}, 4}, {{Kind::GW, 1, 2, 2}, 4},
      {{Kind::GW, 2, 2, 1}, 2},   {{Kind::GW, 2, 2, 1}, 3},  {{Kind::OPLUS, 2, 2, 1}, 2},
      {{Kind::OPLUS, 2, 3, 1}, 3}, {{Kind::OPLUS, 3, 2, 1}, 2},
      {{Kind::HJ, 3, 2, 1}, 2},   {{Kind::HJ, 3, 2, 2}, 2},  {{Kind::HJEQ, 3, 2, 1}, 2},
      {{Kind::F13, 3, 2, 1}, 2},  {{Kind::GW, 3, 2, 1}, 2},  {{Kind::OPLUS, 3, 2, 1}, 3},
  };
  for (const auto& [spec, size] : instances) {
    CAPTURE(spec.key());
    CAPTURE(size);
    auto naive = exists_bad_coloring_naive(spec, size);
    auto fast = exists_bad_coloring(spec, size);
    CHECK(fast.kind == naive.kind);
    // and disabling symmetry never changes the verdict
    SearchOptions plain;
    plain.color_symmetry = false;
    plain.value_symmetry = false;
    auto unbroken = exists_bad_coloring(spec, size, plain);
    CHECK(unbroken.kind == naive.kind);
  }
}

TEST_CASE("three-letter profile kinds are refuted at the first admissible side") {
  // the only 3-block system in the 3-cube is the singleton partition; its
  // profile classes are easy to split
  for (Kind kind : {Kind::F8, Kind::F9, Kind::F8S, Kind::F9S}) {
    KindSpec spec{kind, 3, 2, 3};
    auto v = exists_bad_coloring(spec, 3);
    CHECK(v.kind == SearchVerdict::Kind::Bad);
  }
}

TEST_CASE("bump thresholds by color count") {
  // the pair constraints on two letters link every pair of compositions, so
  // the threshold is the color count itself
  auto r2 = compute_number({Kind::OPLUS, 2, 2, 1}, 6);
  CHECK(r2.value == 2);
  auto r3 = compute_number({Kind::OPLUS, 2, 3, 1}, 6);
  CHECK(r3.value == 3);
}

TEST_CASE("parallel search returns the same verdict") {
  std::vector<std::pair<KindSpec, int>> instances = {
      {{Kind::HJ, 2, 2, 1}, 2},
      {{Kind::VDW, 1, 2, 3}, 8},
      {{Kind::VDW, 1, 2, 3}, 9},
      {{Kind::F8S, 2, 2, 2}, 4},
  };
  for (const auto& [spec, size] : instances) {
    auto seq = exists_bad_coloring(spec, size);
    SearchOptions par;
    par.threads = 4;
    auto mt = exists_bad_coloring(spec, size, par);
    CHECK(mt.kind == seq.kind);
    if (mt.kind == SearchVerdict::Kind::Bad)
      CHECK_FALSE(find_witness(spec, *mt.bad).has_value());
  }
}

TEST_CASE("budget exhaustion reports partial progress") {
  KindSpec vdw{Kind::VDW, 1, 2, 3};
  SearchOptions opts;
  opts.budget.max_nodes = 3;
  auto v = exists_bad_coloring(vdw, 9, opts);
  CHECK(v.kind == SearchVerdict::Kind::BudgetExceeded);

  auto r = compute_number(vdw, 9, opts);
  CHECK_FALSE(r.value.has_value());
  CHECK(r.budget_exhausted);
}

TEST_CASE("restriction and lift round-trips witnesses upward") {
  std::mt19937_64 rng(20240817);

  auto random_coloring = [&](Ground g, int colors) {
    Coloring d;
    d.ground = g;
    d.colors = colors;
    d.table.resize(g.point_count());
    for (auto& v : d.table) v = static_cast<std::uint8_t>(rng() % colors);
    return d;
  };

  // constant coloring: restriction is constant, lifted witness verifies
  KindSpec hj{Kind::HJ, 2, 2, 1};
  Coloring constant = Coloring::constant(Ground::cube(3, 2), 2);
  auto lifted = lift_witness_up(hj, constant, 0);
  auto w = find_witness(hj, lifted.restricted);
  REQUIRE(w.has_value());
  CHECK(verify_witness(hj, 3, constant, lifted.lift(*w)));

  // d'(eta) = eta(k): restriction at letter 0 is constant zero
  Coloring last_coord;
  last_coord.ground = Ground::cube(3, 2);
  last_coord.colors = 2;
  last_coord.table.resize(8);
  for (PointRank r = 0; r < 8; ++r)
    last_coord.table[r] = static_cast<std::uint8_t>(unrank_word(r, 3, 2)[2]);
  auto restricted = lift_witness_up(hj, last_coord, 0);
  for (auto v : restricted.restricted.table) CHECK(v == 0);
  auto w2 = find_witness(hj, restricted.restricted);
  REQUIRE(w2.has_value());
  CHECK(verify_witness(hj, 3, last_coord, restricted.lift(*w2)));

  // property trial: random colorings at k+1, every found witness lifts
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Coloring d = random_coloring(Ground::cube(3, 2), 2);
    auto lr = lift_witness_up(hj, d, static_cast<Letter>(rng() % 2));
    if (auto fw = find_witness(hj, lr.restricted)) {
      ++found;
      CHECK(verify_witness(hj, 3, d, lr.lift(*fw)));
    }
  }
  CHECK(found == 100);  // every 2-coloring of the 2-cube has a mono line

  // the other grounds
  KindSpec vdw{Kind::VDW, 1, 2, 3};
  Coloring dv = random_coloring(Ground::interval(10), 2);
  auto lrv = lift_witness_up(vdw, dv, 0);
  if (auto fw = find_witness(vdw, lrv.restricted))
    CHECK(verify_witness(vdw, 10, dv, lrv.lift(*fw)));

  KindSpec gw{Kind::GW, 2, 2, 1};
  Coloring dg = random_coloring(Ground::grid(2, 4), 2);
  auto lrg = lift_witness_up(gw, dg, 0);
  if (auto fw = find_witness(gw, lrg.restricted))
    CHECK(verify_witness(gw, 4, dg, lrg.lift(*fw)));

  KindSpec op{Kind::OPLUS, 2, 2, 1};
  for (int trial = 0; trial < 50; ++trial) {
    Coloring doo = random_coloring(Ground::omega(3, 2), 2);
    auto lro = lift_witness_up(op, doo, static_cast<Letter>(rng() % 2));
    auto fw = find_witness(op, lro.restricted);
    REQUIRE(fw.has_value());  // the 2-color bump property holds from total 2 on
    CHECK(verify_witness(op, 3, doo, lro.lift(*fw)));
  }
}

TEST_CASE("exact results bundle the largest refuted admissible size") {
  struct Case {
    KindSpec spec;
    int max;
  };
  for (const auto& [spec, max] : std::initializer_list<Case>{{{Kind::HJ, 2, 2, 1}, 6},
                                                             {{Kind::F8, 2, 2, 2}, 8},
                                                             {{Kind::F9S, 2, 2, 2}, 8},
                                                             {{Kind::F13, 2, 2, 2}, 8},
                                                             {{Kind::VDW, 1, 2, 3}, 12}}) {
    auto r = compute_number(spec, max);
    REQUIRE(r.value.has_value());
    REQUIRE(r.last_bad.has_value());
    // the refuted size immediately precedes the value among admissible sizes
    CHECK(spec.next_admissible(r.last_bad->first) == *r.value);
    CHECK_FALSE(find_witness(spec, r.last_bad->second).has_value());
  }
}

TEST_CASE("coordinate symmetry breaking is verdict-preserving") {
  std::vector<std::pair<KindSpec, int>> instances = {
      {{Kind::HJ, 2, 2, 1}, 2},  {{Kind::HJ, 2, 2, 1}, 3}, {{Kind::HJ, 2, 3, 1}, 3},
      {{Kind::F8S, 2, 2, 2}, 4}, {{Kind::F13, 2, 2, 2}, 3},
  };
  for (const auto& [spec, size] : instances) {
    SearchOptions with_coords;
    with_coords.coord_symmetry = true;
    auto a = exists_bad_coloring(spec, size);
    auto b = exists_bad_coloring(spec, size, with_coords);
    CHECK(a.kind == b.kind);
  }
}

TEST_CASE("single-threaded runs are reproducible") {
  KindSpec vdw{Kind::VDW, 1, 2, 3};
  auto a = exists_bad_coloring(vdw, 8);
  auto b = exists_bad_coloring(vdw, 8);
  REQUIRE(a.kind == SearchVerdict::Kind::Bad);
  CHECK(a.bad->encode_table() == b.bad->encode_table());
  CHECK(a.stats.nodes == b.stats.nodes);
}
