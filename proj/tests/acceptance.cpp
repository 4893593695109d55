// Acceptance suite: runs every gate criterion and prints one line per
// criterion.  Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "hjw/certificate.hpp"
#include "hjw/chain.hpp"
#include "hjw/checkers.hpp"
#include "hjw/cnf.hpp"
#include "hjw/growth.hpp"
#include "hjw/reductions.hpp"
#include "hjw/search.hpp"
#include "support/dpll.hpp"

namespace fs = std::filesystem;
using namespace hjw;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli_path;
fs::path g_workdir;

struct Check {
  std::vector<std::string> failures;

  void require(bool cond, const std::string& msg) {
    if (!cond) failures.push_back(msg);
  }
};

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

std::optional<CnfModel> dpll_solve(const CnfDocument& doc) {
  testsat::Solver solver;
  solver.num_vars = doc.num_vars;
  solver.clauses = doc.clauses;
  auto model = solver.solve();
  if (!model) return std::nullopt;
  CnfModel out;
  out.value = *model;
  return out;
}

std::string run_cli(const std::string& args, int* exit_code) {
  std::string cmd = g_cli_path + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *exit_code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  while (size_t n = ::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = ::pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// The small instance grid shared by the oracle-agreement and round-trip
// criteria: every applicable kind, capped so the full coloring space stays
// enumerable (at most 2^16 colorings).
std::vector<std::pair<KindSpec, int>> oracle_grid() {
  std::vector<std::pair<KindSpec, int>> out;
  auto add = [&](KindSpec spec, int size) {
    double space = std::pow(static_cast<double>(spec.c),
                            static_cast<double>(spec.ground_for(size).point_count()));
    if (space <= 65536.0) out.push_back({spec, size});
  };

  for (auto [h, kmax, cmax] : {std::tuple{2, 4, 3}, std::tuple{3, 2, 2}}) {
    for (int c = 2; c <= cmax; ++c)
      for (int k = 1; k <= kmax; ++k) {
        for (int m = 1; m <= k; ++m) {
          add({Kind::HJ, h, c, m}, k);
          add({Kind::HJEQ, h, c, m}, k);
          add({Kind::F13, h, c, m}, k);
        }
        add({Kind::HJ, h, c, k + 1}, k);  // no candidate object fits
        for (int m = h; m <= k; m += h)
          if (k % h == 0) {
            add({Kind::F8, h, c, m}, k);
            add({Kind::F9, h, c, m}, k);
            add({Kind::F8S, h, c, m}, k);
            add({Kind::F9S, h, c, m}, k);
            for (int n = 1; m * n <= k; ++n) add({Kind::F9SN, h, c, m, n}, k);
          }
      }
  }
  for (int c = 2; c <= 3; ++c)
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; m <= n + 1; ++m) add({Kind::VDW, 1, c, m}, n);
  for (int c = 2; c <= 3; ++c)
    for (int h = 1; h <= 3; ++h)
      for (int n = 1; n <= 4; ++n)
        for (int m = 1; m <= 2; ++m) add({Kind::GW, h, c, m}, n);
  for (int c = 2; c <= 3; ++c)
    for (int h = 2; h <= 3; ++h)
      for (int total = 1; total <= 4; ++total) add({Kind::OPLUS, h, c, 1}, total);
  return out;
}

DbEntry entry_with_certs(const KindSpec& spec, const NumberResult& res,
                         const fs::path& dir) {
  DbEntry e;
  e.spec = spec;
  e.value = res.value;
  e.lower = res.lower;
  e.upper = res.upper;
  auto name = [&](int size, const char* verdict) {
    std::string key = spec.key();
    for (auto& ch : key)
      if (ch == ':' || ch == '=') ch = '_';
    return key + ".k" + std::to_string(size) + "." + verdict + ".json";
  };
  if (res.last_bad) {
    Certificate cert =
        make_bad_certificate(spec, res.last_bad->first, res.last_bad->second, res.total);
    e.bad_certificate = name(res.last_bad->first, "bad");
    save_json_atomic(cert.to_json(), (dir / e.bad_certificate).string());
  }
  if (res.exhaustion) {
    Certificate cert =
        make_exhausted_certificate(spec, res.exhaustion->first, res.exhaustion->second);
    e.exhausted_certificate = name(res.exhaustion->first, "exhausted");
    save_json_atomic(cert.to_json(), (dir / e.exhausted_certificate).string());
  }
  return e;
}

std::mt19937_64 g_rng(0x9e3779b97f4a7c15ULL);

Coloring random_coloring(Ground g, int colors) {
  Coloring d;
  d.ground = g;
  d.colors = colors;
  d.table.resize(g.point_count());
  for (auto& v : d.table) v = static_cast<std::uint8_t>(g_rng() % colors);
  return d;
}

Coloring random_count_invariant(int k, int h, int colors) {
  Coloring d;
  d.ground = Ground::cube(k, h);
  d.colors = colors;
  d.table.resize(d.ground.point_count());
  std::map<std::vector<int>, std::uint8_t> by_counts;
  std::vector<Pos> all(k);
  std::iota(all.begin(), all.end(), 0);
  for (PointRank r = 0; r < d.ground.point_count(); ++r) {
    auto counts = letter_counts(unrank_word(r, k, h), all, h).counts;
    auto [it, inserted] = by_counts.emplace(counts, 0);
    if (inserted) it->second = static_cast<std::uint8_t>(g_rng() % colors);
    d.table[r] = it->second;
  }
  return d;
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

void criterion_1_single_lines(Check& c) {
  KindSpec hj{Kind::HJ, 2, 2, 1};
  auto res = compute_number(hj, 6);
  c.require(res.value.has_value() && *res.value == 2, "line number is not 2");
  c.require(res.last_bad.has_value() && res.last_bad->first == 1,
            "missing bad certificate at side 1");
  if (res.last_bad) {
    Certificate cert = make_bad_certificate(hj, 1, res.last_bad->second, res.total);
    c.require(cert.reverify(), "bad certificate fails re-verification");
  }

  // the CLI path end to end
  int exit_code = 0;
  fs::path db = g_workdir / "c1" / "results.json";
  fs::create_directories(db.parent_path());
  std::string out = run_cli(
      "compute --kind hj --m 1 --alphabet 2 --colors 2 --max-k 6 --db " + db.string(),
      &exit_code);
  c.require(exit_code == 0, "cli compute exited " + std::to_string(exit_code));
  c.require(out.find("hj(1;2,2)=2") != std::string::npos, "cli output missing value: " + out);
  c.require(fs::exists(db), "cli did not write the database");
}

void criterion_2_progressions(Check& c) {
  fs::path dir = g_workdir / "c2";
  fs::create_directories(dir);

  KindSpec vdw{Kind::VDW, 1, 2, 3};
  auto rv = compute_number(vdw, 12);
  c.require(rv.value == 9, "progression number is not 9");
  c.require(rv.last_bad && rv.last_bad->first == 8, "missing refutation at 8");
  if (rv.last_bad) {
    const Coloring& bad = rv.last_bad->second;
    c.require(!find_ap_witness(bad, 3).has_value(),
              "certificate coloring contains a 3-term progression");
    c.require(bad.encode_table() == "00110011",
              "unexpected certificate " + bad.encode_table());
  }

  KindSpec gw1{Kind::GW, 1, 2, 2};
  auto rg = compute_number(gw1, 12);
  c.require(rg.value == 9, "dimension-one grid number is not 9");

  ResultsDb db((dir / "results.json").string());
  db.record(entry_with_certs(vdw, rv, dir));
  db.record(entry_with_certs(gw1, rg, dir));
  db.save();
  auto report = verify_chain(db, ChainMode::Strict);
  auto entry = report.find("vdw=gw1", vdw.key());
  c.require(entry.has_value() && entry->status == ChainStatus::Holds,
            "progression/grid identity does not hold");
}

void criterion_3_f_family(Check& c) {
  fs::path dir = g_workdir / "c3";
  fs::create_directories(dir);
  ResultsDb db((dir / "results.json").string());

  std::map<std::string, int> values;
  for (Kind kind : {Kind::F8, Kind::F8S, Kind::F9, Kind::F9S, Kind::F13}) {
    KindSpec spec{kind, 2, 2, 2};
    auto res = compute_number(spec, 8);  // strict divisibility is the default
    c.require(res.value.has_value(), spec.display() + " did not resolve");
    if (res.value) values[kind_name(kind)] = *res.value;
    if (kind == Kind::F8S) {
      c.require(res.last_bad && res.last_bad->first == 2,
                "profile kind not refuted at side 2");
      if (res.last_bad) {
        const Coloring& bad = res.last_bad->second;
        c.require(bad.color_of(rank_word({0, 1}, 2)) != bad.color_of(rank_word({1, 0}, 2)),
                  "side-2 refutation does not split the mixed pair");
      }
    }
    db.record(entry_with_certs(spec, res, dir));
  }
  db.save();

  // pairwise ladder within the family: identical either mode
  auto strict = verify_chain(db, ChainMode::Strict);
  for (const char* id : {"f8<=f9", "f8s<=f9s", "f8<=f8s", "f9<=f9s"}) {
    bool holds = false;
    for (const auto& e : strict.entries)
      if (e.id == id) holds = e.status == ChainStatus::Holds;
    c.require(holds, std::string(id) + " does not hold");
  }
  // the count-kind dominator needs the round-up reading: the f-family scans
  // sizes in multiples of the alphabet, the count kind does not
  auto lax = verify_chain(db, ChainMode::RoundUp);
  bool holds = false;
  for (const auto& e : lax.entries)
    if (e.id == "f9s<=f13") holds = e.status == ChainStatus::Holds;
  c.require(holds, "f9s<=f13 does not hold in round-up mode");
}

void criterion_4_oracle_agreement(Check& c) {
  int instances = 0;
  for (const auto& [spec, size] : oracle_grid()) {
    auto naive = exists_bad_coloring_naive(spec, size);
    auto pruned = exists_bad_coloring(spec, size);
    ++instances;
    if (naive.kind != pruned.kind) {
      c.require(false, "disagreement at " + spec.display() + " k=" + std::to_string(size));
      return;
    }
    if (pruned.kind == SearchVerdict::Kind::Bad)
      c.require(!find_witness(spec, *pruned.bad).has_value(),
                "pruned bad coloring admits a witness at " + spec.display());
  }
  c.require(instances >= 150, "oracle grid unexpectedly small: " +
                                  std::to_string(instances) + " instances");
}

void criterion_5_reduction_soundness(Check& c) {
  int trials = 0;

  // flatten/lift of composite-letter lines
  int done = 0;
  while (done < 250) {
    Coloring d = random_coloring(Ground::cube(4, 2), 2);
    Coloring e = pullback_grid_flatten(d, 2, 2, 2);
    auto w = find_witness({Kind::HJ, 4, 2, 1}, e);
    if (!w) continue;
    ++done;
    ++trials;
    SubspaceWitness up = grid_lift_witness(std::get<SubspaceWitness>(*w), d, 2, 2, 2);
    if (!verify_witness({Kind::HJEQ, 2, 2, 2}, 4, d, Witness{up})) {
      c.require(false, "flatten/lift produced a failing witness");
      return;
    }
  }

  // unit-block conversion of count-determined witnesses
  done = 0;
  while (done < 250) {
    Coloring d = random_count_invariant(3 + static_cast<int>(g_rng() % 2), 2, 2);
    auto w = find_witness({Kind::F13, 2, 2, 2}, d);
    if (!w) continue;
    ++done;
    ++trials;
    SubspaceWitness conv = singleton_blocks(std::get<F13Witness>(*w), d);
    if (!verify_witness({Kind::F9SN, 2, 2, 2, 1}, d.ground.size, d, Witness{conv})) {
      c.require(false, "unit-block conversion produced a failing witness");
      return;
    }
  }

  // embedding pullback count-invariance plus line lifting
  std::vector<Pos> all2{0, 1};
  done = 0;
  while (done < 250) {
    Coloring d = random_coloring(Ground::cube(4, 2), 2);
    auto fs_ = find_witness({Kind::F8S, 2, 2, 2}, d);
    if (!fs_) continue;
    const BlockSystem& s = std::get<SubspaceWitness>(*fs_).system;
    Coloring e = pullback_blocks_embed(d, s);
    ++trials;
    for (PointRank r1 = 0; r1 < 4; ++r1)
      for (PointRank r2 = 0; r2 < 4; ++r2)
        if (e_equiv(unrank_word(r1, 2, 2), unrank_word(r2, 2, 2), all2, 2) &&
            e.color_of(r1) != e.color_of(r2)) {
          c.require(false, "embedding pullback is not count-invariant");
          return;
        }
    auto fl = find_witness({Kind::HJ, 2, 2, 1}, e);
    if (!fl) continue;
    ++done;
    ++trials;
    SubspaceWitness up = embed_lift_line(std::get<SubspaceWitness>(*fl), s, d);
    if (!verify_witness({Kind::HJ, 2, 2, 1}, 4, d, Witness{up})) {
      c.require(false, "embedded line lift produced a failing witness");
      return;
    }
  }

  // canonical-word partition independence under count-invariant colorings
  for (int t = 0; t < 150; ++t) {
    Coloring e = random_count_invariant(4, 2, 3);
    for (const auto& p : omega_enumerate(4, 2)) {
      Word canon = canonical_word(p, 4, 2);
      Word shuffled = canon;
      std::shuffle(shuffled.begin(), shuffled.end(), g_rng);
      ++trials;
      if (e.color_of(rank_word(canon, 2)) != e.color_of(rank_word(shuffled, 2))) {
        c.require(false, "canonical word color depends on the partition");
        return;
      }
    }
  }

  c.require(trials >= 1000, "too few reduction trials: " + std::to_string(trials));
}

void criterion_6_bump_machinery(Check& c) {
  // minimal total with the bump property: exactly 2 for two colors
  KindSpec op2{Kind::OPLUS, 2, 2, 1};
  auto r2 = compute_number(op2, 6);
  c.require(r2.value == 2, "two-color bump threshold is not 2");

  // three colors refute total 2 via three distinct colors
  KindSpec op3{Kind::OPLUS, 2, 3, 1};
  auto v3 = exists_bad_coloring(op3, 2);
  c.require(v3.kind == SearchVerdict::Kind::Bad, "three-color refutation at total 2 missing");

  // worked grid-route instance: h=2, n=3, planted box ((1,0), 1)
  Coloring d = Coloring::constant(Ground::omega(12, 2), 2);
  auto sol = solve_oplus_via_gallai_witt(
      d, 2, 3, [](const Coloring&) { return std::optional<GwWitness>{GwWitness{{1, 0}, 1}}; });
  c.require(sol.base == std::vector<long long>{6, 4}, "grid-route base is not (6,4)");
  c.require(sol.step == 2, "grid-route step is not 2");
  OmegaPoint b0 = omega_bump({6, 4}, 2, 0, 12);
  OmegaPoint b1 = omega_bump({6, 4}, 2, 1, 12);
  c.require(b0 == OmegaPoint{8, 4} && b1 == OmegaPoint{6, 6}, "bumped compositions wrong");
  c.require(std::accumulate(b0.begin(), b0.end(), 0) == 12 &&
                std::accumulate(b1.begin(), b1.end(), 0) == 12,
            "bumped compositions do not sum to 12");
}

void criterion_7_cnf_round_trip(Check& c) {
  for (const auto& [spec, size] : oracle_grid()) {
    auto doc = export_cnf(spec, size);
    auto model = dpll_solve(doc);
    auto verdict = exists_bad_coloring(spec, size);
    const bool sat = model.has_value();
    const bool bad = verdict.kind == SearchVerdict::Kind::Bad;
    if (sat != bad) {
      c.require(false, "sat/search mismatch at " + spec.display() +
                           " k=" + std::to_string(size));
      return;
    }
    if (sat && spec.c >= 2) {
      Certificate cert = decode_cnf_model(spec, size, *model);
      if (!cert.reverify()) {
        c.require(false, "decoded model fails re-verification at " + spec.display());
        return;
      }
    }
  }
}

void criterion_8_hierarchy(Check& c) {
  GrowthBudget roomy{1 << 16, 1'000'000};
  auto e2 = eval_E(2, {BigInt(3)}, roomy);
  c.require(e2.value && *e2.value == 1446, "E_2(3) is not 1446");

  // recurrence on all evaluated points
  for (int n = 2; n <= 3; ++n)
    for (int x = 0; x <= (n == 2 ? 4 : 0); ++x) {
      auto lhs = eval_E(n, {BigInt(x + 1)}, roomy);
      auto inner = eval_E(n, {BigInt(x)}, roomy);
      if (!lhs.value || !inner.value) continue;
      auto outer = eval_E(n - 1, {*inner.value}, roomy);
      c.require(outer.value && *lhs.value == *outer.value,
                "recurrence fails at n=" + std::to_string(n) + " x=" + std::to_string(x));
    }

  GrowthBudget budget{4096, 1'000'000};
  c.require(tower_compare(tower_shelah24(), tower_gowers(2, 3), budget) == Ordering::Greater,
            "height-24 tower does not rank above the progression bound");

  int exit_code = 0;
  std::string out = run_cli("bounds --compare shelah24 gowers:2,3", &exit_code);
  c.require(exit_code == 0 && out.find("shelah24 > gowers(2,3)") != std::string::npos,
            "cli comparison output wrong: " + out);
}

void criterion_9_lift_property(Check& c) {
  struct Case {
    KindSpec spec;
    int value;  // computed earlier in the suite; restriction lands here
  };
  std::vector<Case> cases = {
      {{Kind::HJ, 2, 2, 1}, 2},     {{Kind::HJEQ, 2, 2, 1}, 2},
      {{Kind::F8, 2, 2, 2}, 4},     {{Kind::F9, 2, 2, 2}, 4},
      {{Kind::F8S, 2, 2, 2}, 4},    {{Kind::F9S, 2, 2, 2}, 4},
      {{Kind::F9SN, 2, 2, 2, 1}, 4}, {{Kind::F13, 2, 2, 2}, 3},
      {{Kind::VDW, 1, 2, 3}, 9},    {{Kind::GW, 1, 2, 2}, 9},
      {{Kind::OPLUS, 2, 2, 1}, 2},
  };
  for (const auto& [spec, value] : cases) {
    for (int trial = 0; trial < 100; ++trial) {
      Coloring up = random_coloring(spec.ground_for(value + 1), spec.c);
      Letter anchor = static_cast<Letter>(g_rng() % std::max(1, spec.h));
      auto lr = lift_witness_up(spec, up, anchor);
      auto w = find_witness(spec, lr.restricted);
      if (!w) {
        c.require(false, "no witness below the computed value for " + spec.display());
        return;
      }
      if (!verify_witness(spec, value + 1, up, lr.lift(*w))) {
        c.require(false, "lifted witness fails for " + spec.display());
        return;
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--cli") g_cli_path = argv[i + 1];
    if (flag == "--workdir") g_workdir = argv[i + 1];
  }
  if (g_workdir.empty()) g_workdir = fs::temp_directory_path() / "hjw_acceptance";
  fs::create_directories(g_workdir);
  if (g_cli_path.empty()) g_cli_path = "hjw";

  struct Criterion {
    int id;
    std::string title;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> criteria = {
      {1, "single-line number with refutation certificate", criterion_1_single_lines},
      {2, "progression number, grid identity, classical certificate", criterion_2_progressions},
      {3, "f-family exact values and inequality ladder", criterion_3_f_family},
      {4, "pruned search agrees with full enumeration", criterion_4_oracle_agreement},
      {5, "randomized reduction soundness", criterion_5_reduction_soundness},
      {6, "bump-property machinery and worked grid instance", criterion_6_bump_machinery},
      {7, "DIMACS round-trip against the search", criterion_7_cnf_round_trip},
      {8, "hierarchy evaluation and tower comparison", criterion_8_hierarchy},
      {9, "restriction-and-lift justifies first-success stopping", criterion_9_lift_property},
  };

  int passed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto t0 = Clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    char line[256];
    std::snprintf(line, sizeof line, "criterion %d %-4s %-55s (%.2fs)", criterion.id,
                  check.failures.empty() ? "PASS" : "FAIL", criterion.title.c_str(), dt);
    std::cout << line << '\n';
    for (const auto& f : check.failures) std::cout << "    - " << f << '\n';
    if (check.failures.empty()) ++passed;
  }
  std::cout << "summary: " << passed << "/" << criteria.size() << " criteria passed\n";
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
