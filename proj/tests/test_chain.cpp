#include "hjw/chain.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "doctest.h"
#include "hjw/search.hpp"

using namespace hjw;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hjw_chain_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Computes a value, writes its certificates next to the db, returns the entry.
DbEntry computed_entry(const TempDir& dir, const KindSpec& spec, int max_size) {
  auto r = compute_number(spec, max_size);
  DbEntry e;
  e.spec = spec;
  e.value = r.value;
  e.lower = r.lower;
  e.upper = r.upper;
  if (r.last_bad) {
    Certificate cert = make_bad_certificate(spec, r.last_bad->first, r.last_bad->second, {});
    std::string name = spec.key() + ".bad.json";
    for (auto& ch : name)
      if (ch == ':') ch = '_';
    save_json_atomic(cert.to_json(), (dir.path / name).string());
    e.bad_certificate = name;
  }
  if (r.exhaustion) {
    Certificate cert = make_exhausted_certificate(spec, r.exhaustion->first, r.exhaustion->second);
    std::string name = spec.key() + ".exhausted.json";
    for (auto& ch : name)
      if (ch == ':') ch = '_';
    save_json_atomic(cert.to_json(), (dir.path / name).string());
    e.exhausted_certificate = name;
  }
  return e;
}

}  // namespace

TEST_CASE("database round-trips entries and rejects tampered certificates") {
  TempDir dir;
  ResultsDb db((dir.path / "results.json").string());

  KindSpec hj{Kind::HJ, 2, 2, 1};
  DbEntry e = computed_entry(dir, hj, 6);
  REQUIRE(e.value.has_value());
  CHECK(*e.value == 2);
  db.record(e);
  db.save();

  ResultsDb loaded((dir.path / "results.json").string());
  loaded.load(/*verify_certificates=*/true);
  auto got = loaded.get(hj.key());
  REQUIRE(got.has_value());
  CHECK(got->value == e.value);
  CHECK(got->bad_certificate == e.bad_certificate);

  CHECK_FALSE(loaded.get("vdw:m=3:c=2").has_value());

  // tamper with the bad certificate: recoloring makes the line reappear
  auto cert_path = loaded.resolve(e.bad_certificate);
  auto j = load_json(cert_path);
  j["coloring"]["data"] = "00";
  save_json_atomic(j, cert_path);
  CHECK_THROWS_AS(db.record(e), RejectedResultError);
}

TEST_CASE("chain audit over computed small values") {
  TempDir dir;
  ResultsDb db((dir.path / "results.json").string());
  for (const KindSpec& spec :
       {KindSpec{Kind::F8, 2, 2, 2}, KindSpec{Kind::F9, 2, 2, 2}, KindSpec{Kind::F8S, 2, 2, 2},
        KindSpec{Kind::F9S, 2, 2, 2}, KindSpec{Kind::F13, 2, 2, 2},
        KindSpec{Kind::VDW, 1, 2, 3}, KindSpec{Kind::GW, 1, 2, 2}})
    db.record(computed_entry(dir, spec, 12), false);

  auto strict = verify_chain(db, ChainMode::Strict);
  auto lax = verify_chain(db, ChainMode::RoundUp);

  // the pairwise f-family ladder holds in both modes (all values are 4)
  for (const char* id : {"f8<=f9", "f8<=f8s", "f9<=f9s", "f8s<=f9s"}) {
    auto s = strict.find(id, KindSpec{id[1] == '8' ? Kind::F8 : Kind::F9, 2, 2, 2}.key());
    // keys: f8 for the first two, f9 / f8s for the rest; just scan by id
    bool found_holds = false;
    for (const auto& entry : strict.entries)
      if (entry.id == id) found_holds = entry.status == ChainStatus::Holds;
    CHECK(found_holds);
    (void)s;
  }

  // the count-kind dominator: minimal sides 4 vs 3, so the strict reading
  // fails and the rounded reading holds
  bool strict_violated = false, lax_holds = false;
  for (const auto& entry : strict.entries)
    if (entry.id == "f9s<=f13") strict_violated = entry.status == ChainStatus::Violated;
  for (const auto& entry : lax.entries)
    if (entry.id == "f9s<=f13") lax_holds = entry.status == ChainStatus::Holds;
  CHECK(strict_violated);
  CHECK(lax_holds);
  CHECK(strict.any_violated());

  // violated entries carry both certificates
  for (const auto& entry : strict.entries)
    if (entry.status == ChainStatus::Violated) {
      CHECK_FALSE(entry.lhs_certificate.empty());
      CHECK_FALSE(entry.rhs_certificate.empty());
    }

  // the progression/grid identity at m+1 = 3
  bool identity_holds = false;
  for (const auto& entry : strict.entries)
    if (entry.id == "vdw=gw1") identity_holds = entry.status == ChainStatus::Holds;
  CHECK(identity_holds);
}

TEST_CASE("certificate files carry the documented fields") {
  TempDir dir;
  KindSpec vdw{Kind::VDW, 1, 2, 3};
  auto r = compute_number(vdw, 12);
  REQUIRE(r.last_bad.has_value());
  Certificate cert = make_bad_certificate(vdw, r.last_bad->first, r.last_bad->second, r.total);
  auto j = cert.to_json();
  for (const char* field : {"schema_version", "kind", "h", "c", "m", "n", "k", "verdict",
                            "coloring", "search", "tool_version"})
    CHECK(j.contains(field));
  CHECK(j["verdict"] == "bad");
  CHECK(j["coloring"]["encoding"] == "base-c-string");
  CHECK(j["coloring"]["ground"] == "interval(8)");
  for (const char* field : {"nodes", "seconds", "threads", "seed"})
    CHECK(j["search"].contains(field));

  // round-trip through serialization preserves re-verifiability
  Certificate back = Certificate::from_json(j);
  CHECK(back.reverify());
  CHECK(back.spec.key() == vdw.key());
}

TEST_CASE("unit-block kind chains into the count kind at the scaled dimension") {
  TempDir dir;
  ResultsDb db((dir.path / "results.json").string());
  db.record(computed_entry(dir, {Kind::F9SN, 2, 2, 2, 1}, 8), false);
  db.record(computed_entry(dir, {Kind::F13, 2, 2, 2}, 8), false);

  auto strict = verify_chain(db, ChainMode::Strict);
  auto lax = verify_chain(db, ChainMode::RoundUp);
  bool strict_violated = false, lax_holds = false;
  for (const auto& e : strict.entries)
    if (e.id == "f9sn<=f13") strict_violated = e.status == ChainStatus::Violated;
  for (const auto& e : lax.entries)
    if (e.id == "f9sn<=f13") lax_holds = e.status == ChainStatus::Holds;
  CHECK(strict_violated);  // sides 4 vs 3: the divisibility gap again
  CHECK(lax_holds);
}

TEST_CASE("bound-direction discipline") {
  TempDir dir;
  ResultsDb db((dir.path / "results.json").string());

  // lower-bound-only on both sides: never "holds"
  DbEntry lhs;
  lhs.spec = {Kind::F8, 2, 2, 2};
  lhs.lower = 4;
  DbEntry rhs;
  rhs.spec = {Kind::F9, 2, 2, 2};
  rhs.lower = 100;
  db.record(lhs, false);
  db.record(rhs, false);
  auto report = verify_chain(db, ChainMode::Strict);
  for (const auto& entry : report.entries)
    if (entry.id == "f8<=f9") CHECK(entry.status == ChainStatus::NotComparable);

  // exact left above an exact right: violated
  DbEntry lhs2;
  lhs2.spec = {Kind::F8, 2, 2, 2};
  lhs2.value = 8;
  lhs2.lower = 8;
  lhs2.upper = 8;
  DbEntry rhs2;
  rhs2.spec = {Kind::F9, 2, 2, 2};
  rhs2.value = 4;
  rhs2.lower = 4;
  rhs2.upper = 4;
  db.record(lhs2, false);
  db.record(rhs2, false);
  auto report2 = verify_chain(db, ChainMode::Strict);
  bool violated = false;
  for (const auto& entry : report2.entries)
    if (entry.id == "f8<=f9") violated = entry.status == ChainStatus::Violated;
  CHECK(violated);
}

TEST_CASE("synthetic planted violation carries certificates") {
  TempDir dir;
  ResultsDb db((dir.path / "results.json").string());

  DbEntry f9s;
  f9s.spec = {Kind::F9S, 2, 2, 2};
  f9s.value = 6;
  f9s.lower = 6;
  f9s.upper = 6;
  f9s.bad_certificate = "planted_f9s.json";
  DbEntry f13;
  f13.spec = {Kind::F13, 2, 2, 2};
  f13.value = 3;
  f13.lower = 3;
  f13.upper = 3;
  f13.exhausted_certificate = "planted_f13.json";
  db.record(f9s, false);
  db.record(f13, false);

  auto report = verify_chain(db, ChainMode::Strict);
  auto entry = report.find("f9s<=f13", f9s.spec.key());
  REQUIRE(entry.has_value());
  CHECK(entry->status == ChainStatus::Violated);
  CHECK(entry->lhs_certificate == "planted_f9s.json");
  CHECK(entry->rhs_certificate == "planted_f13.json");

  // report serialization keeps the attachments
  auto j = report.to_json();
  bool found = false;
  for (const auto& item : j.at("entries"))
    if (item.at("id") == "f9s<=f13" && item.at("status") == "violated") {
      CHECK(item.at("lhs_certificate") == "planted_f9s.json");
      found = true;
    }
  CHECK(found);
}

TEST_CASE("atomic save leaves no partial file behind") {
  TempDir dir;
  std::string path = (dir.path / "db.json").string();
  ResultsDb db(path);
  DbEntry e;
  e.spec = {Kind::HJ, 2, 2, 1};
  e.value = 2;
  e.lower = 2;
  e.upper = 2;
  db.record(e, false);
  db.save();
  CHECK(fs::exists(path));
  CHECK_FALSE(fs::exists(path + ".tmp"));
}
