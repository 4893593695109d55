#include "hjw/chain.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <sstream>

namespace hjw {

using nlohmann::json;
namespace fs = std::filesystem;

json DbEntry::to_json() const {
  json j = kind_spec_to_json(spec);
  j["key"] = spec.key();
  if (value) j["value"] = *value;
  else j["value"] = nullptr;
  j["lower"] = lower;
  if (upper) j["upper"] = *upper;
  else j["upper"] = nullptr;
  j["certificates"] = {{"bad", bad_certificate.empty() ? json() : json(bad_certificate)},
                       {"exhausted", exhausted_certificate.empty()
                                         ? json()
                                         : json(exhausted_certificate)}};
  return j;
}

DbEntry DbEntry::from_json(const json& j) {
  DbEntry e;
  e.spec = kind_spec_from_json(j);
  if (j.contains("value") && !j.at("value").is_null()) e.value = j.at("value").get<int>();
  e.lower = j.at("lower").get<int>();
  if (j.contains("upper") && !j.at("upper").is_null()) e.upper = j.at("upper").get<int>();
  const auto& certs = j.at("certificates");
  if (!certs.at("bad").is_null()) e.bad_certificate = certs.at("bad").get<std::string>();
  if (!certs.at("exhausted").is_null())
    e.exhausted_certificate = certs.at("exhausted").get<std::string>();
  return e;
}

std::string ResultsDb::resolve(const std::string& relative) const {
  fs::path p(relative);
  if (p.is_absolute()) return relative;
  return (fs::path(path_).parent_path() / p).string();
}

void ResultsDb::verify_certificate_or_throw(const DbEntry& entry) const {
  if (!entry.bad_certificate.empty()) {
    Certificate cert = Certificate::from_json(load_json(resolve(entry.bad_certificate)));
    if (cert.verdict != "bad" || cert.spec.key() != entry.spec.key() || !cert.reverify())
      throw RejectedResultError("certificate rejected for " + entry.spec.key());
  }
  if (!entry.exhausted_certificate.empty()) {
    Certificate cert =
        Certificate::from_json(load_json(resolve(entry.exhausted_certificate)));
    if (cert.verdict != "exhausted" || cert.spec.key() != entry.spec.key() || !cert.reverify())
      throw RejectedResultError("exhaustion record rejected for " + entry.spec.key());
  }
}

void ResultsDb::load(bool verify_certificates) {
  entries_.clear();
  if (!fs::exists(path_)) return;
  json j = load_json(path_);
  if (j.at("schema_version").get<int>() != 1)
    throw std::runtime_error("results db: unsupported schema version");
  for (const auto& item : j.at("results")) {
    DbEntry e = DbEntry::from_json(item);
    if (verify_certificates) verify_certificate_or_throw(e);
    entries_[e.spec.key()] = e;
  }
}

void ResultsDb::save() const {
  json results = json::array();
  for (const auto& [key, entry] : entries_) results.push_back(entry.to_json());
  json j = {{"schema_version", 1},
            {"written_at", static_cast<long long>(::time(nullptr))},
            {"tool_version", kToolVersion},
            {"results", results}};
  save_json_atomic(j, path_);
}

void ResultsDb::record(const DbEntry& entry, bool verify_certificates) {
  entry.spec.validate();
  if (verify_certificates) verify_certificate_or_throw(entry);
  entries_[entry.spec.key()] = entry;
}

std::optional<DbEntry> ResultsDb::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string chain_mode_name(ChainMode m) {
  return m == ChainMode::Strict ? "strict" : "roundup";
}
std::string chain_status_name(ChainStatus s) {
  switch (s) {
    case ChainStatus::Holds: return "holds";
    case ChainStatus::Violated: return "violated";
    case ChainStatus::NotComparable: return "not-comparable";
  }
  return "?";
}

json ChainEntry::to_json() const {
  json j;
  j["id"] = id;
  j["description"] = description;
  j["relation"] = relation;
  j["lhs"] = {{"key", lhs_key},
              {"lower", lhs_lower},
              {"upper", lhs_upper ? json(*lhs_upper) : json()}};
  j["rhs"] = {{"key", rhs_key},
              {"lower", rhs_lower},
              {"upper", rhs_upper ? json(*rhs_upper) : json()}};
  j["status"] = chain_status_name(status);
  if (status == ChainStatus::Violated) {
    j["lhs_certificate"] = lhs_certificate;
    j["rhs_certificate"] = rhs_certificate;
  }
  return j;
}

json ChainReport::to_json() const {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(e.to_json());
  return {{"mode", chain_mode_name(mode)}, {"entries", arr}};
}

bool ChainReport::any_violated() const {
  for (const auto& e : entries)
    if (e.status == ChainStatus::Violated) return true;
  return false;
}

std::optional<ChainEntry> ChainReport::find(const std::string& id,
                                            const std::string& lhs_key) const {
  for (const auto& e : entries)
    if (e.id == id && e.lhs_key == lhs_key) return e;
  return std::nullopt;
}

namespace {

struct Side {
  long long lower = 0;
  std::optional<long long> upper;
};

Side side_of(const DbEntry& e, long long scale = 1) {
  Side s;
  s.lower = static_cast<long long>(e.lower) * scale;
  if (e.value) s.upper = static_cast<long long>(*e.value) * scale;
  else if (e.upper) s.upper = static_cast<long long>(*e.upper) * scale;
  return s;
}

long long round_up_to(long long v, long long mult) {
  return (v + mult - 1) / mult * mult;
}

ChainStatus judge(const std::string& relation, const Side& lhs, const Side& rhs) {
  if (relation == "<=") {
    // lhs <= rhs is guaranteed only from an upper bound on the left against
    // a lower bound on the right
    if (lhs.upper && *lhs.upper <= rhs.lower) return ChainStatus::Holds;
    if (rhs.upper && lhs.lower > *rhs.upper) return ChainStatus::Violated;
    return ChainStatus::NotComparable;
  }
  // equality
  if (lhs.upper && rhs.upper && *lhs.upper == lhs.lower && *rhs.upper == rhs.lower)
    return lhs.lower == rhs.lower ? ChainStatus::Holds : ChainStatus::Violated;
  if (rhs.upper && lhs.lower > *rhs.upper) return ChainStatus::Violated;
  if (lhs.upper && *lhs.upper < rhs.lower) return ChainStatus::Violated;
  return ChainStatus::NotComparable;
}

}  // namespace

ChainReport verify_chain(const ResultsDb& db, ChainMode mode) {
  ChainReport report;
  report.mode = mode;

  auto emit = [&](const std::string& id, const std::string& relation,
                  const DbEntry& lhs, const KindSpec& rhs_spec, long long rhs_scale,
                  bool lhs_is_f_family) {
    auto rhs = db.get(rhs_spec.key());
    ChainEntry entry;
    entry.id = id;
    entry.relation = relation;
    entry.lhs_key = lhs.spec.key();
    entry.rhs_key = rhs_spec.key();
    Side ls = side_of(lhs);
    entry.lhs_lower = static_cast<int>(ls.lower);
    if (ls.upper) entry.lhs_upper = static_cast<int>(*ls.upper);
    std::ostringstream desc;
    desc << lhs.spec.display() << ' ' << relation << ' ';
    if (rhs_scale != 1) desc << rhs_scale << '*';
    desc << rhs_spec.display();
    entry.description = desc.str();
    if (!rhs) {
      entry.status = ChainStatus::NotComparable;
      report.entries.push_back(std::move(entry));
      return;
    }
    Side rs = side_of(*rhs, rhs_scale);
    if (mode == ChainMode::RoundUp && lhs_is_f_family && !kind_is_f_family(rhs_spec.kind)) {
      rs.lower = round_up_to(rs.lower, lhs.spec.h);
      if (rs.upper) rs.upper = round_up_to(*rs.upper, lhs.spec.h);
    }
    entry.rhs_lower = rs.lower;
    entry.rhs_upper = rs.upper;
    entry.status = judge(relation, ls, rs);
    if (entry.status == ChainStatus::Violated) {
      entry.lhs_certificate = lhs.bad_certificate;
      entry.rhs_certificate = rhs->bad_certificate.empty() ? rhs->exhausted_certificate
                                                           : rhs->bad_certificate;
    }
    report.entries.push_back(std::move(entry));
  };

  for (const auto& [key, e] : db.entries()) {
    const KindSpec& s = e.spec;
    switch (s.kind) {
      case Kind::F8:
        emit("f8<=f9", "<=", e, {Kind::F9, s.h, s.c, s.m}, 1, true);
        emit("f8<=f8s", "<=", e, {Kind::F8S, s.h, s.c, s.m}, 1, true);
        break;
      case Kind::F9:
        emit("f9<=f9s", "<=", e, {Kind::F9S, s.h, s.c, s.m}, 1, true);
        break;
      case Kind::F8S:
        emit("f8s<=f9s", "<=", e, {Kind::F9S, s.h, s.c, s.m}, 1, true);
        emit("f8s<=hj", "<=", e, {Kind::HJ, s.h, s.c, s.m}, 1, true);
        break;
      case Kind::F9S: {
        emit("f9s<=f13", "<=", e, {Kind::F13, s.h, s.c, s.m}, 1, true);
        double pow_hm = std::pow(s.h, s.m);
        if (pow_hm <= 1024)
          emit("f9s<=m*hj", "<=", e,
               {Kind::HJ, static_cast<int>(pow_hm), s.c, 1}, s.m, true);
        break;
      }
      case Kind::F9SN:
        emit("f9sn<=f13", "<=", e, {Kind::F13, s.h, s.c, s.m * s.n}, 1, true);
        break;
      case Kind::HJEQ: {
        double pow_hm = std::pow(s.h, s.m);
        if (pow_hm <= 1024)
          emit("hjeq<=m*hj", "<=", e, {Kind::HJ, static_cast<int>(pow_hm), s.c, 1}, s.m,
               false);
        break;
      }
      case Kind::GW:
        if (s.h == 1) {
          // progression numbers at length m+1 equal dimension-one grid numbers
          auto vdw = db.get(KindSpec{Kind::VDW, 1, s.c, s.m + 1}.key());
          if (vdw) emit("vdw=gw1", "==", *vdw, s, 1, false);
          else {
            ChainEntry entry;
            entry.id = "vdw=gw1";
            entry.relation = "==";
            entry.lhs_key = KindSpec{Kind::VDW, 1, s.c, s.m + 1}.key();
            entry.rhs_key = key;
            entry.description =
                KindSpec{Kind::VDW, 1, s.c, s.m + 1}.display() + " == " + s.display();
            entry.status = ChainStatus::NotComparable;
            report.entries.push_back(std::move(entry));
          }
        }
        break;
      case Kind::HJ:
        if (s.m == 1) {
          // composed bound: lines from the profile-invariant kind at the
          // grid-number block count
          auto gw = db.get(KindSpec{Kind::GW, s.h, s.c, 1}.key());
          if (gw && gw->value) {
            int mstar = s.h * s.h * *gw->value;
            emit("hj<=f8s@gw", "<=", e, {Kind::F8S, s.h, s.c, mstar}, 1, false);
          } else {
            ChainEntry entry;
            entry.id = "hj<=f8s@gw";
            entry.relation = "<=";
            entry.lhs_key = key;
            entry.rhs_key = KindSpec{Kind::GW, s.h, s.c, 1}.key() + " (missing)";
            entry.description = s.display() + " <= f8s(h^2*w;...)";
            entry.status = ChainStatus::NotComparable;
            report.entries.push_back(std::move(entry));
          }
        }
        break;
      default:
        break;
    }
  }
  return report;
}

}  // namespace hjw
