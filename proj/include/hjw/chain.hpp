#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hjw/certificate.hpp"
#include "hjw/kinds.hpp"

namespace hjw {

// A stored result failed certificate verification on record or load.
struct RejectedResultError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DbEntry {
  KindSpec spec;
  std::optional<int> value;
  int lower = 1;
  std::optional<int> upper;
  std::string bad_certificate;        // file path, relative to the db
  std::string exhausted_certificate;  // file path, relative to the db

  nlohmann::json to_json() const;
  static DbEntry from_json(const nlohmann::json& j);
};

// One JSON file mapping kind keys to results plus certificate references.
// Writes replace the file atomically.
class ResultsDb {
 public:
  explicit ResultsDb(std::string path) : path_(std::move(path)) {}

  void load(bool verify_certificates = false);
  void save() const;
  // Verifies the referenced certificates before accepting; throws
  // RejectedResultError when one fails to re-verify.
  void record(const DbEntry& entry, bool verify_certificates = true);
  std::optional<DbEntry> get(const std::string& key) const;
  const std::map<std::string, DbEntry>& entries() const { return entries_; }
  const std::string& path() const { return path_; }
  std::string resolve(const std::string& relative) const;
  void verify_certificate_or_throw(const DbEntry& entry) const;

 private:
  std::string path_;
  std::map<std::string, DbEntry> entries_;
};

enum class ChainMode { Strict, RoundUp };
enum class ChainStatus { Holds, Violated, NotComparable };

std::string chain_mode_name(ChainMode m);
std::string chain_status_name(ChainStatus s);

struct ChainEntry {
  std::string id;           // e.g. "f9s<=f13"
  std::string description;  // instantiated, e.g. "f9s(2;2,2) <= f13(2;2,2)"
  std::string relation;     // "<=" or "=="
  std::string lhs_key, rhs_key;
  int lhs_lower = 0;
  std::optional<int> lhs_upper;
  long long rhs_lower = 0;  // after scaling and mode adjustment
  std::optional<long long> rhs_upper;
  ChainStatus status = ChainStatus::NotComparable;
  std::string lhs_certificate, rhs_certificate;  // attached when violated

  nlohmann::json to_json() const;
};

struct ChainReport {
  ChainMode mode = ChainMode::Strict;
  std::vector<ChainEntry> entries;

  nlohmann::json to_json() const;
  bool any_violated() const;
  std::optional<ChainEntry> find(const std::string& id, const std::string& lhs_key) const;
};

// Audits every instantiable inequality between stored results: the pairwise
// ladder among the f-family, their count-kind and subspace-kind dominators,
// the progression/grid identity, and the composed grid-route bound for lines.
// Round-up mode compares an f-family left side against the right side rounded
// up to the next multiple of the alphabet size, reflecting the size
// divisibility built into the f-family scan.
ChainReport verify_chain(const ResultsDb& db, ChainMode mode);

}  // namespace hjw
