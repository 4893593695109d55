#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hjw/kinds.hpp"
#include "hjw/search.hpp"

namespace hjw {

inline constexpr const char* kToolVersion = "hjw 0.1.0";
inline constexpr int kCertificateSchemaVersion = 1;

// A persisted, independently re-checkable record: a bad coloring proving a
// lower bound, or an exhaustion record at the succeeding size.
struct Certificate {
  int schema_version = kCertificateSchemaVersion;
  KindSpec spec;
  int size = 0;
  std::string verdict;  // "bad" | "exhausted"
  std::optional<Coloring> coloring;
  SearchStats search;
  std::string tool_version = kToolVersion;

  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);

  // For a bad certificate: sweep the finders and confirm no witness exists.
  // Exhaustion records only re-check structure.
  bool reverify() const;
};

Certificate make_bad_certificate(const KindSpec& spec, int size, Coloring coloring,
                                 const SearchStats& stats);
Certificate make_exhausted_certificate(const KindSpec& spec, int size,
                                       const SearchStats& stats);

void save_json_atomic(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

nlohmann::json coloring_to_json(const Coloring& d);
Coloring coloring_from_json(const nlohmann::json& j, int colors);

nlohmann::json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);

nlohmann::json kind_spec_to_json(const KindSpec& spec);
KindSpec kind_spec_from_json(const nlohmann::json& j);

}  // namespace hjw
