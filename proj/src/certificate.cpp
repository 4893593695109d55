#include "hjw/certificate.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hjw/checkers.hpp"

namespace hjw {

using nlohmann::json;

json kind_spec_to_json(const KindSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  j["h"] = spec.h;
  j["c"] = spec.c;
  if (spec.kind == Kind::OPLUS) j["m"] = nullptr;
  else j["m"] = spec.m;
  if (spec.kind == Kind::F9SN) j["n"] = spec.n;
  else j["n"] = nullptr;
  return j;
}

KindSpec kind_spec_from_json(const json& j) {
  KindSpec spec;
  spec.kind = parse_kind(j.at("kind").get<std::string>());
  spec.h = j.at("h").get<int>();
  spec.c = j.at("c").get<int>();
  if (j.contains("m") && !j.at("m").is_null()) spec.m = j.at("m").get<int>();
  if (j.contains("n") && !j.at("n").is_null()) spec.n = j.at("n").get<int>();
  spec.validate();
  return spec;
}

json coloring_to_json(const Coloring& d) {
  json j;
  j["ground"] = d.ground.to_string();
  j["encoding"] = "base-c-string";
  j["data"] = d.encode_table();
  return j;
}

Coloring coloring_from_json(const json& j, int colors) {
  if (j.at("encoding").get<std::string>() != "base-c-string")
    throw std::invalid_argument("coloring: unknown encoding");
  Ground g = Ground::parse(j.at("ground").get<std::string>());
  return Coloring::decode(g, colors, j.at("data").get<std::string>());
}

json witness_to_json(const Witness& w) {
  json j;
  if (const auto* s = std::get_if<SubspaceWitness>(&w)) {
    j["type"] = "subspace";
    j["k"] = s->system.k;
    j["blocks"] = s->system.blocks;
    json anchor = json::array();
    for (Pos p = 0; p < s->system.k; ++p)
      if (s->system.anchor[p] != kNoLetter)
        anchor.push_back(json::array({p, s->system.anchor[p]}));
    j["anchor"] = anchor;
  } else if (const auto* f = std::get_if<F13Witness>(&w)) {
    j["type"] = "f13";
    j["k"] = f->k;
    j["positions"] = f->positions;
    json anchor = json::array();
    for (Pos p = 0; p < f->k; ++p)
      if (f->anchor[p] != kNoLetter) anchor.push_back(json::array({p, f->anchor[p]}));
    j["anchor"] = anchor;
  } else if (const auto* a = std::get_if<ApWitness>(&w)) {
    j["type"] = "ap";
    j["start"] = a->start;
    j["step"] = a->step;
  } else if (const auto* g = std::get_if<GwWitness>(&w)) {
    j["type"] = "gw";
    j["corner"] = g->corner;
    j["step"] = g->step;
  } else if (const auto* o = std::get_if<OplusWitness>(&w)) {
    j["type"] = "oplus";
    j["base"] = o->base;
    j["step"] = o->step;
  }
  return j;
}

Witness witness_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "subspace") {
    SubspaceWitness s;
    s.system.k = j.at("k").get<int>();
    s.system.blocks = j.at("blocks").get<std::vector<std::vector<Pos>>>();
    s.system.anchor.assign(s.system.k, kNoLetter);
    for (const auto& pair : j.at("anchor"))
      s.system.anchor.at(pair.at(0).get<size_t>()) = pair.at(1).get<Letter>();
    return s;
  }
  if (type == "f13") {
    F13Witness f;
    f.k = j.at("k").get<int>();
    f.positions = j.at("positions").get<std::vector<Pos>>();
    f.anchor.assign(f.k, kNoLetter);
    for (const auto& pair : j.at("anchor"))
      f.anchor.at(pair.at(0).get<size_t>()) = pair.at(1).get<Letter>();
    return f;
  }
  if (type == "ap") return ApWitness{j.at("start").get<long long>(), j.at("step").get<long long>()};
  if (type == "gw") {
    GwWitness g;
    g.corner = j.at("corner").get<std::vector<long long>>();
    g.step = j.at("step").get<long long>();
    return g;
  }
  if (type == "oplus") {
    OplusWitness o;
    o.base = j.at("base").get<std::vector<long long>>();
    o.step = j.at("step").get<long long>();
    return o;
  }
  throw std::invalid_argument("witness: unknown type '" + type + "'");
}

json Certificate::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  json spec_j = kind_spec_to_json(spec);
  j["kind"] = spec_j["kind"];
  j["h"] = spec_j["h"];
  j["c"] = spec_j["c"];
  j["m"] = spec_j["m"];
  j["n"] = spec_j["n"];
  j["k"] = size;
  j["verdict"] = verdict;
  if (coloring) j["coloring"] = coloring_to_json(*coloring);
  else j["coloring"] = nullptr;
  j["search"] = {{"nodes", search.nodes},
                 {"seconds", search.seconds},
                 {"threads", search.threads},
                 {"seed", search.seed}};
  j["tool_version"] = tool_version;
  return j;
}

Certificate Certificate::from_json(const json& j) {
  Certificate cert;
  cert.schema_version = j.at("schema_version").get<int>();
  if (cert.schema_version != kCertificateSchemaVersion)
    throw std::invalid_argument("certificate: unsupported schema version");
  cert.spec = kind_spec_from_json(j);
  cert.size = j.at("k").get<int>();
  cert.verdict = j.at("verdict").get<std::string>();
  if (cert.verdict != "bad" && cert.verdict != "exhausted")
    throw std::invalid_argument("certificate: unknown verdict");
  if (j.contains("coloring") && !j.at("coloring").is_null())
    cert.coloring = coloring_from_json(j.at("coloring"), cert.spec.c);
  const auto& s = j.at("search");
  cert.search.nodes = s.at("nodes").get<std::uint64_t>();
  cert.search.seconds = s.at("seconds").get<double>();
  cert.search.threads = s.at("threads").get<int>();
  cert.search.seed = s.at("seed").get<std::uint64_t>();
  cert.tool_version = j.value("tool_version", "");
  return cert;
}

bool Certificate::reverify() const {
  if (verdict == "bad") {
    if (!coloring) return false;
    if (coloring->ground != spec.ground_for(size)) return false;
    if (coloring->colors != spec.c) return false;
    coloring->validate();
    return !find_witness(spec, *coloring).has_value();
  }
  return verdict == "exhausted";
}

Certificate make_bad_certificate(const KindSpec& spec, int size, Coloring coloring,
                                 const SearchStats& stats) {
  Certificate cert;
  cert.spec = spec;
  cert.size = size;
  cert.verdict = "bad";
  cert.coloring = std::move(coloring);
  cert.search = stats;
  return cert;
}

Certificate make_exhausted_certificate(const KindSpec& spec, int size,
                                       const SearchStats& stats) {
  Certificate cert;
  cert.spec = spec;
  cert.size = size;
  cert.verdict = "exhausted";
  cert.search = stats;
  return cert;
}

void save_json_atomic(const json& j, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot replace " + path);
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace hjw
