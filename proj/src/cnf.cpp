#include "hjw/cnf.hpp"

#include <map>
#include <sstream>

#include "hjw/checkers.hpp"
#include "hjw/search.hpp"

namespace hjw {

namespace {

bool pair_encoded(Kind k) {
  switch (k) {
    case Kind::F8:
    case Kind::F9:
    case Kind::F8S:
    case Kind::F9S:
    case Kind::F9SN:
    case Kind::F13:
      return true;
    default:
      return false;  // not-all-equal kinds: HJ, HJEQ, VDW, GW, OPLUS
  }
}

}  // namespace

std::string CnfDocument::to_dimacs() const {
  std::ostringstream os;
  for (const auto& c : comments) os << "c " << c << '\n';
  os << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const auto& clause : clauses) {
    for (int lit : clause) os << lit << ' ';
    os << "0\n";
  }
  return os.str();
}

CnfDocument export_cnf(const KindSpec& spec, int size, std::uint64_t max_clauses) {
  spec.validate();
  if (!spec.size_admissible(size))
    throw std::invalid_argument("export_cnf: size not admissible for this kind");
  const std::uint64_t points = spec.ground_for(size).point_count();
  const int c = spec.c;

  CnfDocument doc;
  {
    std::ostringstream os;
    os << "kind=" << kind_name(spec.kind) << " h=" << spec.h << " c=" << spec.c
       << " k=" << size << " encoding=v1";
    doc.comments.push_back(os.str());
  }
  if (spec.kind == Kind::F9SN) doc.comments.push_back("n=" + std::to_string(spec.n));
  if (spec.kind != Kind::VDW && spec.kind != Kind::OPLUS)
    doc.comments.push_back("m=" + std::to_string(spec.m));
  doc.comments.push_back("vars: " + std::string(c == 2 ? "point p -> p+1"
                                                       : "point p, color g -> p*c+g+1"));

  auto guard = [&](std::uint64_t n) {
    if (n > max_clauses) throw std::length_error("export_cnf: clause limit exceeded");
  };

  if (c == 1) {
    // one color: a candidate is a witness for the unique coloring iff it
    // exists at all, so the instance is unsatisfiable exactly then
    doc.num_vars = 0;
    bool any = false;
    for_each_candidate(spec, size, [&](Candidate&&) {
      any = true;
      return false;
    });
    if (any) doc.clauses.push_back({});
    return doc;
  }

  // point variables
  const bool onehot = c > 2;
  auto point_var = [&](PointRank p, int g) {
    return onehot ? static_cast<int>(p) * c + g + 1 : static_cast<int>(p) + 1;
  };
  doc.num_vars = onehot ? static_cast<int>(points) * c : static_cast<int>(points);

  if (onehot) {
    for (PointRank p = 0; p < points; ++p) {
      std::vector<int> at_least;
      for (int g = 0; g < c; ++g) at_least.push_back(point_var(p, g));
      doc.clauses.push_back(std::move(at_least));
      for (int g = 0; g < c; ++g)
        for (int g2 = g + 1; g2 < c; ++g2)
          doc.clauses.push_back({-point_var(p, g), -point_var(p, g2)});
      guard(doc.clauses.size());
    }
  }

  if (!pair_encoded(spec.kind)) {
    for_each_candidate(spec, size, [&](Candidate&& cand) {
      if (cand.classes.empty()) {
        // this candidate is a witness for every coloring
        doc.clauses.push_back({});
        return false;
      }
      for (const auto& cls : cand.classes) {
        if (c == 2) {
          std::vector<int> pos, neg;
          for (PointRank p : cls) {
            pos.push_back(point_var(p, 0));
            neg.push_back(-point_var(p, 0));
          }
          doc.clauses.push_back(std::move(pos));   // not all color 0
          doc.clauses.push_back(std::move(neg));   // not all color 1
        } else {
          for (int g = 0; g < c; ++g) {
            std::vector<int> clause;
            for (PointRank p : cls) clause.push_back(-point_var(p, g));
            doc.clauses.push_back(std::move(clause));
          }
        }
      }
      guard(doc.clauses.size());
      return true;
    });
    return doc;
  }

  // pair encoding: one equality variable per required-equal pair (shared
  // across candidates), one some-pair-differs clause per candidate
  std::map<std::pair<PointRank, PointRank>, int> eq_var;
  int next_var = doc.num_vars;
  auto eq_var_for = [&](PointRank a, PointRank b) {
    if (a > b) std::swap(a, b);
    auto [it, inserted] = eq_var.emplace(std::make_pair(a, b), 0);
    if (inserted) {
      it->second = ++next_var;
      const int y = it->second;
      if (c == 2) {
        const int xa = point_var(a, 0), xb = point_var(b, 0);
        doc.clauses.push_back({-y, -xa, xb});
        doc.clauses.push_back({-y, xa, -xb});
        doc.clauses.push_back({y, xa, xb});
        doc.clauses.push_back({y, -xa, -xb});
      } else {
        for (int g = 0; g < c; ++g) {
          doc.clauses.push_back({-y, -point_var(a, g), point_var(b, g)});
          doc.clauses.push_back({-y, point_var(a, g), -point_var(b, g)});
          doc.clauses.push_back({y, -point_var(a, g), -point_var(b, g)});
        }
      }
    }
    return it->second;
  };

  for_each_candidate(spec, size, [&](Candidate&& cand) {
    std::vector<int> differs;
    for (const auto& cls : cand.classes)
      for (size_t i = 0; i + 1 < cls.size(); ++i)
        differs.push_back(-eq_var_for(cls[i], cls[i + 1]));
    doc.clauses.push_back(std::move(differs));
    guard(doc.clauses.size());
    return true;
  });
  doc.num_vars = next_var;
  return doc;
}

CnfModel CnfModel::parse(const std::string& text, int num_vars) {
  CnfModel model;
  model.value.assign(static_cast<size_t>(num_vars) + 1, false);
  std::vector<bool> seen(static_cast<size_t>(num_vars) + 1, false);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "v" || tok == "s" || tok == "SAT" || tok == "SATISFIABLE") continue;
    long lit;
    try {
      lit = std::stol(tok);
    } catch (...) {
      // skip solver chatter
      continue;
    }
    if (lit == 0) continue;
    long var = lit > 0 ? lit : -lit;
    if (var > num_vars) continue;  // auxiliary beyond the point variables is fine
    model.value[static_cast<size_t>(var)] = lit > 0;
    seen[static_cast<size_t>(var)] = true;
  }
  for (int v = 1; v <= num_vars; ++v)
    if (!seen[static_cast<size_t>(v)])
      throw std::invalid_argument("model: variable " + std::to_string(v) + " unassigned");
  return model;
}

Certificate decode_cnf_model(const KindSpec& spec, int size, const CnfModel& model) {
  spec.validate();
  const std::uint64_t points = spec.ground_for(size).point_count();
  const int c = spec.c;
  if (c < 2) throw std::invalid_argument("decode_cnf_model: needs at least two colors");
  const std::uint64_t needed = c > 2 ? points * static_cast<std::uint64_t>(c) : points;
  if (model.value.size() < needed + 1)
    throw std::invalid_argument("decode_cnf_model: model too short");

  Coloring d;
  d.ground = spec.ground_for(size);
  d.colors = c;
  d.table.resize(static_cast<size_t>(points));
  for (PointRank p = 0; p < points; ++p) {
    if (c == 2) {
      d.table[static_cast<size_t>(p)] =
          model.value[static_cast<size_t>(p) + 1] ? 1 : 0;  // var true = color 1
    } else {
      int hot = -1;
      for (int g = 0; g < c; ++g)
        if (model.value[static_cast<size_t>(p) * c + g + 1]) {
          if (hot != -1)
            throw std::invalid_argument("decode_cnf_model: one-hot violation at point " +
                                        std::to_string(p));
          hot = g;
        }
      if (hot == -1)
        throw std::invalid_argument("decode_cnf_model: no color at point " + std::to_string(p));
      d.table[static_cast<size_t>(p)] = static_cast<std::uint8_t>(hot);
    }
  }
  d.validate();
  if (find_witness(spec, d).has_value())
    throw InconsistentModelError("decode_cnf_model: decoded coloring admits a witness");
  SearchStats stats;
  stats.threads = 1;
  return make_bad_certificate(spec, size, std::move(d), stats);
}

}  // namespace hjw
