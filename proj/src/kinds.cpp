#include "hjw/kinds.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hjw {

bool kind_is_f_family(Kind k) {
  switch (k) {
    case Kind::F8:
    case Kind::F9:
    case Kind::F8S:
    case Kind::F9S:
    case Kind::F9SN:
      return true;
    default:
      return false;
  }
}

bool kind_uses_cube(Kind k) {
  switch (k) {
    case Kind::VDW:
    case Kind::GW:
    case Kind::OPLUS:
      return false;
    default:
      return true;
  }
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::HJ: return "hj";
    case Kind::HJEQ: return "hjeq";
    case Kind::F8: return "f8";
    case Kind::F9: return "f9";
    case Kind::F8S: return "f8s";
    case Kind::F9S: return "f9s";
    case Kind::F9SN: return "f9sn";
    case Kind::F13: return "f13";
    case Kind::VDW: return "vdw";
    case Kind::GW: return "gw";
    case Kind::OPLUS: return "oplus";
  }
  return "?";
}

Kind parse_kind(const std::string& name) {
  for (Kind k : {Kind::HJ, Kind::HJEQ, Kind::F8, Kind::F9, Kind::F8S, Kind::F9S,
                 Kind::F9SN, Kind::F13, Kind::VDW, Kind::GW, Kind::OPLUS})
    if (kind_name(k) == name) return k;
  throw std::invalid_argument("unknown kind '" + name + "'");
}

void KindSpec::validate() const {
  if (c < 1) throw std::invalid_argument("kind spec: need at least one color");
  if (kind != Kind::VDW && h < 1)
    throw std::invalid_argument("kind spec: alphabet size must be positive");
  if (kind != Kind::OPLUS && m < 1)
    throw std::invalid_argument("kind spec: dimension must be positive");
  if (kind_is_f_family(kind) && m % h != 0)
    throw std::invalid_argument("kind spec: alphabet size must divide the dimension");
  if (kind == Kind::F9SN && n < 1)
    throw std::invalid_argument("kind spec: block size must be positive");
}

bool KindSpec::size_admissible(int size, bool enforce_divisibility) const {
  if (size < 1) return false;
  if (enforce_divisibility && kind_is_f_family(kind) && size % h != 0) return false;
  return true;
}

int KindSpec::first_admissible(bool enforce_divisibility) const {
  return (enforce_divisibility && kind_is_f_family(kind)) ? h : 1;
}

int KindSpec::next_admissible(int size, bool enforce_divisibility) const {
  return (enforce_divisibility && kind_is_f_family(kind)) ? size + h : size + 1;
}

Ground KindSpec::ground_for(int size) const {
  switch (kind) {
    case Kind::VDW:
      return Ground::interval(size);
    case Kind::GW:
      return Ground::grid(h, size);
    case Kind::OPLUS:
      return Ground::omega(size, h);
    default:
      return Ground::cube(size, h);
  }
}

std::string KindSpec::key() const {
  std::ostringstream os;
  os << kind_name(kind);
  switch (kind) {
    case Kind::VDW:
      os << ":m=" << m << ":c=" << c;
      break;
    case Kind::OPLUS:
      os << ":h=" << h << ":c=" << c;
      break;
    case Kind::F9SN:
      os << ":m=" << m << ":n=" << n << ":h=" << h << ":c=" << c;
      break;
    default:
      os << ":m=" << m << ":h=" << h << ":c=" << c;
      break;
  }
  return os.str();
}

std::string KindSpec::display(int value) const {
  std::ostringstream os;
  os << kind_name(kind) << '(';
  switch (kind) {
    case Kind::VDW:
      os << m << ';' << c;
      break;
    case Kind::OPLUS:
      os << h << ',' << c;
      break;
    case Kind::F9SN:
      os << m << ',' << n << ';' << h << ',' << c;
      break;
    default:
      os << m << ';' << h << ',' << c;
      break;
  }
  os << ')';
  if (value >= 0) os << '=' << value;
  return os.str();
}

std::string witness_to_string(const Witness& w) {
  std::ostringstream os;
  if (const auto* s = std::get_if<SubspaceWitness>(&w)) {
    os << "subspace{blocks=";
    for (size_t i = 0; i < s->system.blocks.size(); ++i) {
      os << (i ? "," : "") << '{';
      for (size_t j = 0; j < s->system.blocks[i].size(); ++j)
        os << (j ? "," : "") << s->system.blocks[i][j];
      os << '}';
    }
    os << " anchor=";
    for (Letter a : s->system.anchor) os << (a == kNoLetter ? std::string("_") : std::to_string(a));
    os << '}';
  } else if (const auto* f = std::get_if<F13Witness>(&w)) {
    os << "f13{N=";
    for (size_t i = 0; i < f->positions.size(); ++i) os << (i ? "," : "") << f->positions[i];
    os << " anchor=";
    for (Letter a : f->anchor) os << (a == kNoLetter ? std::string("_") : std::to_string(a));
    os << '}';
  } else if (const auto* a = std::get_if<ApWitness>(&w)) {
    os << "ap{start=" << a->start << " step=" << a->step << '}';
  } else if (const auto* g = std::get_if<GwWitness>(&w)) {
    os << "gw{corner=";
    for (size_t i = 0; i < g->corner.size(); ++i) os << (i ? "," : "") << g->corner[i];
    os << " step=" << g->step << '}';
  } else if (const auto* o = std::get_if<OplusWitness>(&w)) {
    os << "oplus{base=";
    for (size_t i = 0; i < o->base.size(); ++i) os << (i ? "," : "") << o->base[i];
    os << " step=" << o->step << '}';
  }
  return os.str();
}

}  // namespace hjw
