#include "hjw/growth.hpp"

#include <sstream>
#include <stdexcept>

namespace hjw {

namespace {

long bit_length(const BigInt& v) {
  if (v == 0) return 1;
  return static_cast<long>(msb(v)) + 1;
}

struct EvalState {
  const GrowthBudget& budget;
  long steps = 0;
  bool exceeded = false;

  bool step() {
    if (++steps > budget.max_steps) {
      exceeded = true;
      return false;
    }
    return true;
  }
  bool fits(const BigInt& v) {
    if (bit_length(v) > budget.max_bits) {
      exceeded = true;
      return false;
    }
    return true;
  }
};

// E_n for n >= 1, unary.
bool eval_unary(int n, const BigInt& x, EvalState& st, BigInt& out) {
  if (n == 1) {
    if (!st.step()) return false;
    out = x * x + 2;
    return st.fits(out);
  }
  // E_n(x) = E_{n-1}^x(2)
  BigInt v = 2;
  for (BigInt i = 0; i < x; ++i) {
    BigInt next;
    if (!eval_unary(n - 1, v, st, next)) return false;
    v = std::move(next);
  }
  out = std::move(v);
  return st.fits(out);
}

}  // namespace

EvalOutcome eval_E(int n, const std::vector<BigInt>& args, const GrowthBudget& budget) {
  if (n < 0) throw std::invalid_argument("eval_E: negative index");
  if (budget.max_bits < 1 || budget.max_steps < 1)
    throw std::invalid_argument("eval_E: budget must be positive");
  EvalOutcome out;
  EvalState st{budget};
  if (n == 0) {
    if (args.size() != 2) throw std::invalid_argument("eval_E: E_0 takes two arguments");
    BigInt v = args[0] + args[1];
    st.step();
    if (st.fits(v)) out.value = std::move(v);
  } else {
    if (args.size() != 1) throw std::invalid_argument("eval_E: E_n is unary for n >= 1");
    if (args[0] < 0) throw std::invalid_argument("eval_E: negative argument");
    BigInt v;
    if (eval_unary(n, args[0], st, v)) out.value = std::move(v);
  }
  out.steps = st.steps;
  out.budget_exceeded = st.exceeded;
  if (st.exceeded) out.exceeded_at_step = st.steps;
  return out;
}

TowerExpr TowerExpr::lit(BigInt v) {
  if (v <= 0) throw std::invalid_argument("tower: literals must be positive");
  TowerExpr e;
  e.op = Op::Literal;
  e.literal = std::move(v);
  return e;
}
TowerExpr TowerExpr::add(TowerExpr a, TowerExpr b) {
  TowerExpr e;
  e.op = Op::Add;
  e.kids = {std::move(a), std::move(b)};
  return e;
}
TowerExpr TowerExpr::mul(TowerExpr a, TowerExpr b) {
  TowerExpr e;
  e.op = Op::Mul;
  e.kids = {std::move(a), std::move(b)};
  return e;
}
TowerExpr TowerExpr::pow(TowerExpr base, TowerExpr exp) {
  TowerExpr e;
  e.op = Op::Pow;
  e.kids = {std::move(base), std::move(exp)};
  return e;
}

std::string TowerExpr::to_text() const {
  switch (op) {
    case Op::Literal:
      return literal.str();
    case Op::Add:
      return "(" + kids[0].to_text() + "+" + kids[1].to_text() + ")";
    case Op::Mul:
      return "(" + kids[0].to_text() + "*" + kids[1].to_text() + ")";
    case Op::Pow: {
      std::string base = kids[0].op == Op::Literal ? kids[0].to_text()
                                                   : "(" + kids[0].to_text() + ")";
      return base + "^(" + kids[1].to_text() + ")";
    }
  }
  return "?";
}

TowerExpr tower_gowers(int r, int m) {
  if (r < 1 || m < 1) throw std::invalid_argument("tower_gowers: parameters must be positive");
  using T = TowerExpr;
  return T::pow(T::lit(2),
                T::pow(T::lit(2),
                       T::pow(T::lit(r), T::pow(T::lit(2), T::pow(T::lit(2), T::lit(m + 9))))));
}

TowerExpr tower_shelah24() {
  TowerExpr t = TowerExpr::lit(2);
  for (int i = 1; i < 24; ++i) t = TowerExpr::pow(TowerExpr::lit(2), std::move(t));
  return t;
}

TowerExpr tower_literal(BigInt v) { return TowerExpr::lit(std::move(v)); }

TowerExpr tower_from_E(int n, const std::vector<BigInt>& args, const GrowthBudget& budget) {
  EvalOutcome out = eval_E(n, args, budget);
  if (!out.value) throw std::runtime_error("tower_from_E: evaluation exceeded the budget");
  return TowerExpr::lit(*out.value);
}

namespace {

// Fold trivial bases so that an evaluation failure certifies a huge value.
TowerExpr simplify(const TowerExpr& e) {
  if (e.op == TowerExpr::Op::Literal) return e;
  TowerExpr out;
  out.op = e.op;
  for (const auto& k : e.kids) out.kids.push_back(simplify(k));
  auto is_lit = [](const TowerExpr& t, int v) {
    return t.op == TowerExpr::Op::Literal && t.literal == v;
  };
  if (e.op == TowerExpr::Op::Pow && is_lit(out.kids[0], 1)) return TowerExpr::lit(1);
  if (e.op == TowerExpr::Op::Mul) {
    if (is_lit(out.kids[0], 1)) return out.kids[1];
    if (is_lit(out.kids[1], 1)) return out.kids[0];
  }
  return out;
}

std::optional<BigInt> eval_rec(const TowerExpr& e, const GrowthBudget& budget) {
  switch (e.op) {
    case TowerExpr::Op::Literal:
      if (bit_length(e.literal) > budget.max_bits) return std::nullopt;
      return e.literal;
    case TowerExpr::Op::Add: {
      auto a = eval_rec(e.kids[0], budget), b = eval_rec(e.kids[1], budget);
      if (!a || !b) return std::nullopt;
      BigInt v = *a + *b;
      if (bit_length(v) > budget.max_bits) return std::nullopt;
      return v;
    }
    case TowerExpr::Op::Mul: {
      auto a = eval_rec(e.kids[0], budget), b = eval_rec(e.kids[1], budget);
      if (!a || !b) return std::nullopt;
      BigInt v = *a * *b;
      if (bit_length(v) > budget.max_bits) return std::nullopt;
      return v;
    }
    case TowerExpr::Op::Pow: {
      auto base = eval_rec(e.kids[0], budget), exp = eval_rec(e.kids[1], budget);
      if (!base || !exp) return std::nullopt;
      if (*base == 1) return BigInt(1);
      if (*exp > budget.max_bits) return std::nullopt;  // value has > max_bits bits
      BigInt v = boost::multiprecision::pow(*base, static_cast<unsigned>(*exp));
      if (bit_length(v) > budget.max_bits) return std::nullopt;
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<BigInt> tower_try_eval(const TowerExpr& e, const GrowthBudget& budget) {
  return eval_rec(simplify(e), budget);
}

Ordering tower_compare(const TowerExpr& a_in, const TowerExpr& b_in,
                       const GrowthBudget& budget) {
  const TowerExpr a = simplify(a_in);
  const TowerExpr b = simplify(b_in);
  auto ea = eval_rec(a, budget);
  auto eb = eval_rec(b, budget);
  if (ea && eb) {
    if (*ea < *eb) return Ordering::Less;
    if (*ea > *eb) return Ordering::Greater;
    return Ordering::Equal;
  }
  // after folding, every node dominates its children, so an unevaluable side
  // exceeds max_bits bits while an evaluated side fits within them
  if (ea && !eb) return Ordering::Less;
  if (!ea && eb) return Ordering::Greater;

  // both too large: peel matching power towers
  if (a.op == TowerExpr::Op::Pow && b.op == TowerExpr::Op::Pow) {
    auto base_a = eval_rec(a.kids[0], budget);
    auto base_b = eval_rec(b.kids[0], budget);
    if (base_a && base_b) {
      if (*base_a == *base_b) return tower_compare(a.kids[1], b.kids[1], budget);
      Ordering exp_cmp = tower_compare(a.kids[1], b.kids[1], budget);
      if (*base_a < *base_b &&
          (exp_cmp == Ordering::Less || exp_cmp == Ordering::Equal))
        return Ordering::Less;
      if (*base_a > *base_b &&
          (exp_cmp == Ordering::Greater || exp_cmp == Ordering::Equal))
        return Ordering::Greater;
    }
  }
  return Ordering::Unknown;
}

NamedTower parse_tower_spec(const std::string& spec, const GrowthBudget& budget) {
  if (spec == "shelah24") return {tower_shelah24(), "shelah24"};
  if (spec.rfind("gowers:", 0) == 0) {
    int r = 0, m = 0;
    if (std::sscanf(spec.c_str(), "gowers:%d,%d", &r, &m) != 2)
      throw std::invalid_argument("tower spec: expected gowers:R,M");
    std::ostringstream name;
    name << "gowers(" << r << "," << m << ")";
    return {tower_gowers(r, m), name.str()};
  }
  if (spec.rfind("E:", 0) == 0) {
    int n = 0;
    long long x = 0, y = 0;
    if (std::sscanf(spec.c_str(), "E:%d,%lld,%lld", &n, &x, &y) == 3) {
      std::ostringstream name;
      name << "E" << n << "(" << x << "," << y << ")";
      return {tower_from_E(n, {BigInt(x), BigInt(y)}, budget), name.str()};
    }
    if (std::sscanf(spec.c_str(), "E:%d,%lld", &n, &x) == 2) {
      std::ostringstream name;
      name << "E" << n << "(" << x << ")";
      return {tower_from_E(n, {BigInt(x)}, budget), name.str()};
    }
    throw std::invalid_argument("tower spec: expected E:N,X");
  }
  std::string digits = spec.rfind("lit:", 0) == 0 ? spec.substr(4) : spec;
  try {
    BigInt v(digits);
    return {tower_literal(v), v.str()};
  } catch (...) {
    throw std::invalid_argument("tower spec: unrecognized '" + spec + "'");
  }
}

}  // namespace hjw
