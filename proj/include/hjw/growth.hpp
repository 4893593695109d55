#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hjw/core.hpp"

namespace hjw {

using BigInt = boost::multiprecision::cpp_int;

struct EvalOutcome {
  std::optional<BigInt> value;
  bool budget_exceeded = false;
  long steps = 0;            // recursion steps consumed
  long exceeded_at_step = 0; // step index reached when the budget ran out
};

// Exact evaluation of the hierarchy generators:
//   E_0(x,y) = x+y,  E_1(x) = x^2+2,  E_{n+2}(0) = 2,
//   E_{n+2}(x+1) = E_{n+1}(E_{n+2}(x)).
// E_0 is binary, everything above is unary; wrong arity throws.  Every
// intermediate is checked against the budget; there is no unbounded path.
EvalOutcome eval_E(int n, const std::vector<BigInt>& args, const GrowthBudget& budget);

// Symbolic iterated-exponential expressions for bounds too large to evaluate.
struct TowerExpr {
  enum class Op { Literal, Add, Mul, Pow };
  Op op = Op::Literal;
  BigInt literal = 0;
  std::vector<TowerExpr> kids;

  static TowerExpr lit(BigInt v);
  static TowerExpr add(TowerExpr a, TowerExpr b);
  static TowerExpr mul(TowerExpr a, TowerExpr b);
  static TowerExpr pow(TowerExpr base, TowerExpr exp);

  std::string to_text() const;  // parenthesized form, e.g. "2^(2^(12))"
};

// 2^2^r^2^2^(m+9), the two-color-free-parameter progression bound shape.
TowerExpr tower_gowers(int r, int m);
// A tower of 24 twos.
TowerExpr tower_shelah24();
TowerExpr tower_literal(BigInt v);
// Evaluates the generator call and wraps the exact value; throws when the
// budget is exhausted.
TowerExpr tower_from_E(int n, const std::vector<BigInt>& args, const GrowthBudget& budget);

enum class Ordering { Less, Equal, Greater, Unknown };

std::optional<BigInt> tower_try_eval(const TowerExpr& e, const GrowthBudget& budget);

// Consistent with exact comparison whenever both sides evaluate within the
// budget; otherwise reduces matching power towers level by level.  Returns
// Unknown rather than guessing outside the sound fragment.
Ordering tower_compare(const TowerExpr& a, const TowerExpr& b,
                       const GrowthBudget& budget = {});

// CLI-facing tower specs: "shelah24", "gowers:R,M", "E:N,X", "lit:V" or a
// bare integer.  The name is the canonical display form.
struct NamedTower {
  TowerExpr expr;
  std::string name;
};
NamedTower parse_tower_spec(const std::string& spec, const GrowthBudget& budget = {});

}  // namespace hjw
