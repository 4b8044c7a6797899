#pragma once

#include <span>
#include <string>
#include <vector>

#include "bsq/interval.hpp"
#include "bsq/vocab.hpp"

namespace bsq {

// Integer-valued term over state variables and static functions. Parameters
// may only appear as one entire side of a comparison, never inside arithmetic
// or as a function argument; validate_formula enforces this.
struct Term {
  enum class Kind { Literal, Var, Static, Param, Neg, Abs, Add, Sub };

  Kind kind = Kind::Literal;
  long long value = 0;     // Literal
  int index = -1;          // Var / Static / Param
  std::vector<Term> args;  // children for Static / Neg / Abs / Add / Sub

  static Term literal(long long v);
  static Term var(int idx);
  static Term param(int idx);
  static Term static_app(int idx, std::vector<Term> a);
  static Term unary(Kind k, Term a);
  static Term binary(Kind k, Term a, Term b);

  bool operator==(const Term&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
const char* to_string(CmpOp op);

struct Formula {
  enum class Kind { True, Cmp, And, Or, Not };

  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  std::vector<Term> terms;        // [lhs, rhs] when Cmp
  std::vector<Formula> children;  // And / Or / Not

  static Formula truth();
  static Formula cmp(Term lhs, CmpOp op, Term rhs);
  static Formula conj(std::vector<Formula> ch);
  static Formula disj(std::vector<Formula> ch);
  static Formula negate(Formula f);

  bool operator==(const Formula&) const = default;
};

long long eval_term(const Term& t, std::span<const int> state, const Vocabulary& vocab);

// Truth value on a single state. Comparisons against a parameter use the
// canonical half-open convention so they agree exactly with the interval
// reduction below: {<, <=} against theta means theta < v, {>, >=} means
// theta >= v.
bool eval_formula(const Formula& f, std::span<const int> state, const Vocabulary& vocab,
                  std::span<const double> params);

// The set of parameter vectors for which the formula holds on this state.
IntervalSet formula_interval(const Formula& f, std::span<const int> state, const Vocabulary& vocab,
                             const ParamSpacePtr& space);

bool formula_has_param(const Formula& f);

// Structural checks: variable/static indices resolve, parameters appear only
// as bare comparison operands with inequality operators, and (optionally)
// every referenced state variable is observable.
void validate_formula(const Formula& f, const Vocabulary& vocab, const ParamSpace& space,
                      bool allow_params, bool observable_only);

// Satisfying-state mask for a parameter-free formula.
std::vector<std::uint8_t> satisfying_mask(const Formula& f,
                                          std::span<const std::vector<int>> states,
                                          const Vocabulary& vocab);

}  // namespace bsq
