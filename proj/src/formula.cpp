#include "bsq/formula.hpp"

#include <cstdlib>

namespace bsq {

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

Term Term::literal(long long v) {
  Term t;
  t.kind = Kind::Literal;
  t.value = v;
  return t;
}

Term Term::var(int idx) {
  Term t;
  t.kind = Kind::Var;
  t.index = idx;
  return t;
}

Term Term::param(int idx) {
  Term t;
  t.kind = Kind::Param;
  t.index = idx;
  return t;
}

Term Term::static_app(int idx, std::vector<Term> a) {
  Term t;
  t.kind = Kind::Static;
  t.index = idx;
  t.args = std::move(a);
  return t;
}

Term Term::unary(Kind k, Term a) {
  Term t;
  t.kind = k;
  t.args.push_back(std::move(a));
  return t;
}

Term Term::binary(Kind k, Term a, Term b) {
  Term t;
  t.kind = k;
  t.args.push_back(std::move(a));
  t.args.push_back(std::move(b));
  return t;
}

Formula Formula::truth() { return {}; }

Formula Formula::cmp(Term lhs, CmpOp op, Term rhs) {
  Formula f;
  f.kind = Kind::Cmp;
  f.op = op;
  f.terms.push_back(std::move(lhs));
  f.terms.push_back(std::move(rhs));
  return f;
}

Formula Formula::conj(std::vector<Formula> ch) {
  Formula f;
  f.kind = Kind::And;
  f.children = std::move(ch);
  return f;
}

Formula Formula::disj(std::vector<Formula> ch) {
  Formula f;
  f.kind = Kind::Or;
  f.children = std::move(ch);
  return f;
}

Formula Formula::negate(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(inner));
  return f;
}

long long eval_term(const Term& t, std::span<const int> state, const Vocabulary& vocab) {
  switch (t.kind) {
    case Term::Kind::Literal: return t.value;
    case Term::Kind::Var: return state[static_cast<std::size_t>(t.index)];
    case Term::Kind::Static: {
      std::vector<int> args(t.args.size());
      for (std::size_t i = 0; i < t.args.size(); ++i)
        args[i] = static_cast<int>(eval_term(t.args[i], state, vocab));
      return vocab.statics[static_cast<std::size_t>(t.index)].eval(args);
    }
    case Term::Kind::Param: throw Error("parameter evaluated as an integer term");
    case Term::Kind::Neg: return -eval_term(t.args[0], state, vocab);
    case Term::Kind::Abs: return std::llabs(eval_term(t.args[0], state, vocab));
    case Term::Kind::Add: return eval_term(t.args[0], state, vocab) + eval_term(t.args[1], state, vocab);
    case Term::Kind::Sub: return eval_term(t.args[0], state, vocab) - eval_term(t.args[1], state, vocab);
  }
  throw Error("unreachable term kind");
}

namespace {

bool term_has_param(const Term& t) {
  if (t.kind == Term::Kind::Param) return true;
  for (const auto& a : t.args)
    if (term_has_param(a)) return true;
  return false;
}

// Orient a comparison with a parameter on one side into (theta op value).
struct ParamCmp {
  int param;
  CmpOp op;  // Lt/Le/Gt/Ge with theta on the left
  long long value;
};

CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

ParamCmp orient_param_cmp(const Formula& f, std::span<const int> state, const Vocabulary& vocab) {
  const Term& lhs = f.terms[0];
  const Term& rhs = f.terms[1];
  if (lhs.kind == Term::Kind::Param)
    return {lhs.index, f.op, eval_term(rhs, state, vocab)};
  return {rhs.index, mirror(f.op), eval_term(lhs, state, vocab)};
}

bool cmp_ints(long long a, CmpOp op, long long b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

bool eval_formula(const Formula& f, std::span<const int> state, const Vocabulary& vocab,
                  std::span<const double> params) {
  switch (f.kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::Cmp: {
      if (term_has_param(f.terms[0]) || term_has_param(f.terms[1])) {
        ParamCmp pc = orient_param_cmp(f, state, vocab);
        double theta = params[static_cast<std::size_t>(pc.param)];
        double v = static_cast<double>(pc.value);
        if (pc.op == CmpOp::Lt || pc.op == CmpOp::Le) return theta < v;
        return theta >= v;
      }
      return cmp_ints(eval_term(f.terms[0], state, vocab), f.op,
                      eval_term(f.terms[1], state, vocab));
    }
    case Formula::Kind::And:
      for (const auto& c : f.children)
        if (!eval_formula(c, state, vocab, params)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f.children)
        if (eval_formula(c, state, vocab, params)) return true;
      return false;
    case Formula::Kind::Not: return !eval_formula(f.children[0], state, vocab, params);
  }
  throw Error("unreachable formula kind");
}

IntervalSet formula_interval(const Formula& f, std::span<const int> state, const Vocabulary& vocab,
                             const ParamSpacePtr& space) {
  switch (f.kind) {
    case Formula::Kind::True: return IntervalSet::full(space);
    case Formula::Kind::Cmp: {
      if (term_has_param(f.terms[0]) || term_has_param(f.terms[1])) {
        ParamCmp pc = orient_param_cmp(f, state, vocab);
        Cmp c;
        switch (pc.op) {
          case CmpOp::Lt: c = Cmp::Lt; break;
          case CmpOp::Le: c = Cmp::Le; break;
          case CmpOp::Gt: c = Cmp::Gt; break;
          case CmpOp::Ge: c = Cmp::Ge; break;
          default: throw Error("equality against a parameter has no interval form");
        }
        return IntervalSet::from_constraint(space, static_cast<std::size_t>(pc.param), c,
                                            static_cast<double>(pc.value));
      }
      bool ok = cmp_ints(eval_term(f.terms[0], state, vocab), f.op,
                         eval_term(f.terms[1], state, vocab));
      return ok ? IntervalSet::full(space) : IntervalSet::empty(space);
    }
    case Formula::Kind::And: {
      IntervalSet acc = IntervalSet::full(space);
      for (const auto& c : f.children) {
        acc = acc.intersect(formula_interval(c, state, vocab, space));
        if (acc.empty()) break;
      }
      return acc;
    }
    case Formula::Kind::Or: {
      IntervalSet acc = IntervalSet::empty(space);
      for (const auto& c : f.children) acc = acc.unite(formula_interval(c, state, vocab, space));
      return acc;
    }
    case Formula::Kind::Not: return formula_interval(f.children[0], state, vocab, space).complement();
  }
  throw Error("unreachable formula kind");
}

bool formula_has_param(const Formula& f) {
  if (f.kind == Formula::Kind::Cmp)
    return term_has_param(f.terms[0]) || term_has_param(f.terms[1]);
  for (const auto& c : f.children)
    if (formula_has_param(c)) return true;
  return false;
}

namespace {

void validate_term(const Term& t, const Vocabulary& vocab, const ParamSpace& space,
                   bool observable_only, bool param_position_ok) {
  switch (t.kind) {
    case Term::Kind::Literal: return;
    case Term::Kind::Var: {
      if (t.index < 0 || t.index >= static_cast<int>(vocab.state_vars.size()))
        throw Error("formula references unknown state variable");
      if (observable_only && !vocab.state_vars[static_cast<std::size_t>(t.index)].observable)
        throw Error("fully-observable query uses hidden variable '" +
                    vocab.state_vars[static_cast<std::size_t>(t.index)].name + "'");
      return;
    }
    case Term::Kind::Static:
      if (t.index < 0 || t.index >= static_cast<int>(vocab.statics.size()))
        throw Error("formula references unknown static function");
      if (static_cast<int>(t.args.size()) != vocab.statics[static_cast<std::size_t>(t.index)].arity)
        throw Error("static function '" + vocab.statics[static_cast<std::size_t>(t.index)].name +
                    "' arity mismatch");
      for (const auto& a : t.args) validate_term(a, vocab, space, observable_only, false);
      return;
    case Term::Kind::Param:
      if (!param_position_ok)
        throw Error("parameter may only appear as a bare comparison operand");
      if (t.index < 0 || t.index >= static_cast<int>(space.size()))
        throw Error("formula references undeclared parameter");
      return;
    default:
      for (const auto& a : t.args) validate_term(a, vocab, space, observable_only, false);
      return;
  }
}

}  // namespace

void validate_formula(const Formula& f, const Vocabulary& vocab, const ParamSpace& space,
                      bool allow_params, bool observable_only) {
  switch (f.kind) {
    case Formula::Kind::True: return;
    case Formula::Kind::Cmp: {
      bool lp = term_has_param(f.terms[0]);
      bool rp = term_has_param(f.terms[1]);
      if ((lp || rp) && !allow_params)
        throw Error("parameters are not allowed inside a probability query formula");
      if (lp && rp) throw Error("comparison with parameters on both sides");
      if (lp || rp) {
        const Term& pt = lp ? f.terms[0] : f.terms[1];
        if (pt.kind != Term::Kind::Param)
          throw Error("parameter may only appear as a bare comparison operand");
        if (f.op == CmpOp::Eq || f.op == CmpOp::Ne)
          throw Error("equality comparison against a continuous parameter");
      }
      validate_term(f.terms[0], vocab, space, observable_only, lp);
      validate_term(f.terms[1], vocab, space, observable_only, rp);
      return;
    }
    default:
      for (const auto& c : f.children)
        validate_formula(c, vocab, space, allow_params, observable_only);
      return;
  }
}

std::vector<std::uint8_t> satisfying_mask(const Formula& f,
                                          std::span<const std::vector<int>> states,
                                          const Vocabulary& vocab) {
  std::vector<std::uint8_t> mask(states.size(), 0);
  for (std::size_t s = 0; s < states.size(); ++s)
    mask[s] = eval_formula(f, states[s], vocab, {}) ? 1 : 0;
  return mask;
}

}  // namespace bsq
