#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsq/formula.hpp"
#include "bsq/gpomdp.hpp"
#include "bsq/interval.hpp"

namespace bsq {

// One belief-state query. Two kinds:
//  - ProbThreshold: Pr[phi] op rhs, phi parameter-free, rhs a declared
//    parameter or a literal;
//  - Observable: Pr[phi] == 1 with phi over fully observable variables,
//    parameters allowed inside phi as comparison operands.
struct Bsq {
  enum class Kind { ProbThreshold, Observable };

  Kind kind = Kind::ProbThreshold;
  Formula phi;
  CmpOp op = CmpOp::Gt;   // ProbThreshold only
  int param = -1;         // rhs parameter index; -1 means literal rhs
  double literal = 0.0;

  bool operator==(const Bsq&) const = default;
};

// Pure conjunction or disjunction of BSQs.
struct CompoundBsq {
  enum class Conn { And, Or };
  Conn conn = Conn::And;
  std::vector<Bsq> atoms;

  bool operator==(const CompoundBsq&) const = default;
};

struct Rule {
  std::optional<CompoundBsq> condition;  // nullopt = catchall
  std::string action_name;
  int action = -1;

  bool operator==(const Rule&) const = default;
};

// Ordered if/elif/else rule list over a declared parameter space. The chained
// negations that make rules mutually exclusive are synthesized during
// evaluation, never written by the author.
struct BsqPreference {
  std::string name;
  ParamSpacePtr params;
  std::vector<Rule> rules;  // parser guarantees a terminal catchall

  std::size_t n_params() const { return params->size(); }
  bool equals(const BsqPreference& other) const;
};

// Parses the DSL (grammar in docs/dsl.md) against a model's vocabulary.
// `for` loops and quantifiers are unrolled over the declared constants at
// parse time, in declaration order. Throws ParseError with line/column.
BsqPreference parse_preference(const std::string& text, const GPomdp& model);

std::string pretty_print(const BsqPreference& pref, const Vocabulary& vocab);

// Uncached reference implementations, used directly by tests and fuzzing.
bool eval_compound(const GPomdp& m, const ParamSpacePtr& space, const CompoundBsq& psi,
                   const Belief& b, std::span<const double> theta);
IntervalSet interval_of_compound(const GPomdp& m, const ParamSpacePtr& space,
                                 const CompoundBsq& psi, const Belief& b);

// A preference compiled against one model: per-atom satisfying-state masks
// and per-state parameter intervals are precomputed so evaluation during
// rollouts costs a few belief-support scans. Immutable and freely shared
// across threads.
class BoundPreference {
public:
  BoundPreference(const GPomdp& model, BsqPreference pref);

  const GPomdp& model() const { return *model_; }
  const BsqPreference& source() const { return pref_; }
  const ParamSpacePtr& space() const { return pref_.params; }
  std::size_t n_rules() const { return pref_.rules.size(); }

  bool eval_rule(std::size_t rule, const Belief& b, std::span<const double> theta) const;
  // I(Psi_i) at b, before mutual-exclusion with earlier rules
  IntervalSet rule_interval(std::size_t rule, const Belief& b) const;
  // Every rule's interval intersected with the complements of all earlier
  // rules'. Pairwise disjoint and tiles the domain exactly, by construction.
  std::vector<IntervalSet> effective_intervals(const Belief& b) const;

  struct Selection {
    int rule;
    int action;
    IntervalSet effective;
  };
  Selection select_rule(const Belief& b, std::span<const double> theta) const;

  // Intersection of the fired rules' effective intervals along a recorded
  // trace (steps must carry beliefs). May be empty for inconsistent traces.
  IntervalSet leaf_interval(std::span<const TrajectoryStep> steps) const;

  PolicyFn policy(std::vector<double> theta) const;
  // Same policy, but additionally intersects each step's effective interval
  // into *acc (caller initializes it, usually to the full domain).
  PolicyFn policy_tracking(std::vector<double> theta, IntervalSet* acc) const;

private:
  struct CompiledBsq {
    const Bsq* src;
    std::vector<std::uint8_t> mask;            // ProbThreshold
    std::vector<IntervalSet> state_intervals;  // Observable, indexed by state
  };

  bool eval_atom(const CompiledBsq& a, const Belief& b, std::span<const double> theta) const;
  IntervalSet atom_interval(const CompiledBsq& a, const Belief& b) const;

  const GPomdp* model_;
  BsqPreference pref_;
  std::vector<std::vector<CompiledBsq>> compiled_;  // per rule
};

}  // namespace bsq
