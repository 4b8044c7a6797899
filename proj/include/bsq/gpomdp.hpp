#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bsq/formula.hpp"
#include "bsq/rng.hpp"
#include "bsq/vocab.hpp"

namespace bsq {

// Exact distribution over states, stored sparsely as sorted (state, prob)
// pairs. Immutable once built; entries are strictly positive and sum to 1.
class Belief {
public:
  using Entry = std::pair<std::uint32_t, double>;

  Belief() = default;
  static Belief from_dense(std::span<const double> p);
  static Belief from_entries(std::size_t n_states, std::vector<Entry> entries);
  static Belief point(std::size_t n_states, std::uint32_t s);

  std::size_t size() const { return n_; }
  std::span<const Entry> entries() const { return entries_; }
  double at(std::uint32_t s) const;
  std::vector<double> dense() const;
  double mass_where(const std::vector<std::uint8_t>& mask) const;
  double sum() const;

  bool operator==(const Belief&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<Entry> entries_;
};

struct GPomdp {
  std::string name;
  Vocabulary vocab;
  std::vector<std::vector<int>> states;        // valuations of vocab.state_vars
  std::vector<std::string> actions;
  std::vector<std::vector<int>> observations;  // valuations of vocab.obs_vars
  // trans[a][s] -> sparse successor row; obs_p is dense [a][s'][o]
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, double>>>> trans;
  std::vector<double> obs_p;
  std::vector<std::uint8_t> goal;
  int horizon = 1;
  Belief initial_belief;

  std::size_t n_states() const { return states.size(); }
  std::size_t n_actions() const { return actions.size(); }
  std::size_t n_obs() const { return observations.size(); }
  double obs_prob(std::size_t a, std::size_t s2, std::size_t o) const {
    return obs_p[(a * n_states() + s2) * n_obs() + o];
  }
  int action_index(std::string_view name) const;
  int find_state(std::span<const int> vals) const;  // -1 when absent

  // Row-stochastic tables, sink goals, a normalized initial belief. Throws
  // ModelError on the first violation.
  void validate() const;
};

// Pr of phi under b: the belief mass on states satisfying phi.
double belief_query(const GPomdp& m, const Belief& b, const Formula& phi);

// One exact Bayes step. Throws ImpossibleObservation when o has zero
// likelihood under (b, a) rather than returning NaNs.
Belief belief_update(const GPomdp& m, const Belief& b, int action, int obs);

Belief belief_update_seq(const GPomdp& m, const Belief& b0,
                         std::span<const std::pair<int, int>> trace);

std::vector<double> observation_likelihood(const GPomdp& m, const Belief& b, int action);

std::pair<std::uint32_t, int> step_simulate(const GPomdp& m, std::uint32_t s, int action, Rng& rng);

struct TrajectoryStep {
  int rule = -1;
  Belief belief_before;  // populated only when the rollout records beliefs
  int action = -1;
  int observation = -1;
};

struct TrajectoryRecord {
  std::vector<TrajectoryStep> steps;
  std::optional<int> goal_time;                  // first t in [1, H] with s_t in G
  std::vector<std::pair<int, int>> leaf_key;     // (rule, obs) path, truncated at goal entry
  int horizon = 0;

  int cost() const { return goal_time.value_or(horizon); }
};

// The policy sees the current belief and returns (rule index, action index).
using PolicyFn = std::function<std::pair<int, int>(const Belief&)>;

struct RolloutOptions {
  bool record_beliefs = false;
};

// Samples a hidden start state from b0, then alternates policy / simulate /
// filter until goal entry or H steps. Cost semantics: goal at step t costs t,
// no goal costs H.
TrajectoryRecord rollout(const GPomdp& m, const PolicyFn& policy, int H, Rng& rng,
                         const RolloutOptions& opts = {});

}  // namespace bsq
