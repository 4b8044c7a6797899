#include "bsq/gpomdp.hpp"

#include <algorithm>
#include <cmath>

namespace bsq {

namespace {
constexpr double kProbTol = 1e-9;
}

Belief Belief::from_dense(std::span<const double> p) {
  std::vector<Entry> e;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0) throw ModelError("belief entry is negative");
    if (p[i] > 0) e.emplace_back(static_cast<std::uint32_t>(i), p[i]);
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > kProbTol) throw ModelError("belief does not sum to 1");
  Belief b;
  b.n_ = p.size();
  b.entries_ = std::move(e);
  return b;
}

Belief Belief::from_entries(std::size_t n_states, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first >= n_states) throw ModelError("belief entry out of range");
    if (i && entries[i].first == entries[i - 1].first) throw ModelError("duplicate belief entry");
    if (entries[i].second <= 0) throw ModelError("belief entry not positive");
    sum += entries[i].second;
  }
  if (std::abs(sum - 1.0) > kProbTol) throw ModelError("belief does not sum to 1");
  Belief b;
  b.n_ = n_states;
  b.entries_ = std::move(entries);
  return b;
}

Belief Belief::point(std::size_t n_states, std::uint32_t s) {
  return from_entries(n_states, {{s, 1.0}});
}

double Belief::at(std::uint32_t s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const Entry& e, std::uint32_t v) { return e.first < v; });
  return (it != entries_.end() && it->first == s) ? it->second : 0.0;
}

std::vector<double> Belief::dense() const {
  std::vector<double> p(n_, 0.0);
  for (const auto& [s, v] : entries_) p[s] = v;
  return p;
}

double Belief::mass_where(const std::vector<std::uint8_t>& mask) const {
  double m = 0.0;
  for (const auto& [s, v] : entries_)
    if (mask[s]) m += v;
  return m;
}

double Belief::sum() const {
  double m = 0.0;
  for (const auto& [s, v] : entries_) m += v;
  return m;
}

int GPomdp::action_index(std::string_view a) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == a) return static_cast<int>(i);
  return -1;
}

int GPomdp::find_state(std::span<const int> vals) const {
  for (std::size_t s = 0; s < states.size(); ++s)
    if (std::equal(states[s].begin(), states[s].end(), vals.begin(), vals.end()))
      return static_cast<int>(s);
  return -1;
}

void GPomdp::validate() const {
  const std::size_t S = n_states(), A = n_actions(), O = n_obs();
  if (S == 0 || A == 0 || O == 0) throw ModelError("model has an empty component");
  if (horizon < 0) throw ModelError("negative horizon");
  if (goal.size() != S) throw ModelError("goal mask size mismatch");
  if (trans.size() != A) throw ModelError("transition table size mismatch");
  if (obs_p.size() != A * S * O) throw ModelError("observation table size mismatch");

  for (std::size_t s = 0; s < S; ++s) {
    if (states[s].size() != vocab.state_vars.size()) throw ModelError("state rank mismatch");
    for (std::size_t v = 0; v < states[s].size(); ++v)
      if (states[s][v] < vocab.state_vars[v].lo || states[s][v] > vocab.state_vars[v].hi)
        throw ModelError("state value outside variable domain");
  }
  for (const auto& o : observations)
    if (o.size() != vocab.obs_vars.size()) throw ModelError("observation rank mismatch");

  for (std::size_t a = 0; a < A; ++a) {
    if (trans[a].size() != S) throw ModelError("transition row count mismatch");
    for (std::size_t s = 0; s < S; ++s) {
      double sum = 0.0;
      for (const auto& [s2, p] : trans[a][s]) {
        if (s2 >= S || p < 0) throw ModelError("bad transition entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol) throw ModelError("transition row does not sum to 1");
      if (goal[s]) {
        if (trans[a][s].size() != 1 || trans[a][s][0].first != s ||
            std::abs(trans[a][s][0].second - 1.0) > kProbTol)
          throw ModelError("goal state is not a sink");
      }
    }
    for (std::size_t s2 = 0; s2 < S; ++s2) {
      double sum = 0.0;
      for (std::size_t o = 0; o < O; ++o) {
        double p = obs_prob(a, s2, o);
        if (p < 0) throw ModelError("negative observation probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbTol) throw ModelError("observation row does not sum to 1");
    }
  }
  if (initial_belief.size() != S) throw ModelError("initial belief size mismatch");
  if (std::abs(initial_belief.sum() - 1.0) > kProbTol)
    throw ModelError("initial belief does not sum to 1");
}

double belief_query(const GPomdp& m, const Belief& b, const Formula& phi) {
  validate_formula(phi, m.vocab, ParamSpace{}, false, false);
  double p = 0.0;
  for (const auto& [s, v] : b.entries())
    if (eval_formula(phi, m.states[s], m.vocab, {})) p += v;
  return p;
}

namespace {

// Scratch for the scatter in belief_update / observation_likelihood. One per
// thread; rollouts on separate threads never share it.
struct Scratch {
  std::vector<double> acc;
  std::vector<std::uint32_t> touched;
};
thread_local Scratch tls;

void scatter_transition(const GPomdp& m, const Belief& b, int action, Scratch& sc) {
  sc.acc.resize(m.n_states(), 0.0);
  sc.touched.clear();
  const auto& rows = m.trans[static_cast<std::size_t>(action)];
  for (const auto& [s, bs] : b.entries()) {
    for (const auto& [s2, p] : rows[s]) {
      if (sc.acc[s2] == 0.0) sc.touched.push_back(s2);
      sc.acc[s2] += p * bs;
    }
  }
}

}  // namespace

Belief belief_update(const GPomdp& m, const Belief& b, int action, int obs) {
  scatter_transition(m, b, action, tls);
  double total = 0.0;
  for (auto s2 : tls.touched) {
    double w = tls.acc[s2] * m.obs_prob(static_cast<std::size_t>(action), s2,
                                        static_cast<std::size_t>(obs));
    tls.acc[s2] = w;
    total += w;
  }
  if (total <= 0.0) {
    for (auto s2 : tls.touched) tls.acc[s2] = 0.0;
    throw ImpossibleObservation("observation '" + std::to_string(obs) + "' has zero likelihood");
  }
  std::vector<Belief::Entry> out;
  out.reserve(tls.touched.size());
  std::sort(tls.touched.begin(), tls.touched.end());
  for (auto s2 : tls.touched) {
    if (tls.acc[s2] > 0.0) out.emplace_back(s2, tls.acc[s2] / total);
    tls.acc[s2] = 0.0;
  }
  return Belief::from_entries(m.n_states(), std::move(out));
}

Belief belief_update_seq(const GPomdp& m, const Belief& b0,
                         std::span<const std::pair<int, int>> trace) {
  Belief b = b0;
  for (const auto& [a, o] : trace) b = belief_update(m, b, a, o);
  return b;
}

std::vector<double> observation_likelihood(const GPomdp& m, const Belief& b, int action) {
  scatter_transition(m, b, action, tls);
  std::vector<double> out(m.n_obs(), 0.0);
  for (auto s2 : tls.touched) {
    for (std::size_t o = 0; o < m.n_obs(); ++o)
      out[o] += tls.acc[s2] * m.obs_prob(static_cast<std::size_t>(action), s2, o);
    tls.acc[s2] = 0.0;
  }
  return out;
}

std::pair<std::uint32_t, int> step_simulate(const GPomdp& m, std::uint32_t s, int action, Rng& rng) {
  const auto& row = m.trans[static_cast<std::size_t>(action)][s];
  double r = rng.uniform01();
  std::uint32_t s2 = row.back().first;
  double acc = 0.0;
  for (const auto& [cand, p] : row) {
    acc += p;
    if (r < acc) {
      s2 = cand;
      break;
    }
  }
  r = rng.uniform01();
  acc = 0.0;
  int obs = static_cast<int>(m.n_obs()) - 1;
  for (std::size_t o = 0; o < m.n_obs(); ++o) {
    acc += m.obs_prob(static_cast<std::size_t>(action), s2, o);
    if (r < acc) {
      obs = static_cast<int>(o);
      break;
    }
  }
  return {s2, obs};
}

TrajectoryRecord rollout(const GPomdp& m, const PolicyFn& policy, int H, Rng& rng,
                         const RolloutOptions& opts) {
  if (H < 1) throw Error("rollout horizon must be at least 1");
  TrajectoryRecord rec;
  rec.horizon = H;

  double r = rng.uniform01();
  double acc = 0.0;
  std::uint32_t s = m.initial_belief.entries().back().first;
  for (const auto& [cand, p] : m.initial_belief.entries()) {
    acc += p;
    if (r < acc) {
      s = cand;
      break;
    }
  }

  Belief b = m.initial_belief;
  for (int t = 1; t <= H; ++t) {
    auto [rule, action] = policy(b);
    if (action < 0 || action >= static_cast<int>(m.n_actions()))
      throw Error("policy returned invalid action index");
    auto [s2, o] = step_simulate(m, s, action, rng);

    TrajectoryStep step;
    step.rule = rule;
    step.action = action;
    step.observation = o;
    if (opts.record_beliefs) step.belief_before = b;
    rec.steps.push_back(std::move(step));
    rec.leaf_key.emplace_back(rule, o);

    if (m.goal[s2]) {
      rec.goal_time = t;
      break;
    }
    b = belief_update(m, b, action, o);
    s = s2;
  }
  return rec;
}

}  // namespace bsq
