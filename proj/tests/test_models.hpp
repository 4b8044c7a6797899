#pragma once

// Small hand-built models shared by the unit tests.

#include <cmath>

#include "bsq/gpomdp.hpp"

namespace testutil {

// Two broken-or-not components observed through independent noisy sensors
// (accuracies 0.6 / 0.75), a single wait action, no goals. The classic
// stationary filtering setup: posteriors have a closed form to check against.
inline bsq::GPomdp broken_pair() {
  using namespace bsq;
  const double pr = 0.6, ps = 0.75;
  GPomdp m;
  m.name = "broken_pair";
  m.vocab.state_vars = {{"broken(robot)", 0, 1, false}, {"broken(ship)", 0, 1, false}};
  m.vocab.obs_vars = {{"obs_err(robot)", 0, 1, false}, {"obs_err(ship)", 0, 1, false}};
  for (int r = 1; r >= 0; --r)
    for (int s = 1; s >= 0; --s) m.states.push_back({r, s});  // TT, TF, FT, FF
  m.actions = {"wait()"};
  for (int r = 1; r >= 0; --r)
    for (int s = 1; s >= 0; --s) m.observations.push_back({r, s});
  m.goal.assign(4, 0);
  m.trans.resize(1);
  m.trans[0].resize(4);
  for (std::uint32_t s = 0; s < 4; ++s) m.trans[0][s] = {{s, 1.0}};
  m.obs_p.assign(1 * 4 * 4, 0.0);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t o = 0; o < 4; ++o) {
      double p = (m.states[s][0] == m.observations[o][0] ? pr : 1 - pr) *
                 (m.states[s][1] == m.observations[o][1] ? ps : 1 - ps);
      m.obs_p[s * 4 + o] = p;
    }
  m.horizon = 10;
  m.initial_belief = Belief::from_dense(std::vector<double>{0.25, 0.25, 0.25, 0.25});
  m.validate();
  return m;
}

// Deterministic corridor: positions 0..3, "go" advances, "stay" does not,
// position 3 is an absorbing goal. One uninformative observation.
inline bsq::GPomdp corridor(int len = 4) {
  using namespace bsq;
  GPomdp m;
  m.name = "corridor";
  m.vocab.state_vars = {{"pos()", 0, len - 1, true}};
  m.vocab.obs_vars = {{"tick()", 0, 0, false}};
  for (int i = 0; i < len; ++i) m.states.push_back({i});
  m.actions = {"go()", "stay()"};
  m.observations = {{0}};
  m.goal.assign(len, 0);
  m.goal[len - 1] = 1;
  m.trans.resize(2);
  for (auto& rows : m.trans) rows.resize(len);
  for (std::uint32_t s = 0; s + 1 < static_cast<std::uint32_t>(len); ++s) {
    m.trans[0][s] = {{s + 1, 1.0}};
    m.trans[1][s] = {{s, 1.0}};
  }
  auto last = static_cast<std::uint32_t>(len - 1);
  m.trans[0][last] = {{last, 1.0}};
  m.trans[1][last] = {{last, 1.0}};
  m.obs_p.assign(2 * len, 1.0);
  m.horizon = 8;
  m.initial_belief = Belief::point(len, 0);
  m.validate();
  return m;
}

}  // namespace testutil
