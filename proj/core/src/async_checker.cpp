#include "sessub/async_checker.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "tree_search.hpp"

namespace sessub {

namespace {

using AsyncExpansion = detail::Expansion<AsyncState>;

bool subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct TreeCaps {
  std::size_t leaves = 4096;
  std::size_t depth = 32;
};

TreeCaps caps_of(const AsyncOptions& o) { return {o.max_tree_leaves, o.max_tree_depth}; }

std::size_t depth_of(const InputContext& c) {
  std::size_t d = 0;
  for (const auto& e : c.edges()) d = std::max(d, 1 + depth_of(e.sub));
  return d;
}

AsyncExpansion expand(const Lts& sub, const Lts& sup, const AsyncState& s, const TreeCaps& caps) {
  const InputTree& acc = s.acc;

  if (is_end(sub, s.p)) {
    if (!acc.is_bare()) return AsyncExpansion::failure(FailureReason::ResidualInput);
    if (is_end(sup, acc.state())) return AsyncExpansion::success();
    return AsyncExpansion::failure(FailureReason::OneSidedTermination);
  }

  std::vector<std::pair<Action, AsyncState>> children;

  if (is_input_state(sub, s.p)) {
    const LabelSet mine = inputs(sub, s.p);
    if (acc.is_bare()) {
      // Rule In.
      const StateId q = acc.state();
      if (is_end(sup, q)) return AsyncExpansion::failure(FailureReason::OneSidedTermination);
      if (!is_input_state(sup, q)) return AsyncExpansion::failure(FailureReason::PolarityMismatch);
      if (!subset(inputs(sup, q), mine)) {
        return AsyncExpansion::failure(FailureReason::InputContravariance);
      }
      for (const auto& t : sup.transitions(q)) {
        children.emplace_back(t.action, AsyncState{*sub.step(s.p, t.action), InputTree::bare(t.target)});
      }
      return AsyncExpansion::step(std::move(children));
    }
    // Rule InCtx.
    const auto labels = acc.root_labels();
    for (const auto& l : labels) {
      if (!mine.count(l)) return AsyncExpansion::failure(FailureReason::InputContravariance, "?" + l);
    }
    for (const auto& l : labels) {
      const Action a{Polarity::Receive, l};
      children.emplace_back(a, AsyncState{*sub.step(s.p, a), consume(acc, l)});
    }
    return AsyncExpansion::step(std::move(children));
  }

  const LabelSet mine = outputs(sub, s.p);
  if (acc.is_bare() && is_output_state(sup, acc.state()) && subset(mine, outputs(sup, acc.state()))) {
    // Rule Out.
    for (const auto& t : sub.transitions(s.p)) {
      children.emplace_back(t.action,
                            AsyncState{t.target, InputTree::bare(*sup.step(acc.state(), t.action))});
    }
    return AsyncExpansion::step(std::move(children));
  }

  // Rule OutA: anticipate the send past the supertype's pending inputs.
  if (has_cycle(sub, Polarity::Send, s.p)) return AsyncExpansion::failure(FailureReason::OutputLoop);
  std::map<HoleIndex, InputTree> expansion;
  for (const auto& [j, q] : leaves(acc)) {
    auto tree = intree(sup, q);
    if (!tree) {
      return AsyncExpansion::failure(FailureReason::InputLoop, "state " + std::to_string(q));
    }
    for (StateId leaf : tree->leaf_states()) {
      if (is_end(sup, leaf)) return AsyncExpansion::failure(FailureReason::OneSidedTermination);
      if (!subset(mine, outputs(sup, leaf))) {
        return AsyncExpansion::failure(FailureReason::OutputCovariance, "state " + std::to_string(leaf));
      }
    }
    expansion.emplace(j, std::move(*tree));
  }
  const InputTree grown = grow(acc, expansion);
  if (grown.leaf_count() > caps.leaves || depth_of(grown.shape()) > caps.depth) {
    return AsyncExpansion::limit();
  }
  for (const auto& t : sub.transitions(s.p)) {
    children.emplace_back(
        t.action, AsyncState{t.target, map_states(grown, [&](StateId q) { return *sup.step(q, t.action); })});
  }
  return AsyncExpansion::step(std::move(children));
}

// Some g with t_d = subst(t_a, g): t_a's shape is a prefix of t_d's.
std::optional<std::map<StateId, InputTree>> prefix_map(const InputTree& t_a, const InputTree& t_d) {
  std::map<StateId, InputTree> g;
  std::function<bool(const InputContext&, const InputContext&)> match = [&](const InputContext& a,
                                                                            const InputContext& d) {
    if (a.is_hole()) {
      InputTree sub = InputTree::from_context(d, t_d.assignment());
      auto [it, inserted] = g.emplace(t_a.assignment().at(a.index()), std::move(sub));
      return inserted || it->second == InputTree::from_context(d, t_d.assignment());
    }
    if (d.is_hole() || d.edges().size() != a.edges().size()) return false;
    for (std::size_t i = 0; i < a.edges().size(); ++i) {
      if (a.edges()[i].label != d.edges()[i].label) return false;
      if (!match(a.edges()[i].sub, d.edges()[i].sub)) return false;
    }
    return true;
  };
  if (!match(t_a.shape(), t_d.shape())) return std::nullopt;
  return g;
}

// One-period replay for loop_accept.
class Replay {
 public:
  Replay(const Lts& sub, const Lts& sup, std::map<StateId, InputTree> g, std::vector<Action> sigma,
         const std::vector<AsyncState>& path, TreeCaps caps, std::size_t* shared)
      : sub_(sub),
        sup_(sup),
        g_(std::move(g)),
        sigma_(std::move(sigma)),
        path_(path),
        caps_(caps),
        shared_(shared) {}

  // x walks node_a's segment, y the replay from node_d.
  bool run(const AsyncState& x, const AsyncState& y, std::size_t depth, bool on_sigma) {
    if (depth > 0) {
      if (!mirrors(x, y)) return false;
      if (on_sigma && depth == sigma_.size()) return true;
      if (std::find(path_.begin(), path_.end(), y) != path_.end()) return true;
      if (std::find(stack_.begin(), stack_.end(), y) != stack_.end()) return true;
    }
    if (++work_ > kMaxWork || (shared_ && *shared_ == 0)) return false;
    if (shared_) --*shared_;
    const AsyncExpansion ey = expand(sub_, sup_, y, caps_);
    if (ey.kind == AsyncExpansion::Kind::Success) return true;
    if (ey.kind != AsyncExpansion::Kind::Step) return false;
    if (depth == sigma_.size()) return false;  // side branch still open at the window's edge
    const AsyncExpansion ex = expand(sub_, sup_, x, caps_);
    if (ex.kind != AsyncExpansion::Kind::Step || ex.children.size() != ey.children.size()) return false;

    stack_.push_back(y);
    bool ok = true;
    for (std::size_t i = 0; ok && i < ey.children.size(); ++i) {
      const auto& [act, y_next] = ey.children[i];
      const auto& [act_x, x_next] = ex.children[i];
      if (!(act == act_x)) {
        ok = false;
        break;
      }
      ok = run(x_next, y_next, depth + 1, on_sigma && act == sigma_[depth]);
    }
    stack_.pop_back();
    return ok;
  }

 private:
  // y is x grown by g.
  bool mirrors(const AsyncState& x, const AsyncState& y) const {
    if (x.p != y.p) return false;
    for (StateId q : x.acc.leaf_states()) {
      if (!g_.count(q)) return false;
    }
    return subst(x.acc, g_) == y.acc;
  }

  // Expansions one replay may spend before giving up (a rejection, which
  // only costs completeness).
  static constexpr std::size_t kMaxWork = 64;

  const Lts& sub_;
  const Lts& sup_;
  std::map<StateId, InputTree> g_;
  std::vector<Action> sigma_;
  const std::vector<AsyncState>& path_;
  std::vector<AsyncState> stack_;
  TreeCaps caps_;
  std::size_t* shared_;  // budget shared by all replays of a search, or null
  std::size_t work_ = 0;
};

}  // namespace

std::optional<std::map<StateId, InputTree>> growth_map(const InputTree& t_a, const InputTree& t_d) {
  auto g = prefix_map(t_a, t_d);
  if (!g) return std::nullopt;
  const std::set<StateId> domain = t_a.leaf_states();
  for (const auto& [q, t] : *g) {
    for (StateId leaf : t.leaf_states()) {
      if (!domain.count(leaf)) return std::nullopt;
    }
  }
  const bool identity = std::all_of(g->begin(), g->end(), [](const auto& kv) {
    return kv.second.is_bare() && kv.second.state() == kv.first;
  });
  if (identity) return std::nullopt;
  return g;
}

namespace {

bool replay_period(const Lts& sub, const Lts& sup, const std::vector<AsyncState>& path,
                   const std::vector<Action>& actions, std::size_t a, std::map<StateId, InputTree> g,
                   const AsyncOptions& opts, std::size_t* shared = nullptr) {
  std::vector<Action> sigma(actions.begin() + static_cast<std::ptrdiff_t>(a), actions.end());
  Replay replay(sub, sup, std::move(g), std::move(sigma), path, caps_of(opts), shared);
  return replay.run(path[a], path.back(), 0, true);
}

// Replays tried per new node; older candidates are skipped.
constexpr std::size_t kMaxReplays = 3;
// Replay expansions per unit of the step budget, over the whole search.
constexpr std::size_t kReplayWorkPerStep = 16;

}  // namespace

bool loop_accept(const Lts& sub, const Lts& sup, const std::vector<AsyncState>& path,
                 const std::vector<Action>& actions, std::size_t a, const AsyncOptions& opts) {
  if (path.size() < 2 || a + 1 >= path.size() || actions.size() + 1 != path.size()) return false;
  if (path[a].p != path.back().p) return false;
  auto g = growth_map(path[a].acc, path.back().acc);
  return g && replay_period(sub, sup, path, actions, a, std::move(*g), opts);
}

CheckResult check_async(const Lts& sub, const Lts& sup, const AsyncOptions& opts) {
  const auto start = std::chrono::steady_clock::now();

  std::size_t replay_budget = kReplayWorkPerStep * opts.max_steps;
  auto accept = [&](const std::vector<AsyncState>& states,
                    const std::vector<Action>& actions) -> std::optional<std::size_t> {
    const AsyncState& d = states.back();
    std::size_t tried = 0;
    for (std::size_t i = states.size() - 1; i-- > 0 && tried < kMaxReplays;) {
      if (states[i].p != d.p) continue;
      auto g = growth_map(states[i].acc, d.acc);
      if (!g) continue;
      ++tried;
      if (replay_period(sub, sup, states, actions, i, std::move(*g), opts, &replay_budget)) {
        return i;
      }
    }
    return std::nullopt;
  };

  detail::TreeSearch<AsyncState> search(
      [&](const AsyncState& s) { return expand(sub, sup, s, caps_of(opts)); }, accept,
      detail::SearchLimits{.max_steps = opts.max_steps, .stop_on_failure = true});
  CheckResult result = search.run({sub.initial(), InputTree::bare(sup.initial())});

  if (result.verdict == Verdict::Maybe && opts.fallback) {
    AsyncOptions inner = opts;
    inner.fallback = false;
    CheckResult dual_result = check_async(dual_lts(sup), dual_lts(sub), inner);
    dual_result.fallback_used = true;
    dual_result.graph.meta.fallback_used = true;
    result = std::move(dual_result);
  }

  result.graph.meta.algorithm = "async";
  result.graph.meta.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sessub
