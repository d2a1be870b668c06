#pragma once

// Depth-first construction of a simulation tree. Shared by the tree-shaped
// synchronous game and the (fair) asynchronous games.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sessub/simgraph.hpp"

namespace sessub::detail {

template <typename State>
struct Expansion {
  enum class Kind { Success, Failure, Step, Limit };

  Kind kind = Kind::Step;
  FailureReason reason = FailureReason::PolarityMismatch;
  std::string detail;
  std::vector<std::pair<Action, State>> children;

  static Expansion success() { return {Kind::Success, {}, {}, {}}; }
  static Expansion failure(FailureReason r, std::string d = {}) {
    return {Kind::Failure, r, std::move(d), {}};
  }
  static Expansion limit() { return {Kind::Limit, {}, {}, {}}; }
  static Expansion step(std::vector<std::pair<Action, State>> children) {
    return {Kind::Step, {}, {}, std::move(children)};
  }
};

struct SearchLimits {
  std::size_t max_steps = std::numeric_limits<std::size_t>::max();
  bool stop_on_failure = true;
};

/// Path seen by the acceptance hook: states from the root to the new node
/// (inclusive) and actions[i] labelling the edge states[i] -> states[i+1].
template <typename State>
using AcceptFn = std::function<std::optional<std::size_t>(const std::vector<State>& states,
                                                          const std::vector<Action>& actions)>;

/// State must provide `lhs()`, `rhs()` and `operator==`.
template <typename State>
class TreeSearch {
 public:
  using ExpandFn = std::function<Expansion<State>(const State&)>;

  TreeSearch(ExpandFn expand, AcceptFn<State> accept, SearchLimits limits)
      : expand_(std::move(expand)), accept_(std::move(accept)), limits_(limits) {}

  CheckResult run(const State& root) {
    result_ = CheckResult{};
    const NodeId n = result_.graph.add_node(root.lhs(), root.rhs());
    path_states_ = {root};
    path_ids_ = {n};
    path_actions_.clear();
    visit(n);
    if (failed_) {
      result_.verdict = Verdict::False;
    } else if (result_.budget_exhausted) {
      result_.verdict = Verdict::Maybe;
    } else {
      result_.verdict = Verdict::True;
    }
    result_.graph.meta.verdict = result_.verdict;
    result_.graph.meta.steps = result_.expanded;
    return std::move(result_);
  }

 private:
  bool halted() const {
    return result_.budget_exhausted || (failed_ && limits_.stop_on_failure);
  }

  void visit(NodeId n) {
    if (halted()) return;
    if (result_.expanded >= limits_.max_steps) {
      result_.budget_exhausted = true;
      return;
    }
    ++result_.expanded;
    Expansion<State> exp = expand_(path_states_.back());
    switch (exp.kind) {
      case Expansion<State>::Kind::Success:
        result_.graph.mark_success(n);
        return;
      case Expansion<State>::Kind::Failure:
        result_.graph.mark_failure(n, exp.reason, std::move(exp.detail));
        if (!failed_) result_.failure_node = n;
        failed_ = true;
        return;
      case Expansion<State>::Kind::Limit:
        result_.budget_exhausted = true;
        return;
      case Expansion<State>::Kind::Step:
        break;
    }
    for (auto& [action, child] : exp.children) {
      if (halted()) return;
      const NodeId c = result_.graph.add_node(child.lhs(), child.rhs());
      result_.graph.add_edge(n, action, c);
      if (auto anc = find_repeat(child)) {
        result_.graph.add_back_link(c, *anc);
        continue;
      }
      path_states_.push_back(std::move(child));
      path_actions_.push_back(action);
      path_ids_.push_back(c);
      std::optional<std::size_t> accepted;
      if (accept_) accepted = accept_(path_states_, path_actions_);
      if (accepted) {
        result_.graph.add_back_link(c, path_ids_[*accepted], true);
        result_.accepted_loops.emplace_back(c, path_ids_[*accepted]);
      } else {
        visit(c);
      }
      path_states_.pop_back();
      path_actions_.pop_back();
      path_ids_.pop_back();
    }
  }

  std::optional<NodeId> find_repeat(const State& s) const {
    for (std::size_t i = path_states_.size(); i-- > 0;) {
      if (path_states_[i] == s) return path_ids_[i];
    }
    return std::nullopt;
  }

  ExpandFn expand_;
  AcceptFn<State> accept_;
  SearchLimits limits_;
  CheckResult result_;
  bool failed_ = false;
  std::vector<State> path_states_;
  std::vector<Action> path_actions_;
  std::vector<NodeId> path_ids_;
};

}  // namespace sessub::detail
