#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "sessub/input_ctx.hpp"
#include "sessub/lts.hpp"
#include "sessub/simgraph.hpp"

namespace sessub {

/// A state of the asynchronous game: subtype state and the supertype's
/// accumulated input tree.
struct AsyncState {
  StateId p = 0;
  InputTree acc;

  StateId lhs() const { return p; }
  Rhs rhs() const { return acc; }
  friend bool operator==(const AsyncState&, const AsyncState&) = default;
};

struct AsyncOptions {
  /// Expanded-node budget; exhausting it yields Maybe.
  std::size_t max_steps = 2000;
  /// On Maybe, retry once on the dual problem.
  bool fallback = true;
  /// Accumulated trees with more leaves than this also yield Maybe.
  std::size_t max_tree_leaves = 4096;
  /// Same for trees nested deeper than this.
  std::size_t max_tree_depth = 32;
};

/// Sound but incomplete asynchronous subtyping (rules In, Out, InCtx, OutA).
/// False only from a failure node, Maybe only when a limit is hit.
CheckResult check_async(const Lts& sub, const Lts& sup, const AsyncOptions& opts = {});

/// The map g with T_d = subst(T_a, g), leaf states of every g(q) within the
/// leaf states of T_a, and g not the identity; nullopt if none exists.
std::optional<std::map<StateId, InputTree>> growth_map(const InputTree& t_a, const InputTree& t_d);

/// Periodic-growth check. `path` holds the states from the root to node_d
/// (the last element) and `actions[i]` labels path[i] -> path[i+1]; `a` is the
/// index of node_a. Accepts only when node_d grows node_a by some g and one
/// full period replayed from node_d reproduces node_a's segment under g, with
/// every side branch closed inside the window and the period's end again
/// related to node_d by g.
bool loop_accept(const Lts& sub, const Lts& sup, const std::vector<AsyncState>& path,
                 const std::vector<Action>& actions, std::size_t a, const AsyncOptions& opts = {});

}  // namespace sessub
