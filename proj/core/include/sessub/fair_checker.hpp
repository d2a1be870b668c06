#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "sessub/input_ctx.hpp"
#include "sessub/lts.hpp"
#include "sessub/simgraph.hpp"

namespace sessub {

/// Subtype state plus the supertype's pending inputs as a recursive context.
struct FairState {
  StateId p = 0;
  RecInputContext acc;

  StateId lhs() const { return p; }
  Rhs rhs() const { return acc; }
  friend bool operator==(const FairState&, const FairState&) = default;
};

struct FairOptions {
  std::size_t max_steps = 2000;
  /// Contexts with more holes than this yield Maybe.
  std::size_t max_tree_leaves = 4096;
};

enum class Side { Sub, Sup };

class Uncontrollable : public std::runtime_error {
 public:
  explicit Uncontrollable(Side side);
  Side side() const { return side_; }

 private:
  Side side_;
};

/// Some end state exists and is reachable from every reachable state.
bool controllable(const Lts& l);

/// Fair asynchronous subtyping. Throws Uncontrollable if either side fails
/// `controllable`.
CheckResult check_fair(const Lts& sub, const Lts& sup, const FairOptions& opts = {});

}  // namespace sessub
