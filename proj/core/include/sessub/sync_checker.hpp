#pragma once

#include "sessub/lts.hpp"
#include "sessub/simgraph.hpp"

namespace sessub {

/// How the synchronous game is laid out. Both modes give the same verdict.
enum class SyncMode {
  /// Simulation tree; a pair repeated on its own root path becomes a copy
  /// with a dashed back-link to the original (`--gayhole`).
  Tree,
  /// Product graph; every pair is expanded once (`--kozen`).
  Memo,
};

struct SyncPair {
  StateId p = 0;  // candidate subtype
  StateId q = 0;  // candidate supertype

  StateId lhs() const { return p; }
  Rhs rhs() const { return q; }
  friend bool operator==(const SyncPair&, const SyncPair&) = default;
};

/// Synchronous subtyping of `sub` against `sup` (rules In / Out). The verdict
/// is True or False; every failure node records which condition broke.
CheckResult check_sync(const Lts& sub, const Lts& sup, SyncMode mode = SyncMode::Tree);

}  // namespace sessub
