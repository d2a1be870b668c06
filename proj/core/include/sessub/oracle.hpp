#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sessub/lts.hpp"

namespace sessub {

enum class OracleMode { Rendezvous, Fifo, Fair };

struct OracleOptions {
  OracleMode mode = OracleMode::Fifo;
  /// Capacity of each queue (ignored in rendezvous mode).
  std::size_t bound = 4;
  /// Maximum number of execution steps from the initial configuration.
  std::size_t depth = 60;
};

enum class ViolationKind { Unreceivable, Deadlock, OrphanAtTermination };

std::string to_string(ViolationKind k);

struct TraceStep {
  int machine = 1;  // 1 or 2
  Action action;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Violation {
  ViolationKind kind = ViolationKind::Deadlock;
  std::vector<TraceStep> trace;
};

/// e.g. `1:!nd 2:?nd 2:!ok`.
std::string to_string(const std::vector<TraceStep>& trace);

struct OracleResult {
  std::optional<Violation> violation;
  /// Some configuration at the depth limit still had moves.
  bool truncated = false;
  /// Some output was blocked by a full queue.
  bool queue_limited = false;
  /// Some reached configuration had both machines terminal with empty queues.
  bool clean_termination_reached = false;
  /// Fair mode: configurations that cannot reach clean termination within the
  /// explored region only because of the depth or queue bound.
  std::size_t inconclusive = 0;
  std::size_t configurations = 0;

  bool ok() const { return !violation.has_value(); }
};

/// Runs m1 and m2 as communicating machines and searches breadth-first for a
/// compliance violation. Bounded: a clean result certifies nothing beyond the
/// explored region.
OracleResult explore(const Lts& m1, const Lts& m2, const OracleOptions& opts = {});

}  // namespace sessub
