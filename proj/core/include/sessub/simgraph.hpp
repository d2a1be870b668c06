#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sessub/input_ctx.hpp"
#include "sessub/lts.hpp"

namespace sessub {

enum class Verdict { True, False, Maybe };

/// Lowercase `true` / `false` / `maybe`.
const char* to_string(Verdict v);

/// Why a simulation state has no applicable rule.
enum class FailureReason {
  PolarityMismatch,     // one side sends while the other receives
  OutputCovariance,     // subtype may send a label the supertype cannot
  InputContravariance,  // supertype may receive a label the subtype cannot
  OneSidedTermination,  // exactly one side has terminated
  OutputLoop,           // anticipation from a state that reaches a send-only cycle
  InputLoop,            // anticipation past a receive-only cycle
  ResidualInput,        // subtype terminated with accumulated input left over
  NoTermination,        // fair game: no success node reachable from here
};

const char* to_string(FailureReason r);

using NodeId = std::size_t;

enum class NodeKind { Normal, Failure, Success };

/// Right-hand side of a simulation state: a bare state (synchronous game), an
/// input tree (asynchronous) or a recursive input context (fair).
using Rhs = std::variant<StateId, InputTree, RecInputContext>;

std::string to_string(const Rhs& rhs);

struct SimNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::Normal;
  StateId lhs = 0;
  Rhs rhs;
  std::optional<FailureReason> reason;
  std::string detail;
};

enum class EdgeStyle { Solid, Dashed };

struct SimEdge {
  NodeId from = 0;
  std::optional<Action> action;  // empty on back-links
  NodeId to = 0;
  EdgeStyle style = EdgeStyle::Solid;
  bool growth = false;  // back-link accepted by the periodic-growth check
};

struct SimMeta {
  std::string algorithm;
  Verdict verdict = Verdict::Maybe;
  bool fallback_used = false;
  std::size_t steps = 0;
  double elapsed_ms = 0.0;
};

/// Simulation tree (or product graph, for the memoising synchronous mode).
/// Node 0 is the root.
class SimGraph {
 public:
  NodeId add_node(StateId lhs, Rhs rhs);
  void add_edge(NodeId from, Action action, NodeId to);
  void add_back_link(NodeId from, NodeId to, bool growth = false);
  void mark_failure(NodeId n, FailureReason reason, std::string detail = {});
  void mark_success(NodeId n);

  NodeId root() const { return 0; }
  bool empty() const { return nodes_.empty(); }
  const std::vector<SimNode>& nodes() const { return nodes_; }
  const SimNode& node(NodeId n) const { return nodes_.at(n); }
  const std::vector<SimEdge>& edges() const { return edges_; }

  std::vector<NodeId> failure_nodes() const;
  std::size_t count_edges(EdgeStyle style) const;
  /// Source node of the solid edge into n, if any.
  std::optional<NodeId> parent(NodeId n) const;
  /// True iff a is reachable from d by following solid edges backwards.
  bool is_ancestor(NodeId a, NodeId d) const;

  SimMeta meta;

 private:
  std::vector<SimNode> nodes_;
  std::vector<SimEdge> edges_;
};

/// Outcome of a subtyping check together with its simulation graph.
struct CheckResult {
  Verdict verdict = Verdict::Maybe;
  SimGraph graph;
  /// First failure node met, when the verdict is False.
  std::optional<NodeId> failure_node;
  /// Back-links accepted by the periodic-growth check, as (source, ancestor).
  std::vector<std::pair<NodeId, NodeId>> accepted_loops;
  /// The step budget (or the accumulated-input size limit) ran out.
  bool budget_exhausted = false;
  std::size_t expanded = 0;
  /// The verdict and graph come from the dual problem.
  bool fallback_used = false;
};

/// Graphviz text of a simulation. Nodes are rectangles, the root has a thick
/// border, failures are filled red and the right-hand side is drawn in blue as
/// nested boxes. Back-links are dashed. Output is deterministic.
std::string sim_to_dot(const SimGraph& g);

/// Graphviz text of an LTS: one node per state, initial state thicker.
std::string lts_to_dot(const Lts& l, std::string_view graph_name = "lts");

}  // namespace sessub
