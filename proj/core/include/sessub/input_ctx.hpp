#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sessub/lts.hpp"

namespace sessub {

using HoleIndex = std::uint32_t;
using StateMap = std::map<HoleIndex, StateId>;

enum class ContextErrorKind { RootIsHole, LabelNotAtRoot, MissingExpansion, MissingState };

class ContextError : public std::logic_error {
 public:
  ContextError(ContextErrorKind kind, const std::string& what)
      : std::logic_error(what), kind_(kind) {}
  ContextErrorKind kind() const { return kind_; }

 private:
  ContextErrorKind kind_;
};

/// Finite input context: a hole `[]_j` or a node `<l_i : A_i>`.
class InputContext {
 public:
  struct Edge;

  static InputContext hole(HoleIndex index);
  static InputContext node(std::vector<Edge> edges);

  bool is_hole() const { return edges_.empty(); }
  HoleIndex index() const { return index_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Hole indices in left-to-right order.
  std::vector<HoleIndex> holes() const;

  friend bool operator==(const InputContext& a, const InputContext& b);

 private:
  HoleIndex index_ = 0;
  std::vector<Edge> edges_;
};

struct InputContext::Edge {
  Label label;
  InputContext sub;
};

/// An input context whose holes are filled with states of the supertype LTS.
///
/// Always canonical: holes are numbered 1..n from left to right, so two trees
/// are equal exactly when they have the same shape and the same leaf states.
class InputTree {
 public:
  InputTree() : shape_(InputContext::hole(1)), assignment_{{1, 1}} {}
  static InputTree bare(StateId q);
  /// Builds `<l_i : sub_i>` and renumbers holes.
  static InputTree node(const std::vector<std::pair<Label, InputTree>>& branches);
  /// Fills `shape` from `assignment` (a superset is fine) and renumbers holes.
  static InputTree from_context(const InputContext& shape, const StateMap& assignment);

  const InputContext& shape() const { return shape_; }
  const StateMap& assignment() const { return assignment_; }

  bool is_bare() const { return shape_.is_hole(); }
  /// The single state of a bare tree.
  StateId state() const;
  std::vector<Label> root_labels() const;
  std::size_t leaf_count() const { return assignment_.size(); }
  std::set<StateId> leaf_states() const;

  /// Linear text, e.g. `2` or `<ko:2,ok:2>`.
  std::string to_string() const;

  friend bool operator==(const InputTree&, const InputTree&) = default;

 private:
  friend class InputTreeBuilder;
  InputContext shape_;
  StateMap assignment_;
};

/// The input tree spanned from q, or nullopt when q reaches an input cycle.
std::optional<InputTree> intree(const Lts& l, StateId q);

/// Follows the root branch `label`.
InputTree consume(const InputTree& t, const Label& label);

/// Replaces each hole j by expansion[j]; holes are renumbered left to right.
InputTree grow(const InputTree& t, const std::map<HoleIndex, InputTree>& expansion);

/// (hole index, state) pairs in left-to-right order.
std::vector<std::pair<HoleIndex, StateId>> leaves(const InputTree& t);

/// Replaces every leaf state q by g(q).
InputTree subst(const InputTree& t, const std::map<StateId, InputTree>& g);

/// Applies f to every leaf state; the shape is unchanged.
InputTree map_states(const InputTree& t, const std::function<StateId(StateId)>& f);

// ---------------------------------------------------------------------------
// Recursive input contexts

/// Term of a recursive input context:
///   A ::= []_j | <l_i : A_i> | rec X.A | X
struct RecTerm {
  enum class Kind { Hole, Node, Rec, Var };
  struct Edge;

  Kind kind = Kind::Hole;
  HoleIndex hole = 0;      // Hole
  std::uint32_t var = 0;   // Rec, Var
  std::vector<Edge> edges; // Node
  std::vector<RecTerm> body;  // Rec: exactly one element

  friend bool operator==(const RecTerm& a, const RecTerm& b);
};

struct RecTerm::Edge {
  Label label;
  RecTerm sub;
};

/// Recursive input context with filled holes, in canonical form: binders are
/// numbered in discovery order, unused binders are dropped and holes are
/// numbered left to right. Structural equality is therefore meaningful.
class RecInputContext {
 public:
  RecInputContext() : assignment_{{1, 1}} { root_.hole = 1; }
  static RecInputContext bare(StateId q);
  /// Canonicalises an arbitrary closed term.
  static RecInputContext make(const RecTerm& term, const StateMap& assignment);
  static RecInputContext from_tree(const InputTree& t);

  const RecTerm& root() const { return root_; }
  const StateMap& assignment() const { return assignment_; }

  bool is_bare() const { return root_.kind == RecTerm::Kind::Hole; }
  StateId state() const;
  bool is_recursive() const;
  std::set<StateId> leaf_states() const;

  /// Linear text, e.g. `rec X1.<tm:X1,over:2>`.
  std::string to_string() const;

  friend bool operator==(const RecInputContext&, const RecInputContext&) = default;

 private:
  RecTerm root_;
  StateMap assignment_;
};

/// The input-reachable region from q with cycles tied by binders. Total.
RecInputContext rec_intree(const Lts& l, StateId q);

/// Unfolds the root and follows branch `label`.
RecInputContext consume(const RecInputContext& c, const Label& label);

/// Root labels after unfolding; empty for a bare hole.
std::vector<Label> root_labels(const RecInputContext& c);

/// Replaces each hole j by expansion[j].
RecInputContext graft(const RecInputContext& c, const std::map<HoleIndex, RecInputContext>& expansion);

std::vector<std::pair<HoleIndex, StateId>> leaves(const RecInputContext& c);

RecInputContext map_states(const RecInputContext& c, const std::function<StateId(StateId)>& f);

}  // namespace sessub
