#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "sessub/types.hpp"

namespace sessub {

/// States are numbered from 1 in breadth-first discovery order.
using StateId = std::uint32_t;
using LabelSet = std::set<Label>;

enum class Polarity { Send, Receive };

Polarity flip(Polarity p);

struct Action {
  Polarity polarity = Polarity::Send;
  Label label;

  friend bool operator==(const Action&, const Action&) = default;
};

/// `!l` or `?l`.
std::string to_string(const Action& a);

struct Transition {
  Action action;
  StateId target = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

class UnknownState : public std::out_of_range {
 public:
  explicit UnknownState(StateId q);
  StateId state() const { return state_; }

 private:
  StateId state_;
};

class InvalidLts : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Deterministic, uni-polar labelled transition system of a session type.
class Lts {
 public:
  /// Builds an LTS from explicit transitions over states 1..num_states.
  /// Throws InvalidLts if a state mixes polarities or repeats an action.
  static Lts from_transitions(StateId num_states,
                              const std::vector<std::tuple<StateId, Action, StateId>>& transitions);

  StateId initial() const { return 1; }
  StateId size() const { return static_cast<StateId>(out_.size()); }
  bool contains(StateId q) const { return q >= 1 && q <= size(); }

  /// Outgoing transitions of q in source order.
  std::span<const Transition> transitions(StateId q) const;
  std::optional<StateId> step(StateId q, const Action& a) const;

  /// The session type term a state denotes; only for LTSs built from types.
  const SessionType& term(StateId q) const;
  bool has_terms() const { return !terms_.empty(); }

  friend bool operator==(const Lts&, const Lts&) = default;

 private:
  friend Lts build_lts(const SessionType& t);

  std::vector<std::vector<Transition>> out_;
  std::vector<SessionType> terms_;
};

Lts build_lts(const SessionType& t);

LabelSet inputs(const Lts& l, StateId q);
LabelSet outputs(const Lts& l, StateId q);
bool is_end(const Lts& l, StateId q);
bool is_input_state(const Lts& l, StateId q);
bool is_output_state(const Lts& l, StateId q);

/// True iff from q, following only transitions of the given polarity, one can
/// reach a state lying on a cycle of that polarity.
bool has_cycle(const Lts& l, Polarity polarity, StateId q);

/// Same state structure with every action's polarity flipped.
Lts flip_polarity(const Lts& l);

/// LTS of the dual type: rebuilt from the initial term when available,
/// otherwise the polarity flip (the two coincide for LTSs of types).
Lts dual_lts(const Lts& l);

}  // namespace sessub
