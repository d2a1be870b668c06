#include "sessub/lts.hpp"

#include <deque>
#include <map>

namespace sessub {

Polarity flip(Polarity p) { return p == Polarity::Send ? Polarity::Receive : Polarity::Send; }

std::string to_string(const Action& a) {
  return (a.polarity == Polarity::Send ? "!" : "?") + a.label;
}

UnknownState::UnknownState(StateId q)
    : std::out_of_range("unknown state " + std::to_string(q)), state_(q) {}

Lts Lts::from_transitions(StateId num_states,
                          const std::vector<std::tuple<StateId, Action, StateId>>& transitions) {
  if (num_states == 0) throw InvalidLts("an LTS needs at least one state");
  Lts l;
  l.out_.resize(num_states);
  for (const auto& [src, action, dst] : transitions) {
    if (!l.contains(src)) throw UnknownState(src);
    if (!l.contains(dst)) throw UnknownState(dst);
    auto& out = l.out_[src - 1];
    for (const auto& t : out) {
      if (t.action.polarity != action.polarity) {
        throw InvalidLts("state " + std::to_string(src) + " mixes sends and receives");
      }
      if (t.action == action) {
        throw InvalidLts("state " + std::to_string(src) + " has two transitions on " +
                         to_string(action));
      }
    }
    out.push_back({action, dst});
  }
  return l;
}

std::span<const Transition> Lts::transitions(StateId q) const {
  if (!contains(q)) throw UnknownState(q);
  return out_[q - 1];
}

std::optional<StateId> Lts::step(StateId q, const Action& a) const {
  for (const auto& t : transitions(q)) {
    if (t.action == a) return t.target;
  }
  return std::nullopt;
}

const SessionType& Lts::term(StateId q) const {
  if (!contains(q)) throw UnknownState(q);
  if (terms_.empty()) throw InvalidLts("LTS was not built from a session type");
  return terms_[q - 1];
}

Lts build_lts(const SessionType& t) {
  // States are identified by the text of their unfolded term; rendering is
  // injective on ASTs, so this is syntactic equality.
  Lts l;
  std::map<std::string, StateId> ids;
  std::deque<SessionType> unfolded;

  auto intern = [&](const SessionType& term) {
    SessionType head = unfold(term);
    auto [it, inserted] = ids.emplace(render(head), static_cast<StateId>(ids.size() + 1));
    if (inserted) {
      l.terms_.push_back(term);
      l.out_.emplace_back();
      unfolded.push_back(std::move(head));
    }
    return it->second;
  };

  intern(t);
  for (StateId q = 1; q <= l.size(); ++q) {
    const SessionType head = unfolded[q - 1];
    if (!head.is_choice()) continue;
    const Polarity pol =
        head.kind() == SessionType::Kind::Select ? Polarity::Send : Polarity::Receive;
    for (const auto& [label, cont] : head.branches()) {
      const StateId target = intern(cont);
      l.out_[q - 1].push_back({Action{pol, label}, target});
    }
  }
  return l;
}

namespace {

LabelSet labels_of(const Lts& l, StateId q, Polarity p) {
  LabelSet result;
  for (const auto& t : l.transitions(q)) {
    if (t.action.polarity == p) result.insert(t.action.label);
  }
  return result;
}

}  // namespace

LabelSet inputs(const Lts& l, StateId q) { return labels_of(l, q, Polarity::Receive); }
LabelSet outputs(const Lts& l, StateId q) { return labels_of(l, q, Polarity::Send); }

bool is_end(const Lts& l, StateId q) { return l.transitions(q).empty(); }

bool is_input_state(const Lts& l, StateId q) {
  const auto ts = l.transitions(q);
  return !ts.empty() && ts.front().action.polarity == Polarity::Receive;
}

bool is_output_state(const Lts& l, StateId q) {
  const auto ts = l.transitions(q);
  return !ts.empty() && ts.front().action.polarity == Polarity::Send;
}

bool has_cycle(const Lts& l, Polarity polarity, StateId q) {
  if (!l.contains(q)) throw UnknownState(q);

  auto successors = [&](StateId s) {
    std::vector<StateId> next;
    for (const auto& t : l.transitions(s)) {
      if (t.action.polarity == polarity) next.push_back(t.target);
    }
    return next;
  };
  auto reachable = [&](StateId from) {
    // States reachable from `from` in one or more steps.
    std::vector<bool> seen(l.size() + 1, false);
    std::vector<StateId> stack = successors(from);
    while (!stack.empty()) {
      const StateId s = stack.back();
      stack.pop_back();
      if (seen[s]) continue;
      seen[s] = true;
      for (StateId n : successors(s)) stack.push_back(n);
    }
    return seen;
  };

  std::vector<bool> candidates = reachable(q);
  candidates[q] = true;
  for (StateId s = 1; s <= l.size(); ++s) {
    if (candidates[s] && reachable(s)[s]) return true;
  }
  return false;
}

Lts flip_polarity(const Lts& l) {
  std::vector<std::tuple<StateId, Action, StateId>> ts;
  for (StateId q = 1; q <= l.size(); ++q) {
    for (const auto& t : l.transitions(q)) {
      ts.emplace_back(q, Action{flip(t.action.polarity), t.action.label}, t.target);
    }
  }
  return Lts::from_transitions(l.size(), ts);
}

Lts dual_lts(const Lts& l) {
  if (l.has_terms()) return build_lts(dual(l.term(l.initial())));
  return flip_polarity(l);
}

}  // namespace sessub
