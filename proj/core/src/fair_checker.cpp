#include "sessub/fair_checker.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <vector>

#include "tree_search.hpp"

namespace sessub {

namespace {

using FairExpansion = detail::Expansion<FairState>;

bool subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

FairExpansion expand(const Lts& sub, const Lts& sup, const FairState& s, std::size_t max_leaves) {
  const RecInputContext& acc = s.acc;

  if (is_end(sub, s.p)) {
    if (!acc.is_bare()) return FairExpansion::failure(FailureReason::ResidualInput);
    if (is_end(sup, acc.state())) return FairExpansion::success();
    return FairExpansion::failure(FailureReason::OneSidedTermination);
  }

  std::vector<std::pair<Action, FairState>> children;

  if (is_input_state(sub, s.p)) {
    const LabelSet mine = inputs(sub, s.p);
    if (acc.is_bare()) {
      const StateId q = acc.state();
      if (is_end(sup, q)) return FairExpansion::failure(FailureReason::OneSidedTermination);
      if (!is_input_state(sup, q)) return FairExpansion::failure(FailureReason::PolarityMismatch);
      if (!subset(inputs(sup, q), mine)) return FairExpansion::failure(FailureReason::InputContravariance);
      for (const auto& t : sup.transitions(q)) {
        children.emplace_back(t.action, FairState{*sub.step(s.p, t.action), RecInputContext::bare(t.target)});
      }
      return FairExpansion::step(std::move(children));
    }
    const auto labels = root_labels(acc);
    for (const auto& l : labels) {
      if (!mine.count(l)) return FairExpansion::failure(FailureReason::InputContravariance, "?" + l);
    }
    for (const auto& l : labels) {
      const Action a{Polarity::Receive, l};
      children.emplace_back(a, FairState{*sub.step(s.p, a), consume(acc, l)});
    }
    return FairExpansion::step(std::move(children));
  }

  const LabelSet mine = outputs(sub, s.p);
  if (acc.is_bare() && is_output_state(sup, acc.state()) && subset(mine, outputs(sup, acc.state()))) {
    for (const auto& t : sub.transitions(s.p)) {
      children.emplace_back(t.action,
                            FairState{t.target, RecInputContext::bare(*sup.step(acc.state(), t.action))});
    }
    return FairExpansion::step(std::move(children));
  }

  // Anticipation without the output-loop side condition.
  std::map<HoleIndex, RecInputContext> expansion;
  for (const auto& [j, q] : leaves(acc)) {
    RecInputContext ctx = rec_intree(sup, q);
    for (StateId h : ctx.leaf_states()) {
      if (is_end(sup, h)) return FairExpansion::failure(FailureReason::OneSidedTermination);
      if (!subset(mine, outputs(sup, h))) {
        return FairExpansion::failure(FailureReason::OutputCovariance, "state " + std::to_string(h));
      }
    }
    expansion.emplace(j, std::move(ctx));
  }
  const RecInputContext grown = graft(acc, expansion);
  if (grown.assignment().size() > max_leaves) return FairExpansion::limit();
  for (const auto& t : sub.transitions(s.p)) {
    children.emplace_back(
        t.action, FairState{t.target, map_states(grown, [&](StateId q) { return *sup.step(q, t.action); })});
  }
  return FairExpansion::step(std::move(children));
}

}  // namespace

Uncontrollable::Uncontrollable(Side side)
    : std::runtime_error(side == Side::Sub ? "subtype is not controllable"
                                           : "supertype is not controllable"),
      side_(side) {}

bool controllable(const Lts& l) {
  // Backward reachability from the end states.
  std::vector<std::vector<StateId>> pred(l.size() + 1);
  std::vector<StateId> stack;
  std::vector<bool> reaches(l.size() + 1, false);
  for (StateId q = 1; q <= l.size(); ++q) {
    for (const auto& t : l.transitions(q)) pred[t.target].push_back(q);
    if (is_end(l, q)) {
      reaches[q] = true;
      stack.push_back(q);
    }
  }
  if (stack.empty()) return false;
  while (!stack.empty()) {
    const StateId q = stack.back();
    stack.pop_back();
    for (StateId r : pred[q]) {
      if (!reaches[r]) {
        reaches[r] = true;
        stack.push_back(r);
      }
    }
  }
  std::vector<bool> seen(l.size() + 1, false);
  stack.push_back(l.initial());
  seen[l.initial()] = true;
  while (!stack.empty()) {
    const StateId q = stack.back();
    stack.pop_back();
    if (!reaches[q]) return false;
    for (const auto& t : l.transitions(q)) {
      if (!seen[t.target]) {
        seen[t.target] = true;
        stack.push_back(t.target);
      }
    }
  }
  return true;
}

namespace {

// A closed simulation can still be unfair: a cycle of back-links with no way
// out to a success leaf means the pair never terminates together. Returns the
// first node (in creation order) that cannot reach a success node.
std::optional<NodeId> first_nonterminating(const SimGraph& g) {
  std::vector<std::vector<NodeId>> pred(g.nodes().size());
  for (const auto& e : g.edges()) pred[e.to].push_back(e.from);
  std::vector<bool> reaches(g.nodes().size(), false);
  std::vector<NodeId> stack;
  for (const auto& n : g.nodes()) {
    if (n.kind == NodeKind::Success) {
      reaches[n.id] = true;
      stack.push_back(n.id);
    }
  }
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    for (NodeId m : pred[n]) {
      if (!reaches[m]) {
        reaches[m] = true;
        stack.push_back(m);
      }
    }
  }
  for (NodeId n = 0; n < reaches.size(); ++n) {
    if (!reaches[n]) return n;
  }
  return std::nullopt;
}

}  // namespace

CheckResult check_fair(const Lts& sub, const Lts& sup, const FairOptions& opts) {
  if (!controllable(sub)) throw Uncontrollable(Side::Sub);
  if (!controllable(sup)) throw Uncontrollable(Side::Sup);

  const auto start = std::chrono::steady_clock::now();
  detail::TreeSearch<FairState> search(
      [&](const FairState& s) { return expand(sub, sup, s, opts.max_tree_leaves); }, nullptr,
      detail::SearchLimits{.max_steps = opts.max_steps, .stop_on_failure = true});
  CheckResult result = search.run({sub.initial(), RecInputContext::bare(sup.initial())});
  if (result.verdict == Verdict::True) {
    if (auto stuck = first_nonterminating(result.graph)) {
      result.graph.mark_failure(*stuck, FailureReason::NoTermination);
      result.graph.meta.verdict = Verdict::False;
      result.verdict = Verdict::False;
      result.failure_node = stuck;
    }
  }
  result.graph.meta.algorithm = "fair";
  result.graph.meta.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sessub
