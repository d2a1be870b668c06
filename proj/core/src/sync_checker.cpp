#include "sessub/sync_checker.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>

#include "tree_search.hpp"

namespace sessub {

namespace {

using SyncExpansion = detail::Expansion<SyncPair>;

bool subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SyncExpansion expand(const Lts& sub, const Lts& sup, const SyncPair& s) {
  const bool p_end = is_end(sub, s.p);
  const bool q_end = is_end(sup, s.q);
  if (p_end && q_end) return SyncExpansion::success();
  if (p_end || q_end) return SyncExpansion::failure(FailureReason::OneSidedTermination);

  std::vector<std::pair<Action, SyncPair>> children;
  if (is_output_state(sub, s.p)) {
    if (!is_output_state(sup, s.q)) return SyncExpansion::failure(FailureReason::PolarityMismatch);
    if (!subset(outputs(sub, s.p), outputs(sup, s.q))) {
      return SyncExpansion::failure(FailureReason::OutputCovariance);
    }
    for (const auto& t : sub.transitions(s.p)) {
      children.emplace_back(t.action, SyncPair{t.target, *sup.step(s.q, t.action)});
    }
  } else {
    if (!is_input_state(sup, s.q)) return SyncExpansion::failure(FailureReason::PolarityMismatch);
    if (!subset(inputs(sup, s.q), inputs(sub, s.p))) {
      return SyncExpansion::failure(FailureReason::InputContravariance);
    }
    for (const auto& t : sup.transitions(s.q)) {
      children.emplace_back(t.action, SyncPair{*sub.step(s.p, t.action), t.target});
    }
  }
  return SyncExpansion::step(std::move(children));
}

CheckResult check_memo(const Lts& sub, const Lts& sup) {
  CheckResult result;
  std::map<std::pair<StateId, StateId>, NodeId> seen;
  std::deque<SyncPair> work;

  auto intern = [&](const SyncPair& s) {
    auto [it, inserted] = seen.emplace(std::pair{s.p, s.q}, 0);
    if (inserted) {
      it->second = result.graph.add_node(s.p, s.q);
      work.push_back(s);
    }
    return it->second;
  };

  intern({sub.initial(), sup.initial()});
  while (!work.empty()) {
    const SyncPair s = work.front();
    work.pop_front();
    const NodeId n = seen.at({s.p, s.q});
    ++result.expanded;
    SyncExpansion exp = expand(sub, sup, s);
    if (exp.kind == SyncExpansion::Kind::Success) {
      result.graph.mark_success(n);
    } else if (exp.kind == SyncExpansion::Kind::Failure) {
      result.graph.mark_failure(n, exp.reason);
      if (!result.failure_node) result.failure_node = n;
    } else {
      for (const auto& [action, child] : exp.children) result.graph.add_edge(n, action, intern(child));
    }
  }
  result.verdict = result.failure_node ? Verdict::False : Verdict::True;
  result.graph.meta.verdict = result.verdict;
  result.graph.meta.steps = result.expanded;
  return result;
}

}  // namespace

CheckResult check_sync(const Lts& sub, const Lts& sup, SyncMode mode) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult result;
  if (mode == SyncMode::Memo) {
    result = check_memo(sub, sup);
  } else {
    detail::TreeSearch<SyncPair> search(
        [&](const SyncPair& s) { return expand(sub, sup, s); }, nullptr,
        detail::SearchLimits{.stop_on_failure = false});
    result = search.run({sub.initial(), sup.initial()});
  }
  result.graph.meta.algorithm = mode == SyncMode::Memo ? "sync (kozen)" : "sync (gayhole)";
  result.graph.meta.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sessub
