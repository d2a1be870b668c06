#include "sessub/oracle.hpp"

#include <deque>
#include <map>
#include <unordered_map>

namespace sessub {

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Unreceivable: return "unreceivable";
    case ViolationKind::Deadlock: return "deadlock";
    case ViolationKind::OrphanAtTermination: return "orphan at termination";
  }
  return "?";
}

std::string to_string(const std::vector<TraceStep>& trace) {
  std::string out;
  for (const auto& s : trace) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s.machine) + ":" + to_string(s.action);
  }
  return out;
}

namespace {

// Queues hold label ids; labels are interned per exploration.
struct Config {
  StateId s1 = 0;
  StateId s2 = 0;
  std::string q12;
  std::string q21;

  std::string key() const {
    std::string k;
    k.reserve(q12.size() + q21.size() + 12);
    k.append(reinterpret_cast<const char*>(&s1), sizeof s1);
    k.append(reinterpret_cast<const char*>(&s2), sizeof s2);
    k += q12;
    k += '|';
    k += q21;
    return k;
  }
};

struct Visited {
  Config config;
  std::size_t depth = 0;
  std::size_t parent = 0;
  std::vector<TraceStep> steps;  // from parent to here
  std::vector<std::size_t> succ;
  bool limited = false;  // bound or depth cut something off here
};

class Explorer {
 public:
  Explorer(const Lts& m1, const Lts& m2, const OracleOptions& opts)
      : m_{&m1, &m2}, opts_(opts) {}

  OracleResult run() {
    add({m_[0]->initial(), m_[1]->initial(), {}, {}}, 0, 0, {});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (auto v = visit(i)) {
        result_.violation = Violation{*v, trace(i)};
        break;
      }
    }
    if (!result_.violation && opts_.mode == OracleMode::Fair) fair_pass();
    result_.configurations = nodes_.size();
    return result_;
  }

 private:
  struct Move {
    std::vector<TraceStep> steps;
    Config next;
  };

  char intern(const Label& l) {
    auto [it, inserted] = label_ids_.emplace(l, static_cast<char>(labels_.size()));
    if (inserted) labels_.push_back(l);
    return it->second;
  }

  std::size_t add(Config c, std::size_t depth, std::size_t parent, std::vector<TraceStep> steps) {
    auto [it, inserted] = index_.emplace(c.key(), nodes_.size());
    if (inserted) nodes_.push_back({std::move(c), depth, parent, std::move(steps), {}, false});
    return it->second;
  }

  std::vector<TraceStep> trace(std::size_t i) const {
    std::vector<std::vector<TraceStep>> segments;
    while (i != 0) {
      segments.push_back(nodes_[i].steps);
      i = nodes_[i].parent;
    }
    std::vector<TraceStep> out;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
    return out;
  }

  std::string& outbox(Config& c, int m) { return m == 0 ? c.q12 : c.q21; }
  std::string& inbox(Config& c, int m) { return m == 0 ? c.q21 : c.q12; }
  StateId& state(Config& c, int m) { return m == 0 ? c.s1 : c.s2; }

  std::optional<ViolationKind> visit(std::size_t i) {
    Config c = nodes_[i].config;
    const bool end1 = is_end(*m_[0], c.s1);
    const bool end2 = is_end(*m_[1], c.s2);
    if (end1 && end2) {
      if (!c.q12.empty() || !c.q21.empty()) return ViolationKind::OrphanAtTermination;
      result_.clean_termination_reached = true;
      return std::nullopt;
    }

    std::vector<Move> moves;
    bool blocked_by_bound = false;
    for (int m = 0; m < 2; ++m) {
      const Lts& me = *m_[m];
      const Lts& peer = *m_[1 - m];
      const StateId s = state(c, m);
      if (is_output_state(me, s)) {
        for (const auto& t : me.transitions(s)) {
          Config next = c;
          if (opts_.mode == OracleMode::Rendezvous) {
            const StateId ps = state(c, 1 - m);
            if (!is_input_state(peer, ps)) continue;
            const Action recv{Polarity::Receive, t.action.label};
            auto target = peer.step(ps, recv);
            if (!target) return ViolationKind::Unreceivable;
            state(next, m) = t.target;
            state(next, 1 - m) = *target;
            moves.push_back({{{m + 1, t.action}, {2 - m, recv}}, std::move(next)});
          } else {
            std::string& q = outbox(next, m);
            if (q.size() >= opts_.bound) {
              blocked_by_bound = true;
              continue;
            }
            q.push_back(intern(t.action.label));
            state(next, m) = t.target;
            moves.push_back({{{m + 1, t.action}}, std::move(next)});
          }
        }
      } else if (is_input_state(me, s) && opts_.mode != OracleMode::Rendezvous) {
        const std::string& q = inbox(c, m);
        if (q.empty()) continue;
        const Action recv{Polarity::Receive, labels_[static_cast<std::size_t>(q.front())]};
        auto target = me.step(s, recv);
        if (!target) return ViolationKind::Unreceivable;
        Config next = c;
        inbox(next, m).erase(0, 1);
        state(next, m) = *target;
        moves.push_back({{{m + 1, recv}}, std::move(next)});
      }
    }

    if (blocked_by_bound) {
      result_.queue_limited = true;
      nodes_[i].limited = true;
    }
    if (moves.empty()) {
      if (blocked_by_bound) return std::nullopt;
      return ViolationKind::Deadlock;
    }
    if (nodes_[i].depth >= opts_.depth) {
      result_.truncated = true;
      nodes_[i].limited = true;
      return std::nullopt;
    }
    for (auto& mv : moves) {
      const std::size_t j = add(std::move(mv.next), nodes_[i].depth + 1, i, std::move(mv.steps));
      nodes_[i].succ.push_back(j);
    }
    return std::nullopt;
  }

  // Configurations that cannot reach clean termination: a livelock when
  // nothing was cut off on the way, otherwise inconclusive.
  void fair_pass() {
    const std::size_t n = nodes_.size();
    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : nodes_[i].succ) pred[j].push_back(i);
    }
    auto backward = [&](auto&& is_seed) {
      std::vector<bool> mark(n, false);
      std::vector<std::size_t> stack;
      for (std::size_t i = 0; i < n; ++i) {
        if (is_seed(i)) {
          mark[i] = true;
          stack.push_back(i);
        }
      }
      while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t p : pred[i]) {
          if (!mark[p]) {
            mark[p] = true;
            stack.push_back(p);
          }
        }
      }
      return mark;
    };
    const auto can_finish = backward([&](std::size_t i) {
      Config c = nodes_[i].config;
      return is_end(*m_[0], c.s1) && is_end(*m_[1], c.s2) && c.q12.empty() && c.q21.empty();
    });
    const auto can_hit_limit = backward([&](std::size_t i) { return nodes_[i].limited; });
    for (std::size_t i = 0; i < n; ++i) {
      if (can_finish[i]) continue;
      if (can_hit_limit[i]) {
        ++result_.inconclusive;
      } else if (!result_.violation) {
        result_.violation = Violation{ViolationKind::Deadlock, trace(i)};
      }
    }
  }

  const Lts* m_[2];
  OracleOptions opts_;
  OracleResult result_;
  std::vector<Visited> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<Label, char> label_ids_;
  std::vector<Label> labels_;
};

}  // namespace

OracleResult explore(const Lts& m1, const Lts& m2, const OracleOptions& opts) {
  return Explorer(m1, m2, opts).run();
}

}  // namespace sessub
