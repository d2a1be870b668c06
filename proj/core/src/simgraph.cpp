#include "sessub/simgraph.hpp"

#include <stdexcept>

namespace sessub {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Maybe: return "maybe";
  }
  return "maybe";
}

const char* to_string(FailureReason r) {
  switch (r) {
    case FailureReason::PolarityMismatch: return "polarity mismatch";
    case FailureReason::OutputCovariance: return "output covariance violated";
    case FailureReason::InputContravariance: return "input contravariance violated";
    case FailureReason::OneSidedTermination: return "one-sided termination";
    case FailureReason::OutputLoop: return "send-only cycle blocks anticipation";
    case FailureReason::InputLoop: return "receive-only cycle blocks anticipation";
    case FailureReason::ResidualInput: return "unconsumed accumulated input";
    case FailureReason::NoTermination: return "termination unreachable";
  }
  return "failure";
}

std::string to_string(const Rhs& rhs) {
  struct Visitor {
    std::string operator()(StateId q) const { return std::to_string(q); }
    std::string operator()(const InputTree& t) const { return t.to_string(); }
    std::string operator()(const RecInputContext& c) const { return c.to_string(); }
  };
  return std::visit(Visitor{}, rhs);
}

NodeId SimGraph::add_node(StateId lhs, Rhs rhs) {
  SimNode n;
  n.id = nodes_.size();
  n.lhs = lhs;
  n.rhs = std::move(rhs);
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

void SimGraph::add_edge(NodeId from, Action action, NodeId to) {
  edges_.push_back({from, std::move(action), to, EdgeStyle::Solid, false});
}

void SimGraph::add_back_link(NodeId from, NodeId to, bool growth) {
  edges_.push_back({from, std::nullopt, to, EdgeStyle::Dashed, growth});
}

void SimGraph::mark_failure(NodeId n, FailureReason reason, std::string detail) {
  auto& node = nodes_.at(n);
  node.kind = NodeKind::Failure;
  node.reason = reason;
  node.detail = std::move(detail);
}

void SimGraph::mark_success(NodeId n) { nodes_.at(n).kind = NodeKind::Success; }

std::vector<NodeId> SimGraph::failure_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::Failure) out.push_back(n.id);
  }
  return out;
}

std::size_t SimGraph::count_edges(EdgeStyle style) const {
  std::size_t count = 0;
  for (const auto& e : edges_) count += e.style == style ? 1 : 0;
  return count;
}

std::optional<NodeId> SimGraph::parent(NodeId n) const {
  for (const auto& e : edges_) {
    if (e.style == EdgeStyle::Solid && e.to == n && e.from != n) return e.from;
  }
  return std::nullopt;
}

bool SimGraph::is_ancestor(NodeId a, NodeId d) const {
  std::optional<NodeId> cur = d;
  std::size_t guard = nodes_.size();
  while (cur && guard-- > 0) {
    if (*cur == a) return true;
    cur = parent(*cur);
  }
  return false;
}

namespace {

std::string escape_html(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_quoted(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string blue(std::string_view text) {
  return "<font color=\"blue\">" + std::string(text) + "</font>";
}

// One bordered blue box per branching point; leaves print their state.
std::string html_tree(const InputContext& c, const StateMap& states) {
  if (c.is_hole()) return blue(std::to_string(states.at(c.index())));
  std::string out = "<table border=\"1\" color=\"blue\" cellborder=\"0\" cellspacing=\"2\">";
  for (const auto& e : c.edges()) {
    out += "<tr><td>" + blue(escape_html(e.label)) + "</td><td";
    out += e.sub.is_hole() ? " border=\"1\" color=\"blue\">" : ">";
    out += html_tree(e.sub, states);
    out += "</td></tr>";
  }
  out += "</table>";
  return out;
}

std::string html_rec(const RecTerm& t, const StateMap& states) {
  switch (t.kind) {
    case RecTerm::Kind::Hole:
      return blue(std::to_string(states.at(t.hole)));
    case RecTerm::Kind::Var:
      // Back-edge marker to the enclosing binder.
      return blue("&#8617;X" + std::to_string(t.var));
    case RecTerm::Kind::Rec:
      return "<table border=\"1\" color=\"blue\" style=\"rounded\" cellborder=\"0\"><tr><td>" +
             blue("&#956;X" + std::to_string(t.var)) + "</td><td>" +
             html_rec(t.body.front(), states) + "</td></tr></table>";
    case RecTerm::Kind::Node: {
      std::string out = "<table border=\"1\" color=\"blue\" cellborder=\"0\" cellspacing=\"2\">";
      for (const auto& e : t.edges) {
        const bool boxed = e.sub.kind == RecTerm::Kind::Hole || e.sub.kind == RecTerm::Kind::Var;
        out += "<tr><td>" + blue(escape_html(e.label)) + "</td><td";
        out += boxed ? " border=\"1\" color=\"blue\">" : ">";
        out += html_rec(e.sub, states);
        out += "</td></tr>";
      }
      out += "</table>";
      return out;
    }
  }
  return {};
}

std::string html_rhs(const Rhs& rhs) {
  struct Visitor {
    std::string operator()(StateId q) const { return blue(std::to_string(q)); }
    std::string operator()(const InputTree& t) const { return html_tree(t.shape(), t.assignment()); }
    std::string operator()(const RecInputContext& c) const { return html_rec(c.root(), c.assignment()); }
  };
  return std::visit(Visitor{}, rhs);
}

}  // namespace

std::string sim_to_dot(const SimGraph& g) {
  std::string out;
  out += "digraph simulation {\n";
  out += "  // algorithm: " + g.meta.algorithm + ", verdict: " + to_string(g.meta.verdict) +
         (g.meta.fallback_used ? ", dual problem" : "") + "\n";
  out += "  rankdir=TB;\n";
  out += "  node [shape=rectangle, style=filled, fillcolor=white, penwidth=1];\n";
  for (const auto& n : g.nodes()) {
    out += "  n" + std::to_string(n.id) + " [label=<<table border=\"0\" cellborder=\"0\"><tr><td>" +
           std::to_string(n.lhs) + "</td><td>" + html_rhs(n.rhs) + "</td></tr></table>>";
    std::string tooltip = std::to_string(n.lhs) + ", " + to_string(n.rhs);
    if (n.reason) tooltip += " (" + std::string(to_string(*n.reason)) + ")";
    out += ", tooltip=\"" + escape_quoted(tooltip) + "\"";
    if (n.id == g.root()) out += ", penwidth=3";
    if (n.kind == NodeKind::Failure) out += ", fillcolor=red";
    if (n.kind == NodeKind::Success) out += ", peripheries=2";
    out += "];\n";
  }
  for (const auto& e : g.edges()) {
    out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to);
    if (e.style == EdgeStyle::Dashed) {
      out += e.growth ? " [style=dashed, arrowhead=empty]" : " [style=dashed]";
    } else {
      out += " [label=\"" + escape_quoted(to_string(*e.action)) + "\"]";
    }
    out += ";\n";
  }
  out += "}\n";
  return out;
}

std::string lts_to_dot(const Lts& l, std::string_view graph_name) {
  std::string out = "digraph " + std::string(graph_name) + " {\n";
  out += "  rankdir=TB;\n";
  out += "  node [shape=rectangle, penwidth=1];\n";
  for (StateId q = 1; q <= l.size(); ++q) {
    out += "  s" + std::to_string(q) + " [label=\"" + std::to_string(q) + "\"";
    if (q == l.initial()) out += ", penwidth=3";
    out += "];\n";
  }
  for (StateId q = 1; q <= l.size(); ++q) {
    for (const auto& t : l.transitions(q)) {
      out += "  s" + std::to_string(q) + " -> s" + std::to_string(t.target) + " [label=\"" +
             escape_quoted(to_string(t.action)) + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace sessub
