#include "sessub/input_ctx.hpp"

#include <algorithm>
#include <cassert>

namespace sessub {

// ---------------------------------------------------------------------------
// InputContext

InputContext InputContext::hole(HoleIndex index) {
  InputContext c;
  c.index_ = index;
  return c;
}

InputContext InputContext::node(std::vector<Edge> edges) {
  assert(!edges.empty());
  InputContext c;
  c.edges_ = std::move(edges);
  return c;
}

std::vector<HoleIndex> InputContext::holes() const {
  std::vector<HoleIndex> out;
  std::vector<const InputContext*> stack{this};
  while (!stack.empty()) {
    const InputContext* c = stack.back();
    stack.pop_back();
    if (c->is_hole()) {
      out.push_back(c->index_);
      continue;
    }
    for (auto it = c->edges_.rbegin(); it != c->edges_.rend(); ++it) stack.push_back(&it->sub);
  }
  return out;
}

bool operator==(const InputContext& a, const InputContext& b) {
  if (a.is_hole() != b.is_hole()) return false;
  if (a.is_hole()) return a.index_ == b.index_;
  if (a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    if (a.edges_[i].label != b.edges_[i].label || !(a.edges_[i].sub == b.edges_[i].sub)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// InputTree

namespace {

// Tree with states stored directly at the leaves; the working form for all
// structural operations before renumbering holes.
struct Filled {
  StateId state = 0;
  std::vector<std::pair<Label, Filled>> kids;
};

Filled to_filled(const InputContext& c, const StateMap& assignment) {
  Filled f;
  if (c.is_hole()) {
    auto it = assignment.find(c.index());
    if (it == assignment.end()) {
      throw ContextError(ContextErrorKind::MissingState,
                         "hole " + std::to_string(c.index()) + " has no state");
    }
    f.state = it->second;
    return f;
  }
  for (const auto& e : c.edges()) f.kids.emplace_back(e.label, to_filled(e.sub, assignment));
  return f;
}

InputContext number_holes(const Filled& f, StateMap& assignment) {
  if (f.kids.empty()) {
    const auto index = static_cast<HoleIndex>(assignment.size() + 1);
    assignment.emplace(index, f.state);
    return InputContext::hole(index);
  }
  std::vector<InputContext::Edge> edges;
  edges.reserve(f.kids.size());
  for (const auto& [label, kid] : f.kids) edges.push_back({label, number_holes(kid, assignment)});
  return InputContext::node(std::move(edges));
}

void render_filled(const Filled& f, std::string& out) {
  if (f.kids.empty()) {
    out += std::to_string(f.state);
    return;
  }
  out += '<';
  for (std::size_t i = 0; i < f.kids.size(); ++i) {
    if (i) out += ',';
    out += f.kids[i].first;
    out += ':';
    render_filled(f.kids[i].second, out);
  }
  out += '>';
}

}  // namespace

class InputTreeBuilder {
 public:
  static InputTree from_filled(const Filled& f) {
    InputTree t;
    t.assignment_.clear();
    t.shape_ = number_holes(f, t.assignment_);
    return t;
  }
  static Filled filled(const InputTree& t) { return to_filled(t.shape_, t.assignment_); }
};

InputTree InputTree::bare(StateId q) {
  InputTree t;
  t.assignment_[1] = q;
  return t;
}

InputTree InputTree::node(const std::vector<std::pair<Label, InputTree>>& branches) {
  assert(!branches.empty());
  Filled f;
  for (const auto& [label, sub] : branches) f.kids.emplace_back(label, InputTreeBuilder::filled(sub));
  return InputTreeBuilder::from_filled(f);
}

InputTree InputTree::from_context(const InputContext& shape, const StateMap& assignment) {
  return InputTreeBuilder::from_filled(to_filled(shape, assignment));
}

StateId InputTree::state() const {
  if (!is_bare()) throw ContextError(ContextErrorKind::RootIsHole, "input tree is not a bare state");
  return assignment_.begin()->second;
}

std::vector<Label> InputTree::root_labels() const {
  std::vector<Label> out;
  for (const auto& e : shape_.edges()) out.push_back(e.label);
  return out;
}

std::set<StateId> InputTree::leaf_states() const {
  std::set<StateId> out;
  for (const auto& [_, q] : assignment_) out.insert(q);
  return out;
}

std::string InputTree::to_string() const {
  std::string out;
  render_filled(InputTreeBuilder::filled(*this), out);
  return out;
}

std::optional<InputTree> intree(const Lts& l, StateId q) {
  if (has_cycle(l, Polarity::Receive, q)) return std::nullopt;
  // Without input cycles the recursion below terminates.
  std::function<Filled(StateId)> span = [&](StateId s) {
    Filled f;
    f.state = s;
    if (!is_input_state(l, s)) return f;
    for (const auto& t : l.transitions(s)) f.kids.emplace_back(t.action.label, span(t.target));
    return f;
  };
  return InputTreeBuilder::from_filled(span(q));
}

InputTree consume(const InputTree& t, const Label& label) {
  if (t.is_bare()) {
    throw ContextError(ContextErrorKind::RootIsHole, "cannot consume '" + label + "' from a bare state");
  }
  for (const auto& e : t.shape().edges()) {
    if (e.label == label) return InputTree::from_context(e.sub, t.assignment());
  }
  throw ContextError(ContextErrorKind::LabelNotAtRoot, "label '" + label + "' is not at the root");
}

InputTree grow(const InputTree& t, const std::map<HoleIndex, InputTree>& expansion) {
  std::function<Filled(const InputContext&)> walk = [&](const InputContext& c) {
    if (c.is_hole()) {
      auto it = expansion.find(c.index());
      if (it == expansion.end()) {
        throw ContextError(ContextErrorKind::MissingExpansion,
                           "no expansion for hole " + std::to_string(c.index()));
      }
      return InputTreeBuilder::filled(it->second);
    }
    Filled f;
    for (const auto& e : c.edges()) f.kids.emplace_back(e.label, walk(e.sub));
    return f;
  };
  return InputTreeBuilder::from_filled(walk(t.shape()));
}

std::vector<std::pair<HoleIndex, StateId>> leaves(const InputTree& t) {
  std::vector<std::pair<HoleIndex, StateId>> out;
  for (HoleIndex j : t.shape().holes()) out.emplace_back(j, t.assignment().at(j));
  return out;
}

InputTree subst(const InputTree& t, const std::map<StateId, InputTree>& g) {
  std::map<HoleIndex, InputTree> expansion;
  for (const auto& [j, q] : t.assignment()) {
    auto it = g.find(q);
    if (it == g.end()) {
      throw ContextError(ContextErrorKind::MissingExpansion,
                         "substitution undefined on state " + std::to_string(q));
    }
    expansion.emplace(j, it->second);
  }
  return grow(t, expansion);
}

InputTree map_states(const InputTree& t, const std::function<StateId(StateId)>& f) {
  std::map<HoleIndex, InputTree> expansion;
  for (const auto& [j, q] : t.assignment()) expansion.emplace(j, InputTree::bare(f(q)));
  return grow(t, expansion);
}

// ---------------------------------------------------------------------------
// RecInputContext

bool operator==(const RecTerm& a, const RecTerm& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case RecTerm::Kind::Hole:
      return a.hole == b.hole;
    case RecTerm::Kind::Var:
      return a.var == b.var;
    case RecTerm::Kind::Rec:
      return a.var == b.var && a.body.front() == b.body.front();
    case RecTerm::Kind::Node:
      if (a.edges.size() != b.edges.size()) return false;
      for (std::size_t i = 0; i < a.edges.size(); ++i) {
        if (a.edges[i].label != b.edges[i].label || !(a.edges[i].sub == b.edges[i].sub)) return false;
      }
      return true;
  }
  return false;
}

namespace {

RecTerm make_hole(HoleIndex j) {
  RecTerm t;
  t.kind = RecTerm::Kind::Hole;
  t.hole = j;
  return t;
}

RecTerm make_var(std::uint32_t v) {
  RecTerm t;
  t.kind = RecTerm::Kind::Var;
  t.var = v;
  return t;
}

RecTerm make_rec(std::uint32_t v, RecTerm body) {
  RecTerm t;
  t.kind = RecTerm::Kind::Rec;
  t.var = v;
  t.body.push_back(std::move(body));
  return t;
}

bool occurs_free(const RecTerm& t, std::uint32_t v) {
  switch (t.kind) {
    case RecTerm::Kind::Hole:
      return false;
    case RecTerm::Kind::Var:
      return t.var == v;
    case RecTerm::Kind::Rec:
      return t.var != v && occurs_free(t.body.front(), v);
    case RecTerm::Kind::Node:
      return std::any_of(t.edges.begin(), t.edges.end(),
                         [&](const RecTerm::Edge& e) { return occurs_free(e.sub, v); });
  }
  return false;
}

RecTerm substitute(const RecTerm& t, std::uint32_t v, const RecTerm& replacement) {
  switch (t.kind) {
    case RecTerm::Kind::Hole:
      return t;
    case RecTerm::Kind::Var:
      return t.var == v ? replacement : t;
    case RecTerm::Kind::Rec:
      if (t.var == v) return t;
      return make_rec(t.var, substitute(t.body.front(), v, replacement));
    case RecTerm::Kind::Node: {
      RecTerm out;
      out.kind = RecTerm::Kind::Node;
      for (const auto& e : t.edges) out.edges.push_back({e.label, substitute(e.sub, v, replacement)});
      return out;
    }
  }
  return t;
}

RecTerm unfold(const RecTerm& t) {
  RecTerm cur = t;
  while (cur.kind == RecTerm::Kind::Rec) cur = substitute(cur.body.front(), cur.var, cur);
  return cur;
}

// Canonicalisation pass. Holes map to states through `states`.
class Canonicalizer {
 public:
  explicit Canonicalizer(const StateMap& states) : states_(states) {}

  RecTerm run(const RecTerm& t) { return walk(t); }
  StateMap take_assignment() { return std::move(assignment_); }

 private:
  RecTerm walk(const RecTerm& t) {
    switch (t.kind) {
      case RecTerm::Kind::Hole: {
        auto it = states_.find(t.hole);
        if (it == states_.end()) {
          throw ContextError(ContextErrorKind::MissingState,
                             "hole " + std::to_string(t.hole) + " has no state");
        }
        const auto index = static_cast<HoleIndex>(assignment_.size() + 1);
        assignment_.emplace(index, it->second);
        return make_hole(index);
      }
      case RecTerm::Kind::Var:
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->first == t.var) return make_var(it->second);
        }
        throw ContextError(ContextErrorKind::MissingState, "free recursion variable in input context");
      case RecTerm::Kind::Rec: {
        if (!occurs_free(t.body.front(), t.var)) return walk(t.body.front());
        const std::uint32_t fresh = ++next_var_;
        scope_.emplace_back(t.var, fresh);
        RecTerm body = walk(t.body.front());
        scope_.pop_back();
        return make_rec(fresh, std::move(body));
      }
      case RecTerm::Kind::Node: {
        RecTerm out;
        out.kind = RecTerm::Kind::Node;
        for (const auto& e : t.edges) out.edges.push_back({e.label, walk(e.sub)});
        return out;
      }
    }
    return t;
  }

  const StateMap& states_;
  StateMap assignment_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> scope_;
  std::uint32_t next_var_ = 0;
};

void render_term(const RecTerm& t, const StateMap& assignment, std::string& out) {
  switch (t.kind) {
    case RecTerm::Kind::Hole:
      out += std::to_string(assignment.at(t.hole));
      return;
    case RecTerm::Kind::Var:
      out += 'X';
      out += std::to_string(t.var);
      return;
    case RecTerm::Kind::Rec:
      out += "rec X";
      out += std::to_string(t.var);
      out += '.';
      render_term(t.body.front(), assignment, out);
      return;
    case RecTerm::Kind::Node:
      out += '<';
      for (std::size_t i = 0; i < t.edges.size(); ++i) {
        if (i) out += ',';
        out += t.edges[i].label;
        out += ':';
        render_term(t.edges[i].sub, assignment, out);
      }
      out += '>';
      return;
  }
}

// Copies `t`, offsetting hole indices so several terms can share one map.
RecTerm shift_holes(const RecTerm& t, HoleIndex offset) {
  RecTerm out = t;
  std::function<void(RecTerm&)> fix = [&](RecTerm& r) {
    if (r.kind == RecTerm::Kind::Hole) r.hole += offset;
    for (auto& e : r.edges) fix(e.sub);
    for (auto& b : r.body) fix(b);
  };
  fix(out);
  return out;
}

}  // namespace

RecInputContext RecInputContext::bare(StateId q) { return make(make_hole(1), StateMap{{1, q}}); }

RecInputContext RecInputContext::make(const RecTerm& term, const StateMap& assignment) {
  Canonicalizer canon(assignment);
  RecInputContext c;
  c.root_ = canon.run(term);
  c.assignment_ = canon.take_assignment();
  return c;
}

RecInputContext RecInputContext::from_tree(const InputTree& t) {
  std::function<RecTerm(const InputContext&)> conv = [&](const InputContext& c) {
    if (c.is_hole()) return make_hole(c.index());
    RecTerm out;
    out.kind = RecTerm::Kind::Node;
    for (const auto& e : c.edges()) out.edges.push_back({e.label, conv(e.sub)});
    return out;
  };
  return make(conv(t.shape()), t.assignment());
}

StateId RecInputContext::state() const {
  if (!is_bare()) throw ContextError(ContextErrorKind::RootIsHole, "input context is not a bare state");
  return assignment_.begin()->second;
}

bool RecInputContext::is_recursive() const {
  std::function<bool(const RecTerm&)> any_rec = [&](const RecTerm& t) {
    if (t.kind == RecTerm::Kind::Rec) return true;
    return std::any_of(t.edges.begin(), t.edges.end(),
                       [&](const RecTerm::Edge& e) { return any_rec(e.sub); });
  };
  return any_rec(root_);
}

std::set<StateId> RecInputContext::leaf_states() const {
  std::set<StateId> out;
  for (const auto& [_, q] : assignment_) out.insert(q);
  return out;
}

std::string RecInputContext::to_string() const {
  std::string out;
  render_term(root_, assignment_, out);
  return out;
}

RecInputContext rec_intree(const Lts& l, StateId q) {
  if (!l.contains(q)) throw UnknownState(q);
  StateMap states;
  std::uint32_t next_var = 0;
  // Input states on the current path, with their binder and whether it is used.
  struct Frame {
    StateId state;
    std::uint32_t var;
    bool used;
  };
  std::vector<Frame> path;

  std::function<RecTerm(StateId)> build = [&](StateId s) -> RecTerm {
    if (!is_input_state(l, s)) {
      const auto index = static_cast<HoleIndex>(states.size() + 1);
      states.emplace(index, s);
      return make_hole(index);
    }
    for (auto& f : path) {
      if (f.state == s) {
        f.used = true;
        return make_var(f.var);
      }
    }
    path.push_back({s, ++next_var, false});
    RecTerm node;
    node.kind = RecTerm::Kind::Node;
    for (const auto& t : l.transitions(s)) node.edges.push_back({t.action.label, build(t.target)});
    const Frame frame = path.back();
    path.pop_back();
    return frame.used ? make_rec(frame.var, std::move(node)) : node;
  };

  return RecInputContext::make(build(q), states);
}

std::vector<Label> root_labels(const RecInputContext& c) {
  std::vector<Label> out;
  const RecTerm root = unfold(c.root());
  for (const auto& e : root.edges) out.push_back(e.label);
  return out;
}

RecInputContext consume(const RecInputContext& c, const Label& label) {
  const RecTerm root = unfold(c.root());
  if (root.kind == RecTerm::Kind::Hole) {
    throw ContextError(ContextErrorKind::RootIsHole, "cannot consume '" + label + "' from a bare state");
  }
  for (const auto& e : root.edges) {
    if (e.label == label) return RecInputContext::make(e.sub, c.assignment());
  }
  throw ContextError(ContextErrorKind::LabelNotAtRoot, "label '" + label + "' is not at the root");
}

RecInputContext graft(const RecInputContext& c,
                      const std::map<HoleIndex, RecInputContext>& expansion) {
  StateMap states;
  std::function<RecTerm(const RecTerm&)> walk = [&](const RecTerm& t) -> RecTerm {
    switch (t.kind) {
      case RecTerm::Kind::Hole: {
        auto it = expansion.find(t.hole);
        if (it == expansion.end()) {
          throw ContextError(ContextErrorKind::MissingExpansion,
                             "no expansion for hole " + std::to_string(t.hole));
        }
        const auto offset = static_cast<HoleIndex>(states.size());
        for (const auto& [j, q] : it->second.assignment()) states.emplace(j + offset, q);
        return shift_holes(it->second.root(), offset);
      }
      case RecTerm::Kind::Var:
        return t;
      case RecTerm::Kind::Rec:
        return make_rec(t.var, walk(t.body.front()));
      case RecTerm::Kind::Node: {
        RecTerm out;
        out.kind = RecTerm::Kind::Node;
        for (const auto& e : t.edges) out.edges.push_back({e.label, walk(e.sub)});
        return out;
      }
    }
    return t;
  };
  // Expansions are closed, so splicing them under binders cannot capture.
  return RecInputContext::make(walk(c.root()), states);
}

std::vector<std::pair<HoleIndex, StateId>> leaves(const RecInputContext& c) {
  return {c.assignment().begin(), c.assignment().end()};
}

RecInputContext map_states(const RecInputContext& c, const std::function<StateId(StateId)>& f) {
  StateMap states;
  for (const auto& [j, q] : c.assignment()) states.emplace(j, f(q));
  return RecInputContext::make(c.root(), states);
}

}  // namespace sessub
