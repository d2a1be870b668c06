#include "sessub/types.hpp"

#include <cassert>
#include <cctype>
#include <set>

namespace sessub {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

bool is_identifier(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && is_letter(text[i])) ++i;
  if (i == 0) return false;
  while (i < text.size() && is_digit(text[i])) ++i;
  return i == text.size();
}

SessionType::SessionType() : node_(end().node_) {}

SessionType::SessionType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SessionType SessionType::end() {
  static const auto node = std::make_shared<const Node>();
  return SessionType(node);
}

SessionType SessionType::var(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Var;
  node->name = std::move(name);
  return SessionType(std::move(node));
}

SessionType SessionType::rec(std::string var, SessionType body) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Rec;
  node->name = std::move(var);
  node->body.push_back(std::move(body));
  return SessionType(std::move(node));
}

SessionType SessionType::select(Branches branches) {
  assert(!branches.empty());
  auto node = std::make_shared<Node>();
  node->kind = Kind::Select;
  node->branches = std::move(branches);
  return SessionType(std::move(node));
}

SessionType SessionType::branch(Branches branches) {
  assert(!branches.empty());
  auto node = std::make_shared<Node>();
  node->kind = Kind::Branch;
  node->branches = std::move(branches);
  return SessionType(std::move(node));
}

SessionType::Kind SessionType::kind() const { return node_->kind; }
const std::string& SessionType::name() const { return node_->name; }
const SessionType& SessionType::body() const { return node_->body.front(); }
const SessionType::Branches& SessionType::branches() const { return node_->branches; }

bool operator==(const SessionType& a, const SessionType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case SessionType::Kind::End:
      return true;
    case SessionType::Kind::Var:
      return a.name() == b.name();
    case SessionType::Kind::Rec:
      return a.name() == b.name() && a.body() == b.body();
    case SessionType::Kind::Select:
    case SessionType::Kind::Branch:
      return a.branches() == b.branches();
  }
  return false;
}

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::DuplicateLabel: return "duplicate label";
    case ParseErrorKind::EmptyChoice: return "empty choice";
    case ParseErrorKind::FreeVariable: return "free variable";
    case ParseErrorKind::UnguardedRecursion: return "unguarded recursion";
  }
  return "error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t offset, std::size_t line,
                       std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                         to_string(kind) + ": " + message),
      kind_(kind),
      offset_(offset),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Rec, End, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Dot,
                 Plus, Amp, Bang, Query, Eof };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  SessionType parse_all() {
    SessionType t = parse_type({}, {});
    if (tok_.kind != Tok::Eof) fail(ParseErrorKind::Syntax, tok_.offset, "unexpected '" + tok_.text + "' after type");
    return t;
  }

 private:
  using Scope = std::vector<std::string>;
  using Unguarded = std::set<std::string>;

  [[noreturn]] void fail(ParseErrorKind kind, std::size_t offset, const std::string& msg) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(kind, offset, line, column, msg);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::Eof, "end of input", start};
      return;
    }
    const char c = src_[pos_];
    if (is_letter(c)) {
      while (pos_ < src_.size() && is_letter(src_[pos_])) ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      std::string word(src_.substr(start, pos_ - start));
      Tok kind = Tok::Ident;
      if (word == "rec") kind = Tok::Rec;
      if (word == "end") kind = Tok::End;
      tok_ = {kind, std::move(word), start};
      return;
    }
    Tok kind;
    switch (c) {
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ';': kind = Tok::Semi; break;
      case ',': kind = Tok::Comma; break;
      case '.': kind = Tok::Dot; break;
      case '+': kind = Tok::Plus; break;
      case '&': kind = Tok::Amp; break;
      case '!': kind = Tok::Bang; break;
      case '?': kind = Tok::Query; break;
      default:
        fail(ParseErrorKind::Syntax, start, std::string("unexpected character '") + c + "'");
    }
    ++pos_;
    tok_ = {kind, std::string(1, c), start};
  }

  Token expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(ParseErrorKind::Syntax, tok_.offset, std::string("expected ") + what + ", found '" + tok_.text + "'");
    Token t = tok_;
    advance();
    return t;
  }

  SessionType parse_type(const Scope& scope, const Unguarded& unguarded) {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::End:
        advance();
        return SessionType::end();
      case Tok::Ident: {
        advance();
        bool bound = false;
        for (const auto& v : scope) bound = bound || v == t.text;
        if (!bound) fail(ParseErrorKind::FreeVariable, t.offset, "variable '" + t.text + "' is not bound");
        if (unguarded.count(t.text)) {
          fail(ParseErrorKind::UnguardedRecursion, t.offset,
               "variable '" + t.text + "' must occur after a send or receive");
        }
        return SessionType::var(t.text);
      }
      case Tok::Rec: {
        advance();
        const Token var = expect(Tok::Ident, "recursion variable");
        expect(Tok::Dot, "'.'");
        Scope inner_scope = scope;
        inner_scope.push_back(var.text);
        Unguarded inner = unguarded;
        inner.insert(var.text);
        return SessionType::rec(var.text, parse_type(inner_scope, inner));
      }
      case Tok::Plus:
      case Tok::Amp: {
        advance();
        expect(Tok::LBrace, "'{'");
        if (tok_.kind == Tok::RBrace) fail(ParseErrorKind::EmptyChoice, tok_.offset, "choice has no branches");
        SessionType::Branches branches;
        std::set<Label> seen;
        for (;;) {
          const Token label = expect(Tok::Ident, "label");
          check_label(label, seen);
          expect(Tok::Semi, "';'");
          branches.emplace_back(label.text, parse_type(scope, {}));
          if (tok_.kind == Tok::Comma) {
            advance();
            continue;
          }
          expect(Tok::RBrace, "',' or '}'");
          break;
        }
        return t.kind == Tok::Plus ? SessionType::select(std::move(branches))
                                   : SessionType::branch(std::move(branches));
      }
      case Tok::Bang:
      case Tok::Query: {
        advance();
        const Token label = expect(Tok::Ident, "label");
        expect(Tok::Semi, "';'");
        SessionType::Branches branches;
        branches.emplace_back(label.text, parse_type(scope, {}));
        return t.kind == Tok::Bang ? SessionType::select(std::move(branches))
                                   : SessionType::branch(std::move(branches));
      }
      case Tok::LBracket: {
        advance();
        if (tok_.kind == Tok::RBracket) fail(ParseErrorKind::EmptyChoice, tok_.offset, "choice has no branches");
        if (tok_.kind != Tok::Bang && tok_.kind != Tok::Query) {
          fail(ParseErrorKind::Syntax, tok_.offset, "expected '!' or '?', found '" + tok_.text + "'");
        }
        const Tok polarity = tok_.kind;
        SessionType::Branches branches;
        std::set<Label> seen;
        for (;;) {
          if (tok_.kind != polarity) {
            fail(ParseErrorKind::Syntax, tok_.offset,
                 polarity == Tok::Bang ? "expected '!' (sends and receives cannot be mixed)"
                                       : "expected '?' (sends and receives cannot be mixed)");
          }
          advance();
          const Token label = expect(Tok::Ident, "label");
          check_label(label, seen);
          expect(Tok::Semi, "';'");
          branches.emplace_back(label.text, parse_type(scope, {}));
          if (tok_.kind == Tok::Comma) {
            advance();
            continue;
          }
          expect(Tok::RBracket, "',' or ']'");
          break;
        }
        return polarity == Tok::Bang ? SessionType::select(std::move(branches))
                                     : SessionType::branch(std::move(branches));
      }
      default:
        fail(ParseErrorKind::Syntax, t.offset, "expected a session type, found '" + t.text + "'");
    }
  }

  void check_label(const Token& label, std::set<Label>& seen) const {
    if (!seen.insert(label.text).second) {
      fail(ParseErrorKind::DuplicateLabel, label.offset, "label '" + label.text + "' occurs twice");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{Tok::Eof, "", 0};
};

void render_into(const SessionType& t, std::string& out) {
  switch (t.kind()) {
    case SessionType::Kind::End:
      out += "end";
      return;
    case SessionType::Kind::Var:
      out += t.name();
      return;
    case SessionType::Kind::Rec:
      out += "rec ";
      out += t.name();
      out += '.';
      render_into(t.body(), out);
      return;
    case SessionType::Kind::Select:
    case SessionType::Kind::Branch: {
      out += t.kind() == SessionType::Kind::Select ? "+{" : "&{";
      bool first = true;
      for (const auto& [label, cont] : t.branches()) {
        if (!first) out += ", ";
        first = false;
        out += label;
        out += ';';
        render_into(cont, out);
      }
      out += '}';
      return;
    }
  }
}

}  // namespace

SessionType parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const SessionType& t) {
  std::string out;
  render_into(t, out);
  return out;
}

SessionType dual(const SessionType& t) {
  switch (t.kind()) {
    case SessionType::Kind::End:
    case SessionType::Kind::Var:
      return t;
    case SessionType::Kind::Rec:
      return SessionType::rec(t.name(), dual(t.body()));
    case SessionType::Kind::Select:
    case SessionType::Kind::Branch: {
      SessionType::Branches branches;
      branches.reserve(t.branches().size());
      for (const auto& [label, cont] : t.branches()) branches.emplace_back(label, dual(cont));
      return t.kind() == SessionType::Kind::Select ? SessionType::branch(std::move(branches))
                                                   : SessionType::select(std::move(branches));
    }
  }
  return t;
}

SessionType substitute(const SessionType& t, const std::string& var,
                       const SessionType& replacement) {
  switch (t.kind()) {
    case SessionType::Kind::End:
      return t;
    case SessionType::Kind::Var:
      return t.name() == var ? replacement : t;
    case SessionType::Kind::Rec:
      if (t.name() == var) return t;  // shadowed
      return SessionType::rec(t.name(), substitute(t.body(), var, replacement));
    case SessionType::Kind::Select:
    case SessionType::Kind::Branch: {
      SessionType::Branches branches;
      branches.reserve(t.branches().size());
      for (const auto& [label, cont] : t.branches()) {
        branches.emplace_back(label, substitute(cont, var, replacement));
      }
      return t.kind() == SessionType::Kind::Select ? SessionType::select(std::move(branches))
                                                   : SessionType::branch(std::move(branches));
    }
  }
  return t;
}

SessionType unfold(const SessionType& t) {
  SessionType cur = t;
  while (cur.kind() == SessionType::Kind::Rec) cur = substitute(cur.body(), cur.name(), cur);
  return cur;
}

}  // namespace sessub
