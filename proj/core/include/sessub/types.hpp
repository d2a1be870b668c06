#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sessub {

/// A message label: one or more ASCII letters optionally followed by digits.
using Label = std::string;

bool is_identifier(std::string_view text);

/// Two-party session type without payloads.
///
/// Values are immutable and cheap to copy; subterms are shared. Equality is
/// syntactic (recursion variables are compared verbatim, no alpha-renaming).
class SessionType {
 public:
  enum class Kind { Select, Branch, Rec, Var, End };
  using Branches = std::vector<std::pair<Label, SessionType>>;

  SessionType();  // end

  static SessionType end();
  static SessionType var(std::string name);
  static SessionType rec(std::string var, SessionType body);
  static SessionType select(Branches branches);
  static SessionType branch(Branches branches);

  Kind kind() const;
  bool is_choice() const { return kind() == Kind::Select || kind() == Kind::Branch; }

  /// Variable name for Rec and Var nodes.
  const std::string& name() const;
  /// Body of a Rec node.
  const SessionType& body() const;
  /// Branches of a Select or Branch node, in source order.
  const Branches& branches() const;

  friend bool operator==(const SessionType& a, const SessionType& b);

 private:
  struct Node;
  explicit SessionType(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

enum class ParseErrorKind {
  Syntax,
  DuplicateLabel,
  EmptyChoice,
  FreeVariable,
  UnguardedRecursion,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, std::size_t line, std::size_t column,
             const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  /// Byte offset into the input.
  std::size_t offset() const { return offset_; }
  /// 1-based line and column.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

/// Parses the concrete syntax: `+{l;T, ...}`, `&{l;T, ...}`, `rec X.T`, `X`,
/// `end`, the raw forms `[!l;T, ...]` / `[?l;T, ...]` and the singletons
/// `!l;T` / `?l;T`. The result is closed, guarded and has distinct labels.
SessionType parse(std::string_view text);

/// Canonical text in the `+` / `&` / `rec` syntax; re-parses to the same AST.
std::string render(const SessionType& t);

/// Swaps Select and Branch throughout.
SessionType dual(const SessionType& t);

/// Capture-free substitution of `replacement` for free occurrences of `var`.
/// `replacement` must be closed.
SessionType substitute(const SessionType& t, const std::string& var,
                       const SessionType& replacement);

/// Unfolds top-level recursion until the head is a choice or `end`.
SessionType unfold(const SessionType& t);

// Implementation detail, kept here so accessors can be inlined.
struct SessionType::Node {
  Kind kind = Kind::End;
  std::string name;
  Branches branches;
  std::vector<SessionType> body;  // one element for Rec
};

}  // namespace sessub
