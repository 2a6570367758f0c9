#pragma once

// First-order terms over a finite signature with natural-number operator
// parameters. Terms double as the free-monad carrier: a Var node is a
// generator (the unit), substitution is the multiplication.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bigsos {

using Nat = std::uint64_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t col);
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

struct OpDecl {
  std::string name;
  std::size_t arity = 0;
  std::size_t param_count = 0;

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OpDecl> ops);

  /// Throws Error on a duplicate operator name.
  void add(OpDecl op);
  const OpDecl* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const std::vector<OpDecl>& ops() const { return ops_; }

  friend bool operator==(const Signature& a, const Signature& b) { return a.ops_ == b.ops_; }

 private:
  std::vector<OpDecl> ops_;
};

class Term {
 public:
  static Term var(std::string name);
  static Term app(std::string op, std::vector<Nat> params = {}, std::vector<Term> args = {});

  bool is_var() const { return node_->is_var; }
  /// Variable name or operator name.
  const std::string& name() const { return node_->name; }
  std::span<const Nat> params() const { return node_->params; }
  std::span<const Term> args() const { return node_->args; }

  /// Height of the term tree; leaves have height 1. This is the size measure
  /// used for universe caps and for the canonical order.
  std::size_t height() const { return node_->height; }
  std::size_t node_count() const { return node_->nodes; }
  bool is_closed() const { return node_->closed; }

  /// Canonical order: height, then name, then variables before applications,
  /// then parameters, then arguments lexicographically.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var = false;
    std::string name;
    std::vector<Nat> params;
    std::vector<Term> args;
    std::size_t height = 1;
    std::size_t nodes = 1;
    std::size_t hash = 0;
    bool closed = true;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

std::string to_string(const Term& t);
std::ostream& operator<<(std::ostream& os, const Term& t);

/// Parses the concrete term syntax. An identifier that names an operator of
/// `sig` (or is followed by parameters or arguments) is an application; any
/// other bare identifier is a variable. Arity and parameter counts are checked.
Term parse_term(std::string_view text, const Signature& sig);

/// Like parse_term but rejects variables (unknown bare identifiers).
Term parse_closed_term(std::string_view text, const Signature& sig);

/// Checks arities and parameter counts of every application against `sig`.
/// Returns a description of the first problem, if any.
std::optional<std::string> check_term(const Term& t, const Signature& sig);

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& var);
  const std::string& variable() const { return var_; }

 private:
  std::string var_;
};

using Substitution = std::map<std::string, Term, std::less<>>;

/// Homomorphic replacement of variables. Throws UnboundVariable if a variable
/// of `t` is not bound in `s`.
Term substitute(const Term& t, const Substitution& s);

/// Variables of `t` in first-occurrence order.
std::vector<std::string> variables(const Term& t);

/// All subterms of `t`, including `t` itself.
void collect_subterms(const Term& t, std::set<Term>& out);

struct EnumerationPolicy {
  std::size_t max_size = 12;   // maximal term height
  std::size_t max_count = 500;
};

/// Enumerates closed terms (plus the given generator variables, treated as
/// leaves) in canonical order, cut at the policy bounds. Seeds and all their
/// subterms are always contained; the remaining room up to max_count is filled
/// with the smallest enumerated terms. Parameterized operators are instantiated
/// only with values from `param_values`.
std::vector<Term> enumerate_universe(const Signature& sig, std::span<const Term> seeds,
                                     const EnumerationPolicy& policy,
                                     const std::set<Nat>& param_values = {},
                                     std::span<const std::string> generators = {});

}  // namespace bigsos
