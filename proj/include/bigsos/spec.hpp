#pragma once

// The rule language: positive-lookahead premises, complex conclusions, and
// the well-formedness and monotonicity checks on rule banks.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bigsos/behaviour.hpp"
#include "bigsos/label.hpp"
#include "bigsos/term.hpp"

namespace bigsos {

/// Arithmetic over labels, operator parameters and weights.
class Expr {
 public:
  enum class Op { Nat, Real, Symbol, Var, Add, Mul, Sup };

  static Expr nat(Nat n);
  static Expr real(double w);
  static Expr symbol(std::string s);
  static Expr var(std::string name);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr sup(std::vector<Expr> operands);

  Op op() const { return node_->op; }
  Nat nat_value() const { return node_->nat; }
  double real_value() const { return node_->real; }
  /// Symbol text or variable name.
  const std::string& name() const { return node_->name; }
  const std::vector<Expr>& operands() const { return node_->operands; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Op op = Op::Nat;
    Nat nat = 0;
    double real = 0;
    std::string name;
    std::vector<Expr> operands;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Expr& e);
void collect_vars(const Expr& e, std::vector<std::string>& out);

/// Conclusion target: a term whose operator parameters are expressions.
class TermTemplate {
 public:
  static TermTemplate var(std::string name);
  static TermTemplate app(std::string op, std::vector<Expr> params, std::vector<TermTemplate> args);

  bool is_var() const { return node_->is_var; }
  const std::string& name() const { return node_->name; }
  const std::vector<Expr>& params() const { return node_->params; }
  const std::vector<TermTemplate>& args() const { return node_->args; }

  friend bool operator==(const TermTemplate& a, const TermTemplate& b);

 private:
  struct Node {
    bool is_var = false;
    std::string name;
    std::vector<Expr> params;
    std::vector<TermTemplate> args;
  };
  explicit TermTemplate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const TermTemplate& t);

struct LabelPattern {
  std::optional<Label> literal;  // set for literals
  std::string var;               // set for label variables

  bool is_var() const { return !literal; }
  friend bool operator==(const LabelPattern&, const LabelPattern&) = default;
};

std::string to_string(const LabelPattern& p);

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// `source -label-> target` or, when target is empty, `source -label-/->`.
/// Positive premises of weighted specs may bind the transition weight.
struct Premise {
  std::string source;
  LabelPattern label;
  std::optional<std::string> target;
  std::optional<std::string> weight_var;

  bool negative() const { return !target; }
  friend bool operator==(const Premise&, const Premise&) = default;
};

struct Rule {
  std::string name;
  std::string head_op;
  std::vector<std::string> head_vars;
  std::vector<std::string> param_vars;
  std::vector<Premise> premises;
  Expr concl_label = Expr::nat(0);
  std::optional<Expr> concl_weight;
  TermTemplate concl_target = TermTemplate::var("_");
  SourcePos pos;

  friend bool operator==(const Rule& a, const Rule& b);
};

struct Spec {
  BehaviourKind kind;
  Signature sig;
  std::vector<Rule> rules;

  friend bool operator==(const Spec&, const Spec&) = default;
};

/// Parses a `.sos` file. Throws SyntaxError.
Spec parse_spec(std::string_view text);
Spec load_spec(const std::string& path);

/// Renders a spec in the `.sos` syntax; parse_spec(print_spec(s)) == s.
std::string print_spec(const Spec& spec);
std::string print_rule(const Rule& rule);

struct Diagnostic {
  std::string rule;
  std::string message;
  SourcePos pos;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Well-formedness of every rule; empty iff the spec is valid.
std::vector<Diagnostic> validate_spec(const Spec& spec);

struct MonotonicityVerdict {
  bool monotone = true;
  std::vector<std::string> offending_rules;
};

/// Syntactic positivity: a rule with a negative premise is offending.
MonotonicityVerdict check_monotone(const Spec& spec);

/// Longest premise chain from a head variable, counting a negative premise as
/// one inspection step of its source. Axioms have depth 0.
std::size_t lookahead_depth(const Rule& rule);

/// Parameter values written literally in conclusion templates, for universe
/// enumeration.
std::set<Nat> literal_params(const Spec& spec);

/// Labels written literally in the spec.
std::set<Label> literal_labels(const Spec& spec);

}  // namespace bigsos
