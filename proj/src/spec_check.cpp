#include <algorithm>
#include <map>
#include <set>

#include "bigsos/spec.hpp"

namespace bigsos {

namespace {

enum class VarSort { State, Label, Param, Weight };

class RuleChecker {
 public:
  RuleChecker(const Spec& spec, const Rule& rule, std::vector<Diagnostic>& out)
      : spec_(spec), rule_(rule), out_(out) {}

  void run() {
    head();
    premises();
    conclusion();
  }

 private:
  void report(std::string msg) { out_.push_back({rule_.name, std::move(msg), rule_.pos}); }

  bool is_nat_domain() const { return spec_.kind.labels.naturals; }

  void bind(const std::string& v, VarSort sort) { vars_.emplace(v, sort); }

  void head() {
    const OpDecl* op = spec_.sig.find(rule_.head_op);
    if (!op) {
      report("unknown operator '" + rule_.head_op + "'");
    } else {
      if (op->arity != rule_.head_vars.size())
        report("operator '" + op->name + "' expects " + std::to_string(op->arity) +
               " argument(s), rule head has " + std::to_string(rule_.head_vars.size()));
      if (op->param_count != rule_.param_vars.size())
        report("operator '" + op->name + "' expects " + std::to_string(op->param_count) +
               " parameter(s), rule head has " + std::to_string(rule_.param_vars.size()));
    }
    std::set<std::string> seen;
    bool distinct = true;
    for (const auto& v : rule_.head_vars) distinct = seen.insert(v).second && distinct;
    for (const auto& v : rule_.param_vars) distinct = seen.insert(v).second && distinct;
    if (!distinct) report("head variables not distinct");
    for (const auto& v : seen)
      if (spec_.sig.contains(v)) report("variable '" + v + "' shadows an operator");
    for (const auto& v : rule_.head_vars) bind(v, VarSort::State);
    for (const auto& v : rule_.param_vars) bind(v, VarSort::Param);
  }

  void check_literal(const Label& l) {
    if (!spec_.kind.labels.contains(l)) report("label '" + to_string(l) + "' not in label set");
  }

  void premises() {
    for (const auto& p : rule_.premises) {
      auto src = vars_.find(p.source);
      if (src == vars_.end() || src->second != VarSort::State)
        report("unbound premise source '" + p.source + "'");
      if (p.label.literal) {
        check_literal(*p.label.literal);
      } else {
        auto it = vars_.find(p.label.var);
        if (it == vars_.end()) {
          if (!p.negative()) bind(p.label.var, VarSort::Label);
        } else if (it->second != VarSort::Label && it->second != VarSort::Param) {
          report("label variable '" + p.label.var + "' clashes with another variable");
        }
      }
      if (p.weight_var) {
        if (spec_.kind.functor != Functor::Weighted)
          report("weight binding requires a weighted behaviour");
        if (p.negative()) report("negative premise cannot bind a weight");
        if (vars_.count(*p.weight_var))
          report("weight variable '" + *p.weight_var + "' is not fresh");
        else
          bind(*p.weight_var, VarSort::Weight);
      }
      if (p.target) {
        if (vars_.count(*p.target) || *p.target == p.source)
          report("premise target '" + *p.target + "' is not fresh");
        else
          bind(*p.target, VarSort::State);
        if (spec_.sig.contains(*p.target))
          report("variable '" + *p.target + "' shadows an operator");
      }
    }
  }

  // Label and parameter expressions evaluate to labels.
  void label_expr(const Expr& e, bool param_position) {
    switch (e.op()) {
      case Expr::Op::Nat:
        if (!param_position) check_literal(Label(e.nat_value()));
        return;
      case Expr::Op::Real: report("real number in label expression"); return;
      case Expr::Op::Symbol:
        if (param_position) report("operator parameter must be a natural number");
        return;
      case Expr::Op::Var: {
        auto it = vars_.find(e.name());
        if (it == vars_.end() || (it->second != VarSort::Label && it->second != VarSort::Param))
          report("unbound label variable '" + e.name() + "'");
        return;
      }
      default:
        if (!is_nat_domain() && !param_position)
          report("label arithmetic requires natural-number labels");
        for (const auto& o : e.operands()) label_expr(o, param_position);
    }
  }

  void weight_expr(const Expr& e) {
    switch (e.op()) {
      case Expr::Op::Nat:
      case Expr::Op::Real: return;
      case Expr::Op::Symbol: report("symbol in weight expression"); return;
      case Expr::Op::Var: {
        auto it = vars_.find(e.name());
        if (it == vars_.end() || it->second != VarSort::Weight)
          report("unbound weight variable '" + e.name() + "'");
        return;
      }
      default:
        for (const auto& o : e.operands()) weight_expr(o);
    }
  }

  void target(const TermTemplate& t) {
    if (t.is_var()) {
      auto it = vars_.find(t.name());
      if (it == vars_.end() || it->second != VarSort::State)
        report("conclusion uses unbound variable '" + t.name() + "'");
      return;
    }
    const OpDecl* op = spec_.sig.find(t.name());
    if (!op) {
      report("unknown operator '" + t.name() + "' in conclusion");
    } else if (op->arity != t.args().size() || op->param_count != t.params().size()) {
      report("operator '" + t.name() + "' used with wrong arity or parameter count in conclusion");
    }
    for (const auto& p : t.params()) label_expr(p, true);
    for (const auto& a : t.args()) target(a);
  }

  void conclusion() {
    label_expr(rule_.concl_label, false);
    if (rule_.concl_weight) {
      if (spec_.kind.functor != Functor::Weighted)
        report("conclusion weight requires a weighted behaviour");
      weight_expr(*rule_.concl_weight);
    }
    target(rule_.concl_target);
  }

  const Spec& spec_;
  const Rule& rule_;
  std::vector<Diagnostic>& out_;
  std::map<std::string, VarSort> vars_;
};

void template_params(const TermTemplate& t, std::set<Nat>& out) {
  if (t.is_var()) return;
  for (const auto& p : t.params())
    if (p.op() == Expr::Op::Nat) out.insert(p.nat_value());
  for (const auto& a : t.args()) template_params(a, out);
}

void expr_labels(const Expr& e, std::set<Label>& out) {
  if (e.op() == Expr::Op::Nat) out.insert(Label(e.nat_value()));
  if (e.op() == Expr::Op::Symbol) out.insert(Label(e.name()));
  for (const auto& o : e.operands()) expr_labels(o, out);
}

}  // namespace

std::vector<Diagnostic> validate_spec(const Spec& spec) {
  std::vector<Diagnostic> out;
  if (!spec.kind.labels.naturals && spec.kind.labels.finite.empty())
    out.push_back({"", "label set is empty", {}});
  for (const auto& r : spec.rules) RuleChecker(spec, r, out).run();
  return out;
}

MonotonicityVerdict check_monotone(const Spec& spec) {
  MonotonicityVerdict v;
  for (const auto& r : spec.rules) {
    bool negative = std::any_of(r.premises.begin(), r.premises.end(),
                                [](const Premise& p) { return p.negative(); });
    if (negative) {
      v.monotone = false;
      v.offending_rules.push_back(r.name);
    }
  }
  return v;
}

std::size_t lookahead_depth(const Rule& rule) {
  std::map<std::string, std::size_t> depth;
  for (const auto& v : rule.head_vars) depth[v] = 0;
  std::size_t result = 0;
  for (const auto& p : rule.premises) {
    auto it = depth.find(p.source);
    std::size_t d = it == depth.end() ? 0 : it->second;
    result = std::max(result, d + 1);
    if (p.target) depth[*p.target] = d + 1;
  }
  return result;
}

std::set<Nat> literal_params(const Spec& spec) {
  std::set<Nat> out;
  for (const auto& r : spec.rules) template_params(r.concl_target, out);
  return out;
}

std::set<Label> literal_labels(const Spec& spec) {
  std::set<Label> out;
  for (const auto& r : spec.rules) {
    for (const auto& p : r.premises)
      if (p.label.literal) out.insert(*p.label.literal);
    expr_labels(r.concl_label, out);
  }
  return out;
}

}  // namespace bigsos
