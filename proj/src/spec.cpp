#include <charconv>
#include <cmath>
#include <sstream>

#include "bigsos/spec.hpp"

namespace bigsos {

Expr Expr::nat(Nat n) {
  auto node = std::make_shared<Node>();
  node->op = Op::Nat;
  node->nat = n;
  return Expr(std::move(node));
}

Expr Expr::real(double w) {
  auto node = std::make_shared<Node>();
  node->op = Op::Real;
  node->real = w;
  return Expr(std::move(node));
}

Expr Expr::symbol(std::string s) {
  auto node = std::make_shared<Node>();
  node->op = Op::Symbol;
  node->name = std::move(s);
  return Expr(std::move(node));
}

Expr Expr::var(std::string name) {
  auto node = std::make_shared<Node>();
  node->op = Op::Var;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->operands = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(node));
}

Expr Expr::sup(std::vector<Expr> operands) {
  auto node = std::make_shared<Node>();
  node->op = Op::Sup;
  node->operands = std::move(operands);
  return Expr(std::move(node));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  switch (x.op) {
    case Expr::Op::Nat: return x.nat == y.nat;
    case Expr::Op::Real: return x.real == y.real || (std::isnan(x.real) && std::isnan(y.real));
    case Expr::Op::Symbol:
    case Expr::Op::Var: return x.name == y.name;
    default: return x.operands == y.operands;
  }
}

namespace {

std::string real_text(double w) {
  if (std::isinf(w)) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, w);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

int precedence(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::Add: return 1;
    case Expr::Op::Mul: return 2;
    default: return 3;
  }
}

void print_expr(std::ostream& os, const Expr& e, int min_prec) {
  const bool parens = precedence(e) < min_prec;
  if (parens) os << '(';
  switch (e.op()) {
    case Expr::Op::Nat: os << e.nat_value(); break;
    case Expr::Op::Real: os << real_text(e.real_value()); break;
    case Expr::Op::Symbol:
    case Expr::Op::Var: os << e.name(); break;
    case Expr::Op::Add:
      print_expr(os, e.operands()[0], 1);
      os << '+';
      print_expr(os, e.operands()[1], 2);
      break;
    case Expr::Op::Mul:
      print_expr(os, e.operands()[0], 2);
      os << '*';
      print_expr(os, e.operands()[1], 3);
      break;
    case Expr::Op::Sup:
      os << "sup(";
      for (std::size_t i = 0; i < e.operands().size(); ++i) {
        if (i) os << ',';
        print_expr(os, e.operands()[i], 0);
      }
      os << ')';
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.op() == Expr::Op::Var) {
    out.push_back(e.name());
    return;
  }
  for (const auto& o : e.operands()) collect_vars(o, out);
}

TermTemplate TermTemplate::var(std::string name) {
  auto node = std::make_shared<Node>();
  node->is_var = true;
  node->name = std::move(name);
  return TermTemplate(std::move(node));
}

TermTemplate TermTemplate::app(std::string op, std::vector<Expr> params,
                               std::vector<TermTemplate> args) {
  auto node = std::make_shared<Node>();
  node->name = std::move(op);
  node->params = std::move(params);
  node->args = std::move(args);
  return TermTemplate(std::move(node));
}

bool operator==(const TermTemplate& a, const TermTemplate& b) {
  if (a.node_ == b.node_) return true;
  return a.is_var() == b.is_var() && a.name() == b.name() && a.params() == b.params() &&
         a.args() == b.args();
}

std::string to_string(const TermTemplate& t) {
  std::string s = t.name();
  if (t.is_var()) return s;
  if (!t.params().empty()) {
    s += '[';
    for (std::size_t i = 0; i < t.params().size(); ++i) {
      if (i) s += ',';
      s += to_string(t.params()[i]);
    }
    s += ']';
  }
  if (!t.args().empty()) {
    s += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) s += ',';
      s += to_string(t.args()[i]);
    }
    s += ')';
  }
  return s;
}

std::string to_string(const LabelPattern& p) { return p.literal ? to_string(*p.literal) : p.var; }

bool operator==(const Rule& a, const Rule& b) {
  return a.name == b.name && a.head_op == b.head_op && a.head_vars == b.head_vars &&
         a.param_vars == b.param_vars && a.premises == b.premises &&
         a.concl_label == b.concl_label && a.concl_weight == b.concl_weight &&
         a.concl_target == b.concl_target;
}

std::string print_rule(const Rule& r) {
  std::ostringstream os;
  os << "rule " << r.name << " :";
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    const auto& p = r.premises[i];
    os << (i ? ", " : " ") << p.source << " -" << to_string(p.label);
    if (p.weight_var) os << '@' << *p.weight_var;
    if (p.target)
      os << "-> " << *p.target;
    else
      os << "-/->";
  }
  os << " |- " << r.head_op;
  if (!r.param_vars.empty()) {
    os << '[';
    for (std::size_t i = 0; i < r.param_vars.size(); ++i) os << (i ? "," : "") << r.param_vars[i];
    os << ']';
  }
  if (!r.head_vars.empty()) {
    os << '(';
    for (std::size_t i = 0; i < r.head_vars.size(); ++i) os << (i ? "," : "") << r.head_vars[i];
    os << ')';
  }
  os << " -" << to_string(r.concl_label);
  if (r.concl_weight) os << '@' << to_string(*r.concl_weight);
  os << "-> " << to_string(r.concl_target);
  return os.str();
}

std::string print_spec(const Spec& spec) {
  std::ostringstream os;
  os << "behaviour " << to_string(spec.kind.functor) << " labels ";
  if (spec.kind.labels.naturals) {
    os << "nat";
  } else {
    for (std::size_t i = 0; i < spec.kind.labels.finite.size(); ++i)
      os << (i ? ", " : "") << to_string(spec.kind.labels.finite[i]);
  }
  os << '\n';
  if (!spec.sig.ops().empty()) {
    os << "ops ";
    for (std::size_t i = 0; i < spec.sig.ops().size(); ++i) {
      const auto& op = spec.sig.ops()[i];
      os << (i ? ", " : "") << op.name << '/' << op.arity;
      if (op.param_count) os << '[' << op.param_count << ']';
    }
    os << '\n';
  }
  for (const auto& r : spec.rules) os << print_rule(r) << '\n';
  return os.str();
}

}  // namespace bigsos
