#include "bigsos/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <ostream>
#include <sstream>

namespace bigsos {

SyntaxError::SyntaxError(const std::string& msg, std::size_t line, std::size_t col)
    : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}

UnboundVariable::UnboundVariable(const std::string& var)
    : Error("unbound variable '" + var + "'"), var_(var) {}

Signature::Signature(std::vector<OpDecl> ops) {
  for (auto& op : ops) add(std::move(op));
}

void Signature::add(OpDecl op) {
  if (contains(op.name)) throw Error("duplicate operator '" + op.name + "'");
  ops_.push_back(std::move(op));
}

const OpDecl* Signature::find(std::string_view name) const {
  for (const auto& op : ops_)
    if (op.name == name) return &op;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Term

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->hash = std::hash<std::string>{}(name) * 31 + 7;
  n->name = std::move(name);
  n->closed = false;
  return Term(std::move(n));
}

Term Term::app(std::string op, std::vector<Nat> params, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  std::size_t h = std::hash<std::string>{}(op);
  for (Nat p : params) h = h * 1000003 ^ std::hash<Nat>{}(p);
  for (const auto& a : args) {
    n->height = std::max(n->height, a.height() + 1);
    n->nodes += a.node_count();
    n->closed = n->closed && a.is_closed();
    h = h * 1000003 ^ a.node_->hash;
  }
  n->hash = h;
  n->name = std::move(op);
  n->params = std::move(params);
  n->args = std::move(args);
  return Term(std::move(n));
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.height() <=> b.height(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = std::lexicographical_compare_three_way(a.params().begin(), a.params().end(),
                                                      b.params().begin(), b.params().end());
      c != 0)
    return c;
  return std::lexicographical_compare_three_way(a.args().begin(), a.args().end(), b.args().begin(),
                                                b.args().end());
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return (a <=> b) == 0;
}

namespace {

void print(std::ostream& os, const Term& t) {
  os << t.name();
  if (t.is_var()) return;
  if (!t.params().empty()) {
    os << '[';
    for (std::size_t i = 0; i < t.params().size(); ++i) os << (i ? "," : "") << t.params()[i];
    os << ']';
  }
  if (!t.args().empty()) {
    os << '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) os << ',';
      print(os, t.args()[i]);
    }
    os << ')';
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print(os, t);
  return os;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig, bool allow_vars)
      : text_(text), sig_(sig), allow_vars_(allow_vars) {}

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(msg, line, col);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Nat nat() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected natural number");
    Nat v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<Nat>(text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  Term term() {
    std::size_t start = (skip_ws(), pos_);
    std::string name = ident();
    std::vector<Nat> params;
    std::vector<Term> args;
    bool has_params = false, has_args = false;
    if (accept('[')) {
      has_params = true;
      do params.push_back(nat());
      while (accept(','));
      expect(']');
    }
    if (accept('(')) {
      has_args = true;
      do args.push_back(term());
      while (accept(','));
      expect(')');
    }
    const OpDecl* op = sig_.find(name);
    if (!op) {
      if (has_params || has_args || !allow_vars_) {
        pos_ = start;
        fail("unknown operator '" + name + "'");
      }
      return Term::var(std::move(name));
    }
    if (args.size() != op->arity) {
      pos_ = start;
      fail("operator '" + name + "' expects " + std::to_string(op->arity) + " argument(s), got " +
           std::to_string(args.size()));
    }
    if (params.size() != op->param_count) {
      pos_ = start;
      fail("operator '" + name + "' expects " + std::to_string(op->param_count) +
           " parameter(s), got " + std::to_string(params.size()));
    }
    return Term::app(std::move(name), std::move(params), std::move(args));
  }

  std::string_view text_;
  const Signature& sig_;
  bool allow_vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
  return TermParser(text, sig, true).parse();
}

Term parse_closed_term(std::string_view text, const Signature& sig) {
  return TermParser(text, sig, false).parse();
}

std::optional<std::string> check_term(const Term& t, const Signature& sig) {
  if (t.is_var()) return std::nullopt;
  const OpDecl* op = sig.find(t.name());
  if (!op) return "unknown operator '" + t.name() + "'";
  if (op->arity != t.args().size())
    return "operator '" + t.name() + "' expects " + std::to_string(op->arity) + " argument(s)";
  if (op->param_count != t.params().size())
    return "operator '" + t.name() + "' expects " + std::to_string(op->param_count) +
           " parameter(s)";
  for (const auto& a : t.args())
    if (auto e = check_term(a, sig)) return e;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Substitution

Term substitute(const Term& t, const Substitution& s) {
  if (t.is_closed()) return t;
  if (t.is_var()) {
    auto it = s.find(t.name());
    if (it == s.end()) throw UnboundVariable(t.name());
    return it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, s));
  return Term::app(t.name(), {t.params().begin(), t.params().end()}, std::move(args));
}

namespace {
void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_closed()) return;
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}
}  // namespace

std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

void collect_subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  for (const auto& a : t.args()) collect_subterms(a, out);
}

// ---------------------------------------------------------------------------
// Universe enumeration

namespace {

// Calls emit() for every parameter tuple of length n over `values`, in
// lexicographic order. Stops early when emit returns false.
bool for_each_tuple(std::size_t n, std::span<const Nat> values,
                    const std::function<bool(const std::vector<Nat>&)>& emit) {
  std::vector<Nat> tuple(n);
  if (n == 0) return emit(tuple);
  if (values.empty()) return true;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) tuple[i] = values[idx[i]];
    if (!emit(tuple)) return false;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < values.size()) break;
      idx[k] = 0;
      if (k == 0) return true;
    }
  }
}

}  // namespace

std::vector<Term> enumerate_universe(const Signature& sig, std::span<const Term> seeds,
                                     const EnumerationPolicy& policy,
                                     const std::set<Nat>& param_values,
                                     std::span<const std::string> generators) {
  if (policy.max_size == 0 || policy.max_count == 0)
    throw Error("universe policy bounds must be positive");

  std::set<Term> result;
  for (const auto& s : seeds) {
    for (const auto& v : variables(s))
      if (std::find(generators.begin(), generators.end(), v) == generators.end())
        throw Error("universe seed '" + to_string(s) + "' is not closed");
    collect_subterms(s, result);
  }

  std::vector<OpDecl> ops = sig.ops();
  std::sort(ops.begin(), ops.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  const std::vector<Nat> pvals(param_values.begin(), param_values.end());

  // Levels by height; `below` holds all enumerated terms of smaller height in
  // canonical order.
  std::vector<Term> below;
  std::size_t room = policy.max_count > result.size() ? policy.max_count - result.size() : 0;
  for (std::size_t h = 1; h <= policy.max_size && room > 0; ++h) {
    std::vector<Term> level;
    auto take = [&](Term t) {
      if (result.insert(t).second) --room;
      level.push_back(std::move(t));
      return room > 0;
    };
    bool more = true;
    if (h == 1) {
      std::vector<std::string> gens(generators.begin(), generators.end());
      std::sort(gens.begin(), gens.end());
      // Leaves interleave by name; variables sort before applications of the
      // same name, which cannot occur since generators avoid operator names.
      std::vector<Term> leaves;
      for (const auto& g : gens) leaves.push_back(Term::var(g));
      for (const auto& op : ops) {
        if (op.arity != 0) continue;
        for_each_tuple(op.param_count, pvals, [&](const std::vector<Nat>& p) {
          leaves.push_back(Term::app(op.name, p));
          return true;
        });
      }
      std::sort(leaves.begin(), leaves.end());
      for (auto& l : leaves)
        if (!(more = take(std::move(l)))) break;
    } else {
      // First index in `below` with height h-1: tuples must use at least one.
      std::size_t first_top = below.size();
      while (first_top > 0 && below[first_top - 1].height() == h - 1) --first_top;
      if (first_top == below.size()) break;
      for (const auto& op : ops) {
        if (op.arity == 0 || !more) continue;
        more = for_each_tuple(op.param_count, pvals, [&](const std::vector<Nat>& p) {
          std::vector<std::size_t> idx(op.arity, 0);
          while (true) {
            bool tall = false;
            for (auto i : idx) tall = tall || i >= first_top;
            if (tall) {
              std::vector<Term> args;
              args.reserve(op.arity);
              for (auto i : idx) args.push_back(below[i]);
              if (!take(Term::app(op.name, p, std::move(args)))) return false;
            }
            std::size_t k = op.arity;
            while (k > 0) {
              --k;
              if (++idx[k] < below.size()) break;
              idx[k] = 0;
              if (k == 0) return true;
            }
          }
        });
      }
    }
    below.insert(below.end(), level.begin(), level.end());
    if (level.empty()) break;
  }
  return {result.begin(), result.end()};
}

}  // namespace bigsos
