#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bigsos/spec.hpp"

namespace bigsos {

namespace {

enum class Tok {
  Ident,
  Nat,
  Real,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Slash,
  Plus,
  Star,
  At,
  Dash,
  Arrow,     // ->
  NegArrow,  // -/->
  Turnstile,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident:
    case Tok::Nat:
    case Tok::Real: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || starts("//")) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    std::size_t start = i;
    auto punct = [&](Tok k, std::size_t n) {
      t.kind = k;
      t.text = std::string(src.substr(i, n));
      advance(n);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' ||
                                src[i] == '\''))
        advance(1);
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(start, i - start));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
      t.kind = Tok::Nat;
      if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        t.kind = Tok::Real;
        advance(1);
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          t.kind = Tok::Real;
          advance(j - i);
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) advance(1);
        }
      }
      t.text = std::string(src.substr(start, i - start));
    } else if (starts("-/->")) {
      punct(Tok::NegArrow, 4);
    } else if (starts("->")) {
      punct(Tok::Arrow, 2);
    } else if (starts("|-")) {
      punct(Tok::Turnstile, 2);
    } else if (starts("\xE2\x8A\xA2")) {  // U+22A2
      punct(Tok::Turnstile, 3);
    } else if (starts("\xC3\x97")) {  // U+00D7
      punct(Tok::Star, 2);
    } else {
      switch (c) {
        case '(': punct(Tok::LParen, 1); break;
        case ')': punct(Tok::RParen, 1); break;
        case '[': punct(Tok::LBracket, 1); break;
        case ']': punct(Tok::RBracket, 1); break;
        case ',': punct(Tok::Comma, 1); break;
        case ':': punct(Tok::Colon, 1); break;
        case '/': punct(Tok::Slash, 1); break;
        case '+': punct(Tok::Plus, 1); break;
        case '*': punct(Tok::Star, 1); break;
        case '@': punct(Tok::At, 1); break;
        case '-': punct(Tok::Dash, 1); break;
        default: throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : toks_(lex(text)) {}

  Spec parse() {
    Spec spec;
    behaviour(spec);
    while (peek_keyword("ops")) ops(spec);
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      if (!peek_keyword("rule")) fail("expected 'rule'");
      Rule r = rule(spec);
      if (!names.insert(r.name).second)
        throw SyntaxError("duplicate rule name '" + r.name + "'", r.pos.line, r.pos.column);
      spec.rules.push_back(std::move(r));
    }
    return spec;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool peek_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg + " (found " + describe(peek()) + ")", peek().pos.line, peek().pos.column);
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }
  std::string ident(const char* what) { return expect(Tok::Ident, what).text; }

  Nat nat_value(const Token& t) {
    Nat v = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc()) throw SyntaxError("number out of range", t.pos.line, t.pos.column);
    return v;
  }

  Label label_token() {
    if (peek().kind == Tok::Nat) return Label(nat_value(next()));
    return Label(ident("label"));
  }

  void behaviour(Spec& spec) {
    if (!peek_keyword("behaviour")) fail("expected 'behaviour'");
    next();
    const Token& k = expect(Tok::Ident, "behaviour kind");
    if (k.text == "lts")
      spec.kind.functor = Functor::Lts;
    else if (k.text == "stream")
      spec.kind.functor = Functor::Stream;
    else if (k.text == "wts")
      spec.kind.functor = Functor::Weighted;
    else
      throw SyntaxError("unknown behaviour kind '" + k.text + "'", k.pos.line, k.pos.column);
    if (peek_keyword("labels")) next();
    if (peek_keyword("nat") && peek(1).kind != Tok::Comma) {
      next();
      spec.kind.labels.naturals = true;
      return;
    }
    do spec.kind.labels.finite.push_back(label_token());
    while (accept(Tok::Comma));
  }

  void ops(Spec& spec) {
    next();
    do {
      const Token& name = expect(Tok::Ident, "operator name");
      expect(Tok::Slash, "'/'");
      OpDecl op{name.text, static_cast<std::size_t>(nat_value(expect(Tok::Nat, "arity"))), 0};
      if (accept(Tok::LBracket)) {
        op.param_count = static_cast<std::size_t>(nat_value(expect(Tok::Nat, "parameter count")));
        expect(Tok::RBracket, "']'");
      }
      if (spec.sig.contains(op.name))
        throw SyntaxError("duplicate operator '" + op.name + "'", name.pos.line, name.pos.column);
      spec.sig.add(std::move(op));
    } while (accept(Tok::Comma));
  }

  LabelPattern label_pattern(const Spec& spec) {
    LabelPattern p;
    if (peek().kind == Tok::Nat) {
      p.literal = Label(nat_value(next()));
    } else {
      std::string id = ident("label");
      Label sym(id);
      if (!spec.kind.labels.naturals && spec.kind.labels.contains(sym))
        p.literal = sym;
      else
        p.var = id;
    }
    return p;
  }

  Rule rule(const Spec& spec) {
    Rule r;
    r.pos = peek().pos;
    next();
    r.name = ident("rule name");
    expect(Tok::Colon, "':'");
    if (peek().kind != Tok::Turnstile) {
      do {
        Premise p;
        p.source = ident("premise source variable");
        expect(Tok::Dash, "'-'");
        p.label = label_pattern(spec);
        if (accept(Tok::At)) p.weight_var = ident("weight variable");
        if (accept(Tok::Arrow)) {
          p.target = ident("premise target variable");
        } else if (!accept(Tok::NegArrow)) {
          fail("expected '->' or '-/->'");
        }
        r.premises.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::Turnstile, "'|-'");
    r.head_op = ident("operator");
    if (accept(Tok::LBracket)) {
      do r.param_vars.push_back(ident("parameter variable"));
      while (accept(Tok::Comma));
      expect(Tok::RBracket, "']'");
    }
    if (accept(Tok::LParen)) {
      do r.head_vars.push_back(ident("argument variable"));
      while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    expect(Tok::Dash, "'-'");
    r.concl_label = expr(spec, true);
    if (accept(Tok::At)) r.concl_weight = expr(spec, false);
    expect(Tok::Arrow, "'->'");
    r.concl_target = term_template(spec);
    return r;
  }

  Expr expr(const Spec& spec, bool label_context) {
    Expr lhs = product(spec, label_context);
    while (accept(Tok::Plus)) lhs = Expr::binary(Expr::Op::Add, lhs, product(spec, label_context));
    return lhs;
  }

  Expr product(const Spec& spec, bool label_context) {
    Expr lhs = atom(spec, label_context);
    while (accept(Tok::Star)) lhs = Expr::binary(Expr::Op::Mul, lhs, atom(spec, label_context));
    return lhs;
  }

  Expr atom(const Spec& spec, bool label_context) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Nat: return Expr::nat(nat_value(next()));
      case Tok::Real: {
        next();
        return Expr::real(std::stod(t.text));
      }
      case Tok::LParen: {
        next();
        Expr e = expr(spec, label_context);
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        std::string id = next().text;
        if (id == "sup" && peek().kind == Tok::LParen) {
          next();
          std::vector<Expr> ops;
          do ops.push_back(expr(spec, label_context));
          while (accept(Tok::Comma));
          expect(Tok::RParen, "')'");
          return Expr::sup(std::move(ops));
        }
        if (!label_context && id == "inf") return Expr::real(std::numeric_limits<double>::infinity());
        if (label_context && !spec.kind.labels.naturals && spec.kind.labels.contains(Label(id)))
          return Expr::symbol(id);
        return Expr::var(id);
      }
      default: fail("expected expression");
    }
  }

  TermTemplate term_template(const Spec& spec) {
    std::string name = ident("term");
    std::vector<Expr> params;
    std::vector<TermTemplate> args;
    bool app = spec.sig.contains(name);
    if (accept(Tok::LBracket)) {
      app = true;
      do params.push_back(expr(spec, true));
      while (accept(Tok::Comma));
      expect(Tok::RBracket, "']'");
    }
    if (accept(Tok::LParen)) {
      app = true;
      do args.push_back(term_template(spec));
      while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    if (!app) return TermTemplate::var(std::move(name));
    return TermTemplate::app(std::move(name), std::move(params), std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Spec parse_spec(std::string_view text) { return SpecParser(text).parse(); }

Spec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace bigsos
