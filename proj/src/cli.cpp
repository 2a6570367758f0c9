#include "bigsos/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bigsos/laws.hpp"
#include "bigsos/relations.hpp"
#include "bigsos/serialize.hpp"

namespace bigsos {

namespace {

struct Options {
  std::string file;
  std::vector<std::string> terms;
  std::size_t universe_count = 500;
  std::size_t universe_size = 12;
  int enumerate_size = -1;
  std::size_t max_iters = 1000;
  std::size_t depth = 3;
  std::optional<std::uint64_t> seed;
  std::string format;
  bool force = false;
  std::string rel = "bisim";
  std::size_t samples = 100;
  std::size_t trials = 200;
  bool mutate = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("file", o.file, "Rule specification (.sos)")->required();
  cmd->add_option("--universe-count", o.universe_count, "Maximal number of universe terms")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--universe-size", o.universe_size, "Maximal height of grown terms")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--enumerate-size", o.enumerate_size,
                  "Enumerate all terms up to this height (default: 2 without seed terms, else 0)");
  cmd->add_option("--max-iters", o.max_iters, "Iteration bound")->check(CLI::PositiveNumber);
  cmd->add_option("-d,--depth", o.depth, "Unfolding depth");
  cmd->add_option("--seed", o.seed, "Random seed (falls back to BIGSOS_SEED)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "dot", "text"}));
  cmd->add_flag("--force", o.force, "Iterate non-monotone specifications");
}

std::uint64_t seed_of(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("BIGSOS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error("BIGSOS_SEED is not a number");
    }
  }
  return 1;
}

UniversePolicy policy_of(const Options& o, const std::vector<Term>& seeds) {
  UniversePolicy p;
  p.seeds = seeds;
  p.max_count = o.universe_count;
  p.max_size = o.universe_size;
  p.enumerate_height = o.enumerate_size >= 0 ? static_cast<std::size_t>(o.enumerate_size)
                       : seeds.empty()       ? 2
                                             : 0;
  return p;
}

std::vector<Term> parse_terms(const std::vector<std::string>& texts, const Spec& spec) {
  std::vector<Term> out;
  for (const auto& t : texts) out.push_back(parse_closed_term(t, spec.sig));
  return out;
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int check() {
    const Spec spec = load();
    const auto diags = validate_spec(spec);
    for (const auto& d : diags) err_ << o_.file << ':' << d.pos.line << ':' << d.pos.column << ": rule '"
                                     << d.rule << "': " << d.message << '\n';
    if (!diags.empty()) return kExitValidation;
    const auto verdict = check_monotone(spec);
    const std::string semantic = monotonicity_verdict(spec, o_.trials, seed_of(o_));
    if (format("text") == "json") {
      Json rules = Json::array();
      for (const auto& r : spec.rules) rules.push_back(Json{{"rule", r.name}, {"lookahead", lookahead_depth(r)}});
      Json offending = Json::array();
      for (const auto& r : verdict.offending_rules) offending.push_back(r);
      out_ << Json{{"kind", to_string(spec.kind.functor)},
                   {"rules", std::move(rules)},
                   {"monotone", verdict.monotone},
                   {"offending_rules", std::move(offending)},
                   {"semantic", semantic}}
                  .dump(2)
           << '\n';
    } else {
      out_ << spec.rules.size() << " rule(s), " << to_string(spec.kind.functor) << " behaviour\n";
      for (const auto& r : spec.rules) out_ << "  " << r.name << ": lookahead " << lookahead_depth(r) << '\n';
      if (verdict.monotone) {
        out_ << "monotone\n";
      } else {
        out_ << "not monotone (" << semantic << "): negative premises in rule(s)";
        for (const auto& r : verdict.offending_rules) out_ << ' ' << r;
        out_ << '\n';
      }
    }
    return verdict.monotone ? kExitOk : kExitNonMonotone;
  }

  int model() {
    const Spec spec = load();
    const Solution sol = solve(spec, parse_terms(o_.terms, spec));
    const std::string fmt = format("json");
    if (fmt == "dot" && spec.kind.functor != Functor::Lts) {
      err_ << "warning: DOT output is only available for LTS models, writing JSON\n";
      out_ << model_json(sol.model, sol.report).dump(2) << '\n';
    } else if (fmt == "dot") {
      out_ << model_dot(sol.model);
    } else if (fmt == "text") {
      out_ << model_text(sol.model, sol.report);
    } else {
      out_ << model_json(sol.model, sol.report).dump(2) << '\n';
    }
    return status(sol.report);
  }

  int unfold_cmd() {
    const Spec spec = load();
    const auto terms = parse_terms(o_.terms, spec);
    const Solution sol = solve(spec, terms);
    const UnfoldTree tree = unfold(sol.model, terms.front(), o_.depth);
    if (format("text") == "json")
      out_ << Json{{"tree", tree_json(tree)}, {"report", report_json(sol.report)}}.dump(2) << '\n';
    else
      out_ << tree_text(tree);
    return status(sol.report);
  }

  int equiv() {
    const Spec spec = load();
    const auto terms = parse_terms(o_.terms, spec);
    const Solution sol = solve(spec, terms);
    const Model& m = sol.model;
    const EquivResult res = o_.rel == "sim" ? similar(m, terms[0], terms[1]) : bisimilar(m, terms[0], terms[1]);
    const std::set<Term> exact = exact_terms(spec, m);
    const bool is_exact = closure_within(m, terms[0], exact) && closure_within(m, terms[1], exact);
    Json j{{"relation", o_.rel}, {"left", o_.terms[0]}, {"right", o_.terms[1]}, {"related", res.related},
           {"exact", is_exact}};
    if (res.witness) {
      const auto r1 = reachable(m, terms[0]), r2 = reachable(m, terms[1]);
      Json pairs = Json::array();
      for (const auto& [a, b] : res.witness->pairs)
        if ((r1.count(a) && r2.count(b)) || (o_.rel == "bisim"))
          pairs.push_back(Json::array({to_string(a), to_string(b)}));
      j["witness"] = std::move(pairs);
    }
    if (res.distinguishing_depth) j["distinguishing_depth"] = *res.distinguishing_depth;
    if (format("text") == "json") {
      out_ << j.dump(2) << '\n';
    } else {
      out_ << o_.terms[0] << (o_.rel == "sim" ? " is simulated by " : " is bisimilar to ") << o_.terms[1]
           << ": " << (res.related ? "yes" : "no");
      if (res.distinguishing_depth) out_ << " (distinguished at depth " << *res.distinguishing_depth << ')';
      if (!is_exact) out_ << " [universe cut-off reached; verdict is relative to the finite model]";
      out_ << '\n';
    }
    return status(sol.report);
  }

  int congruence() {
    const Spec spec = load();
    const Solution sol = solve(spec, parse_terms(o_.terms, spec));
    const CongruenceReport rep = congruence_test(spec, sol.model, o_.samples, seed_of(o_));
    Json violations = Json::array();
    for (const auto& v : rep.violations)
      violations.push_back(Json::array({to_string(v.left), to_string(v.right)}));
    Json j{{"law", "congruence"},
           {"status", rep.status()},
           {"witness",
            {{"candidates", rep.candidates},
             {"sampled", rep.sampled},
             {"checked", rep.checked},
             {"violations", std::move(violations)}}}};
    if (!rep.note.empty()) j["witness"]["note"] = rep.note;
    out_ << j.dump(2) << '\n';
    return status(sol.report);
  }

  int laws() {
    const Spec spec = load();
    check_valid(spec);
    LawConfig cfg = default_law_config(spec);
    cfg.depth = o_.depth;
    cfg.seed = seed_of(o_);
    cfg.mutate = o_.mutate;
    cfg.max_iters = o_.max_iters;
    if (o_.enumerate_size >= 0) cfg.policy.enumerate_height = static_cast<std::size_t>(o_.enumerate_size);
    Json arr = Json::array();
    for (const auto& r : law_suite(spec, cfg)) arr.push_back(r.to_json());
    out_ << arr.dump(2) << '\n';
    return kExitOk;
  }

 private:
  Spec load() {
    Spec spec = load_spec(o_.file);
    loaded_ = true;
    return spec;
  }

  std::string format(const std::string& fallback) const { return o_.format.empty() ? fallback : o_.format; }

  void check_valid(const Spec& spec) const {
    if (auto diags = validate_spec(spec); !diags.empty()) throw ValidationError(std::move(diags));
    const auto verdict = check_monotone(spec);
    if (!verdict.monotone && !o_.force) throw NonMonotoneError(verdict.offending_rules);
  }

  Solution solve(const Spec& spec, const std::vector<Term>& seeds) const {
    return least_model(spec, policy_of(o_, seeds), {o_.max_iters, o_.force});
  }

  int status(const ConvergenceReport& r) const {
    if (r.converged) return kExitOk;
    err_ << (r.oscillation_detected ? "no fixed point: iteration oscillates with period 2\n"
                                    : "no fixed point within the iteration bound\n");
    return kExitNonConvergence;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;

 public:
  bool loaded_ = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule-based operational semantics workbench", "bigsos"};
  app.require_subcommand(1);
  Options o;
  auto* check = app.add_subcommand("check", "Validate a specification and test monotonicity");
  add_common(check, o);
  check->add_option("--trials", o.trials, "Semantic monotonicity trials");
  auto* model = app.add_subcommand("model", "Compute the least supported model");
  add_common(model, o);
  model->add_option("terms", o.terms, "Seed terms of the universe");
  auto* unfold = app.add_subcommand("unfold", "Unfold a term in the least model");
  add_common(unfold, o);
  unfold->add_option("term", o.terms, "Term to unfold")->required()->expected(1);
  auto* equiv = app.add_subcommand("equiv", "Compare two terms by similarity or bisimilarity");
  add_common(equiv, o);
  equiv->add_option("terms", o.terms, "Two terms")->required()->expected(2);
  equiv->add_option("--rel", o.rel, "Relation")->check(CLI::IsMember({"sim", "bisim"}));
  auto* congruence = app.add_subcommand("congruence", "Sample the congruence property of bisimilarity");
  add_common(congruence, o);
  congruence->add_option("terms", o.terms, "Seed terms of the universe");
  congruence->add_option("--samples", o.samples, "Number of sampled term pairs");
  auto* laws = app.add_subcommand("laws", "Run the lifting law suite with default generators");
  add_common(laws, o);
  laws->add_flag("--mutate", o.mutate, "Delete one transition of the lifted model first");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSyntax;
  }

  Runner runner(o, out, err);
  try {
    if (*check) return runner.check();
    if (*model) return runner.model();
    if (*unfold) return runner.unfold_cmd();
    if (*equiv) return runner.equiv();
    if (*congruence) return runner.congruence();
    return runner.laws();
  } catch (const SyntaxError& e) {
    err << (runner.loaded_ ? "term" : o.file) << ':' << e.what() << '\n';
    return kExitSyntax;
  } catch (const ValidationError& e) {
    for (const auto& d : e.diagnostics())
      err << o.file << ':' << d.pos.line << ':' << d.pos.column << ": rule '" << d.rule << "': " << d.message
          << '\n';
    return kExitValidation;
  } catch (const NonMonotoneError& e) {
    err << o.file << ": " << e.what() << '\n';
    return kExitNonMonotone;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace bigsos
