#include "bigsos/serialize.hpp"

#include <cmath>
#include <sstream>

namespace bigsos {

namespace {

Json weight_json(Weight w) {
  if (std::isinf(w)) return "inf";
  return w;
}

std::string weight_text(Weight w) {
  if (std::isinf(w)) return "inf";
  std::ostringstream os;
  os << w;
  return os.str();
}

template <class S, class F>
std::string text_of(const Value<S>& v, F&& name) {
  std::ostringstream os;
  if (auto* s = std::get_if<StreamStep<S>>(&v)) {
    if (!s->step) return "_";
    os << to_string(s->step->first) << " -> " << name(s->step->second);
    return os.str();
  }
  os << '{';
  bool first_label = true;
  auto label_prefix = [&](const Label& l) {
    os << (first_label ? "" : ", ") << to_string(l) << ": [";
    first_label = false;
  };
  if (auto* l = std::get_if<Successors<S>>(&v)) {
    for (const auto& [label, ts] : l->by_label) {
      label_prefix(label);
      bool first = true;
      for (const auto& t : ts) {
        os << (first ? "" : ", ") << name(t);
        first = false;
      }
      os << ']';
    }
  } else {
    for (const auto& [label, ws] : std::get<Weights<S>>(v).by_label) {
      label_prefix(label);
      bool first = true;
      for (const auto& [t, w] : ws) {
        os << (first ? "" : ", ") << name(t) << '@' << weight_text(w);
        first = false;
      }
      os << ']';
    }
  }
  os << '}';
  return os.str();
}

}  // namespace

Json label_json(const Label& l) {
  if (l.is_nat()) return l.nat();
  return l.symbol();
}

Json value_json(const BehaviourValue& v) {
  if (auto* s = std::get_if<StreamStep<Term>>(&v)) {
    if (!s->step) return nullptr;
    return Json{{"label", label_json(s->step->first)}, {"next", to_string(s->step->second)}};
  }
  Json out = Json::object();
  if (auto* l = std::get_if<Successors<Term>>(&v)) {
    for (const auto& [label, ts] : l->by_label) {
      Json arr = Json::array();
      for (const auto& t : ts) arr.push_back(to_string(t));
      out[to_string(label)] = std::move(arr);
    }
    return out;
  }
  for (const auto& [label, ws] : std::get<Weights<Term>>(v).by_label) {
    Json obj = Json::object();
    for (const auto& [t, w] : ws) obj[to_string(t)] = weight_json(w);
    out[to_string(label)] = std::move(obj);
  }
  return out;
}

std::string value_text(const Value<std::string>& v) {
  return text_of(v, [](const std::string& s) { return s; });
}

std::string value_text(const BehaviourValue& v) {
  return text_of(v, [](const Term& t) { return to_string(t); });
}

Json report_json(const ConvergenceReport& r) {
  Json j{{"iterations", r.iterations},
         {"converged", r.converged},
         {"oscillation_detected", r.oscillation_detected},
         {"frontier_size", r.frontier_size},
         {"universe_size", r.universe_size}};
  if (r.oscillation_detected) {
    Json arr = Json::array();
    for (const auto& t : r.oscillating) arr.push_back(to_string(t));
    j["oscillating"] = std::move(arr);
  }
  return j;
}

Json model_json(const Model& m, const ConvergenceReport& r) {
  Json universe = Json::array();
  for (const auto& t : m.universe) universe.push_back(to_string(t));
  Json frontier = Json::array();
  for (const auto& t : m.frontier) frontier.push_back(to_string(t));
  Json behaviour = Json::object();
  for (const auto& t : m.universe) behaviour[to_string(t)] = value_json(m.behaviour.at(t));
  return Json{{"universe", std::move(universe)},
              {"frontier", std::move(frontier)},
              {"behaviour", std::move(behaviour)},
              {"report", report_json(r)}};
}

std::string model_text(const Model& m, const ConvergenceReport& r) {
  std::ostringstream os;
  for (const auto& t : m.universe) os << to_string(t) << " : " << value_text(m.behaviour.at(t)) << '\n';
  os << "# iterations " << r.iterations << (r.converged ? ", converged" : ", not converged");
  if (r.oscillation_detected) os << ", oscillation detected";
  os << ", universe " << r.universe_size << ", frontier " << r.frontier_size << '\n';
  return os.str();
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string model_dot(const Model& m) {
  if (m.kind.functor != Functor::Lts) throw Error("DOT output is only available for LTS models");
  std::ostringstream os;
  os << "digraph model {\n";
  for (const auto& t : m.universe) os << "  " << dot_quote(to_string(t)) << ";\n";
  for (const auto& t : m.frontier) os << "  " << dot_quote(to_string(t)) << " [style=dashed];\n";
  for (const auto& t : m.universe)
    for (const auto& tr : transitions(m.behaviour.at(t)))
      os << "  " << dot_quote(to_string(t)) << " -> " << dot_quote(to_string(tr.target))
         << " [label=" << dot_quote(to_string(tr.label)) << "];\n";
  os << "}\n";
  return os.str();
}

namespace {

Json node_json(const UnfoldTree& t, NodeId n) {
  const UnfoldNode& node = t.nodes[n];
  Json j{{"term", to_string(node.term)}};
  if (!node.step) return j;
  const Value<NodeId>& v = *node.step;
  if (auto* s = std::get_if<StreamStep<NodeId>>(&v)) {
    if (!s->step)
      j["step"] = nullptr;
    else
      j["step"] = Json{{"label", label_json(s->step->first)}, {"next", node_json(t, s->step->second)}};
  } else if (auto* l = std::get_if<Successors<NodeId>>(&v)) {
    Json step = Json::object();
    for (const auto& [label, kids] : l->by_label) {
      Json arr = Json::array();
      for (NodeId k : kids) arr.push_back(node_json(t, k));
      step[to_string(label)] = std::move(arr);
    }
    j["step"] = std::move(step);
  } else {
    Json step = Json::object();
    for (const auto& [label, kids] : std::get<Weights<NodeId>>(v).by_label) {
      Json arr = Json::array();
      for (const auto& [k, w] : kids) {
        Json child = node_json(t, k);
        child["weight"] = weight_json(w);
        arr.push_back(std::move(child));
      }
      step[to_string(label)] = std::move(arr);
    }
    j["step"] = std::move(step);
  }
  return j;
}

void node_text(const UnfoldTree& t, NodeId n, std::size_t indent, std::ostringstream& os) {
  const UnfoldNode& node = t.nodes[n];
  os << to_string(node.term);
  if (!node.step) {
    os << '\n';
    return;
  }
  const Value<NodeId>& v = *node.step;
  if (is_bottom(v)) {
    os << " _\n";
    return;
  }
  os << '\n';
  for (const auto& tr : transitions(v)) {
    os << std::string(indent + 2, ' ') << "-" << to_string(tr.label);
    if (t.kind.functor == Functor::Weighted) os << '@' << weight_text(tr.weight);
    os << "-> ";
    node_text(t, tr.target, indent + 2, os);
  }
}

}  // namespace

Json tree_json(const UnfoldTree& t) { return node_json(t, 0); }

std::string tree_text(const UnfoldTree& t) {
  std::ostringstream os;
  if (t.kind.functor == Functor::Stream) {
    const StreamTrace tr = stream_trace(t);
    for (std::size_t i = 0; i < tr.labels.size(); ++i) os << (i ? " " : "") << to_string(tr.labels[i]);
    if (tr.ends_in_bottom) os << (tr.labels.empty() ? "" : " ") << "_";
    os << '\n';
    return os.str();
  }
  node_text(t, 0, 0, os);
  return os.str();
}

}  // namespace bigsos
