#include <cctype>
#include <sstream>

#include "scc/parser.hpp"
#include "scc/verifier.hpp"

namespace scc {

bool Predicate::matches(const Event& e) const {
  switch (kind) {
    case Kind::Publish:
      if (ref.is_source()) return e.kind == EventKind::SourcePublished && e.component == ref.str();
      return e.kind == EventKind::ValuePublished && e.component == ref.component;
    case Kind::Activated: return e.kind == EventKind::OperatorActivated && e.component == ref.component;
    case Kind::Action:
      return e.kind == EventKind::ActionInvoked && e.component == ref.component && e.peer == ref.source;
  }
  return false;
}

std::string to_string(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::Publish: return "publish(" + p.ref.str() + ")";
    case Predicate::Kind::Activated: return "activated(" + p.ref.str() + ")";
    case Predicate::Kind::Action: return "action(" + p.ref.str() + ")";
  }
  return "?";
}

std::string to_string(const Invariant& inv) {
  if (inv.form == Invariant::Form::Never) return "never " + to_string(inv.trigger);
  return "always " + to_string(inv.trigger) + " leadsto " + to_string(inv.goal);
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

Predicate parse_predicate(std::string_view text, const Architecture& arch) {
  std::string t = trim(text);
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
    throw Error("malformed predicate '" + t + "' (expected publish(X), activated(X) or action(A.a))");
  std::string head = trim(t.substr(0, open));
  std::string arg = trim(t.substr(open + 1, t.size() - open - 2));
  Predicate p;
  p.ref = parse_ref(arg);
  if (head == "publish") {
    p.kind = Predicate::Kind::Publish;
    bool ok = p.ref.is_source() ? arch.source(p.ref) != nullptr : arch.context(p.ref.component) != nullptr;
    if (!ok) throw Error("publish(" + arg + "): not a sensor source or context operator");
  } else if (head == "activated") {
    p.kind = Predicate::Kind::Activated;
    bool ok = !p.ref.is_source() && (arch.context(p.ref.component) || arch.controller(p.ref.component));
    if (!ok) throw Error("activated(" + arg + "): not a context or control operator");
  } else if (head == "action") {
    p.kind = Predicate::Kind::Action;
    const Actuator* a = arch.actuator(p.ref.component);
    if (!p.ref.is_source() || !a || !a->find_action(p.ref.source))
      throw Error("action(" + arg + "): not an actuator action");
  } else {
    throw Error("unknown predicate '" + head + "'");
  }
  return p;
}

}  // namespace

Invariant parse_invariant(std::string_view text, const Architecture& arch) {
  std::string t = trim(text);
  Invariant inv;
  if (t.rfind("never ", 0) == 0) {
    inv.form = Invariant::Form::Never;
    inv.trigger = parse_predicate(t.substr(6), arch);
    return inv;
  }
  if (t.rfind("always ", 0) == 0) {
    auto sep = t.find(" leadsto ");
    if (sep == std::string::npos) throw Error("expected 'leadsto' in '" + t + "'");
    inv.form = Invariant::Form::Response;
    inv.trigger = parse_predicate(t.substr(7, sep - 7), arch);
    inv.goal = parse_predicate(t.substr(sep + 9), arch);
    return inv;
  }
  throw Error("invariant must start with 'always' or 'never': '" + t + "'");
}

std::vector<Invariant> parse_invariants(std::string_view text, const Architecture& arch) {
  std::vector<Invariant> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      out.push_back(parse_invariant(t, arch));
    } catch (const Error& e) {
      throw Error("invariant line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

bool satisfied(const Invariant& inv, const std::vector<Event>& events) {
  if (inv.form == Invariant::Form::Never)
    return std::none_of(events.begin(), events.end(), [&](const Event& e) { return inv.trigger.matches(e); });
  bool pending = false;
  for (const auto& e : events) {
    if (inv.trigger.matches(e)) pending = true;
    if (inv.goal.matches(e)) pending = false;
  }
  return !pending;
}

ReplayPlan replay_plan(const std::vector<Event>& cex, const Architecture& arch) {
  ReplayPlan plan;
  for (std::size_t i = 0; i < cex.size(); ++i) {
    const Event& e = cex[i];
    if (e.kind == EventKind::SourcePublished) {
      Ref r = parse_ref(e.component);
      if (!arch.source(r)) throw Error("counterexample publishes on undeclared source " + e.component);
      plan.publishes.push_back(r);
      continue;
    }
    if (e.kind == EventKind::ActionInvoked) plan.schedule.push_back(e.component);
    if (e.kind != EventKind::OperatorActivated || !e.contract) continue;
    const ContextOperator* op = arch.context(e.component);
    if (!op || !op->contract.basics.at(*e.contract).is_pull()) plan.schedule.push_back(e.component);
    if (!op || op->contract.basics.at(*e.contract).emission != Emission::Maybe) continue;
    bool published = false;
    for (std::size_t j = i + 1; j < cex.size(); ++j) {
      if (cex[j].component != e.component) continue;
      if (cex[j].kind == EventKind::OperatorActivated) break;
      if (cex[j].kind == EventKind::ValuePublished) {
        published = true;
        break;
      }
    }
    plan.decisions[e.component].push_back(published);
  }
  return plan;
}

std::string render_verdict(const Invariant& inv, const Verdict& v) {
  std::ostringstream os;
  os << "invariant: " << to_string(inv) << "\n";
  os << "verdict: ";
  if (!v.holds)
    os << "fails";
  else if (v.bounded)
    os << "inconclusive (state bound " << v.bound << " reached)";
  else if (v.saturated)
    os << "inconclusive (progress blocked by a full channel)";
  else
    os << "holds";
  os << "\n";
  os << "states explored: " << v.states << ", transitions: " << v.transitions << "\n";
  if (inv.form == Invariant::Form::Response) os << "assumption: weak fairness for every non-sensor process\n";
  if (v.counterexample) {
    os << "counterexample:\n";
    for (std::size_t i = 0; i < v.counterexample->size(); ++i) {
      if (v.cycle_start && *v.cycle_start == i) os << "  -- cycle repeats from here --\n";
      os << "  " << render_event((*v.counterexample)[i]) << "\n";
    }
    if (v.cycle_start && *v.cycle_start == v.counterexample->size()) os << "  -- cycle of silent steps --\n";
    if (!v.cycle_start && inv.form == Invariant::Form::Response) os << "  -- then no further progress --\n";
  }
  return os.str();
}

std::string render_verdict_machine(const Invariant& inv, const Verdict& v) {
  std::ostringstream os;
  os << "invariant\t" << to_string(inv) << "\n";
  os << "verdict\t" << (!v.holds ? "fails" : v.conclusive() ? "holds" : "inconclusive") << "\n";
  os << "states\t" << v.states << "\n";
  os << "transitions\t" << v.transitions << "\n";
  os << "bounded\t" << (v.bounded ? "yes" : "no") << "\t" << v.bound << "\n";
  os << "saturated\t" << (v.saturated ? "yes" : "no") << "\n";
  if (v.counterexample)
    for (std::size_t i = 0; i < v.counterexample->size(); ++i)
      os << "step\t" << i << "\t" << (v.cycle_start && i >= *v.cycle_start ? "cycle" : "prefix") << "\t"
         << render_event((*v.counterexample)[i]) << "\n";
  return os.str();
}

}  // namespace scc
