#include "scc/checker.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "scc/denotation.hpp"

namespace scc {

bool CheckReport::passed() const { return error_count() == 0; }

std::size_t CheckReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::Error;
  }));
}

void CheckReport::merge(CheckReport other) {
  for (auto& f : other.findings) findings.push_back(std::move(f));
}

std::vector<Finding> CheckReport::with_rule(std::string_view rule) const {
  std::vector<Finding> out;
  for (const auto& f : findings)
    if (f.rule == rule) out.push_back(f);
  return out;
}

CheckReport check_contract_consistency(const ContextOperator& op, const Architecture& arch) {
  CheckReport r;
  for (std::size_t i = 0; i < op.contract.basics.size(); ++i) {
    const auto& b = op.contract.basics[i];
    for (const auto& site : b.requirements) {
      if (site.target.is_source()) continue;
      const ContextOperator* child = arch.context(site.target.component);
      if (child && !child->has_pull_contract())
        r.findings.push_back({Severity::Error, rules::kRequirementNeedsPullSelf, op.id,
                              "requires '" + child->id + "', which has no 'on pull' contract", i,
                              std::nullopt});
    }
    if (b.is_pull()) continue;
    for (const auto& n : names(b.activation)) {
      const Ref& ref = std::get<Ref>(n);
      if (ref.is_source()) continue;
      const ContextOperator* child = arch.context(ref.component);
      if (child && !child->has_emitting_contract())
        r.findings.push_back({Severity::Error, rules::kActivationNeedsEmission, op.id,
                              "is activated by '" + child->id + "', which never publishes", i,
                              std::nullopt});
    }
  }
  return r;
}

namespace {

// Controllers carry a fixed push activation over their subscriptions.
CheckReport check_controller_consistency(const ControlOperator& c, const Architecture& arch) {
  CheckReport r;
  for (const auto& s : c.subscriptions) {
    const ContextOperator* child = arch.context(s);
    if (child && !child->has_emitting_contract())
      r.findings.push_back({Severity::Error, rules::kSubscriptionNeedsEmission, c.id,
                            "subscribes to '" + s + "', which never publishes", 0, std::nullopt});
  }
  return r;
}

}  // namespace

CheckReport check_architecture_consistency(const Architecture& arch) {
  CheckReport r;
  for (const auto& op : arch.contexts) r.merge(check_contract_consistency(op, arch));
  for (const auto& c : arch.controllers) r.merge(check_controller_consistency(c, arch));
  return r;
}

bool interferes(const BasicContract& a, const BasicContract& b) {
  auto na = names(a.activation);
  auto nb = names(b.activation);
  return std::any_of(na.begin(), na.end(), [&](const Name& n) { return nb.count(n) > 0; });
}

CheckReport check_determinacy(const Architecture& arch) {
  CheckReport r;
  for (const auto& op : arch.contexts) {
    const auto& bs = op.contract.basics;
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i + 1; j < bs.size(); ++j)
        if (interferes(bs[i], bs[j]))
          r.findings.push_back({Severity::Error, rules::kInterferingContracts, op.id,
                                "contracts #" + std::to_string(i) + " and #" + std::to_string(j) +
                                    " can be activated by the same data flow",
                                std::nullopt, std::pair{i, j}});
  }
  return r;
}

namespace {

std::string join_types(const std::vector<std::string>& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) out += (i ? ", " : "") + ts[i];
  return out;
}

}  // namespace

CheckReport check_typing(const Architecture& arch) {
  CheckReport r;
  TypeLattice lattice(arch.types);

  for (const auto& op : arch.contexts) {
    if (op.pull_params && !op.has_pull_contract())
      r.findings.push_back({Severity::Warning, rules::kUnusedPullParams, op.id,
                            "declares pull parameters but has no 'on pull' contract", std::nullopt,
                            std::nullopt});
    for (std::size_t i = 0; i < op.contract.basics.size(); ++i) {
      const auto& b = op.contract.basics[i];
      if (const auto* push = b.push()) {
        for (const auto& term : push->terms) {
          if (term.size() < 2) continue;
          std::string members;
          for (const auto& ref : term) members += (members.empty() ? "" : " | ") + ref.str();
          std::string t = typeof_term(term, arch);
          r.findings.push_back({Severity::Note, rules::kDisjunctionType, op.id, members + " : " + t, i,
                                std::nullopt});
          if (t == kTopType)
            r.findings.push_back({Severity::Warning, rules::kDisjunctionWidensToTop, op.id,
                                  "disjunction " + members + " widens to " + std::string(kTopType), i,
                                  std::nullopt});
        }
      }
      for (const auto& site : b.requirements) {
        if (!site.arg_types) continue;
        std::vector<std::string> declared = pull_args(site.target, arch);
        const auto& given = *site.arg_types;
        if (given.size() != declared.size()) {
          r.findings.push_back(
              {Severity::Error, rules::kPullArityMismatch, op.id,
               "pull of " + site.target.str() + " passes " + std::to_string(given.size()) +
                   " argument(s) but " + std::to_string(declared.size()) + " declared (" +
                   join_types(declared) + ")",
               i, std::nullopt});
          continue;
        }
        for (std::size_t k = 0; k < given.size(); ++k)
          if (!lattice.is_subtype(given[k], declared[k]))
            r.findings.push_back({Severity::Error, rules::kPullArgumentType, op.id,
                                  "pull of " + site.target.str() + " argument " + std::to_string(k + 1) +
                                      " has type " + given[k] + ", expected " + declared[k],
                                  i, std::nullopt});
      }
    }
  }

  for (const auto& c : arch.controllers) {
    for (const auto& s : c.subscriptions) {
      std::string t = typeof_name(Ref{s}, arch);
      for (const auto& o : c.orders) {
        const Actuator* act = arch.actuator(o.actuator);
        const ActionDecl* a = act ? act->find_action(o.action) : nullptr;
        if (!a) continue;
        if (a->param_types.size() != 1 || !lattice.is_subtype(t, a->param_types[0]))
          r.findings.push_back({Severity::Error, rules::kSubscriptionTypeMismatch, c.id,
                                "forwards " + t + " from '" + s + "' to " + o.str() + "(" +
                                    join_types(a->param_types) + ")",
                                0, std::nullopt});
      }
    }
  }
  return r;
}

CheckReport check_pull_cycles(const Architecture& arch) {
  CheckReport r;
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& op : arch.contexts)
    for (const auto& b : op.contract.basics)
      for (const auto& site : b.requirements)
        if (!site.target.is_source()) edges[op.id].push_back(site.target.component);

  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::set<std::set<std::string>> reported;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    mark[v] = Mark::Grey;
    stack.push_back(v);
    for (const auto& w : edges[v]) {
      if (mark[w] == Mark::Grey) {
        auto from = std::find(stack.begin(), stack.end(), w);
        std::set<std::string> members(from, stack.end());
        if (reported.insert(members).second) {
          std::string path;
          for (auto it = from; it != stack.end(); ++it) path += *it + " -> ";
          path += w;
          r.findings.push_back({Severity::Warning, rules::kCyclicPullRequirements, w,
                                "pull requirements form a cycle: " + path, std::nullopt, std::nullopt});
        }
      } else if (mark[w] == Mark::White) {
        visit(w);
      }
    }
    stack.pop_back();
    mark[v] = Mark::Black;
  };
  for (const auto& op : arch.contexts)
    if (mark[op.id] == Mark::White) visit(op.id);
  return r;
}

CheckReport check_all(const Architecture& arch) {
  CheckReport r = check_architecture_consistency(arch);
  r.merge(check_determinacy(arch));
  r.merge(check_typing(arch));
  r.merge(check_pull_cycles(arch));
  return r;
}

std::string render_text(const CheckReport& r) {
  std::ostringstream os;
  for (const auto& f : r.findings) {
    os << to_string(f.severity) << ": [" << f.rule << "] " << f.subject;
    if (f.contract) os << "#" << *f.contract;
    os << ": " << f.message;
    if (f.witness) os << " (witness " << f.witness->first << ", " << f.witness->second << ")";
    os << '\n';
  }
  return os.str();
}

std::string render_machine(const CheckReport& r) {
  std::ostringstream os;
  for (const auto& f : r.findings) {
    os << "finding\t" << to_string(f.severity) << '\t' << f.rule << '\t' << f.subject << '\t'
       << (f.contract ? std::to_string(*f.contract) : "-") << '\t';
    if (f.witness)
      os << f.witness->first << ',' << f.witness->second;
    else
      os << '-';
    os << '\t' << f.message << '\n';
  }
  os << "verdict\t" << (r.passed() ? "pass" : "fail") << '\n';
  return os.str();
}

}  // namespace scc
