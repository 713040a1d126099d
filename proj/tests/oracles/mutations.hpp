#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scc/checker.hpp"

namespace scc::oracle {

/// A fixture edit the checker must flag with the given rule.
struct Mutation {
  std::string name;
  std::string fixture;
  std::function<void(Architecture&)> apply;
  std::string rule;
  std::string subject;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  Severity severity = Severity::Error;
};

inline BasicContract push_from(std::vector<Ref> refs, Emission e) {
  PushActivation p;
  for (auto& r : refs) p.terms.push_back({r});
  return {p, {}, e};
}

inline std::vector<Mutation> mutations() {
  return {
      {"delete the pull contract of IP2Profile", "webserver.adl",
       [](Architecture& a) { a.context_mut("IP2Profile").contract.basics.clear(); },
       rules::kRequirementNeedsPullSelf, "AccessingProfile"},
      {"requirement on a push-only operator", "webserver.adl",
       [](Architecture& a) {
         a.context_mut("AccessingProfile").contract.basics[0].requirements = {{Ref{"IntrusionDetector"}, std::nullopt}};
       },
       rules::kRequirementNeedsPullSelf, "AccessingProfile"},
      {"child emission set to no publish under a push activation", "webserver.adl",
       [](Architecture& a) { a.context_mut("AccessLogParser").contract.basics[0].emission = Emission::Never; },
       rules::kActivationNeedsEmission, "AccessingProfile"},
      {"IntrusionDetector stops publishing", "webserver.adl",
       [](Architecture& a) { a.context_mut("IntrusionDetector").contract.basics[0].emission = Emission::Never; },
       rules::kSubscriptionNeedsEmission, "IntrusionInformer"},
      {"interfering push pair", "webserver.adl",
       [](Architecture& a) {
         auto& op = a.context_mut("IntrusionDetector");
         op.contract.basics.push_back(push_from({Ref{"AccessingProfile"}, Ref{"AccessLogParser"}}, Emission::Maybe));
       },
       rules::kInterferingContracts, "IntrusionDetector", std::pair<std::size_t, std::size_t>{0, 1}},
      {"two pull contracts", "webserver.adl",
       [](Architecture& a) {
         auto& op = a.context_mut("IP2Profile");
         op.contract.basics.push_back({PullSelf{}, {}, Emission::Never});
       },
       rules::kInterferingContracts, "IP2Profile", std::pair<std::size_t, std::size_t>{0, 1}},
      {"interference through a disjunction", "webserver_extended.adl",
       [](Architecture& a) {
         a.context_mut("DangerDetection").contract.basics.push_back(push_from({Ref{"SQLInjDetector"}}, Emission::Always));
       },
       rules::kInterferingContracts, "DangerDetection", std::pair<std::size_t, std::size_t>{0, 1}},
      {"logger action takes the wrong type", "webserver.adl",
       [](Architecture& a) {
         for (auto& act : a.actuators)
           if (act.id == "Logger") act.actions[0].param_types = {"Access"};
       },
       rules::kSubscriptionTypeMismatch, "ProfileLogger"},
      {"pull of ip2host with no arguments", "webserver.adl",
       [](Architecture& a) {
         a.context_mut("IP2Profile").contract.basics[0].requirements[0].arg_types = std::vector<std::string>{};
       },
       rules::kPullArityMismatch, "IP2Profile"},
      {"pull of ip2host with a String", "webserver.adl",
       [](Architecture& a) {
         a.context_mut("IP2Profile").contract.basics[0].requirements[0].arg_types = std::vector<std::string>{"String"};
       },
       rules::kPullArgumentType, "IP2Profile"},
      {"disjunction of Access and Profile", "webserver_extended.adl",
       [](Architecture& a) {
         a.context_mut("DangerDetection").contract.basics[0] =
             BasicContract{PushActivation{{{Ref{"SQLInjDetector"}, Ref{"AccessingProfile"}}}}, {}, Emission::Always};
       },
       rules::kDisjunctionWidensToTop, "DangerDetection", std::nullopt, Severity::Warning},
      {"pull requirements in a cycle", "webserver.adl",
       [](Architecture& a) {
         auto& ap = a.context_mut("AccessingProfile");
         ap.pull_params = std::vector<std::string>{};
         ap.contract.basics.push_back({PullSelf{}, {}, Emission::Never});
         a.context_mut("IP2Profile").contract.basics[0].requirements.push_back({Ref{"AccessingProfile"}, std::nullopt});
       },
       rules::kCyclicPullRequirements, "AccessingProfile", std::nullopt, Severity::Warning},
      {"pull parameters on a push-only operator", "webserver.adl",
       [](Architecture& a) { a.context_mut("AccessLogParser").pull_params = std::vector<std::string>{"String"}; },
       rules::kUnusedPullParams, "AccessLogParser", std::nullopt, Severity::Warning},
  };
}

}  // namespace scc::oracle
