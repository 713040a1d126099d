#pragma once

// Architecture-level judgments: consistency, determinacy and typing.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scc/model.hpp"
#include "scc/parser.hpp"

namespace scc {

namespace rules {
inline constexpr const char* kRequirementNeedsPullSelf = "requirement-needs-pull-self";
inline constexpr const char* kActivationNeedsEmission = "activation-needs-emission";
inline constexpr const char* kSubscriptionNeedsEmission = "subscription-needs-emission";
inline constexpr const char* kInterferingContracts = "interfering-contracts";
inline constexpr const char* kSubscriptionTypeMismatch = "subscription-type-mismatch";
inline constexpr const char* kDisjunctionType = "disjunction-type";
inline constexpr const char* kDisjunctionWidensToTop = "disjunction-widens-to-top";
inline constexpr const char* kPullArityMismatch = "pull-arity-mismatch";
inline constexpr const char* kPullArgumentType = "pull-argument-type";
inline constexpr const char* kUnusedPullParams = "unused-pull-params";
inline constexpr const char* kCyclicPullRequirements = "cyclic-pull-requirements";
}  // namespace rules

struct Finding {
  Severity severity = Severity::Error;
  std::string rule;
  std::string subject;
  std::string message;
  /// Offending basic contract of the subject, when one is singled out.
  std::optional<std::size_t> contract;
  /// Pair of basic contract indices (interference).
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

struct CheckReport {
  std::vector<Finding> findings;

  bool passed() const;
  void merge(CheckReport other);
  std::vector<Finding> with_rule(std::string_view rule) const;
  std::size_t error_count() const;
};

CheckReport check_contract_consistency(const ContextOperator& op, const Architecture& arch);
CheckReport check_architecture_consistency(const Architecture& arch);

/// Two basic contracts interfere when their activation name sets meet.
bool interferes(const BasicContract& a, const BasicContract& b);
CheckReport check_determinacy(const Architecture& arch);

CheckReport check_typing(const Architecture& arch);
CheckReport check_pull_cycles(const Architecture& arch);

/// Consistency, determinacy, typing and pull-cycle checks together.
CheckReport check_all(const Architecture& arch);

std::string render_text(const CheckReport& r);
/// Tab-separated records: `finding <sev> <rule> <subject> <contract> <witness> <message>`
/// followed by `verdict pass|fail`.
std::string render_machine(const CheckReport& r);

}  // namespace scc
