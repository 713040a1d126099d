#pragma once

// Framework manifest: the implementation obligations derived from the
// denotations of every component, plus stub text and regeneration diffs.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scc/checker.hpp"
#include "scc/denotation.hpp"
#include "scc/model.hpp"

namespace scc {

inline constexpr int kManifestVersion = 1;

enum class PostAction { PublishAlways, PublishOnCallback, ReturnToCaller };

std::string_view to_string(PostAction a);

/// Invocation limits for a callback, valid only while its activation runs.
struct GuardPolicy {
  std::optional<std::size_t> max_invocations;  // empty: unlimited

  friend bool operator==(const GuardPolicy&, const GuardPolicy&) = default;
};

struct CallbackEntry {
  std::string name;
  ParamRole role = ParamRole::PullCallback;
  std::optional<Ref> target;
  TypeTerm signature;
  GuardPolicy guard;

  friend bool operator==(const CallbackEntry&, const CallbackEntry&) = default;
};

struct CallingMethod {
  std::string triggers;
  std::string invokes;
  std::vector<PostAction> post_actions;

  friend bool operator==(const CallingMethod&, const CallingMethod&) = default;
};

struct OperatorEntry {
  std::string id;
  std::string value_type;
  std::vector<SignatureDescriptor> abstract_methods;
  std::vector<CallbackEntry> callbacks;
  std::vector<CallingMethod> calling_methods;

  const SignatureDescriptor* method(std::string_view name) const;
  const CallbackEntry* callback(std::string_view name) const;
  const CallbackEntry* callback_for(const Ref& target) const;
  const CallbackEntry* publish_callback() const;

  friend bool operator==(const OperatorEntry&, const OperatorEntry&) = default;
};

struct SourceEntry {
  std::string name;
  std::string value_type;
  TypeTerm access;

  friend bool operator==(const SourceEntry&, const SourceEntry&) = default;
};

struct SensorEntry {
  std::string id;
  std::vector<SourceEntry> sources;
  friend bool operator==(const SensorEntry&, const SensorEntry&) = default;
};

struct ControllerEntry {
  std::string id;
  std::vector<std::string> subscriptions;
  std::vector<std::string> orders;
  friend bool operator==(const ControllerEntry&, const ControllerEntry&) = default;
};

struct ActionEntry {
  std::string name;
  TypeTerm signature;
  friend bool operator==(const ActionEntry&, const ActionEntry&) = default;
};

struct ActuatorEntry {
  std::string id;
  std::vector<ActionEntry> actions;
  friend bool operator==(const ActuatorEntry&, const ActuatorEntry&) = default;
};

struct FrameworkManifest {
  int version = kManifestVersion;
  std::string architecture;
  std::vector<SensorEntry> sensors;
  std::vector<OperatorEntry> operators;
  std::vector<ControllerEntry> controllers;
  std::vector<ActuatorEntry> actuators;

  const OperatorEntry* op(std::string_view id) const;

  friend bool operator==(const FrameworkManifest&, const FrameworkManifest&) = default;
};

struct GuardConfig {
  std::optional<std::size_t> pull_max;         // default: unlimited
  std::optional<std::size_t> publish_max = 1;
};

class GenerationError : public Error {
 public:
  GenerationError(std::string what, CheckReport report)
      : Error(std::move(what)), report_(std::move(report)) {}
  const CheckReport& report() const { return report_; }

 private:
  CheckReport report_;
};

/// Throws GenerationError when the architecture fails its checks.
FrameworkManifest generate_manifest(const Architecture& arch, const GuardConfig& guards = {});

/// Canonical JSON (sorted keys, two-space indent, trailing newline).
std::string serialize(const FrameworkManifest& m);
FrameworkManifest deserialize(std::string_view json_text);

std::string render_stubs(const FrameworkManifest& m);

struct ManifestChange {
  enum class Kind { Added, Removed, Changed };
  Kind kind;
  std::string path;
  std::string detail;

  friend bool operator==(const ManifestChange&, const ManifestChange&) = default;
};

std::string_view to_string(ManifestChange::Kind k);

/// Obligations to add, remove or re-sign, sorted by path.
std::vector<ManifestChange> diff_manifests(const FrameworkManifest& before, const FrameworkManifest& after);

}  // namespace scc
