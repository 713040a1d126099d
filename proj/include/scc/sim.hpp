#pragma once

// Deterministic interpreter for an architecture and its framework
// manifest. Components handle one interaction at a time; pushes go through
// a global scheduler, pulls run synchronously inside the requester's turn.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scc/manifest.hpp"
#include "scc/model.hpp"
#include "scc/trace.hpp"

namespace scc {

enum class SimErrc {
  UnknownDescriptor,
  DuplicateBinding,
  ShapeMismatch,
  NotReady,
  UnknownComponent,
  NoPullContract,
  TypeMismatch,
  StaleCallback,
  QuotaExceeded,
  PullCycle,
  HandlerFault,
};

std::string_view to_string(SimErrc c);

class SimError : public Error {
 public:
  SimError(SimErrc code, const std::string& what) : Error(what), code_(code) {}
  SimErrc code() const { return code_; }

 private:
  SimErrc code_;
};

namespace detail {
struct SimCore;
struct CallbackState;
}  // namespace detail

/// Capability for one pull requirement of a running activation.
class PullCallback {
 public:
  Value operator()(std::vector<Value> args) const;
  const std::string& name() const;
  /// Descriptor parameter this capability was passed as.
  const std::string& param() const;
  const Ref& target() const;

 private:
  friend struct detail::SimCore;
  std::shared_ptr<detail::CallbackState> state_;
};

/// Capability to publish the activation's value (Maybe emission).
class PublishCallback {
 public:
  void operator()(Value v) const;
  const std::string& name() const;

 private:
  friend struct detail::SimCore;
  std::shared_ptr<detail::CallbackState> state_;
};

/// What a handler body sees during one activation.
class Invocation {
 public:
  const SignatureDescriptor& descriptor() const { return *descriptor_; }
  /// Activation values (push) or pull arguments, in descriptor order.
  const std::vector<Value>& values() const { return values_; }
  /// For each activation term, the child whose value was consumed.
  const std::vector<std::string>& origins() const { return origins_; }
  /// Pull capability by descriptor parameter name or by target.
  PullCallback pull(std::string_view param) const;
  PullCallback pull(const Ref& target) const;
  const std::vector<PullCallback>& pulls() const { return pulls_; }
  bool can_publish() const { return publish_.has_value(); }
  PublishCallback publisher() const;
  /// Most recent value this operator published or returned.
  const std::optional<Value>& latest() const { return latest_; }

 private:
  friend struct detail::SimCore;
  const SignatureDescriptor* descriptor_ = nullptr;
  std::vector<Value> values_;
  std::vector<std::string> origins_;
  std::vector<PullCallback> pulls_;
  std::optional<PublishCallback> publish_;
  std::optional<Value> latest_;
};

using HandlerBody = std::function<std::optional<Value>(Invocation&)>;

/// Implementation of one abstract method. The declared shape must match
/// the descriptor: parameter roles in order and whether a value is
/// returned.
struct Handler {
  std::string operator_id;
  std::string method;
  std::vector<ParamRole> param_roles;
  bool returns_value = false;
  HandlerBody body;

  /// Handler whose shape is copied from `d`.
  static Handler conforming(const SignatureDescriptor& d, HandlerBody body);
};

/// Answers pull requests on a sensor source.
using SourceResponder = std::function<Value(const std::vector<Value>& args)>;
/// Executes an actuator action.
using ActionStub = std::function<void(const std::vector<Value>& args)>;

enum class SyncPolicy { Queue, Latest };
enum class Schedule { Fifo, Random };

std::string_view to_string(SyncPolicy p);
std::string_view to_string(Schedule s);

struct SimOptions {
  SyncPolicy sync = SyncPolicy::Queue;
  std::map<std::string, SyncPolicy> sync_overrides;
  Schedule schedule = Schedule::Fifo;
  std::uint64_t seed = 0;
  /// Run even if some abstract methods have no handler; activations of
  /// unbound methods become handler faults.
  bool allow_unbound = false;
  std::size_t max_steps = 100'000;
  /// Delivery order to follow: while the next listed component has a
  /// pending delivery it goes first. The list advances on each push-driven
  /// activation or action of the listed component.
  std::vector<std::string> steer;
};

struct Stimulus {
  enum class Kind { Publish, Pull };
  Kind kind = Kind::Publish;
  Ref target;
  std::vector<Value> values;
  std::size_t line = 0;

  friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

struct Scenario {
  std::vector<Stimulus> steps;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// `publish <Sensor>.<source> <literal>` and `pull <Operator> (<literals>)`,
/// one per line; `#` starts a comment. Literals are JSON strings or bare
/// words and take the declared type of their position.
Scenario parse_scenario(std::string_view text, const Architecture& arch);
std::string format_scenario(const Scenario& s);

class Simulator {
 public:
  Simulator(Architecture arch, FrameworkManifest manifest, SimOptions options = {});
  /// Generates the manifest; throws GenerationError on failed checks.
  explicit Simulator(Architecture arch, SimOptions options = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  void register_handler(Handler h);
  void register_source(const Ref& source, SourceResponder r);
  void register_action(const Order& action, ActionStub s);

  bool bound(std::string_view op, std::string_view method) const;
  bool has_responder(const Ref& source) const;
  /// Descriptors without a handler, as `Operator.method`.
  std::vector<std::string> unbound() const;

  /// Processes each stimulus and drains the scheduler before the next.
  SimTrace run(const Scenario& scenario);
  /// Executes the target's pull contract synchronously.
  Value external_pull(std::string_view op, std::vector<Value> args);

  /// Values waiting in each activation term of one contract.
  std::vector<std::size_t> pending(std::string_view op, std::size_t contract) const;
  /// Every event since construction.
  const SimTrace& history() const;

  const Architecture& architecture() const;
  const FrameworkManifest& manifest() const;

 private:
  std::shared_ptr<detail::SimCore> core_;
};

}  // namespace scc
