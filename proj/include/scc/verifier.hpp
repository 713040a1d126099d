#pragma once

// Design-time analyses: data reachability, the process/channel flow model
// with its Promela rendering, and an explicit-state checker for response
// and never invariants.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scc/model.hpp"
#include "scc/trace.hpp"

namespace scc {

enum class ExecMode { Serial, Parallel };

// ---------------------------------------------------------------------------
// Reachability

/// True when the data of `to` (a component or sensor source) may flow into
/// `from` through activations, requirements, subscriptions and orders.
/// Throws scc::Error for undeclared names.
bool reachable(std::string_view from, const Ref& to, const Architecture& arch);

/// Shortest child chain from `from` to `to`, both ends included.
std::optional<std::vector<std::string>> reach_witness(std::string_view from, const Ref& to,
                                                      const Architecture& arch);

/// All-pairs reachability over every component and sensor source.
class ReachMatrix {
 public:
  ReachMatrix(std::vector<Ref> nodes, std::vector<std::vector<bool>> rows);

  const std::vector<Ref>& nodes() const { return nodes_; }
  std::optional<std::size_t> index(const Ref& n) const;
  bool at(std::size_t from, std::size_t to) const { return rows_[from][to]; }
  bool reachable(const Ref& from, const Ref& to) const;

  friend bool operator==(const ReachMatrix&, const ReachMatrix&) = default;

 private:
  std::vector<Ref> nodes_;
  std::map<Ref, std::size_t> index_;
  std::vector<std::vector<bool>> rows_;
};

/// Nodes are components in declaration order (sensors, contexts,
/// controllers, actuators), each sensor followed by its sources.
std::vector<Ref> reach_nodes(const Architecture& arch);
ReachMatrix reach_matrix_serial(const Architecture& arch);
/// One graph search per row, rows distributed over OpenMP threads.
ReachMatrix reach_matrix_parallel(const Architecture& arch);
ReachMatrix reach_matrix(const Architecture& arch, ExecMode mode);

// ---------------------------------------------------------------------------
// Flow model

struct Channel {
  std::string name;
  std::size_t capacity = 1;
};

inline constexpr std::size_t kNoChannel = static_cast<std::size_t>(-1);

struct Step {
  enum class Kind { Send, Recv, Tick };
  Kind kind = Kind::Tick;
  std::size_t channel = kNoChannel;
  /// Receive target variable.
  std::string var;
  /// Either perform the step or skip it.
  bool optional = false;
  std::optional<Event> label;
};

/// One `::` alternative of a process loop: a joint receive followed by a
/// sequence of steps.
struct Branch {
  std::vector<std::size_t> guard;
  std::vector<std::string> guard_vars;
  std::optional<Event> label;
  std::vector<Step> steps;
};

enum class ProcessRole { Generator, Responder, Contract, FanOut, Controller, Actuator };

struct Process {
  std::string name;
  ProcessRole role = ProcessRole::Contract;
  std::string component;
  std::optional<std::size_t> contract;
  std::vector<Branch> branches;

  /// Sensors may stop publishing at any time; every other process is
  /// weakly fair.
  bool fair() const { return role != ProcessRole::Generator; }
};

struct FlowModel {
  std::string architecture;
  std::vector<Channel> channels;
  std::vector<Process> processes;

  std::optional<std::size_t> channel(std::string_view name) const;
  const Process* process(std::string_view name) const;
};

FlowModel build_flow_model(const Architecture& arch, std::size_t channel_capacity = 1);
std::string emit_promela(const FlowModel& model);
std::string emit_promela(const Architecture& arch, std::size_t channel_capacity = 1);

// ---------------------------------------------------------------------------
// Invariants

struct Predicate {
  enum class Kind { Publish, Activated, Action };
  Kind kind = Kind::Publish;
  Ref ref;  // Publish: source or context; Activated: component; Action: Actuator.action

  bool matches(const Event& e) const;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct Invariant {
  enum class Form { Response, Never };
  Form form = Form::Response;
  Predicate trigger;  // Never: the forbidden event
  Predicate goal;

  friend bool operator==(const Invariant&, const Invariant&) = default;
};

/// `always <pred> leadsto <pred>` or `never <pred>`, where a predicate is
/// `publish(X)`, `activated(X)` or `action(A.a)`. Names must be declared.
Invariant parse_invariant(std::string_view text, const Architecture& arch);
/// One invariant per line; blank lines and `#` comments are skipped.
std::vector<Invariant> parse_invariants(std::string_view text, const Architecture& arch);
std::string to_string(const Predicate& p);
std::string to_string(const Invariant& inv);

/// Finite-trace reading: a response holds when every trigger event is
/// followed by a goal event.
bool satisfied(const Invariant& inv, const std::vector<Event>& events);

struct CheckOptions {
  std::size_t state_bound = 1'000'000;
  std::size_t channel_capacity = 1;
  ExecMode mode = ExecMode::Serial;
};

struct Verdict {
  bool holds = true;
  /// Present iff the invariant fails.
  std::optional<std::vector<Event>> counterexample;
  /// Index into the counterexample where a repeating cycle starts.
  std::optional<std::size_t> cycle_start;
  std::size_t states = 0;
  std::size_t transitions = 0;
  bool bounded = false;
  std::size_t bound = 0;
  /// No violation was found, but some run stalls only because a send waits
  /// on a full channel.
  bool saturated = false;

  /// Holds over the whole state space at the configured channel capacity.
  bool conclusive() const { return holds && !bounded && !saturated; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Explores the flow model. Response checking assumes weak fairness for
/// every process except sensor generators, so a run may stop publishing
/// at any point.
Verdict check_invariant(const Architecture& arch, const Invariant& inv, const CheckOptions& options = {});
Verdict check_invariant(const FlowModel& model, const Invariant& inv, const CheckOptions& options = {});

struct StateSpace {
  std::size_t states = 0;
  std::size_t transitions = 0;
  bool bounded = false;
  /// Encoded states in discovery order.
  std::vector<std::string> encoded;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

/// Breadth-first enumeration of the reachable states. The serial version
/// expands one state at a time; the parallel one expands whole BFS levels
/// with OpenMP and merges in order, so both number states identically.
StateSpace explore_serial(const FlowModel& model, std::size_t bound);
StateSpace explore_parallel(const FlowModel& model, std::size_t bound);

/// Inputs for re-running a counterexample in the simulator: one publish
/// per generated source event and, per operator, the Maybe-publish
/// decisions in activation order.
struct ReplayPlan {
  std::vector<Ref> publishes;
  std::map<std::string, std::vector<bool>> decisions;
  /// Components of push-driven activations and actions in counterexample
  /// order, for SimOptions::steer.
  std::vector<std::string> schedule;
};

ReplayPlan replay_plan(const std::vector<Event>& counterexample, const Architecture& arch);

std::string render_verdict(const Invariant& inv, const Verdict& v);
std::string render_verdict_machine(const Invariant& inv, const Verdict& v);

}  // namespace scc
