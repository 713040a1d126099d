#pragma once

// Event vocabulary shared by the simulator and the verifier's
// counterexamples.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scc {

/// A typed runtime value. Data is opaque text.
struct Value {
  std::string type;
  std::string data;

  friend bool operator==(const Value&, const Value&) = default;
};

/// `Type("data")`
std::string render(const Value& v);

enum class EventKind {
  SourcePublished,     // component = Sensor.source
  OperatorActivated,   // component = operator or controller
  ActivationCompleted,
  ActivationAborted,
  PullIssued,          // component = requester, peer = target
  PullReturned,
  ValuePublished,      // component = context operator
  ActionInvoked,       // component = actuator, peer = action
  GuardViolation,      // peer = callback name, detail = stale | quota
  HandlerFault,
  IntegrityFault,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from(std::string_view s);

struct Event {
  EventKind kind = EventKind::SourcePublished;
  std::string component;
  std::string peer;
  std::optional<std::size_t> contract;
  std::string method;
  std::vector<std::string> origins;
  std::vector<Value> values;
  std::string detail;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SimTrace {
  std::vector<Event> events;
  bool failed = false;

  std::size_t count(EventKind k) const;
  std::size_t count(EventKind k, std::string_view component) const;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

/// One line per event, stable field order.
std::string render_event(const Event& e);
std::string render_text(const SimTrace& t);

/// One JSON object per line.
std::string render_jsonl(const SimTrace& t);
SimTrace parse_jsonl(std::string_view text);

}  // namespace scc
