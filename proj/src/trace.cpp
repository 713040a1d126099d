#include "scc/trace.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "json.hpp"
#include "scc/model.hpp"

namespace scc {

using nlohmann::json;

std::string render(const Value& v) { return v.type + "(" + json(v.data).dump() + ")"; }

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 11> kKindNames{{
    {EventKind::SourcePublished, "source-published"},
    {EventKind::OperatorActivated, "activated"},
    {EventKind::ActivationCompleted, "completed"},
    {EventKind::ActivationAborted, "aborted"},
    {EventKind::PullIssued, "pull-issued"},
    {EventKind::PullReturned, "pull-returned"},
    {EventKind::ValuePublished, "published"},
    {EventKind::ActionInvoked, "action"},
    {EventKind::GuardViolation, "guard-violation"},
    {EventKind::HandlerFault, "handler-fault"},
    {EventKind::IntegrityFault, "integrity-fault"},
}};

std::string values_text(const std::vector<Value>& vs) {
  std::string out = "(";
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ", " : "") + render(vs[i]);
  return out + ")";
}

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<EventKind> event_kind_from(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

std::size_t SimTrace::count(EventKind k) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const Event& e) { return e.kind == k; }));
}

std::size_t SimTrace::count(EventKind k, std::string_view component) const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const Event& e) {
    return e.kind == k && e.component == component;
  }));
}

std::string render_event(const Event& e) {
  std::ostringstream os;
  os << to_string(e.kind) << ' ' << e.component;
  if (e.contract) os << '#' << *e.contract;
  switch (e.kind) {
    case EventKind::PullIssued: os << " -> " << e.peer; break;
    case EventKind::PullReturned: os << " <- " << e.peer; break;
    case EventKind::ActionInvoked: os << '.' << e.peer; break;
    default:
      if (!e.peer.empty()) os << " callback=" << e.peer;
  }
  if (!e.method.empty()) os << ' ' << e.method;
  if (!e.origins.empty()) os << " from=" << join(e.origins, ",");
  if (!e.values.empty()) {
    if (e.kind == EventKind::OperatorActivated || e.kind == EventKind::PullIssued ||
        e.kind == EventKind::ActionInvoked)
      os << " args=" << values_text(e.values);
    else
      os << " value=" << render(e.values.front());
  }
  if (!e.detail.empty()) os << " detail=" << json(e.detail).dump();
  return os.str();
}

std::string render_text(const SimTrace& t) {
  std::string out;
  for (const auto& e : t.events) out += render_event(e) + "\n";
  if (t.failed) out += "verdict failed\n";
  return out;
}

std::string render_jsonl(const SimTrace& t) {
  std::string out;
  std::size_t seq = 0;
  for (const auto& e : t.events) {
    json j{{"seq", seq++}, {"kind", to_string(e.kind)}, {"component", e.component}};
    if (!e.peer.empty()) j["peer"] = e.peer;
    if (e.contract) j["contract"] = *e.contract;
    if (!e.method.empty()) j["method"] = e.method;
    if (!e.origins.empty()) j["origins"] = e.origins;
    if (!e.values.empty()) {
      json vs = json::array();
      for (const auto& v : e.values) vs.push_back({{"type", v.type}, {"data", v.data}});
      j["values"] = vs;
    }
    if (!e.detail.empty()) j["detail"] = e.detail;
    out += j.dump() + "\n";
  }
  if (t.failed) out += json{{"verdict", "failed"}}.dump() + "\n";
  return out;
}

SimTrace parse_jsonl(std::string_view text) {
  SimTrace t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      if (j.contains("verdict")) {
        t.failed = j.at("verdict") == "failed";
        continue;
      }
      Event e;
      auto kind = event_kind_from(j.at("kind").get<std::string>());
      if (!kind) throw Error("unknown event kind");
      e.kind = *kind;
      e.component = j.at("component").get<std::string>();
      e.peer = j.value("peer", "");
      if (j.contains("contract")) e.contract = j.at("contract").get<std::size_t>();
      e.method = j.value("method", "");
      if (j.contains("origins")) e.origins = j.at("origins").get<std::vector<std::string>>();
      if (j.contains("values"))
        for (const auto& v : j.at("values"))
          e.values.push_back({v.at("type").get<std::string>(), v.at("data").get<std::string>()});
      e.detail = j.value("detail", "");
      t.events.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw Error("trace line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return t;
}

}  // namespace scc
