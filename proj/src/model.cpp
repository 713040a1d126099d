#include "scc/model.hpp"

#include <algorithm>

namespace scc {

std::string to_string(const Name& n) {
  if (std::holds_alternative<SelfMarker>(n)) return "self";
  return std::get<Ref>(n).str();
}

std::string_view to_string(Emission e) {
  switch (e) {
    case Emission::Always: return "always";
    case Emission::Maybe: return "maybe";
    case Emission::Never: return "no";
  }
  return "?";
}

std::string_view to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Sensor: return "sensor";
    case ComponentKind::Context: return "context";
    case ComponentKind::Controller: return "controller";
    case ComponentKind::Actuator: return "actuator";
  }
  return "?";
}

int layer(ComponentKind k) { return static_cast<int>(k); }

const SourceDecl* Sensor::find_source(std::string_view n) const {
  for (const auto& s : sources)
    if (s.name == n) return &s;
  return nullptr;
}

const ActionDecl* Actuator::find_action(std::string_view n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

bool ContextOperator::has_pull_contract() const {
  return std::any_of(contract.basics.begin(), contract.basics.end(),
                     [](const BasicContract& b) { return b.is_pull(); });
}

bool ContextOperator::has_emitting_contract() const {
  return std::any_of(contract.basics.begin(), contract.basics.end(), [](const BasicContract& b) {
    return b.emission == Emission::Always || b.emission == Emission::Maybe;
  });
}

const std::vector<std::string>& ContextOperator::args() const {
  static const std::vector<std::string> kNone;
  return pull_params ? *pull_params : kNone;
}

namespace {

template <typename T>
const T* find_by_id(const std::vector<T>& v, std::string_view id) {
  for (const auto& x : v)
    if (x.id == id) return &x;
  return nullptr;
}

}  // namespace

const Sensor* Architecture::sensor(std::string_view id) const { return find_by_id(sensors, id); }
const ContextOperator* Architecture::context(std::string_view id) const {
  return find_by_id(contexts, id);
}
const ControlOperator* Architecture::controller(std::string_view id) const {
  return find_by_id(controllers, id);
}
const Actuator* Architecture::actuator(std::string_view id) const {
  return find_by_id(actuators, id);
}

ContextOperator& Architecture::context_mut(std::string_view id) {
  for (auto& c : contexts)
    if (c.id == id) return c;
  throw Error("unknown context operator '" + std::string(id) + "'");
}

std::optional<ComponentKind> Architecture::kind_of(std::string_view id) const {
  if (sensor(id)) return ComponentKind::Sensor;
  if (context(id)) return ComponentKind::Context;
  if (controller(id)) return ComponentKind::Controller;
  if (actuator(id)) return ComponentKind::Actuator;
  return std::nullopt;
}

const SourceDecl* Architecture::source(const Ref& r) const {
  if (!r.is_source()) return nullptr;
  const Sensor* s = sensor(r.component);
  return s ? s->find_source(r.source) : nullptr;
}

NameSet names(const Activation& a) {
  NameSet out;
  if (std::holds_alternative<PullSelf>(a)) {
    out.insert(SelfMarker{});
    return out;
  }
  for (const auto& term : std::get<PushActivation>(a).terms)
    for (const auto& r : term) out.insert(r);
  return out;
}

NameSet names(const std::vector<PullSite>& requirements) {
  NameSet out;
  for (const auto& p : requirements) out.insert(p.target);
  return out;
}

std::vector<Ref> children(std::string_view id, const Architecture& arch) {
  std::vector<Ref> out;
  auto add = [&out](const Ref& r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  auto kind = arch.kind_of(id);
  if (!kind) throw Error("unknown component '" + std::string(id) + "'");
  switch (*kind) {
    case ComponentKind::Sensor:
      break;
    case ComponentKind::Context:
      for (const auto& b : arch.context(id)->contract.basics) {
        if (const auto* p = b.push())
          for (const auto& term : p->terms)
            for (const auto& r : term) add(r);
        for (const auto& site : b.requirements) add(site.target);
      }
      break;
    case ComponentKind::Controller:
      for (const auto& s : arch.controller(id)->subscriptions) add(Ref{s});
      break;
    case ComponentKind::Actuator:
      for (const auto& c : arch.controllers)
        for (const auto& o : c.orders)
          if (o.actuator == id) add(Ref{c.id});
      break;
  }
  return out;
}

std::vector<std::string> push_parents(const Ref& child, const Architecture& arch) {
  std::vector<std::string> out;
  for (const auto& c : arch.contexts) {
    bool hit = false;
    for (const auto& b : c.contract.basics) {
      const auto* p = b.push();
      if (!p) continue;
      for (const auto& term : p->terms)
        if (std::find(term.begin(), term.end(), child) != term.end()) hit = true;
    }
    if (hit) out.push_back(c.id);
  }
  if (!child.is_source()) {
    for (const auto& c : arch.controllers)
      if (std::find(c.subscriptions.begin(), c.subscriptions.end(), child.component) !=
          c.subscriptions.end())
        out.push_back(c.id);
  }
  return out;
}

TypeLattice::TypeLattice(const std::vector<TypeDecl>& decls) {
  for (const auto& d : decls) super_.emplace(d.name, d.supertype);
}

bool TypeLattice::declared(std::string_view t) const {
  return t == kTopType || super_.find(t) != super_.end();
}

std::vector<std::string> TypeLattice::ancestors(std::string_view t) const {
  if (!declared(t)) throw Error("undeclared type '" + std::string(t) + "'");
  std::vector<std::string> chain;
  std::string cur(t);
  while (cur != kTopType) {
    if (chain.size() > super_.size()) throw Error("cyclic supertype chain at '" + cur + "'");
    chain.push_back(cur);
    auto it = super_.find(cur);
    if (it == super_.end()) throw Error("undeclared type '" + cur + "'");
    cur = it->second ? *it->second : std::string(kTopType);
  }
  chain.emplace_back(kTopType);
  return chain;
}

bool TypeLattice::is_subtype(std::string_view sub, std::string_view super) const {
  auto chain = ancestors(sub);
  return std::find(chain.begin(), chain.end(), super) != chain.end();
}

std::string TypeLattice::lub(std::string_view a, std::string_view b) const {
  auto ca = ancestors(a);
  auto cb = ancestors(b);
  for (const auto& t : cb)
    if (std::find(ca.begin(), ca.end(), t) != ca.end()) return t;
  return std::string(kTopType);
}

}  // namespace scc
