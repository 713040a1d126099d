#pragma once

// Architecture object model for Sense/Compute/Control applications:
// components, interaction contracts and the declared type lattice.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Name of the implicit top of the type lattice.
inline constexpr std::string_view kTopType = "Top";

struct TypeDecl {
  std::string name;
  std::optional<std::string> supertype;

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

/// Reference to a component (`source` empty) or to a sensor source
/// (`Sensor.source`).
struct Ref {
  std::string component;
  std::string source;

  Ref() = default;
  Ref(std::string c) : component(std::move(c)) {}
  Ref(std::string c, std::string s) : component(std::move(c)), source(std::move(s)) {}

  bool is_source() const { return !source.empty(); }
  std::string str() const { return is_source() ? component + "." + source : component; }

  friend auto operator<=>(const Ref&, const Ref&) = default;
  friend bool operator==(const Ref&, const Ref&) = default;
};

/// Stands for the owning operator in `names(pull)`; never a component id.
struct SelfMarker {
  friend auto operator<=>(const SelfMarker&, const SelfMarker&) = default;
  friend bool operator==(const SelfMarker&, const SelfMarker&) = default;
};

using Name = std::variant<SelfMarker, Ref>;
using NameSet = std::set<Name>;

std::string to_string(const Name& n);

struct SourceDecl {
  std::string name;
  std::string value_type;
  std::vector<std::string> pull_params;

  friend bool operator==(const SourceDecl&, const SourceDecl&) = default;
};

struct Sensor {
  std::string id;
  std::vector<SourceDecl> sources;

  const SourceDecl* find_source(std::string_view name) const;
  friend bool operator==(const Sensor&, const Sensor&) = default;
};

/// One term of a push activation: a non-empty disjunction of children.
using Disjunction = std::vector<Ref>;

struct PushActivation {
  std::vector<Disjunction> terms;
  friend bool operator==(const PushActivation&, const PushActivation&) = default;
};

struct PullSelf {
  friend bool operator==(const PullSelf&, const PullSelf&) = default;
};

using Activation = std::variant<PushActivation, PullSelf>;

/// A data requirement target. `arg_types` is an optional explicit
/// signature written at the pull site; when absent the declared pull
/// parameters of the target are used.
struct PullSite {
  Ref target;
  std::optional<std::vector<std::string>> arg_types;

  friend bool operator==(const PullSite&, const PullSite&) = default;
};

enum class Emission { Always, Maybe, Never };

std::string_view to_string(Emission e);

struct BasicContract {
  Activation activation;
  std::vector<PullSite> requirements;
  Emission emission = Emission::Never;

  bool is_pull() const { return std::holds_alternative<PullSelf>(activation); }
  const PushActivation* push() const { return std::get_if<PushActivation>(&activation); }

  friend bool operator==(const BasicContract&, const BasicContract&) = default;
};

/// ∥-composition of basic contracts, in declaration order.
struct InteractionContract {
  std::vector<BasicContract> basics;
  friend bool operator==(const InteractionContract&, const InteractionContract&) = default;
};

struct ContextOperator {
  std::string id;
  std::string value_type;
  std::optional<std::vector<std::string>> pull_params;
  InteractionContract contract;

  bool has_pull_contract() const;
  bool has_emitting_contract() const;
  const std::vector<std::string>& args() const;

  friend bool operator==(const ContextOperator&, const ContextOperator&) = default;
};

struct Order {
  std::string actuator;
  std::string action;

  std::string str() const { return actuator + "." + action; }
  friend auto operator<=>(const Order&, const Order&) = default;
  friend bool operator==(const Order&, const Order&) = default;
};

/// Fixed-form contract: activated by a push from any subscription,
/// forwards the value to every order.
struct ControlOperator {
  std::string id;
  std::vector<std::string> subscriptions;
  std::vector<Order> orders;

  friend bool operator==(const ControlOperator&, const ControlOperator&) = default;
};

struct ActionDecl {
  std::string name;
  std::vector<std::string> param_types;
  friend bool operator==(const ActionDecl&, const ActionDecl&) = default;
};

struct Actuator {
  std::string id;
  std::vector<ActionDecl> actions;

  const ActionDecl* find_action(std::string_view name) const;
  friend bool operator==(const Actuator&, const Actuator&) = default;
};

enum class ComponentKind { Sensor, Context, Controller, Actuator };

std::string_view to_string(ComponentKind k);

struct Architecture {
  std::string name;
  std::vector<TypeDecl> types;
  std::vector<Sensor> sensors;
  std::vector<ContextOperator> contexts;
  std::vector<ControlOperator> controllers;
  std::vector<Actuator> actuators;

  std::optional<ComponentKind> kind_of(std::string_view id) const;
  const Sensor* sensor(std::string_view id) const;
  const ContextOperator* context(std::string_view id) const;
  const ControlOperator* controller(std::string_view id) const;
  const Actuator* actuator(std::string_view id) const;
  const SourceDecl* source(const Ref& r) const;

  ContextOperator& context_mut(std::string_view id);

  std::size_t component_count() const {
    return sensors.size() + contexts.size() + controllers.size() + actuators.size();
  }

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Flat set of names used in an activation; disjunctions are expanded and a
/// pull activation yields only the self marker.
NameSet names(const Activation& a);
NameSet names(const std::vector<PullSite>& requirements);

/// Children of a component: activation/requirement names of a context
/// operator (self excluded), subscriptions of a controller, controllers
/// ordering an actuator. Sensors have none.
std::vector<Ref> children(std::string_view id, const Architecture& arch);

/// Parents that receive pushes from `child` (context operators whose
/// activation names it, then controllers subscribing to it).
std::vector<std::string> push_parents(const Ref& child, const Architecture& arch);

/// Layer rank: sensor 0, context 1, controller 2, actuator 3.
int layer(ComponentKind k);

/// Single-inheritance type lattice with an implicit top.
class TypeLattice {
 public:
  explicit TypeLattice(const std::vector<TypeDecl>& decls);

  bool declared(std::string_view t) const;
  /// Chain from `t` up to and including the top type.
  std::vector<std::string> ancestors(std::string_view t) const;
  bool is_subtype(std::string_view sub, std::string_view super) const;
  /// Smallest common supertype.
  std::string lub(std::string_view a, std::string_view b) const;

 private:
  std::map<std::string, std::optional<std::string>, std::less<>> super_;
};

}  // namespace scc
