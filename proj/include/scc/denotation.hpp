#pragma once

// Function types imposed on operator implementations by their contracts.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scc/model.hpp"

namespace scc {

struct TypeTerm {
  enum class Kind { Value, Function, Unit, Tuple };

  Kind kind = Kind::Unit;
  std::string name;             // Value
  std::vector<TypeTerm> items;  // Function parameters, Tuple members
  std::vector<TypeTerm> ret;    // Function result (one element)

  static TypeTerm value(std::string n);
  static TypeTerm unit();
  static TypeTerm function(std::vector<TypeTerm> params, TypeTerm result);
  static TypeTerm tuple(std::vector<TypeTerm> members);

  const TypeTerm& result() const { return ret.at(0); }
};

bool operator==(const TypeTerm& a, const TypeTerm& b);

enum class Notation { Unicode, Ascii };

/// `Access × (IPAddress → Profile) → Profile`; ASCII uses `*` and `->`.
std::string render(const TypeTerm& t, Notation n = Notation::Unicode);

enum class ParamRole { ActivationValue, PullArg, PullCallback, PublishCallback };

std::string_view to_string(ParamRole r);

struct Param {
  ParamRole role = ParamRole::ActivationValue;
  std::string name;
  TypeTerm type;
  /// Pull target for PullCallback parameters.
  std::optional<Ref> target;

  friend bool operator==(const Param&, const Param&) = default;
};

/// Abstract-method descriptor for one basic contract.
struct SignatureDescriptor {
  std::string owner;
  std::size_t contract = 0;
  std::string name;
  std::vector<Param> params;
  TypeTerm result;

  TypeTerm function_type() const;
  bool has_publish_callback() const;
  bool returns_value() const { return result.kind != TypeTerm::Kind::Unit; }

  friend bool operator==(const SignatureDescriptor&, const SignatureDescriptor&) = default;
};

/// Like render(function_type()) but shows the publish callback as
/// `publish(T)`.
std::string render(const SignatureDescriptor& d, Notation n = Notation::Unicode);

/// Declared value type of a sensor source or context operator.
std::string typeof_name(const Ref& n, const Architecture& arch);
/// Least upper bound of the members of one activation term.
std::string typeof_term(const Disjunction& term, const Architecture& arch);
/// Parameter types of a pull request on `n`.
std::vector<std::string> pull_args(const Ref& n, const Architecture& arch);
/// `args(n) → typeof(n)`; throws when `n` cannot be pulled.
TypeTerm access_typeof(const Ref& n, const Architecture& arch);

/// One descriptor per basic contract, in declaration order. Repeated
/// method names get a numeric suffix (`onNewDisjunction2`).
std::vector<SignatureDescriptor> denote(const ContextOperator& owner, const Architecture& arch);
SignatureDescriptor denote_basic(const ContextOperator& owner, std::size_t index,
                                 const Architecture& arch);

/// Whole-operator type: the function for a single contract, otherwise the
/// tuple of the per-contract functions.
TypeTerm denotation_type(const ContextOperator& owner, const Architecture& arch);

/// Method name for a basic contract: `get`, `onNewDisjunction`, or
/// `onNew` + child names joined by `And`.
std::string method_name(const BasicContract& b);

std::string lower_camel(std::string_view s);
std::string upper_camel(std::string_view s);

}  // namespace scc
