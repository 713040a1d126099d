#include "scc/handlers.hpp"

#include <map>
#include <memory>
#include <random>

#include "scc/denotation.hpp"

namespace scc {

namespace {

using Decision = std::function<bool(const std::string&, std::size_t)>;

Decision decision_of(const PackOptions& options) {
  if (options.publish_decision) return options.publish_decision;
  auto rng = std::make_shared<std::mt19937_64>(options.seed);
  return [rng](const std::string&, std::size_t) { return ((*rng)() & 1u) != 0; };
}

std::string join_data(const std::vector<Value>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + vs[i].data;
  return out;
}

std::string first_word(const std::string& s) {
  auto start = s.find_first_not_of(' ');
  if (start == std::string::npos) return {};
  return s.substr(start, s.find(' ', start) - start);
}

HandlerBody pass_through_body(const SignatureDescriptor& d, const Architecture& arch, Decision decide) {
  const ContextOperator* op = arch.context(d.owner);
  const BasicContract& b = op->contract.basics.at(d.contract);
  std::string type = op->value_type;
  // Argument types per pull callback, in callback order.
  std::vector<std::vector<std::string>> arg_types;
  for (const auto& p : d.params)
    if (p.role == ParamRole::PullCallback) arg_types.push_back(pull_args(*p.target, arch));
  bool reuse_latest = b.is_pull() && b.requirements.empty();
  std::size_t contract = d.contract;
  std::string owner = d.owner;
  bool returns = d.returns_value();

  return [=](Invocation& inv) -> std::optional<Value> {
    Value result{type, {}};
    if (reuse_latest && inv.latest()) {
      result = *inv.latest();
    } else {
      std::vector<Value> pool = inv.values();
      for (std::size_t i = 0; i < inv.pulls().size(); ++i) {
        std::string data = pool.empty() ? std::string() : pool.back().data;
        std::vector<Value> args;
        for (const auto& t : arg_types[i]) args.push_back({t, data});
        pool.push_back(inv.pulls()[i](std::move(args)));
      }
      result.data = pool.empty() ? std::string() : pool.back().data;
    }
    if (inv.can_publish() && decide(owner, contract)) inv.publisher()(result);
    if (returns) return result;
    return std::nullopt;
  };
}

void bind(Simulator& sim, const SignatureDescriptor& d, HandlerBody body) {
  if (!sim.bound(d.owner, d.name)) sim.register_handler(Handler::conforming(d, std::move(body)));
}

const SignatureDescriptor* find_method(const Simulator& sim, std::string_view op, std::string_view method,
                                       std::size_t pulls, bool publish) {
  const OperatorEntry* e = sim.manifest().op(op);
  const SignatureDescriptor* d = e ? e->method(method) : nullptr;
  if (!d) return nullptr;
  std::size_t n = 0;
  for (const auto& p : d->params) n += p.role == ParamRole::PullCallback;
  if (n != pulls || d->has_publish_callback() != publish) return nullptr;
  return d;
}

}  // namespace

void install_pass_through(Simulator& sim, const PackOptions& options) {
  Decision decide = decision_of(options);
  const Architecture& arch = sim.architecture();
  for (const auto& o : sim.manifest().operators)
    for (const auto& d : o.abstract_methods) bind(sim, d, pass_through_body(d, arch, decide));
  for (const auto& s : arch.sensors)
    for (const auto& src : s.sources) {
      Ref ref{s.id, src.name};
      if (sim.has_responder(ref)) continue;
      std::string type = src.value_type;
      std::string name = src.name;
      sim.register_source(ref, [type, name](const std::vector<Value>& args) {
        return Value{type, name + "(" + join_data(args) + ")"};
      });
    }
}

void install_webserver(Simulator& sim, const PackOptions& options) {
  const Architecture& arch = sim.architecture();

  static const std::map<std::string, std::string> kHosts{
      {"10.0.0.1", "alpha.example.org"},
      {"10.0.0.2", "beta.example.org"},
      {"10.0.0.3", "gamma.example.org"},
  };
  static const std::map<std::string, std::string> kProfiles{
      {"alpha.example.org", "alice:staff"},
      {"beta.example.org", "bob:student"},
  };

  auto lookup = [](const std::map<std::string, std::string>& table, const std::string& key,
                   const std::string& fallback) {
    auto it = table.find(key);
    return it == table.end() ? fallback : it->second;
  };

  Ref ip2host{"NSLookup", "ip2host"};
  if (arch.source(ip2host) && !sim.has_responder(ip2host))
    sim.register_source(ip2host, [=](const std::vector<Value>& args) {
      return Value{arch.source(ip2host)->value_type,
                   lookup(kHosts, args.empty() ? "" : args[0].data, "unknown.host")};
    });
  Ref host2profile{"LDAPServer", "host2profile"};
  if (arch.source(host2profile) && !sim.has_responder(host2profile))
    sim.register_source(host2profile, [=](const std::vector<Value>& args) {
      return Value{arch.source(host2profile)->value_type,
                   lookup(kProfiles, args.empty() ? "" : args[0].data, "anonymous")};
    });

  auto type_of = [&](std::string_view id) { return arch.context(id)->value_type; };

  if (const auto* d = find_method(sim, "AccessLogParser", "onNewLine", 0, false))
    bind(sim, *d, [t = type_of("AccessLogParser")](Invocation& inv) -> std::optional<Value> {
      return Value{t, inv.values().at(0).data};
    });

  if (const auto* d = find_method(sim, "AccessingProfile", "onNewAccessLogParser", 1, false))
    bind(sim, *d, [t = type_of("AccessingProfile")](Invocation& inv) -> std::optional<Value> {
      Value ip{"IPAddress", first_word(inv.values().at(0).data)};
      Value profile = inv.pulls().at(0)({ip});
      return Value{t, profile.data};
    });

  if (const auto* d = find_method(sim, "IP2Profile", "get", 2, false))
    bind(sim, *d, [t = type_of("IP2Profile")](Invocation& inv) -> std::optional<Value> {
      Value host = inv.pulls().at(0)({inv.values().at(0)});
      Value profile = inv.pulls().at(1)({Value{"String", host.data}});
      return Value{t, profile.data};
    });

  if (const auto* d = find_method(sim, "IntrusionDetector", "onNewAccessingProfile", 0, true))
    bind(sim, *d, [t = type_of("IntrusionDetector")](Invocation& inv) -> std::optional<Value> {
      const Value& profile = inv.values().at(0);
      if (profile.data == "anonymous") inv.publisher()(Value{t, profile.data});
      return std::nullopt;
    });

  install_pass_through(sim, options);
}

std::vector<std::string> handler_pack_names() { return {"pass-through", "webserver"}; }

void install_pack(Simulator& sim, std::string_view name, const PackOptions& options) {
  if (name == "pass-through")
    install_pass_through(sim, options);
  else if (name == "webserver")
    install_webserver(sim, options);
  else
    throw Error("unknown handler pack '" + std::string(name) + "' (expected pass-through or webserver)");
}

}  // namespace scc
