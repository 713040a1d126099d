#include "scc/manifest.hpp"

#include <map>
#include <sstream>

#include "json.hpp"
#include "scc/parser.hpp"

namespace scc {

using nlohmann::json;

std::string_view to_string(PostAction a) {
  switch (a) {
    case PostAction::PublishAlways: return "publish-always";
    case PostAction::PublishOnCallback: return "publish-on-callback";
    case PostAction::ReturnToCaller: return "return-to-caller";
  }
  return "?";
}

std::string_view to_string(ManifestChange::Kind k) {
  switch (k) {
    case ManifestChange::Kind::Added: return "added";
    case ManifestChange::Kind::Removed: return "removed";
    case ManifestChange::Kind::Changed: return "changed";
  }
  return "?";
}

const SignatureDescriptor* OperatorEntry::method(std::string_view name) const {
  for (const auto& m : abstract_methods)
    if (m.name == name) return &m;
  return nullptr;
}

const CallbackEntry* OperatorEntry::callback(std::string_view name) const {
  for (const auto& c : callbacks)
    if (c.name == name) return &c;
  return nullptr;
}

const CallbackEntry* OperatorEntry::callback_for(const Ref& target) const {
  for (const auto& c : callbacks)
    if (c.target && *c.target == target) return &c;
  return nullptr;
}

const CallbackEntry* OperatorEntry::publish_callback() const {
  for (const auto& c : callbacks)
    if (c.role == ParamRole::PublishCallback) return &c;
  return nullptr;
}

const OperatorEntry* FrameworkManifest::op(std::string_view id) const {
  for (const auto& o : operators)
    if (o.id == id) return &o;
  return nullptr;
}

namespace {

std::string triggers_of(const BasicContract& b) {
  const auto* push = b.push();
  if (!push) return "pull(self)";
  std::string out = "push(";
  for (std::size_t i = 0; i < push->terms.size(); ++i) {
    if (i) out += ", ";
    for (std::size_t k = 0; k < push->terms[i].size(); ++k) out += (k ? " | " : "") + push->terms[i][k].str();
  }
  return out + ")";
}

std::vector<PostAction> post_actions_of(const BasicContract& b) {
  std::vector<PostAction> out;
  if (b.is_pull()) out.push_back(PostAction::ReturnToCaller);
  if (b.emission == Emission::Always) out.push_back(PostAction::PublishAlways);
  if (b.emission == Emission::Maybe) out.push_back(PostAction::PublishOnCallback);
  return out;
}

std::string pull_callback_name(const ContextOperator& op, const Ref& target) {
  if (!target.is_source()) return "PullFrom" + target.component;
  // Disambiguate with the source name when the operator pulls another
  // source of the same sensor.
  for (const auto& b : op.contract.basics)
    for (const auto& site : b.requirements)
      if (site.target.is_source() && site.target.component == target.component &&
          site.target.source != target.source)
        return "PullFrom" + target.component + upper_camel(target.source);
  return "PullFrom" + target.component;
}

OperatorEntry operator_entry(const ContextOperator& op, const Architecture& arch, const GuardConfig& guards) {
  OperatorEntry e;
  e.id = op.id;
  e.value_type = op.value_type;
  e.abstract_methods = denote(op, arch);
  for (std::size_t i = 0; i < op.contract.basics.size(); ++i) {
    const auto& b = op.contract.basics[i];
    e.calling_methods.push_back({triggers_of(b), e.abstract_methods[i].name, post_actions_of(b)});
    for (const auto& site : b.requirements) {
      if (e.callback_for(site.target)) continue;
      e.callbacks.push_back({pull_callback_name(op, site.target), ParamRole::PullCallback, site.target,
                             access_typeof(site.target, arch), GuardPolicy{guards.pull_max}});
    }
  }
  if (op.has_emitting_contract()) {
    bool maybe = false;
    for (const auto& b : op.contract.basics) maybe = maybe || b.emission == Emission::Maybe;
    if (maybe)
      e.callbacks.push_back({"Publish", ParamRole::PublishCallback, std::nullopt,
                             TypeTerm::function({TypeTerm::value(op.value_type)}, TypeTerm::unit()),
                             GuardPolicy{guards.publish_max}});
  }
  return e;
}

}  // namespace

FrameworkManifest generate_manifest(const Architecture& arch, const GuardConfig& guards) {
  CheckReport report = check_all(arch);
  if (!report.passed())
    throw GenerationError("architecture '" + arch.name + "' fails its checks (" +
                              std::to_string(report.error_count()) + " error(s))",
                          std::move(report));
  FrameworkManifest m;
  m.architecture = arch.name;
  for (const auto& s : arch.sensors) {
    SensorEntry se{s.id, {}};
    for (const auto& src : s.sources)
      se.sources.push_back({src.name, src.value_type, access_typeof(Ref{s.id, src.name}, arch)});
    m.sensors.push_back(std::move(se));
  }
  for (const auto& op : arch.contexts) m.operators.push_back(operator_entry(op, arch, guards));
  for (const auto& c : arch.controllers) {
    ControllerEntry ce{c.id, c.subscriptions, {}};
    for (const auto& o : c.orders) ce.orders.push_back(o.str());
    m.controllers.push_back(std::move(ce));
  }
  for (const auto& a : arch.actuators) {
    ActuatorEntry ae{a.id, {}};
    for (const auto& act : a.actions) {
      std::vector<TypeTerm> ps;
      for (const auto& t : act.param_types) ps.push_back(TypeTerm::value(t));
      ae.actions.push_back({act.name, TypeTerm::function(std::move(ps), TypeTerm::unit())});
    }
    m.actuators.push_back(std::move(ae));
  }
  return m;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json term_json(const TypeTerm& t) {
  switch (t.kind) {
    case TypeTerm::Kind::Value: return {{"kind", "value"}, {"name", t.name}};
    case TypeTerm::Kind::Unit: return {{"kind", "unit"}};
    case TypeTerm::Kind::Function: {
      json ps = json::array();
      for (const auto& p : t.items) ps.push_back(term_json(p));
      return {{"kind", "function"}, {"params", ps}, {"result", term_json(t.result())}};
    }
    case TypeTerm::Kind::Tuple: {
      json ms = json::array();
      for (const auto& m : t.items) ms.push_back(term_json(m));
      return {{"kind", "tuple"}, {"members", ms}};
    }
  }
  return {};
}

TypeTerm term_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "value") return TypeTerm::value(j.at("name").get<std::string>());
  if (kind == "unit") return TypeTerm::unit();
  if (kind == "function") {
    std::vector<TypeTerm> ps;
    for (const auto& p : j.at("params")) ps.push_back(term_from(p));
    return TypeTerm::function(std::move(ps), term_from(j.at("result")));
  }
  if (kind == "tuple") {
    std::vector<TypeTerm> ms;
    for (const auto& m : j.at("members")) ms.push_back(term_from(m));
    return TypeTerm::tuple(std::move(ms));
  }
  throw Error("unknown type term kind '" + kind + "'");
}

ParamRole role_from(const std::string& s) {
  for (auto r : {ParamRole::ActivationValue, ParamRole::PullArg, ParamRole::PullCallback,
                 ParamRole::PublishCallback})
    if (to_string(r) == s) return r;
  throw Error("unknown parameter role '" + s + "'");
}

PostAction post_action_from(const std::string& s) {
  for (auto a : {PostAction::PublishAlways, PostAction::PublishOnCallback, PostAction::ReturnToCaller})
    if (to_string(a) == s) return a;
  throw Error("unknown post action '" + s + "'");
}

json guard_json(const GuardPolicy& g) {
  json j{{"scope", "handler-lifetime"}};
  if (g.max_invocations)
    j["maxInvocations"] = *g.max_invocations;
  else
    j["maxInvocations"] = "unlimited";
  return j;
}

GuardPolicy guard_from(const json& j) {
  const json& m = j.at("maxInvocations");
  if (m.is_string()) return GuardPolicy{std::nullopt};
  return GuardPolicy{m.get<std::size_t>()};
}

json descriptor_json(const SignatureDescriptor& d) {
  json ps = json::array();
  for (const auto& p : d.params) {
    json jp{{"role", to_string(p.role)}, {"name", p.name}, {"type", term_json(p.type)}};
    if (p.target) jp["target"] = p.target->str();
    ps.push_back(jp);
  }
  return {{"name", d.name},
          {"contract", d.contract},
          {"params", ps},
          {"result", term_json(d.result)},
          {"signature", render(d)}};
}

SignatureDescriptor descriptor_from(const json& j, const std::string& owner) {
  SignatureDescriptor d;
  d.owner = owner;
  d.name = j.at("name").get<std::string>();
  d.contract = j.at("contract").get<std::size_t>();
  for (const auto& jp : j.at("params")) {
    Param p{role_from(jp.at("role").get<std::string>()), jp.at("name").get<std::string>(),
            term_from(jp.at("type")), std::nullopt};
    if (jp.contains("target")) p.target = parse_ref(jp.at("target").get<std::string>());
    d.params.push_back(std::move(p));
  }
  d.result = term_from(j.at("result"));
  return d;
}

json to_json(const FrameworkManifest& m) {
  json j;
  j["manifestVersion"] = m.version;
  j["architecture"] = m.architecture;
  json sensors = json::array();
  for (const auto& s : m.sensors) {
    json srcs = json::array();
    for (const auto& src : s.sources)
      srcs.push_back({{"name", src.name}, {"valueType", src.value_type}, {"access", term_json(src.access)}});
    sensors.push_back({{"id", s.id}, {"sources", srcs}});
  }
  j["sensors"] = sensors;
  json ops = json::array();
  for (const auto& o : m.operators) {
    json methods = json::array();
    for (const auto& d : o.abstract_methods) methods.push_back(descriptor_json(d));
    json cbs = json::array();
    for (const auto& c : o.callbacks) {
      json jc{{"name", c.name}, {"role", to_string(c.role)}, {"signature", term_json(c.signature)},
              {"guard", guard_json(c.guard)}};
      if (c.target) jc["target"] = c.target->str();
      cbs.push_back(jc);
    }
    json calls = json::array();
    for (const auto& c : o.calling_methods) {
      json posts = json::array();
      for (auto a : c.post_actions) posts.push_back(to_string(a));
      calls.push_back({{"triggers", c.triggers}, {"invokes", c.invokes}, {"postActions", posts}});
    }
    ops.push_back({{"id", o.id},
                   {"valueType", o.value_type},
                   {"abstractMethods", methods},
                   {"callbacks", cbs},
                   {"callingMethods", calls}});
  }
  j["operators"] = ops;
  json ctrls = json::array();
  for (const auto& c : m.controllers)
    ctrls.push_back({{"id", c.id}, {"subscriptions", c.subscriptions}, {"orders", c.orders}});
  j["controllers"] = ctrls;
  json acts = json::array();
  for (const auto& a : m.actuators) {
    json actions = json::array();
    for (const auto& act : a.actions)
      actions.push_back({{"name", act.name}, {"signature", term_json(act.signature)}});
    acts.push_back({{"id", a.id}, {"actions", actions}});
  }
  j["actuators"] = acts;
  return j;
}

FrameworkManifest from_json(const json& j) {
  FrameworkManifest m;
  m.version = j.at("manifestVersion").get<int>();
  if (m.version != kManifestVersion)
    throw Error("unsupported manifest version " + std::to_string(m.version));
  m.architecture = j.at("architecture").get<std::string>();
  for (const auto& js : j.at("sensors")) {
    SensorEntry s{js.at("id").get<std::string>(), {}};
    for (const auto& src : js.at("sources"))
      s.sources.push_back({src.at("name").get<std::string>(), src.at("valueType").get<std::string>(),
                           term_from(src.at("access"))});
    m.sensors.push_back(std::move(s));
  }
  for (const auto& jo : j.at("operators")) {
    OperatorEntry o;
    o.id = jo.at("id").get<std::string>();
    o.value_type = jo.at("valueType").get<std::string>();
    for (const auto& jd : jo.at("abstractMethods")) o.abstract_methods.push_back(descriptor_from(jd, o.id));
    for (const auto& jc : jo.at("callbacks")) {
      CallbackEntry c{jc.at("name").get<std::string>(), role_from(jc.at("role").get<std::string>()),
                      std::nullopt, term_from(jc.at("signature")), guard_from(jc.at("guard"))};
      if (jc.contains("target")) c.target = parse_ref(jc.at("target").get<std::string>());
      o.callbacks.push_back(std::move(c));
    }
    for (const auto& jc : jo.at("callingMethods")) {
      CallingMethod c{jc.at("triggers").get<std::string>(), jc.at("invokes").get<std::string>(), {}};
      for (const auto& a : jc.at("postActions")) c.post_actions.push_back(post_action_from(a.get<std::string>()));
      o.calling_methods.push_back(std::move(c));
    }
    m.operators.push_back(std::move(o));
  }
  for (const auto& jc : j.at("controllers"))
    m.controllers.push_back({jc.at("id").get<std::string>(),
                             jc.at("subscriptions").get<std::vector<std::string>>(),
                             jc.at("orders").get<std::vector<std::string>>()});
  for (const auto& ja : j.at("actuators")) {
    ActuatorEntry a{ja.at("id").get<std::string>(), {}};
    for (const auto& act : ja.at("actions"))
      a.actions.push_back({act.at("name").get<std::string>(), term_from(act.at("signature"))});
    m.actuators.push_back(std::move(a));
  }
  return m;
}

}  // namespace

std::string serialize(const FrameworkManifest& m) { return to_json(m).dump(2) + "\n"; }

FrameworkManifest deserialize(std::string_view text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Stubs and diffs

namespace {

std::string stub_signature(const SignatureDescriptor& d) {
  std::string out = d.name + "(";
  for (std::size_t i = 0; i < d.params.size(); ++i) {
    if (i) out += ", ";
    out += d.params[i].name + ": " + render(d.params[i].type, Notation::Ascii);
  }
  out += ") -> " + render(d.result, Notation::Ascii);
  return out;
}

std::string guard_text(const GuardPolicy& g) {
  if (!g.max_invocations) return "unlimited per activation";
  return "at most " + std::to_string(*g.max_invocations) + " per activation";
}

std::string calling_text(const CallingMethod& c) {
  std::string out = c.invokes + " on " + c.triggers + " then ";
  if (c.post_actions.empty()) return out + "nothing";
  for (std::size_t i = 0; i < c.post_actions.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c.post_actions[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

}  // namespace

std::string render_stubs(const FrameworkManifest& m) {
  std::ostringstream os;
  os << "// Implementation obligations for architecture " << m.architecture << " (manifest version "
     << m.version << ")\n";
  for (const auto& s : m.sensors) {
    os << "\nsensor " << s.id << "\n";
    for (const auto& src : s.sources)
      os << "  source " << src.name << ": " << src.value_type << "; pull " << render(src.access, Notation::Ascii)
         << "\n";
  }
  for (const auto& o : m.operators) {
    os << "\ncontext " << o.id << ": " << o.value_type << "\n";
    for (const auto& d : o.abstract_methods) os << "  abstract " << stub_signature(d) << "\n";
    for (const auto& c : o.callbacks)
      os << "  callback " << c.name << ": " << render(c.signature, Notation::Ascii) << " [" << guard_text(c.guard)
         << "]\n";
    for (const auto& c : o.calling_methods) os << "  calling " << calling_text(c) << "\n";
  }
  for (const auto& c : m.controllers)
    os << "\ncontroller " << c.id << "\n  on push(" << join(c.subscriptions) << ") do " << join(c.orders) << "\n";
  for (const auto& a : m.actuators) {
    os << "\nactuator " << a.id << "\n";
    for (const auto& act : a.actions)
      os << "  action " << act.name << ": " << render(act.signature, Notation::Ascii) << "\n";
  }
  return os.str();
}

namespace {

std::map<std::string, std::string> flatten(const FrameworkManifest& m) {
  std::map<std::string, std::string> out;
  out["architecture"] = m.architecture;
  for (const auto& s : m.sensors) {
    out["sensors/" + s.id] = "sensor";
    for (const auto& src : s.sources)
      out["sensors/" + s.id + "/sources/" + src.name] =
          src.value_type + "; pull " + render(src.access, Notation::Ascii);
  }
  for (const auto& o : m.operators) {
    std::string base = "operators/" + o.id;
    out[base] = o.value_type;
    for (const auto& d : o.abstract_methods) out[base + "/abstractMethods/" + d.name] = stub_signature(d);
    for (const auto& c : o.callbacks)
      out[base + "/callbacks/" + c.name] = render(c.signature, Notation::Ascii) + " [" + guard_text(c.guard) + "]";
    for (const auto& c : o.calling_methods) out[base + "/callingMethods/" + c.invokes] = calling_text(c);
  }
  for (const auto& c : m.controllers)
    out["controllers/" + c.id] = "on push(" + join(c.subscriptions) + ") do " + join(c.orders);
  for (const auto& a : m.actuators) {
    out["actuators/" + a.id] = "actuator";
    for (const auto& act : a.actions)
      out["actuators/" + a.id + "/actions/" + act.name] = render(act.signature, Notation::Ascii);
  }
  return out;
}

}  // namespace

std::vector<ManifestChange> diff_manifests(const FrameworkManifest& before, const FrameworkManifest& after) {
  auto a = flatten(before);
  auto b = flatten(after);
  std::vector<ManifestChange> out;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back({ManifestChange::Kind::Removed, ia->first, ia->second});
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      out.push_back({ManifestChange::Kind::Added, ib->first, ib->second});
      ++ib;
    } else {
      if (ia->second != ib->second)
        out.push_back({ManifestChange::Kind::Changed, ia->first, ia->second + " => " + ib->second});
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace scc
