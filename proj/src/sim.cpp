#include "scc/sim.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "scc/denotation.hpp"

namespace scc {

std::string_view to_string(SimErrc c) {
  switch (c) {
    case SimErrc::UnknownDescriptor: return "unknown-descriptor";
    case SimErrc::DuplicateBinding: return "duplicate-binding";
    case SimErrc::ShapeMismatch: return "shape-mismatch";
    case SimErrc::NotReady: return "not-ready";
    case SimErrc::UnknownComponent: return "unknown-component";
    case SimErrc::NoPullContract: return "no-pull-contract";
    case SimErrc::TypeMismatch: return "type-mismatch";
    case SimErrc::StaleCallback: return "stale-callback";
    case SimErrc::QuotaExceeded: return "quota-exceeded";
    case SimErrc::PullCycle: return "pull-cycle";
    case SimErrc::HandlerFault: return "handler-fault";
  }
  return "?";
}

std::string_view to_string(SyncPolicy p) { return p == SyncPolicy::Queue ? "queue" : "latest"; }
std::string_view to_string(Schedule s) { return s == Schedule::Fifo ? "fifo" : "random"; }

Handler Handler::conforming(const SignatureDescriptor& d, HandlerBody body) {
  Handler h;
  h.operator_id = d.owner;
  h.method = d.name;
  for (const auto& p : d.params) h.param_roles.push_back(p.role);
  h.returns_value = d.returns_value();
  h.body = std::move(body);
  return h;
}

namespace detail {

struct ActivationToken {
  bool alive = true;
};

struct CallbackState {
  std::weak_ptr<SimCore> core;
  std::shared_ptr<ActivationToken> token;
  std::string owner;
  std::string name;
  std::string param;
  std::optional<Ref> target;
  GuardPolicy guard;
  std::size_t calls = 0;
};

struct Delivery {
  std::string target;
  Ref from;
  Value value;
  std::string action;  // orders only
  std::uint64_t seq = 0;
};

struct Pending {
  Value value;
  std::string origin;
};

struct OpState {
  const ContextOperator* decl = nullptr;
  const OperatorEntry* entry = nullptr;
  SyncPolicy sync = SyncPolicy::Queue;
  std::vector<std::vector<std::deque<Pending>>> queues;  // [contract][term]
  std::optional<Value> latest;
};

struct Outcome {
  bool ok = false;
  std::optional<Value> value;
  std::string error;
};

struct SimCore : std::enable_shared_from_this<SimCore> {
  Architecture arch;
  FrameworkManifest manifest;
  SimOptions options;
  TypeLattice lattice;
  std::map<std::string, std::map<std::string, Handler, std::less<>>, std::less<>> handlers;
  std::map<Ref, SourceResponder> responders;
  std::map<Order, ActionStub> actions;
  std::map<std::string, OpState, std::less<>> ops;
  std::map<Ref, Value> last_source_value;
  std::map<std::string, std::deque<Delivery>> mailboxes;
  std::uint64_t next_seq = 0;
  std::size_t steer_at = 0;
  std::mt19937_64 rng;
  SimTrace history;
  std::vector<std::string> call_stack;

  SimCore(Architecture a, FrameworkManifest m, SimOptions o)
      : arch(std::move(a)), manifest(std::move(m)), options(std::move(o)), lattice(arch.types),
        rng(options.seed) {
    for (const auto& op : arch.contexts) {
      const OperatorEntry* entry = manifest.op(op.id);
      if (!entry || entry->abstract_methods.size() != op.contract.basics.size())
        throw Error("manifest does not match architecture at operator '" + op.id + "'");
      OpState st;
      st.decl = &op;
      st.entry = entry;
      auto it = options.sync_overrides.find(op.id);
      st.sync = it == options.sync_overrides.end() ? options.sync : it->second;
      for (const auto& b : op.contract.basics)
        st.queues.emplace_back(b.push() ? b.push()->terms.size() : 0);
      ops.emplace(op.id, std::move(st));
    }
  }

  void emit(Event e) {
    if (e.kind == EventKind::HandlerFault || e.kind == EventKind::IntegrityFault ||
        e.kind == EventKind::GuardViolation)
      history.failed = true;
    if (steer_at < options.steer.size() && e.component == options.steer[steer_at] && delivery_driven(e)) ++steer_at;
    history.events.push_back(std::move(e));
  }

  bool delivery_driven(const Event& e) const {
    if (e.kind == EventKind::ActionInvoked) return true;
    if (e.kind != EventKind::OperatorActivated) return false;
    auto it = ops.find(e.component);
    return it == ops.end() || !it->second.decl->contract.basics.at(*e.contract).is_pull();
  }

  void fault(EventKind kind, const std::string& component, std::optional<std::size_t> contract,
             std::string detail) {
    Event e{kind, component, {}, contract, {}, {}, {}, std::move(detail)};
    emit(std::move(e));
  }

  bool conforms(const Value& v, std::string_view expected) const {
    return lattice.declared(v.type) && lattice.is_subtype(v.type, expected);
  }

  void check_args(const Ref& target, const std::vector<Value>& args) const {
    std::vector<std::string> declared = pull_args(target, arch);
    if (args.size() != declared.size())
      throw SimError(SimErrc::TypeMismatch, "pull of " + target.str() + " takes " +
                                                std::to_string(declared.size()) + " argument(s), got " +
                                                std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!conforms(args[i], declared[i]))
        throw SimError(SimErrc::TypeMismatch, "pull of " + target.str() + " argument " + std::to_string(i + 1) +
                                                  " has type " + args[i].type + ", expected " + declared[i]);
  }

  // -------------------------------------------------------------------------
  // Scheduling

  void enqueue(std::string target, Ref from, Value v, std::string action = {}) {
    auto& box = mailboxes[target];
    box.push_back({std::move(target), std::move(from), std::move(v), std::move(action), next_seq++});
  }

  void publish_value(const std::string& op, const Value& v) {
    emit({EventKind::ValuePublished, op, {}, std::nullopt, {}, {}, {v}, {}});
    ops.at(op).latest = v;
    for (const auto& parent : push_parents(Ref{op}, arch)) enqueue(parent, Ref{op}, v);
  }

  void publish_source(const Ref& src, const Value& v) {
    const SourceDecl* decl = arch.source(src);
    if (!decl) throw SimError(SimErrc::UnknownComponent, "'" + src.str() + "' is not a sensor source");
    if (!conforms(v, decl->value_type))
      throw SimError(SimErrc::TypeMismatch,
                     "value of type " + v.type + " published on " + src.str() + " (" + decl->value_type + ")");
    emit({EventKind::SourcePublished, src.str(), {}, std::nullopt, {}, {}, {v}, {}});
    last_source_value[src] = v;
    for (const auto& parent : push_parents(src, arch)) enqueue(parent, src, v);
  }

  std::optional<Delivery> pick() {
    std::vector<std::deque<Delivery>*> ready;
    for (auto& [id, box] : mailboxes)
      if (!box.empty()) ready.push_back(&box);
    if (ready.empty()) return std::nullopt;
    std::deque<Delivery>* chosen = ready.front();
    auto steered = steer_at < options.steer.size() ? mailboxes.find(options.steer[steer_at]) : mailboxes.end();
    if (steered != mailboxes.end() && !steered->second.empty()) {
      chosen = &steered->second;
    } else if (options.schedule == Schedule::Fifo) {
      for (auto* box : ready)
        if (box->front().seq < chosen->front().seq) chosen = box;
    } else {
      chosen = ready[rng() % ready.size()];
    }
    Delivery d = std::move(chosen->front());
    chosen->pop_front();
    return d;
  }

  void drain() {
    std::size_t steps = 0;
    while (auto d = pick()) {
      if (++steps > options.max_steps) {
        fault(EventKind::IntegrityFault, d->target, std::nullopt,
              "step limit of " + std::to_string(options.max_steps) + " exceeded");
        mailboxes.clear();
        return;
      }
      process(*d);
    }
  }

  void process(const Delivery& d) {
    switch (*arch.kind_of(d.target)) {
      case ComponentKind::Context: deliver_push(d); break;
      case ComponentKind::Controller: run_controller(d); break;
      case ComponentKind::Actuator: run_action(d); break;
      case ComponentKind::Sensor:
        fault(EventKind::IntegrityFault, d.target, std::nullopt, "sensors accept no pushes");
        break;
    }
  }

  void deliver_push(const Delivery& d) {
    OpState& st = ops.at(d.target);
    const auto& basics = st.decl->contract.basics;
    for (std::size_t c = 0; c < basics.size(); ++c) {
      const auto* push = basics[c].push();
      if (!push) continue;
      for (std::size_t t = 0; t < push->terms.size(); ++t) {
        const auto& term = push->terms[t];
        if (std::find(term.begin(), term.end(), d.from) == term.end()) continue;
        auto& q = st.queues[c][t];
        if (st.sync == SyncPolicy::Latest) q.clear();
        q.push_back({d.value, d.from.str()});
        auto& qs = st.queues[c];
        if (std::any_of(qs.begin(), qs.end(), [](const auto& x) { return x.empty(); })) return;
        std::vector<Value> values;
        std::vector<std::string> origins;
        for (auto& x : qs) {
          values.push_back(std::move(x.front().value));
          origins.push_back(std::move(x.front().origin));
          x.pop_front();
        }
        activate(d.target, c, std::move(values), std::move(origins));
        return;
      }
    }
    fault(EventKind::IntegrityFault, d.target, std::nullopt,
          "no matching contract for push from " + d.from.str());
  }

  void run_controller(const Delivery& d) {
    const ControlOperator* c = arch.controller(d.target);
    if (d.from.is_source() ||
        std::find(c->subscriptions.begin(), c->subscriptions.end(), d.from.component) == c->subscriptions.end()) {
      fault(EventKind::IntegrityFault, c->id, std::nullopt, "no subscription matches push from " + d.from.str());
      return;
    }
    emit({EventKind::OperatorActivated, c->id, {}, 0, {}, {d.from.str()}, {d.value}, {}});
    for (const auto& o : c->orders) enqueue(o.actuator, Ref{c->id}, d.value, o.action);
    emit({EventKind::ActivationCompleted, c->id, {}, 0, {}, {}, {}, {}});
  }

  void run_action(const Delivery& d) {
    const Actuator* a = arch.actuator(d.target);
    Order order{a->id, d.action};
    bool ordered = false;
    if (const ControlOperator* c = arch.controller(d.from.component))
      ordered = std::find(c->orders.begin(), c->orders.end(), order) != c->orders.end();
    if (!ordered || !a->find_action(d.action)) {
      fault(EventKind::IntegrityFault, a->id, std::nullopt,
            "undeclared order " + order.str() + " from " + d.from.str());
      return;
    }
    emit({EventKind::ActionInvoked, a->id, d.action, std::nullopt, {}, {d.from.str()}, {d.value}, {}});
    auto it = actions.find(order);
    if (it == actions.end()) return;
    try {
      it->second({d.value});
    } catch (const std::exception& e) {
      fault(EventKind::HandlerFault, a->id, std::nullopt, "action " + order.str() + " failed: " + e.what());
    }
  }

  // -------------------------------------------------------------------------
  // Activations

  Outcome activate(const std::string& op, std::size_t c, std::vector<Value> values,
                   std::vector<std::string> origins) {
    OpState& st = ops.at(op);
    const SignatureDescriptor& d = st.entry->abstract_methods.at(c);
    emit({EventKind::OperatorActivated, op, {}, c, d.name, origins, values, {}});

    auto hs = handlers.find(op);
    const Handler* h = nullptr;
    if (hs != handlers.end()) {
      auto it = hs->second.find(d.name);
      if (it != hs->second.end()) h = &it->second;
    }
    if (!h) return abort(op, c, EventKind::HandlerFault, "no handler bound for " + op + "." + d.name);

    auto token = std::make_shared<ActivationToken>();
    Invocation inv;
    inv.descriptor_ = &d;
    inv.values_ = std::move(values);
    inv.origins_ = std::move(origins);
    inv.latest_ = st.latest;
    for (const auto& p : d.params) {
      if (p.role == ParamRole::PullCallback) {
        const CallbackEntry* cb = st.entry->callback_for(*p.target);
        PullCallback pc;
        pc.state_ = make_state(token, op, cb ? cb->name : p.name, p.name, p.target,
                               cb ? cb->guard : GuardPolicy{});
        inv.pulls_.push_back(std::move(pc));
      } else if (p.role == ParamRole::PublishCallback) {
        const CallbackEntry* cb = st.entry->publish_callback();
        PublishCallback pc;
        pc.state_ = make_state(token, op, cb ? cb->name : "Publish", p.name, std::nullopt,
                               cb ? cb->guard : GuardPolicy{1});
        inv.publish_ = std::move(pc);
      }
    }

    std::optional<Value> result;
    call_stack.push_back(op);
    try {
      result = h->body(inv);
    } catch (const SimError& e) {
      token->alive = false;
      call_stack.pop_back();
      bool guard = e.code() == SimErrc::StaleCallback || e.code() == SimErrc::QuotaExceeded;
      if (guard) return abort(op, c, std::nullopt, e.what());
      return abort(op, c, EventKind::HandlerFault, e.what());
    } catch (const std::exception& e) {
      token->alive = false;
      call_stack.pop_back();
      return abort(op, c, EventKind::HandlerFault, e.what());
    }
    token->alive = false;
    call_stack.pop_back();

    if (d.returns_value()) {
      if (!result) return abort(op, c, EventKind::HandlerFault, d.name + " returned no value");
      if (!conforms(*result, st.decl->value_type))
        return abort(op, c, EventKind::HandlerFault,
                     d.name + " returned " + result->type + ", expected " + st.decl->value_type);
    } else if (result) {
      return abort(op, c, EventKind::HandlerFault, d.name + " must not return a value");
    }

    const CallingMethod& calling = st.entry->calling_methods.at(c);
    for (PostAction a : calling.post_actions)
      if (a == PostAction::PublishAlways) publish_value(op, *result);
    if (result) st.latest = result;
    emit({EventKind::ActivationCompleted, op, {}, c, {}, {}, {}, {}});
    return {true, result, {}};
  }

  Outcome abort(const std::string& op, std::size_t c, std::optional<EventKind> fault_kind, std::string why) {
    if (fault_kind) fault(*fault_kind, op, c, why);
    emit({EventKind::ActivationAborted, op, {}, c, {}, {}, {}, why});
    return {false, std::nullopt, why};
  }

  std::shared_ptr<CallbackState> make_state(const std::shared_ptr<ActivationToken>& token, const std::string& owner,
                                            std::string name, std::string param, std::optional<Ref> target,
                                            GuardPolicy guard) {
    auto s = std::make_shared<CallbackState>();
    s->core = weak_from_this();
    s->token = token;
    s->owner = owner;
    s->name = std::move(name);
    s->param = std::move(param);
    s->target = std::move(target);
    s->guard = guard;
    return s;
  }

  void guard_check(CallbackState& s) {
    if (!s.token->alive) {
      emit({EventKind::GuardViolation, s.owner, s.name, std::nullopt, {}, {}, {}, "stale"});
      throw SimError(SimErrc::StaleCallback,
                     "callback " + s.owner + "." + s.name + " used after its activation completed");
    }
    if (s.guard.max_invocations && s.calls >= *s.guard.max_invocations) {
      emit({EventKind::GuardViolation, s.owner, s.name, std::nullopt, {}, {}, {}, "quota"});
      throw SimError(SimErrc::QuotaExceeded, "callback " + s.owner + "." + s.name + " invoked more than " +
                                                 std::to_string(*s.guard.max_invocations) + " time(s)");
    }
    ++s.calls;
  }

  void call_publish(CallbackState& s, Value v) {
    guard_check(s);
    const OpState& st = ops.at(s.owner);
    if (!conforms(v, st.decl->value_type))
      throw SimError(SimErrc::TypeMismatch,
                     "published " + v.type + " from " + s.owner + ", expected " + st.decl->value_type);
    publish_value(s.owner, v);
  }

  Value call_pull(CallbackState& s, std::vector<Value> args) {
    guard_check(s);
    const Ref& target = *s.target;
    check_args(target, args);
    return pull(s.owner, target, std::move(args));
  }

  Value pull(const std::string& requester, const Ref& target, std::vector<Value> args) {
    if (!target.is_source()) {
      if (std::find(call_stack.begin(), call_stack.end(), target.component) != call_stack.end()) {
        fault(EventKind::IntegrityFault, requester, std::nullopt, "pull cycle through " + target.component);
        throw SimError(SimErrc::PullCycle, "pull cycle: " + target.component + " is already active");
      }
    }
    emit({EventKind::PullIssued, requester, target.str(), std::nullopt, {}, {}, args, {}});
    auto failed = [&](const std::string& why) {
      emit({EventKind::PullReturned, requester, target.str(), std::nullopt, {}, {}, {}, "failed"});
      return SimError(SimErrc::HandlerFault, "pull of " + target.str() + " failed: " + why);
    };
    Value v;
    if (target.is_source()) {
      const SourceDecl* decl = arch.source(target);
      auto it = responders.find(target);
      try {
        if (it != responders.end()) {
          v = it->second(args);
        } else {
          auto last = last_source_value.find(target);
          if (last == last_source_value.end()) throw SimError(SimErrc::NotReady, "no value available");
          v = last->second;
        }
      } catch (const std::exception& e) {
        fault(EventKind::HandlerFault, target.str(), std::nullopt, e.what());
        throw failed(e.what());
      }
      if (!conforms(v, decl->value_type)) {
        std::string why = "responder returned " + v.type + ", expected " + decl->value_type;
        fault(EventKind::HandlerFault, target.str(), std::nullopt, why);
        throw failed(why);
      }
    } else {
      const OpState& st = ops.at(target.component);
      auto idx = pull_contract(st);
      if (!idx) throw failed("no pull contract");
      Outcome out = activate(target.component, *idx, std::move(args), {requester});
      if (!out.ok) throw failed(out.error);
      v = *out.value;
    }
    emit({EventKind::PullReturned, requester, target.str(), std::nullopt, {}, {}, {v}, {}});
    return v;
  }

  static std::optional<std::size_t> pull_contract(const OpState& st) {
    const auto& basics = st.decl->contract.basics;
    for (std::size_t i = 0; i < basics.size(); ++i)
      if (basics[i].is_pull()) return i;
    return std::nullopt;
  }

  std::vector<std::string> unbound() const {
    std::vector<std::string> out;
    for (const auto& o : manifest.operators)
      for (const auto& d : o.abstract_methods) {
        auto hs = handlers.find(o.id);
        if (hs == handlers.end() || !hs->second.count(d.name)) out.push_back(o.id + "." + d.name);
      }
    return out;
  }

  void require_ready() const {
    if (options.allow_unbound) return;
    auto missing = unbound();
    if (missing.empty()) return;
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw SimError(SimErrc::NotReady, "no handler bound for " + list);
  }

  Value external_pull(std::string_view op, std::vector<Value> args) {
    auto it = ops.find(op);
    if (it == ops.end()) throw SimError(SimErrc::UnknownComponent, "'" + std::string(op) + "' is not a context operator");
    if (!pull_contract(it->second))
      throw SimError(SimErrc::NoPullContract, "'" + std::string(op) + "' has no pull contract");
    check_args(Ref{std::string(op)}, args);
    std::optional<Value> v;
    std::string error;
    try {
      v = pull("external", Ref{std::string(op)}, std::move(args));
    } catch (const SimError& e) {
      error = e.what();
    }
    drain();
    if (!v) throw SimError(SimErrc::HandlerFault, error);
    return *v;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Capabilities

namespace {

std::shared_ptr<detail::SimCore> lock(const detail::CallbackState& s) {
  auto core = s.core.lock();
  if (!core) throw SimError(SimErrc::StaleCallback, "callback " + s.owner + "." + s.name + " outlived its simulator");
  return core;
}

}  // namespace

Value PullCallback::operator()(std::vector<Value> args) const {
  return lock(*state_)->call_pull(*state_, std::move(args));
}

const std::string& PullCallback::name() const { return state_->name; }
const std::string& PullCallback::param() const { return state_->param; }
const Ref& PullCallback::target() const { return *state_->target; }

void PublishCallback::operator()(Value v) const { lock(*state_)->call_publish(*state_, std::move(v)); }

const std::string& PublishCallback::name() const { return state_->name; }

PullCallback Invocation::pull(std::string_view param) const {
  for (const auto& p : pulls_)
    if (p.param() == param || p.name() == param) return p;
  throw SimError(SimErrc::UnknownDescriptor,
                 descriptor_->owner + "." + descriptor_->name + " has no pull callback '" + std::string(param) + "'");
}

PullCallback Invocation::pull(const Ref& target) const {
  for (const auto& p : pulls_)
    if (p.target() == target) return p;
  throw SimError(SimErrc::UnknownDescriptor,
                 descriptor_->owner + "." + descriptor_->name + " may not pull " + target.str());
}

PublishCallback Invocation::publisher() const {
  if (!publish_)
    throw SimError(SimErrc::UnknownDescriptor, descriptor_->owner + "." + descriptor_->name + " has no publish callback");
  return *publish_;
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(Architecture arch, FrameworkManifest manifest, SimOptions options)
    : core_(std::make_shared<detail::SimCore>(std::move(arch), std::move(manifest), std::move(options))) {}

Simulator::Simulator(Architecture arch, SimOptions options)
    : Simulator(arch, generate_manifest(arch), std::move(options)) {}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::register_handler(Handler h) {
  const OperatorEntry* entry = core_->manifest.op(h.operator_id);
  const SignatureDescriptor* d = entry ? entry->method(h.method) : nullptr;
  if (!d) throw SimError(SimErrc::UnknownDescriptor, "no abstract method " + h.operator_id + "." + h.method);
  if (bound(h.operator_id, h.method))
    throw SimError(SimErrc::DuplicateBinding, h.operator_id + "." + h.method + " already has a handler");
  std::vector<ParamRole> roles;
  for (const auto& p : d->params) roles.push_back(p.role);
  if (h.param_roles != roles)
    throw SimError(SimErrc::ShapeMismatch, "handler for " + h.operator_id + "." + h.method +
                                               " does not take the parameters " + render(*d));
  if (h.returns_value != d->returns_value())
    throw SimError(SimErrc::ShapeMismatch, "handler for " + h.operator_id + "." + h.method + " returns " +
                                               (h.returns_value ? "a value" : "unit") + " but the method returns " +
                                               render(d->result));
  if (!h.body) throw SimError(SimErrc::ShapeMismatch, "handler for " + h.operator_id + "." + h.method + " has no body");
  std::string op = h.operator_id;
  std::string method = h.method;
  core_->handlers[op].emplace(method, std::move(h));
}

void Simulator::register_source(const Ref& source, SourceResponder r) {
  if (!core_->arch.source(source))
    throw SimError(SimErrc::UnknownComponent, "'" + source.str() + "' is not a sensor source");
  if (!core_->responders.emplace(source, std::move(r)).second)
    throw SimError(SimErrc::DuplicateBinding, source.str() + " already has a responder");
}

void Simulator::register_action(const Order& action, ActionStub s) {
  const Actuator* a = core_->arch.actuator(action.actuator);
  if (!a || !a->find_action(action.action))
    throw SimError(SimErrc::UnknownComponent, "'" + action.str() + "' is not an actuator action");
  if (!core_->actions.emplace(action, std::move(s)).second)
    throw SimError(SimErrc::DuplicateBinding, action.str() + " already has a stub");
}

bool Simulator::bound(std::string_view op, std::string_view method) const {
  auto hs = core_->handlers.find(op);
  return hs != core_->handlers.end() && hs->second.find(method) != hs->second.end();
}

bool Simulator::has_responder(const Ref& source) const { return core_->responders.count(source) > 0; }

std::vector<std::string> Simulator::unbound() const { return core_->unbound(); }

SimTrace Simulator::run(const Scenario& scenario) {
  core_->require_ready();
  std::size_t start = core_->history.events.size();
  for (const auto& s : scenario.steps) {
    if (s.kind == Stimulus::Kind::Publish) {
      if (s.values.size() != 1) throw SimError(SimErrc::TypeMismatch, "publish takes exactly one value");
      core_->publish_source(s.target, s.values.front());
      core_->drain();
    } else {
      try {
        core_->external_pull(s.target.component, s.values);
      } catch (const SimError& e) {
        if (e.code() != SimErrc::HandlerFault) throw;
      }
    }
  }
  SimTrace out;
  out.events.assign(core_->history.events.begin() + static_cast<std::ptrdiff_t>(start), core_->history.events.end());
  out.failed = std::any_of(out.events.begin(), out.events.end(), [](const Event& e) {
    return e.kind == EventKind::HandlerFault || e.kind == EventKind::IntegrityFault ||
           e.kind == EventKind::GuardViolation;
  });
  return out;
}

Value Simulator::external_pull(std::string_view op, std::vector<Value> args) {
  core_->require_ready();
  return core_->external_pull(op, std::move(args));
}

std::vector<std::size_t> Simulator::pending(std::string_view op, std::size_t contract) const {
  auto it = core_->ops.find(op);
  if (it == core_->ops.end()) throw SimError(SimErrc::UnknownComponent, "'" + std::string(op) + "' is not a context operator");
  std::vector<std::size_t> out;
  for (const auto& q : it->second.queues.at(contract)) out.push_back(q.size());
  return out;
}

const SimTrace& Simulator::history() const { return core_->history; }
const Architecture& Simulator::architecture() const { return core_->arch; }
const FrameworkManifest& Simulator::manifest() const { return core_->manifest; }

}  // namespace scc
