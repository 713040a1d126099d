#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "scc/denotation.hpp"
#include "scc/verifier.hpp"

namespace scc {

std::optional<std::size_t> FlowModel::channel(std::string_view name) const {
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (channels[i].name == name) return i;
  return std::nullopt;
}

const Process* FlowModel::process(std::string_view name) const {
  for (const auto& p : processes)
    if (p.name == name) return &p;
  return nullptr;
}

namespace {

const std::set<std::string, std::less<>> kPromelaWords{
    "active", "assert", "atomic", "bit", "bool", "break", "byte", "c_code", "c_decl", "c_expr", "c_state",
    "c_track", "chan", "d_step", "do", "else", "empty", "enabled", "eval", "false", "fi", "for", "full",
    "get_priority", "goto", "hidden", "if", "in", "init", "int", "len", "local", "mtype", "nempty", "never",
    "nfull", "notrace", "np_", "od", "of", "pc_value", "pid", "print", "printf", "printm", "priority",
    "proctype", "provided", "run", "select", "set_priority", "short", "show", "skip", "timeout", "trace",
    "true", "typedef", "unless", "unsigned", "xr", "xs"};

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out += c == '.' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string var_name(std::string_view base) {
  std::string v = lower(base);
  if (kPromelaWords.count(v)) v += "_v";
  return v;
}

Event label(EventKind k, std::string component, std::string peer = {}, std::optional<std::size_t> contract = {},
            std::vector<std::string> origins = {}) {
  Event e;
  e.kind = k;
  e.component = std::move(component);
  e.peer = std::move(peer);
  e.contract = contract;
  e.origins = std::move(origins);
  return e;
}

class Builder {
 public:
  Builder(const Architecture& arch, std::size_t capacity) : arch_(arch), capacity_(capacity) {}

  FlowModel build() {
    model_.architecture = arch_.name;
    name_contract_processes();
    make_push_channels();
    make_pull_channels();
    make_action_channels();

    for (const auto& s : arch_.sensors)
      for (const auto& src : s.sources) generator(Ref{s.id, src.name});
    for (const auto& s : arch_.sensors)
      for (const auto& src : s.sources) source_responder(Ref{s.id, src.name});
    for (const auto& op : arch_.contexts)
      for (std::size_t c = 0; c < op.contract.basics.size(); ++c) contract_process(op, c);
    for (const auto& p : publishers_) fan_out(p);
    for (const auto& c : arch_.controllers) controller(c);
    for (const auto& a : arch_.actuators) actuator(a);
    return std::move(model_);
  }

 private:
  std::size_t add_channel(std::string name) {
    if (model_.channel(name)) throw Error("channel name clash on '" + name + "'");
    model_.channels.push_back({std::move(name), capacity_});
    return model_.channels.size() - 1;
  }

  void name_contract_processes() {
    for (const auto& op : arch_.contexts) {
      auto n = op.contract.basics.size();
      for (std::size_t c = 0; c < n; ++c)
        process_names_[{op.id, c}] = n == 1 ? op.id : op.id + "_" + std::to_string(c);
    }
  }

  // Every source and every emitting operator publishes on a channel named
  // after itself; with several push parents a fan-out process copies each
  // token to one channel per parent.
  void make_push_channels() {
    std::vector<Ref> candidates;
    for (const auto& s : arch_.sensors)
      for (const auto& src : s.sources) candidates.emplace_back(s.id, src.name);
    for (const auto& op : arch_.contexts) candidates.emplace_back(op.id);
    for (const auto& p : candidates) {
      auto parents = push_parents(p, arch_);
      if (parents.empty()) continue;
      std::size_t own = add_channel(lower(p.str()));
      publish_channel_[p] = own;
      if (parents.size() == 1) {
        inbox_[{p, parents.front()}] = own;
        continue;
      }
      publishers_.push_back(p);
      for (const auto& parent : parents)
        inbox_[{p, parent}] = add_channel(lower(p.str()) + "_to_" + lower(parent));
    }
  }

  // Only processes that can run issue pulls: push contracts, and pull
  // contracts requested by a process that can run.
  std::set<std::pair<std::string, std::size_t>> live_contracts() const {
    std::set<std::pair<std::string, std::size_t>> live;
    std::vector<std::pair<std::string, std::size_t>> work;
    for (const auto& op : arch_.contexts)
      for (std::size_t c = 0; c < op.contract.basics.size(); ++c)
        if (!op.contract.basics[c].is_pull() && live.insert({op.id, c}).second) work.emplace_back(op.id, c);
    while (!work.empty()) {
      auto [id, c] = work.back();
      work.pop_back();
      for (const auto& site : arch_.context(id)->contract.basics[c].requirements) {
        const ContextOperator* target = site.target.is_source() ? nullptr : arch_.context(site.target.component);
        if (!target) continue;
        for (std::size_t k = 0; k < target->contract.basics.size(); ++k)
          if (target->contract.basics[k].is_pull() && live.insert({target->id, k}).second)
            work.emplace_back(target->id, k);
      }
    }
    return live;
  }

  void make_pull_channels() {
    live_ = live_contracts();
    const auto& live = live_;
    for (const auto& op : arch_.contexts)
      for (std::size_t c = 0; c < op.contract.basics.size(); ++c) {
        if (!live.count({op.id, c})) continue;
        for (const auto& site : op.contract.basics[c].requirements) {
          auto& rs = requesters_[site.target];
          if (rs.empty()) pull_targets_.push_back(site.target);
          const std::string& proc = process_names_.at({op.id, c});
          if (std::find(rs.begin(), rs.end(), proc) == rs.end()) rs.push_back(proc);
        }
      }
    for (const auto& t : pull_targets_) {
      const auto& rs = requesters_.at(t);
      for (const auto& r : rs) {
        std::string suffix = rs.size() == 1 ? "" : "_" + lower(r);
        pull_get_[{t, r}] = add_channel(lower(t.str()) + "_get" + suffix);
        pull_return_[{t, r}] = add_channel(lower(t.str()) + "_return" + suffix);
      }
    }
  }

  void make_action_channels() {
    for (const auto& a : arch_.actuators)
      for (const auto& act : a.actions) {
        Order o{a.id, act.name};
        bool ordered = std::any_of(arch_.controllers.begin(), arch_.controllers.end(), [&](const ControlOperator& c) {
          return std::find(c.orders.begin(), c.orders.end(), o) != c.orders.end();
        });
        if (ordered) action_channel_[o] = add_channel(lower(a.id) + "_" + lower(act.name));
      }
  }

  Step emission_step(const Ref& publisher, bool optional, Event l) {
    Step s;
    auto it = publish_channel_.find(publisher);
    if (it != publish_channel_.end()) {
      s.kind = Step::Kind::Send;
      s.channel = it->second;
    }
    s.optional = optional;
    s.label = std::move(l);
    return s;
  }

  void generator(const Ref& src) {
    Process p;
    p.name = src.component + "_" + src.source;
    p.role = ProcessRole::Generator;
    p.component = src.str();
    Branch b;
    b.steps.push_back(emission_step(src, false, label(EventKind::SourcePublished, src.str())));
    p.branches.push_back(std::move(b));
    model_.processes.push_back(std::move(p));
  }

  void source_responder(const Ref& src) {
    auto rs = requesters_.find(src);
    if (rs == requesters_.end()) return;
    Process p;
    p.name = src.component + "_" + src.source + "_server";
    p.role = ProcessRole::Responder;
    p.component = src.str();
    for (const auto& r : rs->second) {
      Branch b;
      b.guard.push_back(pull_get_.at({src, r}));
      b.guard_vars.push_back("req");
      Step ret;
      ret.kind = Step::Kind::Send;
      ret.channel = pull_return_.at({src, r});
      b.steps.push_back(ret);
      p.branches.push_back(std::move(b));
    }
    model_.processes.push_back(std::move(p));
  }

  void requirement_steps(const ContextOperator& op, const BasicContract& bc, const std::string& proc,
                         std::vector<Step>& steps) {
    for (const auto& site : bc.requirements) {
      Step get;
      get.kind = Step::Kind::Send;
      get.channel = pull_get_.at({site.target, proc});
      get.label = label(EventKind::PullIssued, op.id, site.target.str());
      Step ret;
      ret.kind = Step::Kind::Recv;
      ret.channel = pull_return_.at({site.target, proc});
      ret.var = var_name(typeof_name(site.target, arch_));
      ret.label = label(EventKind::PullReturned, op.id, site.target.str());
      steps.push_back(std::move(get));
      steps.push_back(std::move(ret));
    }
  }

  void contract_process(const ContextOperator& op, std::size_t c) {
    const BasicContract& bc = op.contract.basics[c];
    Process p;
    p.name = process_names_.at({op.id, c});
    p.role = ProcessRole::Contract;
    p.component = op.id;
    p.contract = c;

    std::vector<Step> tail;
    if (live_.count({op.id, c})) requirement_steps(op, bc, p.name, tail);
    if (bc.emission != Emission::Never)
      tail.push_back(emission_step(Ref{op.id}, bc.emission == Emission::Maybe, label(EventKind::ValuePublished, op.id)));

    if (const auto* push = bc.push()) {
      std::vector<std::string> vars;
      for (const auto& term : push->terms) vars.push_back(var_name("new" + typeof_term(term, arch_)));
      // One branch per choice of alternative in every disjunction.
      std::vector<std::size_t> pick(push->terms.size(), 0);
      while (true) {
        Branch b;
        std::vector<std::string> origins;
        for (std::size_t t = 0; t < push->terms.size(); ++t) {
          const Ref& child = push->terms[t][pick[t]];
          b.guard.push_back(inbox_.at({child, op.id}));
          b.guard_vars.push_back(vars[t]);
          origins.push_back(child.str());
        }
        b.label = label(EventKind::OperatorActivated, op.id, {}, c, origins);
        b.steps = tail;
        p.branches.push_back(std::move(b));
        std::size_t t = push->terms.size();
        while (t > 0 && ++pick[t - 1] == push->terms[t - 1].size()) pick[--t] = 0;
        if (t == 0) break;
      }
    } else {
      auto rs = requesters_.find(Ref{op.id});
      if (rs != requesters_.end())
        for (const auto& r : rs->second) {
          Branch b;
          b.guard.push_back(pull_get_.at({Ref{op.id}, r}));
          b.guard_vars.push_back("req");
          b.label = label(EventKind::OperatorActivated, op.id, {}, c, {requester_component(r)});
          b.steps = tail;
          Step ret;
          ret.kind = Step::Kind::Send;
          ret.channel = pull_return_.at({Ref{op.id}, r});
          b.steps.push_back(ret);
          p.branches.push_back(std::move(b));
        }
    }
    model_.processes.push_back(std::move(p));
  }

  std::string requester_component(const std::string& proc) const {
    for (const auto& [key, name] : process_names_)
      if (name == proc) return key.first;
    return proc;
  }

  void fan_out(const Ref& publisher) {
    Process p;
    p.name = publisher.component + (publisher.is_source() ? "_" + publisher.source : "") + "_fanout";
    p.role = ProcessRole::FanOut;
    p.component = publisher.str();
    Branch b;
    b.guard.push_back(publish_channel_.at(publisher));
    b.guard_vars.push_back("v");
    for (const auto& parent : push_parents(publisher, arch_)) {
      Step s;
      s.kind = Step::Kind::Send;
      s.channel = inbox_.at({publisher, parent});
      b.steps.push_back(s);
    }
    p.branches.push_back(std::move(b));
    model_.processes.push_back(std::move(p));
  }

  void controller(const ControlOperator& c) {
    Process p;
    p.name = c.id;
    p.role = ProcessRole::Controller;
    p.component = c.id;
    p.contract = 0;
    for (const auto& s : c.subscriptions) {
      Branch b;
      b.guard.push_back(inbox_.at({Ref{s}, c.id}));
      b.guard_vars.push_back(var_name("new" + typeof_name(Ref{s}, arch_)));
      b.label = label(EventKind::OperatorActivated, c.id, {}, 0, {s});
      for (const auto& o : c.orders) {
        Step send;
        send.kind = Step::Kind::Send;
        send.channel = action_channel_.at(o);
        b.steps.push_back(send);
      }
      p.branches.push_back(std::move(b));
    }
    model_.processes.push_back(std::move(p));
  }

  void actuator(const Actuator& a) {
    Process p;
    p.name = a.id;
    p.role = ProcessRole::Actuator;
    p.component = a.id;
    for (const auto& act : a.actions) {
      auto it = action_channel_.find(Order{a.id, act.name});
      if (it == action_channel_.end()) continue;
      Branch b;
      b.guard.push_back(it->second);
      b.guard_vars.push_back("order");
      b.label = label(EventKind::ActionInvoked, a.id, act.name);
      p.branches.push_back(std::move(b));
    }
    model_.processes.push_back(std::move(p));
  }

  const Architecture& arch_;
  std::size_t capacity_;
  FlowModel model_;
  std::map<std::pair<std::string, std::size_t>, std::string> process_names_;
  std::map<Ref, std::size_t> publish_channel_;
  std::map<std::pair<Ref, std::string>, std::size_t> inbox_;
  std::vector<Ref> publishers_;  // those needing a fan-out
  std::vector<Ref> pull_targets_;
  std::set<std::pair<std::string, std::size_t>> live_;
  std::map<Ref, std::vector<std::string>> requesters_;
  std::map<std::pair<Ref, std::string>, std::size_t> pull_get_;
  std::map<std::pair<Ref, std::string>, std::size_t> pull_return_;
  std::map<Order, std::size_t> action_channel_;
};

// ---------------------------------------------------------------------------
// Promela

std::string step_text(const FlowModel& m, const Step& s) {
  switch (s.kind) {
    case Step::Kind::Send: return m.channels[s.channel].name + "!1";
    case Step::Kind::Recv: return m.channels[s.channel].name + "?" + s.var;
    case Step::Kind::Tick: return "skip";
  }
  return "skip";
}

void emit_step(std::ostringstream& os, const FlowModel& m, const Step& s) {
  const std::string pad(6, ' ');
  if (s.optional && s.kind == Step::Kind::Send) {
    os << pad << "if\n" << pad << ":: " << step_text(m, s) << "\n" << pad << ":: skip\n" << pad << "fi;\n";
    return;
  }
  os << pad << step_text(m, s) << ";\n";
}

void emit_process(std::ostringstream& os, const FlowModel& m, const Process& p) {
  os << "active proctype " << p.name << "() {\n";
  std::vector<std::string> vars;
  auto add_var = [&vars](const std::string& v) {
    if (!v.empty() && std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  };
  for (const auto& b : p.branches) {
    for (const auto& v : b.guard_vars) add_var(v);
    for (const auto& s : b.steps)
      if (s.kind == Step::Kind::Recv) add_var(s.var);
  }
  if (!vars.empty()) {
    os << "  byte ";
    for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? ", " : "") << vars[i];
    os << ";\n";
  }
  if (p.branches.empty()) {
    os << "  skip\n}\n";
    return;
  }
  os << "  do\n";
  for (const auto& b : p.branches) {
    std::vector<Step> body;
    std::string guard;
    if (b.guard.size() == 1) {
      guard = m.channels[b.guard[0]].name + "?" + b.guard_vars[0];
    } else if (b.guard.size() > 1) {
      for (std::size_t i = 0; i < b.guard.size(); ++i) {
        guard += (i ? " && " : "") + std::string("nempty(") + m.channels[b.guard[i]].name + ")";
        Step r;
        r.kind = Step::Kind::Recv;
        r.channel = b.guard[i];
        r.var = b.guard_vars[i];
        body.push_back(r);
      }
    }
    body.insert(body.end(), b.steps.begin(), b.steps.end());
    if (p.role == ProcessRole::Generator) {
      os << "  :: timeout -> " << (body.size() == 1 ? step_text(m, body.front()) : std::string("skip")) << "\n";
      continue;
    }
    if (guard.empty() && !body.empty() && !body.front().optional) {
      guard = step_text(m, body.front());
      body.erase(body.begin());
    }
    if (body.empty()) {
      os << "  :: " << (guard.empty() ? "skip" : guard) << "\n";
      continue;
    }
    os << "  :: " << (guard.empty() ? "true" : guard) << " -> {\n";
    for (const auto& s : body) emit_step(os, m, s);
    os << "    }\n";
  }
  os << "  od\n}\n";
}

}  // namespace

FlowModel build_flow_model(const Architecture& arch, std::size_t channel_capacity) {
  if (channel_capacity == 0) throw Error("channel capacity must be positive");
  return Builder(arch, channel_capacity).build();
}

std::string emit_promela(const FlowModel& m) {
  std::ostringstream os;
  os << "/* architecture " << m.architecture << " */\n";
  if (!m.channels.empty()) os << "\n";
  for (const auto& c : m.channels) os << "chan " << c.name << " = [" << c.capacity << "] of { byte };\n";
  for (const auto& p : m.processes) {
    os << "\n";
    emit_process(os, m, p);
  }
  return os.str();
}

std::string emit_promela(const Architecture& arch, std::size_t channel_capacity) {
  return emit_promela(build_flow_model(arch, channel_capacity));
}

}  // namespace scc
