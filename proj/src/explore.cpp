#include <algorithm>
#include <deque>
#include <unordered_map>

#include "scc/verifier.hpp"

namespace scc {

namespace {

struct Monitor {
  const Invariant* inv = nullptr;
};

// Flattened view of the flow model. A state is a byte string: one count
// per channel, two bytes of location per process, one pending byte.
class Compiled {
 public:
  explicit Compiled(const FlowModel& m) : m_(m) {
    for (const auto& c : m.channels)
      if (c.capacity > 255) throw Error("channel capacity above 255 is not supported");
    for (const auto& p : m.processes) {
      std::vector<std::size_t> offsets;
      std::vector<std::pair<std::size_t, std::size_t>> locs{{0, 0}};
      for (std::size_t b = 0; b < p.branches.size(); ++b) {
        offsets.push_back(locs.size());
        for (std::size_t s = 0; s < p.branches[b].steps.size(); ++s) locs.emplace_back(b, s);
      }
      if (locs.size() > 65535) throw Error("process '" + p.name + "' has too many locations");
      offsets_.push_back(std::move(offsets));
      locs_.push_back(std::move(locs));
    }
    loc_base_ = m.channels.size();
    pending_at_ = loc_base_ + 2 * m.processes.size();
  }

  std::string initial() const { return std::string(pending_at_ + 1, '\0'); }
  std::size_t process_count() const { return m_.processes.size(); }
  bool fair(std::size_t p) const { return m_.processes[p].fair(); }
  bool pending(const std::string& st) const { return st[pending_at_] != 0; }

  struct Succ {
    std::string state;
    std::uint32_t proc = 0;
    const Event* label = nullptr;
  };

  // Sensors publish only once no other process can move, so every stimulus
  // runs to completion before the next one.
  void successors(const std::string& st, const Monitor& mon, std::vector<Succ>& out) const {
    out.clear();
    moves(st, mon, out, true);
    if (out.empty()) moves(st, mon, out, false);
  }

  /// True when process p waits on a mandatory send to a full channel.
  bool send_blocked(const std::string& st, std::size_t p) const {
    std::size_t loc = location(st, p);
    if (loc == 0) return false;
    auto [b, s] = locs_[p][loc];
    const Step& stp = m_.processes[p].branches[b].steps[s];
    return stp.kind == Step::Kind::Send && !stp.optional &&
           count(st, stp.channel) >= m_.channels[stp.channel].capacity;
  }

  std::string describe(std::size_t proc) const { return m_.processes[proc].name; }

 private:
  void moves(const std::string& st, const Monitor& mon, std::vector<Succ>& out, bool fair_only) const {
    for (std::size_t p = 0; p < m_.processes.size(); ++p) {
      const Process& proc = m_.processes[p];
      if (proc.fair() != fair_only) continue;
      std::size_t loc = location(st, p);
      if (loc == 0) {
        for (std::size_t b = 0; b < proc.branches.size(); ++b) {
          const Branch& br = proc.branches[b];
          if (br.guard.empty()) {
            if (!br.steps.empty()) step(st, mon, p, b, 0, out);
            continue;
          }
          bool ready = std::all_of(br.guard.begin(), br.guard.end(),
                                   [&](std::size_t c) { return count(st, c) > 0; });
          if (!ready) continue;
          std::string next = st;
          for (std::size_t c : br.guard) --next[c];
          set_location(next, p, br.steps.empty() ? 0 : offsets_[p][b]);
          push(out, std::move(next), mon, p, br.label ? &*br.label : nullptr);
        }
      } else {
        auto [b, s] = locs_[p][loc];
        step(st, mon, p, b, s, out);
      }
    }
  }

  std::size_t count(const std::string& st, std::size_t c) const { return static_cast<unsigned char>(st[c]); }

  std::size_t location(const std::string& st, std::size_t p) const {
    std::size_t i = loc_base_ + 2 * p;
    return static_cast<unsigned char>(st[i]) | (static_cast<std::size_t>(static_cast<unsigned char>(st[i + 1])) << 8);
  }

  void set_location(std::string& st, std::size_t p, std::size_t loc) const {
    std::size_t i = loc_base_ + 2 * p;
    st[i] = static_cast<char>(loc & 0xff);
    st[i + 1] = static_cast<char>(loc >> 8);
  }

  void step(const std::string& st, const Monitor& mon, std::size_t p, std::size_t b, std::size_t s,
            std::vector<Succ>& out) const {
    const Branch& br = m_.processes[p].branches[b];
    const Step& stp = br.steps[s];
    std::size_t after = s + 1 < br.steps.size() ? offsets_[p][b] + s + 1 : 0;
    const Event* l = stp.label ? &*stp.label : nullptr;
    bool can = true;
    std::string next = st;
    switch (stp.kind) {
      case Step::Kind::Send:
        can = count(st, stp.channel) < m_.channels[stp.channel].capacity;
        if (can) ++next[stp.channel];
        break;
      case Step::Kind::Recv:
        can = count(st, stp.channel) > 0;
        if (can) --next[stp.channel];
        break;
      case Step::Kind::Tick: break;
    }
    if (can) {
      set_location(next, p, after);
      push(out, std::move(next), mon, p, l);
    }
    if (stp.optional) {
      std::string skip = st;
      set_location(skip, p, after);
      push(out, std::move(skip), mon, p, nullptr);
    }
  }

  void push(std::vector<Succ>& out, std::string next, const Monitor& mon, std::size_t p, const Event* l) const {
    if (mon.inv && mon.inv->form == Invariant::Form::Response && l) {
      if (mon.inv->trigger.matches(*l)) next[pending_at_] = 1;
      if (mon.inv->goal.matches(*l)) next[pending_at_] = 0;
    }
    out.push_back({std::move(next), static_cast<std::uint32_t>(p), l});
  }

  const FlowModel& m_;
  std::vector<std::vector<std::size_t>> offsets_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> locs_;
  std::size_t loc_base_ = 0;
  std::size_t pending_at_ = 0;
};

struct Parent {
  std::uint32_t state = 0;
  std::uint32_t proc = 0;
  const Event* label = nullptr;
};

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::uint32_t proc = 0;
  const Event* label = nullptr;
};

struct Graph {
  std::vector<std::string> states;
  std::vector<Parent> parents;
  std::vector<bool> fair_enabled;
  std::vector<Edge> pending_edges;
  std::size_t transitions = 0;
  bool bounded = false;
  // Never form: first forbidden transition in discovery order.
  std::optional<Edge> violation;
};

class Explorer {
 public:
  Explorer(const Compiled& m, Monitor mon, std::size_t bound) : m_(m), mon_(mon), bound_(bound) {
    if (bound_ == 0) throw Error("state bound must be positive");
    insert(m_.initial(), Parent{});
  }

  Graph serial() {
    std::vector<Compiled::Succ> succ;
    for (std::size_t i = 0; i < g_.states.size(); ++i) {
      m_.successors(g_.states[i], mon_, succ);
      merge(i, succ);
    }
    return std::move(g_);
  }

  Graph parallel() {
    std::size_t lo = 0;
    while (lo < g_.states.size()) {
      std::size_t hi = g_.states.size();
      std::vector<std::vector<Compiled::Succ>> level(hi - lo);
      const auto n = static_cast<std::ptrdiff_t>(hi - lo);
#pragma omp parallel for schedule(dynamic, 32)
      for (std::ptrdiff_t k = 0; k < n; ++k)
        m_.successors(g_.states[lo + static_cast<std::size_t>(k)], mon_, level[static_cast<std::size_t>(k)]);
      for (std::size_t k = 0; k < level.size(); ++k) merge(lo + k, level[k]);
      lo = hi;
    }
    return std::move(g_);
  }

 private:
  std::optional<std::uint32_t> insert(const std::string& st, Parent parent) {
    auto it = index_.find(st);
    if (it != index_.end()) return it->second;
    if (g_.states.size() >= bound_) {
      g_.bounded = true;
      return std::nullopt;
    }
    auto id = static_cast<std::uint32_t>(g_.states.size());
    index_.emplace(st, id);
    g_.states.push_back(st);
    g_.parents.push_back(parent);
    g_.fair_enabled.push_back(false);
    return id;
  }

  void merge(std::size_t from, const std::vector<Compiled::Succ>& succ) {
    bool from_pending = m_.pending(g_.states[from]);
    for (const auto& s : succ) {
      ++g_.transitions;
      if (m_.fair(s.proc)) g_.fair_enabled[from] = true;
      auto from32 = static_cast<std::uint32_t>(from);
      if (!g_.violation && mon_.inv && mon_.inv->form == Invariant::Form::Never && s.label &&
          mon_.inv->trigger.matches(*s.label))
        g_.violation = Edge{from32, from32, s.proc, s.label};
      auto to = insert(s.state, Parent{from32, s.proc, s.label});
      if (to && from_pending && m_.pending(s.state)) g_.pending_edges.push_back({from32, *to, s.proc, s.label});
    }
  }

  const Compiled& m_;
  Monitor mon_;
  std::size_t bound_;
  Graph g_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

Graph explore(const Compiled& m, Monitor mon, std::size_t bound, ExecMode mode) {
  Explorer ex(m, mon, bound);
  return mode == ExecMode::Parallel ? ex.parallel() : ex.serial();
}

std::vector<Event> path_to(const Graph& g, std::uint32_t state) {
  std::vector<Event> out;
  while (state != 0) {
    const Parent& p = g.parents[state];
    if (p.label) out.push_back(*p.label);
    state = p.state;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Strongly connected components of the pending subgraph, in discovery
// order of their roots.
std::vector<std::vector<std::uint32_t>> pending_sccs(const Graph& g, const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = g.states.size();
  constexpr std::uint32_t kUnset = ~0u;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  std::uint32_t counter = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset || adj[root].empty()) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        std::uint32_t w = g.pending_edges[adj[f.v][f.next++]].to;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] != index[v]) continue;
      std::vector<std::uint32_t> comp;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      out.push_back(std::move(comp));
    }
  }
  return out;
}

// A candidate that only stalls because a send waits on a full channel is a
// capacity artefact, not a violation: with deeper channels it would move on.
Verdict analyse_response(const Compiled& m, const Graph& g, const Monitor& mon, Verdict v) {
  auto blocked = [&](std::uint32_t s) {
    for (std::size_t p = 0; p < m.process_count(); ++p)
      if (m.fair(p) && m.send_blocked(g.states[s], p)) return true;
    return false;
  };
  for (std::uint32_t i = 0; i < g.states.size(); ++i)
    if (m.pending(g.states[i]) && !g.fair_enabled[i]) {
      if (blocked(i)) {
        v.saturated = true;
        continue;
      }
      v.holds = false;
      v.saturated = false;
      v.counterexample = path_to(g, i);
      return v;
    }

  std::vector<std::vector<std::size_t>> adj(g.states.size());
  for (std::size_t e = 0; e < g.pending_edges.size(); ++e) adj[g.pending_edges[e].from].push_back(e);

  std::vector<Compiled::Succ> succ;
  for (auto& comp : pending_sccs(g, adj)) {
    std::sort(comp.begin(), comp.end());
    std::vector<bool> member(g.states.size(), false);
    for (auto s : comp) member[s] = true;
    std::vector<bool> fires(m.process_count(), false);
    bool cyclic = comp.size() > 1;
    for (auto s : comp)
      for (auto e : adj[s])
        if (member[g.pending_edges[e].to]) {
          fires[g.pending_edges[e].proc] = true;
          if (g.pending_edges[e].to == s) cyclic = true;
        }
    if (!cyclic) continue;
    std::vector<bool> disabled_somewhere(m.process_count(), false), stuck_somewhere(m.process_count(), false);
    for (auto s : comp) {
      std::vector<bool> enabled(m.process_count(), false);
      m.successors(g.states[s], mon, succ);
      for (const auto& x : succ) enabled[x.proc] = true;
      for (std::size_t p = 0; p < enabled.size(); ++p) {
        if (enabled[p]) continue;
        if (m.fair(p) && m.send_blocked(g.states[s], p))
          stuck_somewhere[p] = true;
        else
          disabled_somewhere[p] = true;
      }
    }
    bool fair = true, fair_with_full_channels = true;
    for (std::size_t p = 0; p < m.process_count(); ++p) {
      if (!m.fair(p) || fires[p] || disabled_somewhere[p]) continue;
      fair = false;
      if (!stuck_somewhere[p]) fair_with_full_channels = false;
    }
    if (!fair) {
      if (fair_with_full_channels) v.saturated = true;
      continue;
    }

    // Lasso: shortest path to the component, then a cycle back through it.
    std::uint32_t entry = comp.front();
    std::vector<Event> events = path_to(g, entry);
    std::map<std::uint32_t, std::size_t> via;  // state -> edge reaching it
    std::deque<std::uint32_t> queue;
    for (auto e : adj[entry])
      if (member[g.pending_edges[e].to] && !via.count(g.pending_edges[e].to)) {
        via[g.pending_edges[e].to] = e;
        queue.push_back(g.pending_edges[e].to);
      }
    while (!queue.empty() && !via.count(entry)) {
      auto s = queue.front();
      queue.pop_front();
      for (auto e : adj[s]) {
        auto t = g.pending_edges[e].to;
        if (member[t] && !via.count(t)) {
          via[t] = e;
          queue.push_back(t);
        }
      }
    }
    std::vector<Event> cycle;
    std::uint32_t cur = entry;
    do {
      const Edge& e = g.pending_edges[via.at(cur)];
      if (e.label) cycle.push_back(*e.label);
      cur = e.from;
    } while (cur != entry);
    std::reverse(cycle.begin(), cycle.end());
    v.holds = false;
    v.saturated = false;
    v.cycle_start = events.size();
    events.insert(events.end(), cycle.begin(), cycle.end());
    v.counterexample = std::move(events);
    return v;
  }
  return v;
}

}  // namespace

Verdict check_invariant(const FlowModel& model, const Invariant& inv, const CheckOptions& options) {
  Compiled m(model);
  Monitor mon{&inv};
  Graph g = explore(m, mon, options.state_bound, options.mode);
  Verdict v;
  v.states = g.states.size();
  v.transitions = g.transitions;
  v.bounded = g.bounded;
  v.bound = options.state_bound;
  if (inv.form == Invariant::Form::Never) {
    if (g.violation) {
      v.holds = false;
      auto events = path_to(g, g.violation->from);
      events.push_back(*g.violation->label);
      v.counterexample = std::move(events);
    }
    return v;
  }
  return analyse_response(m, g, mon, v);
}

Verdict check_invariant(const Architecture& arch, const Invariant& inv, const CheckOptions& options) {
  return check_invariant(build_flow_model(arch, options.channel_capacity), inv, options);
}

namespace {

StateSpace to_space(Graph g) {
  StateSpace s;
  s.states = g.states.size();
  s.transitions = g.transitions;
  s.bounded = g.bounded;
  s.encoded = std::move(g.states);
  return s;
}

}  // namespace

StateSpace explore_serial(const FlowModel& model, std::size_t bound) {
  Compiled m(model);
  return to_space(explore(m, Monitor{}, bound, ExecMode::Serial));
}

StateSpace explore_parallel(const FlowModel& model, std::size_t bound) {
  Compiled m(model);
  return to_space(explore(m, Monitor{}, bound, ExecMode::Parallel));
}

}  // namespace scc
