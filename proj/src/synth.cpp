#include "scc/synth.hpp"

#include <algorithm>

namespace scc::synth {

namespace {

const std::string kData = "Data";

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

bool chance(std::mt19937_64& rng, unsigned percent) { return rng() % 100 < percent; }

template <class T>
std::vector<T> sample(std::mt19937_64& rng, std::vector<T> pool, std::size_t n) {
  n = std::min(n, pool.size());
  for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[uniform(rng, i, pool.size() - 1)]);
  pool.resize(n);
  return pool;
}

Emission random_emission(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0: return Emission::Always;
    case 1: return Emission::Maybe;
    default: return Emission::Never;
  }
}

std::vector<PullSite> requirements(std::mt19937_64& rng, const std::vector<Ref>& pullable) {
  std::vector<PullSite> out;
  for (auto& r : sample(rng, pullable, uniform(rng, 0, 2))) out.push_back({r, std::nullopt});
  return out;
}

}  // namespace

Architecture random_architecture(std::mt19937_64& rng, const Options& options) {
  Architecture a;
  a.name = "Synth";
  a.types.push_back({kData, std::nullopt});

  std::size_t total = uniform(rng, std::max<std::size_t>(options.min_components, 2), options.max_components);
  std::size_t sensors = uniform(rng, 1, std::min<std::size_t>(2, total - 1));
  std::size_t rest = total - sensors;
  std::size_t actuators = rest >= 4 ? uniform(rng, 0, 2) : 0;
  std::size_t controllers = actuators > 0 ? uniform(rng, 0, std::min<std::size_t>(2, rest - actuators - 1)) : 0;
  std::size_t contexts = rest - actuators - controllers;

  std::vector<Ref> sources;
  for (std::size_t i = 0; i < sensors; ++i) {
    Sensor s{"S" + std::to_string(i), {}};
    std::size_t n = uniform(rng, 1, 2);
    for (std::size_t k = 0; k < n; ++k) {
      SourceDecl src{"s" + std::to_string(k), kData, {}};
      if (chance(rng, 30)) src.pull_params.push_back(kData);
      sources.emplace_back(s.id, src.name);
      s.sources.push_back(std::move(src));
    }
    a.sensors.push_back(std::move(s));
  }

  // Decide each operator's shape first so that forward references (when
  // cycles are allowed) can see which operators emit or answer pulls.
  struct Shape {
    bool pull = false;
    bool push = false;
    bool second_push = false;
    Emission push_emission = Emission::Never;
    Emission pull_emission = Emission::Never;
  };
  std::vector<Shape> shapes(contexts);
  for (std::size_t i = 0; i < contexts; ++i) {
    Shape& sh = shapes[i];
    sh.pull = chance(rng, 35);
    sh.push = !sh.pull || chance(rng, 60);
    sh.second_push = sh.push && chance(rng, 15);
    sh.push_emission = random_emission(rng);
    sh.pull_emission = chance(rng, 70) ? Emission::Never : random_emission(rng);
  }
  auto id = [](std::size_t i) { return "C" + std::to_string(i); };
  auto emits = [&](std::size_t i) {
    return (shapes[i].push && shapes[i].push_emission != Emission::Never) ||
           (shapes[i].pull && shapes[i].pull_emission != Emission::Never);
  };

  for (std::size_t i = 0; i < contexts; ++i) {
    const Shape& sh = shapes[i];
    std::vector<Ref> pushable = sources;
    std::vector<Ref> pullable = sources;
    std::size_t limit = options.acyclic ? i : contexts;
    for (std::size_t j = 0; j < limit; ++j) {
      if (j == i) continue;
      if (emits(j)) pushable.emplace_back(id(j));
      // A pull contract that also publishes would feed its own
      // requesters again; those stay reachable by external pulls only.
      if (shapes[j].pull && shapes[j].pull_emission == Emission::Never) pullable.emplace_back(id(j));
    }

    ContextOperator op;
    op.id = id(i);
    op.value_type = kData;
    if (sh.push) {
      std::vector<Ref> pool = sample(rng, pushable, pushable.size());
      auto take_contract = [&](Emission e) {
        std::size_t terms = uniform(rng, 1, std::min<std::size_t>(3, pool.size()));
        PushActivation act;
        for (std::size_t t = 0; t < terms && !pool.empty(); ++t) {
          Disjunction d{pool.back()};
          pool.pop_back();
          if (!pool.empty() && chance(rng, 20)) {
            d.push_back(pool.back());
            pool.pop_back();
          }
          act.terms.push_back(std::move(d));
        }
        op.contract.basics.push_back({act, requirements(rng, pullable), e});
      };
      if (!pool.empty()) take_contract(sh.push_emission);
      if (sh.second_push && !pool.empty()) take_contract(random_emission(rng));
    }
    if (sh.pull || op.contract.basics.empty()) {
      op.pull_params = chance(rng, 50) ? std::vector<std::string>{} : std::vector<std::string>{kData};
      op.contract.basics.push_back({PullSelf{}, requirements(rng, pullable), sh.pull ? sh.pull_emission : Emission::Never});
    }
    a.contexts.push_back(std::move(op));
  }

  // A context forced into a pull-only shape above may not match its
  // planned shape, so recompute who emits from the actual contracts.
  std::vector<std::string> emitting;
  for (const auto& op : a.contexts)
    if (op.has_emitting_contract()) emitting.push_back(op.id);

  std::vector<Order> orders;
  for (std::size_t i = 0; i < actuators; ++i) {
    Actuator act{"A" + std::to_string(i), {}};
    std::size_t n = uniform(rng, 1, 2);
    for (std::size_t k = 0; k < n; ++k) {
      act.actions.push_back({"a" + std::to_string(k), {kData}});
      orders.push_back({act.id, act.actions.back().name});
    }
    a.actuators.push_back(std::move(act));
  }
  if (!emitting.empty())
    for (std::size_t i = 0; i < controllers; ++i) {
      ControlOperator c{"K" + std::to_string(i), {}, {}};
      c.subscriptions = sample(rng, emitting, uniform(rng, 1, 2));
      c.orders = sample(rng, orders, uniform(rng, 1, 2));
      a.controllers.push_back(std::move(c));
    }
  return a;
}

Scenario random_scenario(std::mt19937_64& rng, const Architecture& arch, std::size_t max_steps) {
  std::vector<Ref> sources;
  for (const auto& s : arch.sensors)
    for (const auto& src : s.sources) sources.emplace_back(s.id, src.name);
  std::vector<const ContextOperator*> pullable;
  for (const auto& op : arch.contexts)
    if (op.has_pull_contract()) pullable.push_back(&op);

  Scenario sc;
  std::size_t n = uniform(rng, 0, max_steps);
  for (std::size_t i = 0; i < n; ++i) {
    Stimulus s;
    if (!pullable.empty() && (sources.empty() || chance(rng, 25))) {
      const ContextOperator* op = pullable[rng() % pullable.size()];
      s.kind = Stimulus::Kind::Pull;
      s.target = Ref{op->id};
      for (const auto& t : op->args()) s.values.push_back({t, "p" + std::to_string(i)});
    } else if (!sources.empty()) {
      s.kind = Stimulus::Kind::Publish;
      s.target = sources[rng() % sources.size()];
      s.values.push_back({arch.source(s.target)->value_type, "v" + std::to_string(i)});
    } else {
      break;
    }
    sc.steps.push_back(std::move(s));
  }
  return sc;
}

}  // namespace scc::synth
