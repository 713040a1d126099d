#include <algorithm>
#include <functional>
#include <random>
#include <tuple>

#include "oracles/mutations.hpp"
#include "scc/checker.hpp"
#include "scc/synth.hpp"
#include "support.hpp"

using namespace scc;
using oracle::mutations;
using oracle::push_from;

namespace {

/// Consistency judgments obtained by enumerating each clause literally.
using Key = std::tuple<std::string, std::string, std::size_t>;

std::vector<Key> consistency_oracle(const Architecture& a) {
  auto op_of = [&](const std::string& id) -> const ContextOperator* {
    for (const auto& c : a.contexts)
      if (c.id == id) return &c;
    return nullptr;
  };
  auto some_pull = [](const ContextOperator& c) {
    for (const auto& b : c.contract.basics)
      if (std::holds_alternative<PullSelf>(b.activation)) return true;
    return false;
  };
  auto some_emission = [](const ContextOperator& c) {
    for (const auto& b : c.contract.basics)
      if (b.emission == Emission::Always || b.emission == Emission::Maybe) return true;
    return false;
  };
  std::vector<Key> out;
  for (const auto& op : a.contexts)
    for (std::size_t i = 0; i < op.contract.basics.size(); ++i) {
      const auto& b = op.contract.basics[i];
      for (const auto& site : b.requirements)
        if (site.target.source.empty())
          if (auto* child = op_of(site.target.component); child && !some_pull(*child))
            out.emplace_back(op.id, rules::kRequirementNeedsPullSelf, i);
      if (auto* p = std::get_if<PushActivation>(&b.activation)) {
        std::set<std::string> seen;
        for (const auto& term : p->terms)
          for (const auto& r : term)
            if (r.source.empty() && seen.insert(r.component).second)
              if (auto* child = op_of(r.component); child && !some_emission(*child))
                out.emplace_back(op.id, rules::kActivationNeedsEmission, i);
      }
    }
  for (const auto& c : a.controllers)
    for (const auto& s : c.subscriptions)
      if (auto* child = op_of(s); child && !some_emission(*child))
        out.emplace_back(c.id, rules::kSubscriptionNeedsEmission, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Key> keys(const CheckReport& r) {
  std::vector<Key> out;
  for (const auto& f : r.findings) out.emplace_back(f.subject, f.rule, f.contract.value_or(0));
  std::sort(out.begin(), out.end());
  return out;
}

/// Perturbs emissions and requirements so that roughly half the results
/// are inconsistent.
void perturb(std::mt19937_64& rng, Architecture& a) {
  for (auto& op : a.contexts)
    for (auto& b : op.contract.basics) {
      if (rng() % 4 == 0) b.emission = Emission::Never;
      if (rng() % 5 == 0 && !a.contexts.empty()) {
        const auto& other = a.contexts[rng() % a.contexts.size()];
        if (other.id != op.id) b.requirements.push_back({Ref{other.id}, std::nullopt});
      }
    }
}

BasicContract random_basic(std::mt19937_64& rng) {
  if (rng() % 4 == 0) return {PullSelf{}, {}, Emission::Never};
  PushActivation p;
  std::size_t terms = 1 + rng() % 3;
  for (std::size_t t = 0; t < terms; ++t) {
    Disjunction d{Ref{"N" + std::to_string(rng() % 5)}};
    if (rng() % 4 == 0) d.push_back(Ref{"N" + std::to_string(rng() % 5)});
    p.terms.push_back(d);
  }
  return {p, {}, Emission::Always};
}

}  // namespace

TEST_SUITE("checker") {
  TEST_CASE("webserver fixture passes with no errors") {
    for (auto name : {"webserver.adl", "webserver_extended.adl", "webserver_topfive.adl", "webserver_danger.adl"}) {
      auto r = check_all(test::fixture(name));
      CHECK_MESSAGE(r.passed(), name << "\n" << render_text(r));
      for (const auto& f : r.findings) CHECK(f.severity == Severity::Note);
    }
  }

  TEST_CASE("contract consistency examples") {
    auto a = test::webserver();
    CHECK(check_contract_consistency(*a.context("AccessingProfile"), a).passed());
    CHECK(check_contract_consistency(*a.context("AccessLogParser"), a).findings.empty());
    CHECK(check_architecture_consistency(test::parse_ok("architecture Empty;")).passed());
  }

  TEST_CASE("mutation suite") {
    auto all = mutations();
    REQUIRE(all.size() >= 10);
    for (const auto& m : all) {
      CAPTURE(m.name);
      auto a = test::fixture(m.fixture);
      m.apply(a);
      auto report = check_all(a);
      auto hits = report.with_rule(m.rule);
      REQUIRE(!hits.empty());
      CHECK(hits.front().subject == m.subject);
      CHECK(hits.front().severity == m.severity);
      if (m.witness) CHECK(hits.front().witness == m.witness);
      CHECK(report.passed() == (m.severity != Severity::Error));
    }
  }

  TEST_CASE("a second pull-only contract on AccessingProfile keeps the operator deterministic") {
    auto a = test::webserver();
    auto& ap = a.context_mut("AccessingProfile");
    ap.pull_params = std::vector<std::string>{};
    ap.contract.basics.push_back({PullSelf{}, {}, Emission::Never});
    CHECK(check_determinacy(a).passed());
    CHECK(check_all(a).passed());
  }

  TEST_CASE("push activation from a sensor source alone is vacuously consistent") {
    auto a = test::parse_ok(R"(architecture V;
type T;
sensor S { source s: T; }
context C: T { contract on push(S.s) no publish; }
)");
    CHECK(check_contract_consistency(a.contexts[0], a).findings.empty());
  }

  TEST_CASE("interference examples") {
    BasicContract pull1{PullSelf{}, {}, Emission::Never};
    BasicContract pull2{PullSelf{}, {}, Emission::Always};
    CHECK(interferes(pull1, pull2));
    CHECK(!interferes(push_from({Ref{"X"}}, Emission::Always), push_from({Ref{"Y"}}, Emission::Always)));
    BasicContract pq{PushActivation{{{Ref{"P"}, Ref{"Q"}}}}, {}, Emission::Always};
    CHECK(interferes(pq, push_from({Ref{"Q"}, Ref{"R"}}, Emission::Always)));
    CHECK(!interferes(pull1, push_from({Ref{"X"}}, Emission::Always)));
  }

  TEST_CASE("interference is symmetric and reflexive") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 1000; ++i) {
      auto a = random_basic(rng);
      auto b = random_basic(rng);
      CHECK(interferes(a, a));
      CHECK(interferes(a, b) == interferes(b, a));
    }
  }

  TEST_CASE("adding a contract never repairs determinacy") {
    std::mt19937_64 rng(9);
    std::size_t failing = 0;
    for (int i = 0; i < 1000; ++i) {
      Architecture a;
      ContextOperator op;
      op.id = "Op";
      std::size_t n = 1 + rng() % 3;
      for (std::size_t k = 0; k < n; ++k) op.contract.basics.push_back(random_basic(rng));
      a.contexts.push_back(op);
      bool before = check_determinacy(a).passed();
      a.contexts[0].contract.basics.push_back(random_basic(rng));
      bool after = check_determinacy(a).passed();
      if (!before) {
        ++failing;
        CHECK(!after);
      }
    }
    CHECK(failing > 100);
  }

  TEST_CASE("consistency agrees with a clause-by-clause oracle") {
    std::mt19937_64 rng(31);
    synth::Options small;
    small.max_components = 10;
    std::size_t inconsistent = 0;
    for (int i = 0; i < 1000; ++i) {
      auto a = synth::random_architecture(rng, small);
      if (a.contexts.size() > 6) a.contexts.resize(6);
      perturb(rng, a);
      auto expected = consistency_oracle(a);
      auto report = check_architecture_consistency(a);
      CHECK(keys(report) == expected);
      CHECK(report.passed() == expected.empty());
      if (!expected.empty()) ++inconsistent;
    }
    CHECK(inconsistent > 100);
  }

  TEST_CASE("typing findings") {
    auto ext = test::fixture("webserver_extended.adl");
    auto disj = check_typing(ext).with_rule(rules::kDisjunctionType);
    REQUIRE(disj.size() == 1);
    CHECK(disj[0].message == "IntrusionDetector | SQLInjDetector : Access");
    CHECK(check_typing(ext).with_rule(rules::kDisjunctionWidensToTop).empty());
  }

  TEST_CASE("report rendering") {
    auto a = test::webserver();
    a.context_mut("IP2Profile").contract.basics.push_back({PullSelf{}, {}, Emission::Never});
    auto r = check_determinacy(a);
    CHECK(render_text(r) ==
          "error: [interfering-contracts] IP2Profile: contracts #0 and #1 can be activated by the same data flow "
          "(witness 0, 1)\n");
    CHECK(render_machine(r) ==
          "finding\terror\tinterfering-contracts\tIP2Profile\t-\t0,1\tcontracts #0 and #1 can be activated by the "
          "same data flow\nverdict\tfail\n");
  }
}
