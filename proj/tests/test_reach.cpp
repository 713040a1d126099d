#include <climits>
#include <map>
#include <random>

#include "oracles/reach_oracle.hpp"
#include "scc/synth.hpp"
#include "scc/verifier.hpp"
#include "support.hpp"

using namespace scc;
using oracle::Oracle;

namespace {

bool is_child(const std::string& parent, const std::string& child, const Architecture& a) {
  if (parse_ref(parent).is_source()) return false;
  for (const auto& c : children(parent, a))
    if (c.str() == child) return true;
  return false;
}

}  // namespace

TEST_SUITE("reach") {
  TEST_CASE("fixture reachability") {
    auto a = test::webserver();
    CHECK(reachable("Logger", Ref{"AccessLogReader", "line"}, a));
    CHECK(reachable("IP2Profile", Ref{"IP2Profile"}, a));
    CHECK(!reachable("Logger", Ref{"Mailer"}, a));
    CHECK(reachable("Mailer", Ref{"LDAPServer", "host2profile"}, a));
    CHECK(!reachable("AccessLogReader", Ref{"AccessLogReader", "line"}, a));
    CHECK_THROWS_AS(reachable("Ghost", Ref{"Logger"}, a), Error);
    CHECK_THROWS_AS(reachable("Logger", Ref{"AccessLogReader", "nope"}, a), Error);
  }

  TEST_CASE("witness paths") {
    auto a = test::webserver();
    auto w = reach_witness("Logger", Ref{"AccessLogReader", "line"}, a);
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<std::string>{"Logger", "ProfileLogger", "AccessingProfile", "AccessLogParser",
                                         "AccessLogReader.line"});
    CHECK(*reach_witness("Mailer", Ref{"Mailer"}, a) == std::vector<std::string>{"Mailer"});
  }

  TEST_CASE("top-five page cannot see profiles") {
    auto a = test::fixture("webserver_topfive.adl");
    CHECK(!reachable("WebPageUpdater", Ref{"AccessingProfile"}, a));
    CHECK(!reach_witness("WebPageUpdater", Ref{"AccessingProfile"}, a).has_value());
    CHECK(reachable("WebPageUpdater", Ref{"AccessLogReader", "line"}, a));
    CHECK(reachable("Logger", Ref{"AccessingProfile"}, a));
  }

  TEST_CASE("agreement with the transitive-closure oracle") {
    std::mt19937_64 rng(100);
    synth::Options cyclic;
    cyclic.acyclic = false;
    std::size_t positive = 0, negative = 0;
    for (int i = 0; i < 200; ++i) {
      auto a = synth::random_architecture(rng, i % 2 ? cyclic : synth::Options{});
      REQUIRE(a.component_count() <= 12);
      Oracle o(a);
      auto m = reach_matrix_serial(a);
      REQUIRE(m.nodes().size() == o.nodes.size());
      CHECK(reach_matrix_parallel(a) == m);
      for (const auto& from : o.nodes) {
        if (parse_ref(from).is_source()) continue;
        for (const auto& to : o.nodes) {
          bool expected = o.reaches(from, to);
          CHECK(reachable(from, parse_ref(to), a) == expected);
          CHECK(m.reachable(parse_ref(from), parse_ref(to)) == expected);
          (expected ? positive : negative)++;
          auto w = reach_witness(from, parse_ref(to), a);
          REQUIRE(w.has_value() == expected);
          if (!w) continue;
          CHECK(w->front() == from);
          CHECK(w->back() == to);
          CHECK(static_cast<int>(w->size()) - 1 == o.distance(from, to));
          for (std::size_t k = 0; k + 1 < w->size(); ++k) CHECK(is_child((*w)[k], (*w)[k + 1], a));
        }
      }
    }
    CHECK(positive > 1000);
    CHECK(negative > 1000);
  }

  TEST_CASE("reachability is reflexive and transitive") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100; ++i) {
      auto a = synth::random_architecture(rng);
      auto m = reach_matrix(a, ExecMode::Serial);
      std::size_t n = m.nodes().size();
      for (std::size_t x = 0; x < n; ++x) {
        CHECK(m.at(x, x));
        for (std::size_t y = 0; y < n; ++y)
          if (m.at(x, y))
            for (std::size_t z = 0; z < n; ++z)
              if (m.at(y, z)) CHECK(m.at(x, z));
      }
    }
  }

  TEST_CASE("serial and parallel matrices agree on large architectures") {
    std::mt19937_64 rng(102);
    synth::Options big;
    big.min_components = 100;
    big.max_components = 300;
    for (int i = 0; i < 5; ++i) {
      auto a = synth::random_architecture(rng, big);
      CHECK(reach_matrix(a, ExecMode::Parallel) == reach_matrix(a, ExecMode::Serial));
    }
  }

  TEST_CASE("node order") {
    auto nodes = reach_nodes(test::webserver());
    REQUIRE(nodes.size() == 14);
    CHECK(nodes[0] == Ref{"AccessLogReader"});
    CHECK(nodes[1] == Ref{"AccessLogReader", "line"});
    CHECK(nodes.back() == Ref{"Logger"});
  }
}
