#include <random>

#include "scc/checker.hpp"
#include "scc/handlers.hpp"
#include "scc/sim.hpp"
#include "scc/synth.hpp"
#include "support.hpp"

using namespace scc;

TEST_SUITE("cross") {
  TEST_CASE("checked architectures run without integrity faults") {
    std::mt19937_64 rng(4242);
    std::size_t runs = 0, activations = 0;
    for (int i = 0; i < 50; ++i) {
      auto a = synth::random_architecture(rng);
      CAPTURE(format(a));
      REQUIRE(check_all(a).passed());
      for (int k = 0; k < 20; ++k) {
        auto sc = synth::random_scenario(rng, a, 10);
        SimOptions o;
        o.seed = rng();
        o.schedule = k % 2 ? Schedule::Random : Schedule::Fifo;
        Simulator sim(a, o);
        PackOptions pack;
        pack.seed = rng();
        install_pass_through(sim, pack);
        auto t = sim.run(sc);
        CAPTURE(format_scenario(sc));
        CHECK(!t.failed);
        CHECK(t.count(EventKind::IntegrityFault) == 0);
        CHECK(t.count(EventKind::HandlerFault) == 0);
        for (const auto& e : t.events) CHECK(e.detail.find("no matching contract") == std::string::npos);
        activations += t.count(EventKind::OperatorActivated);
        ++runs;
      }
    }
    CHECK(runs == 1000);
    CHECK(activations > 1000);
  }

  TEST_CASE("the fixtures run with every handler pack") {
    for (auto name : {"webserver.adl", "webserver_extended.adl", "webserver_topfive.adl", "webserver_danger.adl"}) {
      auto a = test::fixture(name);
      for (const auto& pack : handler_pack_names()) {
        CAPTURE(name);
        CAPTURE(pack);
        Simulator sim(a);
        install_pack(sim, pack);
        Scenario sc{{{Stimulus::Kind::Publish, Ref{"AccessLogReader", "line"}, {{"String", "10.0.0.3 GET /"}}, 0},
                     {Stimulus::Kind::Publish, Ref{"AccessLogReader", "line"}, {{"String", "10.0.0.8 GET /"}}, 0}}};
        auto t = sim.run(sc);
        CHECK(!t.failed);
        CHECK(t.count(EventKind::ActionInvoked, "Logger") == 2);
      }
    }
    Simulator sim(test::webserver());
    CHECK_THROWS_AS(install_pack(sim, "no-such-pack"), Error);
  }
}
