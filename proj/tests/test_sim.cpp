#include <algorithm>
#include <map>
#include <random>

#include "oracles/trace_oracle.hpp"
#include "scc/handlers.hpp"
#include "scc/sim.hpp"
#include "scc/synth.hpp"
#include "support.hpp"

using namespace scc;

namespace {

const char* kSyncArch = R"(architecture Sync;
type T;
sensor Log { source browser: T; source place: T; }
context WebBrowserCalc: T { contract on push(Log.browser) always publish; }
context LocalizationCalc: T { contract on push(Log.place) always publish; }
context InfoCalc: T { contract on push(WebBrowserCalc, LocalizationCalc) always publish; }
)";

Value T(std::string d) { return {"T", std::move(d)}; }

Stimulus publish(Ref source, Value v) { return {Stimulus::Kind::Publish, std::move(source), {std::move(v)}, 0}; }

const SignatureDescriptor& method(const Simulator& sim, const char* op, const char* name) {
  const auto* e = sim.manifest().op(op);
  REQUIRE(e != nullptr);
  const auto* d = e->method(name);
  REQUIRE(d != nullptr);
  return *d;
}

bool contains(const SimTrace& t, EventKind k, std::string_view component, std::string_view peer = {}) {
  return std::any_of(t.events.begin(), t.events.end(), [&](const Event& e) {
    return e.kind == k && e.component == component && (peer.empty() || e.peer == peer);
  });
}

void check_trace(const Architecture& a, const Simulator& sim, const SimTrace& t, bool queue_policy) {
  auto violations = oracle::trace_violations(a, sim, t, queue_policy);
  std::string text;
  for (const auto& v : violations) text += "\n  " + v;
  CHECK_MESSAGE(violations.empty(), text);
}

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("handler registration") {
    Simulator sim(test::webserver());
    const auto& d = method(sim, "AccessLogParser", "onNewLine");
    sim.register_handler(Handler::conforming(d, [](Invocation& inv) {
      return Value{"Access", inv.values().at(0).data};
    }));
    CHECK(sim.bound("AccessLogParser", "onNewLine"));

    try {
      sim.register_handler(Handler::conforming(d, [](Invocation&) { return std::nullopt; }));
      FAIL("expected duplicate-binding");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::DuplicateBinding);
    }

    Handler unit_result = Handler::conforming(method(sim, "AccessingProfile", "onNewAccessLogParser"),
                                              [](Invocation&) { return std::nullopt; });
    unit_result.returns_value = false;
    try {
      sim.register_handler(unit_result);
      FAIL("expected shape-mismatch");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::ShapeMismatch);
    }

    Handler ghost{"AccessLogParser", "onNewThing", {ParamRole::ActivationValue}, true,
                  [](Invocation&) { return std::nullopt; }};
    try {
      sim.register_handler(ghost);
      FAIL("expected unknown-descriptor");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::UnknownDescriptor);
    }
  }

  TEST_CASE("running with unbound methods is refused") {
    Simulator sim(test::webserver());
    Scenario sc{{publish(Ref{"AccessLogReader", "line"}, {"String", "x"})}};
    try {
      sim.run(sc);
      FAIL("expected not-ready");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::NotReady);
    }
  }

  TEST_CASE("empty scenario yields an empty trace") {
    Simulator sim(test::webserver());
    install_pass_through(sim);
    auto t = sim.run({});
    CHECK(t.events.empty());
    CHECK(!t.failed);
  }

  TEST_CASE("one log line through pass-through handlers") {
    auto a = test::webserver();
    Simulator sim(a);
    install_pass_through(sim);
    auto sc = parse_scenario(read_source(test::fixture_path("one_line.scenario")).content, a);
    auto t = sim.run(sc);
    CHECK(!t.failed);
    CHECK(contains(t, EventKind::OperatorActivated, "AccessLogParser"));
    CHECK(contains(t, EventKind::PullIssued, "AccessingProfile", "IP2Profile"));
    CHECK(contains(t, EventKind::PullIssued, "IP2Profile", "NSLookup.ip2host"));
    CHECK(contains(t, EventKind::PullIssued, "IP2Profile", "LDAPServer.host2profile"));
    CHECK(contains(t, EventKind::ActionInvoked, "Logger", "log"));
    CHECK(t.count(EventKind::OperatorActivated, "IntrusionDetector") == 1);
    test::check_golden("webserver.trace.txt", render_text(t));
    CHECK(parse_jsonl(render_jsonl(t)) == t);
  }

  TEST_CASE("webserver handlers resolve profiles and raise alerts") {
    auto a = test::webserver();
    Simulator sim(a);
    install_webserver(sim);
    CHECK(sim.external_pull("IP2Profile", {{"IPAddress", "10.0.0.1"}}) == Value{"Profile", "alice:staff"});
    CHECK(sim.external_pull("IP2Profile", {{"IPAddress", "192.168.1.1"}}) == Value{"Profile", "anonymous"});
    auto t = sim.run({{publish(Ref{"AccessLogReader", "line"}, {"String", "10.0.0.7 GET /admin"}),
                       publish(Ref{"AccessLogReader", "line"}, {"String", "10.0.0.2 GET /"})}});
    CHECK(t.count(EventKind::ActionInvoked, "Mailer") == 1);
    CHECK(t.count(EventKind::ActionInvoked, "Logger") == 2);
  }

  TEST_CASE("external pull errors") {
    Simulator sim(test::webserver());
    install_webserver(sim);
    try {
      sim.external_pull("AccessLogParser", {});
      FAIL("expected no-pull-contract");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::NoPullContract);
    }
    try {
      sim.external_pull("IP2Profile", {});
      FAIL("expected type-mismatch");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::TypeMismatch);
    }
    try {
      sim.external_pull("Nobody", {});
      FAIL("expected unknown-component");
    } catch (const SimError& e) {
      CHECK(e.code() == SimErrc::UnknownComponent);
    }
  }

  TEST_CASE("a bare pull contract returns the latest value without publishing") {
    auto a = test::webserver();
    auto& ap = a.context_mut("AccessingProfile");
    ap.pull_params = std::vector<std::string>{};
    ap.contract.basics.push_back({PullSelf{}, {}, Emission::Never});
    Simulator sim(a);
    install_webserver(sim);
    sim.run({{publish(Ref{"AccessLogReader", "line"}, {"String", "10.0.0.2 GET /"})}});
    std::size_t published = sim.history().count(EventKind::ValuePublished, "AccessingProfile");
    CHECK(sim.external_pull("AccessingProfile", {}) == Value{"Profile", "bob:student"});
    CHECK(sim.history().count(EventKind::ValuePublished, "AccessingProfile") == published);
  }

  TEST_CASE("joint activation consumes one value per queue") {
    auto a = test::parse_ok(kSyncArch);
    Simulator sim(a);
    install_pass_through(sim);
    auto t = sim.run({{publish(Ref{"Log", "browser"}, T("b1")), publish(Ref{"Log", "browser"}, T("b2")),
                       publish(Ref{"Log", "place"}, T("p1"))}});
    CHECK(t.count(EventKind::OperatorActivated, "InfoCalc") == 1);
    CHECK(sim.pending("InfoCalc", 0) == std::vector<std::size_t>{1, 0});
    for (const auto& e : t.events)
      if (e.kind == EventKind::OperatorActivated && e.component == "InfoCalc")
        CHECK(e.values == std::vector<Value>{T("b1"), T("p1")});
    sim.run({{publish(Ref{"Log", "place"}, T("p2"))}});
    CHECK(sim.history().count(EventKind::OperatorActivated, "InfoCalc") == 2);
    CHECK(sim.pending("InfoCalc", 0) == std::vector<std::size_t>{0, 0});
  }

  TEST_CASE("keep-latest synchronization") {
    auto a = test::parse_ok(kSyncArch);
    SimOptions o;
    o.sync_overrides["InfoCalc"] = SyncPolicy::Latest;
    Simulator sim(a, o);
    install_pass_through(sim);
    auto t = sim.run({{publish(Ref{"Log", "browser"}, T("b1")), publish(Ref{"Log", "browser"}, T("b2")),
                       publish(Ref{"Log", "place"}, T("p1"))}});
    CHECK(t.count(EventKind::OperatorActivated, "InfoCalc") == 1);
    CHECK(sim.pending("InfoCalc", 0) == std::vector<std::size_t>{0, 0});
    for (const auto& e : t.events)
      if (e.kind == EventKind::OperatorActivated && e.component == "InfoCalc")
        CHECK(e.values == std::vector<Value>{T("b2"), T("p1")});
  }

  TEST_CASE("steered delivery order") {
    auto a = test::parse_ok(R"(architecture Fan;
type T;
sensor S { source s: T; }
context A: T { contract on push(S.s) no publish; }
context B: T { contract on push(S.s) no publish; }
context C: T { contract on push(S.s) no publish; }
)");
    auto order = [](const SimTrace& t) {
      std::vector<std::string> out;
      for (const auto& e : t.events)
        if (e.kind == EventKind::OperatorActivated) out.push_back(e.component);
      return out;
    };
    Simulator fifo(a);
    install_pass_through(fifo);
    CHECK(order(fifo.run({{publish(Ref{"S", "s"}, T("x"))}})) == std::vector<std::string>{"A", "B", "C"});

    SimOptions o;
    o.steer = {"C", "A", "B", "B", "C"};
    Simulator steered(a, o);
    install_pass_through(steered);
    auto t = steered.run({{publish(Ref{"S", "s"}, T("x")), publish(Ref{"S", "s"}, T("y"))}});
    CHECK(order(t) == std::vector<std::string>{"C", "A", "B", "B", "C", "A"});
  }

  TEST_CASE("publish callback guards") {
    auto a = test::webserver();
    Scenario one{{publish(Ref{"AccessLogReader", "line"}, {"String", "10.0.0.1 GET /"})}};

    SUBCASE("one call publishes") {
      Simulator sim(a);
      sim.register_handler(Handler::conforming(method(sim, "IntrusionDetector", "onNewAccessingProfile"),
                                               [](Invocation& inv) -> std::optional<Value> {
                                                 inv.publisher()({"IdentifiedAccess", "x"});
                                                 return std::nullopt;
                                               }));
      install_pass_through(sim);
      auto t = sim.run(one);
      CHECK(!t.failed);
      CHECK(t.count(EventKind::ValuePublished, "IntrusionDetector") == 1);
      CHECK(t.count(EventKind::ActionInvoked, "Mailer") == 1);
    }

    SUBCASE("stored callback is stale after the handler returns") {
      Simulator sim(a);
      std::optional<PublishCallback> kept;
      sim.register_handler(Handler::conforming(method(sim, "IntrusionDetector", "onNewAccessingProfile"),
                                               [&](Invocation& inv) -> std::optional<Value> {
                                                 kept = inv.publisher();
                                                 return std::nullopt;
                                               }));
      install_pass_through(sim);
      CHECK(!sim.run(one).failed);
      REQUIRE(kept.has_value());
      try {
        (*kept)({"IdentifiedAccess", "late"});
        FAIL("expected stale-callback");
      } catch (const SimError& e) {
        CHECK(e.code() == SimErrc::StaleCallback);
      }
      const Event& last = sim.history().events.back();
      CHECK(last.kind == EventKind::GuardViolation);
      CHECK(last.detail == "stale");
      CHECK(sim.history().count(EventKind::ValuePublished, "IntrusionDetector") == 0);
    }

    SUBCASE("second call exceeds the quota") {
      Simulator sim(a);
      sim.register_handler(Handler::conforming(method(sim, "IntrusionDetector", "onNewAccessingProfile"),
                                               [](Invocation& inv) -> std::optional<Value> {
                                                 inv.publisher()({"IdentifiedAccess", "1"});
                                                 inv.publisher()({"IdentifiedAccess", "2"});
                                                 return std::nullopt;
                                               }));
      install_pass_through(sim);
      auto t = sim.run(one);
      CHECK(t.failed);
      CHECK(t.count(EventKind::GuardViolation, "IntrusionDetector") == 1);
      CHECK(t.count(EventKind::ActivationAborted, "IntrusionDetector") == 1);
      for (const auto& e : t.events)
        if (e.kind == EventKind::GuardViolation) CHECK(e.detail == "quota");
    }
  }

  TEST_CASE("stale pull callback") {
    auto a = test::webserver();
    Simulator sim(a);
    std::optional<PullCallback> kept;
    sim.register_handler(Handler::conforming(method(sim, "AccessingProfile", "onNewAccessLogParser"),
                                             [&](Invocation& inv) -> std::optional<Value> {
                                               kept = inv.pull(Ref{"IP2Profile"});
                                               return Value{"Profile", "p"};
                                             }));
    install_webserver(sim);
    CHECK(!sim.run({{publish(Ref{"AccessLogReader", "line"}, {"String", "10.0.0.1"})}}).failed);
    REQUIRE(kept.has_value());
    CHECK_THROWS_AS((*kept)({{"IPAddress", "10.0.0.1"}}), SimError);
    CHECK(sim.history().events.back().kind == EventKind::GuardViolation);
  }

  TEST_CASE("pull quota") {
    GuardConfig g;
    g.pull_max = 1;
    auto a = test::webserver();
    Simulator sim(a, generate_manifest(a, g));
    sim.register_handler(Handler::conforming(method(sim, "AccessingProfile", "onNewAccessLogParser"),
                                             [](Invocation& inv) -> std::optional<Value> {
                                               inv.pulls().at(0)({{"IPAddress", "10.0.0.1"}});
                                               return inv.pulls().at(0)({{"IPAddress", "10.0.0.2"}});
                                             }));
    install_webserver(sim);
    auto t = sim.run({{publish(Ref{"AccessLogReader", "line"}, {"String", "10.0.0.1"})}});
    CHECK(t.failed);
    CHECK(t.count(EventKind::PullIssued, "AccessingProfile") == 1);
    CHECK(t.count(EventKind::GuardViolation, "AccessingProfile") == 1);
  }

  TEST_CASE("handler faults fail the trace") {
    Simulator sim(test::webserver());
    sim.register_handler(Handler::conforming(method(sim, "AccessLogParser", "onNewLine"),
                                             [](Invocation&) -> std::optional<Value> { throw std::runtime_error("boom"); }));
    install_pass_through(sim);
    auto t = sim.run({{publish(Ref{"AccessLogReader", "line"}, {"String", "x"})}});
    CHECK(t.failed);
    CHECK(t.count(EventKind::HandlerFault, "AccessLogParser") == 1);
    CHECK(t.count(EventKind::OperatorActivated, "AccessingProfile") == 0);
    CHECK(render_text(t).find("verdict failed") != std::string::npos);
  }

  TEST_CASE("scenario files") {
    auto a = test::webserver();
    auto sc = parse_scenario("publish AccessLogReader.line \"a b\"  # comment\npull IP2Profile (10.0.0.1)\n", a);
    REQUIRE(sc.steps.size() == 2);
    CHECK(sc.steps[0].values == std::vector<Value>{{"String", "a b"}});
    CHECK(sc.steps[1].kind == Stimulus::Kind::Pull);
    CHECK(sc.steps[1].values == std::vector<Value>{{"IPAddress", "10.0.0.1"}});
    CHECK(parse_scenario(format_scenario(sc), a).steps.size() == 2);
    CHECK_THROWS_WITH_AS(parse_scenario("\npublish Nope.x 1\n", a), doctest::Contains("scenario line 2"), Error);
    CHECK_THROWS_AS(parse_scenario("pull AccessLogParser ()\n", a), Error);
  }

  TEST_CASE("semantic properties over random architectures and scenarios") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 1000; ++i) {
      CAPTURE(i);
      auto a = synth::random_architecture(rng);
      auto sc = synth::random_scenario(rng, a, 8);
      SimOptions o;
      o.seed = rng();
      o.schedule = rng() % 2 ? Schedule::Random : Schedule::Fifo;
      o.sync = rng() % 4 == 0 ? SyncPolicy::Latest : SyncPolicy::Queue;
      PackOptions pack;
      pack.seed = rng();

      Simulator sim(a, o);
      install_pass_through(sim, pack);
      auto t = sim.run(sc);
      CAPTURE(format(a));
      CAPTURE(format_scenario(sc));
      check_trace(a, sim, t, o.sync == SyncPolicy::Queue);

      Simulator again(a, o);
      install_pass_through(again, pack);
      CHECK(again.run(sc) == t);
    }
  }

  TEST_CASE("each stimulus starts its own causal chain") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
      auto a = synth::random_architecture(rng);
      auto sc = synth::random_scenario(rng, a, 6);
      Simulator sim(a);
      install_pass_through(sim);
      for (const auto& step : sc.steps) {
        auto t = sim.run({{step}});
        REQUIRE(!t.events.empty());
        const Event& first = t.events.front();
        if (step.kind == Stimulus::Kind::Publish)
          CHECK(first.kind == EventKind::SourcePublished);
        else
          CHECK((first.kind == EventKind::PullIssued && first.component == "external"));
      }
    }
  }
}
