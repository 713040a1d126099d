#include <random>

#include "scc/manifest.hpp"
#include "scc/synth.hpp"
#include "support.hpp"

using namespace scc;

namespace {

bool has_change(const std::vector<ManifestChange>& cs, ManifestChange::Kind k, std::string_view path) {
  for (const auto& c : cs)
    if (c.kind == k && c.path == path) return true;
  return false;
}

}  // namespace

TEST_SUITE("manifest") {
  TEST_CASE("webserver manifest entries") {
    auto a = test::webserver();
    auto m = generate_manifest(a);
    CHECK(m.architecture == "WebServer");
    CHECK(m.operators.size() == 4);
    CHECK(m.sensors.size() == 3);
    CHECK(m.controllers.size() == 2);
    CHECK(m.actuators.size() == 2);

    const auto* ap = m.op("AccessingProfile");
    REQUIRE(ap != nullptr);
    REQUIRE(ap->method("onNewAccessLogParser") != nullptr);
    REQUIRE(ap->callbacks.size() == 1);
    CHECK(ap->callbacks[0].name == "PullFromIP2Profile");
    CHECK(!ap->callbacks[0].guard.max_invocations.has_value());

    const auto* id = m.op("IntrusionDetector");
    REQUIRE(id != nullptr);
    const auto* pub = id->publish_callback();
    REQUIRE(pub != nullptr);
    CHECK(pub->guard.max_invocations == std::optional<std::size_t>{1});
    REQUIRE(id->calling_methods.size() == 1);
    CHECK(id->calling_methods[0].post_actions == std::vector<PostAction>{PostAction::PublishOnCallback});

    const auto* ip = m.op("IP2Profile");
    CHECK(ip->calling_methods[0].post_actions == std::vector<PostAction>{PostAction::ReturnToCaller});
    CHECK(m.op("AccessLogParser")->calling_methods[0].post_actions ==
          std::vector<PostAction>{PostAction::PublishAlways});
    CHECK(m.op("AccessLogParser")->callbacks.empty());
  }

  TEST_CASE("empty architecture") {
    auto m = generate_manifest(test::parse_ok("architecture Empty;"));
    CHECK(m.operators.empty());
    CHECK(m.sensors.empty());
  }

  TEST_CASE("failed checks abort generation") {
    auto a = test::webserver();
    a.context_mut("IP2Profile").contract.basics.clear();
    try {
      generate_manifest(a);
      FAIL("expected GenerationError");
    } catch (const GenerationError& e) {
      CHECK(!e.report().passed());
    }
  }

  TEST_CASE("guard configuration") {
    GuardConfig g;
    g.pull_max = 3;
    g.publish_max = 2;
    auto m = generate_manifest(test::webserver(), g);
    CHECK(m.op("AccessingProfile")->callbacks[0].guard.max_invocations == std::optional<std::size_t>{3});
    CHECK(m.op("IntrusionDetector")->publish_callback()->guard.max_invocations == std::optional<std::size_t>{2});
  }

  TEST_CASE("stubs") {
    auto m = generate_manifest(test::webserver());
    std::string stubs = render_stubs(m);
    CHECK(stubs.find("get(newIPAddress: IPAddress, ip2Host: IPAddress -> String, host2Profile: String -> Profile) "
                     "-> Profile") != std::string::npos);
    CHECK(stubs == render_stubs(generate_manifest(test::webserver())));
    test::check_golden("webserver.stubs.txt", stubs);
    test::check_golden("webserver.manifest.json", serialize(m));
  }

  TEST_CASE("always-emission blocks have no publish callback line") {
    auto m = generate_manifest(test::webserver());
    std::string stubs = render_stubs(m);
    auto start = stubs.find("context AccessLogParser");
    auto end = stubs.find("\n\n", start);
    CHECK(stubs.substr(start, end - start).find("callback Publish") == std::string::npos);
  }

  TEST_CASE("abstract methods equal the denotations and every component has an entry") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
      auto a = synth::random_architecture(rng);
      auto m = generate_manifest(a);
      REQUIRE(m.operators.size() == a.contexts.size());
      CHECK(m.sensors.size() == a.sensors.size());
      CHECK(m.controllers.size() == a.controllers.size());
      CHECK(m.actuators.size() == a.actuators.size());
      for (const auto& op : a.contexts) {
        const auto* e = m.op(op.id);
        REQUIRE(e != nullptr);
        CHECK(e->abstract_methods == denote(op, a));
        CHECK(e->calling_methods.size() == e->abstract_methods.size());
        bool optional_publish = false;
        for (const auto& b : op.contract.basics) optional_publish |= b.emission == Emission::Maybe;
        CHECK((e->publish_callback() != nullptr) == optional_publish);
        for (const auto& d : e->abstract_methods)
          for (const auto& p : d.params)
            if (p.role == ParamRole::PullCallback) CHECK(e->callback_for(*p.target) != nullptr);
      }
      CHECK(deserialize(serialize(m)) == m);
      CHECK(diff_manifests(m, m).empty());
    }
  }

  TEST_CASE("serialization") {
    auto m = generate_manifest(test::webserver());
    std::string json = serialize(m);
    CHECK(json.rfind("{\n  \"actuators\"", 0) == 0);
    CHECK(json.find("\"manifestVersion\": 1") != std::string::npos);
    CHECK(deserialize(json) == m);
    CHECK_THROWS_AS(deserialize("{"), Error);
    std::string v2 = json;
    v2.replace(v2.find("\"manifestVersion\": 1"), 20, "\"manifestVersion\": 2");
    CHECK_THROWS_AS(deserialize(v2), Error);
  }

  TEST_CASE("diff against the extended architecture") {
    auto before = generate_manifest(test::webserver());
    auto after = generate_manifest(test::fixture("webserver_extended.adl"));
    auto cs = diff_manifests(before, after);
    CHECK(has_change(cs, ManifestChange::Kind::Added, "operators/SQLInjDetector"));
    CHECK(has_change(cs, ManifestChange::Kind::Added, "operators/DangerDetection"));
    CHECK(has_change(cs, ManifestChange::Kind::Added, "operators/DangerDetection/abstractMethods/onNewDisjunction"));
    CHECK(std::is_sorted(cs.begin(), cs.end(), [](const auto& x, const auto& y) { return x.path < y.path; }));
    for (const auto& c : cs) CHECK(c.kind == ManifestChange::Kind::Added);
  }

  TEST_CASE("diff after an emission change") {
    auto a = test::webserver();
    auto before = generate_manifest(a);
    a.context_mut("AccessLogParser").contract.basics[0].emission = Emission::Maybe;
    auto after = generate_manifest(a);
    auto cs = diff_manifests(before, after);
    CHECK(has_change(cs, ManifestChange::Kind::Changed, "operators/AccessLogParser/abstractMethods/onNewLine"));
    CHECK(has_change(cs, ManifestChange::Kind::Added, "operators/AccessLogParser/callbacks/Publish"));
    CHECK(has_change(cs, ManifestChange::Kind::Changed, "operators/AccessLogParser/callingMethods/onNewLine"));
    auto back = diff_manifests(after, before);
    CHECK(has_change(back, ManifestChange::Kind::Removed, "operators/AccessLogParser/callbacks/Publish"));
  }
}
