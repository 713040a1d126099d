#include <random>

#include "scc/parser.hpp"
#include "scc/synth.hpp"
#include "support.hpp"

using namespace scc;

namespace {

bool has_error(const ParseResult& r, std::string_view needle) {
  for (const auto& d : r.diagnostics)
    if (d.severity == Severity::Error && d.message.find(needle) != std::string::npos) return true;
  return false;
}

const char* kWebserverHead = R"(architecture W;
type String;
type Access;
sensor Reader { source line: String; }
actuator Sink { action put(Access); }
)";

std::string mutate(std::mt19937_64& rng, std::string text) {
  static const std::string alphabet = "abcXYZ019_;:,.(){}|# \n\"@";
  std::size_t edits = 1 + rng() % 4;
  for (std::size_t i = 0; i < edits && !text.empty(); ++i) {
    std::size_t pos = rng() % text.size();
    switch (rng() % 3) {
      case 0: text.erase(pos, 1 + rng() % 8); break;
      case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
      default: text[pos] = alphabet[rng() % alphabet.size()]; break;
    }
  }
  return text;
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("webserver fixture inventory") {
    auto a = test::webserver();
    CHECK(a.name == "WebServer");
    CHECK(a.sensors.size() == 3);
    CHECK(a.contexts.size() == 4);
    CHECK(a.controllers.size() == 2);
    CHECK(a.actuators.size() == 2);
  }

  TEST_CASE("fixture contracts") {
    auto a = test::webserver();
    CHECK(format_contract(a.context("AccessLogParser")->contract.basics.at(0)) ==
          "on push(AccessLogReader.line) always publish");
    CHECK(format_contract(a.context("AccessingProfile")->contract.basics.at(0)) ==
          "on push(AccessLogParser) get(IP2Profile) always publish");
    CHECK(format_contract(a.context("IP2Profile")->contract.basics.at(0)) ==
          "on pull get(NSLookup.ip2host, LDAPServer.host2profile) no publish");
    CHECK(format_contract(a.context("IntrusionDetector")->contract.basics.at(0)) ==
          "on push(AccessingProfile) maybe publish");
  }

  TEST_CASE("empty architecture") {
    auto r = parse("architecture Empty;");
    REQUIRE(r.ok());
    CHECK(r.architecture->name == "Empty");
    CHECK(r.architecture->component_count() == 0);
  }

  TEST_CASE("actuator in an activation is rejected") {
    std::string text = std::string(kWebserverHead) + "context C: Access { contract on push(Sink) always publish; }\n";
    auto r = parse(text);
    CHECK(!r.ok());
    CHECK(has_error(r, "activation child must be a sensor source or context operator"));
  }

  TEST_CASE("name resolution errors") {
    std::string head = kWebserverHead;
    CHECK(has_error(parse(head + "context C: Access { contract on push(Ghost) always publish; }\n"),
                    "unknown identifier 'Ghost'"));
    CHECK(has_error(parse(head + "context Reader: Access { contract on push(Reader.line) always publish; }\n"),
                    "duplicate declaration of 'Reader'"));
    CHECK(has_error(parse(head + "context C: Nope { contract on push(Reader.line) always publish; }\n"),
                    "unknown type 'Nope'"));
    CHECK(has_error(parse(head + "context C: Access { contract on push(Reader) always publish; }\n"),
                    "must be referenced through one of its sources"));
    CHECK(has_error(parse(head + "context C: Access { contract on pull no publish; }\n"),
                    "declares no 'pulled with (...)' parameters"));
    CHECK(has_error(parse("architecture A; type self;"), "reserved word"));
  }

  TEST_CASE("forward references are legal") {
    auto a = test::parse_ok(R"(architecture F;
type T;
controller K { on push(B) do Out.put; }
context B: T { contract on push(A) always publish; }
context A: T { contract on push(S.s) always publish; }
sensor S { source s: T; }
actuator Out { action put(T); }
)");
    CHECK(a.contexts.size() == 2);
  }

  TEST_CASE("pull-site argument annotation") {
    auto a = test::parse_ok(R"(architecture P;
type T;
type U;
sensor S { source s: T pulled with (U); }
context C: T pulled with (U) { contract on pull get(S.s(U)) no publish; }
)");
    const auto& site = a.context("C")->contract.basics.at(0).requirements.at(0);
    REQUIRE(site.arg_types.has_value());
    CHECK(*site.arg_types == std::vector<std::string>{"U"});
  }

  TEST_CASE("diagnostic rendering") {
    auto r = parse("architecture A;\ncontext");
    REQUIRE(!r.ok());
    std::string line = render(r.diagnostics.at(0), "a.adl");
    CHECK(line.rfind("a.adl:2:", 0) == 0);
    CHECK(line.find(": error: ") != std::string::npos);
  }

  TEST_CASE("canonical format golden") {
    test::check_golden("webserver.format.adl", format(test::webserver()));
    test::check_golden("webserver_extended.format.adl", format(test::fixture("webserver_extended.adl")));
  }

  TEST_CASE("single source rendering is stable") {
    Architecture a;
    a.name = "One";
    a.types.push_back({"T", std::nullopt});
    a.sensors.push_back({"S", {{"s", "T", {}}}});
    std::string once = format(a);
    CHECK(once == format(a));
    CHECK(once == "architecture One;\n\ntype T;\n\nsensor S {\n  source s: T;\n}\n");
  }

  TEST_CASE("round trip on fixtures") {
    for (auto name : {"webserver.adl", "webserver_extended.adl", "webserver_topfive.adl", "webserver_danger.adl"}) {
      auto a = test::fixture(name);
      CHECK(test::parse_ok(format(a)) == a);
    }
  }

  TEST_CASE("round trip on random architectures") {
    std::mt19937_64 rng(2024);
    synth::Options cyclic;
    cyclic.acyclic = false;
    for (int i = 0; i < 1000; ++i) {
      auto a = synth::random_architecture(rng, i % 2 ? cyclic : synth::Options{});
      auto r = parse(format(a));
      REQUIRE_MESSAGE(r.ok(), format(a));
      CHECK(*r.architecture == a);
    }
  }

  TEST_CASE("diagnostics stay inside the input and parsing is deterministic") {
    std::string base = read_source(test::fixture_path("webserver_extended.adl")).content;
    std::mt19937_64 rng(77);
    std::size_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
      std::string text = mutate(rng, base);
      auto r1 = parse(text);
      auto r2 = parse(text);
      CHECK(r1.architecture == r2.architecture);
      CHECK(r1.diagnostics == r2.diagnostics);
      if (!r1.ok()) {
        ++failures;
        CHECK(!r1.diagnostics.empty());
      }
      for (const auto& d : r1.diagnostics) {
        CHECK(d.span.line >= 1);
        CHECK(d.span.column >= 1);
        CHECK(d.span.offset + d.span.length <= text.size());
      }
    }
    CHECK(failures > 100);
  }

  TEST_CASE("parse_ref") {
    CHECK(parse_ref("NSLookup.ip2host") == Ref{"NSLookup", "ip2host"});
    CHECK(parse_ref("Logger") == Ref{"Logger"});
  }
}
