#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "scc/parser.hpp"

namespace scc::test {

inline std::string fixture_path(const std::string& name) { return std::string(SCC_FIXTURE_DIR) + "/" + name; }

inline Architecture fixture(const std::string& name) {
  auto r = parse(read_source(fixture_path(name)));
  if (!r.architecture) {
    std::string msg = name + " does not parse:";
    for (const auto& d : r.diagnostics) msg += "\n" + render(d, name);
    throw Error(msg);
  }
  return *r.architecture;
}

inline Architecture webserver() { return fixture("webserver.adl"); }

inline Architecture parse_ok(std::string_view text) {
  auto r = parse(text);
  if (!r.architecture) {
    std::string msg = "parse failed:";
    for (const auto& d : r.diagnostics) msg += "\n" + render(d, "<text>");
    throw Error(msg);
  }
  return *r.architecture;
}

/// Compares against tests/golden/<name>; SCC_UPDATE_GOLDEN=1 rewrites it.
inline void check_golden(const std::string& name, const std::string& actual) {
  std::string path = std::string(SCC_GOLDEN_DIR) + "/" + name;
  if (const char* u = std::getenv("SCC_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  std::ifstream f(path, std::ios::binary);
  REQUIRE_MESSAGE(f.good(), "missing golden file " << path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == actual);
}

}  // namespace scc::test
