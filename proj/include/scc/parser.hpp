#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scc/model.hpp"

namespace scc {

struct Span {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
  std::size_t offset = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { Error, Warning, Note };

std::string_view to_string(Severity s);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Span span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct SourceText {
  std::string path;
  std::string content;
};

/// Reads a file; throws scc::Error when it cannot be opened.
SourceText read_source(const std::string& path);

struct ParseResult {
  std::optional<Architecture> architecture;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return architecture.has_value(); }
};

/// Parses and name-resolves an ADL text. On failure `architecture` is
/// empty and at least one error diagnostic is present.
ParseResult parse(const SourceText& src);
ParseResult parse(std::string_view content);

/// `path:line:col: severity: message`
std::string render(const Diagnostic& d, std::string_view path);

/// Canonical ADL rendering; parse(format(a)) == a.
std::string format(const Architecture& arch);

/// `on push(A) get(B) always publish` (no leading keyword, no semicolon).
std::string format_contract(const BasicContract& b);

/// Parses `Sensor.source` or `Component`.
Ref parse_ref(std::string_view text);

bool is_reserved_word(std::string_view word);

}  // namespace scc
