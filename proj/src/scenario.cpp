#include <cctype>

#include "json.hpp"
#include "scc/denotation.hpp"
#include "scc/parser.hpp"
#include "scc/sim.hpp"

namespace scc {

namespace {

class LineScanner {
 public:
  LineScanner(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  bool take(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!take(c)) fail(std::string("expected '") + c + "'");
  }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           std::string_view("(),#\"").find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    if (start == pos_) fail("expected a word");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string literal() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '"') {
      std::size_t start = pos_++;
      while (pos_ < text_.size() && text_[pos_] != '"') pos_ += text_[pos_] == '\\' ? 2 : 1;
      if (pos_ >= text_.size()) fail("unterminated string literal");
      ++pos_;
      try {
        return nlohmann::json::parse(text_.substr(start, pos_ - start)).get<std::string>();
      } catch (const nlohmann::json::exception&) {
        fail("malformed string literal");
      }
    }
    return word();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("scenario line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

Scenario parse_scenario(std::string_view text, const Architecture& arch) {
  Scenario out;
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    std::size_t nl = text.find('\n');
    std::string_view current = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    LineScanner sc(current, line);
    if (sc.at_end()) continue;
    std::string verb = sc.word();
    Stimulus s;
    s.line = line;
    if (verb == "publish") {
      s.kind = Stimulus::Kind::Publish;
      s.target = parse_ref(sc.word());
      const SourceDecl* decl = arch.source(s.target);
      if (!decl) sc.fail("'" + s.target.str() + "' is not a sensor source");
      s.values.push_back({decl->value_type, sc.literal()});
    } else if (verb == "pull") {
      s.kind = Stimulus::Kind::Pull;
      s.target = Ref{sc.word()};
      const ContextOperator* op = arch.context(s.target.component);
      if (!op) sc.fail("'" + s.target.component + "' is not a context operator");
      if (!op->has_pull_contract()) sc.fail("'" + op->id + "' has no pull contract");
      const auto& types = op->args();
      sc.expect('(');
      if (!sc.take(')')) {
        do {
          if (s.values.size() >= types.size())
            sc.fail("too many arguments for " + op->id + " (" + std::to_string(types.size()) + " declared)");
          s.values.push_back({types[s.values.size()], sc.literal()});
        } while (sc.take(','));
        sc.expect(')');
      }
      if (s.values.size() != types.size())
        sc.fail(op->id + " takes " + std::to_string(types.size()) + " argument(s)");
    } else {
      sc.fail("unknown directive '" + verb + "' (expected publish or pull)");
    }
    if (!sc.at_end()) sc.fail("unexpected text after " + verb);
    out.steps.push_back(std::move(s));
  }
  return out;
}

std::string format_scenario(const Scenario& s) {
  std::string out;
  for (const auto& st : s.steps) {
    if (st.kind == Stimulus::Kind::Publish) {
      out += "publish " + st.target.str() + " " + quoted(st.values.at(0).data) + "\n";
    } else {
      out += "pull " + st.target.str() + " (";
      for (std::size_t i = 0; i < st.values.size(); ++i) out += (i ? ", " : "") + quoted(st.values[i].data);
      out += ")\n";
    }
  }
  return out;
}

}  // namespace scc
