#include "scc/parser.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace scc {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "?";
}

SourceText read_source(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return {path, ss.str()};
}

std::string render(const Diagnostic& d, std::string_view path) {
  std::ostringstream os;
  os << path << ':' << d.span.line << ':' << d.span.column << ": " << to_string(d.severity)
     << ": " << d.message;
  return os.str();
}

namespace {

constexpr std::array<std::string_view, 21> kReserved = {
    "architecture", "type",   "extends", "sensor", "source", "pulled",     "with",
    "context",      "contract", "on",    "push",   "pull",   "get",        "always",
    "maybe",        "no",     "publish", "controller", "do", "actuator", "action"};

}  // namespace

bool is_reserved_word(std::string_view w) {
  return w == "self" ||
         std::find(kReserved.begin(), kReserved.end(), w) != kReserved.end();
}

namespace {

// ---------------------------------------------------------------------------
// Lexing

enum class Tok { Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

/// Offset of the first byte that breaks UTF-8 well-formedness, if any.
std::optional<std::size_t> invalid_utf8_offset(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return i;
    i += len;
  }
  return std::nullopt;
}

Span span_at(std::string_view s, std::size_t offset, std::size_t length) {
  Span sp;
  sp.offset = offset;
  sp.length = length;
  for (std::size_t i = 0; i < offset && i < s.size(); ++i) {
    if (s[i] == '\n') {
      ++sp.line;
      sp.column = 1;
    } else {
      ++sp.column;
    }
  }
  return sp;
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::vector<Token> lex(std::string_view s, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Span sp{line, col, 1, i};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      sp.length = j - i;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), sp});
      advance(j - i);
      continue;
    }
    if (std::string_view(";:{}(),|.").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), sp});
      advance(1);
      continue;
    }
    // One diagnostic per offending character (a whole UTF-8 sequence).
    std::size_t len = 1;
    while (i + len < s.size() && (static_cast<unsigned char>(s[i + len]) >> 6) == 0x2) ++len;
    sp.length = len;
    diags.push_back({Severity::Error, "unexpected character '" + std::string(s.substr(i, len)) + "'", sp});
    i += len;
    ++col;
  }
  Span end{line, col, 0, s.size()};
  out.push_back({Tok::End, "", end});
  return out;
}

// ---------------------------------------------------------------------------
// Concrete syntax tree (spans retained for resolution diagnostics)

struct RawName {
  std::string text;
  Span span;
};

struct RawRef {
  std::string component;
  std::string source;
  Span span;

  bool is_source_form() const { return !source.empty(); }
};

struct RawPullSite {
  RawRef ref;
  std::optional<std::vector<RawName>> args;
};

struct RawBasic {
  bool pull = false;
  std::vector<std::vector<RawRef>> terms;
  std::vector<RawPullSite> requirements;
  Emission emission = Emission::Never;
  Span span;
};

struct RawSource {
  RawName name;
  RawName type;
  std::vector<RawName> pulled;
};

struct RawSensor {
  RawName name;
  std::vector<RawSource> sources;
};

struct RawContext {
  RawName name;
  RawName type;
  std::optional<std::vector<RawName>> pulled;
  std::vector<RawBasic> basics;
};

struct RawController {
  RawName name;
  std::vector<RawRef> subscriptions;
  std::vector<RawRef> orders;
};

struct RawAction {
  RawName name;
  std::vector<RawName> params;
};

struct RawActuator {
  RawName name;
  std::vector<RawAction> actions;
};

struct RawTypeDecl {
  RawName name;
  std::optional<RawName> super;
};

struct RawArch {
  RawName name;
  std::vector<RawTypeDecl> types;
  std::vector<RawSensor> sensors;
  std::vector<RawContext> contexts;
  std::vector<RawController> controllers;
  std::vector<RawActuator> actuators;
};

// ---------------------------------------------------------------------------
// Recursive descent

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  std::optional<RawArch> parse_file() {
    RawArch arch;
    try {
      expect_keyword("architecture");
      arch.name = expect_ident("architecture name");
      expect_punct(';');
    } catch (const SyntaxError&) {
      return std::nullopt;
    }
    while (peek().kind != Tok::End) {
      std::size_t start = pos_;
      try {
        parse_decl(arch);
      } catch (const SyntaxError&) {
        recover(start);
      }
    }
    return arch;
  }

 private:
  struct SyntaxError {};

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  bool at_punct(char c) const {
    return peek().kind == Tok::Punct && peek().text[0] == c;
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  [[noreturn]] void fail(const Span& sp, std::string msg) {
    diags_.push_back({Severity::Error, std::move(msg), sp});
    throw SyntaxError{};
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail(peek().span, "expected '" + std::string(kw) + "', found " + describe(peek()));
    take();
  }

  void expect_punct(char c) {
    if (!at_punct(c)) fail(peek().span, std::string("expected '") + c + "', found " + describe(peek()));
    take();
  }

  RawName expect_ident(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t.span, "expected " + std::string(what) + ", found " + describe(t));
    if (is_reserved_word(t.text))
      fail(t.span, "'" + t.text + "' is a reserved word and cannot be used as " + std::string(what));
    take();
    return {t.text, t.span};
  }

  // Skips to the next token that can start a declaration.
  void recover(std::size_t decl_start) {
    static constexpr std::array<std::string_view, 5> kDeclStarts = {"type", "sensor", "context",
                                                                     "controller", "actuator"};
    if (pos_ == decl_start) take();
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident &&
          std::find(kDeclStarts.begin(), kDeclStarts.end(), peek().text) != kDeclStarts.end())
        return;
      take();
    }
  }

  void parse_decl(RawArch& arch) {
    if (at_keyword("type")) {
      take();
      RawTypeDecl d;
      d.name = expect_ident("type name");
      if (at_keyword("extends")) {
        take();
        d.super = expect_ident("supertype name");
      }
      expect_punct(';');
      arch.types.push_back(std::move(d));
    } else if (at_keyword("sensor")) {
      take();
      arch.sensors.push_back(parse_sensor());
    } else if (at_keyword("context")) {
      take();
      arch.contexts.push_back(parse_context());
    } else if (at_keyword("controller")) {
      take();
      arch.controllers.push_back(parse_controller());
    } else if (at_keyword("actuator")) {
      take();
      arch.actuators.push_back(parse_actuator());
    } else {
      fail(peek().span, "expected a declaration (type, sensor, context, controller, actuator), found " +
                            describe(peek()));
    }
  }

  std::vector<RawName> parse_type_list() {
    expect_punct('(');
    std::vector<RawName> out;
    if (!at_punct(')')) {
      out.push_back(expect_ident("type name"));
      while (at_punct(',')) {
        take();
        out.push_back(expect_ident("type name"));
      }
    }
    expect_punct(')');
    return out;
  }

  std::optional<std::vector<RawName>> parse_pulled_with() {
    if (!at_keyword("pulled")) return std::nullopt;
    take();
    expect_keyword("with");
    return parse_type_list();
  }

  RawSensor parse_sensor() {
    RawSensor s;
    s.name = expect_ident("sensor name");
    expect_punct('{');
    do {
      expect_keyword("source");
      RawSource src;
      src.name = expect_ident("source name");
      expect_punct(':');
      src.type = expect_ident("type name");
      if (auto p = parse_pulled_with()) src.pulled = std::move(*p);
      expect_punct(';');
      s.sources.push_back(std::move(src));
    } while (!at_punct('}'));
    expect_punct('}');
    return s;
  }

  RawRef parse_ref() {
    RawName first = expect_ident("component name");
    RawRef r{first.text, "", first.span};
    if (at_punct('.')) {
      take();
      RawName second = expect_ident("source name");
      r.source = second.text;
      r.span.length = second.span.offset + second.span.length - first.span.offset;
    }
    return r;
  }

  RawContext parse_context() {
    RawContext c;
    c.name = expect_ident("context operator name");
    expect_punct(':');
    c.type = expect_ident("type name");
    c.pulled = parse_pulled_with();
    expect_punct('{');
    do {
      c.basics.push_back(parse_basic());
    } while (!at_punct('}'));
    expect_punct('}');
    return c;
  }

  RawBasic parse_basic() {
    RawBasic b;
    b.span = peek().span;
    expect_keyword("contract");
    expect_keyword("on");
    if (at_keyword("pull")) {
      take();
      b.pull = true;
    } else if (at_keyword("push")) {
      take();
      expect_punct('(');
      do {
        if (!b.terms.empty()) take();  // ','
        std::vector<RawRef> term{parse_ref()};
        while (at_punct('|')) {
          take();
          term.push_back(parse_ref());
        }
        b.terms.push_back(std::move(term));
      } while (at_punct(','));
      expect_punct(')');
    } else {
      fail(peek().span, "expected 'push' or 'pull', found " + describe(peek()));
    }
    if (at_keyword("get")) {
      take();
      expect_punct('(');
      if (!at_punct(')')) {
        do {
          if (!b.requirements.empty()) take();  // ','
          RawPullSite site{parse_ref(), std::nullopt};
          if (at_punct('(')) site.args = parse_type_list();
          b.requirements.push_back(std::move(site));
        } while (at_punct(','));
      }
      expect_punct(')');
    }
    if (at_keyword("always")) {
      b.emission = Emission::Always;
    } else if (at_keyword("maybe")) {
      b.emission = Emission::Maybe;
    } else if (at_keyword("no")) {
      b.emission = Emission::Never;
    } else {
      fail(peek().span, "expected emission ('always', 'maybe' or 'no'), found " + describe(peek()));
    }
    take();
    expect_keyword("publish");
    Span end = peek().span;
    expect_punct(';');
    b.span.length = end.offset + 1 - b.span.offset;
    return b;
  }

  RawController parse_controller() {
    RawController c;
    c.name = expect_ident("controller name");
    expect_punct('{');
    expect_keyword("on");
    expect_keyword("push");
    expect_punct('(');
    c.subscriptions.push_back(parse_ref());
    while (at_punct(',')) {
      take();
      c.subscriptions.push_back(parse_ref());
    }
    expect_punct(')');
    expect_keyword("do");
    c.orders.push_back(parse_order());
    while (at_punct(',')) {
      take();
      c.orders.push_back(parse_order());
    }
    expect_punct(';');
    expect_punct('}');
    return c;
  }

  RawRef parse_order() {
    RawRef r = parse_ref();
    if (!r.is_source_form()) fail(r.span, "an order must name an actuator action as 'Actuator.action'");
    return r;
  }

  RawActuator parse_actuator() {
    RawActuator a;
    a.name = expect_ident("actuator name");
    expect_punct('{');
    do {
      expect_keyword("action");
      RawAction act;
      act.name = expect_ident("action name");
      act.params = parse_type_list();
      expect_punct(';');
      a.actions.push_back(std::move(act));
    } while (!at_punct('}'));
    expect_punct('}');
    return a;
  }
};

// ---------------------------------------------------------------------------
// Name resolution

class Resolver {
 public:
  Resolver(const RawArch& raw, std::vector<Diagnostic>& diags) : raw_(raw), diags_(diags) {}

  std::optional<Architecture> run() {
    Architecture arch;
    arch.name = raw_.name.text;
    resolve_types(arch);
    collect_components();
    for (const auto& s : raw_.sensors) arch.sensors.push_back(resolve_sensor(s));
    for (const auto& c : raw_.contexts) arch.contexts.push_back(resolve_context(c));
    for (const auto& c : raw_.controllers) arch.controllers.push_back(resolve_controller(c));
    for (const auto& a : raw_.actuators) arch.actuators.push_back(resolve_actuator(a));
    if (failed_) return std::nullopt;
    return arch;
  }

 private:
  const RawArch& raw_;
  std::vector<Diagnostic>& diags_;
  bool failed_ = false;
  std::map<std::string, std::optional<std::string>, std::less<>> types_;
  std::map<std::string, ComponentKind, std::less<>> kinds_;
  std::map<std::string, const RawSensor*, std::less<>> sensors_;
  std::map<std::string, const RawActuator*, std::less<>> actuators_;

  void error(const Span& sp, std::string msg) {
    diags_.push_back({Severity::Error, std::move(msg), sp});
    failed_ = true;
  }

  void resolve_types(Architecture& arch) {
    for (const auto& t : raw_.types) {
      if (t.name.text == kTopType) {
        error(t.name.span, "type '" + t.name.text + "' is implicit and cannot be declared");
        continue;
      }
      if (!types_.emplace(t.name.text, t.super ? std::optional(t.super->text) : std::nullopt).second) {
        error(t.name.span, "duplicate declaration of type '" + t.name.text + "'");
        continue;
      }
      arch.types.push_back({t.name.text, t.super ? std::optional(t.super->text) : std::nullopt});
    }
    for (const auto& t : raw_.types) {
      if (!t.super) continue;
      if (!check_type(*t.super)) continue;
      // Walk up; revisiting the start means a cycle.
      std::set<std::string, std::less<>> seen{t.name.text};
      std::optional<std::string> cur = t.super->text;
      while (cur && *cur != kTopType) {
        if (!seen.insert(*cur).second) {
          error(t.name.span, "cyclic supertype chain involving type '" + t.name.text + "'");
          break;
        }
        auto it = types_.find(*cur);
        if (it == types_.end()) break;
        cur = it->second;
      }
    }
  }

  bool check_type(const RawName& n) {
    if (n.text == kTopType || types_.count(n.text)) return true;
    error(n.span, "unknown type '" + n.text + "'");
    return false;
  }

  std::vector<std::string> check_types(const std::vector<RawName>& ns) {
    std::vector<std::string> out;
    for (const auto& n : ns) {
      check_type(n);
      out.push_back(n.text);
    }
    return out;
  }

  void declare(const RawName& n, ComponentKind k) {
    auto [it, fresh] = kinds_.emplace(n.text, k);
    if (!fresh)
      error(n.span, "duplicate declaration of '" + n.text + "' (already declared as " +
                        std::string(to_string(it->second)) + ")");
  }

  void collect_components() {
    for (const auto& s : raw_.sensors) {
      declare(s.name, ComponentKind::Sensor);
      sensors_.emplace(s.name.text, &s);
    }
    for (const auto& c : raw_.contexts) declare(c.name, ComponentKind::Context);
    for (const auto& c : raw_.controllers) declare(c.name, ComponentKind::Controller);
    for (const auto& a : raw_.actuators) {
      declare(a.name, ComponentKind::Actuator);
      actuators_.emplace(a.name.text, &a);
    }
  }

  std::optional<ComponentKind> kind(std::string_view id) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end()) return std::nullopt;
    return it->second;
  }

  Sensor resolve_sensor(const RawSensor& rs) {
    Sensor s{rs.name.text, {}};
    std::set<std::string, std::less<>> seen;
    for (const auto& src : rs.sources) {
      if (!seen.insert(src.name.text).second)
        error(src.name.span, "duplicate source '" + src.name.text + "' in sensor '" + s.id + "'");
      check_type(src.type);
      s.sources.push_back({src.name.text, src.type.text, check_types(src.pulled)});
    }
    return s;
  }

  Ref resolve_child(const RawRef& r, const std::string& owner, std::string_view role) {
    Ref out{r.component, r.source};
    auto k = kind(r.component);
    if (!k) {
      error(r.span, "unknown identifier '" + r.component + "'");
      return out;
    }
    if (r.is_source_form()) {
      if (*k != ComponentKind::Sensor) {
        error(r.span, "'" + r.component + "' is not a sensor; only sensor sources use the 'Sensor.source' form");
        return out;
      }
      const RawSensor* s = sensors_.at(r.component);
      bool found = std::any_of(s->sources.begin(), s->sources.end(),
                               [&](const RawSource& src) { return src.name.text == r.source; });
      if (!found) error(r.span, "sensor '" + r.component + "' has no source '" + r.source + "'");
      return out;
    }
    switch (*k) {
      case ComponentKind::Sensor:
        error(r.span, "sensor '" + r.component + "' must be referenced through one of its sources ('" +
                          r.component + ".<source>')");
        break;
      case ComponentKind::Context:
        if (r.component == owner)
          error(r.span, "context operator '" + owner + "' cannot be its own child");
        break;
      case ComponentKind::Controller:
      case ComponentKind::Actuator:
        error(r.span, std::string(role) + " child must be a sensor source or context operator");
        break;
    }
    return out;
  }

  ContextOperator resolve_context(const RawContext& rc) {
    ContextOperator c;
    c.id = rc.name.text;
    check_type(rc.type);
    c.value_type = rc.type.text;
    if (rc.pulled) c.pull_params = check_types(*rc.pulled);
    for (const auto& rb : rc.basics) {
      BasicContract b;
      b.emission = rb.emission;
      if (rb.pull) {
        b.activation = PullSelf{};
        if (!rc.pulled)
          error(rb.span, "context operator '" + c.id +
                             "' has a pull contract but declares no 'pulled with (...)' parameters");
      } else {
        PushActivation push;
        std::set<Ref> seen;
        for (const auto& term : rb.terms) {
          Disjunction d;
          for (const auto& r : term) {
            Ref ref = resolve_child(r, c.id, "activation");
            if (!seen.insert(ref).second)
              error(r.span, "'" + ref.str() + "' appears more than once in the activation");
            d.push_back(std::move(ref));
          }
          push.terms.push_back(std::move(d));
        }
        b.activation = std::move(push);
      }
      std::set<Ref> seen_req;
      for (const auto& site : rb.requirements) {
        PullSite ps{resolve_child(site.ref, c.id, "requirement"), std::nullopt};
        if (!seen_req.insert(ps.target).second)
          error(site.ref.span, "'" + ps.target.str() + "' is required more than once");
        if (site.args) ps.arg_types = check_types(*site.args);
        b.requirements.push_back(std::move(ps));
      }
      c.contract.basics.push_back(std::move(b));
    }
    return c;
  }

  ControlOperator resolve_controller(const RawController& rc) {
    ControlOperator c;
    c.id = rc.name.text;
    for (const auto& r : rc.subscriptions) {
      auto k = kind(r.component);
      if (!k)
        error(r.span, "unknown identifier '" + r.component + "'");
      else if (*k != ComponentKind::Context || r.is_source_form())
        error(r.span, "controller subscription must be a context operator");
      c.subscriptions.push_back(r.component);
    }
    for (const auto& r : rc.orders) {
      auto k = kind(r.component);
      if (!k) {
        error(r.span, "unknown identifier '" + r.component + "'");
      } else if (*k != ComponentKind::Actuator) {
        error(r.span, "order target must be an actuator action");
      } else {
        const RawActuator* a = actuators_.at(r.component);
        bool found = std::any_of(a->actions.begin(), a->actions.end(),
                                 [&](const RawAction& act) { return act.name.text == r.source; });
        if (!found) error(r.span, "actuator '" + r.component + "' has no action '" + r.source + "'");
      }
      c.orders.push_back({r.component, r.source});
    }
    return c;
  }

  Actuator resolve_actuator(const RawActuator& ra) {
    Actuator a{ra.name.text, {}};
    std::set<std::string, std::less<>> seen;
    for (const auto& act : ra.actions) {
      if (!seen.insert(act.name.text).second)
        error(act.name.span, "duplicate action '" + act.name.text + "' in actuator '" + a.id + "'");
      a.actions.push_back({act.name.text, check_types(act.params)});
    }
    return a;
  }
};

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

}  // namespace

ParseResult parse(const SourceText& src) {
  ParseResult res;
  if (auto bad = invalid_utf8_offset(src.content)) {
    res.diagnostics.push_back(
        {Severity::Error, "input is not valid UTF-8", span_at(src.content, *bad, 1)});
    return res;
  }
  auto toks = lex(src.content, res.diagnostics);
  Parser parser(std::move(toks), res.diagnostics);
  auto raw = parser.parse_file();
  bool syntax_ok = std::none_of(res.diagnostics.begin(), res.diagnostics.end(),
                                [](const Diagnostic& d) { return d.severity == Severity::Error; });
  if (!raw || !syntax_ok) return res;
  Resolver resolver(*raw, res.diagnostics);
  res.architecture = resolver.run();
  return res;
}

ParseResult parse(std::string_view content) { return parse(SourceText{"<input>", std::string(content)}); }

Ref parse_ref(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Ref{std::string(text)};
  return Ref{std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

std::string format_contract(const BasicContract& b) {
  std::string out = "on ";
  if (b.is_pull()) {
    out += "pull";
  } else {
    std::vector<std::string> terms;
    for (const auto& term : b.push()->terms) {
      std::vector<std::string> alts;
      for (const auto& r : term) alts.push_back(r.str());
      terms.push_back(join(alts, " | "));
    }
    out += "push(" + join(terms, ", ") + ")";
  }
  if (!b.requirements.empty()) {
    std::vector<std::string> reqs;
    for (const auto& site : b.requirements) {
      std::string s = site.target.str();
      if (site.arg_types) s += "(" + join(*site.arg_types, ", ") + ")";
      reqs.push_back(std::move(s));
    }
    out += " get(" + join(reqs, ", ") + ")";
  }
  out += " ";
  out += to_string(b.emission);
  out += " publish";
  return out;
}

std::string format(const Architecture& arch) {
  std::ostringstream os;
  os << "architecture " << arch.name << ";\n";
  if (!arch.types.empty()) {
    os << '\n';
    for (const auto& t : arch.types) {
      os << "type " << t.name;
      if (t.supertype) os << " extends " << *t.supertype;
      os << ";\n";
    }
  }
  for (const auto& s : arch.sensors) {
    os << "\nsensor " << s.id << " {\n";
    for (const auto& src : s.sources) {
      os << "  source " << src.name << ": " << src.value_type;
      if (!src.pull_params.empty()) os << " pulled with (" << join(src.pull_params, ", ") << ")";
      os << ";\n";
    }
    os << "}\n";
  }
  for (const auto& c : arch.contexts) {
    os << "\ncontext " << c.id << ": " << c.value_type;
    if (c.pull_params) os << " pulled with (" << join(*c.pull_params, ", ") << ")";
    os << " {\n";
    for (const auto& b : c.contract.basics) os << "  contract " << format_contract(b) << ";\n";
    os << "}\n";
  }
  for (const auto& c : arch.controllers) {
    std::vector<std::string> orders;
    for (const auto& o : c.orders) orders.push_back(o.str());
    os << "\ncontroller " << c.id << " {\n  on push(" << join(c.subscriptions, ", ") << ") do "
       << join(orders, ", ") << ";\n}\n";
  }
  for (const auto& a : arch.actuators) {
    os << "\nactuator " << a.id << " {\n";
    for (const auto& act : a.actions)
      os << "  action " << act.name << "(" << join(act.param_types, ", ") << ");\n";
    os << "}\n";
  }
  return os.str();
}

}  // namespace scc
