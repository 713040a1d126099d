#include "scc/denotation.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace scc {

TypeTerm TypeTerm::value(std::string n) {
  TypeTerm t;
  t.kind = Kind::Value;
  t.name = std::move(n);
  return t;
}

TypeTerm TypeTerm::unit() { return TypeTerm{}; }

TypeTerm TypeTerm::function(std::vector<TypeTerm> params, TypeTerm result) {
  TypeTerm t;
  t.kind = Kind::Function;
  t.items = std::move(params);
  t.ret.push_back(std::move(result));
  return t;
}

TypeTerm TypeTerm::tuple(std::vector<TypeTerm> members) {
  TypeTerm t;
  t.kind = Kind::Tuple;
  t.items = std::move(members);
  return t;
}

bool operator==(const TypeTerm& a, const TypeTerm& b) {
  return a.kind == b.kind && a.name == b.name && a.items == b.items && a.ret == b.ret;
}

namespace {

std::string_view times(Notation n) { return n == Notation::Unicode ? " × " : " * "; }
std::string_view arrow(Notation n) { return n == Notation::Unicode ? " → " : " -> "; }

std::string render_operand(const TypeTerm& t, Notation n) {
  std::string s = render(t, n);
  if (t.kind == TypeTerm::Kind::Function || (t.kind == TypeTerm::Kind::Tuple && t.items.size() > 1))
    return "(" + s + ")";
  return s;
}

std::string render_arrow(const std::vector<std::string>& params, const TypeTerm& result, Notation n) {
  std::string out;
  if (params.empty()) out = "()";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += times(n);
    out += params[i];
  }
  out += arrow(n);
  out += render_operand(result, n);
  return out;
}

}  // namespace

std::string render(const TypeTerm& t, Notation n) {
  switch (t.kind) {
    case TypeTerm::Kind::Value: return t.name;
    case TypeTerm::Kind::Unit: return "()";
    case TypeTerm::Kind::Function: {
      std::vector<std::string> ps;
      for (const auto& p : t.items) ps.push_back(render_operand(p, n));
      return render_arrow(ps, t.result(), n);
    }
    case TypeTerm::Kind::Tuple: {
      std::string out;
      for (std::size_t i = 0; i < t.items.size(); ++i) {
        if (i) out += times(n);
        out += render_operand(t.items[i], n);
      }
      return out;
    }
  }
  return "?";
}

std::string_view to_string(ParamRole r) {
  switch (r) {
    case ParamRole::ActivationValue: return "activation-value";
    case ParamRole::PullArg: return "pull-arg";
    case ParamRole::PullCallback: return "pull-callback";
    case ParamRole::PublishCallback: return "publish-callback";
  }
  return "?";
}

TypeTerm SignatureDescriptor::function_type() const {
  std::vector<TypeTerm> ps;
  for (const auto& p : params) ps.push_back(p.type);
  return TypeTerm::function(std::move(ps), result);
}

bool SignatureDescriptor::has_publish_callback() const {
  return std::any_of(params.begin(), params.end(),
                     [](const Param& p) { return p.role == ParamRole::PublishCallback; });
}

std::string render(const SignatureDescriptor& d, Notation n) {
  std::vector<std::string> ps;
  for (const auto& p : d.params) {
    if (p.role == ParamRole::PublishCallback)
      ps.push_back("publish(" + render(p.type.items.at(0), n) + ")");
    else
      ps.push_back(render_operand(p.type, n));
  }
  return render_arrow(ps, d.result, n);
}

std::string lower_camel(std::string_view s) {
  std::string out(s);
  std::size_t run = 0;
  while (run < out.size() && std::isupper(static_cast<unsigned char>(out[run]))) ++run;
  // "HTTPServer" keeps the 'S' that starts the next word.
  if (run > 1 && run < out.size() && std::islower(static_cast<unsigned char>(out[run]))) --run;
  if (run == 0) run = 1;
  for (std::size_t i = 0; i < run && i < out.size(); ++i)
    out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
  for (std::size_t i = 1; i < out.size(); ++i)
    if (std::isdigit(static_cast<unsigned char>(out[i - 1])))
      out[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[i])));
  return out;
}

std::string upper_camel(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string typeof_name(const Ref& n, const Architecture& arch) {
  if (n.is_source()) {
    if (const SourceDecl* s = arch.source(n)) return s->value_type;
  } else if (const ContextOperator* c = arch.context(n.component)) {
    return c->value_type;
  }
  throw Error("'" + n.str() + "' is neither a sensor source nor a context operator");
}

std::string typeof_term(const Disjunction& term, const Architecture& arch) {
  if (term.empty()) throw Error("empty activation term");
  TypeLattice lattice(arch.types);
  std::string t = typeof_name(term.front(), arch);
  for (std::size_t i = 1; i < term.size(); ++i) t = lattice.lub(t, typeof_name(term[i], arch));
  return t;
}

std::vector<std::string> pull_args(const Ref& n, const Architecture& arch) {
  if (n.is_source()) {
    if (const SourceDecl* s = arch.source(n)) return s->pull_params;
  } else if (const ContextOperator* c = arch.context(n.component)) {
    return c->args();
  }
  throw Error("'" + n.str() + "' is neither a sensor source nor a context operator");
}

TypeTerm access_typeof(const Ref& n, const Architecture& arch) {
  if (!n.is_source()) {
    const ContextOperator* c = arch.context(n.component);
    if (c && !c->has_pull_contract())
      throw Error("'" + n.str() + "' cannot be pulled: it has no 'on pull' contract");
  }
  std::vector<TypeTerm> params;
  for (const auto& a : pull_args(n, arch)) params.push_back(TypeTerm::value(a));
  return TypeTerm::function(std::move(params), TypeTerm::value(typeof_name(n, arch)));
}

namespace {

std::string term_word(const Ref& r) { return r.is_source() ? upper_camel(r.source) : r.component; }

class ParamNamer {
 public:
  std::string take(std::string base) {
    std::string n = base;
    for (int k = 2; !used_.insert(n).second; ++k) n = base + std::to_string(k);
    return n;
  }

 private:
  std::set<std::string> used_;
};

}  // namespace

std::string method_name(const BasicContract& b) {
  if (b.is_pull()) return "get";
  const auto& terms = b.push()->terms;
  if (std::any_of(terms.begin(), terms.end(), [](const Disjunction& d) { return d.size() > 1; }))
    return "onNewDisjunction";
  std::string out = "onNew";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += "And";
    out += term_word(terms[i].front());
  }
  return out;
}

SignatureDescriptor denote_basic(const ContextOperator& owner, std::size_t index,
                                 const Architecture& arch) {
  const BasicContract& b = owner.contract.basics.at(index);
  SignatureDescriptor d;
  d.owner = owner.id;
  d.contract = index;
  d.name = method_name(b);
  ParamNamer namer;

  if (b.is_pull()) {
    for (const auto& a : owner.args())
      d.params.push_back({ParamRole::PullArg, namer.take("new" + a), TypeTerm::value(a), std::nullopt});
  } else {
    for (const auto& term : b.push()->terms) {
      std::string t = typeof_term(term, arch);
      std::string base = (term.size() == 1 && term.front().is_source())
                             ? "new" + upper_camel(term.front().source)
                             : "new" + t;
      d.params.push_back({ParamRole::ActivationValue, namer.take(base), TypeTerm::value(t), std::nullopt});
    }
  }
  for (const auto& site : b.requirements) {
    std::string base = lower_camel(site.target.is_source() ? site.target.source : site.target.component);
    d.params.push_back(
        {ParamRole::PullCallback, namer.take(base), access_typeof(site.target, arch), site.target});
  }
  TypeTerm own = TypeTerm::value(owner.value_type);
  if (b.emission == Emission::Maybe)
    d.params.push_back({ParamRole::PublishCallback, namer.take("publish"),
                        TypeTerm::function({own}, TypeTerm::unit()), std::nullopt});
  d.result = (b.is_pull() || b.emission == Emission::Always) ? own : TypeTerm::unit();
  return d;
}

std::vector<SignatureDescriptor> denote(const ContextOperator& owner, const Architecture& arch) {
  std::vector<SignatureDescriptor> out;
  ParamNamer methods;
  for (std::size_t i = 0; i < owner.contract.basics.size(); ++i) {
    out.push_back(denote_basic(owner, i, arch));
    out.back().name = methods.take(out.back().name);
  }
  return out;
}

TypeTerm denotation_type(const ContextOperator& owner, const Architecture& arch) {
  auto ds = denote(owner, arch);
  if (ds.size() == 1) return ds.front().function_type();
  std::vector<TypeTerm> fs;
  for (const auto& d : ds) fs.push_back(d.function_type());
  return TypeTerm::tuple(std::move(fs));
}

}  // namespace scc
