#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scc/checker.hpp"
#include "scc/denotation.hpp"
#include "scc/handlers.hpp"
#include "scc/manifest.hpp"
#include "scc/parser.hpp"
#include "scc/sim.hpp"
#include "scc/verifier.hpp"

namespace scc::cli {

namespace {

// Problems with the invocation itself rather than with what it checks.
struct UsageError : Error {
  using Error::Error;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool machine = false;
};

SourceText load_text(const std::string& path) {
  try {
    return read_source(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (!f) throw UsageError("cannot write '" + path + "'");
}

/// Prints parse diagnostics; empty when the file does not parse.
std::optional<Architecture> load(const Context& ctx, const std::string& path) {
  ParseResult r = parse(load_text(path));
  for (const auto& d : r.diagnostics) ctx.err << render(d, path) << "\n";
  return r.architecture;
}

/// Runs the static checks and reports failures; true when they pass.
bool require_checked(const Context& ctx, const Architecture& arch) {
  CheckReport report = check_all(arch);
  if (report.passed()) return true;
  ctx.err << arch.name << " fails its checks:\n" << render_text(report);
  return false;
}

std::string summary(const Architecture& arch, const CheckReport& r) {
  auto has = [&](std::initializer_list<std::string_view> rules) {
    for (const auto& f : r.findings)
      if (f.severity == Severity::Error)
        for (auto rule : rules)
          if (f.rule == rule) return true;
    return false;
  };
  std::string out = arch.name + ": ";
  out += has({rules::kRequirementNeedsPullSelf, rules::kActivationNeedsEmission, rules::kSubscriptionNeedsEmission})
             ? "inconsistent"
             : "consistent";
  out += has({rules::kInterferingContracts}) ? ", nondeterministic" : ", deterministic";
  out += has({rules::kSubscriptionTypeMismatch, rules::kPullArityMismatch, rules::kPullArgumentType})
             ? ", ill-typed"
             : ", well-typed";
  return out;
}

// ---------------------------------------------------------------------------

int cmd_check(const Context& ctx, const std::string& path) {
  auto arch = load(ctx, path);
  if (!arch) {
    if (ctx.machine) ctx.out << "verdict\tfail\n";
    return kExitFail;
  }
  CheckReport r = check_all(*arch);
  if (ctx.machine) {
    ctx.out << render_machine(r);
  } else {
    ctx.out << render_text(r);
    ctx.out << summary(*arch, r) << "\n";
  }
  return r.passed() ? kExitOk : kExitFail;
}

int cmd_denote(const Context& ctx, const std::string& path, const std::string& only, bool ascii) {
  auto arch = load(ctx, path);
  if (!arch) return kExitFail;
  Notation n = ascii ? Notation::Ascii : Notation::Unicode;
  bool found = only.empty();
  for (const auto& op : arch->contexts) {
    if (!only.empty() && op.id != only) continue;
    found = true;
    for (const auto& d : denote(op, *arch)) {
      if (ctx.machine)
        ctx.out << "denotation\t" << op.id << '\t' << d.contract << '\t' << d.name << '\t'
                << render(d, Notation::Ascii) << '\n';
      else
        ctx.out << op.id << '.' << d.name << " : " << render(d, n) << '\n';
    }
    if (!ctx.machine && op.contract.basics.size() > 1)
      ctx.out << op.id << " : " << render(denotation_type(op, *arch), n) << '\n';
  }
  if (!found) throw UsageError("'" + only + "' is not a context operator");
  return kExitOk;
}

struct GenerateArgs {
  std::string path;
  std::string output;
  std::string stubs;
  std::string previous;
  std::optional<std::size_t> pull_quota;
  std::optional<std::size_t> publish_quota;
};

int cmd_generate(const Context& ctx, const GenerateArgs& a) {
  auto arch = load(ctx, a.path);
  if (!arch) return kExitFail;
  GuardConfig guards;
  if (a.pull_quota) guards.pull_max = a.pull_quota;
  if (a.publish_quota) guards.publish_max = a.publish_quota;
  FrameworkManifest m;
  try {
    m = generate_manifest(*arch, guards);
  } catch (const GenerationError& e) {
    ctx.err << e.what() << "\n" << render_text(e.report());
    return kExitFail;
  }
  std::string json = serialize(m);
  if (a.output.empty())
    ctx.out << json;
  else
    write_file(a.output, json);
  if (!a.stubs.empty()) write_file(a.stubs, render_stubs(m));
  if (!a.previous.empty()) {
    FrameworkManifest before;
    try {
      before = deserialize(load_text(a.previous).content);
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      throw UsageError(a.previous + ": " + e.what());
    }
    auto changes = diff_manifests(before, m);
    for (const auto& c : changes) {
      if (ctx.machine)
        ctx.out << "change\t" << to_string(c.kind) << '\t' << c.path << '\t' << c.detail << '\n';
      else
        ctx.out << to_string(c.kind) << ' ' << c.path << ": " << c.detail << '\n';
    }
    if (!ctx.machine && changes.empty()) ctx.out << "no obligation changed\n";
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string path;
  std::string scenario;
  std::string handlers = "webserver";
  std::uint64_t seed = 0;
  std::string sync = "queue";
  std::string schedule = "fifo";
};

int cmd_simulate(const Context& ctx, const SimulateArgs& a) {
  auto arch = load(ctx, a.path);
  if (!arch) return kExitFail;
  if (!require_checked(ctx, *arch)) return kExitFail;
  Scenario sc;
  try {
    sc = parse_scenario(load_text(a.scenario).content, *arch);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(a.scenario + ": " + e.what());
  }
  SimOptions opts;
  opts.seed = a.seed;
  opts.sync = a.sync == "latest" ? SyncPolicy::Latest : SyncPolicy::Queue;
  opts.schedule = a.schedule == "random" ? Schedule::Random : Schedule::Fifo;
  Simulator sim(*arch, opts);
  PackOptions pack;
  pack.seed = a.seed;
  install_pack(sim, a.handlers, pack);
  SimTrace t = sim.run(sc);
  ctx.out << (ctx.machine ? render_jsonl(t) : render_text(t));
  return t.failed ? kExitFail : kExitOk;
}

int cmd_reach(const Context& ctx, const std::string& path, const std::string& from, const std::string& to) {
  auto arch = load(ctx, path);
  if (!arch) return kExitFail;
  std::optional<std::vector<std::string>> w;
  try {
    w = reach_witness(from, parse_ref(to), *arch);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (ctx.machine) {
    ctx.out << "reachable\t" << (w ? "yes" : "no");
    if (w)
      for (const auto& s : *w) ctx.out << '\t' << s;
    ctx.out << '\n';
  } else if (w) {
    ctx.out << to << " is reachable from " << from << ": ";
    for (std::size_t i = 0; i < w->size(); ++i) ctx.out << (i ? " -> " : "") << (*w)[i];
    ctx.out << '\n';
  } else {
    ctx.out << to << " is not reachable from " << from << '\n';
  }
  return w ? kExitOk : kExitFail;
}

struct VerifyArgs {
  std::string path;
  std::vector<std::string> invariants;
  std::string invariants_file;
  std::size_t bound = 1'000'000;
  std::size_t capacity = 1;
  bool parallel = false;
};

int cmd_verify(const Context& ctx, const VerifyArgs& a) {
  auto arch = load(ctx, a.path);
  if (!arch) return kExitFail;
  if (!require_checked(ctx, *arch)) return kExitFail;
  std::vector<Invariant> invs;
  try {
    for (const auto& s : a.invariants) invs.push_back(parse_invariant(s, *arch));
    if (!a.invariants_file.empty()) {
      auto more = parse_invariants(load_text(a.invariants_file).content, *arch);
      invs.insert(invs.end(), more.begin(), more.end());
    }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (invs.empty()) throw UsageError("no invariant given (use --invariant or --invariants)");
  CheckOptions opts;
  opts.state_bound = a.bound;
  opts.channel_capacity = a.capacity;
  opts.mode = a.parallel ? ExecMode::Parallel : ExecMode::Serial;
  FlowModel model = build_flow_model(*arch, a.capacity);
  bool all = true;
  for (std::size_t i = 0; i < invs.size(); ++i) {
    Verdict v = check_invariant(model, invs[i], opts);
    all = all && v.conclusive();
    if (i && !ctx.machine) ctx.out << '\n';
    ctx.out << (ctx.machine ? render_verdict_machine(invs[i], v) : render_verdict(invs[i], v));
  }
  return all ? kExitOk : kExitFail;
}

int cmd_promela(const Context& ctx, const std::string& path, const std::string& output, std::size_t capacity) {
  auto arch = load(ctx, path);
  if (!arch) return kExitFail;
  if (!require_checked(ctx, *arch)) return kExitFail;
  std::string text = emit_promela(*arch, capacity);
  if (output.empty())
    ctx.out << text;
  else
    write_file(output, text);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sense/Compute/Control architecture toolkit", "scc"};
  app.require_subcommand(1, 1);
  std::string format = "text";
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();

  std::string path;
  auto adl = [&path](CLI::App* sub) { sub->add_option("adl", path, "Architecture description")->required(); };

  auto* check = app.add_subcommand("check", "Check consistency, determinacy and typing");
  adl(check);

  auto* denote_cmd = app.add_subcommand("denote", "Print the function type of each contract");
  adl(denote_cmd);
  std::string only;
  bool ascii = false;
  denote_cmd->add_option("--operator", only, "Only this context operator");
  denote_cmd->add_flag("--ascii", ascii, "Use * and -> instead of Unicode symbols");

  auto* generate = app.add_subcommand("generate", "Generate the framework manifest and stubs");
  adl(generate);
  GenerateArgs gen;
  generate->add_option("-o,--output", gen.output, "Manifest file (default: standard output)");
  generate->add_option("--stubs", gen.stubs, "Write implementation stubs to this file");
  generate->add_option("--previous", gen.previous, "Earlier manifest to diff against");
  std::size_t pull_quota = 0, publish_quota = 0;
  auto* pq = generate->add_option("--pull-quota", pull_quota, "Calls allowed per pull callback and activation");
  auto* bq = generate->add_option("--publish-quota", publish_quota, "Calls allowed per publish callback and activation");

  auto* simulate = app.add_subcommand("simulate", "Run a scenario through the architecture");
  adl(simulate);
  SimulateArgs sim;
  simulate->add_option("scenario", sim.scenario, "Scenario file")->required();
  simulate->add_option("--handlers", sim.handlers, "Handler pack")
      ->check(CLI::IsMember(handler_pack_names()))
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Seed for random scheduling and decisions")->capture_default_str();
  simulate->add_option("--sync-policy", sim.sync, "Activation queue policy")
      ->check(CLI::IsMember({"queue", "latest"}))
      ->capture_default_str();
  simulate->add_option("--schedule", sim.schedule, "Scheduling policy")
      ->check(CLI::IsMember({"fifo", "random"}))
      ->capture_default_str();

  auto* reach = app.add_subcommand("reach", "Tell whether data of <to> can reach <from>");
  adl(reach);
  std::string from, to;
  reach->add_option("from", from, "Component receiving the data")->required();
  reach->add_option("to", to, "Component or Sensor.source producing it")->required();

  auto* verify = app.add_subcommand("verify", "Check interaction invariants on the flow model");
  adl(verify);
  VerifyArgs ver;
  verify->add_option("--invariant", ver.invariants, "Invariant, e.g. 'never activated(X)'");
  verify->add_option("--invariants", ver.invariants_file, "File with one invariant per line");
  verify->add_option("--bound", ver.bound, "Maximum number of states")->capture_default_str();
  verify->add_option("--channel-capacity", ver.capacity, "Channel capacity")
      ->check(CLI::Range(1, 255))
      ->capture_default_str();
  verify->add_flag("--parallel", ver.parallel, "Expand each search level in parallel");

  auto* promela = app.add_subcommand("emit-promela", "Print the Promela model");
  adl(promela);
  std::string pml_out;
  std::size_t pml_capacity = 1;
  promela->add_option("-o,--output", pml_out, "Output file (default: standard output)");
  promela->add_option("--channel-capacity", pml_capacity, "Channel capacity")
      ->check(CLI::Range(1, 255))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "scc: " << e.what() << "\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  Context ctx{out, err, format == "machine"};
  try {
    if (*check) return cmd_check(ctx, path);
    if (*denote_cmd) return cmd_denote(ctx, path, only, ascii);
    if (*generate) {
      gen.path = path;
      if (pq->count()) gen.pull_quota = pull_quota;
      if (bq->count()) gen.publish_quota = publish_quota;
      return cmd_generate(ctx, gen);
    }
    if (*simulate) {
      sim.path = path;
      return cmd_simulate(ctx, sim);
    }
    if (*reach) return cmd_reach(ctx, path, from, to);
    if (*verify) {
      ver.path = path;
      return cmd_verify(ctx, ver);
    }
    if (*promela) return cmd_promela(ctx, path, pml_out, pml_capacity);
  } catch (const UsageError& e) {
    err << "scc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimError& e) {
    err << "scc: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    err << "scc: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace scc::cli
