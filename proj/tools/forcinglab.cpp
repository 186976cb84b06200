#include <CLI11.hpp>

#include <iostream>

#include "forcinglab/runs.hpp"

using namespace flab;

namespace {

enum Exit { kOk = 0, kCounterexample = 1, kUsage = 2, kUnknown = 3 };

struct Config {
  std::string instance;
  std::optional<std::string> report;
  std::uint64_t seed = 0;
  std::size_t cap = 0;
  bool strict = false;
  GenParams gen{2, 1, 3, 2, MeasureMode::Principal};
  std::string mode = "principal";
};

MeasureMode parse_mode(const std::string& m) {
  if (m == "principal") return MeasureMode::Principal;
  if (m == "general") return MeasureMode::General;
  if (m == "mixed") return MeasureMode::Mixed;
  throw ConfigError("unknown mode " + m);
}

Instance generated(const Config& c) {
  Instance inst;
  GenParams g = c.gen;
  g.mode = parse_mode(c.mode);
  inst.u = generate_instance(c.seed, g);
  const Universe& u = inst.u;
  PCondition root{{canonical_pstar(u, u.top, u.system(u.top).indices)}};
  const SeqId alpha = mc(u, root.blocks[0]);
  inst.p_conditions["root"] = root;
  inst.radin_conditions["root"] = {alpha, radin_image(u, root)};
  inst.trees["full"] = full_tree(u, alpha);
  inst.trees["focus"] = focus_tree(u, alpha);
  return inst;
}

Instance load(const Config& c) { return c.instance.empty() ? generated(c) : read_instance(c.instance); }

RunOptions options(const Config& c) {
  RunOptions o;
  o.seed = c.seed;
  o.cap = c.cap ? c.cap : cap_from_env(o.cap);
  o.strict = c.strict;
  return o;
}

int emit(const Config& c, const Json& report, Verdict v) {
  const std::string text = render(report);
  if (c.report) write_text(*c.report, text);
  else std::cout << text;
  switch (v) {
    case Verdict::Yes:
      return kOk;
    case Verdict::No:
      return kCounterexample;
    default:
      return kUnknown;
  }
}

int emit_text(const Config& c, const std::string& text) {
  if (c.report) write_text(*c.report, text);
  else std::cout << text;
  return kOk;
}

void add_source(CLI::App* app, Config& c) {
  app->add_option("--instance", c.instance, "instance file (generated from the seed when absent)");
  app->add_option("--seed", c.seed, "seed for generation and random choices");
  app->add_option("--cap", c.cap, "size bound for enumerations (FORCINGLAB_CAP otherwise)");
  app->add_option("--report", c.report, "write the report here instead of stdout");
  app->add_flag("--strict", c.strict, "first-coordinate clause is an error");
  app->add_option("--indices", c.gen.indices, "generated: indices of the top system");
  app->add_option("--len", c.gen.length, "generated: sequence length");
  app->add_option("--levels", c.gen.levels, "generated: kappa0 levels");
  app->add_option("--width", c.gen.width, "generated: members of lower systems");
  app->add_option("--mode", c.mode, "generated: principal, general or mixed");
}

const ETree& named_tree(const Instance& inst, const std::string& name) {
  auto it = inst.trees.find(name);
  if (it == inst.trees.end()) throw ConfigError("no tree named " + name);
  return it->second;
}

const NamedRadin& named_radin(const Instance& inst, const std::string& name) {
  auto it = inst.radin_conditions.find(name);
  if (it == inst.radin_conditions.end()) throw ConfigError("no radin condition named " + name);
  return it->second;
}

Json chain_json(const Universe& u, const PChain& c) {
  Json out = Json::array();
  for (const auto& p : c.chain) out.push_back(pcondition_name(u, p));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"forcinglab: finite models of extender-sequence forcing"};
  app.require_subcommand(1);
  Config c;
  std::optional<std::string> positional;

  auto* gen = app.add_subcommand("generate", "write a seeded instance");
  add_source(gen, c);

  auto* validate = app.add_subcommand("validate", "validate every object of an instance");
  add_source(validate, c);
  validate->add_option("file", positional, "instance file");

  std::string owner, kind = "full", name, pname, qname, point, strategy = "random";
  std::size_t block = 0, steps = 5;

  auto* tree = app.add_subcommand("tree", "trees of an instance");
  tree->require_subcommand(1);
  auto* tree_show = tree->add_subcommand("show", "build the full or focus tree of a sequence");
  add_source(tree_show, c);
  tree_show->add_option("--owner", owner)->required();
  tree_show->add_option("--kind", kind)->check(CLI::IsMember({"full", "focus"}));
  auto* tree_validate = tree->add_subcommand("validate", "validate a named tree");
  add_source(tree_validate, c);
  tree_validate->add_option("--name", name)->required();

  auto* radin = app.add_subcommand("radin", "Radin conditions");
  radin->require_subcommand(1);
  auto* radin_validate = radin->add_subcommand("validate", "validate a named condition");
  auto* radin_extend = radin->add_subcommand("extend", "one-point extension");
  auto* radin_order = radin->add_subcommand("order", "compare two conditions");
  for (auto* s : {radin_validate, radin_extend, radin_order}) add_source(s, c);
  radin_validate->add_option("--name", name)->required();
  radin_extend->add_option("--name", name)->required();
  radin_extend->add_option("--block", block);
  radin_extend->add_option("--point", point)->required();
  radin_order->add_option("--p", pname)->required();
  radin_order->add_option("--q", qname)->required();

  auto* pf = app.add_subcommand("pforcing", "conditions of the main forcing");
  pf->require_subcommand(1);
  auto* pf_validate = pf->add_subcommand("validate", "validate a named condition");
  auto* pf_order = pf->add_subcommand("order", "every order between p and q");
  auto* pf_extend = pf->add_subcommand("extend", "one-point extension at a block");
  auto* pf_factor = pf->add_subcommand("factor", "q <=* r <=_R p for q <= p");
  for (auto* s : {pf_validate, pf_order, pf_extend, pf_factor}) add_source(s, c);
  pf_validate->add_option("--name", name)->required();
  pf_extend->add_option("--name", name)->required();
  pf_extend->add_option("--block", block);
  pf_extend->add_option("--point", point)->required();
  for (auto* s : {pf_order, pf_factor}) {
    s->add_option("--p", pname)->required();
    s->add_option("--q", qname)->required();
  }

  auto* generic = app.add_subcommand("generic", "generic chains");
  generic->require_subcommand(1);
  auto* sim = generic->add_subcommand("simulate", "seeded decreasing chain");
  add_source(sim, c);
  sim->add_option("--steps", steps);
  sim->add_option("--strategy", strategy)->check(CLI::IsMember({"random", "greedy"}));

  auto* check = app.add_subcommand("check", "brute-force claim checks");
  check->require_subcommand(1);
  std::optional<std::string> condition;
  std::map<std::string, CLI::App*> checks;
  for (const char* what : {"subforcing", "iso", "dichotomy", "homogeneity", "prikry", "lemmas"}) {
    checks[what] = check->add_subcommand(what);
    add_source(checks[what], c);
    checks[what]->add_option("--condition", condition, "named p-condition to start from");
  }

  auto* exp = app.add_subcommand("export", "DOT export of a named object");
  add_source(exp, c);
  std::optional<std::string> tree_name, p_name, r_name;
  auto* o1 = exp->add_option("--tree", tree_name);
  auto* o2 = exp->add_option("--p", p_name);
  auto* o3 = exp->add_option("--radin", r_name);
  o1->excludes(o2)->excludes(o3);
  o2->excludes(o3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (positional) c.instance = *positional;
    const RunOptions opt = options(c);

    if (gen->parsed()) return emit_text(c, render(instance_to_json(generated(c))));

    const Instance inst = load(c);
    const Universe& u = inst.u;

    if (validate->parsed()) {
      auto r = run_validate(inst, opt);
      return emit(c, r.report, r.verdict);
    }
    if (tree_show->parsed()) {
      const SeqId a = u.require(owner);
      const ETree t = kind == "full" ? full_tree(u, a) : focus_tree(u, a);
      return emit(c, tree_to_json(u, t), Verdict::Yes);
    }
    if (tree_validate->parsed()) {
      const ETree& t = named_tree(inst, name);
      auto v = validate_tree(u, t.owner, t);
      return emit(c, report_to_json(v), v.ok() ? Verdict::Yes : Verdict::No);
    }
    if (radin_validate->parsed()) {
      const auto& r = named_radin(inst, name);
      auto v = validate_radin(u, r.alpha, r.cond);
      return emit(c, report_to_json(v), v.ok() ? Verdict::Yes : Verdict::No);
    }
    if (radin_extend->parsed()) {
      const auto& r = named_radin(inst, name);
      RadinCondition e = radin_extend_one(r.cond, block, u.require(point));
      Json out = radin_to_json(u, e);
      out["name"] = radin_name(u, e);
      return emit(c, out, Verdict::Yes);
    }
    if (radin_order->parsed()) {
      const auto& p = named_radin(inst, pname).cond;
      const auto& q = named_radin(inst, qname).cond;
      const bool star = same_shape(p, q) && radin_leq_star(u, p, q);
      const RadinChain ch = radin_leq(u, p, q, opt.cap * 100);
      Json out = {{"leq_star", star}, {"leq", to_string(ch.verdict)}, {"chain_length", ch.length()}};
      return emit(c, out, ch.verdict == Verdict::Unknown ? Verdict::Unknown : Verdict::Yes);
    }
    if (pf_validate->parsed()) {
      auto v = validate_pcondition(u, u.top, pick_condition(inst, name), {.strict = c.strict, .max_support = std::nullopt});
      return emit(c, report_to_json(v), v.ok() ? Verdict::Yes : Verdict::No);
    }
    if (pf_order->parsed()) {
      const PCondition p = pick_condition(inst, pname), q = pick_condition(inst, qname);
      const bool same = same_systems(p, q);
      const PChain leq = p_leq(u, p, q, opt.cap * 100), leq_r = p_leq_R(u, p, q, opt.cap * 100);
      Json out = {{"leq_star", same && p_leq_star(u, p, q)},
                  {"leq_star_R", same && p_leq_star_R(u, p, q)},
                  {"leq", to_string(leq.verdict)},
                  {"leq_R", to_string(leq_r.verdict)},
                  {"chain", chain_json(u, leq)}};
      const bool unknown = leq.verdict == Verdict::Unknown || leq_r.verdict == Verdict::Unknown;
      return emit(c, out, unknown ? Verdict::Unknown : Verdict::Yes);
    }
    if (pf_extend->parsed()) {
      PCondition e = p_extend_at(u, pick_condition(inst, name), block, u.require(point));
      Json out = pcondition_to_json(u, e);
      out["name"] = pcondition_name(u, e);
      return emit(c, out, Verdict::Yes);
    }
    if (pf_factor->parsed()) {
      const PCondition p = pick_condition(inst, pname), q = pick_condition(inst, qname);
      PCondition r;
      try {
        r = factor(u, q, p, opt.cap * 100);
      } catch (const PreconditionError& e) {
        return emit(c, Json{{"factor", nullptr}, {"note", e.what()}}, Verdict::No);
      }
      Json out = pcondition_to_json(u, r);
      out["name"] = pcondition_name(u, r);
      return emit(c, out, Verdict::Yes);
    }
    if (sim->parsed()) {
      auto r = run_simulate(inst, steps, strategy == "greedy" ? Strategy::Greedy : Strategy::Random, opt);
      return emit(c, r.report, r.verdict);
    }
    for (const auto& [what, sub] : checks) {
      if (!sub->parsed()) continue;
      const PCondition root = pick_condition(inst, condition);
      RunResult r;
      if (what == "subforcing") r = run_subforcing(inst, root, opt);
      else if (what == "iso") r = run_iso(inst, root, opt);
      else if (what == "dichotomy") r = run_dichotomy(inst, root, opt);
      else if (what == "homogeneity") r = run_homogeneity(inst, root, opt);
      else if (what == "prikry") r = run_prikry(inst, root, opt);
      else r = run_lemmas(inst, opt);
      return emit(c, r.report, r.verdict);
    }
    if (exp->parsed()) {
      if (tree_name) return emit_text(c, tree_dot(u, named_tree(inst, *tree_name)));
      if (p_name) return emit_text(c, pcondition_dot(u, pick_condition(inst, *p_name)));
      if (r_name) return emit_text(c, radin_dot(u, named_radin(inst, *r_name).cond));
      throw ConfigError("export needs --tree, --p or --radin");
    }
  } catch (const CapExceeded& e) {
    std::cerr << "unknown: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
