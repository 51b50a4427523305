// pwk: command-line front end for the width solvers, reduction rules,
// kernelizers and the cutwidth-to-weighted-treewidth composition.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "pwk/pwk.hpp"

namespace {

using namespace pwk;

enum ExitCode : int { kOk = 0, kNo = 1, kUsage = 2, kCap = 3, kInternal = 4 };

struct GlobalOptions {
  bool no_timings = false;
  bool json = false;
};

struct Report {
  std::string command;
  Json inputs = Json::array();
  Json outcome = Json::object();
  Json stats = Json::object();
  std::optional<std::string> trace;
  std::string text;
  int exit_code = kOk;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string load(Report& rep, const std::string& path) {
  std::string text = read_file(path);
  rep.inputs.push_back(Json{{"path", path}, {"digest", digest(text)}});
  return text;
}

InstanceFile load_instance(Report& rep, const std::string& path) {
  std::string text = load(rep, path);
  try {
    return parse_instance(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

void emit(const Report& rep, const GlobalOptions& opt, double millis) {
  if (opt.json) {
    Json j;
    j["command"] = rep.command;
    j["inputs"] = rep.inputs;
    j["outcome"] = rep.outcome;
    j["stats"] = rep.stats;
    j["timings"] = opt.no_timings ? Json(nullptr) : Json{{"total_ms", millis}};
    j["trace"] = rep.trace ? Json(*rep.trace) : Json(nullptr);
    j["exit_code"] = rep.exit_code;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << rep.text;
    if (!opt.no_timings) std::cout << "time_ms " << millis << '\n';
  }
}

std::string labels_of(const Graph& g, const VertexList& vs) {
  std::string out;
  for (Vertex v : vs) out += (out.empty() ? "" : " ") + g.label(v);
  return out;
}

// solve ---------------------------------------------------------------------

struct SolveArgs {
  std::string file;
  std::string measure = "pathwidth";
  int cap = 0;
  std::string certificate_out;
};

Report run_solve(const SolveArgs& a) {
  Report rep;
  rep.command = "solve";
  InstanceFile f = load_instance(rep, a.file);
  const Graph& g = f.graph;
  auto cap_or = [&](int fallback) { return a.cap > 0 ? a.cap : fallback; };
  std::string cert;
  Json width;
  if (a.measure == "pathwidth") {
    auto r = pathwidth_exact(g, cap_or(kDefaultPathwidthCap));
    width = r.width;
    cert = serialize_path_decomposition(g, r.decomposition);
  } else if (a.measure == "treewidth") {
    auto r = treewidth_exact(g, cap_or(kDefaultTreewidthCap));
    width = r.width;
    cert = serialize_tree_decomposition(g, tree_decomposition_from_ordering(g, r.ordering));
  } else if (a.measure == "cutwidth") {
    auto r = cutwidth_exact(g, cap_or(kDefaultCutwidthCap));
    width = r.width;
    cert = serialize_order(g, r.layout.order);
  } else {
    WeightedGraph wg = f.weighted();
    auto part = find_cobipartite_partition(g);
    if (part) rep.stats["cobipartite_side_a"] = part->a.size();
    auto r = weighted_treewidth_exact(wg, part, cap_or(kDefaultTreewidthCap));
    width = r.width;
    cert = serialize_order(g, r.ordering.order);
  }
  rep.outcome = Json{{"measure", a.measure}, {"width", width}, {"certificate", cert}};
  rep.stats["vertices"] = g.vertex_count();
  rep.stats["edges"] = g.edge_count();
  rep.text = "measure " + a.measure + "\nwidth " + width.dump() + "\n" + cert;
  if (!a.certificate_out.empty()) write_file(a.certificate_out, cert);
  return rep;
}

// validate-decomposition ----------------------------------------------------

Report run_validate(const std::string& instance_path, const std::string& decomposition_path) {
  Report rep;
  rep.command = "validate-decomposition";
  InstanceFile f = load_instance(rep, instance_path);
  const Graph& g = f.graph;
  DecompositionFile d = parse_decomposition(load(rep, decomposition_path), g);
  std::ostringstream text;
  bool ok = true;
  if (d.path) {
    Validation v = validate_path_decomposition(g, *d.path);
    ok = ok && v.ok;
    rep.outcome["path"] = Json{{"valid", v.ok}, {"width", decomposition_width(*d.path)}, {"violation", v.violation}};
    text << "path " << (v.ok ? "valid" : "invalid") << " width " << decomposition_width(*d.path) << '\n';
    if (!v.ok) text << "violation " << v.violation << '\n';
  }
  if (d.tree) {
    Validation v = validate_tree_decomposition(g, *d.tree);
    ok = ok && v.ok;
    Json t{{"valid", v.ok}, {"width", decomposition_width(*d.tree)}, {"violation", v.violation}};
    text << "tree " << (v.ok ? "valid" : "invalid") << " width " << decomposition_width(*d.tree) << '\n';
    if (f.weights) {
      t["weighted_width"] = weighted_width(f.weighted(), *d.tree);
      text << "weighted_width " << weighted_width(f.weighted(), *d.tree) << '\n';
    }
    if (!v.ok) text << "violation " << v.violation << '\n';
    rep.outcome["tree"] = t;
  }
  if (d.order) {
    const bool perm = is_permutation_of_vertices(g, *d.order);
    ok = ok && perm;
    Json o{{"valid", perm}};
    text << "order " << (perm ? "valid" : "invalid") << '\n';
    if (perm) {
      EliminationOrdering pi{*d.order};
      o["elimination_width"] = elimination_width(g, pi);
      o["vertex_separation"] = vertex_separation(g, *d.order);
      o["cutwidth"] = layout_cutwidth(g, LinearLayout{*d.order});
      o["elimination_cost"] = elimination_cost(f.weighted(), pi);
      text << "elimination_width " << o["elimination_width"].dump() << '\n'
           << "vertex_separation " << o["vertex_separation"].dump() << '\n'
           << "cutwidth " << o["cutwidth"].dump() << '\n'
           << "elimination_cost " << o["elimination_cost"].dump() << '\n';
    } else {
      text << "violation order is not a permutation of the vertices\n";
    }
    rep.outcome["order"] = o;
  }
  if (!d.path && !d.tree && !d.order) throw ParseError(0, decomposition_path + ": no decomposition found");
  rep.outcome["valid"] = ok;
  rep.text = text.str();
  rep.exit_code = ok ? kOk : kNo;
  return rep;
}

// reduce ----------------------------------------------------------------------

struct ReduceArgs {
  std::string file;
  std::string rules = "all";
  std::string rule7_filter = "none";
  std::string trace_out;
  std::string out;
};

int verdict_exit(Verdict v) { return v == Verdict::DecidedNo ? kNo : kOk; }

Report run_reduce(const ReduceArgs& a) {
  Report rep;
  rep.command = "reduce";
  InstanceFile f = load_instance(rep, a.file);
  ReduceOptions opt;
  if (a.rule7_filter == "star") opt.rule7_filter = star_rule7_filter();
  Instance input = f.instance();
  ReductionOutcome r = exhaustive_reduce(input, RuleSet::parse(a.rules), opt);
  const std::string reduced = serialize_instance(r.instance);
  rep.outcome = to_json(r);
  rep.stats = Json{{"input_vertices", input.graph().vertex_count()},
                   {"output_vertices", r.instance.graph().vertex_count()},
                   {"applications", r.trace.size()},
                   {"application_budget", application_budget(input.graph().vertex_count(), input.target(),
                                                             opt.bound_constant)}};
  if (!a.trace_out.empty()) {
    write_file(a.trace_out, trace_jsonl(r.trace));
    rep.trace = a.trace_out;
  }
  if (!a.out.empty()) write_file(a.out, reduced);
  std::ostringstream text;
  text << "verdict " << verdict_name(r.verdict) << "\napplications " << r.trace.size() << '\n';
  for (const auto& app : r.trace) text << "apply " << to_json(app).dump() << '\n';
  text << reduced;
  rep.text = text.str();
  rep.exit_code = verdict_exit(r.verdict);
  return rep;
}

// kernelize -------------------------------------------------------------------

struct KernelizeArgs {
  std::string file;
  std::string family;
  bool no_vc_rule5 = false;
  std::string out;
};

std::string kernel_text(const KernelResult& r) {
  std::ostringstream text;
  text << "family " << r.family.name() << "\nverdict " << verdict_name(r.outcome.verdict) << '\n';
  text << "input vertices " << r.input_vertices << " modulator " << r.input_modulator_size << '\n';
  text << "applications " << r.applications << " budget " << r.application_budget << '\n';
  for (const auto& c : r.audits)
    text << "audit " << c.name << ' ' << c.value << " <= " << c.bound << ' ' << (c.ok ? "ok" : "FAIL") << '\n';
  text << "bound " << r.bound_formula << ' ' << (r.bound_ok ? "ok" : "FAIL") << '\n';
  text << serialize_instance(r.outcome.instance);
  return text.str();
}

Report run_kernelize(const KernelizeArgs& a) {
  Report rep;
  rep.command = "kernelize";
  InstanceFile f = load_instance(rep, a.file);
  std::optional<Family> family = f.family;
  if (!a.family.empty()) family = Family::parse(a.family);
  if (!family) throw ParseError(0, "no family given: use --family or an 'f' line");
  KernelOptions opt;
  opt.vertex_cover_rule5 = !a.no_vc_rule5;
  KernelResult r = kernelize(f.instance(), *family, opt);
  rep.outcome = to_json(r);
  rep.stats = to_json(r.stats);
  rep.text = kernel_text(r);
  if (!a.out.empty()) write_file(a.out, serialize_instance(to_file(r.outcome.instance, family)));
  rep.exit_code = !r.bound_ok ? kInternal : verdict_exit(r.outcome.verdict);
  return rep;
}

// compose / verify-composition ------------------------------------------------

struct ComposeArgs {
  std::vector<std::string> files;
  std::string gadget_out;
  std::string modulator_out;
  int cutwidth_cap = kDefaultCutwidthCap;
  int cobipartite_cap = kDefaultCobipartiteCap;
};

BatchPreparation load_batch(Report& rep, const ComposeArgs& a) {
  std::vector<Cutwidth3Instance> batch;
  for (const auto& path : a.files) batch.push_back(load_instance(rep, path).cutwidth3());
  return prepare_batch(std::move(batch), a.cutwidth_cap);
}

void report_solved(Report& rep, const SolvedBatch& s) {
  rep.outcome = Json{{"solved_directly", true}, {"answer", s.answer}, {"cutwidths", s.cutwidths}, {"reason", s.reason}};
  std::ostringstream text;
  text << "solved " << (s.answer ? "yes" : "no") << "\nreason " << s.reason << '\n';
  if (!s.cutwidths.empty()) {
    text << "cutwidths";
    for (int c : s.cutwidths) text << ' ' << c;
    text << '\n';
  }
  rep.text = text.str();
  rep.exit_code = s.answer ? kOk : kNo;
}

Report run_compose(const ComposeArgs& a) {
  Report rep;
  rep.command = "compose";
  auto prep = load_batch(rep, a);
  if (auto* s = std::get_if<SolvedBatch>(&prep)) {
    report_solved(rep, *s);
    return rep;
  }
  const auto& batch = std::get<PreparedBatch>(prep);
  ComposedInstance ci = compose(batch);
  const std::string dump = serialize_composed(ci);
  rep.outcome = Json{{"solved_directly", false}, {"threshold", ci.threshold}, {"t", ci.t}, {"n", ci.n},
                     {"k", ci.k}, {"log_t", ci.log_t}};
  rep.stats = Json{{"vertices", ci.gadget.graph().vertex_count()},
                   {"edges", ci.gadget.graph().edge_count()},
                   {"side_a", ci.partition.a.size()},
                   {"side_b", ci.partition.b.size()},
                   {"batch_size", batch.original_count}};
  if (!a.gadget_out.empty()) write_file(a.gadget_out, serialize_instance(to_file(ci.gadget, 0)));
  if (!a.modulator_out.empty()) write_file(a.modulator_out, serialize_instance(to_modulator_instance(ci)));
  rep.text = dump + "k' " + std::to_string(ci.threshold) + '\n';
  return rep;
}

Report run_verify_composition(const ComposeArgs& a) {
  Report rep;
  rep.command = "verify-composition";
  auto prep = load_batch(rep, a);
  if (auto* s = std::get_if<SolvedBatch>(&prep)) {
    report_solved(rep, *s);
    return rep;
  }
  const auto& batch = std::get<PreparedBatch>(prep);
  ComposedInstance ci = compose(batch);
  CompositionVerdict v = verify_composition(ci, batch, a.cobipartite_cap, a.cutwidth_cap);
  rep.outcome = to_json(v, ci.gadget.graph());
  rep.stats = Json{{"vertices", ci.gadget.graph().vertex_count()}, {"side_a", ci.partition.a.size()}};
  std::ostringstream text;
  text << "threshold " << v.threshold << "\nweighted_treewidth " << v.weighted_treewidth << '\n';
  text << "gadget " << (v.gadget_yes ? "yes" : "no") << "\ncutwidths";
  for (int c : v.cutwidths) text << ' ' << c;
  text << "\nbatch " << (v.any_yes ? "yes" : "no") << "\nequivalent " << (v.equivalent ? "true" : "false") << '\n';
  if (v.yes_instance) text << "yes_instance " << *v.yes_instance << " cost " << *v.yes_instance_cost << '\n';
  text << "gadget_ordering " << labels_of(ci.gadget.graph(), v.gadget_ordering.order) << '\n';
  rep.text = text.str();
  if (!v.equivalent) {
    std::cerr << "error: gadget answer differs from the batch answer\n";
    rep.exit_code = kInternal;
  } else {
    rep.exit_code = v.gadget_yes ? kOk : kNo;
  }
  return rep;
}

// audit -----------------------------------------------------------------------

struct AuditArgs {
  std::uint64_t seed = 1;
  int count = 100;
  std::string family = "stars";
  int max_modulator = 4;
  int max_vertices = 12;
};

// Random instance whose G - S lies in `family`.
Instance random_instance(std::mt19937_64& rng, const Family& family, int l, int max_vertices) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  const int outside = pick(1, std::max(1, max_vertices - l));
  std::vector<Edge> edges;
  int placed = 0;
  while (placed < outside) {
    int size = 1;
    if (family.kind == Family::Kind::StarForest) size = pick(1, 4);
    if (family.kind == Family::Kind::BoundedComponents) size = pick(1, family.max_component);
    size = std::min(size, outside - placed);
    const int base = l + placed;
    for (int v = 1; v < size; ++v) {
      const int parent = family.kind == Family::Kind::StarForest ? 0 : pick(0, v - 1);
      edges.emplace_back(base + parent, base + v);
      if (family.kind == Family::Kind::BoundedComponents)
        for (int u = 0; u < v; ++u)
          if (u != parent && coin(0.3)) edges.emplace_back(base + u, base + v);
    }
    placed += size;
  }
  const int n = l + outside;
  for (int s = 0; s < l; ++s)
    for (int v = s + 1; v < n; ++v)
      if (coin(v < l ? 0.5 : 0.4)) edges.emplace_back(s, v);
  VertexList mod(static_cast<std::size_t>(l));
  std::iota(mod.begin(), mod.end(), 0);
  int max_k = l;
  if (family.kind == Family::Kind::BoundedComponents) max_k = std::max(0, family.max_component + l - 1);
  return Instance(Graph::from_edges(n, edges), mod, pick(0, max_k));
}

Report run_audit(const AuditArgs& a) {
  Report rep;
  rep.command = "audit";
  const Family family = Family::parse(a.family);
  std::mt19937_64 rng(a.seed);
  int failures = 0, oracle_checked = 0;
  std::ostringstream text;
  std::map<std::string, int> verdicts;
  for (int run = 0; run < a.count; ++run) {
    const int l = std::uniform_int_distribution<int>(0, a.max_modulator)(rng);
    Instance inst = random_instance(rng, family, l, a.max_vertices);
    KernelResult r = kernelize(inst, family);
    ++verdicts[std::string(verdict_name(r.outcome.verdict))];
    std::string problem;
    if (!r.bound_ok) {
      for (const auto& c : r.audits)
        if (!c.ok) problem += c.name + " " + std::to_string(c.value) + " > " + std::to_string(c.bound) + "; ";
      if (problem.empty()) problem = "size bound exceeded";
    }
    if (r.applications > r.application_budget) problem += "application budget exceeded; ";
    if (r.outcome.verdict == Verdict::Reduced && !recognize(r.outcome.instance, family)) problem += "family lost; ";
    if (inst.graph().vertex_count() <= kDefaultPathwidthCap &&
        r.outcome.instance.graph().vertex_count() <= kDefaultPathwidthCap) {
      const bool before = pathwidth_exact(inst.graph()).width <= inst.target();
      const bool after = pathwidth_exact(r.outcome.instance.graph()).width <= r.outcome.instance.target();
      ++oracle_checked;
      if (before != after) problem += "answer changed; ";
    }
    if (!problem.empty()) {
      ++failures;
      text << "FAIL run " << run << ": " << problem << '\n' << serialize_instance(inst);
    }
  }
  rep.outcome = Json{{"family", family.name()}, {"runs", a.count}, {"failures", failures}};
  rep.stats = Json{{"seed", a.seed}, {"oracle_checked", oracle_checked}, {"verdicts", verdicts}};
  text << "family " << family.name() << "\nruns " << a.count << "\nfailures " << failures << "\noracle_checked "
       << oracle_checked << '\n';
  for (const auto& [name, count] : verdicts) text << "verdict " << name << ' ' << count << '\n';
  rep.text = text.str();
  rep.exit_code = failures == 0 ? kOk : kNo;
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact width solvers, pathwidth reduction rules, kernelizers and the cutwidth composition"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_flag("--no-timings", global.no_timings, "Omit timings so output is byte-stable");
  app.add_flag("--json", global.json, "Print a JSON run report instead of text");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Exact width with a certificate");
  solve_cmd->add_option("file", solve.file, "Instance file")->required();
  solve_cmd->add_option("--measure", solve.measure, "Width measure")
      ->check(CLI::IsMember({"pathwidth", "treewidth", "cutwidth", "weighted-treewidth"}));
  solve_cmd->add_option("--cap", solve.cap, "Vertex cap for the exact solver (0 = default)")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--certificate-out", solve.certificate_out, "Also write the certificate to this file");

  std::string validate_instance, validate_decomposition;
  auto* validate_cmd = app.add_subcommand("validate-decomposition", "Check a path/tree decomposition or ordering");
  validate_cmd->add_option("instance", validate_instance, "Instance file")->required();
  validate_cmd->add_option("decomposition", validate_decomposition, "Decomposition file")->required();

  ReduceArgs reduce;
  auto* reduce_cmd = app.add_subcommand("reduce", "Apply the reduction rules exhaustively");
  reduce_cmd->add_option("file", reduce.file, "Instance file")->required();
  reduce_cmd->add_option("--rules", reduce.rules, "'all' or a list such as R1,R2,R3G");
  reduce_cmd->add_option("--rule7-filter", reduce.rule7_filter, "Restrict R7 sites")
      ->check(CLI::IsMember({"none", "star"}));
  reduce_cmd->add_option("--trace", reduce.trace_out, "Write the application trace (JSON lines)");
  reduce_cmd->add_option("--out", reduce.out, "Write the reduced instance");

  KernelizeArgs kern;
  auto* kern_cmd = app.add_subcommand("kernelize", "Run a kernelizer and its counting audits");
  kern_cmd->add_option("file", kern.file, "Instance file")->required();
  kern_cmd->add_option("--family", kern.family, "vc | stars | bounded:<c> (default: the file's f line)");
  kern_cmd->add_flag("--no-vc-rule5", kern.no_vc_rule5, "Skip R5 in the vertex-cover pipeline");
  kern_cmd->add_option("--out", kern.out, "Write the kernel");

  ComposeArgs comp;
  auto* comp_cmd = app.add_subcommand("compose", "Build the weighted co-bipartite gadget for a batch");
  comp_cmd->add_option("files", comp.files, "Cutwidth instance files")->required();
  comp_cmd->add_option("--gadget-out", comp.gadget_out, "Write the gadget as a weighted instance");
  comp_cmd->add_option("--modulator-out", comp.modulator_out, "Write the expanded unweighted instance with S = B");
  comp_cmd->add_option("--cutwidth-cap", comp.cutwidth_cap, "Vertex cap for direct cutwidth solving");

  ComposeArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-composition", "Solve the gadget and every batch member exactly");
  verify_cmd->add_option("files", verify.files, "Cutwidth instance files")->required();
  verify_cmd->add_option("--cutwidth-cap", verify.cutwidth_cap, "Vertex cap for the cutwidth solver");
  verify_cmd->add_option("--cobipartite-cap", verify.cobipartite_cap, "Cap on the gadget's A side");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Kernelize random instances and check the counting bounds");
  audit_cmd->add_option("--seed", audit.seed, "Generator seed");
  audit_cmd->add_option("--count", audit.count, "Number of instances")->check(CLI::NonNegativeNumber);
  audit_cmd->add_option("--family", audit.family, "vc | stars | bounded:<c>");
  audit_cmd->add_option("--max-modulator", audit.max_modulator, "Largest |S|")->check(CLI::Range(0, 8));
  audit_cmd->add_option("--max-vertices", audit.max_vertices, "Largest instance")->check(CLI::Range(1, 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Report rep;
    if (*solve_cmd) rep = run_solve(solve);
    else if (*validate_cmd) rep = run_validate(validate_instance, validate_decomposition);
    else if (*reduce_cmd) rep = run_reduce(reduce);
    else if (*kern_cmd) rep = run_kernelize(kern);
    else if (*comp_cmd) rep = run_compose(comp);
    else if (*verify_cmd) rep = run_verify_composition(verify);
    else rep = run_audit(audit);
    const double millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    emit(rep, global, millis);
    return rep.exit_code;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const BoundViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
