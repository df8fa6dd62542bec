// Command-line front end: group, object, ci and sweep subcommands.
// Exit codes: 0 success, 1 property violation, 2 usage or input error,
// 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "closurekit/ci.hpp"
#include "closurekit/closures.hpp"
#include "closurekit/io.hpp"
#include "closurekit/normal_form.hpp"
#include "closurekit/theorems.hpp"

using namespace closurekit;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

enum class Format { text, machine };

// Text output is "key: value"; machine output is "key=value" with one record
// per line and tab-separated table rows.
class Emitter {
 public:
  explicit Emitter(Format f) : format_(f) {}

  void kv(const std::string& key, const std::string& value) {
    std::cout << key << (format_ == Format::text ? ": " : "=") << value << '\n';
  }
  void kv(const std::string& key, std::size_t value) { kv(key, std::to_string(value)); }
  void flag(const std::string& key, bool value) { kv(key, value ? "true" : "false"); }
  void row(const std::vector<std::string>& fields) {
    if (format_ == Format::machine) std::cout << "row\t";
    for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "\t" : "") << fields[i];
    std::cout << '\n';
  }
  void heading(const std::string& title) {
    if (format_ == Format::text) std::cout << "== " << title << " ==\n";
  }
  bool machine() const { return format_ == Format::machine; }

 private:
  Format format_;
};

std::string set_string(PointSet s) {
  std::string out = "{";
  bool first = true;
  for (Point p : s.to_vector()) {
    out += (first ? "" : ",") + std::to_string(p);
    first = false;
  }
  return out + "}";
}

std::string generators_string(const PermGroup& g) {
  std::string out;
  for (const Permutation& p : g.generators()) out += (out.empty() ? "" : " ") + to_cycle_string(p);
  return out.empty() ? "()" : out;
}

std::string order_string(const PermGroup& g) {
  std::uint64_t o = detail::chain_order(g.degree(), g.generators());
  return o == std::numeric_limits<std::uint64_t>::max() ? std::string("over 2^64") : std::to_string(o);
}

ClosednessKind parse_kind(const std::string& k) {
  if (k == "5/2") return ClosednessKind::five_halves;
  if (k == "9/8") return ClosednessKind::nine_eighths;
  if (k == "5/4") return ClosednessKind::five_fourths;
  if (k == "3/2") return ClosednessKind::three_halves;
  fail(ErrorKind::invalid_argument, "--kind must be 5/2, 9/8, 5/4 or 3/2, got " + k);
}

void emit_witness(Emitter& out, const ClosednessReport& r) {
  if (!r.witness) return;
  const ClosednessWitness& w = *r.witness;
  out.kv("witness.H", generators_string(w.h));
  out.kv("witness.B", w.b.to_string());
  out.kv("witness.E", w.e.to_string());
  if (w.g) out.kv("witness.g", to_cycle_string(*w.g));
  out.kv("witness.reason", w.reason);
}

// Sweep checkpoint: one JSON record per completed instance, keyed by "key".
class Checkpoint {
 public:
  explicit Checkpoint(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key")) continue;
      done_[j["key"].get<std::string>()] = j;
    }
  }

  const nlohmann::json* find(const std::string& key) const {
    auto it = done_.find(key);
    return it == done_.end() ? nullptr : &it->second;
  }

  void record(const nlohmann::json& j) {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << '\n';
    done_[j["key"].get<std::string>()] = j;
  }

 private:
  std::string path_;
  std::map<std::string, nlohmann::json> done_;
};

// ---- group ----

int group_info(Emitter& out, const std::string& file) {
  PermGroup g = parse_group(read_text_file(file));
  out.kv("degree", g.degree());
  out.kv("generators", generators_string(g));
  out.kv("order", order_string(g));
  OrbitPartition orb = orbits(g);
  out.kv("orbits", orb.to_string());
  bool transitive = orb.size() == 1;
  out.flag("transitive", transitive);
  if (!transitive) return 0;
  PermGroup full = g.materialize();
  auto systems = all_block_systems(full);
  out.kv("block_systems", systems.size());
  for (const BlockSystem& b : systems) {
    out.kv("block_system", b.to_string() + (is_normal_block_system(full, b) ? " normal" : ""));
  }
  auto normal = normal_block_systems(full);
  out.kv("normal_block_systems", normal.size());
  return 0;
}

int group_closure(Emitter& out, const std::string& file, const std::string& kind) {
  PermGroup g = parse_group(read_text_file(file)).materialize();
  ClosednessKind k = parse_kind(kind);
  if (k == ClosednessKind::five_halves) {
    ClosureReport r = closure_52(g);
    out.kv("kind", "5/2");
    out.kv("input_order", r.input.order());
    out.kv("result_order", r.result.order());
    out.kv("steps", r.steps);
    out.kv("added_generators", r.added_generators.size());
    for (const Permutation& p : r.added_generators) out.kv("added", to_cycle_string(p));
    for (const ClosureStepRecord& s : r.provenance) {
      out.row({"provenance", std::to_string(s.step), generators_string(s.h), s.b.to_string(), s.e.to_string(),
               set_string(s.e_cell), to_cycle_string(s.gamma), to_cycle_string(s.restricted)});
    }
    out.heading("result");
    std::cout << format_group(r.result);
    return 0;
  }
  if (k == ClosednessKind::three_halves) {
    PermGroup c = closure_32(g);
    out.kv("kind", "3/2");
    out.kv("input_order", g.order());
    out.kv("result_order", c.order());
    out.heading("result");
    std::cout << format_group(c);
    return 0;
  }
  fail(ErrorKind::invalid_argument, "group closure supports --kind 5/2 or 3/2");
}

int group_predicate(Emitter& out, const std::string& file, const std::string& kind, bool strict_h) {
  PermGroup g = parse_group(read_text_file(file)).materialize();
  ClosednessOptions opt;
  opt.strict_h = strict_h;
  ClosednessReport r = closedness(g, parse_kind(kind), opt);
  out.kv("kind", kind + (strict_h ? " (strict H)" : ""));
  out.flag("closed", r.closed);
  emit_witness(out, r);
  return r.closed ? 0 : kExitViolation;
}

Permutation read_single_permutation(const std::string& file) {
  PermGroup g = parse_group(read_text_file(file));
  if (g.generators().size() != 1) {
    fail(ErrorKind::parse_error, file + ": expected exactly one non-identity permutation");
  }
  return g.generators().front();
}

int group_normal_form(Emitter& out, const std::string& xf, const std::string& yf) {
  Permutation x = read_single_permutation(xf);
  Permutation y = read_single_permutation(yf);
  NormalFormReport r = verify_normal_form(x, y);
  out.kv("group_order", r.group_order);
  out.kv("candidates", r.candidates);
  out.flag("found", r.found);
  if (r.found) {
    out.kv("delta", to_cycle_string(*r.delta));
    out.kv("conjugated_y", to_cycle_string(r.conjugated_y));
    out.kv("normalized_order", r.normalized_order);
    for (const BlockSystem& b : r.sequence.systems) out.kv("sequence", b.to_string());
    std::string ratios;
    for (std::size_t p : r.sequence.index_ratios) ratios += (ratios.empty() ? "" : ",") + std::to_string(p);
    out.kv("ratios", ratios);
    out.flag("solvable", r.solvable);
    out.flag("order_divides_tower", r.order_divides_tower);
    out.kv("sylow", to_string(r.sylow));
  } else {
    out.kv("failure", r.failure);
  }
  out.flag("pimpernel_applicable", r.pimpernel.applicable);
  if (r.pimpernel.applicable) {
    out.kv("pimpernel_sequences", r.pimpernel.sequences);
    out.flag("pimpernel_holds", r.pimpernel.holds);
  }
  return r.found && r.pimpernel.holds ? 0 : kExitViolation;
}

// ---- object ----

template <typename Object>
void emit_aut(Emitter& out, const Object& x) {
  AutomorphismSearch a = automorphism_search(x);
  out.kv("points", x.order());
  out.kv("aut_order", std::to_string(a.order));
  std::string base;
  for (std::size_t i = 0; i < a.base.size(); ++i) {
    base += (i ? " " : "") + std::to_string(a.base[i]) + ":" + std::to_string(a.orbit_sizes[i]);
  }
  out.kv("base", base.empty() ? "-" : base);
  for (const Permutation& g : a.generators) out.kv("generator", to_cycle_string(g));
  out.kv("orbits", orbits(a.group()).to_string());
}

std::string object_kind(const AnyObject& o) {
  if (std::holds_alternative<Digraph>(o)) return "digraph";
  if (std::holds_alternative<IncidenceStructure>(o)) return "incidence";
  return "tuples";
}

int object_aut(Emitter& out, const std::string& file) {
  AnyObject o = parse_object(read_text_file(file));
  out.kv("object", object_kind(o));
  std::visit([&](const auto& x) { emit_aut(out, x); }, o);
  return 0;
}

void emit_profile(Emitter& out, const PermGroup& aut, std::size_t cap) {
  if (!is_transitive(aut)) {
    out.flag("point_transitive", false);
    return;
  }
  out.flag("point_transitive", true);
  ClosednessProfile p = closedness_profile(aut.materialize(cap));
  out.flag("aut_5/2_closed", p.five_halves.closed);
  out.flag("aut_9/8_closed", p.nine_eighths.closed);
  out.flag("aut_5/4_closed", p.five_fourths.closed);
  out.flag("aut_3/2_closed", p.three_halves.closed);
}

int object_classify(Emitter& out, const std::string& file, std::size_t cap) {
  AnyObject o = parse_object(read_text_file(file));
  out.kv("object", object_kind(o));
  if (const auto* d = std::get_if<Digraph>(&o)) {
    out.kv("points", d->order());
    out.kv("arcs", d->arc_count());
    out.flag("symmetric", d->is_symmetric());
    out.flag("weakly_connected", is_weakly_connected(*d));
    TwinReport tw = twin_partition(*d);
    out.flag("reducible", tw.reducible);
    out.kv("twin_classes", tw.classes.to_string());
    GirthReport g = girth_and_bipartite_search(*d, 2);
    out.kv("girth", g.girth ? std::to_string(*g.girth) : std::string("none"));
    out.flag("contains_K22", g.contains_bipartite);
    AutomorphismSearch a = automorphism_search(*d);
    out.kv("aut_order", std::to_string(a.order));
    emit_profile(out, a.group(), cap);
    return 0;
  }
  IncidenceStructure s = std::holds_alternative<IncidenceStructure>(o)
                             ? std::get<IncidenceStructure>(o)
                             : IncidenceStructure(std::get<ColoredTupleSystem>(o).order(),
                                                  set_system_of(std::get<ColoredTupleSystem>(o)).sets());
  IncidenceReport r = classify_incidence(s);
  out.kv("points", s.order());
  out.kv("lines", s.lines().size());
  out.kv("classification", to_string(r));
  out.flag("configuration", r.configuration);
  out.flag("partial_sg", r.partial_sg);
  out.flag("connected", r.connected);
  AutomorphismSearch a = std::visit([](const auto& x) { return automorphism_search(x); }, o);
  out.kv("aut_order", std::to_string(a.order));
  emit_profile(out, a.group(), cap);
  return 0;
}

// ---- ci ----

ResidueSet parse_residues(const std::string& text) {
  ResidueSet out;
  std::string cleaned;
  for (char c : text) cleaned += (c == ',' || c == '{' || c == '}') ? ' ' : c;
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) fail(ErrorKind::parse_error, "bad residue \"" + tok + "\"");
    out.push_back(v);
  }
  return out;
}

std::string witness_string(const CIReport& r) {
  if (auto c = r.counterexample()) {
    if (c->subgroup) return "non-conjugate " + to_cycle_string(*c->subgroup);
    return "isomorphic to " + to_string(c->mate);
  }
  std::size_t mult = 0, conj = 0;
  for (const CIWitness& w : r.witnesses) {
    mult += w.kind == CIWitness::Kind::multiplier ? 1 : 0;
    conj += w.kind == CIWitness::Kind::conjugator ? 1 : 0;
  }
  if (r.route == CIRoute::babai) return std::to_string(conj) + " conjugators";
  return std::to_string(mult) + " multiplier mates";
}

void emit_ci_report(Emitter& out, const CIReport& r) {
  out.kv("object", r.descriptor);
  out.flag("ci", r.verdict);
  out.kv("route", to_string(r.route));
  if (r.babai_verdict) out.flag("babai_verdict", *r.babai_verdict);
  if (r.definitional_verdict) out.flag("definitional_verdict", *r.definitional_verdict);
  out.kv("regular_cyclic_subgroups", r.regular_cyclic_count);
  for (const CIWitness& w : r.witnesses) {
    switch (w.kind) {
      case CIWitness::Kind::conjugator:
        out.row({"conjugator", to_cycle_string(*w.subgroup), to_cycle_string(*w.conjugator)});
        break;
      case CIWitness::Kind::multiplier:
        out.row({"multiplier", to_string(w.mate), std::to_string(w.multiplier)});
        break;
      case CIWitness::Kind::counterexample:
        out.row({"counterexample", w.subgroup ? to_cycle_string(*w.subgroup) : to_string(w.mate)});
        break;
    }
  }
}

int ci_circulant(Emitter& out, std::size_t n, bool units_only, const std::string& set, std::size_t jobs,
                 const std::string& checkpoint_path) {
  if (n < 2) fail(ErrorKind::invalid_argument, "--n must be at least 2");
  if (!set.empty()) {
    ResidueSet s = parse_residues(set);
    if (units_only) unit_circulant(n, s);
    CIReport r = is_ci_digraph_direct(n, s);
    emit_ci_report(out, r);
    bool predicted = detail::is_unit_set(n, detail::normalize_residues(n, s));
    return !r.verdict && predicted ? kExitViolation : 0;
  }
  ResidueSet pool = units_only ? units(n) : detail::nonzero_residues(n);
  std::vector<ResidueSet> sets = detail::subsets_of(pool);
  std::sort(sets.begin(), sets.end(), [](const ResidueSet& a, const ResidueSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  Checkpoint cp(checkpoint_path);
  std::string prefix = std::to_string(n) + ":";
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!cp.find(prefix + to_string(sets[i]))) todo.push_back(i);
  }
  auto fresh = parallel_map(todo.size(), jobs, [&](std::size_t k) {
    const ResidueSet& s = sets[todo[k]];
    CIReport r = is_ci_digraph_direct(n, s);
    nlohmann::json j;
    j["key"] = prefix + to_string(s);
    j["verdict"] = r.verdict;
    j["witness"] = witness_string(r);
    return j;
  });
  for (const auto& j : fresh) cp.record(j);

  std::size_t ci = 0, non_ci = 0, violations = 0;
  out.row({"n", "S", "verdict", "witness"});
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::string key = prefix + to_string(sets[i]);
    const nlohmann::json* j = cp.find(key);
    nlohmann::json local;
    if (!j) {
      auto it = std::find(todo.begin(), todo.end(), i);
      local = fresh[static_cast<std::size_t>(it - todo.begin())];
      j = &local;
    }
    bool verdict = (*j)["verdict"].get<bool>();
    (verdict ? ci : non_ci)++;
    if (!verdict && detail::is_unit_set(n, sets[i])) ++violations;
    out.row({std::to_string(n), to_string(sets[i]), verdict ? "CI" : "non-CI", (*j)["witness"].get<std::string>()});
  }
  out.kv("summary", "n=" + std::to_string(n) + " sets=" + std::to_string(sets.size()) + " ci=" + std::to_string(ci) +
                        " non_ci=" + std::to_string(non_ci));
  return violations == 0 ? 0 : kExitViolation;
}

int ci_object(Emitter& out, const std::string& file, std::size_t cap) {
  AnyObject o = parse_object(read_text_file(file));
  CIReport r = std::visit([&](const auto& x) { return is_ci_object(x, cap); }, o);
  emit_ci_report(out, r);
  return 0;
}

// ---- sweep ----

nlohmann::json to_json(const CriterionResult& r) {
  return {{"key", r.id},          {"title", r.title},         {"passed", r.passed},   {"skipped", r.skipped},
          {"checked", r.checked}, {"violations", r.violations}, {"summary", r.summary}, {"witnesses", r.witnesses},
          {"seconds", r.seconds}, {"time_limit", r.time_limit}};
}

CriterionResult from_json(const nlohmann::json& j) {
  CriterionResult r;
  r.id = j["key"].get<std::string>();
  r.title = j["title"].get<std::string>();
  r.passed = j["passed"].get<bool>();
  r.skipped = j["skipped"].get<bool>();
  r.checked = j["checked"].get<std::size_t>();
  r.violations = j["violations"].get<std::size_t>();
  r.summary = j["summary"].get<std::string>();
  r.witnesses = j["witnesses"].get<std::vector<std::string>>();
  r.seconds = j["seconds"].get<double>();
  r.time_limit = j["time_limit"].get<double>();
  return r;
}

int sweep_theorems(Emitter& out, std::size_t degree_max, std::size_t jobs, const std::string& only,
                   const std::string& checkpoint_path) {
  SweepOptions opt;
  opt.degree_max = degree_max;
  opt.jobs = jobs;
  std::vector<std::string> ids;
  if (only.empty()) {
    ids = criterion_ids();
  } else {
    std::istringstream in(only);
    std::string id;
    while (std::getline(in, id, ',')) ids.push_back(id);
  }
  Checkpoint cp(checkpoint_path);
  bool ok = true;
  for (const std::string& id : ids) {
    CriterionResult r;
    if (const nlohmann::json* j = cp.find(id)) {
      r = from_json(*j);
    } else {
      r = run_criteria(opt, {id}).front();
      cp.record(to_json(r));
    }
    // Timings go to stderr so that stdout is reproducible.
    std::cerr << r.id << " time=" << r.seconds << "s\n";
    std::string verdict = r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL";
    if (out.machine()) {
      out.row({r.id, verdict, std::to_string(r.checked), std::to_string(r.violations), r.title, r.summary});
    } else {
      std::cout << r.id << ' ' << verdict << " checked=" << r.checked << " violations=" << r.violations << ' '
                << r.title << ": " << r.summary << '\n';
    }
    for (const std::string& w : r.witnesses) out.row({"violation", r.id, w});
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closurekit: closed permutation groups, Cayley objects and CI checks"};
  app.require_subcommand(1);

  std::string format = "text";
  std::size_t cap = 0;
  std::size_t jobs = 0;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--order-cap", cap, "Largest group order to materialize (default 1000000 or $CLOSUREKIT_ORDER_CAP)")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "Worker threads for sweeps (default: hardware threads)")->check(CLI::PositiveNumber);

  std::string file, file2, kind = "5/2", set, checkpoint, only;
  bool strict_h = false, units_only = false;
  std::size_t n = 0, degree_max = 13;

  auto* group = app.add_subcommand("group", "Permutation group commands")->require_subcommand(1);
  auto* g_info = group->add_subcommand("info", "Orbits, block systems and normal block systems");
  g_info->add_option("file", file, "Group file")->required();
  auto* g_closure = group->add_subcommand("closure", "5/2- or 3/2-closure");
  g_closure->add_option("file", file, "Group file")->required();
  g_closure->add_option("--kind", kind, "Closure kind")->check(CLI::IsMember({"5/2", "3/2"}));
  auto* g_pred = group->add_subcommand("predicate", "Closedness predicate with witness");
  g_pred->add_option("file", file, "Group file")->required();
  g_pred->add_option("--kind", kind, "Predicate kind")->required()->check(CLI::IsMember({"5/2", "9/8", "5/4", "3/2"}));
  g_pred->add_flag("--strict-h", strict_h, "3/2 clause triggered by the fixer system of H rather than K_H");
  auto* g_nf = group->add_subcommand("normal-form", "Normal form of <x, y> for regular cyclic x, y");
  g_nf->add_option("x", file, "Permutation file for x")->required();
  g_nf->add_option("y", file2, "Permutation file for y")->required();

  auto* object = app.add_subcommand("object", "Combinatorial object commands")->require_subcommand(1);
  auto* o_aut = object->add_subcommand("aut", "Automorphism group");
  o_aut->add_option("file", file, "Object file")->required();
  auto* o_cls = object->add_subcommand("classify", "Structural classification and closedness of Aut");
  o_cls->add_option("file", file, "Object file")->required();

  auto* ci = app.add_subcommand("ci", "Cayley isomorphism checks")->require_subcommand(1);
  auto* c_circ = ci->add_subcommand("circulant", "Direct CI check of circulant digraphs of Z_n");
  c_circ->add_option("--n", n, "Order of Z_n")->required()->check(CLI::Range(2, 31));
  c_circ->add_flag("--units-only", units_only, "Only connection sets of units");
  c_circ->add_option("--set", set, "Single connection set, e.g. 1,2,5");
  c_circ->add_option("--checkpoint", checkpoint, "Resume file for the sweep");
  auto* c_obj = ci->add_subcommand("object", "CI check of a Cayley object of Z_n (Babai route)");
  c_obj->add_option("file", file, "Object file")->required();

  auto* sweep = app.add_subcommand("sweep", "Exhaustive sweeps")->require_subcommand(1);
  auto* s_thm = sweep->add_subcommand("theorems", "Run the acceptance criteria");
  s_thm->add_option("--degree-max", degree_max, "Largest degree swept")->check(CLI::Range(2, 31));
  s_thm->add_option("--only", only, "Comma-separated criteria, e.g. AC1,AC3");
  s_thm->add_option("--checkpoint", checkpoint, "Resume file for completed criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (cap != 0) set_default_order_cap(cap);
  if (jobs == 0) jobs = hardware_jobs();
  Emitter out(format == "machine" ? Format::machine : Format::text);
  try {
    if (g_info->parsed()) return group_info(out, file);
    if (g_closure->parsed()) return group_closure(out, file, kind);
    if (g_pred->parsed()) return group_predicate(out, file, kind, strict_h);
    if (g_nf->parsed()) return group_normal_form(out, file, file2);
    if (o_aut->parsed()) return object_aut(out, file);
    if (o_cls->parsed()) return object_classify(out, file, default_order_cap());
    if (c_circ->parsed()) return ci_circulant(out, n, units_only, set, jobs, checkpoint);
    if (c_obj->parsed()) return ci_object(out, file, default_order_cap());
    if (s_thm->parsed()) return sweep_theorems(out, degree_max, jobs, only, checkpoint);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::invariant_violation ? kExitInternal : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInput;
}
