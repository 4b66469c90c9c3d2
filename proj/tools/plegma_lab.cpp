// plegma-lab: batch front end over the library. One subcommand per
// operation, plus `run --config file.json` to execute the same operations
// from a declarative experiment description (emitting a manifest that echoes
// the fully resolved configuration). Output is deterministic for a fixed
// command line / config + seed: no timestamps, no machine names, fixed
// formatting. Exit codes: 0 success, 1 failed verification or self-check,
// 2 invalid input or config, 3 refused scale.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "plegma/core.hpp"
#include "plegma/io.hpp"
#include "plegma/ramsey.hpp"
#include "plegma/schreier_norm.hpp"
#include "plegma/selfcheck.hpp"
#include "plegma/seq.hpp"
#include "plegma/smlab.hpp"
#include "plegma/tree.hpp"
#include "plegma/tsirelson.hpp"

namespace {

using namespace plegma;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Small argument parsers. Structured values travel as JSON text so that the
// same spelling works on the command line and in config files.
// ---------------------------------------------------------------------------

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(what + ": not valid JSON: " + e.what());
  }
}

FinSubset subset_arg(const std::string& text, const std::string& what) {
  json j = parse_json_text(text, what);
  if (!j.is_array()) throw InvalidInput(what + ": expected an array of integers");
  return finsubset_from_json(j);
}

PlegmaTuple tuple_arg(const std::string& text, const std::string& what) {
  json j = parse_json_text(text, what);
  if (!j.is_array() || j.empty())
    throw InvalidInput(what + ": expected a nonempty array of subsets");
  return plegma_tuple_from_json(j);
}

std::vector<FinSubset> subset_list_arg(const std::string& text,
                                       const std::string& what) {
  json j = parse_json_text(text, what);
  if (!j.is_array()) throw InvalidInput(what + ": expected an array of subsets");
  std::vector<FinSubset> out;
  for (const auto& e : j) out.push_back(finsubset_from_json(e));
  return out;
}

IntVec intvec_arg(const std::string& text) {
  json j = parse_json_text(text, "--vec");
  if (!j.is_array())
    throw InvalidInput("--vec: expected [[position, coefficient], ...]");
  return intvec_from_json(j);
}

SubsetVec subsetvec_arg(const std::string& text) {
  json j = parse_json_text(text, "--vec");
  if (!j.is_array())
    throw InvalidInput("--vec: expected [[[subset], coefficient], ...]");
  return subsetvec_from_json(j);
}

Rational rational_arg(const std::string& text, const std::string& what) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

std::vector<Rational> rational_list_arg(const std::string& text,
                                        const std::string& what) {
  json j = parse_json_text(text, what);
  if (!j.is_array() || j.empty())
    throw InvalidInput(what + ": expected a nonempty array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

// Universe from the shared --n / --universe pair: an initial segment or an
// explicit element list.
Universe universe_arg(const json& p) {
  std::string text = p.value("universe", std::string());
  long long n = p.value("n", 0LL);
  if (!text.empty()) {
    json j = parse_json_text(text, "--universe");
    std::vector<int> elems;
    for (const auto& e : j) elems.push_back(e.get<int>());
    return Universe::explicit_set(std::move(elems));
  }
  if (n > 0) return Universe::initial_segment((int)n);
  throw InvalidInput("need --n or --universe");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Output sinks: stdout always carries the readable report; --csv / --json /
// --svg write the machine-readable artifacts. Charts are derived from the
// CSV, never computed separately.
// ---------------------------------------------------------------------------

struct Sinks {
  std::optional<std::string> csv_path, json_path, svg_path;
  std::string csv_text;
  bool wrote_csv = false, wrote_json = false, wrote_svg = false;

  void table(const std::string& csv) {
    csv_text = csv;
    if (csv_path) {
      write_file(*csv_path, csv);
      wrote_csv = true;
    }
  }
  void artifact(const json& j) {
    if (json_path) {
      write_file(*json_path, j.dump(2) + "\n");
      wrote_json = true;
    }
  }
  void chart(size_t x_col, const std::vector<size_t>& y_cols,
             const std::string& title) {
    if (!svg_path) return;
    write_file(*svg_path, svg_chart_from_csv(csv_text, x_col, y_cols, title));
    wrote_svg = true;
  }
  void finish() const {
    if (csv_path && !wrote_csv)
      throw InvalidInput("this command produced no table for --csv");
    if (json_path && !wrote_json)
      throw InvalidInput("this command produced no JSON artifact for --json");
    if (svg_path && !wrote_svg)
      throw InvalidInput("this command produced no chart for --svg");
  }
};

// ---------------------------------------------------------------------------
// Worker pool size: PLEGMA_LAB_THREADS caps the pool, never raises it past
// the hardware.
// ---------------------------------------------------------------------------

int worker_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* s = std::getenv("PLEGMA_LAB_THREADS");
  if (s == nullptr || *s == '\0') return (int)hw;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 1)
    throw InvalidInput("PLEGMA_LAB_THREADS must be a positive integer");
  return (int)std::min<long>(v, (long)hw);
}

// ---------------------------------------------------------------------------
// Generator zoo shared by the seq and sm groups. `f` receives the sequence
// and must work for both integer- and subset-indexed vectors.
// ---------------------------------------------------------------------------

KSeq<FinSubset> diagonal_pairs_seq() {
  KSeq<FinSubset> x;
  x.k = 1;
  x.name = "diagonal-pairs";
  x.engine = std::make_shared<SchreierEngine>();
  x.at = [](const FinSubset& s) {
    int n = s.at1(1);
    SubsetVec v;
    v.set(FinSubset{2 * n - 1, 2 * n}, Rational(1));
    return v;
  };
  return x;
}

constexpr const char* kGeneratorList =
    "basis, diagonal-pairs, doubling-composed, summing, truncation-unit, "
    "truncation-interval";

template <class F>
int with_generator(const std::string& name, int k, F&& f) {
  if (name == "basis") {
    if (k < 1) throw InvalidInput("--k: the subset basis needs arity >= 1");
    return f(basis_seq(k, std::make_shared<SchreierEngine>()));
  }
  if (name == "diagonal-pairs") return f(diagonal_pairs_seq());
  if (name == "doubling-composed")
    return f(compose_seq(diagonal_pairs_seq(), doubling_pattern(), 1));
  if (name == "summing") return f(summing_2seq());
  if (name == "truncation-unit") return f(truncation_2seq(unit_rows()));
  if (name == "truncation-interval") return f(truncation_2seq(summing_rows()));
  throw InvalidInput("unknown generator '" + name + "' (choose from " +
                     kGeneratorList + ")");
}

// ---------------------------------------------------------------------------
// Named colorings / labelings for the ramsey commands, all reduced modulo m.
// ---------------------------------------------------------------------------

long long entry_statistic(const std::string& stat, const FinSubset& s) {
  if (stat == "sum") {
    long long t = 0;
    for (int v : s) t += v;
    return t;
  }
  if (stat == "max") return s.at1(s.size());
  if (stat == "min") return s.at1(1);
  if (stat == "span") return s.at1(s.size()) - s.at1(1);
  throw InvalidInput("unknown statistic '" + stat +
                     "' (choose from sum, max, min, span)");
}

TupleColoring make_tuple_coloring(const std::string& stat, long long modulus) {
  if (modulus < 2) throw InvalidInput("--modulus must be at least 2");
  return [stat, modulus](const PlegmaTuple& t) {
    long long total = 0;
    for (const FinSubset& s : t) total += entry_statistic(stat, s);
    return (int)(((total % modulus) + modulus) % modulus);
  };
}

SubsetLabeling make_subset_labeling(const std::string& stat, long long modulus) {
  if (modulus < 2) throw InvalidInput("--modulus must be at least 2");
  return [stat, modulus](const FinSubset& s) {
    long long v = entry_statistic(stat, s);
    return (int)(((v % modulus) + modulus) % modulus);
  };
}

// ---------------------------------------------------------------------------
// Command registry. Parameters live in a flat JSON object so that the
// command line and the config file resolve through the same code path.
// ---------------------------------------------------------------------------

struct Command {
  std::string group;  // empty for top-level commands
  std::string name;
  std::string help;
  json defaults;                            // every parameter with its default
  std::set<std::string> required;           // must be provided explicitly
  std::map<std::string, std::string> doc;   // per-parameter help
  bool out_csv = false, out_json = false, out_svg = false;
  std::function<int(const json&, Sinks&)> run;

  std::string full_name() const {
    return group.empty() ? name : group + " " + name;
  }
};

// Shared line printers ------------------------------------------------------

void print_kv(const std::string& key, const std::string& value) {
  std::cout << key << ": " << value << "\n";
}

std::string tuple_repr(const PlegmaTuple& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + t[i].to_string();
  return s;
}

std::string norm_repr(const NormValue& nv) {
  if (nv.lo == nv.hi) return double_repr(nv.lo);
  return "[" + double_repr(nv.lo) + ", " + double_repr(nv.hi) + "]";
}

std::string universe_repr(const Universe& u) {
  if (u.is_initial_segment()) return "{1.." + std::to_string(u.size()) + "}";
  std::string s = "{";
  std::vector<int> elems = u.elements();
  for (size_t i = 0; i < elems.size(); ++i)
    s += (i ? " " : "") + std::to_string(elems[i]);
  return s + "}";
}

// Engine construction for `norm eval` / `norm certify` ----------------------

TsirelsonConfig tsirelson_config_arg(const json& p) {
  std::string weights = p.value("weights", std::string());
  std::string budgets = p.value("budgets", std::string());
  if (weights.empty() != budgets.empty())
    throw InvalidInput("--weights and --budgets must be given together");
  if (!weights.empty()) {
    TsirelsonConfig cfg;
    for (const auto& e : parse_json_text(weights, "--weights"))
      cfg.m.push_back(e.get<long long>());
    for (const auto& e : parse_json_text(budgets, "--budgets"))
      cfg.n.push_back(e.get<long long>());
    cfg.validate();
    return cfg;
  }
  TsirelsonConfig cfg = TsirelsonConfig::preset(p.value("preset", "standard"));
  cfg.validate();
  return cfg;
}

// The partition-norm admissibility level: only the first level (family size
// bounded by its minimum) is implemented, so anything else is refused rather
// than silently approximated.
void require_level_one(const json& p) {
  if (p.value("k", 1LL) != 1)
    throw InvalidInput(
        "--k: only admissibility level 1 (family size bounded by its minimum) "
        "is implemented");
}

json schreier_result_json(const SubsetVec& x, const SchreierNormResult& res) {
  json families = json::array();
  for (size_t i = 0; i < res.partition.size(); ++i) {
    json members = json::array();
    for (const FinSubset& s : res.partition[i]) members.push_back(to_json(s));
    families.push_back(json{{"members", members},
                            {"mass", res.masses[i].to_string()}});
  }
  return json{{"vector", to_json(x)},
              {"value", res.value},
              {"square", res.square.to_string()},
              {"partition", families}};
}

// Self-check batches ---------------------------------------------------------

int print_outcomes(const std::vector<selfcheck::Outcome>& outcomes) {
  int failures = 0;
  for (const auto& o : outcomes) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  ";
    if (o.number < 10) std::cout << ' ';
    std::cout << o.number << "  " << o.name;
    if (!o.pass && !o.detail.empty()) std::cout << " -- " << o.detail;
    std::cout << "\n";
    if (!o.pass) ++failures;
  }
  if (failures == 0) {
    std::cout << "all " << outcomes.size() << " self-checks passed\n";
    return 0;
  }
  std::cout << failures << " of " << outcomes.size() << " self-checks failed\n";
  return 1;
}

int run_selfcheck_batch(std::vector<selfcheck::Check> batch, bool quick) {
  auto outcomes = selfcheck::run_checks(batch, quick, worker_threads());
  return print_outcomes(outcomes);
}

// ---------------------------------------------------------------------------
// The command table
// ---------------------------------------------------------------------------

std::vector<Command> build_commands() {
  std::vector<Command> cmds;

  // ----- plegma ------------------------------------------------------------

  {
    Command c;
    c.group = "plegma";
    c.name = "check";
    c.help = "Decide whether a tuple of subsets satisfies the two interlacing "
             "conditions (rows strictly increase, consecutive members are "
             "column-separated).";
    c.defaults = {{"tuple", ""}};
    c.required = {"tuple"};
    c.doc = {{"tuple", "the tuple as JSON, e.g. [[1,3],[2,4]]"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      PlegmaTuple t = tuple_arg(p.at("tuple"), "--tuple");
      bool ok = false;
      std::string why;
      try {
        ok = is_plegma(t);
      } catch (const InvalidInput&) {
        why = "members have mixed cardinalities";
      }
      if (!ok && why.empty()) {
        for (size_t j = 0; j + 1 < t.size() && why.empty(); ++j)
          if (!is_plegma_pair(t[j], t[j + 1]))
            why = "members " + std::to_string(j + 1) + " and " +
                  std::to_string(j + 2) + " are not an interlaced pair";
      }
      print_kv("tuple", tuple_repr(t));
      print_kv("plegma", ok ? "yes" : "no");
      if (!ok) print_kv("reason", why);
      s.artifact(json{{"tuple", to_json(t)}, {"plegma", ok}, {"reason", why}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "plegma";
    c.name = "enumerate";
    c.help = "List every plegma l-tuple of k-subsets of {1..n} through the "
             "flat-subset bijection.";
    c.defaults = {{"n", 0LL},          {"k", 0LL},
                  {"l", 0LL},          {"order", "column-major"},
                  {"max", 2000000LL}};
    c.required = {"n", "k", "l"};
    c.doc = {{"n", "universe size"},
             {"k", "subset cardinality"},
             {"l", "tuple length"},
             {"order",
              "how a flat kl-subset is split into members: column-major "
              "(always a bijection) or row-step (defined only when l = k)"},
             {"max", "refuse enumerations beyond this many tuples"}};
    c.out_csv = true;
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      long long n = p.at("n"), k = p.at("k"), l = p.at("l");
      if (n < 1 || k < 1 || l < 1)
        throw InvalidInput("--n, --k, --l must be positive");
      std::string order = p.at("order");
      FlatFormula formula;
      if (order == "column-major") formula = FlatFormula::kColumnMajor;
      else if (order == "row-step") formula = FlatFormula::kLegacyRowStep;
      else throw InvalidInput("--order must be column-major or row-step");
      if (formula == FlatFormula::kLegacyRowStep && l != k)
        throw InvalidInput("--order row-step is a bijection only when l = k");

      long long count = (k * l > n) ? 0 : binomial(n, k * l);
      if (count > p.at("max").get<long long>())
        throw ScaleRefusal("enumerate: " + std::to_string(count) +
                           " tuples exceeds --max " +
                           std::to_string(p.at("max").get<long long>()));

      Universe u = Universe::initial_segment((int)n);
      std::vector<std::vector<std::string>> rows;
      json arr = json::array();
      long long index = 0;
      for_each_subset(u, (int)(k * l), [&](const FinSubset& flat) {
        PlegmaTuple t = plegma_from_flat(flat, (int)k, (int)l, formula);
        ++index;
        std::cout << index << "  " << tuple_repr(t) << "\n";
        rows.push_back({std::to_string(index), to_json(t).dump()});
        arr.push_back(to_json(t));
        return true;
      });
      std::cout << index << " tuples\n";
      s.table(csv_table({"index", "tuple"}, rows));
      s.artifact(arr);
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "plegma";
    c.name = "path";
    c.help = "Construct the k-step chain between two skipped subsets with "
             "separated supports (each step an interlaced pair).";
    c.defaults = {{"from", ""}, {"to", ""}, {"n", 0LL}, {"universe", ""}};
    c.required = {"from", "to"};
    c.doc = {{"from", "start subset as JSON, e.g. [1,3]"},
             {"to", "end subset as JSON"},
             {"n", "universe {1..n}"},
             {"universe", "explicit universe as a JSON array (overrides --n)"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      Universe u = universe_arg(p);
      FinSubset a = subset_arg(p.at("from"), "--from");
      FinSubset b = subset_arg(p.at("to"), "--to");
      std::vector<FinSubset> path = plegma_path_between(a, b, u);
      for (size_t i = 0; i < path.size(); ++i)
        std::cout << i << "  " << path[i].to_string() << "\n";
      print_kv("steps", std::to_string(path.size() - 1));
      json arr = json::array();
      for (const FinSubset& v : path) arr.push_back(to_json(v));
      s.artifact(json{{"path", arr}, {"steps", path.size() - 1}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "plegma";
    c.name = "distance";
    c.help = "Length of the shortest chain of interlaced pairs between two "
             "subsets inside the universe (breadth-first search).";
    c.defaults = {{"from", ""}, {"to", ""}, {"n", 0LL}, {"universe", ""}};
    c.required = {"from", "to"};
    c.doc = {{"from", "start subset as JSON"},
             {"to", "end subset as JSON"},
             {"n", "universe {1..n}"},
             {"universe", "explicit universe as a JSON array (overrides --n)"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      Universe u = universe_arg(p);
      FinSubset a = subset_arg(p.at("from"), "--from");
      FinSubset b = subset_arg(p.at("to"), "--to");
      std::optional<int> d = plegma_distance(a, b, u);
      print_kv("distance", d ? std::to_string(*d) : "unreachable");
      s.artifact(json{{"from", to_json(a)},
                      {"to", to_json(b)},
                      {"distance", d ? json(*d) : json(nullptr)}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "plegma";
    c.name = "preserve";
    c.help = "Check whether a subset map sends every plegma tuple to a plegma "
             "tuple; optionally search for a sub-universe on which it never "
             "does.";
    c.defaults = {{"map", ""},   {"n", 0LL},         {"universe", ""},
                  {"k", 0LL},    {"max-l", 2LL},     {"witness-target", 0LL}};
    c.required = {"map", "k"};
    c.doc = {{"map", "total map as JSON pairs [[[1,2],[2,4]], ...]"},
             {"n", "universe {1..n}"},
             {"universe", "explicit universe as a JSON array (overrides --n)"},
             {"k", "subset cardinality of the domain"},
             {"max-l", "check tuples up to this length"},
             {"witness-target",
              "if positive, also search for a sub-universe of this size on "
              "which no pair image is plegma in either order"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      Universe u = universe_arg(p);
      long long k = p.at("k");
      SubsetMap map;
      json jm = parse_json_text(p.at("map"), "--map");
      for (const auto& e : jm)
        map[finsubset_from_json(e.at(0))] = finsubset_from_json(e.at(1));
      PreservationReport rep =
          is_plegma_preserving(map, u, (int)k, (int)p.at("max-l").get<long long>());
      print_kv("preserving", rep.preserving ? "yes" : "no");
      json out{{"preserving", rep.preserving}};
      if (rep.counterexample) {
        print_kv("counterexample", tuple_repr(*rep.counterexample));
        PlegmaTuple image;
        for (const FinSubset& m : *rep.counterexample) image.push_back(map.at(m));
        print_kv("image", tuple_repr(image));
        out["counterexample"] = to_json(*rep.counterexample);
        out["image"] = to_json(image);
      }
      long long target = p.at("witness-target");
      if (target > 0) {
        auto witness = find_nonpreserving_witness(map, u, (int)k, (int)target);
        if (witness) {
          std::string elems;
          for (size_t i = 0; i < witness->size(); ++i)
            elems += (i ? " " : "") + std::to_string((*witness)[i]);
          print_kv("nowhere-preserving sub-universe", elems);
          out["nowhere_preserving"] = *witness;
        } else {
          print_kv("nowhere-preserving sub-universe", "none of that size");
          out["nowhere_preserving"] = json(nullptr);
        }
      }
      s.artifact(out);
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  // ----- ramsey ------------------------------------------------------------

  {
    Command c;
    c.group = "ramsey";
    c.name = "mono";
    c.help = "Search for a sub-universe whose plegma l-tuples all receive one "
             "color under a named coloring.";
    c.defaults = {{"n", 0LL},       {"k", 0LL},
                  {"l", 0LL},       {"coloring", "sum"},
                  {"modulus", 2LL}, {"target", 0LL}};
    c.required = {"n", "k", "l"};
    c.doc = {{"n", "universe size"},
             {"k", "subset cardinality"},
             {"l", "tuple length"},
             {"coloring",
              "statistic over all tuple entries, taken mod --modulus: sum, "
              "max, min, or span"},
             {"modulus", "number of colors"},
             {"target", "requested sub-universe size (default: one flat, k*l)"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      long long n = p.at("n"), k = p.at("k"), l = p.at("l");
      long long target = p.at("target");
      if (target == 0) target = k * l;
      TupleColoring color =
          make_tuple_coloring(p.at("coloring"), p.at("modulus"));
      Universe u = Universe::initial_segment((int)n);
      auto found = monochromatize(u, (int)k, (int)l, color, (int)target);
      if (!found) {
        print_kv("result", "no sub-universe of size " + std::to_string(target) +
                               " is monochromatic");
        s.artifact(json{{"found", false}});
        return 0;
      }
      std::string elems;
      for (size_t i = 0; i < found->size(); ++i)
        elems += (i ? " " : "") + std::to_string((*found)[i]);
      print_kv("sub-universe", elems);
      int value = -1;
      for_each_plegma(Universe::explicit_set(*found), (int)k, (int)l,
                      [&](const PlegmaTuple& t) {
                        value = color(t);
                        return false;
                      });
      print_kv("color", std::to_string(value));
      s.artifact(json{{"found", true}, {"sub_universe", *found},
                      {"color", value}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "ramsey";
    c.name = "dichotomy";
    c.help = "For a named labeling of k-subsets, find the larger sub-universe "
             "on which it is either constant or injective across plegma "
             "pairs.";
    c.defaults = {{"n", 0LL}, {"k", 0LL}, {"labeling", "sum"}, {"modulus", 2LL}};
    c.required = {"n", "k"};
    c.doc = {{"n", "universe size"},
             {"k", "subset cardinality"},
             {"labeling",
              "statistic of the subset entries, taken mod --modulus: sum, "
              "max, min, or span"},
             {"modulus", "number of labels"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      Universe u = Universe::initial_segment((int)p.at("n").get<long long>());
      SubsetLabeling label =
          make_subset_labeling(p.at("labeling"), p.at("modulus"));
      DichotomyResult res = dichotomy_search(u, (int)p.at("k").get<long long>(),
                                             label);
      bool constant = res.kind == DichotomyResult::Kind::kConstant;
      print_kv("alternative",
               constant ? "constant" : "injective on plegma pairs");
      if (constant) print_kv("label", std::to_string(res.label));
      std::string elems;
      for (size_t i = 0; i < res.sub_universe.size(); ++i)
        elems += (i ? " " : "") + std::to_string(res.sub_universe[i]);
      print_kv("sub-universe", elems);
      s.artifact(json{
          {"alternative", constant ? "constant" : "injective_on_plegma_pairs"},
          {"label", constant ? json(res.label) : json(nullptr)},
          {"sub_universe", res.sub_universe}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "ramsey";
    c.name = "find";
    c.help = "First plegma l-tuple whose members all belong to a given list "
             "of subsets.";
    c.defaults = {{"subsets", ""}, {"l", 0LL}};
    c.required = {"subsets", "l"};
    c.doc = {{"subsets", "candidate members as JSON, e.g. [[1,2],[3,4]]"},
             {"l", "tuple length to look for"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      auto a = subset_list_arg(p.at("subsets"), "--subsets");
      auto found = find_plegma_in_subset(a, (int)p.at("l").get<long long>());
      if (found) {
        print_kv("tuple", tuple_repr(*found));
        s.artifact(json{{"found", true}, {"tuple", to_json(*found)}});
      } else {
        print_kv("tuple", "none");
        s.artifact(json{{"found", false}});
      }
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "ramsey";
    c.name = "free";
    c.help = "Largest subset of [{1..n}]^k containing no plegma l-tuple "
             "(exact branch and bound).";
    c.defaults = {{"n", 0LL}, {"k", 0LL}, {"l", 0LL}, {"vertex-cap", 4000LL}};
    c.required = {"n", "k", "l"};
    c.doc = {{"n", "universe size"},
             {"k", "subset cardinality"},
             {"l", "forbidden tuple length"},
             {"vertex-cap", "refuse instances with more k-subsets than this"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      FreeSetResult res = largest_plegma_free(
          (int)p.at("n").get<long long>(), (int)p.at("k").get<long long>(),
          (int)p.at("l").get<long long>(), p.at("vertex-cap").get<long long>());
      print_kv("size", std::to_string(res.size));
      for (const FinSubset& m : res.witness)
        std::cout << "  " << m.to_string() << "\n";
      json members = json::array();
      for (const FinSubset& m : res.witness) members.push_back(to_json(m));
      s.artifact(json{{"size", res.size}, {"witness", members}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "ramsey";
    c.name = "density";
    c.help = "Smallest n at which every delta-fraction of [{1..n}]^k contains "
             "a plegma l-tuple, scanned through exact largest-free-set "
             "values.";
    c.defaults = {{"k", 0LL},      {"l", 0LL},
                  {"delta", ""},   {"n-max", 12LL},
                  {"vertex-cap", 4000LL}};
    c.required = {"k", "l", "delta"};
    c.doc = {{"k", "subset cardinality"},
             {"l", "tuple length"},
             {"delta", "density as a rational, e.g. 4/5"},
             {"n-max", "largest universe size to scan"},
             {"vertex-cap", "refuse instances with more k-subsets than this"}};
    c.out_csv = true;
    c.out_json = true;
    c.out_svg = true;
    c.run = [](const json& p, Sinks& s) {
      Rational delta = rational_arg(p.at("delta"), "--delta");
      DensityScanResult res = density_threshold_scan(
          (int)p.at("k").get<long long>(), (int)p.at("l").get<long long>(),
          delta, (int)p.at("n-max").get<long long>(),
          p.at("vertex-cap").get<long long>());
      for (const DensityRow& r : res.rows)
        std::cout << "n=" << r.n << "  subsets=" << r.total
                  << "  largest_free=" << r.largest_free
                  << "  bound=" << r.bound.to_string()
                  << "  dense=" << (r.dense_enough ? "yes" : "no") << "\n";
      print_kv("threshold",
               res.threshold_n ? std::to_string(*res.threshold_n)
                               : "not reached by n-max");
      if (!res.counterexample.empty()) {
        std::string members;
        for (size_t i = 0; i < res.counterexample.size(); ++i)
          members += (i ? " " : "") + res.counterexample[i].to_string();
        print_kv("free witness below threshold", members);
      }
      s.table(density_csv(res));
      s.chart(0, {2}, "largest plegma-free subset");
      json rows = json::array();
      for (const DensityRow& r : res.rows)
        rows.push_back(json{{"n", r.n},
                            {"total", r.total},
                            {"largest_free", r.largest_free},
                            {"bound", r.bound.to_string()},
                            {"dense", r.dense_enough}});
      json cex = json::array();
      for (const FinSubset& m : res.counterexample) cex.push_back(to_json(m));
      s.artifact(json{{"delta", delta.to_string()},
                      {"rows", rows},
                      {"threshold", res.threshold_n ? json(*res.threshold_n)
                                                    : json(nullptr)},
                      {"counterexample", cex}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  // ----- norm --------------------------------------------------------------

  {
    Command c;
    c.group = "norm";
    c.name = "eval";
    c.help = "Evaluate a norm engine on a finitely supported vector. "
             "Engines: l1, l2, linf, c0, lp, summing (integer-indexed); "
             "schreier_plegmatic (subset-indexed, exact partition search); "
             "tsirelson_weighted (integer-indexed, certified enclosure).";
    c.defaults = {{"engine", ""},     {"vec", ""},        {"k", 1LL},
                  {"p", 2.0},         {"preset", "standard"},
                  {"weights", ""},    {"budgets", ""},
                  {"support-cap", 0LL}, {"ops-budget", 4e9}};
    c.required = {"engine", "vec"};
    c.doc = {{"engine", "which norm to evaluate"},
             {"vec",
              "the vector as JSON: [[position, coeff], ...] for integer "
              "indices, [[[subset], coeff], ...] for subset indices; coeffs "
              "are integers or rational strings like \"1/2\""},
             {"k", "admissibility level for schreier_plegmatic (only 1)"},
             {"p", "exponent for the lp engine"},
             {"preset", "weight preset for tsirelson_weighted: standard, "
                        "steep, or bad-budget"},
             {"weights", "custom level weights as a JSON array (with --budgets)"},
             {"budgets", "custom level piece budgets as a JSON array"},
             {"support-cap", "refuse larger supports (0 = engine default)"},
             {"ops-budget", "refuse tsirelson_weighted runs estimated beyond "
                            "this many table operations"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      std::string engine = p.at("engine");
      if (engine == "schreier_plegmatic") {
        require_level_one(p);
        SubsetVec x = subsetvec_arg(p.at("vec"));
        long long cap = p.at("support-cap");
        SchreierNormResult res = schreier_norm(x, cap > 0 ? (int)cap : 12);
        print_kv("engine", "schreier_plegmatic");
        print_kv("value", double_repr(res.value));
        print_kv("square", res.square.to_string());
        std::cout << "witness partition:\n";
        for (size_t i = 0; i < res.partition.size(); ++i) {
          std::cout << "  family " << (i + 1) << ":";
          for (const FinSubset& m : res.partition[i])
            std::cout << " " << m.to_string();
          std::cout << "  mass " << res.masses[i].to_string() << "\n";
        }
        s.artifact(schreier_result_json(x, res));
        return 0;
      }
      if (engine == "tsirelson_weighted") {
        TsirelsonConfig cfg = tsirelson_config_arg(p);
        IntVec x = intvec_arg(p.at("vec"));
        long long cap = p.at("support-cap");
        TsirelsonResult r = tsirelson_norm(x, cfg, cap > 0 ? (int)cap : 600,
                                           p.at("ops-budget").get<double>());
        print_kv("engine", "tsirelson_weighted");
        print_kv("levels", std::to_string(cfg.levels()));
        print_kv("norm", norm_repr(r.as_value()));
        s.artifact(json{{"vector", to_json(x)},
                        {"config", to_json(cfg)},
                        {"lo", r.lo},
                        {"hi", r.hi}});
        return 0;
      }
      std::unique_ptr<NormEngine<int>> eng;
      if (engine == "l1") eng = std::make_unique<L1Engine>();
      else if (engine == "l2") eng = std::make_unique<L2Engine>();
      else if (engine == "linf") eng = std::make_unique<LinfEngine>();
      else if (engine == "c0") eng = std::make_unique<C0Engine>();
      else if (engine == "lp")
        eng = std::make_unique<LpEngine>(p.at("p").get<double>());
      else if (engine == "summing") eng = std::make_unique<SummingEngine>();
      else
        throw InvalidInput("unknown engine '" + engine +
                           "' (l1, l2, linf, c0, lp, summing, "
                           "schreier_plegmatic, tsirelson_weighted)");
      IntVec x = intvec_arg(p.at("vec"));
      NormValue nv = eng->norm(x);
      print_kv("engine", eng->name());
      print_kv("value", norm_repr(nv));
      s.artifact(json{{"vector", to_json(x)},
                      {"engine", eng->name()},
                      {"lo", nv.lo},
                      {"hi", nv.hi}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "norm";
    c.name = "certify";
    c.help = "Produce and re-verify a certificate: the norming functional of "
             "the partition norm, or the split tree behind the weighted "
             "norm's lower bound.";
    c.defaults = {{"engine", ""},  {"vec", ""},     {"k", 1LL},
                  {"preset", "standard"}, {"weights", ""}, {"budgets", ""},
                  {"support-cap", 0LL}};
    c.required = {"engine", "vec"};
    c.doc = {{"engine", "schreier_plegmatic or tsirelson_weighted"},
             {"vec", "the vector as JSON (see norm eval)"},
             {"k", "admissibility level for schreier_plegmatic (only 1)"},
             {"preset", "weight preset for tsirelson_weighted"},
             {"weights", "custom level weights (with --budgets)"},
             {"budgets", "custom level piece budgets"},
             {"support-cap", "refuse larger supports (0 = engine default)"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      std::string engine = p.at("engine");
      long long cap = p.at("support-cap");
      if (engine == "schreier_plegmatic") {
        require_level_one(p);
        SubsetVec x = subsetvec_arg(p.at("vec"));
        DualCertificate cert = norming_functional(x, cap > 0 ? (int)cap : 12);
        std::string why;
        bool ok = verify_certificate(cert, x, &why);
        print_kv("engine", "schreier_plegmatic");
        print_kv("scale (norm squared)", cert.scale.to_string());
        print_kv("families", std::to_string(cert.families.size()));
        print_kv("verified", ok ? "yes" : "no -- " + why);
        s.artifact(json{{"certificate", to_json(cert)}, {"verified", ok}});
        return ok ? 0 : 1;
      }
      if (engine == "tsirelson_weighted") {
        TsirelsonConfig cfg = tsirelson_config_arg(p);
        IntVec x = intvec_arg(p.at("vec"));
        TsirelsonCertificate cert =
            tsirelson_certificate(x, cfg, cap > 0 ? (int)cap : 150);
        std::string why;
        bool ok = verify_tsirelson_certificate(cert, x, &why);
        print_kv("engine", "tsirelson_weighted");
        print_kv("certified lower bound", double_repr(cert.lo));
        print_kv("nodes", std::to_string(cert.nodes.size()));
        print_kv("verified", ok ? "yes" : "no -- " + why);
        s.artifact(json{{"certificate", to_json(cert)}, {"verified", ok}});
        return ok ? 0 : 1;
      }
      throw InvalidInput("--engine must be schreier_plegmatic or "
                         "tsirelson_weighted");
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "norm";
    c.name = "selfcheck";
    c.help = "Run the norm-related subset of the self-check suite.";
    c.defaults = {{"quick", false}};
    c.doc = {{"quick", "trimmed sub-second variant of each check"}};
    c.run = [](const json& p, Sinks&) {
      std::vector<selfcheck::Check> batch;
      for (const auto& ch : selfcheck::checks())
        if (std::string(ch.group) == "norm") batch.push_back(ch);
      return run_selfcheck_batch(std::move(batch), p.at("quick").get<bool>());
    };
    cmds.push_back(std::move(c));
  }

  // ----- seq ---------------------------------------------------------------

  {
    Command c;
    c.group = "seq";
    c.name = "gen";
    c.help = "Evaluate a named generator at one index and report the vector "
             "with its ambient norm.";
    c.defaults = {{"name", "basis"}, {"k", 2LL}, {"at", ""},
                  {"bound-horizon", 0LL}};
    c.required = {"at"};
    c.doc = {{"name", std::string("one of: ") + kGeneratorList},
             {"k", "arity of the subset basis (the other generators have "
                   "fixed arity)"},
             {"at", "index subset as JSON, e.g. [2,5]"},
             {"bound-horizon",
              "if positive, also report the largest ambient norm over "
              "indices inside {1..horizon}"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      FinSubset at = subset_arg(p.at("at"), "--at");
      long long horizon = p.at("bound-horizon");
      return with_generator(
          p.at("name"), (int)p.at("k").get<long long>(), [&](const auto& x) {
            auto v = x(at);
            NormValue nv = x.engine->norm(v);
            print_kv("generator", x.name);
            print_kv("arity", std::to_string(x.k));
            print_kv("index", at.to_string());
            print_kv("vector", to_json(v).dump());
            print_kv("norm", norm_repr(nv));
            json out{{"generator", x.name},
                     {"arity", x.k},
                     {"index", to_json(at)},
                     {"vector", to_json(v)},
                     {"norm_lo", nv.lo},
                     {"norm_hi", nv.hi}};
            if (horizon > 0) {
              double bound = sampled_bound(x, (int)horizon);
              print_kv("sampled bound", double_repr(bound));
              out["sampled_bound"] = bound;
            }
            s.artifact(out);
            return 0;
          });
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "seq";
    c.name = "compose";
    c.help = "Compose the doubling block pattern with an inner sequence and "
             "evaluate the result at one index.";
    c.defaults = {{"inner", "diagonal-pairs"}, {"inner-k", 1LL},
                  {"at", ""},                  {"validation-horizon", 8LL}};
    c.required = {"at"};
    c.doc = {{"inner", "inner sequence: basis or diagonal-pairs"},
             {"inner-k", "arity of the inner subset basis"},
             {"at", "index of the composed sequence (first entry feeds the "
                    "pattern, the rest the inner sequence)"},
             {"validation-horizon",
              "sample horizon for the block-order check of the pattern"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      std::string inner = p.at("inner");
      if (inner != "basis" && inner != "diagonal-pairs")
        throw InvalidInput("--inner must be basis or diagonal-pairs");
      KSeq<FinSubset> x =
          inner == "basis"
              ? basis_seq((int)p.at("inner-k").get<long long>(),
                          std::make_shared<SchreierEngine>())
              : diagonal_pairs_seq();
      KSeq<FinSubset> z =
          compose_seq(x, doubling_pattern(), 1,
                      (int)p.at("validation-horizon").get<long long>());
      FinSubset at = subset_arg(p.at("at"), "--at");
      SubsetVec v = z(at);
      NormValue nv = z.engine->norm(v);
      print_kv("composed", z.name);
      print_kv("arity", std::to_string(z.k));
      print_kv("index", at.to_string());
      print_kv("vector", to_json(v).dump());
      print_kv("norm", norm_repr(nv));
      s.artifact(json{{"composed", z.name},
                      {"arity", z.k},
                      {"index", to_json(at)},
                      {"vector", to_json(v)},
                      {"norm_lo", nv.lo},
                      {"norm_hi", nv.hi}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "seq";
    c.name = "renorm";
    c.help = "Averaged renorming: evaluate the weighted average of "
             "interleaved translates, scaled to keep the lower estimate "
             "above 1 - defect.";
    c.defaults = {{"inner", "basis"},   {"inner-k", 2LL},  {"weights", ""},
                  {"c", "1"},           {"slack", "1/16"}, {"defect", "1/4"},
                  {"n", 60LL},          {"at", ""}};
    c.required = {"weights", "at"};
    c.doc = {{"inner", "inner sequence: basis or summing"},
             {"inner-k", "arity of the inner subset basis"},
             {"weights",
              "averaging weights as a JSON array of rationals with absolute "
              "values summing to 1, e.g. [\"1/2\",\"1/2\"]"},
             {"c", "lower norm estimate for the averaged blocks (rational)"},
             {"slack", "additive slack around c (rational)"},
             {"defect", "target defect in (0,1) (rational)"},
             {"n", "universe size {1..n} supplying the translates"},
             {"at", "index subset as JSON"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      RenormParams params;
      params.b = rational_list_arg(p.at("weights"), "--weights");
      params.c = rational_arg(p.at("c"), "--c");
      params.eps_prime = rational_arg(p.at("slack"), "--slack");
      params.eps = rational_arg(p.at("defect"), "--defect");
      Universe m = Universe::initial_segment((int)p.at("n").get<long long>());
      FinSubset at = subset_arg(p.at("at"), "--at");
      int pcount = (int)params.b.size();

      std::string inner = p.at("inner");
      if (inner != "basis" && inner != "summing")
        throw InvalidInput("--inner must be basis or summing");

      auto report = [&](const auto& y) {
        auto v = y(at);
        NormValue nv = y.engine->norm(v);
        PlegmaTuple tuples = renorm_inner_tuples(pcount, at, m);
        print_kv("renormed", y.name);
        print_kv("index", at.to_string());
        print_kv("vector", to_json(v).dump());
        print_kv("norm", norm_repr(nv));
        print_kv("interleaved translates", tuple_repr(tuples));
        s.artifact(json{{"renormed", y.name},
                        {"index", to_json(at)},
                        {"vector", to_json(v)},
                        {"norm_lo", nv.lo},
                        {"norm_hi", nv.hi},
                        {"translates", to_json(tuples)}});
        return 0;
      };
      if (inner == "basis")
        return report(l1_renorm(
            basis_seq((int)p.at("inner-k").get<long long>(),
                      std::make_shared<SchreierEngine>()),
            params, m));
      return report(l1_renorm(summing_2seq(), params, m));
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "seq";
    c.name = "ctd-extract";
    c.help = "Generate a layered tree map and extract its canonical tree "
             "decomposition, reporting per-branch errors against the "
             "tolerance schedule.";
    c.defaults = {{"k", 2LL},      {"n", 6LL},     {"stride", 40LL},
                  {"tail", 8LL},   {"seed", 1LL},  {"rogue", 0LL},
                  {"target", 0LL}, {"engine", "l1"}};
    c.doc = {{"k", "branch length (node arity of the tree)"},
             {"n", "universe size of the generated map"},
             {"stride", "coordinate gap between node humps"},
             {"tail", "length of the geometric tail after each hump"},
             {"seed", "generator seed"},
             {"rogue", "if positive, misplace the hump of nodes whose "
                       "maximum equals this element"},
             {"target", "requested size of the thinned universe (default n)"},
             {"engine", "ambient norm for compression errors: l1 or l2"}};
    c.out_csv = true;
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      LayeredTreeParams lp;
      lp.k = (int)p.at("k").get<long long>();
      lp.universe_size = (int)p.at("n").get<long long>();
      lp.stride = (int)p.at("stride").get<long long>();
      lp.tail_length = (int)p.at("tail").get<long long>();
      lp.seed = (uint64_t)p.at("seed").get<long long>();
      long long rogue = p.at("rogue");
      if (rogue > 0) lp.rogue = (int)rogue;
      TreeMap tm = layered_tree_map(lp);
      tm.validate();

      std::unique_ptr<NormEngine<int>> eng;
      std::string ename = p.at("engine");
      if (ename == "l1") eng = std::make_unique<L1Engine>();
      else if (ename == "l2") eng = std::make_unique<L2Engine>();
      else throw InvalidInput("--engine must be l1 or l2");

      ExtractParams params;
      long long target = p.at("target");
      params.target_size = target > 0 ? (int)target : lp.universe_size;
      ExtractResult res = canonical_tree_extract(tm, *eng, params);

      print_kv("complete", res.complete ? "yes" : "no");
      print_kv("universe", universe_repr(res.ctd.l));
      print_kv("pieces", std::to_string(res.ctd.y.size()));
      std::vector<std::vector<std::string>> rows;
      json errs = json::array();
      for (const BranchError& e : res.branch_errors) {
        rows.push_back({e.s.to_string(), e.claimed.to_string(),
                        double_repr(e.achieved)});
        errs.push_back(json{{"branch", to_json(e.s)},
                            {"claimed", e.claimed.to_string()},
                            {"achieved", e.achieved}});
      }
      print_kv("branches checked", std::to_string(res.branch_errors.size()));
      s.table(csv_table({"branch", "claimed", "achieved"}, rows));
      s.artifact(json{{"complete", res.complete},
                      {"branch_errors", errs},
                      {"ctd", to_json(res.ctd)}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "seq";
    c.name = "ctd-verify";
    c.help = "Re-verify a stored canonical tree decomposition: branch/pair "
             "conditions and the interval-restriction identity across plegma "
             "tuples.";
    c.defaults = {{"file", ""}, {"tuple-cap", 3LL}};
    c.required = {"file"};
    c.doc = {{"file", "JSON file holding the decomposition (either the "
                      "decomposition itself or the ctd-extract artifact)"},
             {"tuple-cap", "check plegma tuples up to this length"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      json j = json::parse(read_file(p.at("file")));
      if (j.contains("ctd")) j = j.at("ctd");
      CanonicalTreeDecomposition ctd = ctd_from_json(j);
      CtdReport rep =
          verify_ctd(ctd, (int)p.at("tuple-cap").get<long long>());
      print_kv("verified", rep.ok ? "yes" : "no");
      if (!rep.ok) print_kv("violation", rep.violation);
      s.artifact(json{{"verified", rep.ok}, {"violation", rep.violation}});
      return rep.ok ? 0 : 1;
    };
    cmds.push_back(std::move(c));
  }

  // ----- sm ----------------------------------------------------------------

  const char* kGridDoc = "coefficient net: sup (unit cube corners and grid) "
                         "or l1 (unit sphere of the absolute sum)";

  {
    Command c;
    c.group = "sm";
    c.name = "estimate";
    c.help = "Empirical spreading-model table: norms of coefficient "
             "combinations along admissible plegma tuples, reported as "
             "min/max/mean with a conservative envelope.";
    c.defaults = {{"gen", "basis"},      {"k", 2LL},
                  {"l", 0LL},            {"m", 0LL},
                  {"horizon", 14LL},     {"grid", "sup"},
                  {"grid-res", 2LL},     {"mode", "exhaustive"},
                  {"seed", 1LL},         {"samples", 200LL},
                  {"tuple-cap", 200000LL}};
    c.required = {"l"};
    c.doc = {{"gen", std::string("generator: ") + kGeneratorList},
             {"k", "arity of the subset basis"},
             {"l", "admissibility level (tuple entries start at the l-th "
                   "universe element)"},
             {"m", "combination length (default: l)"},
             {"horizon", "tuple entries stay below this"},
             {"grid", kGridDoc},
             {"grid-res", "net resolution (denominator of the grid step)"},
             {"mode", "exhaustive or sampled tuple enumeration"},
             {"seed", "sampling seed (sampled mode)"},
             {"samples", "tuples to draw (sampled mode)"},
             {"tuple-cap", "refuse exhaustive runs beyond this many tuples"}};
    c.out_csv = true;
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      long long l = p.at("l");
      long long mlen = p.at("m");
      if (mlen == 0) mlen = l;
      if (l < 1 || mlen < 1) throw InvalidInput("--l and --m must be positive");
      SMOptions opt;
      opt.horizon = (int)p.at("horizon").get<long long>();
      std::string mode = p.at("mode");
      if (mode == "exhaustive") opt.mode = SampleMode::kExhaustive;
      else if (mode == "sampled") opt.mode = SampleMode::kSampled;
      else throw InvalidInput("--mode must be exhaustive or sampled");
      opt.seed = (uint64_t)p.at("seed").get<long long>();
      opt.samples = p.at("samples").get<long long>();
      opt.tuple_cap = p.at("tuple-cap").get<long long>();

      std::string grid_name = p.at("grid");
      std::vector<std::vector<Rational>> grid;
      if (grid_name == "sup")
        grid = sup_ball_grid((int)mlen, (int)p.at("grid-res").get<long long>());
      else if (grid_name == "l1")
        grid = l1_sphere_grid((int)mlen, (int)p.at("grid-res").get<long long>());
      else throw InvalidInput("--grid must be sup or l1");

      Universe m_univ = Universe::initial_segment(opt.horizon);
      return with_generator(
          p.at("gen"), (int)p.at("k").get<long long>(), [&](const auto& x) {
            SMEstimate est = empirical_sm(x, m_univ, (int)l, (int)mlen, grid, opt);
            print_kv("generator", x.name);
            print_kv("tuples", std::to_string(est.tuple_count));
            std::string csv = sm_estimate_csv(est);
            std::cout << csv;
            s.table(csv);
            json rows = json::array();
            for (const CoeffStats& r : est.rows) {
              json coeffs = json::array();
              for (const Rational& a : r.coeffs) coeffs.push_back(a.to_string());
              rows.push_back(json{{"coeffs", coeffs},
                                  {"min", r.min_value},
                                  {"max", r.max_value},
                                  {"mean", r.mean_value},
                                  {"env_lo", r.env_lo},
                                  {"env_hi", r.env_hi},
                                  {"count", r.count}});
            }
            s.artifact(json{{"generator", x.name},
                            {"l", est.l},
                            {"m", est.m},
                            {"tuples", est.tuple_count},
                            {"rows", rows}});
            return 0;
          });
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "sm";
    c.name = "stabilize";
    c.help = "Thin the universe until empirical widths fall below the "
             "per-level targets (finite subsequence-extraction analogue).";
    c.defaults = {{"gen", "basis"},  {"k", 2LL},       {"l", 0LL},
                  {"delta", "0.5"},  {"horizon", 30LL}, {"net-res", 2LL}};
    c.required = {"l"};
    c.doc = {{"gen", std::string("generator: ") + kGeneratorList},
             {"k", "arity of the subset basis"},
             {"l", "stabilize levels 1..l"},
             {"delta", "width target: a number (used for every level) or a "
                       "JSON array with one entry per level"},
             {"horizon", "universe size before thinning"},
             {"net-res", "coefficient net resolution"}};
    c.out_csv = true;
    c.out_json = true;
    c.out_svg = true;
    c.run = [](const json& p, Sinks& s) {
      long long l = p.at("l");
      if (l < 1) throw InvalidInput("--l must be positive");
      std::string dtext = p.at("delta");
      std::vector<double> deltas;
      if (!dtext.empty() && dtext.front() == '[') {
        for (const auto& e : parse_json_text(dtext, "--delta"))
          deltas.push_back(e.get<double>());
      } else {
        deltas.assign((size_t)l, std::stod(dtext));
      }
      SMOptions opt;
      opt.horizon = (int)p.at("horizon").get<long long>();
      return with_generator(
          p.at("gen"), (int)p.at("k").get<long long>(), [&](const auto& x) {
            StabilizeResult res = sm_stabilize(
                x, deltas, (int)l, opt,
                (int)p.at("net-res").get<long long>());
            print_kv("generator", x.name);
            print_kv("complete", res.complete ? "yes" : "no");
            print_kv("universe", universe_repr(res.m));
            for (const StabilizeRow& r : res.rows)
              std::cout << "level " << r.l << "  width "
                        << double_repr(r.worst_width) << "  target "
                        << double_repr(r.delta) << "  "
                        << (r.stabilized ? "stabilized" : "NOT stabilized")
                        << "\n";
            s.table(stabilize_csv(res));
            s.chart(0, {1, 2}, "empirical width per level");
            json rows = json::array();
            for (const StabilizeRow& r : res.rows)
              rows.push_back(json{{"l", r.l},
                                  {"worst_width", r.worst_width},
                                  {"delta", r.delta},
                                  {"stabilized", r.stabilized},
                                  {"universe_size", r.universe_size}});
            s.artifact(json{{"generator", x.name},
                            {"complete", res.complete},
                            {"universe", to_json(res.m)},
                            {"rows", rows}});
            return 0;
          });
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "sm";
    c.name = "l1";
    c.help = "Empirical lower l1 constant: the worst combination norm over "
             "the l1-sphere net at one level.";
    c.defaults = {{"gen", "basis"}, {"k", 2LL}, {"l", 0LL},
                  {"grid-res", 3LL}, {"horizon", 14LL}};
    c.required = {"l"};
    c.doc = {{"gen", std::string("generator: ") + kGeneratorList},
             {"k", "arity of the subset basis"},
             {"l", "level (combination length)"},
             {"grid-res", "l1-sphere net resolution"},
             {"horizon", "tuple entries stay below this"}};
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      SMOptions opt;
      opt.horizon = (int)p.at("horizon").get<long long>();
      return with_generator(
          p.at("gen"), (int)p.at("k").get<long long>(), [&](const auto& x) {
            L1ConstantResult res = l1_constant(
                x, Universe::initial_segment(opt.horizon),
                (int)p.at("l").get<long long>(),
                (int)p.at("grid-res").get<long long>(), opt);
            print_kv("generator", x.name);
            print_kv("lower l1 constant", double_repr(res.value));
            print_kv("witness coefficients", coeffs_repr(res.witness));
            print_kv("tuples", std::to_string(res.tuple_count));
            json witness = json::array();
            for (const Rational& a : res.witness)
              witness.push_back(a.to_string());
            s.artifact(json{{"generator", x.name},
                            {"value", res.value},
                            {"witness", witness},
                            {"tuples", res.tuple_count}});
            return 0;
          });
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "sm";
    c.name = "split";
    c.help = "Split diagnostics for a pointwise sum of sequences: l1 "
             "constants of the parts, the pointwise triangle inequality, and "
             "exact cancellation of the constant part on zero-sum rows.";
    c.defaults = {{"scenario", "unit-plus-constant"},
                  {"l", 2LL},
                  {"grid-res", 2LL},
                  {"horizon", 8LL},
                  {"constant-at", 50LL},
                  {"index-n", 10LL}};
    c.doc = {{"scenario", "built-in split: unit-plus-constant (unit vectors "
                          "plus a constant coordinate)"},
             {"l", "level (combination length)"},
             {"grid-res", "coefficient net resolution"},
             {"horizon", "tuple entries stay below this"},
             {"constant-at", "coordinate carrying the constant part"},
             {"index-n", "index universe size"}};
    c.out_csv = true;
    c.out_json = true;
    c.run = [](const json& p, Sinks& s) {
      if (p.at("scenario").get<std::string>() != "unit-plus-constant")
        throw InvalidInput("--scenario must be unit-plus-constant");
      int constant_at = (int)p.at("constant-at").get<long long>();

      KSeq<int> x1;
      x1.k = 1;
      x1.name = "unit";
      x1.engine = std::make_shared<C0Engine>();
      x1.at = [](const FinSubset& t) { return IntVec::unit(t.at1(1)); };
      KSeq<int> x2 = x1;
      x2.name = "constant";
      x2.at = [constant_at](const FinSubset&) {
        return IntVec::unit(constant_at);
      };
      KSeq<int> whole = x1;
      whole.name = "whole";
      auto f1 = x1.at;
      auto f2 = x2.at;
      whole.at = [f1, f2](const FinSubset& t) { return f1(t) + f2(t); };

      SMOptions opt;
      opt.horizon = (int)p.at("horizon").get<long long>();
      SplitReport rep = splitting_check(
          whole, x1, x2,
          Universe::initial_segment((int)p.at("index-n").get<long long>()),
          (int)p.at("l").get<long long>(),
          (int)p.at("grid-res").get<long long>(), opt);

      print_kv("whole lower l1 constant", double_repr(rep.whole.value));
      print_kv("part1 lower l1 constant", double_repr(rep.part1.value));
      print_kv("part2 lower l1 constant", double_repr(rep.part2.value));
      print_kv("triangle inequality", rep.triangle_ok ? "holds" : "VIOLATED");
      if (rep.zero_sum_exact)
        print_kv("zero-sum cancellation",
                 *rep.zero_sum_exact ? "exact" : "NOT exact");
      std::vector<std::vector<std::string>> rows;
      json jrows = json::array();
      for (const SplitTriangleRow& r : rep.rows) {
        rows.push_back({coeffs_repr(r.coeffs), double_repr(r.whole_min),
                        double_repr(r.part1_min), double_repr(r.part2_min),
                        r.triangle_ok ? "yes" : "no"});
        jrows.push_back(json{{"coeffs", coeffs_repr(r.coeffs)},
                             {"whole_min", r.whole_min},
                             {"part1_min", r.part1_min},
                             {"part2_min", r.part2_min},
                             {"triangle_ok", r.triangle_ok}});
      }
      s.table(csv_table(
          {"coeffs", "whole_min", "part1_min", "part2_min", "triangle"},
          rows));
      s.artifact(json{{"triangle_ok", rep.triangle_ok},
                      {"zero_sum_exact",
                       rep.zero_sum_exact ? json(*rep.zero_sum_exact)
                                          : json(nullptr)},
                      {"rows", jrows}});
      return rep.triangle_ok ? 0 : 1;
    };
    cmds.push_back(std::move(c));
  }

  {
    Command c;
    c.group = "sm";
    c.name = "cesaro";
    c.help = "Scan norms of uniform averages over growing index families; "
             "with product functionals the scan also reports the exact "
             "functional values and their closed form n^(k+1)/C((k+2)n,k+1).";
    c.defaults = {{"gen", "basis"},    {"k", 1LL},
                  {"n-min", 1LL},      {"n-max", 0LL},
                  {"functionals", "product"}};
    c.required = {"n-max"};
    c.doc = {{"gen", "basis (subset basis under the partition norm) or "
                     "summing (interval vectors, norm scan only)"},
             {"k", "functional exponent: the basis has arity k+1 and the "
                   "closed form is n^(k+1)/C((k+2)n, k+1)"},
             {"n-min", "first scan stage"},
             {"n-max", "last scan stage"},
             {"functionals", "product (pair each mean with its product-family "
                             "functional) or none (norm scan only)"}};
    c.out_csv = true;
    c.out_json = true;
    c.out_svg = true;
    c.run = [](const json& p, Sinks& s) {
      long long n_min = p.at("n-min"), n_max = p.at("n-max");
      std::string functionals = p.at("functionals");
      if (functionals != "product" && functionals != "none")
        throw InvalidInput("--functionals must be product or none");
      std::string gen = p.at("gen");

      CesaroScan scan;
      std::string gen_name;
      if (gen == "basis") {
        int r = (int)p.at("k").get<long long>() + 1;
        if (r < 2) throw InvalidInput("--k must be at least 1");
        KSeq<FinSubset> y = basis_seq(r, std::make_shared<SchreierEngine>());
        gen_name = y.name;
        Universe m = Universe::initial_segment((int)((r + 1) * n_max));
        scan = cesaro_scan(y, m, (int)n_min, (int)n_max,
                           functionals == "product");
      } else if (gen == "summing") {
        if (functionals == "product")
          throw InvalidInput(
              "--functionals product needs the subset basis; use "
              "--functionals none with the summing generator");
        KSeq<int> y = summing_2seq();
        gen_name = y.name;
        Universe m = Universe::initial_segment((int)std::max(n_max, 2LL));
        scan = cesaro_scan(y, m, (int)std::max(n_min, 2LL), (int)n_max);
      } else {
        throw InvalidInput("--gen must be basis or summing");
      }

      print_kv("generator", gen_name);
      if (functionals == "product")
        print_kv("limit of the closed form", scan.limit_constant.to_string());
      for (const CesaroRow& r : scan.rows) {
        std::cout << "n=" << r.n << "  mean over " << r.mean_over
                  << " elements";
        if (r.norm_lo)
          std::cout << "  norm " << norm_repr(NormValue{*r.norm_lo, *r.norm_hi});
        else
          std::cout << "  norm skipped (scale)";
        if (r.functional)
          std::cout << "  functional " << r.functional->to_string();
        if (r.analytic) std::cout << "  closed form " << r.analytic->to_string();
        std::cout << "\n";
      }
      s.table(cesaro_csv(scan));
      s.chart(0, {2, 3}, "norms of uniform averages");
      json rows = json::array();
      for (const CesaroRow& r : scan.rows)
        rows.push_back(json{
            {"n", r.n},
            {"mean_over", r.mean_over},
            {"norm_lo", r.norm_lo ? json(*r.norm_lo) : json(nullptr)},
            {"norm_hi", r.norm_hi ? json(*r.norm_hi) : json(nullptr)},
            {"functional",
             r.functional ? json(r.functional->to_string()) : json(nullptr)},
            {"analytic",
             r.analytic ? json(r.analytic->to_string()) : json(nullptr)}});
      s.artifact(json{{"generator", gen_name},
                      {"limit_constant", scan.limit_constant.to_string()},
                      {"rows", rows}});
      return 0;
    };
    cmds.push_back(std::move(c));
  }

  // ----- selftest ------------------------------------------------------------

  {
    Command c;
    c.group = "";
    c.name = "selftest";
    c.help = "Run the full self-check suite (every shipped guarantee plus "
             "the config-validation guard) and print one PASS/FAIL line per "
             "check.";
    c.defaults = {{"quick", false}};
    c.doc = {{"quick", "trimmed sub-second variant of each check"}};
    c.run = [](const json& p, Sinks&) {
      std::vector<selfcheck::Check> batch = selfcheck::checks();
      batch.push_back({13, "norm", "over-budget weight presets are refused",
                       selfcheck::check_weight_budget_guard, 0.0});
      return run_selfcheck_batch(std::move(batch), p.at("quick").get<bool>());
    };
    cmds.push_back(std::move(c));
  }

  return cmds;
}

// ---------------------------------------------------------------------------
// Config mode: the same commands driven from a JSON experiment description.
// Schema: {"command": "<group> <name>", "parameters": {...}, "outputs":
// {"csv"|"json"|"svg"|"manifest": path}, "seed": N}. A manifest echoing the
// fully resolved configuration is written next to the config (or where
// outputs.manifest points) before the command runs.
// ---------------------------------------------------------------------------

json coerce_param(const std::string& key, const json& provided,
                  const json& def) {
  if (def.is_string()) {
    if (provided.is_string()) return provided;
    // Structured parameters may be written directly as JSON in a config
    // file; they are re-serialized into the textual form the option takes.
    if (provided.is_array() || provided.is_object() || provided.is_number())
      return provided.dump();
    throw InvalidInput("config: parameter '" + key + "' must be a string");
  }
  if (def.is_boolean()) {
    if (provided.is_boolean()) return provided;
    throw InvalidInput("config: parameter '" + key + "' must be a boolean");
  }
  if (def.is_number_float()) {
    if (provided.is_number()) return provided.get<double>();
    throw InvalidInput("config: parameter '" + key + "' must be a number");
  }
  if (provided.is_number_integer()) return provided;
  throw InvalidInput("config: parameter '" + key + "' must be an integer");
}

std::string default_manifest_path(const std::string& config_path) {
  std::string stem = config_path;
  if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json")
    stem.resize(stem.size() - 5);
  return stem + ".manifest.json";
}

int run_config(const std::string& path, const std::vector<Command>& cmds) {
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InvalidInput("config: not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object())
    throw InvalidInput("config: the top level must be an object");
  for (const auto& [key, _] : cfg.items())
    if (key != "command" && key != "parameters" && key != "outputs" &&
        key != "seed")
      throw InvalidInput("config: unknown key '" + key + "'");
  if (!cfg.contains("command") || !cfg.at("command").is_string())
    throw InvalidInput("config: need a string 'command'");

  std::string name = cfg.at("command");
  std::replace(name.begin(), name.end(), '.', ' ');
  const Command* cmd = nullptr;
  for (const Command& c : cmds)
    if (c.full_name() == name) {
      cmd = &c;
      break;
    }
  if (cmd == nullptr)
    throw InvalidInput("config: unknown command '" + name + "'");

  json params = cfg.value("parameters", json::object());
  if (!params.is_object())
    throw InvalidInput("config: 'parameters' must be an object");
  json resolved = cmd->defaults;
  for (const auto& [key, value] : params.items()) {
    if (!resolved.contains(key))
      throw InvalidInput("config: unknown parameter '" + key + "' for '" +
                         name + "'");
    resolved[key] = coerce_param(key, value, cmd->defaults.at(key));
  }
  for (const std::string& r : cmd->required)
    if (!params.contains(r))
      throw InvalidInput("config: missing required parameter '" + r + "'");

  if (cfg.contains("seed")) {
    if (!cfg.at("seed").is_number_integer())
      throw InvalidInput("config: 'seed' must be an integer");
    if (!cmd->defaults.contains("seed"))
      throw InvalidInput("config: '" + name + "' takes no seed");
    if (params.contains("seed") && params.at("seed") != cfg.at("seed"))
      throw InvalidInput("config: seed given twice with different values");
    resolved["seed"] = cfg.at("seed");
  }

  json outs = cfg.value("outputs", json::object());
  if (!outs.is_object())
    throw InvalidInput("config: 'outputs' must be an object");
  Sinks sinks;
  for (const auto& [key, value] : outs.items()) {
    if (!value.is_string())
      throw InvalidInput("config: output path '" + key + "' must be a string");
    if (key == "csv") {
      if (!cmd->out_csv)
        throw InvalidInput("config: '" + name + "' produces no table");
      sinks.csv_path = value.get<std::string>();
    } else if (key == "json") {
      if (!cmd->out_json)
        throw InvalidInput("config: '" + name + "' produces no JSON artifact");
      sinks.json_path = value.get<std::string>();
    } else if (key == "svg") {
      if (!cmd->out_svg)
        throw InvalidInput("config: '" + name + "' produces no chart");
      sinks.svg_path = value.get<std::string>();
    } else if (key != "manifest") {
      throw InvalidInput("config: unknown output kind '" + key + "'");
    }
  }

  std::string manifest_path =
      outs.value("manifest", default_manifest_path(path));
  outs["manifest"] = manifest_path;
  json manifest{{"command", name}, {"parameters", resolved}, {"outputs", outs}};
  if (resolved.contains("seed")) manifest["seed"] = resolved.at("seed");
  write_file(manifest_path, manifest.dump(2) + "\n");

  int rc = cmd->run(resolved, sinks);
  sinks.finish();
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::vector<Command> cmds = build_commands();

  CLI::App app{
      "plegma-lab: combinatorics of interlaced subset tuples, exact partition "
      "and weighted norms, spreading-model estimation, and tree "
      "decompositions. Deterministic output; exit codes: 0 success, 1 failed "
      "check, 2 invalid input, 3 refused scale."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "plegma-lab 1.0");

  const Command* selected = nullptr;
  json cli_params = json::object();
  Sinks sinks;
  std::string config_path;
  bool config_mode = false;

  std::map<std::string, CLI::App*> groups;
  auto group_help = [](const std::string& g) -> std::string {
    if (g == "plegma") return "Interlaced tuple combinatorics";
    if (g == "ramsey") return "Colorings, free sets, and density thresholds";
    if (g == "norm") return "Norm engines, certificates, and their checks";
    if (g == "seq") return "Generators, composition, renorming, and tree "
                           "decompositions";
    if (g == "sm") return "Spreading-model estimation and diagnostics";
    return g;
  };

  for (const Command& c : cmds) {
    CLI::App* parent = &app;
    if (!c.group.empty()) {
      auto it = groups.find(c.group);
      if (it == groups.end()) {
        parent = app.add_subcommand(c.group, group_help(c.group));
        parent->require_subcommand(1);
        groups.emplace(c.group, parent);
      } else {
        parent = it->second;
      }
    }
    CLI::App* sub = parent->add_subcommand(c.name, c.help);
    sub->callback([&selected, cptr = &c]() { selected = cptr; });

    for (const auto& [key, defval] : c.defaults.items()) {
      std::string flag = "--" + key;
      std::string help = c.doc.count(key) ? c.doc.at(key) : "";
      bool required = c.required.count(key) > 0;
      CLI::Option* opt = nullptr;
      if (defval.is_boolean()) {
        opt = sub->add_flag_callback(
            flag, [&cli_params, key]() { cli_params[key] = true; }, help);
      } else if (defval.is_number_float()) {
        opt = sub->add_option_function<double>(
            flag, [&cli_params, key](double v) { cli_params[key] = v; }, help);
        if (!required) opt->default_str(double_repr(defval.get<double>()));
      } else if (defval.is_number_integer()) {
        opt = sub->add_option_function<long long>(
            flag, [&cli_params, key](long long v) { cli_params[key] = v; },
            help);
        if (!required)
          opt->default_str(std::to_string(defval.get<long long>()));
      } else {
        opt = sub->add_option_function<std::string>(
            flag,
            [&cli_params, key](const std::string& v) { cli_params[key] = v; },
            help);
        if (!required && !defval.get<std::string>().empty())
          opt->default_str(defval.get<std::string>());
      }
      if (required) opt->required();
    }
    if (c.out_csv)
      sub->add_option_function<std::string>(
          "--csv", [&sinks](const std::string& v) { sinks.csv_path = v; },
          "write the result table to this file");
    if (c.out_json)
      sub->add_option_function<std::string>(
          "--json", [&sinks](const std::string& v) { sinks.json_path = v; },
          "write the JSON artifact to this file");
    if (c.out_svg)
      sub->add_option_function<std::string>(
          "--svg", [&sinks](const std::string& v) { sinks.svg_path = v; },
          "write a line chart (derived from the CSV) to this file");
  }

  CLI::App* runcmd = app.add_subcommand(
      "run", "Execute an experiment description: the named command with its "
             "parameters, outputs, and seed, echoed into a manifest");
  runcmd
      ->add_option("--config", config_path,
                   "experiment description (JSON file)")
      ->required();
  runcmd->callback([&config_mode]() { config_mode = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (config_mode) return run_config(config_path, cmds);
    if (selected == nullptr) return 2;
    json resolved = selected->defaults;
    for (const auto& [key, value] : cli_params.items()) resolved[key] = value;
    int rc = selected->run(resolved, sinks);
    sinks.finish();
    return rc;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ScaleRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
