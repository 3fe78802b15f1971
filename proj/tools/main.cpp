#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "census.hpp"
#include "feynred/errors.hpp"
#include "feynred/graph_io.hpp"
#include "feynred/minors.hpp"
#include "feynred/reduction.hpp"
#include "feynred/symanzik.hpp"

namespace {

using namespace feynred;

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

struct Globals {
  std::size_t budget = 12;
  unsigned degree_budget = 24;
  unsigned workers = 1;
  std::string cache_dir;
  bool keep_constants = false;
  bool strict_brackets = false;
  std::string mode = "compat";
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ReductionOptions reduction_options(const Globals& g) {
  ReductionOptions o;
  o.max_variables = g.budget;
  o.factor_budget.max_total_degree = g.degree_budget;
  o.workers = g.workers;
  o.cache_dir = g.cache_dir;
  o.keep_constants = g.keep_constants;
  o.strict_brackets = g.strict_brackets;
  o.fubini = g.mode == "fubini";
  return o;
}

struct Loaded {
  GraphFile file;
  RingPtr ring;
  Polynomial psi, phi;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.file = read_graph_file(path);
  l.ring = symanzik_ring(l.file.graph, l.file.kinematics);
  l.psi = first_symanzik(l.file.graph, l.ring);
  l.phi = second_symanzik(l.file.graph, l.file.kinematics, l.ring);
  return l;
}

// "s_1_2=1,s_1_3=-2/3"
Polynomial substitute_all(Polynomial p, const std::string& spec) {
  for (const auto& item : split(spec, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("bad substitution '" + item + "'");
    VarId v = p.ring()->at(item.substr(0, eq));
    if (p.ring()->variable(v).kind != VariableKind::kKinematic) {
      throw InvalidArgument("only kinematic symbols can be substituted: " + item.substr(0, eq));
    }
    mpq_class value;
    if (value.set_str(item.substr(eq + 1), 10) != 0) throw InvalidArgument("bad value in '" + item + "'");
    value.canonicalize();
    p = substitute(p, v, value);
  }
  return p;
}

std::string names(const RingPtr& ring, const std::vector<VarId>& vars) {
  std::string out;
  for (VarId v : vars) out += (out.empty() ? "" : ",") + ring->variable(v).name;
  return out;
}

int run_symanzik(const std::string& path, const std::string& set) {
  Loaded l = load(path);
  if (set != "phi") std::cout << "psi: " << l.psi.to_string() << '\n';
  if (set != "psi") std::cout << "phi: " << l.phi.to_string() << '\n';
  return kOk;
}

int run_reduce(const std::string& path, const Globals& g, const std::string& set, const std::string& order_text,
               const std::string& subst) {
  Loaded l = load(path);
  std::vector<Polynomial> polys;
  if (set != "phi") polys.push_back(l.psi);
  if (set != "psi") polys.push_back(l.phi);
  for (auto& p : polys) p = substitute_all(p, subst);
  const auto vars = l.ring->of_kind(VariableKind::kSchwinger);
  std::vector<VarId> order;
  for (const auto& name : split(order_text, ',')) order.push_back(l.ring->at(name));
  ReductionOptions o = reduction_options(g);

  if (g.mode == "simple") {
    if (order.empty()) throw InvalidArgument("--mode simple needs --order");
    SimpleReduction r = simple_reduction(polys, order, o);
    for (std::size_t k = 0; k < r.sets.size(); ++k) {
      const auto& s = r.sets[k];
      std::cout << "step " << k << ": " << s.members.size() << " polynomials, " << s.graph.edge_count()
                << " compatible pairs\n";
      for (const auto& m : s.members) {
        std::cout << "  " << m.poly.to_string();
        for (const auto& lab : m.labels) std::cout << ' ' << to_string(lab);
        std::cout << '\n';
      }
    }
    if (r.completed) {
      std::cout << "completed\n";
      return kOk;
    }
    std::cout << "blocked at step " << r.failed_step << " by " << r.offending->to_string() << '\n';
    return kNegative;
  }
  if (g.mode != "compat" && g.mode != "fubini") throw InvalidArgument("unknown mode '" + g.mode + "'");
  if (!order.empty()) {
    OrderCheck c = check_order(polys, vars, order, o);
    if (c.reducible) {
      std::cout << "reducible in order " << names(l.ring, order) << '\n';
      return kOk;
    }
    std::cout << "not reducible in this order (step " << c.failed_step << ")\n";
    return kNegative;
  }
  Verdict v = is_reducible(polys, vars, o);
  if (v.reducible) {
    std::cout << "reducible\nwitness: " << names(l.ring, v.witness) << '\n';
  } else {
    std::cout << "not reducible\n";
  }
  std::cout << "brackets defined: " << v.subsets_defined << ", layers from cache: " << v.layers_from_cache << '\n';
  return v.reducible ? kOk : kNegative;
}

int run_minor(const std::string& path, const std::string& notion_text) {
  GraphFile f = read_graph_file(path);
  Notion notion = parse_notion(notion_text);
  ScreenReport r = screen(f.graph, f.kinematics.momenta(), notion);
  for (const auto& finding : r.findings) {
    std::cout << finding.name << ": " << (finding.contains ? "contained" : "absent") << '\n';
  }
  for (const auto& name : r.skipped) std::cout << name << ": unavailable\n";
  std::cout << r.verdict() << '\n';
  return r.witness ? kNegative : kOk;
}

int run_vertex_width(const std::string& path) {
  GraphFile f = read_graph_file(path);
  std::cout << vertex_width(f.graph) << '\n';
  return kOk;
}

int run_catalog(const std::string& show) {
  const auto& catalog = build_catalog();
  if (!show.empty()) {
    for (const auto& e : catalog) {
      if (e.name == show) {
        std::cout << *catalog_file(e.file);
        return kOk;
      }
    }
    throw InvalidArgument("no catalog entry '" + show + "'");
  }
  for (const auto& e : catalog) {
    std::cout << e.name << "\t" << to_string(e.notion) << "\t";
    if (e.available) {
      std::cout << e.graph.num_vertices() << " vertices, " << e.graph.num_edges() << " edges, " << e.roots.size()
                << " roots";
    } else {
      std::cout << "unavailable";
    }
    std::cout << "\t" << e.description << '\n';
  }
  return kOk;
}

int run_census(const std::string& dir, const Globals& g, const std::string& out, const std::string& notion) {
  cli::CensusOptions o;
  if (notion != "auto") o.notion = parse_notion(notion);
  if (g.mode != "compat" && g.mode != "fubini") throw InvalidArgument("census mode must be compat or fubini");
  o.fubini = g.mode == "fubini";
  o.reduction = reduction_options(g);
  o.workers = g.workers;
  o.output = out;
  o.cache_dir = g.cache_dir;
  auto summary = cli::run_census(dir, o);
  for (const auto& u : summary.unreadable) std::cerr << "skipped " << u << '\n';
  std::cerr << summary.records << " records, " << summary.computed << " computed, " << summary.cache_hits
            << " cache hits\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symanzik polynomials, compatibility-graph reduction and forbidden-minor screening"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--budget", g.budget, "Maximum number of Schwinger variables for the reducibility search")
      ->capture_default_str();
  app.add_option("--degree-budget", g.degree_budget, "Maximum total degree handed to the factorizer")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", g.cache_dir, "Directory for reduction and census caches");
  app.add_flag("--keep-constants", g.keep_constants, "Keep a canonical 1 for constants");
  app.add_flag("--strict-brackets", g.strict_brackets, "A bracket needs every branch to exist");
  app.add_option("--mode", g.mode, "simple, compat or fubini")
      ->check(CLI::IsMember({"simple", "compat", "fubini"}))
      ->capture_default_str();

  std::string path, set = "both", order, subst, notion = "psi", show, out = "census.jsonl", census_notion = "auto";

  auto* sym = app.add_subcommand("symanzik", "Print the Symanzik polynomials of a graph file");
  sym->add_option("graph", path, "Graph file")->required();
  sym->add_option("--set", set, "psi, phi or both")->check(CLI::IsMember({"psi", "phi", "both"}));

  auto* red = app.add_subcommand("reduce", "Run the reduction on the Symanzik polynomials");
  red->add_option("graph", path, "Graph file")->required();
  red->add_option("--set", set, "psi, phi or both")->check(CLI::IsMember({"psi", "phi", "both"}));
  red->add_option("--order", order, "Comma separated variable order, e.g. a1,a3,a2");
  red->add_option("--subst", subst, "Kinematic values, e.g. s_1_2=1,s_1_3=-2");

  auto* min = app.add_subcommand("minor", "Screen a graph against the forbidden-minor catalog");
  min->add_option("graph", path, "Graph file")->required();
  min->add_option("--notion", notion, "psi or phi4")->check(CLI::IsMember({"psi", "phi4"}));

  auto* vw = app.add_subcommand("vertex-width", "Exact vertex width of a graph");
  vw->add_option("graph", path, "Graph file")->required();

  auto* cen = app.add_subcommand("census", "Run every *.graph file of a directory");
  cen->add_option("dir", path, "Directory")->required();
  cen->add_option("--out", out, "Results file (one JSON record per line)")->capture_default_str();
  cen->add_option("--notion", census_notion, "psi, phi4 or auto")->check(CLI::IsMember({"psi", "phi4", "auto"}));

  auto* cat = app.add_subcommand("catalog", "List the forbidden-minor catalog");
  cat->add_option("--show", show, "Print the graph file of one entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sym) return run_symanzik(path, set);
    if (*red) return run_reduce(path, g, set, order, subst);
    if (*min) return run_minor(path, notion);
    if (*vw) return run_vertex_width(path);
    if (*cen) return run_census(path, g, out, census_notion);
    if (*cat) return run_catalog(show);
  } catch (const ResourceLimit& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
