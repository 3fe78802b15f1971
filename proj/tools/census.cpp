#include "census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "feynred/errors.hpp"
#include "feynred/graph_io.hpp"
#include "feynred/symanzik.hpp"

namespace feynred::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << x;
  return out.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InvalidArgument("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Notion notion_for(const GraphFile& f, const CensusOptions& options) {
  if (options.notion) return *options.notion;
  return rooted_vertices(f.graph, f.kinematics.momenta()).size() == 4 ? Notion::kFourPoint : Notion::kPsi;
}

// Everything a record depends on besides wall time.
std::string cache_key(const std::string& name, const GraphFile& f, Notion notion, const CensusOptions& options) {
  const auto& r = options.reduction;
  std::ostringstream key;
  key << "schema " << kCensusSchemaVersion << '\n'
      << "name " << name << '\n'
      << "notion " << to_string(notion) << " fubini " << options.fubini << " keep " << r.keep_constants
      << " strict " << r.strict_brackets << " vars " << r.max_variables << " degree "
      << r.factor_budget.max_total_degree << " kronecker " << r.factor_budget.max_kronecker_degree << " modular "
      << r.factor_budget.max_modular_factors << '\n'
      << write_graph(f.graph, f.kinematics);
  return key.str();
}

json compute(const std::string& name, const GraphFile& f, Notion notion, const CensusOptions& options) {
  auto start = std::chrono::steady_clock::now();
  json rec;
  rec["schema_version"] = kCensusSchemaVersion;
  rec["name"] = name;
  rec["vertices"] = f.graph.num_vertices();
  rec["edges"] = f.graph.num_edges();
  rec["notion"] = to_string(notion);
  rec["mode"] = options.fubini ? "fubini" : "compat";
  if (f.graph.num_edges() > 0 && f.graph.num_edges() <= 20) {
    rec["vertex_width"] = vertex_width(f.graph);
  } else {
    rec["vertex_width"] = nullptr;
  }
  try {
    ScreenReport s = screen(f.graph, f.kinematics.momenta(), notion);
    rec["screen"] = s.verdict();
    rec["screen_witness"] = s.witness ? json(*s.witness) : json(nullptr);
  } catch (const InvalidArgument& e) {
    rec["screen"] = std::string("not applicable: ") + e.what();
    rec["screen_witness"] = nullptr;
  }
  try {
    RingPtr ring = symanzik_ring(f.graph, f.kinematics);
    std::vector<Polynomial> set = {first_symanzik(f.graph, ring)};
    if (notion == Notion::kFourPoint) set.push_back(second_symanzik(f.graph, f.kinematics, ring));
    auto vars = ring->of_kind(VariableKind::kSchwinger);
    ReductionOptions ro = options.reduction;
    ro.workers = 1;
    ro.cache_dir.clear();
    Verdict v = options.fubini ? fubini_is_reducible(set, vars, ro) : is_reducible(set, vars, ro);
    rec["verdict"] = v.reducible ? "reducible" : "not-reducible";
    json order = json::array();
    for (VarId x : v.witness) order.push_back(ring->variable(x).name);
    rec["witness_order"] = order;
  } catch (const ResourceLimit& e) {
    rec["verdict"] = "budget-exceeded";
    rec["witness_order"] = json::array();
    rec["detail"] = e.what();
  } catch (const Error& e) {
    rec["verdict"] = "error";
    rec["witness_order"] = json::array();
    rec["detail"] = e.what();
  }
  auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  rec["wall_ms"] = std::round(elapsed.count() * 1000) / 1000;
  return rec;
}

std::optional<json> load_cached(const fs::path& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    json entry = json::parse(in);
    if (entry.value("key", "") != key) return std::nullopt;
    return entry.at("record");
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void store_cached(const fs::path& path, const std::string& key, const json& record) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + hex(fnv1a(std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()))));
  {
    std::ofstream out(tmp);
    out << json{{"key", key}, {"record", record}}.dump() << '\n';
  }
  fs::rename(tmp, path);
}

}  // namespace

CensusSummary run_census(const std::string& dir, const CensusOptions& options) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".graph") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  const fs::path cache = options.cache_dir.empty() ? fs::path(options.output + ".cache") : fs::path(options.cache_dir);

  CensusSummary summary;
  std::mutex mutex;
  std::map<std::string, std::string> lines;
  if (auto parent = fs::path(options.output).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream stream(options.output, std::ios::trunc);
  if (!stream) throw InvalidArgument("cannot write " + options.output);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      const std::string name = files[i].stem().string();
      GraphFile f;
      try {
        f = parse_graph(read_file(files[i]));
      } catch (const Error& e) {
        std::lock_guard lock(mutex);
        summary.unreadable.push_back(files[i].filename().string() + ": " + e.what());
        continue;
      }
      const Notion notion = notion_for(f, options);
      const std::string key = cache_key(name, f, notion, options);
      const fs::path path = cache / (hex(fnv1a(key)) + ".json");
      bool hit = false;
      json record;
      if (auto cached = load_cached(path, key)) {
        record = std::move(*cached);
        hit = true;
      } else {
        record = compute(name, f, notion, options);
        store_cached(path, key, record);
      }
      std::string line = record.dump();
      std::lock_guard lock(mutex);
      (hit ? summary.cache_hits : summary.computed) += 1;
      stream << line << '\n' << std::flush;
      lines[name] = std::move(line);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, files.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  stream.close();

  // Rewrite in name order so the file does not depend on scheduling.
  std::ofstream sorted(options.output, std::ios::trunc);
  for (const auto& [name, line] : lines) sorted << line << '\n';
  summary.records = lines.size();
  std::sort(summary.unreadable.begin(), summary.unreadable.end());
  return summary;
}

}  // namespace feynred::cli
