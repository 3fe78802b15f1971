#include "feynred/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "feynred/errors.hpp"

namespace feynred {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// "p3" -> 3
std::optional<int> momentum_label(std::string_view s) {
  if (s.size() < 2 || s[0] != 'p') return std::nullopt;
  auto v = to_int(s.substr(1));
  if (!v || *v < 1) return std::nullopt;
  return v;
}

bool valid_symbol(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

struct PendingEdge {
  int line;
  EdgeId id;
  VertexId u, v;
  std::optional<std::string> mass;
};

}  // namespace

GraphFile parse_graph(std::string_view text) {
  std::optional<int> r;
  std::vector<bool> onshell;
  std::vector<std::pair<int, std::pair<VertexId, Momentum>>> vertices;
  std::vector<PendingEdge> edges;

  int line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "momenta") {
      if (r) throw ParseError(line_no, "duplicate momenta header");
      std::optional<std::string_view> onshell_list;
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i].starts_with("r=")) {
          r = to_int(w[i].substr(2));
          if (!r || *r < 0) throw ParseError(line_no, "bad momentum count");
        } else if (w[i].starts_with("onshell=")) {
          onshell_list = w[i].substr(8);
        } else {
          throw ParseError(line_no, "unexpected token '" + std::string(w[i]) + "'");
        }
      }
      if (!r) throw ParseError(line_no, "momenta header needs r=<n>");
      onshell.assign(*r, false);
      if (onshell_list && !onshell_list->empty()) {
        for (auto item : split(*onshell_list, ',')) {
          auto label = momentum_label(item);
          if (!label || *label > *r) {
            throw ParseError(line_no, "on-shell list names unknown momentum '" + std::string(item) + "'");
          }
          onshell[*label - 1] = true;
        }
      }
    } else if (w[0] == "v") {
      if (w.size() < 2 || w.size() > 3) throw ParseError(line_no, "expected: v <id> [momentum=<sum>]");
      auto id = to_int(w[1]);
      if (!id) throw ParseError(line_no, "bad vertex id");
      Momentum m;
      if (w.size() == 3) {
        if (!w[2].starts_with("momentum=")) throw ParseError(line_no, "expected momentum=<sum>");
        auto sum = w[2].substr(9);
        if (!sum.empty() && sum != "0") {
          for (auto item : split(sum, '+')) {
            auto label = momentum_label(item);
            if (!label) throw ParseError(line_no, "bad momentum label '" + std::string(item) + "'");
            m.push_back(*label);
          }
        }
      }
      vertices.push_back({line_no, {*id, std::move(m)}});
    } else if (w[0] == "e") {
      if (w.size() < 4 || w.size() > 5) throw ParseError(line_no, "expected: e <id> <u> <v> [mass=<symbol>]");
      auto id = to_int(w[1]), u = to_int(w[2]), v = to_int(w[3]);
      if (!id || !u || !v) throw ParseError(line_no, "bad edge fields");
      std::optional<std::string> mass;
      if (w.size() == 5) {
        if (!w[4].starts_with("mass=") || !valid_symbol(w[4].substr(5))) {
          throw ParseError(line_no, "expected mass=<symbol>");
        }
        mass = std::string(w[4].substr(5));
      }
      edges.push_back({line_no, *id, *u, *v, std::move(mass)});
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(w[0]) + "'");
    }
  }

  GraphFile out;
  const int count = r.value_or(0);
  for (auto& [line, vm] : vertices) {
    for (int label : vm.second) {
      if (label > count) {
        throw ParseError(line, "momentum p" + std::to_string(label) + " not declared in the header");
      }
    }
    try {
      out.graph.add_vertex(vm.first, std::move(vm.second));
    } catch (const InvalidArgument& e) {
      throw ParseError(line, e.what());
    }
  }
  std::vector<std::string> masses;
  for (auto& e : edges) {
    try {
      out.graph.add_edge(e.id, e.u, e.v, e.mass);
    } catch (const InvalidArgument& ex) {
      throw ParseError(e.line, ex.what());
    }
    if (e.mass) masses.push_back(*e.mass);
  }
  out.kinematics = KinematicsContext(count, std::move(onshell), std::move(masses));
  return out;
}

GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

std::string write_graph(const Multigraph& g, const KinematicsContext& k) {
  std::ostringstream out;
  if (k.momenta() > 0) {
    out << "momenta r=" << k.momenta() << " onshell=";
    bool first = true;
    for (int i = 1; i <= k.momenta(); ++i) {
      if (!k.onshell(i)) continue;
      out << (first ? "" : ",") << 'p' << i;
      first = false;
    }
    out << '\n';
  }
  for (VertexId v : g.vertices()) {
    out << "v " << v;
    const auto& m = g.momentum(v);
    if (!m.empty()) {
      out << " momentum=";
      for (std::size_t i = 0; i < m.size(); ++i) out << (i ? "+" : "") << 'p' << m[i];
    }
    out << '\n';
  }
  for (const auto& e : g.edges()) {
    out << "e " << e.id << ' ' << e.u << ' ' << e.v;
    if (e.mass) out << " mass=" << *e.mass;
    out << '\n';
  }
  return out.str();
}

}  // namespace feynred
