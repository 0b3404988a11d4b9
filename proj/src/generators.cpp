#include "causalip/generators.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "causalip/errors.hpp"

namespace causalip {

Dag erdos_renyi_dag(const ErdosRenyiSpec& spec) {
  if (spec.n < 1) throw ConfigError("n must be at least 1");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<DirectedEdge> edges;
  const auto n = static_cast<VertexId>(spec.n);
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < spec.p) edges.push_back({i, j});
    }
  }
  return validate_dag(spec.n, edges);
}

namespace {

std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

bool parse_index(std::string_view word, std::size_t& out) {
  auto r = std::from_chars(word.data(), word.data() + word.size(), out);
  return r.ec == std::errc{} && r.ptr == word.data() + word.size();
}

ParseError parse_error(std::size_t line, const std::string& what) {
  return ParseError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

NamedDag load_edge_list(std::string_view text) {
  std::vector<DirectedEdge> edges;
  std::map<std::size_t, std::string> names;
  std::optional<std::size_t> declared;
  std::size_t max_index = 0;
  bool any = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      auto comment = words(line.substr(hash + 1));
      if (comment.size() == 2 && comment[0] == "nodes") {
        std::size_t n = 0;
        if (!parse_index(comment[1], n)) throw parse_error(line_no, "bad node count");
        declared = n;
      } else if (comment.size() >= 3 && comment[0] == "name") {
        std::size_t v = 0;
        if (!parse_index(comment[1], v)) throw parse_error(line_no, "bad vertex index");
        names[v] = std::string(comment[2]);
      }
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto w = words(line);
    std::size_t a = 0, b = 0;
    if (w.size() != 2 || !parse_index(w[0], a) || !parse_index(w[1], b)) {
      throw parse_error(line_no, "expected \"i j\", got \"" + std::string(line) + "\"");
    }
    if (a > UINT32_MAX || b > UINT32_MAX) throw parse_error(line_no, "index too large");
    edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b)});
    max_index = std::max({max_index, a, b});
    any = true;
  }
  std::size_t n = declared ? *declared : (any ? max_index + 1 : 0);
  NamedDag out{validate_dag(n, edges), {}};
  if (!names.empty()) {
    out.names.resize(n);
    for (std::size_t v = 0; v < n; ++v)
      out.names[v] = names.count(v) ? names[v] : std::to_string(v);
  }
  return out;
}

std::string save_edge_list(const Dag& dag, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "# nodes " << dag.size() << "\n";
  for (std::size_t v = 0; v < names.size(); ++v) os << "# name " << v << " " << names[v] << "\n";
  for (const auto& e : dag.edges()) os << e.from << " " << e.to << "\n";
  return os.str();
}

namespace {

// Strips // and /* */ comments.
std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 2, "//") == 0) {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) out.push_back('\n');
    } else if (text.compare(i, 2, "/*") == 0) {
      auto end = text.find("*/", i + 2);
      i = end == std::string_view::npos ? text.size() : end + 1;
      out.push_back(' ');
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

}  // namespace

NamedDag load_bif_structure(std::string_view raw) {
  std::string text = strip_comments(raw);
  std::vector<std::string> names;
  std::map<std::string, VertexId> index;
  std::vector<std::pair<std::string, std::vector<std::string>>> families;

  auto line_of = [&](std::size_t offset) {
    return static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n')) + 1;
  };
  auto is_ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  };
  auto keyword_at = [&](std::size_t i, std::string_view kw) {
    return text.compare(i, kw.size(), kw) == 0 && (i == 0 || !is_ident(text[i - 1])) &&
           i + kw.size() < text.size() && !is_ident(text[i + kw.size()]);
  };
  auto skip_block = [&](std::size_t i) {
    auto open = text.find('{', i);
    if (open == std::string::npos) throw parse_error(line_of(i), "missing '{'");
    int depth = 0;
    for (std::size_t k = open; k < text.size(); ++k) {
      if (text[k] == '{') ++depth;
      if (text[k] == '}' && --depth == 0) return k + 1;
    }
    throw parse_error(line_of(i), "unterminated block");
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (keyword_at(i, "variable")) {
      std::size_t k = i + 8;
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      std::size_t start = k;
      while (k < text.size() && is_ident(text[k])) ++k;
      if (k == start) throw parse_error(line_of(i), "variable without a name");
      std::string name = text.substr(start, k - start);
      if (index.count(name)) throw parse_error(line_of(i), "variable " + name + " declared twice");
      index[name] = static_cast<VertexId>(names.size());
      names.push_back(name);
      i = skip_block(k);
    } else if (keyword_at(i, "probability")) {
      auto open = text.find('(', i);
      auto close = text.find(')', i);
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw parse_error(line_of(i), "malformed probability header");
      std::string header = text.substr(open + 1, close - open - 1);
      std::replace(header.begin(), header.end(), ',', ' ');
      auto bar = header.find('|');
      std::string child_part = header.substr(0, bar);
      std::string parent_part = bar == std::string::npos ? "" : header.substr(bar + 1);
      auto child = words(child_part);
      if (child.size() != 1) throw parse_error(line_of(i), "expected one child variable");
      std::vector<std::string> parents;
      for (auto w : words(parent_part)) parents.emplace_back(w);
      families.emplace_back(std::string(child[0]), std::move(parents));
      i = skip_block(close);
    } else if (keyword_at(i, "network")) {
      i = skip_block(i);
    } else {
      ++i;
    }
  }

  std::vector<DirectedEdge> edges;
  for (const auto& [child, parents] : families) {
    auto c = index.find(child);
    if (c == index.end()) throw ParseError("probability for undeclared variable " + child);
    for (const auto& p : parents) {
      auto it = index.find(p);
      if (it == index.end()) throw ParseError("undeclared parent " + p + " of " + child);
      edges.push_back({it->second, c->second});
    }
  }
  return {validate_dag(names.size(), edges), names};
}

NamedDag load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  bool bif = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bif") == 0;
  return bif ? load_bif_structure(text) : load_edge_list(text);
}

GraphStats structural_stats(const Dag& dag) {
  GraphStats stats;
  stats.nodes = dag.size();
  stats.edges = dag.edge_count();
  stats.v_structures = v_structures(dag).size();
  if (stats.nodes == 0) return stats;

  std::vector<std::size_t> degree(dag.size(), 0);
  for (const auto& e : dag.edges()) {
    ++degree[e.from];
    ++degree[e.to];
  }
  stats.min_degree = *std::min_element(degree.begin(), degree.end());
  stats.max_degree = *std::max_element(degree.begin(), degree.end());
  stats.avg_degree = 2.0 * static_cast<double>(stats.edges) / static_cast<double>(stats.nodes);
  if (stats.nodes > 1) {
    double ss = 0.0;
    for (auto d : degree) ss += (d - stats.avg_degree) * (d - stats.avg_degree);
    stats.stdev_degree = std::sqrt(ss / static_cast<double>(stats.nodes - 1));
  }
  return stats;
}

}  // namespace causalip
