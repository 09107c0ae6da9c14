#include "hcm/community_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hcm {

namespace {

using nlohmann::json;

// Reads the next content line, skipping blanks and comments except "# weight".
bool next_line(std::istream& in, std::string& line, int& line_no, std::optional<double>* weight) {
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') {
      std::istringstream cs(line.substr(i + 1));
      std::string word;
      if (weight && cs >> word && word == "weight") {
        double w;
        if (cs >> w) *weight = w;
      }
      continue;
    }
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw Error("community parse error at line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Community parse_community_text(std::istream& in) {
  Community c;
  std::string line;
  int line_no = 0;
  std::optional<double> weight;
  if (!next_line(in, line, line_no, &weight)) throw Error("community parse error: empty input");
  std::istringstream header(line);
  long long s = 0, d_total = 0;
  if (!(header >> s >> d_total) || s < 1 || d_total < 0) parse_fail(line_no, "expected 's d_total'");
  if (!next_line(in, line, line_no, &weight)) parse_fail(line_no, "missing out-degree line");
  {
    std::istringstream ds(line);
    c.out_degrees.reserve(s);
    for (long long i = 0; i < s; ++i) {
      int d;
      if (!(ds >> d)) parse_fail(line_no, "expected " + std::to_string(s) + " out-degrees");
      if (d < 0) parse_fail(line_no, "negative out-degree");
      c.out_degrees.push_back(d);
    }
    int extra;
    if (ds >> extra) parse_fail(line_no, "too many out-degrees");
  }
  while (next_line(in, line, line_no, &weight)) {
    std::istringstream es(line);
    int u, v;
    if (!(es >> u >> v)) parse_fail(line_no, "expected edge 'u v'");
    if (u < 0 || v < 0 || u >= s || v >= s) parse_fail(line_no, "edge endpoint out of range");
    if (u == v) parse_fail(line_no, "self-loop edge");
    for (const auto& [a, b] : c.edges) {
      if ((a == u && b == v) || (a == v && b == u)) parse_fail(line_no, "duplicate edge");
    }
    c.edges.emplace_back(u, v);
  }
  c.weight = weight;
  if (c.total_out_degree() != d_total) {
    throw Error("community parse error: header d_total " + std::to_string(d_total) +
                " does not match out-degree sum " + std::to_string(c.total_out_degree()));
  }
  if (!community_is_connected(c)) throw Error("community parse error: internal graph not connected");
  validate_community(c);
  return c;
}

Community parse_community_string(const std::string& text) {
  std::istringstream in(text);
  return parse_community_text(in);
}

Community load_community_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open community file: " + path);
  return parse_community_text(in);
}

void serialize_community_text(const Community& c, std::ostream& out) {
  out << c.vertex_count() << ' ' << c.total_out_degree() << '\n';
  for (int i = 0; i < c.vertex_count(); ++i) out << (i ? " " : "") << c.out_degrees[i];
  out << '\n';
  for (const auto& [u, v] : c.edges) out << u << ' ' << v << '\n';
  if (c.weight) out << "# weight " << *c.weight << '\n';
}

std::string community_to_string(const Community& c) {
  std::ostringstream os;
  serialize_community_text(c, os);
  return os.str();
}

void save_community_file(const Community& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write community file: " + path);
  serialize_community_text(c, out);
}

namespace {

Community community_from_json(const json& j, const std::string& base_dir) {
  if (j.is_string()) {
    std::string path = j.get<std::string>();
    if (!path.empty() && path[0] != '/' && !base_dir.empty()) path = base_dir + "/" + path;
    return load_community_file(path);
  }
  if (!j.is_object()) throw Error("distribution config: community must be a path or object");
  if (j.contains("family")) {
    const std::string family = j.at("family").get<std::string>();
    const int param = j.at("param").get<int>();
    if (family == "single_vertex") return make_single_vertex(param);
    if (family == "star") return make_star(param);
    if (family == "line") return make_line(param);
    if (family == "household") return make_household(param);
    throw Error("distribution config: unknown family '" + family + "'");
  }
  Community c;
  c.out_degrees = j.at("out_degrees").get<std::vector<int>>();
  if (j.contains("size") && j.at("size").get<int>() != c.vertex_count()) {
    throw Error("distribution config: size does not match out_degrees length");
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      c.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
  }
  if (j.contains("size_weight")) c.weight = j.at("size_weight").get<double>();
  validate_community(c);
  return c;
}

Rational weight_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational::from_int(j.get<std::int64_t>());
  if (j.is_number_float()) {
    // Decimal weights become exact rationals over a power of ten.
    std::ostringstream os;
    os.precision(15);
    os << j.get<double>();
    return parse_rational(os.str());
  }
  throw Error("distribution config: weight must be a number or 'p/q' string");
}

}  // namespace

CommunityDistribution parse_distribution_json_text(const std::string& json_text,
                                                   const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("distribution config: invalid JSON: ") + e.what());
  }
  const json& list = j.is_array() ? j : j.at("entries");
  std::vector<CatalogEntry> entries;
  for (const auto& item : list) {
    CatalogEntry e;
    e.community = community_from_json(item.at("community"), base_dir);
    e.weight = weight_from_json(item.at("weight"));
    if (item.contains("count")) e.count = item.at("count").get<std::int64_t>();
    entries.push_back(std::move(e));
  }
  return CommunityDistribution(std::move(entries));
}

CommunityDistribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open distribution file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string dir;
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_distribution_json_text(buf.str(), dir);
}

CommunityDistribution named_catalog(const std::string& name) {
  if (name == "table1") {
    return CommunityDistribution({{make_star(5), Rational{1, 1}, std::nullopt}});
  }
  if (name == "table2") {
    return CommunityDistribution({{make_line(5), Rational{1, 2}, std::nullopt},
                                  {make_single_vertex(3), Rational{1, 2}, std::nullopt}});
  }
  throw Error("unknown named catalog: " + name);
}

}  // namespace hcm
