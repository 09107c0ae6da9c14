#include "hcm/community.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hcm/union_find.hpp"

namespace hcm {

namespace {

std::vector<std::pair<int, int>> normalized_edges(const Community& c) {
  std::vector<std::pair<int, int>> e = c.edges;
  for (auto& [u, v] : e) {
    if (u > v) std::swap(u, v);
  }
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

bool Community::operator==(const Community& other) const {
  return out_degrees == other.out_degrees && weight == other.weight &&
         normalized_edges(*this) == normalized_edges(other);
}

std::vector<int> internal_degrees(const Community& c) {
  std::vector<int> deg(c.vertex_count(), 0);
  for (const auto& [u, v] : c.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

bool community_is_connected(const Community& c) {
  const int s = c.vertex_count();
  if (s == 0) return false;
  UnionFind uf(s);
  for (const auto& [u, v] : c.edges) uf.unite(u, v);
  return uf.component_size(0) == s;
}

void validate_community(const Community& c) {
  const int s = c.vertex_count();
  if (s < 1) throw Error("community must have at least one vertex");
  for (int d : c.out_degrees) {
    if (d < 0) throw Error("negative out-degree");
  }
  if (c.weight && (*c.weight < 0 || !std::isfinite(*c.weight))) {
    throw Error("community weight must be a finite nonnegative number");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [u, v] : c.edges) {
    if (u < 0 || v < 0 || u >= s || v >= s) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loop in community internal graph");
    const auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw Error("duplicate edge in community internal graph");
  }
  if (!community_is_connected(c)) throw Error("community internal graph is not connected");
}

Community make_single_vertex(int d) {
  if (d < 0) throw Error("make_single_vertex: d must be >= 0");
  Community c;
  c.out_degrees = {d};
  return c;
}

Community make_star(int l) {
  if (l < 1) throw Error("make_star: l must be >= 1");
  Community c;
  c.out_degrees.assign(l + 1, 1);
  c.out_degrees[0] = 0;  // center
  c.edges.reserve(l);
  for (int i = 1; i <= l; ++i) c.edges.emplace_back(0, i);
  return c;
}

Community make_line(int length) {
  if (length < 2) throw Error("make_line: length must be >= 2");
  Community c;
  c.out_degrees.assign(length, 0);
  c.out_degrees.front() = 1;
  c.out_degrees.back() = 1;
  c.edges.reserve(length - 1);
  for (int i = 0; i + 1 < length; ++i) c.edges.emplace_back(i, i + 1);
  return c;
}

Community make_household(int k) {
  if (k < 1) throw Error("make_household: k must be >= 1");
  Community c;
  c.out_degrees.assign(k, 1);
  for (int u = 0; u < k; ++u) {
    for (int v = u + 1; v < k; ++v) c.edges.emplace_back(u, v);
  }
  return c;
}

std::string structure_key(const Community& c) {
  std::ostringstream os;
  os << c.vertex_count() << '|';
  for (const auto& [u, v] : normalized_edges(c)) os << u << '-' << v << ',';
  return os.str();
}

std::string shape_key(const Community& c) {
  std::ostringstream os;
  os << structure_key(c) << ';';
  for (int d : c.out_degrees) os << d << ',';
  return os.str();
}

CommunityDistribution::CommunityDistribution(std::vector<CatalogEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error("empty community distribution");
  Rational total{0, 1};
  for (const auto& e : entries_) {
    validate_community(e.community);
    if (e.weight.num < 0) throw Error("negative catalog weight");
    if (e.count && *e.count < 0) throw Error("negative catalog count");
    total = total + e.weight;
  }
  if (total.num == 0) throw Error("catalog weights sum to zero");
  for (auto& e : entries_) e.weight = e.weight / total;
}

double CommunityDistribution::e_s() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) s += weight(i) * community(i).size_value();
  return s;
}

double CommunityDistribution::e_d() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    s += weight(i) * static_cast<double>(community(i).total_out_degree());
  return s;
}

double CommunityDistribution::e_d2() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double d = static_cast<double>(community(i).total_out_degree());
    s += weight(i) * d * d;
  }
  return s;
}

double CommunityDistribution::e_d3() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double d = static_cast<double>(community(i).total_out_degree());
    s += weight(i) * d * d * d;
  }
  return s;
}

double CommunityDistribution::e_ds() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    s += weight(i) * static_cast<double>(community(i).total_out_degree()) * community(i).size_value();
  }
  return s;
}

double CommunityDistribution::e_d2s() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double d = static_cast<double>(community(i).total_out_degree());
    s += weight(i) * d * d * community(i).size_value();
  }
  return s;
}

double CommunityDistribution::e_s2() const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double sz = community(i).size_value();
    s += weight(i) * sz * sz;
  }
  return s;
}

double CommunityDistribution::p_degree(std::int64_t k) const {
  double s = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (community(i).total_out_degree() == k) s += weight(i);
  }
  return s;
}

double CommunityDistribution::nu_d() const {
  const double ed = e_d();
  if (ed <= 0) throw Error("nu_D undefined: E[D] = 0");
  return (e_d2() - ed) / ed;
}

ConditionReport check_conditions(const CommunityDistribution& dist, std::int64_t n, double lambda) {
  if (n < 1) throw Error("check_conditions: n must be >= 1");
  ConditionReport r;
  r.e_s = dist.e_s();
  r.e_d = dist.e_d();
  r.e_d3 = dist.e_d3();
  r.e_ds = dist.e_ds();
  r.e_d_positive = r.e_d > 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    r.s_max = std::max<std::int64_t>(r.s_max, dist.community(i).vertex_count());
    r.d_max = std::max(r.d_max, dist.community(i).total_out_degree());
  }
  const double dn = static_cast<double>(n);
  const double n23 = std::pow(dn, 2.0 / 3.0);
  const double n13 = std::cbrt(dn);
  r.smax_log_ratio = static_cast<double>(r.s_max) * std::log(std::max(2.0, dn)) / n23;
  r.dmax_ratio = static_cast<double>(r.d_max) / n13;
  r.smax_ok = static_cast<double>(r.s_max) * std::log(std::max(2.0, dn)) < n23;
  r.dmax_ok = static_cast<double>(r.d_max) <= n13;
  const double p0 = dist.p_degree(0);
  const double p1 = dist.p_degree(1);
  r.p_d0_lt_1 = p0 < 1.0;
  r.p_d1_in_open01 = p1 > 0.0 && p1 < 1.0;
  if (r.e_d_positive) {
    r.nu = dist.nu_d();
    r.nu_window_distance = std::fabs(r.nu - (1.0 + lambda / n13));
  }
  return r;
}

namespace {

CommunityDistribution retuned(const CommunityDistribution& dist, std::size_t a, std::size_t b,
                              const Rational& ta, const Rational& tb) {
  std::vector<CatalogEntry> entries;
  entries.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    CatalogEntry e = dist.entry(i);
    if (i == a) e.weight = ta;
    if (i == b) e.weight = tb;
    entries.push_back(std::move(e));
  }
  return CommunityDistribution(std::move(entries));
}

}  // namespace

CommunityDistribution tune_two_entry_mixture(const CommunityDistribution& dist, std::size_t a,
                                             std::size_t b, const Rational& target_nu) {
  if (a >= dist.size() || b >= dist.size() || a == b) throw Error("tune: bad entry indices");
  // Solve nu(t) = T where entry a gets fraction t of the combined (a,b) mass.
  Rational c1{0, 1}, c2{0, 1};
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (i == a || i == b) continue;
    const std::int64_t d = dist.community(i).total_out_degree();
    c1 = c1 + dist.weight_exact(i) * Rational::from_int(d);
    c2 = c2 + dist.weight_exact(i) * Rational::from_int(d * (d - 1));
  }
  const Rational m = dist.weight_exact(a) + dist.weight_exact(b);
  if (m.num == 0) throw Error("tune: entries carry no mass");
  const std::int64_t da = dist.community(a).total_out_degree();
  const std::int64_t db = dist.community(b).total_out_degree();
  const Rational a1 = Rational::from_int(da), a2 = Rational::from_int(da * (da - 1));
  const Rational b1 = Rational::from_int(db), b2 = Rational::from_int(db * (db - 1));
  const Rational denom = m * ((a2 - b2) - target_nu * (a1 - b1));
  if (denom.num == 0) throw Error("tune: mixture cannot reach the target nu");
  const Rational t = (target_nu * (c1 + m * b1) - (c2 + m * b2)) / denom;
  if (t.value() < 0.0 || t.value() > 1.0) throw Error("tune: solution outside [0,1]");
  return retuned(dist, a, b, m * t, m * (Rational{1, 1} - t));
}

CommunityDistribution tune_two_entry_mixture(const CommunityDistribution& dist, std::size_t a,
                                             std::size_t b, double target_nu) {
  if (a >= dist.size() || b >= dist.size() || a == b) throw Error("tune: bad entry indices");
  double c1 = 0, c2 = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (i == a || i == b) continue;
    const double d = static_cast<double>(dist.community(i).total_out_degree());
    c1 += dist.weight(i) * d;
    c2 += dist.weight(i) * d * (d - 1);
  }
  const double m = dist.weight(a) + dist.weight(b);
  const double da = static_cast<double>(dist.community(a).total_out_degree());
  const double db = static_cast<double>(dist.community(b).total_out_degree());
  const double denom = m * ((da * (da - 1) - db * (db - 1)) - target_nu * (da - db));
  if (denom == 0) throw Error("tune: mixture cannot reach the target nu");
  const double t = (target_nu * (c1 + m * db) - (c2 + m * db * (db - 1))) / denom;
  if (t < 0.0 || t > 1.0) throw Error("tune: solution outside [0,1]");
  // Snap to a close rational so downstream weights stay exact-summable.
  const std::int64_t den = 1'000'000'000;
  const Rational ta(static_cast<std::int64_t>(std::llround(t * static_cast<double>(den))), den);
  const Rational mass = dist.weight_exact(a) + dist.weight_exact(b);
  return retuned(dist, a, b, mass * ta, mass * (Rational{1, 1} - ta));
}

}  // namespace hcm
