#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "posim/bitset.hpp"
#include "posim/errors.hpp"

namespace posim {

using Edge = std::pair<int, int>;  // (u, v) means u strictly precedes v

// Strict down sets: D(x) = { y : x < y }, x never a member of its own set.
struct DownSetTable {
  std::vector<DynBitset> sets;
  std::vector<int> sizes;

  int n() const { return static_cast<int>(sets.size()); }
};

namespace detail {

// Kahn topological sort over an edge list; on failure walks the residual
// graph to name one concrete cycle in the error message.
inline std::vector<int> topo_order(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> children(n);
  std::vector<int> indeg(n, 0);
  for (const auto& [u, v] : edges) {
    children[u].push_back(v);
    ++indeg[v];
  }
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(i);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    order.push_back(u);
    for (int v : children[u])
      if (--indeg[v] == 0) queue.push_back(v);
  }
  if (static_cast<int>(order.size()) == n) return order;

  // Some cycle remains among nodes with indeg > 0; follow any in-cycle
  // successor chain until a node repeats.
  std::vector<int> next(n, -1);
  for (int u = 0; u < n; ++u) {
    if (indeg[u] <= 0) continue;
    for (int v : children[u])
      if (indeg[v] > 0) {
        next[u] = v;
        break;
      }
  }
  int start = 0;
  while (indeg[start] <= 0) ++start;
  std::vector<int> seen(n, 0);
  int u = start;
  while (!seen[u]) {
    seen[u] = 1;
    u = next[u];
  }
  std::string msg = std::to_string(u);
  for (int v = next[u]; v != u; v = next[v]) msg += " -> " + std::to_string(v);
  msg += " -> " + std::to_string(u);
  raise(ErrorKind::CycleDetected, msg);
}

}  // namespace detail

// Builds strict down sets from any acyclic relation (need not be reduced).
// Reverse topological sweep: D(x) = union over children c of {c} ∪ D(c).
inline DownSetTable transitive_closure(int n, const std::vector<Edge>& edges) {
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      raise(ErrorKind::ParseError,
            "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                ") out of range for " + std::to_string(n) + " candidates");
    if (u == v) raise(ErrorKind::SelfLoop, "edge (" + std::to_string(u) + ", " + std::to_string(u) + ")");
  }
  std::vector<int> order = detail::topo_order(n, edges);
  std::vector<std::vector<int>> children(n);
  for (const auto& [u, v] : edges) children[u].push_back(v);

  DownSetTable table;
  table.sets.assign(n, DynBitset(n));
  table.sizes.assign(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int u = *it;
    DynBitset& row = table.sets[u];
    for (int c : children[u]) {
      row.set(c);
      row |= table.sets[c];
    }
    table.sizes[u] = static_cast<int>(row.count());
  }
  return table;
}

// Transitive reduction of the closure (unique for a DAG): keep (u, v) iff no
// w in D(u) also reaches v. Result sorted ascending, duplicates impossible.
inline std::vector<Edge> hasse_reduction(const DownSetTable& closure) {
  const int n = closure.n();
  std::vector<Edge> edges;
  DynBitset covered(n);
  for (int u = 0; u < n; ++u) {
    covered.clear();
    closure.sets[u].for_each([&](int w) { covered |= closure.sets[w]; });
    closure.sets[u].for_each([&](int v) {
      if (!covered.test(v)) edges.emplace_back(u, v);
    });
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// A finite partial order over dense candidate ids 0..n-1. Canonical storage:
// hasse_edges is the transitive reduction, closure the strict down sets.
// labels is optional display metadata (empty when unused) and never affects
// any computation.
struct PartialOrder {
  int n = 0;
  std::vector<Edge> hasse_edges;
  DownSetTable closure;
  std::vector<std::string> labels;

  int down_size(int x) const { return closure.sizes[x]; }
  bool precedes(int x, int y) const { return closure.sets[x].test(y); }

  long long comparable_pairs() const {
    long long total = 0;
    for (int s : closure.sizes) total += s;
    return total;
  }

  std::vector<int> in_degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& e : hasse_edges) ++deg[e.second];
    return deg;
  }

  // Minimal elements (in-degree 0 in the Hasse diagram).
  std::vector<int> roots() const {
    std::vector<int> r;
    auto deg = in_degrees();
    for (int i = 0; i < n; ++i)
      if (deg[i] == 0) r.push_back(i);
    return r;
  }

  // BFS depth from the minimal elements (root(s) at depth 0).
  std::vector<int> depths() const {
    std::vector<std::vector<int>> children(n);
    for (const auto& [u, v] : hasse_edges) children[u].push_back(v);
    std::vector<int> depth(n, -1);
    std::vector<int> queue = roots();
    for (int r : queue) depth[r] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int v : children[u])
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          queue.push_back(v);
        }
    }
    return depth;
  }

  // Total order == down-set sizes are exactly {0, 1, ..., n-1}.
  bool is_total() const {
    std::vector<char> seen(n, 0);
    for (int s : closure.sizes) {
      if (s < 0 || s >= n || seen[s]) return false;
      seen[s] = 1;
    }
    return true;
  }

  // Semantic equality: same candidates, same comparability relation.
  bool operator==(const PartialOrder& o) const {
    return n == o.n && closure.sets == o.closure.sets;
  }
};

inline void require_single_root(const PartialOrder& order, const char* what) {
  auto r = order.roots();
  if (r.size() != 1)
    raise(ErrorKind::NotRooted,
          std::string(what) + " requires exactly one root, found " + std::to_string(r.size()));
}

// Canonical constructor: validates ids, silently deduplicates edges, closes
// transitively, then stores the Hasse reduction.
inline PartialOrder order_from_edges(int n, std::vector<Edge> edges,
                                     std::vector<std::string> labels = {}) {
  if (n <= 0) raise(ErrorKind::EmptyInput, "candidate count must be positive");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  PartialOrder order;
  order.n = n;
  order.closure = transitive_closure(n, edges);
  order.hasse_edges = hasse_reduction(order.closure);
  order.labels = std::move(labels);
  return order;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Complete b-ary tree of the given depth (depth counts levels, root = level
// 1), breadth-first labelling: children of node i are b*i+1 ... b*i+b.
// b == 1 degenerates to a chain with `depth` candidates.
inline PartialOrder gen_regular_tree(int branching, int depth) {
  if (branching < 1 || depth < 1)
    raise(ErrorKind::InfeasibleSpec, "tree needs branching >= 1 and depth >= 1");
  long long n = 0;
  long long level = 1;
  for (int l = 0; l < depth; ++l) {
    n += level;
    if (n > 0x7fffffffLL) raise(ErrorKind::Overflow, "tree node count exceeds index range");
    if (level > 0x7fffffffLL / std::max(branching, 1)) {
      if (l + 1 < depth) raise(ErrorKind::Overflow, "tree node count exceeds index range");
    } else {
      level *= branching;
    }
  }
  const int nn = static_cast<int>(n);
  std::vector<Edge> edges;
  edges.reserve(nn > 0 ? nn - 1 : 0);
  for (long long i = 0; i < nn; ++i)
    for (int k = 1; k <= branching; ++k) {
      long long c = branching * i + k;
      if (c >= nn) break;
      edges.emplace_back(static_cast<int>(i), static_cast<int>(c));
    }
  return order_from_edges(nn, std::move(edges));
}

// Chain 0 < 1 < ... < n-1.
inline PartialOrder gen_total_order(int n) {
  if (n < 1) raise(ErrorKind::InfeasibleSpec, "chain needs n >= 1");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return order_from_edges(n, std::move(edges));
}

// Bucket order: consecutive blocks of mutually incomparable candidates,
// every member of bucket k preceding every member of bucket k+1.
inline PartialOrder gen_bucket_order(const std::vector<int>& sizes) {
  if (sizes.empty()) raise(ErrorKind::InfeasibleSpec, "bucket order needs at least one bucket");
  long long n = 0;
  for (int s : sizes) {
    if (s < 1) raise(ErrorKind::InfeasibleSpec, "bucket sizes must be >= 1");
    n += s;
    if (n > 0x7fffffffLL) raise(ErrorKind::Overflow, "bucket node count exceeds index range");
  }
  std::vector<Edge> edges;
  int start = 0;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    int mid = start + sizes[k];
    int end = mid + sizes[k + 1];
    for (int u = start; u < mid; ++u)
      for (int v = mid; v < end; ++v) edges.emplace_back(u, v);
    start = mid;
  }
  return order_from_edges(static_cast<int>(n), std::move(edges));
}

inline PartialOrder gen_antichain(int n) { return order_from_edges(n, {}); }

// ---------------------------------------------------------------------------
// Relabelling and rankings
// ---------------------------------------------------------------------------

// Relabel candidates: sigma[u] is the new id of candidate u, i.e.
// x <' y in the result iff sigma^-1(x) < sigma^-1(y) in the input.
inline PartialOrder relabel(const PartialOrder& order, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != order.n)
    raise(ErrorKind::DomainMismatch, "permutation size does not match candidate count");
  std::vector<Edge> edges;
  edges.reserve(order.hasse_edges.size());
  for (const auto& [u, v] : order.hasse_edges) edges.emplace_back(sigma[u], sigma[v]);
  std::vector<std::string> labels;
  if (!order.labels.empty()) {
    labels.resize(order.n);
    for (int u = 0; u < order.n; ++u) labels[sigma[u]] = order.labels[u];
  }
  return order_from_edges(order.n, std::move(edges), std::move(labels));
}

// Positions 1..n of a total order; position 1 is the top (largest down set).
struct TotalOrderRanking {
  std::vector<int> position;

  int n() const { return static_cast<int>(position.size()); }
};

inline TotalOrderRanking ranking_of(const PartialOrder& order) {
  if (!order.is_total())
    raise(ErrorKind::NotTotalOrder,
          "order with " + std::to_string(order.n) + " candidates is not a chain");
  TotalOrderRanking rk;
  rk.position.resize(order.n);
  for (int x = 0; x < order.n; ++x) rk.position[x] = order.n - order.closure.sizes[x];
  return rk;
}

// ---------------------------------------------------------------------------
// Edge-list file format
//
//   # comment
//   <n>
//   <u> <v>        (u precedes v, ids 0-based)
//
// UTF-8, newline-terminated lines. Duplicate edges are deduplicated; the
// input relation may be any DAG (it is closed and Hasse-reduced on load).
// ---------------------------------------------------------------------------

struct ParseResult {
  PartialOrder order;
  long long duplicates_dropped = 0;
};

inline ParseResult parse_order(std::istream& in, bool require_rooted = false) {
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      long long count = 0;
      char extra;
      if (!(ls >> count) || (ls >> extra))
        raise(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected candidate count");
      if (count < 1) raise(ErrorKind::EmptyInput, "candidate count must be >= 1");
      if (count > 0x7fffffffLL) raise(ErrorKind::Overflow, "candidate count exceeds index range");
      n = static_cast<int>(count);
      continue;
    }
    long long u = 0, v = 0;
    char extra;
    if (!(ls >> u >> v) || (ls >> extra))
      raise(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'u v'");
    if (u < 0 || u >= n || v < 0 || v >= n)
      raise(ErrorKind::RangeViolation,
            "line " + std::to_string(lineno) + ": candidate id out of range");
    if (u == v)
      raise(ErrorKind::SelfLoop, "line " + std::to_string(lineno) + ": edge (" +
                                     std::to_string(u) + ", " + std::to_string(v) + ")");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  if (n < 0) raise(ErrorKind::EmptyInput, "no candidate count line found");

  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  long long dropped = edges.end() - last;
  edges.erase(last, edges.end());

  ParseResult result;
  result.order = order_from_edges(n, std::move(edges));
  result.duplicates_dropped = dropped;
  if (require_rooted) require_single_root(result.order, "parsed order");
  return result;
}

inline ParseResult parse_order_text(const std::string& text, bool require_rooted = false) {
  std::istringstream in(text);
  return parse_order(in, require_rooted);
}

inline PartialOrder load_order(const std::string& path, bool require_rooted = false) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open '" + path + "'");
  return parse_order(in, require_rooted).order;
}

inline void write_order(std::ostream& os, const PartialOrder& order) {
  os << order.n << "\n";
  for (const auto& [u, v] : order.hasse_edges) os << u << " " << v << "\n";
}

// Optional label map: one "id<TAB>label" per line. Unlisted candidates keep
// empty labels; ids must be unique and in range.
inline std::vector<std::string> parse_label_map(std::istream& in, int n) {
  std::vector<std::string> labels(n);
  std::vector<char> seen(n, 0);
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos)
      raise(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'id<TAB>label'");
    long long id = -1;
    try {
      id = std::stoll(line.substr(start, tab - start));
    } catch (...) {
      raise(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad candidate id");
    }
    if (id < 0 || id >= n)
      raise(ErrorKind::RangeViolation,
            "line " + std::to_string(lineno) + ": candidate id out of range");
    if (seen[id])
      raise(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": duplicate candidate id");
    seen[id] = 1;
    labels[id] = line.substr(tab + 1);
  }
  return labels;
}

inline std::vector<std::string> load_label_map(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open '" + path + "'");
  return parse_label_map(in, n);
}

}  // namespace posim
