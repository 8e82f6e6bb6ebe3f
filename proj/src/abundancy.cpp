#include "tropcert/abundancy.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace tropcert {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::vector<std::size_t> spanning_tree(const MetricGraph& g) {
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "spanning tree of a disconnected graph");
  const auto inc = g.incident_edges();
  std::vector<bool> seen(g.num_vertices, false);
  std::vector<std::size_t> tree;
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const std::size_t x = q.front();
    q.pop();
    for (std::size_t e : inc[x]) {
      const std::size_t y = g.edges[e].u == x ? g.edges[e].v : g.edges[e].u;
      if (seen[y]) continue;
      seen[y] = true;
      tree.push_back(e);
      q.push(y);
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

std::vector<std::size_t> spanning_tree_in_order(const MetricGraph& g, const std::vector<std::size_t>& order) {
  DisjointSets ds(g.num_vertices);
  std::vector<std::size_t> tree;
  for (std::size_t e : order) {
    if (e >= g.edges.size()) throw Error(ErrorCode::GraphMismatch, "edge index out of range");
    if (ds.unite(g.edges[e].u, g.edges[e].v)) tree.push_back(e);
  }
  if (g.num_vertices == 0 || tree.size() + 1 != g.num_vertices)
    throw Error(ErrorCode::Disconnected, "edge order does not span the graph");
  std::sort(tree.begin(), tree.end());
  return tree;
}

CycleBasis cycle_basis(const MetricGraph& g, const std::vector<std::size_t>& tree_edges) {
  const std::size_t nv = g.num_vertices;
  const std::size_t ne = g.edges.size();
  std::vector<bool> in_tree(ne, false);
  DisjointSets ds(nv);
  for (std::size_t e : tree_edges) {
    if (e >= ne || in_tree[e]) throw Error(ErrorCode::NotSpanningTree, "invalid or repeated tree edge");
    in_tree[e] = true;
    if (!ds.unite(g.edges[e].u, g.edges[e].v)) throw Error(ErrorCode::NotSpanningTree, "tree edges contain a cycle");
  }
  if (nv == 0 || tree_edges.size() + 1 != nv) throw Error(ErrorCode::NotSpanningTree, "tree does not span the graph");

  // root the tree at vertex 0
  std::vector<std::vector<std::size_t>> adj(nv);
  for (std::size_t e : tree_edges) {
    adj[g.edges[e].u].push_back(e);
    adj[g.edges[e].v].push_back(e);
  }
  std::vector<std::size_t> parent(nv, nv), parent_edge(nv, ne), depth(nv, 0);
  std::vector<bool> seen(nv, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const std::size_t x = q.front();
    q.pop();
    for (std::size_t e : adj[x]) {
      const std::size_t y = g.edges[e].u == x ? g.edges[e].v : g.edges[e].u;
      if (seen[y]) continue;
      seen[y] = true;
      parent[y] = x;
      parent_edge[y] = e;
      depth[y] = depth[x] + 1;
      q.push(y);
    }
  }

  CycleBasis basis;
  basis.num_vertices = nv;
  basis.tree.assign(tree_edges.begin(), tree_edges.end());
  std::sort(basis.tree.begin(), basis.tree.end());
  for (const auto& e : g.edges) basis.orientation.push_back({e.u, e.v});

  const auto sign = [&](std::size_t e, std::size_t from, std::size_t to) {
    (void)to;
    return g.edges[e].u == from ? 1 : -1;
  };
  for (std::size_t eps = 0; eps < ne; ++eps) {
    if (in_tree[eps]) continue;
    std::vector<int> coeff(ne, 0);
    const std::size_t lo = std::min(g.edges[eps].u, g.edges[eps].v);
    const std::size_t hi = std::max(g.edges[eps].u, g.edges[eps].v);
    coeff[eps] = sign(eps, lo, hi);
    // tree path hi -> lo: climb from hi up to the common ancestor, then down to lo
    std::size_t a = hi, b = lo;
    std::vector<std::size_t> down;  // vertices on the lo side, climbed from lo
    while (depth[a] > depth[b]) {
      coeff[parent_edge[a]] += sign(parent_edge[a], a, parent[a]);
      a = parent[a];
    }
    while (depth[b] > depth[a]) {
      down.push_back(b);
      b = parent[b];
    }
    while (a != b) {
      coeff[parent_edge[a]] += sign(parent_edge[a], a, parent[a]);
      a = parent[a];
      down.push_back(b);
      b = parent[b];
    }
    for (std::size_t x : down) coeff[parent_edge[x]] += sign(parent_edge[x], parent[x], x);
    basis.non_tree.push_back(eps);
    basis.cycles.push_back(std::move(coeff));
  }
  return basis;
}

AbundancyMatrix abundancy_matrix(const TropicalCurve& c, const CycleBasis& basis) {
  const std::size_t ne = c.edges().size();
  if (basis.orientation.size() != ne || basis.num_vertices != c.num_vertices())
    throw Error(ErrorCode::GraphMismatch, "cycle basis belongs to a different graph");
  const std::size_t n = c.rank();
  AbundancyMatrix out;
  out.rank_n = n;
  out.orientation = basis.orientation;
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& o = basis.orientation[e];
    const auto& ce = c.edges()[e];
    const bool same = (o.tail == ce.u && o.head == ce.v) || (o.tail == ce.v && o.head == ce.u);
    if (!same) throw Error(ErrorCode::GraphMismatch, "edge " + std::to_string(e) + " endpoints differ");
    out.edge_vectors.push_back(sub(c.vertices()[o.head], c.vertices()[o.tail]));
  }
  out.matrix = RatMatrix(basis.cycles.size() * n, ne);
  for (std::size_t ci = 0; ci < basis.cycles.size(); ++ci) {
    if (basis.cycles[ci].size() != ne) throw Error(ErrorCode::GraphMismatch, "cycle length differs from edge count");
    for (std::size_t e = 0; e < ne; ++e) {
      const int a = basis.cycles[ci][e];
      if (a == 0) continue;
      for (std::size_t k = 0; k < n; ++k) out.matrix(ci * n + k, e) = a * out.edge_vectors[e][k];
    }
  }
  return out;
}

SuperabundanceReport superabundance_from_matrix(const AbundancyMatrix& m, std::size_t b1) {
  SuperabundanceReport r;
  r.b1 = b1;
  r.num_edges = m.matrix.cols();
  r.required = b1 * m.rank_n;
  const RankProfile profile = rank_profile(m.matrix);
  r.rank = profile.rank;
  r.surjective = r.rank == r.required;
  r.kernel_dim = r.num_edges - r.rank;
  r.expected_dim = static_cast<long>(r.num_edges) - static_cast<long>(r.required);
  if (r.surjective) {
    r.minor_rows = profile.pivot_rows;
    r.minor_cols = profile.pivot_cols;
    RatMatrix minor(r.rank, r.rank);
    for (std::size_t i = 0; i < r.rank; ++i)
      for (std::size_t j = 0; j < r.rank; ++j) minor(i, j) = m.matrix(r.minor_rows[i], r.minor_cols[j]);
    r.minor_determinant = determinant(minor);
  }
  return r;
}

SuperabundanceReport check_non_superabundant(const TropicalCurve& c) {
  const MetricGraph g = skeleton(c);
  const std::size_t b1 = first_betti(g);
  const CycleBasis basis = cycle_basis(g, spanning_tree(g));
  return superabundance_from_matrix(abundancy_matrix(c, basis), b1);
}

CdmyResult cdmy_condition(const TropicalCurve& c, const CycleBasis& basis, const std::vector<IntVec>& frame) {
  const std::size_t n = c.rank();
  if (frame.size() != n) throw Error(ErrorCode::FrameNotBasis, "frame must have n vectors");
  for (const auto& v : frame)
    if (v.size() != n) throw Error(ErrorCode::FrameNotBasis, "frame vector of wrong length");
  const Int det = determinant(IntMatrix::from_rows(frame, n));
  if (det != 1 && det != -1) throw Error(ErrorCode::FrameNotBasis, "frame is not unimodular");

  const AbundancyMatrix m = abundancy_matrix(c, basis);
  const std::size_t ne = c.edges().size();
  CdmyResult out;
  out.holds = true;
  for (std::size_t ci = 0; ci < basis.cycles.size(); ++ci) {
    for (std::size_t i = 0; i < n; ++i) {
      FramePreimage w{ci, i, std::nullopt, RatVec(ne, Rat(0))};
      const RatVec vi = to_rat(frame[i]);
      for (std::size_t e = 0; e < ne && !w.edge; ++e) {
        const int a = basis.cycles[ci][e];
        if (a == 0) continue;
        bool exclusive = true;
        for (std::size_t cj = 0; cj < basis.cycles.size(); ++cj)
          if (cj != ci && basis.cycles[cj][e] != 0) exclusive = false;
        if (!exclusive) continue;
        const auto lambda = parallel_factor(m.edge_vectors[e], vi);
        if (!lambda) continue;
        w.edge = e;
        w.lengths[e] = 1 / (a * *lambda);
      }
      if (!w.edge) out.holds = false;
      out.witnesses.push_back(std::move(w));
    }
  }
  return out;
}

RatVec apply_abundancy(const AbundancyMatrix& m, const RatVec& lengths) {
  if (lengths.size() != m.matrix.cols()) throw Error(ErrorCode::DimensionMismatch, "length vector size");
  RatVec out(m.matrix.rows(), Rat(0));
  for (std::size_t r = 0; r < m.matrix.rows(); ++r)
    for (std::size_t e = 0; e < m.matrix.cols(); ++e) out[r] += m.matrix(r, e) * lengths[e];
  return out;
}

}  // namespace tropcert
