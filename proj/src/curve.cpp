#include "tropcert/curve.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace tropcert {

TropicalCurve::TropicalCurve(std::size_t rank, std::vector<RatVec> vertices, std::vector<BoundedEdge> edges,
                             std::vector<Ray> rays)
    : rank_(rank), vertices_(std::move(vertices)), edges_(std::move(edges)), rays_(std::move(rays)) {
  if (rank_ == 0) throw Error(ErrorCode::MalformedCurve, "rank must be positive");
  if (vertices_.empty()) throw Error(ErrorCode::MalformedCurve, "curve has no vertices");
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].size() != rank_)
      throw Error(ErrorCode::MalformedCurve, "vertex " + std::to_string(i) + " has wrong dimension");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.u >= vertices_.size() || e.v >= vertices_.size())
      throw Error(ErrorCode::MalformedCurve, "edge " + std::to_string(i) + " endpoint out of range");
    if (e.weight <= 0) throw Error(ErrorCode::MalformedCurve, "edge " + std::to_string(i) + " weight not positive");
  }
  for (std::size_t i = 0; i < rays_.size(); ++i) {
    const auto& r = rays_[i];
    if (r.base >= vertices_.size())
      throw Error(ErrorCode::MalformedCurve, "ray " + std::to_string(i) + " base out of range");
    if (r.direction.size() != rank_)
      throw Error(ErrorCode::MalformedCurve, "ray " + std::to_string(i) + " has wrong dimension");
    if (r.weight <= 0) throw Error(ErrorCode::MalformedCurve, "ray " + std::to_string(i) + " weight not positive");
    if (is_zero(r.direction)) throw Error(ErrorCode::MalformedCurve, "ray " + std::to_string(i) + " has zero direction");
    if (primitive_vector(to_rat(r.direction)).direction != r.direction)
      throw Error(ErrorCode::MalformedCurve, "ray " + std::to_string(i) + " direction is not primitive");
  }
}

std::vector<TropicalCurve::Incidence> TropicalCurve::incidences(std::size_t vertex) const {
  std::vector<Incidence> out;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].u == vertex) out.push_back({false, i, edges_[i].v});
    else if (edges_[i].v == vertex) out.push_back({false, i, edges_[i].u});
  }
  for (std::size_t i = 0; i < rays_.size(); ++i)
    if (rays_[i].base == vertex) out.push_back({true, i, vertex});
  return out;
}

IntVec TropicalCurve::outgoing_direction(std::size_t vertex, const Incidence& inc) const {
  if (inc.is_ray) return rays_[inc.index].direction;
  return primitive_vector(sub(vertices_[inc.other], vertices_[vertex])).direction;
}

RatVec TropicalCurve::displacement(std::size_t edge) const {
  return sub(vertices_[edges_[edge].v], vertices_[edges_[edge].u]);
}

// ---------------------------------------------------------------------------

bool MetricGraph::connected() const {
  if (num_vertices == 0) return false;
  const auto inc = incident_edges();
  std::vector<bool> seen(num_vertices, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t x = q.front();
    q.pop();
    for (std::size_t e : inc[x]) {
      const std::size_t y = edges[e].u == x ? edges[e].v : edges[e].u;
      if (!seen[y]) {
        seen[y] = true;
        ++count;
        q.push(y);
      }
    }
  }
  return count == num_vertices;
}

std::vector<std::vector<std::size_t>> MetricGraph::incident_edges() const {
  std::vector<std::vector<std::size_t>> inc(num_vertices);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    inc[edges[i].u].push_back(i);
    if (edges[i].v != edges[i].u) inc[edges[i].v].push_back(i);
  }
  return inc;
}

const ItemVerdict* ValidationReport::first_failure() const {
  for (const auto& item : items)
    if (!item.ok) return &item;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Embedding

namespace {

struct Cell {
  RatVec base;
  RatVec dir;
  bool bounded = true;  // parameter range (0,1) if bounded, (0,inf) otherwise
};

bool in_open_range(const Rat& t, bool bounded) { return t > 0 && (!bounded || t < 1); }

// Open parameter interval [lo, hi] on a common line; nullopt encodes infinity.
struct Interval {
  std::optional<Rat> lo;
  std::optional<Rat> hi;
};

std::optional<RatVec> open_interiors_meet(const Cell& a, const Cell& b) {
  if (const auto lambda = parallel_factor(b.dir, a.dir)) {
    const RatVec w = sub(b.base, a.base);
    Rat t0 = 0;
    if (!is_zero(w)) {
      const auto f = parallel_factor(w, a.dir);
      if (!f) return std::nullopt;  // distinct parallel lines
      t0 = *f;
    }
    Interval ia{Rat(0), a.bounded ? std::optional<Rat>(Rat(1)) : std::nullopt};
    Interval ib;
    if (b.bounded) {
      const Rat t1 = t0 + *lambda;
      ib = {std::min(t0, t1), std::max(t0, t1)};
    } else if (*lambda > 0) {
      ib = {t0, std::nullopt};
    } else {
      ib = {std::nullopt, t0};
    }
    // ia.lo is always finite
    Rat lo = *ia.lo;
    if (ib.lo && *ib.lo > lo) lo = *ib.lo;
    std::optional<Rat> hi = ia.hi;
    if (ib.hi && (!hi || *ib.hi < *hi)) hi = ib.hi;
    if (hi && !(lo < *hi)) return std::nullopt;
    const Rat t = hi ? Rat((lo + *hi) / 2) : Rat(lo + 1);
    return add(a.base, scale(t, a.dir));
  }
  const std::size_t n = a.base.size();
  RatMatrix m(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    m(k, 0) = a.dir[k];
    m(k, 1) = -b.dir[k];
  }
  const auto st = solve_rational(m, sub(b.base, a.base));
  if (!st) return std::nullopt;
  if (!in_open_range((*st)[0], a.bounded) || !in_open_range((*st)[1], b.bounded)) return std::nullopt;
  return add(a.base, scale((*st)[0], a.dir));
}

std::optional<Rat> interior_parameter(const RatVec& point, const Cell& cell) {
  const auto t = parallel_factor(sub(point, cell.base), cell.dir);
  if (t && in_open_range(*t, cell.bounded)) return t;
  return std::nullopt;
}

}  // namespace

ValidationReport validate_embedding(const TropicalCurve& c, Execution exec) {
  ValidationReport report;
  report.check = "embedding";
  const auto& verts = c.vertices();
  const auto& edges = c.edges();
  const auto& rays = c.rays();
  const std::size_t nv = verts.size();

  std::vector<Cell> cells;
  std::vector<std::pair<std::string, std::size_t>> labels;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    cells.push_back({verts[edges[i].u], sub(verts[edges[i].v], verts[edges[i].u]), true});
    labels.emplace_back("edge", i);
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    cells.push_back({verts[rays[i].base], to_rat(rays[i].direction), false});
    labels.emplace_back("ray", i);
  }

  for (std::size_t v = 0; v < nv; ++v) {
    ItemVerdict item{"vertex", {v}, true, "", std::nullopt};
    for (std::size_t w = 0; w < v; ++w)
      if (verts[w] == verts[v]) {
        item.ok = false;
        item.detail = "duplicates vertex " + std::to_string(w);
      }
    if (item.ok && c.valence(v) < 2) {
      item.ok = false;
      item.detail = "valence " + std::to_string(c.valence(v)) + " < 2";
    }
    if (item.ok) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (is_zero(cells[k].dir)) continue;
        if (interior_parameter(verts[v], cells[k])) {
          item.ok = false;
          item.detail = "lies in the relative interior of " + labels[k].first + " " + std::to_string(labels[k].second);
          item.witness = verts[v];
          break;
        }
      }
    }
    report.add(std::move(item));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    ItemVerdict item{"edge", {i}, true, "", std::nullopt};
    if (edges[i].u == edges[i].v) {
      item.ok = false;
      item.detail = "loop edge";
    }
    report.add(std::move(item));
  }
  for (std::size_t i = 0; i < rays.size(); ++i) report.add({"ray", {i}, true, "", std::nullopt});

  MetricGraph g;
  g.num_vertices = nv;
  for (const auto& e : edges) g.edges.push_back({e.u, e.v, Rat(1)});
  report.add({"curve", {}, g.connected(), g.connected() ? "" : "bounded-edge graph is disconnected", std::nullopt});

  // Pairwise relative-interior test. Each row i of the triangle is
  // independent; results are gathered per row and merged in index order.
  const std::size_t m = cells.size();
  std::vector<std::vector<ItemVerdict>> hits(m);
  const auto scan_row = [&](std::size_t i) {
    if (is_zero(cells[i].dir)) return;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (is_zero(cells[j].dir)) continue;
      if (auto p = open_interiors_meet(cells[i], cells[j])) {
        hits[i].push_back({"pair",
                           {i, j},
                           false,
                           labels[i].first + " " + std::to_string(labels[i].second) + " meets " + labels[j].first +
                               " " + std::to_string(labels[j].second) + " in their relative interiors",
                           std::move(p)});
      }
    }
  };
  const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < mm; ++i) scan_row(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < mm; ++i) scan_row(static_cast<std::size_t>(i));
  }
  for (auto& row : hits)
    for (auto& h : row) report.add(std::move(h));
  return report;
}

// ---------------------------------------------------------------------------

ValidationReport check_balancing(const TropicalCurve& c) {
  ValidationReport report;
  report.check = "balancing";
  for (std::size_t v = 0; v < c.num_vertices(); ++v) {
    RatVec residual(c.rank(), Rat(0));
    for (const auto& inc : c.incidences(v)) {
      const long w = inc.is_ray ? c.rays()[inc.index].weight : c.edges()[inc.index].weight;
      const IntVec dir = c.outgoing_direction(v, inc);
      for (std::size_t k = 0; k < c.rank(); ++k) residual[k] += Rat(dir[k] * w);
    }
    const bool ok = is_zero(residual);
    report.add({"vertex", {v}, ok, ok ? "" : "weighted directions do not sum to zero", residual});
  }
  return report;
}

std::optional<SmoothStar> smooth_star(const TropicalCurve& c, std::size_t vertex, std::string* reason) {
  auto fail = [&](std::string why) -> std::optional<SmoothStar> {
    if (reason) *reason = std::move(why);
    return std::nullopt;
  };
  const auto inc = c.incidences(vertex);
  if (inc.size() < 2) return fail("valence below 2");
  const std::size_t d = inc.size() - 1;
  if (d > c.rank()) return fail("valence exceeds rank + 1");
  SmoothStar star;
  star.vertex = vertex;
  star.d = d;
  IntVec sum(c.rank(), Int(0));
  for (const auto& i : inc) {
    const long w = i.is_ray ? c.rays()[i.index].weight : c.edges()[i.index].weight;
    if (w != 1) return fail(std::string(i.is_ray ? "ray " : "edge ") + std::to_string(i.index) + " has weight " + std::to_string(w));
    IntVec dir = c.outgoing_direction(vertex, i);
    if (std::find(star.directions.begin(), star.directions.end(), dir) != star.directions.end())
      return fail("repeated direction");
    for (std::size_t k = 0; k < c.rank(); ++k) sum[k] += dir[k];
    star.directions.push_back(std::move(dir));
    star.cells.push_back(i);
  }
  if (!is_zero(sum)) return fail("directions do not sum to zero");
  const std::vector<IntVec> basis(star.directions.begin() + 1, star.directions.end());
  if (!extends_to_unimodular_basis(basis, c.rank())) {
    const auto inv = smith_invariants(IntMatrix::from_rows(basis, c.rank()));
    std::string s = "directions span a non-saturated lattice, invariants [";
    for (std::size_t i = 0; i < inv.size(); ++i) s += (i ? "," : "") + inv[i].get_str();
    return fail(s + "]");
  }
  return star;
}

SmoothnessResult check_smoothness(const TropicalCurve& c) {
  SmoothnessResult out;
  out.report.check = "smoothness";
  for (std::size_t i = 0; i < c.edges().size(); ++i) {
    const long w = c.edges()[i].weight;
    out.report.add({"edge", {i}, w == 1, w == 1 ? "" : "weight " + std::to_string(w), std::nullopt});
  }
  for (std::size_t i = 0; i < c.rays().size(); ++i) {
    const long w = c.rays()[i].weight;
    out.report.add({"ray", {i}, w == 1, w == 1 ? "" : "weight " + std::to_string(w), std::nullopt});
  }
  for (std::size_t v = 0; v < c.num_vertices(); ++v) {
    std::string reason;
    auto star = smooth_star(c, v, &reason);
    ItemVerdict item{"vertex", {v}, star.has_value(), star ? "d=" + std::to_string(star->d) : reason, std::nullopt};
    out.report.add(std::move(item));
    out.stars.push_back(std::move(star));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> neighbour_sets(const TropicalCurve& c) {
  std::vector<std::set<std::size_t>> sets(c.num_vertices());
  for (const auto& e : c.edges()) {
    if (e.u == e.v) continue;
    sets[e.u].insert(e.v);
    sets[e.v].insert(e.u);
  }
  std::vector<std::vector<std::size_t>> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out[i].assign(sets[i].begin(), sets[i].end());
  return out;
}

ThreeColoring three_coloring_order(const TropicalCurve& c) {
  const auto nbrs = neighbour_sets(c);
  const std::size_t n = nbrs.size();
  std::vector<std::size_t> degree(n);
  std::vector<bool> removed(n, false);
  std::set<std::size_t> eligible;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = nbrs[v].size();
    if (degree[v] <= 2) eligible.insert(v);
  }
  std::vector<std::size_t> peeled;
  while (!eligible.empty()) {
    const std::size_t v = *eligible.begin();
    eligible.erase(eligible.begin());
    removed[v] = true;
    peeled.push_back(v);
    for (std::size_t w : nbrs[v]) {
      if (removed[w]) continue;
      if (--degree[w] == 2) eligible.insert(w);
    }
  }
  ThreeColoring out;
  if (peeled.size() == n) {
    out.colorable = true;
    out.order.assign(peeled.rbegin(), peeled.rend());
  } else {
    for (std::size_t v = 0; v < n; ++v)
      if (!removed[v]) out.stalled.push_back(v);
  }
  return out;
}

MetricGraph skeleton(const TropicalCurve& c) {
  MetricGraph g;
  g.num_vertices = c.num_vertices();
  for (const auto& e : c.edges()) {
    const std::size_t a = std::min(e.u, e.v);
    const std::size_t b = std::max(e.u, e.v);
    g.edges.push_back({a, b, lattice_length(c.vertices()[a], c.vertices()[b])});
  }
  for (std::size_t i = 0; i < c.rays().size(); ++i) g.legs.push_back({c.rays()[i].base, i});
  return g;
}

std::size_t first_betti(const MetricGraph& g) {
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");
  return g.edges.size() + 1 - g.num_vertices;
}

}  // namespace tropcert
