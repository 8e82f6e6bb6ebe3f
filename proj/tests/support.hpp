#pragma once

// Fixtures, random curve generators and independent oracles shared by the
// unit tests, the acceptance runner and the benchmark.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "tropcert/abundancy.hpp"
#include "tropcert/curve.hpp"
#include "tropcert/fan.hpp"
#include "tropcert/lattice.hpp"
#include "tropcert/special_fiber.hpp"

namespace fixtures {

using namespace tropcert;

inline RatVec pt(std::initializer_list<long> xs) {
  RatVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline IntVec iv(std::initializer_list<long> xs) {
  IntVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline std::vector<BoundedEdge> hexagon_edges() {
  return {{0, 1, 1}, {0, 5, 1}, {1, 2, 1}, {5, 4, 1}, {2, 3, 1}, {4, 3, 1}};
}

inline TropicalCurve hexagon() {
  return TropicalCurve(2, {pt({0, 0}), pt({1, 0}), pt({2, 1}), pt({2, 2}), pt({1, 2}), pt({0, 1})}, hexagon_edges(),
                       {{0, iv({-1, -1}), 1},
                        {1, iv({0, -1}), 1},
                        {2, iv({1, 0}), 1},
                        {3, iv({1, 1}), 1},
                        {4, iv({0, 1}), 1},
                        {5, iv({-1, 0}), 1}});
}

inline TropicalCurve hexagon3d() {
  return TropicalCurve(
      3, {pt({0, 0, 0}), pt({1, 0, 0}), pt({2, 1, 0}), pt({2, 2, 0}), pt({1, 2, 0}), pt({0, 1, 0})}, hexagon_edges(),
      {{0, iv({-1, -1, 0}), 1},
       {1, iv({0, -1, 0}), 1},
       {2, iv({1, 0, 0}), 1},
       {3, iv({1, 1, 0}), 1},
       {4, iv({0, 1, 0}), 1},
       {5, iv({-1, 0, 0}), 1}});
}

inline TropicalCurve tropical_line() {
  return TropicalCurve(2, {pt({0, 0})}, {}, {{0, iv({1, 0}), 1}, {0, iv({0, 1}), 1}, {0, iv({-1, -1}), 1}});
}

inline TropicalCurve two_vertex() {
  return TropicalCurve(2, {pt({0, 0}), pt({1, 0})}, {{0, 1, 1}},
                       {{0, iv({0, 1}), 1}, {0, iv({-1, -1}), 1}, {1, iv({0, -1}), 1}, {1, iv({1, 1}), 1}});
}

// Two hexagons sharing the edge (2,1)-(2,2); genus 2.
inline TropicalCurve double_hexagon(bool in_r3 = false) {
  const std::vector<std::array<long, 2>> p = {{0, 0}, {1, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 1},
                                              {3, 1}, {4, 2}, {4, 3}, {3, 3}};
  const std::vector<BoundedEdge> edges = {{0, 1, 1}, {0, 5, 1}, {1, 2, 1}, {5, 4, 1}, {2, 3, 1}, {4, 3, 1},
                                          {2, 6, 1}, {6, 7, 1}, {7, 8, 1}, {3, 9, 1}, {9, 8, 1}};
  const std::vector<std::pair<std::size_t, std::array<long, 2>>> rays = {
      {0, {-1, -1}}, {1, {0, -1}}, {5, {-1, 0}}, {4, {0, 1}}, {6, {0, -1}}, {7, {1, 0}}, {8, {1, 1}}, {9, {0, 1}}};
  std::vector<RatVec> vs;
  for (const auto& q : p) vs.push_back(in_r3 ? pt({q[0], q[1], 0}) : pt({q[0], q[1]}));
  std::vector<Ray> rs;
  for (const auto& [b, d] : rays) rs.push_back({b, in_r3 ? iv({d[0], d[1], 0}) : iv({d[0], d[1]}), 1});
  return TropicalCurve(in_r3 ? 3 : 2, vs, edges, rs);
}

// A tree in R^3 whose vertices have d = 2 < n.
inline TropicalCurve tree3d() {
  return TropicalCurve(3, {pt({0, 0, 0}), pt({1, 0, 0})}, {{0, 1, 1}},
                       {{0, iv({0, 1, 0}), 1}, {0, iv({-1, -1, 0}), 1}, {1, iv({0, 0, 1}), 1}, {1, iv({1, 0, -1}), 1}});
}

// Edge from the origin to (1,1,1) with coordinate rays at both ends; d = n = 3.
inline TropicalCurve spatial_edge() {
  return TropicalCurve(3, {pt({0, 0, 0}), pt({1, 1, 1})}, {{0, 1, 1}},
                       {{0, iv({-1, 0, 0}), 1},
                        {0, iv({0, -1, 0}), 1},
                        {0, iv({0, 0, -1}), 1},
                        {1, iv({1, 0, 0}), 1},
                        {1, iv({0, 1, 0}), 1},
                        {1, iv({0, 0, 1}), 1}});
}

// K4 adjacency (not balanced; only the graph matters).
inline TropicalCurve k4() {
  return TropicalCurve(2, {pt({0, 0}), pt({4, 0}), pt({0, 4}), pt({1, 1})},
                       {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}}, {});
}

// Two bounded edges crossing at (1,1); balancing is irrelevant.
inline TropicalCurve crossing() {
  return TropicalCurve(2, {pt({0, 0}), pt({2, 2}), pt({2, 0}), pt({0, 2})}, {{0, 1, 1}, {2, 3, 1}, {0, 2, 1}, {1, 3, 1}}, {});
}

// Balanced, smooth, 3-colorable and embedded.
inline std::vector<std::pair<const char*, TropicalCurve>> valid_fixtures() {
  return {{"hexagon", hexagon()},       {"hexagon3d", hexagon3d()},           {"line", tropical_line()},
          {"two_vertex", two_vertex()}, {"double_hexagon", double_hexagon()}, {"double_hexagon3d", double_hexagon(true)},
          {"tree3d", tree3d()},         {"spatial_edge", spatial_edge()}};
}

// ---- random curves -----------------------------------------------------------

// Dual curve of the regular subdivision of the lattice triangle of the given
// degree induced by heights. `smooth` adds a strictly convex quadratic so
// every lattice point is used (unimodular triangulation). Returns nullopt on
// degenerate lifts.
inline std::optional<TropicalCurve> random_planar_curve(std::mt19937_64& rng, int degree, bool smooth) {
  std::vector<std::array<long, 3>> pts;
  std::uniform_int_distribution<long> noise(0, smooth ? 400 : 60);
  for (long i = 0; i <= degree; ++i)
    for (long j = 0; i + j <= degree; ++j) {
      const long base = smooth ? 1000 * (i * i + i * j + j * j) : 0;
      pts.push_back({i, j, base + noise(rng)});
    }
  const std::size_t np = pts.size();
  std::vector<std::array<std::size_t, 3>> tris;
  long area2 = 0;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = a + 1; b < np; ++b)
      for (std::size_t c = b + 1; c < np; ++c) {
        const long ux = pts[b][0] - pts[a][0], uy = pts[b][1] - pts[a][1], uz = pts[b][2] - pts[a][2];
        const long vx = pts[c][0] - pts[a][0], vy = pts[c][1] - pts[a][1], vz = pts[c][2] - pts[a][2];
        long nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
        if (nz == 0) continue;
        if (nz < 0) nx = -nx, ny = -ny, nz = -nz;
        bool lower = true, touching = false;
        for (std::size_t p = 0; p < np && lower; ++p) {
          if (p == a || p == b || p == c) continue;
          const long s = nx * (pts[p][0] - pts[a][0]) + ny * (pts[p][1] - pts[a][1]) + nz * (pts[p][2] - pts[a][2]);
          if (s < 0) lower = false;
          if (s == 0) touching = true;
        }
        if (!lower) continue;
        if (touching) return std::nullopt;
        tris.push_back({a, b, c});
        area2 += nz;
      }
  if (area2 != static_cast<long>(degree) * degree) return std::nullopt;

  std::vector<RatVec> vertices;
  for (const auto& t : tris) {
    const auto& A = pts[t[0]];
    const auto& B = pts[t[1]];
    const auto& C = pts[t[2]];
    // <B-A, x> = hA - hB, <C-A, x> = hA - hC
    const Rat a11 = B[0] - A[0], a12 = B[1] - A[1], a21 = C[0] - A[0], a22 = C[1] - A[1];
    const Rat r1 = A[2] - B[2], r2 = A[2] - C[2];
    const Rat det = a11 * a22 - a12 * a21;
    vertices.push_back({Rat((r1 * a22 - a12 * r2) / det), Rat((a11 * r2 - r1 * a21) / det)});
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> owners;
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      std::size_t p = tris[t][k], q = tris[t][(k + 1) % 3];
      owners[{std::min(p, q), std::max(p, q)}].push_back(t);
    }
  std::vector<BoundedEdge> edges;
  std::vector<Ray> rays;
  for (const auto& [seg, ts] : owners) {
    const long dx = pts[seg.second][0] - pts[seg.first][0], dy = pts[seg.second][1] - pts[seg.first][1];
    const long w = std::gcd(std::abs(dx), std::abs(dy));
    if (ts.size() == 2) {
      edges.push_back({ts[0], ts[1], w});
      continue;
    }
    const auto& tri = tris[ts[0]];
    const std::size_t other = tri[0] != seg.first && tri[0] != seg.second ? tri[0]
                              : tri[1] != seg.first && tri[1] != seg.second ? tri[1]
                                                                             : tri[2];
    long rx = -dy / w, ry = dx / w;
    if (rx * (pts[other][0] - pts[seg.first][0]) + ry * (pts[other][1] - pts[seg.first][1]) < 0) rx = -rx, ry = -ry;
    rays.push_back({ts[0], iv({rx, ry}), w});
  }
  return TropicalCurve(2, std::move(vertices), std::move(edges), std::move(rays));
}

inline TropicalCurve sample_planar_curve(std::mt19937_64& rng, int degree, bool smooth) {
  for (;;)
    if (auto c = random_planar_curve(rng, degree, smooth)) return *c;
}

inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 12) {
  IntMatrix m = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    const int k = coin(rng);
    for (std::size_t c = 0; c < n; ++c) {
      if (k == 0) std::swap(m(i, c), m(j, c));
      else if (k == 1) m(i, c) += m(j, c);
      else if (k == 2) m(i, c) -= m(j, c);
      else m(i, c) = -m(i, c);
    }
  }
  return m;
}

// Applies x -> M x + shift to a curve of rank r <= M.rows(), padding with
// zero coordinates first.
inline TropicalCurve transform(const TropicalCurve& c, const IntMatrix& m, const RatVec& shift = {}) {
  const std::size_t n = m.rows();
  const auto linear = [&](const RatVec& x) {
    RatVec y(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < x.size(); ++k) y[i] += Rat(m(i, k)) * x[k];
    return y;
  };
  std::vector<RatVec> vs;
  for (const auto& v : c.vertices()) vs.push_back(shift.empty() ? linear(v) : add(linear(v), shift));
  std::vector<Ray> rs;
  for (const auto& r : c.rays()) {
    IntVec di;
    for (const Rat& x : linear(to_rat(r.direction))) di.push_back(x.get_num());
    rs.push_back({r.base, di, r.weight});
  }
  return TropicalCurve(n, vs, c.edges(), rs);
}

inline TropicalCurve lift_to_r3(const TropicalCurve& c, std::mt19937_64& rng) {
  return transform(c, random_unimodular(rng, 3));
}

// ---- oracles -----------------------------------------------------------------

// Textbook Gaussian elimination over Q.
inline std::size_t oracle_rank(RatMatrix a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(r, k), a(p, k));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rat f = a(i, c) / a(r, c);
      for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) -= f * a(r, k);
    }
    ++r;
  }
  return r;
}

// Cycle-space dimension: #E - rank of the incidence matrix over GF(2).
inline std::size_t oracle_cycle_rank_gf2(const MetricGraph& g) {
  std::vector<std::vector<bool>> rows(g.num_vertices, std::vector<bool>(g.edges.size(), false));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    rows[g.edges[e].u][e] = !rows[g.edges[e].u][e];
    rows[g.edges[e].v][e] = !rows[g.edges[e].v][e];
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < g.edges.size() && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rank], rows[p]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && rows[i][c])
        for (std::size_t k = 0; k < g.edges.size(); ++k) rows[i][k] = rows[i][k] != rows[rank][k];
    ++rank;
  }
  return g.edges.size() - rank;
}

using Poly = std::vector<Rat>;  // coefficients in epsilon, lowest first

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline std::pair<std::size_t, Rat> leading_term(const Poly& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) return {i, p[i]};
  return {p.size(), Rat(0)};
}

// Limit of the character m along the line as it approaches the hyperplane
// with index `hyperplane`: substitute (s, u) = p + eps q with f_i(p) = 0,
// expand every chart coordinate as a polynomial in eps, cancel the common
// power and read off the ratio of leading coefficients. nullopt if the limit
// is zero or infinite.
inline std::optional<Rat> symbolic_limit(const LineWitness& w, const std::vector<IntVec>& chart_basis,
                                         std::size_t hyperplane, const IntVec& m) {
  const std::size_t d = w.d;
  const std::size_t n = chart_basis.size();
  const Rat ps = w.coeffs(1, hyperplane), pu = -w.coeffs(0, hyperplane);
  const Rat qs = pu == 0 ? Rat(0) : Rat(1), qu = pu == 0 ? Rat(1) : Rat(0);
  const auto form = [&](std::size_t j) -> Poly {
    return {w.coeffs(0, j) * ps + w.coeffs(1, j) * pu, w.coeffs(0, j) * qs + w.coeffs(1, j) * qu};
  };
  Poly num{Rat(1)}, den{Rat(1)};
  Rat constant = 1;
  const auto raise = [&](const Poly& f, long e) {
    for (long k = 0; k < std::abs(e); ++k) (e > 0 ? num : den) = poly_mul(e > 0 ? num : den, f);
  };
  for (std::size_t j = 1; j <= n; ++j) {
    const Int pairing = dot(m, chart_basis[j - 1]);
    const long e = pairing.get_si();
    if (j <= d) {
      raise(form(j), e);
      raise(form(0), -e);
    } else {
      for (long k = 0; k < std::abs(e); ++k) constant = e > 0 ? Rat(constant * w.torus[j - d - 1]) : Rat(constant / w.torus[j - d - 1]);
    }
  }
  const auto [on, cn] = leading_term(num);
  const auto [od, cd] = leading_term(den);
  if (on != od || cn == 0 || cd == 0) return std::nullopt;
  return constant * cn / cd;
}

}  // namespace fixtures
