#include "tropcert/special_fiber.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace tropcert {

namespace {

Rat power(const Rat& base, const Int& exponent) {
  if (exponent == 0) return 1;
  if (base == 0) throw Error(ErrorCode::NotTransverse, "zero raised to a nonzero power");
  Rat b = exponent > 0 ? base : Rat(1 / base);
  Int e = exponent > 0 ? exponent : Int(-exponent);
  Rat out = 1;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

Rat minor(const RatMatrix& l, std::size_t i, std::size_t j) { return l(0, i) * l(1, j) - l(1, i) * l(0, j); }

std::vector<IntVec> divisor_characters(const TropicalCurve& c, DivisorRef where) {
  return where.is_ray ? ray_divisor_basis(c, where.index) : divisor_basis(c, where.index).basis;
}

std::size_t hyperplane_of(const ComponentDescriptor& chart, DivisorRef where) {
  for (const auto& div : chart.divisors)
    if (div.shared == !where.is_ray && div.index == where.index) return div.hyperplane;
  throw Error(ErrorCode::GraphMismatch, std::string(where.is_ray ? "ray " : "edge ") + std::to_string(where.index) +
                                            " is not adjacent to vertex " + std::to_string(chart.vertex));
}

// Dual basis b_j^* as rows: row j pairs to delta_{jk} with basis[k].
std::vector<IntVec> dual_basis(const std::vector<IntVec>& basis) {
  const std::size_t n = basis.size();
  IntMatrix cols(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) cols(k, j) = basis[j][k];
  // cols is unimodular; invert over Q and read off the integral result
  std::vector<IntVec> out(n, IntVec(n));
  const RatMatrix q = to_rat(cols);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec ej(n, Rat(0));
    ej[j] = 1;
    // row j of cols^{-1} solves x^T cols = e_j^T, i.e. cols^T x = e_j
    const auto x = solve_rational(q.transposed(), ej);
    for (std::size_t k = 0; k < n; ++k) out[j][k] = (*x)[k].get_num();
  }
  return out;
}

// Seeded sampler of nonzero rationals p/q with |p|, q in [1, kSamplerBound].
// Uses rejection on raw engine output so the stream is identical across
// standard libraries.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  Rat nonzero() {
    const long num = static_cast<long>(uniform(kSamplerBound)) + 1;
    const long den = static_cast<long>(uniform(kSamplerBound)) + 1;
    Rat q(uniform(2) ? -num : num, den);
    q.canonicalize();
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

// A divisor point expressed in a vertex chart.
struct ChartPoint {
  RatVec projective;  // z_0..z_d with z_i = 0
  RatVec torus;       // tau_{d+1..n}
};

ChartPoint to_chart(const ComponentDescriptor& chart, const std::vector<IntVec>& dual, std::size_t hyperplane,
                    const std::vector<IntVec>& characters, const RatVec& values) {
  const std::size_t n = dual.size();
  const std::size_t d = chart.d;
  const auto value_of = [&](const IntVec& m) {
    const auto coords = integer_coordinates(characters, m);
    if (!coords) throw Error(ErrorCode::GraphMismatch, "chart character outside the divisor lattice");
    Rat v = 1;
    for (std::size_t k = 0; k < coords->size(); ++k) v *= power(values[k], (*coords)[k]);
    return v;
  };
  ChartPoint p{RatVec(d + 1, Rat(0)), RatVec(n - d, Rat(0))};
  if (hyperplane == 0) {
    p.projective[1] = 1;
    for (std::size_t j = 2; j <= d; ++j) {
      IntVec m(n);
      for (std::size_t k = 0; k < n; ++k) m[k] = dual[j - 1][k] - dual[0][k];
      p.projective[j] = value_of(m);
    }
  } else {
    p.projective[0] = 1;
    for (std::size_t j = 1; j <= d; ++j)
      if (j != hyperplane) p.projective[j] = value_of(dual[j - 1]);
  }
  for (std::size_t j = d + 1; j <= n; ++j) p.torus[j - d - 1] = value_of(dual[j - 1]);
  return p;
}

// Multiplies every character m by t(m) = prod_k t_k^{m_k} on one component.
void translate(LineWitness& w, const ComponentDescriptor& chart, const RatVec& t) {
  const auto character_value = [&](const IntVec& m) {
    Rat v = 1;
    for (std::size_t k = 0; k < t.size(); ++k) v *= power(t[k], m[k]);
    return v;
  };
  const auto dual = dual_basis(chart.basis);
  for (std::size_t j = 1; j <= chart.d; ++j) {
    const Rat s = character_value(dual[j - 1]);
    w.coeffs(0, j) *= s;
    w.coeffs(1, j) *= s;
  }
  for (std::size_t j = chart.d + 1; j <= dual.size(); ++j) w.torus[j - chart.d - 1] *= character_value(dual[j - 1]);
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(b)] = find(a); }
};

}  // namespace

bool is_transverse(const LineWitness& w) {
  if (w.coeffs.rows() != 2 || w.coeffs.cols() != w.d + 1) return false;
  for (std::size_t i = 0; i <= w.d; ++i)
    for (std::size_t j = i + 1; j <= w.d; ++j)
      if (minor(w.coeffs, i, j) == 0) return false;
  return std::all_of(w.torus.begin(), w.torus.end(), [](const Rat& x) { return x != 0; });
}

RatVec evaluate_at_divisor(const LineWitness& w, const ComponentDescriptor& chart, const TropicalCurve& c,
                           DivisorRef where) {
  const std::size_t n = c.rank();
  const std::size_t d = chart.d;
  if (w.coeffs.rows() != 2 || w.coeffs.cols() != d + 1 || w.torus.size() != n - d)
    throw Error(ErrorCode::DimensionMismatch, "line witness does not match the vertex chart");
  const std::size_t i = hyperplane_of(chart, where);
  for (std::size_t j = 0; j <= d; ++j)
    if (j != i && minor(w.coeffs, i, j) == 0)
      throw Error(ErrorCode::NotTransverse, "line meets hyperplanes " + std::to_string(i) + " and " +
                                                std::to_string(j) + " in the same point");

  RatVec out;
  for (const IntVec& m : divisor_characters(c, where)) {
    // vanishing orders of the chart coordinates cancel along the divisor
    std::vector<Int> pairing(n);
    for (std::size_t j = 0; j < n; ++j) pairing[j] = dot(m, chart.basis[j]);
    Int order0 = 0;
    for (std::size_t j = 0; j < d; ++j) order0 -= pairing[j];
    Rat value = 1;
    for (std::size_t j = 0; j <= d; ++j) {
      if (j == i) continue;
      value *= power(minor(w.coeffs, i, j), j == 0 ? order0 : pairing[j - 1]);
    }
    for (std::size_t j = d; j < n; ++j) value *= power(w.torus[j - d], pairing[j]);
    out.push_back(value);
  }
  return out;
}

RatVec evaluate_at_divisor(const LineWitness& w, const TropicalCurve& c, DivisorRef where) {
  return evaluate_at_divisor(w, component_descriptor(c, w.vertex), c, where);
}

C0Witness construct_witness(const TropicalCurve& c, const std::vector<std::size_t>& order, std::uint64_t seed) {
  const std::size_t nv = c.num_vertices();
  const std::size_t n = c.rank();
  std::vector<ComponentDescriptor> charts;
  std::vector<std::vector<IntVec>> duals;
  for (std::size_t v = 0; v < nv; ++v) {
    charts.push_back(component_descriptor(c, v));
    duals.push_back(dual_basis(charts.back().basis));
  }

  std::vector<std::size_t> position(nv, nv);
  if (order.size() != nv) throw Error(ErrorCode::ColoringViolation, "ordering does not list every vertex once");
  for (std::size_t k = 0; k < nv; ++k) {
    if (order[k] >= nv || position[order[k]] != nv)
      throw Error(ErrorCode::ColoringViolation, "ordering does not list every vertex once");
    position[order[k]] = k;
  }
  const auto nbrs = neighbour_sets(c);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto earlier = std::count_if(nbrs[v].begin(), nbrs[v].end(), [&](std::size_t w) { return position[w] < position[v]; });
    if (earlier >= 3)
      throw Error(ErrorCode::ColoringViolation, "vertex " + std::to_string(v) + " has " + std::to_string(earlier) + " earlier neighbours");
  }

  RationalSampler rng(seed);
  const auto random_row = [&](std::size_t len) {
    RatVec r(len);
    for (auto& x : r) x = rng.nonzero();
    return r;
  };

  C0Witness out;
  out.rank = n;
  out.seed = seed;
  out.order = order;

  for (std::size_t attempt = 1; attempt <= kRetryBudget; ++attempt) {
    std::vector<std::optional<LineWitness>> lines(nv);
    DisjointSets comps(nv);
    std::vector<bool> done(nv, false);
    bool ok = true;

    for (std::size_t v : order) {
      const auto& chart = charts[v];
      const std::size_t d = chart.d;

      struct Constraint {
        std::size_t edge, from;
        ChartPoint point;
      };
      std::vector<Constraint> cons;
      const auto node_point = [&](std::size_t e, std::size_t w) {
        const RatVec x = evaluate_at_divisor(*lines[w], charts[w], c, {false, e});
        return to_chart(chart, duals[v], hyperplane_of(chart, {false, e}), divisor_basis(c, e).basis, x);
      };
      for (const auto& inc : c.incidences(v))
        if (!inc.is_ray && done[inc.other]) cons.push_back({inc.index, inc.other, node_point(inc.index, inc.other)});

      if (cons.size() == 2 && cons[0].point.torus != cons[1].point.torus) {
        const std::size_t w1 = cons[0].from, w2 = cons[1].from;
        if (comps.find(w1) == comps.find(w2)) {
          throw Error(ErrorCode::TorusFactorConflict,
                      "vertex " + std::to_string(v) + " closes a cycle whose nodes prescribe different torus factors");
        }
        // translate the component of w2 so both nodes share the torus factor
        RatVec t(n, Rat(1));
        for (std::size_t j = d; j < n; ++j) {
          const Rat ratio = cons[0].point.torus[j - d] / cons[1].point.torus[j - d];
          for (std::size_t k = 0; k < n; ++k) t[k] *= power(ratio, chart.basis[j][k]);
        }
        const std::size_t root = comps.find(w2);
        for (std::size_t w = 0; w < nv; ++w)
          if (done[w] && comps.find(w) == root) translate(*lines[w], charts[w], t);
        cons[1].point = node_point(cons[1].edge, w2);
      }

      LineWitness line{v, d, RatMatrix(2, d + 1), {}};
      bool placed = false;
      for (std::size_t tries = 0; tries < kRetryBudget && !placed; ++tries) {
        RatVec row0 = cons.size() >= 1 ? scale(rng.nonzero(), cons[0].point.projective) : random_row(d + 1);
        RatVec row1 = cons.size() >= 2 ? scale(rng.nonzero(), cons[1].point.projective) : random_row(d + 1);
        for (std::size_t j = 0; j <= d; ++j) {
          line.coeffs(0, j) = row0[j];
          line.coeffs(1, j) = row1[j];
        }
        line.torus = cons.empty() ? random_row(n - d) : cons[0].point.torus;
        placed = is_transverse(line);
        if (cons.size() == 2) break;  // fully determined; only a restart helps
      }
      if (!placed) {
        ok = false;
        break;
      }
      lines[v] = std::move(line);
      done[v] = true;
      for (const auto& k : cons) comps.unite(k.from, v);
    }

    if (!ok) continue;
    out.attempts = attempt;
    for (std::size_t v = 0; v < nv; ++v) out.lines.push_back(std::move(*lines[v]));
    for (std::size_t e = 0; e < c.edges().size(); ++e) {
      const auto chart = divisor_basis(c, e);
      const std::size_t other = c.edges()[e].u == chart.designated_side ? c.edges()[e].v : c.edges()[e].u;
      out.nodes.push_back({e, chart.designated_side, other,
                           evaluate_at_divisor(out.lines[chart.designated_side], charts[chart.designated_side], c, {false, e})});
    }
    for (std::size_t r = 0; r < c.rays().size(); ++r) {
      const std::size_t base = c.rays()[r].base;
      out.marked.push_back({r, base, evaluate_at_divisor(out.lines[base], charts[base], c, {true, r})});
    }
    return out;
  }
  throw Error(ErrorCode::ExhaustedRetries, "no transverse configuration found within the retry budget");
}

// ---------------------------------------------------------------------------

ValidationReport verify_witness(const TropicalCurve& c, const C0Witness& w) {
  ValidationReport report;
  report.check = "witness";
  const std::size_t nv = c.num_vertices();
  std::vector<std::optional<ComponentDescriptor>> charts(nv);

  if (w.lines.size() != nv) {
    report.add({"curve", {}, false, "expected one line per vertex", std::nullopt});
    return report;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    ItemVerdict item{"vertex", {v}, true, "", std::nullopt};
    const auto& line = w.lines[v];
    try {
      charts[v] = component_descriptor(c, v);
      if (line.vertex != v) {
        item.ok = false;
        item.detail = "line is labelled with vertex " + std::to_string(line.vertex);
      } else if (line.d != charts[v]->d || line.coeffs.rows() != 2 || line.coeffs.cols() != line.d + 1 ||
                 line.torus.size() != c.rank() - line.d) {
        item.ok = false;
        item.detail = "line shape does not match the component";
      } else if (!is_transverse(line)) {
        item.ok = false;
        item.detail = "line is not transverse to the boundary (a 2x2 minor or torus coordinate vanishes)";
      }
    } catch (const Error& e) {
      item.ok = false;
      item.detail = e.what();
    }
    report.add(std::move(item));
  }

  const bool lines_ok = report.passed;
  const auto eval = [&](std::size_t v, DivisorRef ref) -> std::optional<RatVec> {
    if (!lines_ok || !charts[v]) return std::nullopt;
    try {
      return evaluate_at_divisor(w.lines[v], *charts[v], c, ref);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  const bool node_count_ok = w.nodes.size() == c.edges().size();
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    ItemVerdict item{"edge", {e}, true, "", std::nullopt};
    const auto& ce = c.edges()[e];
    if (!node_count_ok || w.nodes[e].edge != e) {
      item.ok = false;
      item.detail = "missing node assignment";
    } else {
      const auto& node = w.nodes[e];
      const bool same_ends = std::min(node.designated, node.other) == std::min(ce.u, ce.v) &&
                             std::max(node.designated, node.other) == std::max(ce.u, ce.v);
      const auto from_u = eval(ce.u, {false, e});
      const auto from_v = eval(ce.v, {false, e});
      if (!same_ends) {
        item.ok = false;
        item.detail = "node joins the wrong components";
      } else if (std::any_of(node.values.begin(), node.values.end(), [](const Rat& x) { return x == 0; })) {
        item.ok = false;
        item.detail = "node lies outside the open divisor torus";
      } else if (!from_u || !from_v) {
        item.ok = false;
        item.detail = "could not evaluate a component at the divisor";
      } else if (*from_u != node.values || *from_v != node.values) {
        item.ok = false;
        item.detail = *from_u != *from_v ? "the two components meet the divisor in different points"
                                         : "node value differs from the components' common point";
        item.witness = *from_u;
      }
    }
    report.add(std::move(item));
  }

  const bool marked_count_ok = w.marked.size() == c.rays().size();
  for (std::size_t r = 0; r < c.rays().size(); ++r) {
    ItemVerdict item{"ray", {r}, true, "", std::nullopt};
    if (!marked_count_ok || w.marked[r].ray != r || w.marked[r].vertex != c.rays()[r].base) {
      item.ok = false;
      item.detail = "missing or mislabelled marked point";
    } else {
      const auto p = eval(c.rays()[r].base, {true, r});
      if (!p || *p != w.marked[r].values) {
        item.ok = false;
        item.detail = "marked point is not where the component meets the ray divisor";
      }
    }
    report.add(std::move(item));
  }

  // dual graph against the skeleton, edge by edge
  bool iso = w.lines.size() == nv && node_count_ok;
  if (iso) {
    const MetricGraph dual = dual_graph(w);
    const MetricGraph skel = skeleton(c);
    for (std::size_t e = 0; e < skel.edges.size() && iso; ++e)
      iso = std::min(dual.edges[e].u, dual.edges[e].v) == skel.edges[e].u &&
            std::max(dual.edges[e].u, dual.edges[e].v) == skel.edges[e].v;
  }
  report.add({"curve", {}, iso, iso ? "" : "dual graph differs from the skeleton", std::nullopt});
  return report;
}

MetricGraph dual_graph(const C0Witness& w) {
  MetricGraph g;
  g.num_vertices = w.lines.size();
  for (const auto& node : w.nodes) g.edges.push_back({node.designated, node.other, Rat(0)});
  return g;
}

std::size_t arithmetic_genus(const C0Witness& w) {
  const MetricGraph g = dual_graph(w);
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "dual graph is not connected");
  return g.edges.size() + 1 - g.num_vertices;
}

}  // namespace tropcert
