#include "tropcert/fan.hpp"

#include <omp.h>

#include <algorithm>

namespace tropcert {

std::string_view to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Origin: return "origin";
    case ConeKind::Vertex: return "vertex";
    case ConeKind::Edge: return "edge";
    case ConeKind::Ray: return "ray";
    case ConeKind::Recession: return "recession";
  }
  return "unknown";
}

bool Cone::recession() const {
  return std::all_of(generators.begin(), generators.end(), [](const IntVec& g) { return g.back() == 0; });
}

namespace {

std::vector<IntVec> sorted(std::vector<IntVec> gens) {
  std::sort(gens.begin(), gens.end(), [](const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return gens;
}

IntVec lift(const IntVec& v, long height) {
  IntVec out = v;
  out.push_back(Int(height));
  return out;
}

std::vector<IntVec> vertex_generators(const TropicalCurve& c, const Int& ell) {
  std::vector<IntVec> gens;
  for (const RatVec& p : c.vertices()) {
    RatVec lifted = scale(Rat(ell), p);
    lifted.push_back(Rat(ell));
    gens.push_back(primitive_vector(lifted).direction);
  }
  return gens;
}

void populate_faces(Fan& f) {
  for (std::size_t i = 0; i < f.cones.size(); ++i) {
    const auto& gens = f.cones[i].generators;
    if (gens.empty()) continue;
    if (auto o = f.find({})) f.faces.emplace_back(*o, i);
    if (gens.size() == 2)
      for (const auto& g : gens)
        if (auto r = f.find({g})) f.faces.emplace_back(*r, i);
  }
}

}  // namespace

std::optional<std::size_t> Fan::find(const std::vector<IntVec>& generators) const {
  const auto key = sorted(generators);
  for (std::size_t i = 0; i < cones.size(); ++i)
    if (cones[i].generators.size() == key.size() && sorted(cones[i].generators) == key) return i;
  return std::nullopt;
}

Int base_exponent(const TropicalCurve& c) {
  Int ell = 1;
  for (const RatVec& p : c.vertices())
    for (const Rat& x : p) mpz_lcm(ell.get_mpz_t(), ell.get_mpz_t(), x.get_den_mpz_t());
  return ell;
}

Fan recession_fan(const TropicalCurve& c) {
  Fan f;
  f.ambient = c.rank() + 1;
  f.cones.push_back({{}, {ConeKind::Origin, 0}});
  for (std::size_t i = 0; i < c.rays().size(); ++i) {
    const IntVec g = lift(c.rays()[i].direction, 0);
    if (!f.find({g})) f.cones.push_back({{g}, {ConeKind::Recession, i}});
  }
  populate_faces(f);
  return f;
}

Fan build_fan(const TropicalCurve& c) {
  const Int ell = base_exponent(c);
  const auto vgen = vertex_generators(c, ell);
  Fan f = recession_fan(c);
  f.faces.clear();
  std::vector<Cone> cones;
  cones.push_back(f.cones.front());
  for (std::size_t v = 0; v < vgen.size(); ++v) cones.push_back({{vgen[v]}, {ConeKind::Vertex, v}});
  for (std::size_t k = 1; k < f.cones.size(); ++k) cones.push_back(f.cones[k]);
  for (std::size_t e = 0; e < c.edges().size(); ++e)
    cones.push_back({{vgen[c.edges()[e].u], vgen[c.edges()[e].v]}, {ConeKind::Edge, e}});
  for (std::size_t r = 0; r < c.rays().size(); ++r)
    cones.push_back({{vgen[c.rays()[r].base], lift(c.rays()[r].direction, 0)}, {ConeKind::Ray, r}});
  f.cones = std::move(cones);
  populate_faces(f);
  return f;
}

// ---------------------------------------------------------------------------

namespace {

RatMatrix columns(const std::vector<IntVec>& gens, std::size_t dim) {
  RatMatrix m(dim, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t k = 0; k < dim; ++k) m(k, j) = Rat(gens[j][k]);
  return m;
}

bool nonneg(const RatVec& x) {
  return std::all_of(x.begin(), x.end(), [](const Rat& v) { return v >= 0; });
}

bool nonpos(const RatVec& x) {
  return std::all_of(x.begin(), x.end(), [](const Rat& v) { return v <= 0; });
}

std::size_t support(const RatVec& x) {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](const Rat& v) { return v != 0; }));
}

// Coordinates of v in the (independent) generators, if v lies in their span.
std::optional<RatVec> coordinates(const RatVec& v, const std::vector<IntVec>& gens) {
  return solve_rational(columns(gens, v.size()), v);
}

bool is_generator(const RatVec& r, const std::vector<IntVec>& gens) {
  for (const auto& g : gens) {
    const auto f = parallel_factor(r, to_rat(g));
    if (f && *f > 0) return true;
  }
  return false;
}

// Whether cone(a) ∩ cone(b) is a face of both; both simplicial of dim <= 2.
bool meets_in_common_face(const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
  if (a.empty() || b.empty()) return true;
  const std::size_t dim = a.front().size();
  RatMatrix m(dim, a.size() + b.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < dim; ++k) m(k, j) = Rat(a[j][k]);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t k = 0; k < dim; ++k) m(k, a.size() + j) = Rat(-b[j][k]);
  const auto kernel = null_space(m);
  if (kernel.empty()) return true;  // spans meet only at the origin

  if (kernel.size() == 1) {
    const RatVec alpha(kernel[0].begin(), kernel[0].begin() + static_cast<std::ptrdiff_t>(a.size()));
    const RatVec beta(kernel[0].begin() + static_cast<std::ptrdiff_t>(a.size()), kernel[0].end());
    const bool both = (nonneg(alpha) && nonneg(beta)) || (nonpos(alpha) && nonpos(beta));
    if (!both) return true;  // the common line leaves one of the cones
    return support(alpha) == 1 && support(beta) == 1;
  }

  // equal planes: collect the generators of each cone lying in the other
  std::vector<RatVec> rays;
  for (const auto& g : a) {
    const auto x = coordinates(to_rat(g), b);
    if (x && nonneg(*x)) rays.push_back(to_rat(g));
  }
  for (const auto& g : b) {
    const auto x = coordinates(to_rat(g), a);
    if (x && nonneg(*x)) rays.push_back(to_rat(g));
  }
  for (const auto& r : rays)
    if (!is_generator(r, a) || !is_generator(r, b)) return false;
  return true;
}

}  // namespace

FanCheck verify_fan_axioms(const Fan& f, Execution exec) {
  for (std::size_t i = 0; i < f.cones.size(); ++i) {
    const auto& gens = f.cones[i].generators;
    if (gens.size() > 2)
      throw Error(ErrorCode::UnsupportedDimension, "cone " + std::to_string(i) + " has dimension " + std::to_string(gens.size()));
    if (gens.size() == 2 && rank_rational(columns(gens, gens[0].size())) < 2)
      return {false, "cone " + std::to_string(i) + " has dependent generators", std::make_pair(i, i)};
    if (!gens.empty() && !f.find({}))
      return {false, "origin missing", std::make_pair(i, i)};
    if (gens.size() == 2)
      for (const auto& g : gens)
        if (!f.find({g})) return {false, "a ray of cone " + std::to_string(i) + " is missing", std::make_pair(i, i)};
  }

  const std::size_t m = f.cones.size();
  std::vector<std::optional<std::size_t>> first_bad(m);
  const auto scan_row = [&](std::size_t i) {
    for (std::size_t j = i + 1; j < m; ++j)
      if (!meets_in_common_face(f.cones[i].generators, f.cones[j].generators)) {
        first_bad[i] = j;
        return;
      }
  };
  const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < mm; ++i) scan_row(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < mm; ++i) scan_row(static_cast<std::size_t>(i));
  }
  for (std::size_t i = 0; i < m; ++i)
    if (first_bad[i])
      return {false,
              "cones " + std::to_string(i) + " and " + std::to_string(*first_bad[i]) + " meet outside a common face",
              std::make_pair(i, *first_bad[i])};
  return {};
}

// ---------------------------------------------------------------------------

ComponentDescriptor component_descriptor(const TropicalCurve& c, std::size_t vertex) {
  if (vertex >= c.num_vertices()) throw Error(ErrorCode::NotSmoothVertex, "vertex index out of range");
  std::string reason;
  const auto star = smooth_star(c, vertex, &reason);
  if (!star) throw Error(ErrorCode::NotSmoothVertex, "vertex " + std::to_string(vertex) + ": " + reason);
  ComponentDescriptor out;
  out.vertex = vertex;
  out.d = star->d;
  out.torus_rank = c.rank() - star->d;
  out.basis = hermite_completion(std::vector<IntVec>(star->directions.begin() + 1, star->directions.end()), c.rank());
  for (std::size_t i = 0; i < star->cells.size(); ++i)
    out.divisors.push_back({!star->cells[i].is_ray, star->cells[i].index, i});
  return out;
}

DivisorChart divisor_basis(const TropicalCurve& c, std::size_t edge) {
  if (edge >= c.edges().size()) throw Error(ErrorCode::GraphMismatch, "edge index out of range");
  const auto& e = c.edges()[edge];
  DivisorChart out;
  out.edge = edge;
  out.designated_side = std::min(e.u, e.v);
  const std::size_t other = std::max(e.u, e.v);
  out.direction = primitive_vector(sub(c.vertices()[other], c.vertices()[out.designated_side])).direction;
  out.basis = orthogonal_lattice_basis(out.direction);
  return out;
}

std::vector<IntVec> ray_divisor_basis(const TropicalCurve& c, std::size_t ray) {
  if (ray >= c.rays().size()) throw Error(ErrorCode::GraphMismatch, "ray index out of range");
  return orthogonal_lattice_basis(c.rays()[ray].direction);
}

}  // namespace tropcert
