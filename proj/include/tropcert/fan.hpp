#pragma once

// Cones over the faces of a tropical curve placed at height one, the
// recession fan, fan-axiom verification for cones of dimension <= 2, and the
// per-vertex / per-edge toric chart data of the special fiber.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tropcert/curve.hpp"
#include "tropcert/lattice.hpp"

namespace tropcert {

enum class ConeKind { Origin, Vertex, Edge, Ray, Recession };

std::string_view to_string(ConeKind kind);

struct ConeLabel {
  ConeKind kind = ConeKind::Origin;
  std::size_t index = 0;  // vertex / edge / ray index; first ray for recession cones
};

// Generators live in Z^{n+1}; the last coordinate is the height.
struct Cone {
  std::vector<IntVec> generators;
  ConeLabel label;

  std::size_t dim() const noexcept { return generators.size(); }
  bool recession() const;  // every generator at height 0
};

struct Fan {
  std::size_t ambient = 0;  // n + 1
  std::vector<Cone> cones;
  std::vector<std::pair<std::size_t, std::size_t>> faces;  // (face, cone), proper faces

  std::optional<std::size_t> find(const std::vector<IntVec>& generators) const;
};

// Least l such that l * (every vertex coordinate) is integral.
Int base_exponent(const TropicalCurve& c);

Fan build_fan(const TropicalCurve& c);
Fan recession_fan(const TropicalCurve& c);

struct FanCheck {
  bool ok = true;
  std::string reason;
  std::optional<std::pair<std::size_t, std::size_t>> pair;  // offending cones
};

// (a) closed under faces, (b) pairwise intersections are common faces.
// Throws UnsupportedDimension for cones of dimension >= 3.
FanCheck verify_fan_axioms(const Fan& f, Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------

struct BoundaryDivisor {
  bool shared = false;  // bounded edge (shared with a neighbour) or ray (outer)
  std::size_t index = 0;
  std::size_t hyperplane = 0;  // 0 for -(b_1+...+b_d), i for b_i
};

struct ComponentDescriptor {
  std::size_t vertex = 0;
  std::size_t d = 0;
  std::size_t torus_rank = 0;    // n - d
  std::vector<IntVec> basis;     // b_1..b_d followed by a completion to a Z-basis
  std::vector<BoundaryDivisor> divisors;
};

// Throws NotSmoothVertex.
ComponentDescriptor component_descriptor(const TropicalCurve& c, std::size_t vertex);

struct DivisorChart {
  std::size_t edge = 0;
  IntVec direction;            // primitive, from the designated side
  std::vector<IntVec> basis;   // Z-basis of direction^perp, Hermite normal form
  std::size_t designated_side = 0;
};

DivisorChart divisor_basis(const TropicalCurve& c, std::size_t edge);

// Character lattice basis of the divisor of a ray (direction^perp).
std::vector<IntVec> ray_divisor_basis(const TropicalCurve& c, std::size_t ray);

}  // namespace tropcert
