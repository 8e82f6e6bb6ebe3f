#pragma once

// Explicit rational model of the nodal special-fiber curve: one line per
// vertex component P_d x G_m^{n-d}, nodes on the shared boundary divisors,
// one marked point per ray.
//
// Chart convention at a smooth vertex with splitting basis b_1..b_n
// (b_1..b_d the star directions): homogeneous coordinates z_0..z_d on P^d,
// hyperplane z_i = 0 is the divisor of direction b_i (i >= 1) and z_0 = 0
// the divisor of -(b_1+...+b_d). Torus coordinates are y_j = z_j / z_0 for
// j <= d and y_j = tau_j for j > d, where y_j is the character dual to b_j.
//
// Divisor points are recorded as the values of a fixed Z-basis of the
// divisor's character lattice u^perp, so the two components meeting along
// an edge describe a node in the same coordinates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tropcert/curve.hpp"
#include "tropcert/fan.hpp"
#include "tropcert/lattice.hpp"

namespace tropcert {

struct LineWitness {
  std::size_t vertex = 0;
  std::size_t d = 0;
  RatMatrix coeffs;  // 2 x (d+1); column i holds the linear form f_i(s, u) = a s + b u
  RatVec torus;      // n - d nonzero values
};

struct NodeAssignment {
  std::size_t edge = 0;
  std::size_t designated = 0;  // lower endpoint
  std::size_t other = 0;
  RatVec values;  // characters of divisor_basis(edge), n - 1 nonzero values
};

struct MarkedPoint {
  std::size_t ray = 0;
  std::size_t vertex = 0;
  RatVec values;  // characters of ray_divisor_basis(ray)
};

struct C0Witness {
  std::size_t rank = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> order;
  std::vector<LineWitness> lines;  // indexed by vertex
  std::vector<NodeAssignment> nodes;  // indexed by edge
  std::vector<MarkedPoint> marked;    // indexed by ray
  std::size_t attempts = 0;
};

struct DivisorRef {
  bool is_ray = false;
  std::size_t index = 0;
};

// Point where the line meets the divisor of an adjacent edge or ray, as the
// values of that divisor's character basis. Throws NotTransverse.
RatVec evaluate_at_divisor(const LineWitness& w, const TropicalCurve& c, DivisorRef where);
RatVec evaluate_at_divisor(const LineWitness& w, const ComponentDescriptor& chart, const TropicalCurve& c,
                           DivisorRef where);

// Every 2x2 minor of the coefficient matrix is nonzero.
bool is_transverse(const LineWitness& w);

// Processes vertices in `order`; each vertex meets at most two earlier
// neighbours, whose nodes become point conditions for its line. Throws
// NotSmoothVertex, ColoringViolation, TorusFactorConflict, ExhaustedRetries.
C0Witness construct_witness(const TropicalCurve& c, const std::vector<std::size_t>& order, std::uint64_t seed);

ValidationReport verify_witness(const TropicalCurve& c, const C0Witness& w);

// Components as vertices, nodes as edges; lengths are left at zero.
MetricGraph dual_graph(const C0Witness& w);

// #nodes - #components + 1. Throws Disconnected.
std::size_t arithmetic_genus(const C0Witness& w);

inline constexpr std::size_t kRetryBudget = 64;
inline constexpr long kSamplerBound = 997;

}  // namespace tropcert
