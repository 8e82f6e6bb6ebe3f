#pragma once

// Embedded tropical curves, their validity checks, and the skeleton.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tropcert/lattice.hpp"

namespace tropcert {

struct BoundedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  long weight = 1;
};

struct Ray {
  std::size_t base = 0;
  IntVec direction;  // primitive
  long weight = 1;
};

// A weighted rational polyhedral curve in Q^rank. Construction checks
// structural well-formedness only (index ranges, vector lengths, positive
// weights, primitive ray directions); the geometric invariants are checked
// by validate_embedding.
class TropicalCurve {
 public:
  TropicalCurve(std::size_t rank, std::vector<RatVec> vertices, std::vector<BoundedEdge> edges,
                std::vector<Ray> rays);

  std::size_t rank() const noexcept { return rank_; }
  const std::vector<RatVec>& vertices() const noexcept { return vertices_; }
  const std::vector<BoundedEdge>& edges() const noexcept { return edges_; }
  const std::vector<Ray>& rays() const noexcept { return rays_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }

  // Adjacent cells of a vertex: bounded edges by index, then rays by index.
  struct Incidence {
    bool is_ray = false;
    std::size_t index = 0;
    std::size_t other = 0;  // opposite endpoint for bounded edges
  };
  std::vector<Incidence> incidences(std::size_t vertex) const;
  std::size_t valence(std::size_t vertex) const { return incidences(vertex).size(); }

  // Outgoing primitive direction of an incidence at `vertex`.
  IntVec outgoing_direction(std::size_t vertex, const Incidence& inc) const;

  // Displacement vertex[v] - vertex[u] of a bounded edge.
  RatVec displacement(std::size_t edge) const;

 private:
  std::size_t rank_;
  std::vector<RatVec> vertices_;
  std::vector<BoundedEdge> edges_;
  std::vector<Ray> rays_;
};

struct MetricEdge {
  std::size_t u = 0;  // tail of the recorded orientation
  std::size_t v = 0;  // head
  Rat length;
};

struct Leg {
  std::size_t vertex = 0;
  std::size_t ray = 0;
};

struct MetricGraph {
  std::size_t num_vertices = 0;
  std::vector<MetricEdge> edges;
  std::vector<Leg> legs;

  bool connected() const;
  // Edge indices incident to each vertex, ascending.
  std::vector<std::vector<std::size_t>> incident_edges() const;
};

// Per-item verdict of a check. `kind` is "vertex", "edge", "ray", "pair" or
// "curve"; `indices` identifies the item(s).
struct ItemVerdict {
  std::string kind;
  std::vector<std::size_t> indices;
  bool ok = true;
  std::string detail;
  std::optional<RatVec> witness;  // residual vector, intersection point, ...
};

struct ValidationReport {
  std::string check;
  bool passed = true;
  std::vector<ItemVerdict> items;

  void add(ItemVerdict v) {
    passed = passed && v.ok;
    items.push_back(std::move(v));
  }
  // First failing item, if any.
  const ItemVerdict* first_failure() const;
};

enum class Execution { Serial, Parallel };

ValidationReport validate_embedding(const TropicalCurve& c, Execution exec = Execution::Parallel);
ValidationReport check_balancing(const TropicalCurve& c);

// Local star data at a smooth vertex. directions[0] = u_0 = -(b_1 + ... + b_d)
// and directions[i] = b_i; cells[i] is the incidence carrying directions[i].
struct SmoothStar {
  std::size_t vertex = 0;
  std::size_t d = 0;
  std::vector<IntVec> directions;
  std::vector<TropicalCurve::Incidence> cells;
};

struct SmoothnessResult {
  ValidationReport report;
  std::vector<std::optional<SmoothStar>> stars;  // one per vertex
};

SmoothnessResult check_smoothness(const TropicalCurve& c);

// Star at a single vertex; nullopt with a reason if the vertex is not smooth.
std::optional<SmoothStar> smooth_star(const TropicalCurve& c, std::size_t vertex, std::string* reason = nullptr);

struct ThreeColoring {
  bool colorable = false;
  std::vector<std::size_t> order;    // each vertex has < 3 earlier neighbours
  std::vector<std::size_t> stalled;  // vertices left when peeling stalls
};

// Distinct-neighbour adjacency of the bounded-edge graph.
std::vector<std::vector<std::size_t>> neighbour_sets(const TropicalCurve& c);

ThreeColoring three_coloring_order(const TropicalCurve& c);

MetricGraph skeleton(const TropicalCurve& c);

// #E - #V + 1. Throws Disconnected.
std::size_t first_betti(const MetricGraph& g);

}  // namespace tropcert
