#pragma once

// Graph homology of the skeleton and the abundancy map
//   R^{E} -> Hom(H_1, R^n),  (l_e) |-> (sum a_e [e] |-> sum l_e a_e e_vec).

#include <cstddef>
#include <optional>
#include <vector>

#include "tropcert/curve.hpp"
#include "tropcert/lattice.hpp"

namespace tropcert {

// Breadth-first from vertex 0, incident edges scanned in index order.
// Returns ascending edge indices. Throws Disconnected.
std::vector<std::size_t> spanning_tree(const MetricGraph& g);

// Greedy (Kruskal-style) tree taking edges in the given priority order;
// every spanning tree arises from some order.
std::vector<std::size_t> spanning_tree_in_order(const MetricGraph& g, const std::vector<std::size_t>& order);

struct EdgeOrientation {
  std::size_t tail = 0;
  std::size_t head = 0;
};

struct CycleBasis {
  std::vector<std::size_t> tree;             // ascending
  std::vector<std::size_t> non_tree;         // ascending; one cycle each
  std::vector<std::vector<int>> cycles;      // coefficient a_e per edge, in {-1,0,1}
  std::vector<EdgeOrientation> orientation;  // recorded orientation of every edge
  std::size_t num_vertices = 0;
};

// One fundamental cycle per non-tree edge. Each cycle runs through its
// non-tree edge from the lower to the higher vertex index; coefficients are
// relative to the graph's recorded orientations. Throws NotSpanningTree.
CycleBasis cycle_basis(const MetricGraph& g, const std::vector<std::size_t>& tree);

struct AbundancyMatrix {
  std::size_t rank_n = 0;                    // ambient rank
  RatMatrix matrix;                          // (b1 * n) x #E, blocks of n rows per cycle
  std::vector<EdgeOrientation> orientation;  // per column
  std::vector<RatVec> edge_vectors;          // displacement in recorded orientation
};

// Throws GraphMismatch if the basis does not describe the curve's skeleton.
AbundancyMatrix abundancy_matrix(const TropicalCurve& c, const CycleBasis& basis);

struct SuperabundanceReport {
  bool surjective = false;
  std::size_t rank = 0;
  std::size_t required = 0;  // b1 * n
  std::size_t b1 = 0;
  std::size_t num_edges = 0;
  std::size_t kernel_dim = 0;
  long expected_dim = 0;  // #E - b1 * n, may be negative
  // On surjective verdicts: a square nonsingular minor of size b1 * n.
  std::vector<std::size_t> minor_rows;
  std::vector<std::size_t> minor_cols;
  Rat minor_determinant;
};

SuperabundanceReport check_non_superabundant(const TropicalCurve& c);
SuperabundanceReport superabundance_from_matrix(const AbundancyMatrix& m, std::size_t b1);

// Sufficient condition for surjectivity: every cycle c_eps contains, for each
// frame vector v_i, an edge used by no other basis cycle whose vector is
// parallel to v_i.
struct FramePreimage {
  std::size_t cycle = 0;
  std::size_t frame_index = 0;
  std::optional<std::size_t> edge;  // witness edge, if any
  RatVec lengths;                   // l in Q^E with Phi(l) = f_{cycle, frame_index}
};

struct CdmyResult {
  bool holds = false;
  std::vector<FramePreimage> witnesses;  // one per (cycle, frame vector)
};

// Throws FrameNotBasis if the frame is not a Z-basis of Z^n.
CdmyResult cdmy_condition(const TropicalCurve& c, const CycleBasis& basis, const std::vector<IntVec>& frame);

// Phi applied to a length vector: the stacked images of the basis cycles.
RatVec apply_abundancy(const AbundancyMatrix& m, const RatVec& lengths);

}  // namespace tropcert
