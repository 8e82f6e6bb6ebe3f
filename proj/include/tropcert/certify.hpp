#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tropcert/abundancy.hpp"
#include "tropcert/curve.hpp"
#include "tropcert/fan.hpp"
#include "tropcert/special_fiber.hpp"

namespace tropcert {

inline constexpr const char* kToolVersion = "0.1.0";

struct FanSummary {
  std::size_t ambient = 0;
  std::vector<std::size_t> cones_by_dim;  // index = cone dimension
  std::size_t num_faces = 0;
  bool axioms_ok = false;
  std::string reason;
};

struct EdgeMultiplicities {
  std::vector<long> edges;  // by bounded-edge index
  std::vector<long> rays;   // by ray index
  bool all_one = true;
  std::vector<std::size_t> flagged_edges;
  std::vector<std::size_t> flagged_rays;
};

EdgeMultiplicities edge_multiplicities(const TropicalCurve& c);

struct Certificate {
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  std::string curve_hash;
  bool realizable = false;
  std::string failing_check;  // empty when realizable

  std::vector<ValidationReport> checks;  // in pipeline order, up to the first failure
  std::optional<ThreeColoring> coloring;
  std::optional<EdgeMultiplicities> weights;

  std::optional<Int> ell;
  std::optional<MetricGraph> skeleton;
  std::optional<std::size_t> b1;
  std::optional<CycleBasis> cycles;
  std::optional<SuperabundanceReport> abundancy;

  std::optional<FanSummary> fan;
  std::optional<FanSummary> recession;
  std::vector<IntVec> recession_rays;  // sorted

  std::optional<C0Witness> witness;
  std::size_t marked_points = 0;
};

// Runs the full pipeline, stopping at the first failing check. Never throws
// for curve content; refusals carry verdict refused.
Certificate certify_realizability(const TropicalCurve& c, std::uint64_t seed);

// Per-curve seed for batch runs, mixed from the master seed and curve hash.
std::uint64_t derive_seed(std::uint64_t master, const std::string& curve_hash);

std::vector<Certificate> certify_batch(const std::vector<TropicalCurve>& curves, std::uint64_t master_seed,
                                       Execution exec = Execution::Parallel);

// max(3, max_v (deg v - 1)) with degree counting edges and legs.
// Throws Disconnected.
std::size_t ambient_dimension_for_graph(const MetricGraph& g);

}  // namespace tropcert
