#include "tropcert/certify.hpp"

#include <omp.h>

#include <algorithm>

#include "tropcert/json_io.hpp"

namespace tropcert {

EdgeMultiplicities edge_multiplicities(const TropicalCurve& c) {
  EdgeMultiplicities m;
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    m.edges.push_back(c.edges()[e].weight);
    if (c.edges()[e].weight != 1) m.flagged_edges.push_back(e);
  }
  for (std::size_t r = 0; r < c.rays().size(); ++r) {
    m.rays.push_back(c.rays()[r].weight);
    if (c.rays()[r].weight != 1) m.flagged_rays.push_back(r);
  }
  m.all_one = m.flagged_edges.empty() && m.flagged_rays.empty();
  return m;
}

namespace {

FanSummary summarize(const Fan& f) {
  FanSummary s;
  s.ambient = f.ambient;
  for (const Cone& cone : f.cones) {
    if (s.cones_by_dim.size() <= cone.dim()) s.cones_by_dim.resize(cone.dim() + 1, 0);
    ++s.cones_by_dim[cone.dim()];
  }
  s.num_faces = f.faces.size();
  try {
    const FanCheck check = verify_fan_axioms(f, Execution::Serial);
    s.axioms_ok = check.ok;
    s.reason = check.reason;
  } catch (const Error& e) {
    s.axioms_ok = false;
    s.reason = e.what();
  }
  return s;
}

ValidationReport coloring_report(const ThreeColoring& col) {
  ValidationReport r;
  r.check = "three_colorability";
  if (col.colorable) {
    r.add({"curve", {}, true, "", std::nullopt});
  } else {
    for (std::size_t v : col.stalled)
      r.add({"vertex", {v}, false, "at least three neighbours remain when peeling stalls", std::nullopt});
  }
  return r;
}

ValidationReport abundancy_report(const SuperabundanceReport& s) {
  ValidationReport r;
  r.check = "non_superabundance";
  r.add({"curve", {}, s.surjective,
         "rank " + std::to_string(s.rank) + (s.surjective ? " = " : " < ") + std::to_string(s.required) + " = b1 * n",
         std::nullopt});
  return r;
}

ValidationReport fan_report(const FanSummary& delta, const FanSummary& rec) {
  ValidationReport r;
  r.check = "fan_axioms";
  r.add({"curve", {0}, delta.axioms_ok, delta.reason, std::nullopt});
  r.add({"curve", {1}, rec.axioms_ok, rec.reason, std::nullopt});
  return r;
}

bool record(Certificate& cert, ValidationReport report) {
  const bool ok = report.passed;
  if (!ok && cert.failing_check.empty()) cert.failing_check = report.check;
  cert.checks.push_back(std::move(report));
  return ok;
}

}  // namespace

Certificate certify_realizability(const TropicalCurve& c, std::uint64_t seed) {
  Certificate cert;
  cert.seed = seed;
  cert.curve_hash = curve_hash(c);
  cert.weights = edge_multiplicities(c);

  if (!record(cert, validate_embedding(c, Execution::Serial))) return cert;
  cert.ell = base_exponent(c);
  cert.skeleton = skeleton(c);
  cert.b1 = first_betti(*cert.skeleton);

  if (!record(cert, check_balancing(c))) return cert;
  const SmoothnessResult smooth = check_smoothness(c);
  if (!record(cert, smooth.report)) return cert;

  cert.coloring = three_coloring_order(c);
  if (!record(cert, coloring_report(*cert.coloring))) return cert;

  cert.cycles = cycle_basis(*cert.skeleton, spanning_tree(*cert.skeleton));
  cert.abundancy = superabundance_from_matrix(abundancy_matrix(c, *cert.cycles), *cert.b1);
  if (!record(cert, abundancy_report(*cert.abundancy))) return cert;

  const Fan delta = build_fan(c);
  const Fan rec = recession_fan(c);
  cert.fan = summarize(delta);
  cert.recession = summarize(rec);
  for (const Cone& cone : rec.cones)
    if (cone.dim() == 1) cert.recession_rays.emplace_back(cone.generators[0].begin(), cone.generators[0].end() - 1);
  std::sort(cert.recession_rays.begin(), cert.recession_rays.end());
  if (!record(cert, fan_report(*cert.fan, *cert.recession))) return cert;

  ValidationReport witness_check;
  try {
    cert.witness = construct_witness(c, cert.coloring->order, seed);
    witness_check = verify_witness(c, *cert.witness);
    const std::size_t genus = arithmetic_genus(*cert.witness);
    witness_check.add({"curve", {}, genus == *cert.b1,
                       "arithmetic genus " + std::to_string(genus) + ", b1 " + std::to_string(*cert.b1), std::nullopt});
    cert.marked_points = cert.witness->marked.size();
  } catch (const Error& e) {
    witness_check.check = "witness";
    witness_check.add({"curve", {}, false, std::string(to_string(e.code())) + ": " + e.what(), std::nullopt});
  }
  if (!record(cert, std::move(witness_check))) return cert;

  cert.realizable = cert.weights->all_one;
  if (!cert.realizable) cert.failing_check = "multiplicities";
  return cert;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& hash) {
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < 16 && i < hash.size(); ++i) {
    const char ch = hash[i];
    h = (h << 4) | static_cast<std::uint64_t>(ch <= '9' ? ch - '0' : ch - 'a' + 10);
  }
  // splitmix64 finaliser
  std::uint64_t z = master ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Certificate> certify_batch(const std::vector<TropicalCurve>& curves, std::uint64_t master_seed,
                                       Execution exec) {
  std::vector<Certificate> out(curves.size());
  const long count = static_cast<long>(curves.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
  for (long i = 0; i < count; ++i) {
    const auto& c = curves[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = certify_realizability(c, derive_seed(master_seed, curve_hash(c)));
  }
  return out;
}

std::size_t ambient_dimension_for_graph(const MetricGraph& g) {
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "metric graph is not connected");
  std::vector<std::size_t> degree(g.num_vertices, 0);
  for (const auto& e : g.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (const auto& leg : g.legs) ++degree[leg.vertex];
  std::size_t n = 3;
  for (std::size_t d : degree)
    if (d >= 1) n = std::max(n, d - 1);
  return n;
}

}  // namespace tropcert
