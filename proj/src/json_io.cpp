#include "tropcert/json_io.hpp"

#include <openssl/evp.h>

#include <map>
#include <sstream>

namespace tropcert {

namespace {

// ---- source positions ------------------------------------------------------

// Start offset of every value in a syntactically valid document, keyed by
// JSON pointer. Only needed to place schema diagnostics.
class PositionIndex {
 public:
  explicit PositionIndex(std::string_view text) : text_(text) {
    std::size_t i = 0;
    scan(i, "");
  }

  std::pair<std::size_t, std::size_t> locate(const std::string& pointer) const {
    std::string p = pointer;
    auto it = offsets_.find(p);
    while (it == offsets_.end() && !p.empty()) {
      p.erase(p.rfind('/'));
      it = offsets_.find(p);
    }
    return line_column(text_, it == offsets_.end() ? 0 : it->second);
  }

  static std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

 private:
  void skip_ws(std::size_t& i) const {
    while (i < text_.size() && (text_[i] == ' ' || text_[i] == '\t' || text_[i] == '\n' || text_[i] == '\r')) ++i;
  }

  std::string scan_string(std::size_t& i) const {
    std::string out;
    ++i;
    while (i < text_.size() && text_[i] != '"') {
      if (text_[i] == '\\') ++i;
      if (i < text_.size()) out += text_[i++];
    }
    ++i;
    return out;
  }

  void scan(std::size_t& i, const std::string& pointer) {
    skip_ws(i);
    offsets_[pointer] = i;
    if (i >= text_.size()) return;
    if (text_[i] == '{') {
      ++i;
      for (;;) {
        skip_ws(i);
        if (i >= text_.size() || text_[i] == '}') break;
        const std::string key = scan_string(i);
        skip_ws(i);
        ++i;  // ':'
        scan(i, pointer + "/" + key);
        skip_ws(i);
        if (i < text_.size() && text_[i] == ',') ++i;
      }
      ++i;
    } else if (text_[i] == '[') {
      ++i;
      for (std::size_t k = 0;; ++k) {
        skip_ws(i);
        if (i >= text_.size() || text_[i] == ']') break;
        scan(i, pointer + "/" + std::to_string(k));
        skip_ws(i);
        if (i < text_.size() && text_[i] == ',') ++i;
      }
      ++i;
    } else if (text_[i] == '"') {
      scan_string(i);
    } else {
      while (i < text_.size() && text_[i] != ',' && text_[i] != ']' && text_[i] != '}' && text_[i] != ' ' &&
             text_[i] != '\n' && text_[i] != '\r' && text_[i] != '\t')
        ++i;
    }
  }

  std::string_view text_;
  std::map<std::string, std::size_t> offsets_;
};

struct SchemaFault {
  std::string pointer;
  std::string message;
};

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
    const auto [line, col] = PositionIndex::line_column(text, at);
    std::string msg = e.what();
    // drop the library's own "[json.exception.parse_error.101] parse error at line l, column c: " prefix
    if (const auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
    throw InputError(line, col, msg);
  }
}

template <class F>
auto with_locations(std::string_view text, F&& body) {
  const json doc = parse_document(text);
  try {
    return body(doc);
  } catch (const SchemaFault& f) {
    const auto [line, col] = PositionIndex(text).locate(f.pointer);
    throw InputError(line, col, (f.pointer.empty() ? "/" : f.pointer) + ": " + f.message);
  }
}

// ---- typed field access ----------------------------------------------------

const json& field(const json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) throw SchemaFault{ptr, "expected an object"};
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaFault{ptr, std::string("missing field '") + key + "'"};
  return *it;
}

const json& array_at(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaFault{ptr, "expected an array"};
  return j;
}

std::size_t index_value(const json& j, const std::string& ptr) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw SchemaFault{ptr, "expected a non-negative integer"};
  return j.get<std::size_t>();
}

long weight_value(const json& obj, const std::string& ptr) {
  const auto it = obj.find("weight");
  if (it == obj.end()) return 1;
  if (!it->is_number_integer() || it->get<long long>() <= 0)
    throw SchemaFault{ptr + "/weight", "weight must be a positive integer"};
  return it->get<long>();
}

Rat rational_value(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rat(Int(std::to_string(j.get<long long>())));
  if (j.is_number_unsigned()) return Rat(Int(std::to_string(j.get<unsigned long long>())));
  if (!j.is_string()) throw SchemaFault{ptr, "expected a rational string \"p/q\" or an integer"};
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    const std::string m = e.what();
    throw SchemaFault{ptr, m.substr(m.find(": ") + 2)};
  }
}

Int integer_value(const json& j, const std::string& ptr) {
  const Rat q = rational_value(j, ptr);
  if (q.get_den() != 1) throw SchemaFault{ptr, "expected an integer"};
  return q.get_num();
}

RatVec rational_vector(const json& j, const std::string& ptr) {
  array_at(j, ptr);
  RatVec out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(rational_value(j[k], ptr + "/" + std::to_string(k)));
  return out;
}

IntVec integer_vector(const json& j, const std::string& ptr) {
  array_at(j, ptr);
  IntVec out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(integer_value(j[k], ptr + "/" + std::to_string(k)));
  return out;
}

void check_schema_tag(const json& doc) {
  if (!doc.is_object()) throw SchemaFault{"", "expected an object"};
  if (const auto it = doc.find("schema"); it != doc.end() && *it != kSchemaVersion)
    throw SchemaFault{"/schema", "unsupported schema version"};
}

// ---- emitters --------------------------------------------------------------

json rat_json(const Rat& q) { return to_string(q); }

json int_json(const Int& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json rat_vector_json(const RatVec& v) {
  json out = json::array();
  for (const Rat& q : v) out.push_back(rat_json(q));
  return out;
}

json int_vector_json(const IntVec& v) {
  json out = json::array();
  for (const Int& z : v) out.push_back(int_json(z));
  return out;
}

json fan_summary_json(const FanSummary& s) {
  return {{"ambient", s.ambient},
          {"cones_by_dim", s.cones_by_dim},
          {"num_faces", s.num_faces},
          {"axioms_ok", s.axioms_ok},
          {"reason", s.reason}};
}

json multiplicities_json(const EdgeMultiplicities& m) {
  return {{"edges", m.edges},
          {"rays", m.rays},
          {"all_one", m.all_one},
          {"flagged_edges", m.flagged_edges},
          {"flagged_rays", m.flagged_rays}};
}

json coloring_json(const ThreeColoring& c) {
  return {{"colorable", c.colorable}, {"order", c.order}, {"stalled", c.stalled}};
}

json cycles_json(const CycleBasis& b) {
  json orient = json::array();
  for (const auto& o : b.orientation) orient.push_back({o.tail, o.head});
  return {{"tree", b.tree}, {"non_tree", b.non_tree}, {"cycles", b.cycles}, {"orientation", orient}};
}

double decimal(const Rat& q) { return q.get_d(); }

}  // namespace

// ---- parsers ---------------------------------------------------------------

TropicalCurve parse_curve(std::string_view text) {
  return with_locations(text, [](const json& doc) {
    check_schema_tag(doc);
    const std::size_t rank = index_value(field(doc, "", "rank"), "/rank");
    if (rank == 0) throw SchemaFault{"/rank", "rank must be positive"};

    const json& jv = array_at(field(doc, "", "vertices"), "/vertices");
    if (jv.empty()) throw SchemaFault{"/vertices", "curve has no vertices"};
    std::vector<RatVec> vertices;
    for (std::size_t i = 0; i < jv.size(); ++i) {
      const std::string p = "/vertices/" + std::to_string(i);
      vertices.push_back(rational_vector(jv[i], p));
      if (vertices.back().size() != rank) throw SchemaFault{p, "expected " + std::to_string(rank) + " coordinates"};
    }

    std::vector<BoundedEdge> edges;
    if (doc.contains("edges")) {
      const json& je = array_at(doc["edges"], "/edges");
      for (std::size_t i = 0; i < je.size(); ++i) {
        const std::string p = "/edges/" + std::to_string(i);
        BoundedEdge e{index_value(field(je[i], p, "u"), p + "/u"), index_value(field(je[i], p, "v"), p + "/v"),
                      weight_value(je[i], p)};
        if (e.u >= vertices.size()) throw SchemaFault{p + "/u", "vertex index out of range"};
        if (e.v >= vertices.size()) throw SchemaFault{p + "/v", "vertex index out of range"};
        edges.push_back(e);
      }
    }

    std::vector<Ray> rays;
    if (doc.contains("rays")) {
      const json& jr = array_at(doc["rays"], "/rays");
      for (std::size_t i = 0; i < jr.size(); ++i) {
        const std::string p = "/rays/" + std::to_string(i);
        Ray r{index_value(field(jr[i], p, "base"), p + "/base"),
              integer_vector(field(jr[i], p, "direction"), p + "/direction"), weight_value(jr[i], p)};
        if (r.base >= vertices.size()) throw SchemaFault{p + "/base", "vertex index out of range"};
        if (r.direction.size() != rank)
          throw SchemaFault{p + "/direction", "expected " + std::to_string(rank) + " coordinates"};
        if (is_zero(r.direction)) throw SchemaFault{p + "/direction", "zero direction"};
        if (primitive_vector(to_rat(r.direction)).direction != r.direction)
          throw SchemaFault{p + "/direction", "direction is not primitive"};
        rays.push_back(std::move(r));
      }
    }
    try {
      return TropicalCurve(rank, std::move(vertices), std::move(edges), std::move(rays));
    } catch (const Error& e) {
      throw SchemaFault{"", e.what()};
    }
  });
}

MetricGraph parse_metric_graph(std::string_view text) {
  return with_locations(text, [](const json& doc) {
    check_schema_tag(doc);
    MetricGraph g;
    g.num_vertices = index_value(field(doc, "", "num_vertices"), "/num_vertices");
    if (doc.contains("edges")) {
      const json& je = array_at(doc["edges"], "/edges");
      for (std::size_t i = 0; i < je.size(); ++i) {
        const std::string p = "/edges/" + std::to_string(i);
        MetricEdge e{index_value(field(je[i], p, "u"), p + "/u"), index_value(field(je[i], p, "v"), p + "/v"), Rat(1)};
        if (je[i].contains("length")) e.length = rational_value(je[i]["length"], p + "/length");
        if (e.length <= 0) throw SchemaFault{p + "/length", "length must be positive"};
        if (e.u >= g.num_vertices) throw SchemaFault{p + "/u", "vertex index out of range"};
        if (e.v >= g.num_vertices) throw SchemaFault{p + "/v", "vertex index out of range"};
        g.edges.push_back(e);
      }
    }
    if (doc.contains("legs")) {
      const json& jl = array_at(doc["legs"], "/legs");
      for (std::size_t i = 0; i < jl.size(); ++i) {
        const std::string p = "/legs/" + std::to_string(i);
        Leg leg{index_value(field(jl[i], p, "vertex"), p + "/vertex"), i};
        if (jl[i].contains("ray")) leg.ray = index_value(jl[i]["ray"], p + "/ray");
        if (leg.vertex >= g.num_vertices) throw SchemaFault{p + "/vertex", "vertex index out of range"};
        g.legs.push_back(leg);
      }
    }
    return g;
  });
}

C0Witness parse_witness(std::string_view text) {
  return with_locations(text, [](const json& doc) {
    check_schema_tag(doc);
    C0Witness w;
    w.rank = index_value(field(doc, "", "rank"), "/rank");
    const json& seed = field(doc, "", "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw SchemaFault{"/seed", "expected an integer"};
    w.seed = seed.get<std::uint64_t>();
    const json& order = array_at(field(doc, "", "order"), "/order");
    for (std::size_t k = 0; k < order.size(); ++k) w.order.push_back(index_value(order[k], "/order/" + std::to_string(k)));
    if (doc.contains("attempts")) w.attempts = index_value(doc["attempts"], "/attempts");

    const json& lines = array_at(field(doc, "", "lines"), "/lines");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string p = "/lines/" + std::to_string(i);
      LineWitness l;
      l.vertex = index_value(field(lines[i], p, "vertex"), p + "/vertex");
      l.d = index_value(field(lines[i], p, "d"), p + "/d");
      const json& rows = array_at(field(lines[i], p, "coeffs"), p + "/coeffs");
      if (rows.size() != 2) throw SchemaFault{p + "/coeffs", "expected two rows"};
      const RatVec r0 = rational_vector(rows[0], p + "/coeffs/0");
      const RatVec r1 = rational_vector(rows[1], p + "/coeffs/1");
      if (r0.size() != l.d + 1 || r1.size() != l.d + 1) throw SchemaFault{p + "/coeffs", "expected d + 1 columns"};
      l.coeffs = RatMatrix::from_rows({r0, r1}, l.d + 1);
      l.torus = rational_vector(field(lines[i], p, "torus"), p + "/torus");
      w.lines.push_back(std::move(l));
    }
    const json& nodes = array_at(field(doc, "", "nodes"), "/nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string p = "/nodes/" + std::to_string(i);
      w.nodes.push_back({index_value(field(nodes[i], p, "edge"), p + "/edge"),
                         index_value(field(nodes[i], p, "designated"), p + "/designated"),
                         index_value(field(nodes[i], p, "other"), p + "/other"),
                         rational_vector(field(nodes[i], p, "values"), p + "/values")});
    }
    const json& marked = array_at(field(doc, "", "marked"), "/marked");
    for (std::size_t i = 0; i < marked.size(); ++i) {
      const std::string p = "/marked/" + std::to_string(i);
      w.marked.push_back({index_value(field(marked[i], p, "ray"), p + "/ray"),
                          index_value(field(marked[i], p, "vertex"), p + "/vertex"),
                          rational_vector(field(marked[i], p, "values"), p + "/values")});
    }
    return w;
  });
}

// ---- emitters --------------------------------------------------------------

json to_json(const TropicalCurve& c) {
  json vertices = json::array();
  for (const auto& p : c.vertices()) vertices.push_back(rat_vector_json(p));
  json edges = json::array();
  for (const auto& e : c.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  json rays = json::array();
  for (const auto& r : c.rays())
    rays.push_back({{"base", r.base}, {"direction", int_vector_json(r.direction)}, {"weight", r.weight}});
  return {{"schema", kSchemaVersion}, {"rank", c.rank()}, {"vertices", vertices}, {"edges", edges}, {"rays", rays}};
}

json to_json(const MetricGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({{"u", e.u}, {"v", e.v}, {"length", rat_json(e.length)}});
  json legs = json::array();
  for (const auto& l : g.legs) legs.push_back({{"vertex", l.vertex}, {"ray", l.ray}});
  return {{"schema", kSchemaVersion}, {"num_vertices", g.num_vertices}, {"edges", edges}, {"legs", legs}};
}

json to_json(const ValidationReport& r) {
  json items = json::array();
  for (const auto& it : r.items) {
    json j = {{"kind", it.kind}, {"indices", it.indices}, {"ok", it.ok}, {"detail", it.detail}};
    if (it.witness) j["witness"] = rat_vector_json(*it.witness);
    items.push_back(std::move(j));
  }
  return {{"schema", kSchemaVersion}, {"check", r.check}, {"passed", r.passed}, {"items", items}};
}

json to_json(const Fan& f) {
  json cones = json::array();
  for (const auto& cone : f.cones) {
    json gens = json::array();
    for (const auto& g : cone.generators) gens.push_back(int_vector_json(g));
    cones.push_back({{"generators", gens},
                     {"kind", std::string(to_string(cone.label.kind))},
                     {"index", cone.label.index},
                     {"dim", cone.dim()}});
  }
  json faces = json::array();
  for (const auto& [a, b] : f.faces) faces.push_back({a, b});
  return {{"schema", kSchemaVersion}, {"ambient", f.ambient}, {"cones", cones}, {"faces", faces}};
}

json to_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(rat_vector_json(m.row(i)));
  return {{"schema", kSchemaVersion}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

json to_json(const AbundancyMatrix& m) {
  json j = to_json(m.matrix);
  j["rank_n"] = m.rank_n;
  json orient = json::array();
  for (const auto& o : m.orientation) orient.push_back({o.tail, o.head});
  j["orientation"] = orient;
  json vecs = json::array();
  for (const auto& v : m.edge_vectors) vecs.push_back(rat_vector_json(v));
  j["edge_vectors"] = vecs;
  return j;
}

json to_json(const SuperabundanceReport& r) {
  return {{"schema", kSchemaVersion},
          {"surjective", r.surjective},
          {"rank", r.rank},
          {"required", r.required},
          {"b1", r.b1},
          {"num_edges", r.num_edges},
          {"kernel_dim", r.kernel_dim},
          {"expected_dim", r.expected_dim},
          {"minor_rows", r.minor_rows},
          {"minor_cols", r.minor_cols},
          {"minor_determinant", rat_json(r.minor_determinant)}};
}

json to_json(const C0Witness& w) {
  json lines = json::array();
  for (const auto& l : w.lines) {
    json rows = json::array();
    for (std::size_t i = 0; i < l.coeffs.rows(); ++i) rows.push_back(rat_vector_json(l.coeffs.row(i)));
    lines.push_back({{"vertex", l.vertex}, {"d", l.d}, {"coeffs", rows}, {"torus", rat_vector_json(l.torus)}});
  }
  json nodes = json::array();
  for (const auto& n : w.nodes)
    nodes.push_back(
        {{"edge", n.edge}, {"designated", n.designated}, {"other", n.other}, {"values", rat_vector_json(n.values)}});
  json marked = json::array();
  for (const auto& m : w.marked)
    marked.push_back({{"ray", m.ray}, {"vertex", m.vertex}, {"values", rat_vector_json(m.values)}});
  return {{"schema", kSchemaVersion}, {"rank", w.rank},   {"seed", w.seed},   {"order", w.order},
          {"attempts", w.attempts},   {"lines", lines},   {"nodes", nodes},   {"marked", marked}};
}

json to_json(const Certificate& c) {
  json j = {{"schema", kSchemaVersion},
            {"version", c.version},
            {"seed", c.seed},
            {"curve_hash", c.curve_hash},
            {"verdict", c.realizable ? "realizable" : "refused"},
            {"failing_check", c.failing_check.empty() ? json(nullptr) : json(c.failing_check)},
            {"marked_points", c.marked_points}};
  json checks = json::array();
  for (const auto& r : c.checks) {
    json rj = to_json(r);
    rj.erase("schema");
    checks.push_back(std::move(rj));
  }
  j["checks"] = checks;
  const auto strip = [](json x) {
    x.erase("schema");
    return x;
  };
  j["coloring"] = c.coloring ? coloring_json(*c.coloring) : json(nullptr);
  j["multiplicities"] = c.weights ? multiplicities_json(*c.weights) : json(nullptr);
  j["ell"] = c.ell ? int_json(*c.ell) : json(nullptr);
  j["b1"] = c.b1 ? json(*c.b1) : json(nullptr);
  j["num_edges"] = c.skeleton ? json(c.skeleton->edges.size()) : json(nullptr);
  j["skeleton"] = c.skeleton ? strip(to_json(*c.skeleton)) : json(nullptr);
  j["cycle_basis"] = c.cycles ? cycles_json(*c.cycles) : json(nullptr);
  j["abundancy"] = c.abundancy ? strip(to_json(*c.abundancy)) : json(nullptr);
  j["fan"] = c.fan ? fan_summary_json(*c.fan) : json(nullptr);
  j["recession_fan"] = c.recession ? fan_summary_json(*c.recession) : json(nullptr);
  json rays = json::array();
  for (const auto& r : c.recession_rays) rays.push_back(int_vector_json(r));
  j["recession_rays"] = rays;
  j["witness"] = c.witness ? strip(to_json(*c.witness)) : json(nullptr);
  return j;
}

json plot_json(const TropicalCurve& c) {
  if (c.rank() > 3)
    throw Error(ErrorCode::UnsupportedDimension, "plot export supports rank <= 3, got " + std::to_string(c.rank()));
  const auto point = [](const RatVec& p) {
    json out = json::array();
    for (const Rat& q : p) out.push_back(decimal(q));
    return out;
  };
  json segments = json::array();
  for (std::size_t e = 0; e < c.edges().size(); ++e)
    segments.push_back({{"kind", "edge"},
                        {"index", e},
                        {"from", point(c.vertices()[c.edges()[e].u])},
                        {"to", point(c.vertices()[c.edges()[e].v])},
                        {"weight", c.edges()[e].weight}});
  json rays = json::array();
  for (std::size_t r = 0; r < c.rays().size(); ++r)
    rays.push_back({{"kind", "ray"},
                    {"index", r},
                    {"base", point(c.vertices()[c.rays()[r].base])},
                    {"direction", point(to_rat(c.rays()[r].direction))},
                    {"weight", c.rays()[r].weight}});
  json vertices = json::array();
  for (const auto& p : c.vertices()) vertices.push_back(point(p));
  return {{"schema", kSchemaVersion}, {"rank", c.rank()}, {"vertices", vertices},
          {"segments", segments},     {"rays", rays},     {"exact", to_json(c)}};
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string pretty_dump(const json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream out;
  static const char* hex = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) out << hex[md[i] >> 4] << hex[md[i] & 0xf];
  return out.str();
}

std::string curve_hash(const TropicalCurve& c) { return sha256_hex(canonical_dump(to_json(c))); }

}  // namespace tropcert
