#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tropcert/certify.hpp"
#include "tropcert/json_io.hpp"

namespace fs = std::filesystem;
using namespace tropcert;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kRefused = 2;

struct Options {
  std::string input;
  std::string out;
  std::string batch;
  std::string format = "json";
  std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + opt.out + "'");
  out << text;
}

int cmd_validate(const Options& opt) {
  const TropicalCurve c = parse_curve(read_file(opt.input));
  std::vector<ValidationReport> reports{validate_embedding(c), check_balancing(c), check_smoothness(c).report};
  ValidationReport coloring;
  coloring.check = "three_colorability";
  const ThreeColoring col = three_coloring_order(c);
  if (col.colorable) coloring.add({"curve", {}, true, "", std::nullopt});
  for (std::size_t v : col.stalled) coloring.add({"vertex", {v}, false, "peeling stalls", std::nullopt});
  reports.push_back(coloring);

  bool passed = true;
  json arr = json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed;
    json j = to_json(r);
    j.erase("schema");
    arr.push_back(std::move(j));
  }
  emit(opt, pretty_dump({{"schema", kSchemaVersion}, {"passed", passed}, {"reports", arr}}));
  return passed ? kOk : kRefused;
}

int cmd_certify_one(const Options& opt) {
  const TropicalCurve c = parse_curve(read_file(opt.input));
  const Certificate cert = certify_realizability(c, opt.seed);
  emit(opt, pretty_dump(to_json(cert)));
  return cert.realizable ? kOk : kRefused;
}

int cmd_certify_batch(const Options& opt) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.batch))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<TropicalCurve> curves;
  std::vector<std::size_t> slot;  // result position of each parsed curve
  int status = kOk;
  json results = json::array();
  for (const auto& f : files) {
    try {
      curves.push_back(parse_curve(read_file(f.string())));
      slot.push_back(results.size());
      results.push_back({{"file", f.filename().string()}});
    } catch (const InputError& e) {
      const std::string where = std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message();
      std::cerr << f.string() << ":" << where << "\n";
      results.push_back({{"file", f.filename().string()}, {"error", where}});
      status = kInputError;
    }
  }
  const auto certs = certify_batch(curves, opt.seed);
  for (std::size_t i = 0; i < certs.size(); ++i) {
    json cj = to_json(certs[i]);
    cj.erase("schema");
    results[slot[i]]["certificate"] = cj;
    if (!certs[i].realizable && status == kOk) status = kRefused;
  }
  emit(opt, pretty_dump({{"schema", kSchemaVersion}, {"master_seed", opt.seed}, {"results", results}}));
  return status;
}

int cmd_fan(const Options& opt) {
  const TropicalCurve c = parse_curve(read_file(opt.input));
  const Fan delta = build_fan(c);
  const Fan rec = recession_fan(c);
  json out = {{"schema", kSchemaVersion}, {"base_exponent", base_exponent(c).get_str()}};
  bool ok = true;
  for (const auto& [name, f] : {std::pair<const char*, const Fan*>{"fan", &delta}, {"recession_fan", &rec}}) {
    json j = to_json(*f);
    j.erase("schema");
    try {
      const FanCheck check = verify_fan_axioms(*f);
      j["axioms_ok"] = check.ok;
      j["reason"] = check.reason;
      ok = ok && check.ok;
    } catch (const Error& e) {
      j["axioms_ok"] = false;
      j["reason"] = e.what();
      ok = false;
    }
    out[name] = std::move(j);
  }
  emit(opt, pretty_dump(out));
  return ok ? kOk : kRefused;
}

int cmd_witness(const Options& opt) {
  const TropicalCurve c = parse_curve(read_file(opt.input));
  const ThreeColoring col = three_coloring_order(c);
  if (!col.colorable) {
    std::cerr << "curve is not 3-colorable\n";
    return kRefused;
  }
  try {
    const C0Witness w = construct_witness(c, col.order, opt.seed);
    emit(opt, pretty_dump(to_json(w)));
    return kOk;
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
    return kRefused;
  }
}

int cmd_skeleton(const Options& opt) {
  const TropicalCurve c = parse_curve(read_file(opt.input));
  emit(opt, pretty_dump(to_json(skeleton(c))));
  return kOk;
}

int cmd_ambient_dim(const Options& opt) {
  const MetricGraph g = parse_metric_graph(read_file(opt.input));
  emit(opt, std::to_string(ambient_dimension_for_graph(g)) + "\n");
  return kOk;
}

int cmd_export_plot(const Options& opt) {
  const TropicalCurve c = parse_curve(read_file(opt.input));
  const json plot = plot_json(c);
  emit(opt, pretty_dump(plot));
  if (!opt.out.empty()) {
    std::ofstream side(opt.out + ".exact.json", std::ios::binary);
    side << pretty_dump(plot["exact"]);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify realizability of smooth tropical curves"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env = std::getenv("TROPCERT_SEED")) {
    try {
      opt.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "TROPCERT_SEED is not an unsigned integer\n";
      return kInputError;
    }
  }

  const auto add_common = [&](CLI::App* sub, bool input_required) {
    auto* in = sub->add_option("input", opt.input, "input JSON file");
    if (input_required) in->required();
    in->check(CLI::ExistingFile);
    sub->add_option("--out,-o", opt.out, "output path (default stdout)");
    sub->add_option("--seed", opt.seed, "random seed (overrides TROPCERT_SEED)");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json"}));
  };

  std::map<CLI::App*, int (*)(const Options&)> handlers;
  const auto sub = [&](const char* name, const char* help, int (*fn)(const Options&), bool input_required = true) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, input_required);
    handlers[s] = fn;
    return s;
  };
  sub("validate", "embedding, balancing, smoothness and 3-colorability report", cmd_validate);
  CLI::App* certify = sub("certify", "full pipeline certificate", cmd_certify_one, false);
  certify->add_option("--batch", opt.batch, "certify every *.json in a directory")->check(CLI::ExistingDirectory);
  sub("fan", "fan and recession fan export", cmd_fan);
  sub("witness", "special-fiber witness", cmd_witness);
  sub("skeleton", "metric graph with lattice lengths", cmd_skeleton);
  sub("ambient-dim", "ambient dimension for a metric graph", cmd_ambient_dim);
  sub("export-plot", "line segments for plotting (rank <= 3)", cmd_export_plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    for (const auto& [s, fn] : handlers) {
      if (!s->parsed()) continue;
      if (s == certify) {
        if (!opt.batch.empty()) return cmd_certify_batch(opt);
        if (opt.input.empty()) {
          std::cerr << "certify: an input file or --batch is required\n";
          return kInputError;
        }
      }
      return fn(opt);
    }
  } catch (const InputError& e) {
    std::cerr << opt.input << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
