#include "commands.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <boost/crc.hpp>
#include <json.hpp>

#include "hsu2/bench.hpp"
#include "hsu2/model.hpp"
#include "hsu2/propagator.hpp"
#include "hsu2/synthesis.hpp"

#ifndef HSU2_VERSION
#define HSU2_VERSION "dev"
#endif

namespace hsu2::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

unsigned thread_count(const GlobalOptions& g) {
  if (g.threads) return *g.threads;
  if (const char* env = std::getenv("HSU2_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw ConfigError("HSU2_THREADS must be a non-negative integer");
    }
  }
  return 0;
}

// Loads a config file; a run manifest is accepted in place of the config it records.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": top level must be a JSON object");
  if (j.contains("manifest") && j.contains("config")) return j.at("config");
  return j;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "': unexpected type " + std::string(j.at(key).type_name()));
  }
}

template <typename T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("field '" + key + "': missing");
  return get_or<T>(j, key, T{});
}

int positive_int(const json& j, const std::string& key, int fallback) {
  const auto v = get_or<long long>(j, key, fallback);
  if (v < 1 || v > std::numeric_limits<int>::max()) {
    throw ConfigError("field '" + key + "': must be an integer >= 1, got " + std::to_string(v));
  }
  return static_cast<int>(v);
}

StepOrder order_field(const json& j) {
  const auto name = get_or<std::string>(j, "order", "quadratic");
  try {
    return step_order_from_string(name);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("field 'order': ") + e.what());
  }
}

FieldProfile field_from_json(const json& j) {
  const auto kind = require<std::string>(j, "kind");
  try {
    if (kind == "half-sine") {
      return FieldProfile::half_sine(require<double>(j, "amplitude"), get_or<int>(j, "m", 1));
    }
    if (kind == "constant") return FieldProfile::constant(require<double>(j, "amplitude"));
    if (kind == "stepwise") {
      return FieldProfile::stepwise(require<std::vector<double>>(j, "breakpoints"),
                                    require<std::vector<double>>(j, "levels"))
          .scaled(get_or<double>(j, "amplitude", 1.0));
    }
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("field 'field': ") + e.what());
  }
  throw ConfigError("field 'field.kind': expected half-sine, constant or stepwise, got '" + kind + "'");
}

json field_to_json(const FieldProfile& f) {
  switch (f.kind()) {
    case FieldKind::HalfSine:
      return {{"kind", "half-sine"}, {"amplitude", f.amplitude()}, {"m", f.mode()}};
    case FieldKind::Constant:
      return {{"kind", "constant"}, {"amplitude", f.amplitude()}};
    case FieldKind::Stepwise:
      return {{"kind", "stepwise"}, {"amplitude", f.amplitude()}, {"breakpoints", f.breakpoints()}, {"levels", f.levels()}};
  }
  return {};
}

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  boost::crc_32_type crc;
  crc.process_bytes(contents.data(), contents.size());
  std::ostringstream hex;
  hex << "crc32:" << std::hex << std::setw(8) << std::setfill('0') << crc.checksum();
  return hex.str();
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::optional<std::uint64_t>& seed, const json& outputs) {
  json m;
  m["manifest"] = 1;
  m["command"] = command;
  m["version"] = HSU2_VERSION;
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["config"] = config;
  m["outputs"] = outputs;
  write_file(dir / (command + ".manifest.json"), m.dump(2) + "\n");
}

fs::path output_dir(const GlobalOptions& g) {
  fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + g.out + "'");
  return dir;
}

// ---- verify ---------------------------------------------------------------

struct VerifyOptions {
  std::vector<int> h{1, 2, 3};
  int draws = 1000;
  double tol = 1e-10;
};

int cmd_verify(const GlobalOptions& g, const VerifyOptions& o) {
  const std::uint64_t seed = g.seed.value_or(1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  bool ok = true;
  for (int h : o.h) {
    if (h < 1 || h > 3) throw ConfigError("--h must be 1, 2 or 3");
    std::array<double, 2> worstDev{0, 0};
    double worstLeak = 0;
    ModelParams worstModel;
    double worstScore = -1;
    for (int d = 0; d < o.draws; ++d) {
      ModelParams m;
      m.h = h;
      m.J = {u(rng), u(rng), u(rng)};
      m.B1 = u(rng);
      m.B2 = u(rng);
      const BlockReport r = verify_block_equivalence(m, o.tol);
      for (int k = 0; k < 2; ++k) worstDev[k] = std::max(worstDev[k], r.blockDeviation[k]);
      worstLeak = std::max(worstLeak, r.maxLeakage);
      const double score = std::max(r.maxDeviation, r.maxLeakage);
      if (score > worstScore) {
        worstScore = score;
        worstModel = m;
      }
    }
    for (int k = 1; k <= 2; ++k) {
      const bool pass = worstDev[k - 1] <= o.tol && worstLeak <= o.tol;
      ok = ok && pass;
      std::cout << "h=" << h << " k=" << k << " draws=" << o.draws << " max_deviation=" << num(worstDev[k - 1])
                << " max_leakage=" << num(worstLeak) << (pass ? " PASS" : " FAIL") << "\n";
    }
    if (worstScore > o.tol) {
      std::cout << "  worst case: h=" << worstModel.h << " J=[" << num(worstModel.J[0]) << ", " << num(worstModel.J[1])
                << ", " << num(worstModel.J[2]) << "] B1=" << num(worstModel.B1) << " B2=" << num(worstModel.B2)
                << " seed=" << seed << "\n";
    }
  }
  return ok ? kOk : kFailure;
}

// ---- evolve ---------------------------------------------------------------

int cmd_evolve(const GlobalOptions& g) {
  const json cfg = load_config(g.config);
  EvolutionSpec spec;
  spec.n = positive_int(cfg, "n", 100);
  spec.order = order_field(cfg);
  spec.attachGlobalPhase = get_or<bool>(cfg, "attachGlobalPhase", false);

  json resolved;
  if (cfg.contains("model")) {
    const json& mj = cfg.at("model");
    ModelParams m;
    m.h = get_or<int>(mj, "h", 3);
    const auto jv = get_or<std::vector<double>>(mj, "J", {0, 0, 0});
    if (jv.size() != 3) throw ConfigError("field 'model.J': expected three exchange strengths");
    m.J = {jv[0], jv[1], jv[2]};
    m.B1 = get_or<double>(mj, "B1", 0.0);
    m.B2 = get_or<double>(mj, "B2", 0.0);
    const int k = get_or<int>(cfg, "block", 1);
    try {
      validate(m);
      spec.block = block_params(m, k);
    } catch (const std::logic_error& e) {
      throw ConfigError(std::string("field 'model': ") + e.what());
    }
    spec.field = cfg.contains("field") ? field_from_json(cfg.at("field")) : FieldProfile::half_sine(1.0);
    resolved["model"] = {{"h", m.h}, {"J", jv}, {"B1", m.B1}, {"B2", m.B2}};
    resolved["block"] = k;
  } else if (cfg.contains("effective")) {
    const json& ej = cfg.at("effective");
    const int q = get_or<int>(ej, "q", 1);
    if (q != 1 && q != 2) throw ConfigError("field 'effective.q': must be 1 or 2");
    spec.block = effective_block(require<double>(ej, "J"), q, get_or<double>(ej, "J0", 0.0));
    if (cfg.contains("field")) {
      spec.field = field_from_json(cfg.at("field"));
    } else {
      spec.field = FieldProfile::half_sine(require<double>(ej, "ampl"));
    }
    resolved["effective"] = {{"J", spec.block.Jeff}, {"q", q}, {"J0", spec.block.J0}};
  } else {
    throw ConfigError("config needs a 'model' or an 'effective' section");
  }
  resolved["field"] = field_to_json(spec.field);
  resolved["n"] = spec.n;
  resolved["order"] = to_string(spec.order);
  resolved["attachGlobalPhase"] = spec.attachGlobalPhase;

  Matrix2cd u;
  try {
    u = evolve(spec);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("evolution failed: ") + e.what());
  }
  const double defect = unitarity_defect(u);
  const GateForm<double> gate = extract_gate_form(nearest_unitary(u), 1e-9);

  json out;
  json entries = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) entries.push_back({u(i, j).real(), u(i, j).imag()});
  out["matrix"] = entries;
  out["unitarity_defect"] = defect;
  out["gate"] = {{"varphi", gate.globalPhase}, {"A", gate.A}, {"B", gate.B}, {"phi", gate.phi}, {"theta", gate.theta}};

  const fs::path dir = output_dir(g);
  json outputs;
  outputs["evolve.json"] = write_file(dir / "evolve.json", out.dump(2) + "\n");
  write_manifest(dir, "evolve", resolved, std::nullopt, outputs);

  std::cout << "A=" << num(gate.A) << " B=" << num(gate.B) << " phi=" << num(gate.phi) << " theta=" << num(gate.theta)
            << " varphi=" << num(gate.globalPhase) << " unitarity_defect=" << num(defect) << "\n";
  return kOk;
}

// ---- bench ----------------------------------------------------------------

int cmd_bench(const GlobalOptions& g) {
  const json cfg = load_config(g.config);
  BenchConfig bc;
  bc.samples = positive_int(cfg, "samples", bc.samples);
  bc.nValues = get_or<std::vector<int>>(cfg, "nValues", bc.nValues);
  bc.paramRange = get_or<double>(cfg, "paramRange", bc.paramRange);
  bc.seed = get_or<std::uint64_t>(cfg, "seed", bc.seed);
  if (g.seed) bc.seed = *g.seed;
  bc.referenceTol = get_or<double>(cfg, "referenceTol", bc.referenceTol);
  bc.threads = thread_count(g);
  try {
    validate(bc);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }

  const auto records = run_benchmark(bc);
  std::ostringstream csv;
  csv << "order,n,samples,mean_p,median_p,min_p,mean_time_s,skipped\n";
  int skipped = 0;
  for (const auto& r : records) {
    csv << to_string(r.order) << ',' << r.n << ',' << r.samples << ',' << num(r.meanDigits) << ','
        << num(r.medianDigits) << ',' << num(r.minDigits) << ',' << num(r.meanTime) << ',' << r.skipped << '\n';
    skipped = r.skipped;
  }

  json resolved = {{"samples", bc.samples},     {"nValues", bc.nValues}, {"paramRange", bc.paramRange},
                   {"seed", bc.seed},           {"referenceTol", bc.referenceTol},
                   {"precisionMetric", "p = -log10(max entrywise |U - U_ref|), clamped to [0, 15]"}};
  const fs::path dir = output_dir(g);
  json outputs;
  outputs["bench.csv"] = write_file(dir / "bench.csv", csv.str());
  write_manifest(dir, "bench", resolved, bc.seed, outputs);
  std::cout << csv.str();
  return skipped == 0 ? kOk : kFailure;
}

// ---- scan -----------------------------------------------------------------

int cmd_scan(const GlobalOptions& g, const std::vector<double>& targetOverride) {
  const json cfg = load_config(g.config);
  ScanConfig sc;
  std::vector<double> targets;
  if (!targetOverride.empty()) {
    targets = targetOverride;
  } else if (cfg.contains("targetA") && cfg.at("targetA").is_array()) {
    targets = get_or<std::vector<double>>(cfg, "targetA", {});
  } else {
    targets = {get_or<double>(cfg, "targetA", sc.targetA)};
  }
  sc.q = get_or<int>(cfg, "q", sc.q);
  if (cfg.contains("region")) {
    const auto r = get_or<std::vector<double>>(cfg, "region", {});
    if (r.size() != 4) throw ConfigError("field 'region': expected [amplMin, amplMax, jMin, jMax]");
    sc.region = Region{r[0], r[1], r[2], r[3]};
  }
  sc.gridResolution = positive_int(cfg, "gridResolution", sc.gridResolution);
  sc.n = positive_int(cfg, "n", sc.n);
  sc.order = order_field(cfg);
  sc.recheck = get_or<bool>(cfg, "recheck", sc.recheck);
  sc.referenceTol = get_or<double>(cfg, "referenceTol", sc.referenceTol);
  sc.threads = thread_count(g);
  for (double t : targets) {
    ScanConfig probe = sc;
    probe.targetA = t;
    try {
      validate(probe);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }

  std::ostringstream csv, lines;
  csv << "target_A,q,ampl,J,A,B,phi,theta,varphi,residual\n";
  lines << "target_A,q,polyline,first_row,size,theta_std,mean_A\n";
  std::size_t row = 0;
  for (double t : targets) {
    sc.targetA = t;
    const auto points = scan_plane(sc);
    const std::size_t first = row;
    for (const auto& p : points) {
      csv << num(t) << ',' << sc.q << ',' << num(p.ampl) << ',' << num(p.J) << ',' << num(p.gate.A) << ','
          << num(p.gate.B) << ',' << num(p.gate.phi) << ',' << num(p.gate.theta) << ',' << num(p.gate.globalPhase)
          << ',' << num(p.residual) << '\n';
    }
    std::size_t offset = first;
    for (const auto& l : summarize_polylines(points)) {
      lines << num(t) << ',' << sc.q << ',' << l.id << ',' << offset << ',' << l.size << ',' << num(l.thetaStd) << ','
            << num(l.meanA) << '\n';
      offset += l.size;
    }
    row += points.size();
    std::cout << "targetA=" << num(t) << " points=" << points.size() << "\n";
  }

  json resolved = {{"targetA", targets},
                   {"q", sc.q},
                   {"region", {sc.region.amplMin, sc.region.amplMax, sc.region.jMin, sc.region.jMax}},
                   {"gridResolution", sc.gridResolution},
                   {"n", sc.n},
                   {"order", to_string(sc.order)},
                   {"recheck", sc.recheck},
                   {"referenceTol", sc.referenceTol}};
  const fs::path dir = output_dir(g);
  json outputs;
  outputs["scan.csv"] = write_file(dir / "scan.csv", csv.str());
  outputs["scan_polylines.csv"] = write_file(dir / "scan_polylines.csv", lines.str());
  write_manifest(dir, "scan", resolved, std::nullopt, outputs);
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Two-qubit Heisenberg-Ising SU(2) block propagation and pulse synthesis"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("--config", g.config, "JSON config (or a run manifest)");
  app.add_option("--out", g.out, "output directory");
  auto* seedOpt = app.add_option("--seed", seed, "RNG seed");
  auto* threadsOpt = app.add_option("--threads", threads, "worker threads (0 = all cores)");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "check the Bell-basis block reduction on random models");
  verify->set_help_flag("--help", "print this help message and exit");  // frees -h style names for --h
  verify->add_option("--h", vo.h, "field directions to check")->delimiter(',');
  verify->add_option("--draws", vo.draws, "random draws per direction")->check(CLI::PositiveNumber);
  verify->add_option("--tol", vo.tol, "pass tolerance");

  auto* evolveCmd = app.add_subcommand("evolve", "evolve one block and report its gate form");
  auto* benchCmd = app.add_subcommand("bench", "linear vs quadratic precision benchmark");
  std::vector<double> targets;
  auto* scanCmd = app.add_subcommand("scan", "contour scan of the (amplitude, J) plane");
  scanCmd->add_option("--target-a", targets, "target amplitudes, comma separated")->delimiter(',');

  for (auto* sub : {verify, evolveCmd, benchCmd, scanCmd}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (seedOpt->count() > 0) g.seed = seed;
  if (threadsOpt->count() > 0) g.threads = threads;

  try {
    if (verify->parsed()) return cmd_verify(g, vo);
    if (evolveCmd->parsed()) return cmd_evolve(g);
    if (benchCmd->parsed()) return cmd_bench(g);
    if (scanCmd->parsed()) return cmd_scan(g, targets);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace hsu2::cli
