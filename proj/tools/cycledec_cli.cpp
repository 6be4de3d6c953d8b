// Command-line surface: decompose, verify, classify, generate, gadget,
// bench. All randomness flows from --seed; identical argv + seed give
// byte-identical output files (wall-clock timing goes to stderr only).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cycledec/analysis.hpp"
#include "cycledec/config.hpp"
#include "cycledec/engine.hpp"
#include "cycledec/gadgets.hpp"
#include "cycledec/generators.hpp"
#include "cycledec/graph.hpp"
#include "cycledec/oracle.hpp"

#ifdef CYCLEDEC_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

using namespace cycledec;

constexpr int kExitCertificate = 0;
constexpr int kExitNonexistence = 2;
constexpr int kExitDiagnostic = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitInternal = 70;

EngineConfig load_config(const std::string& explicit_path, int k, uint64_t seed) {
  EngineConfig cfg;
  if (!explicit_path.empty()) {
    cfg = EngineConfig::load(explicit_path);
  } else if (const char* env = std::getenv("CYCLEDECOMP_CONFIG")) {
    cfg = EngineConfig::load(env);
  } else {
    cfg = EngineConfig::defaults(k);
  }
  cfg.seed = seed;
  return cfg;
}

void write_record(const std::string& path, const std::string& command,
                  const EngineConfig& cfg, uint64_t seed,
                  const std::string& outcome, const EngineOutcome* details) {
  if (path.empty()) return;
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = nlohmann::json::parse(cfg.to_json());
  j["seed"] = seed;
  j["outcome"] = outcome;
  if (details) {
    j["cycles"] = details->cycles;
    j["residual_edges"] = details->residual_edges;
    nlohmann::ordered_json log = nlohmann::ordered_json::array();
    for (const auto& [stage, detail] : details->log)
      log.push_back({{"stage", stage}, {"detail", detail}});
    j["stage_log"] = log;
  }
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
}

Bipartition split_sides(const Graph& g, int first_side) {
  Bipartition sides{VertexSet(g.order()), VertexSet(g.order())};
  for (int v = 0; v < g.order(); ++v)
    (v < first_side ? sides.a : sides.b).insert(v);
  return sides;
}

void save_generator_certificate(const std::string& path, const GeneratorOutput& out) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write " + path);
  if (out.parity_certificate) {
    f << "parity " << out.parity_certificate->modulus << '\n';
    f << "witness";
    out.parity_certificate->witness.for_each([&](int v) { f << ' ' << v; });
    f << '\n';
    if (out.parity_certificate->structure) {
      f << "ring";
      for (int p : out.parity_certificate->structure->part_of) f << ' ' << p;
      f << '\n';
      f << "cut " << out.parity_certificate->structure->cut_part << '\n';
    }
  } else if (out.count_certificate) {
    f << "count " << out.count_certificate->modulus << '\n';
    f << "components";
    for (long long c : out.count_certificate->component_edge_counts) f << ' ' << c;
    f << '\n';
  }
}

int cmd_decompose(const std::string& input, const std::string& cert_path,
                  int k, uint64_t seed, const std::string& config_path,
                  int bipartite_split, const std::string& record_path) {
  Graph g = load_edge_list(input);
  EngineConfig cfg = load_config(config_path, k, seed);
  auto started = std::chrono::steady_clock::now();
  EngineOutcome outcome =
      bipartite_split >= 0
          ? decompose_bipartite(g, split_sides(g, bipartite_split), k, cfg)
          : decompose(g, k, cfg);
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count();
  std::cerr << "elapsed_ms " << elapsed << '\n';
  switch (outcome.kind) {
    case OutcomeKind::certificate: {
      auto check = verify_decomposition(g, outcome.certificate);
      if (!check) {
        std::cerr << "internal error: certificate failed verification: "
                  << check.detail << '\n';
        return kExitInternal;
      }
      if (!cert_path.empty()) save_certificate(cert_path, outcome.certificate);
      std::cout << "certificate " << outcome.certificate.cycles.size()
                << " cycles\n";
      write_record(record_path, "decompose", cfg, seed, "certificate", &outcome);
      return kExitCertificate;
    }
    case OutcomeKind::nonexistence:
      std::cout << "nonexistence: " << outcome.reason << '\n';
      write_record(record_path, "decompose", cfg, seed, "nonexistence", &outcome);
      return kExitNonexistence;
    case OutcomeKind::diagnostic:
    default:
      std::cout << "diagnostic: stage " << outcome.diagnostic.stage << ": "
                << outcome.diagnostic.detail << '\n';
      for (const auto& [stage, detail] : outcome.log)
        std::cout << "  log " << stage << ": " << detail << '\n';
      write_record(record_path, "decompose", cfg, seed, "diagnostic", &outcome);
      return kExitDiagnostic;
  }
}

int cmd_verify(const std::string& graph_path, const std::string& cert_path) {
  Graph g = load_edge_list(graph_path);
  CycleDecomposition d = load_certificate(cert_path);
  auto result = verify_decomposition(g, d);
  if (result.ok()) {
    std::cout << "valid: " << d.cycles.size() << " cycles of length "
              << d.cycle_length << '\n';
    return 0;
  }
  std::cout << "invalid: " << result.detail << '\n';
  return 1;
}

int cmd_classify(const std::string& input, double nu, double epsilon,
                 bool exact, uint64_t seed, int extremal_m) {
  Graph g = load_edge_list(input);
  StructureReport report;
  if (exact) {
    // force brute-force closeness regardless of size
    if (is_expander(g, nu)) {
      report.kind = StructureKind::expander;
      report.parameter = nu;
    } else {
      auto cliques = closeness_two_cliques(g, seed, true);
      auto bip = closeness_bipartite(g, seed, true);
      if (cliques.epsilon <= epsilon + 1e-12) {
        report.kind = StructureKind::close_two_cliques;
        report.parameter = cliques.epsilon;
        report.witness = {cliques.witness};
      } else if (bip.epsilon <= epsilon + 1e-12) {
        report.kind = StructureKind::close_bipartite;
        report.parameter = bip.epsilon;
        report.witness = {bip.witness};
      } else {
        report.kind = StructureKind::none;
      }
    }
  } else {
    report = classify(g, nu, epsilon, seed);
  }
  if (report.kind == StructureKind::none && extremal_m > 0) {
    if (auto ext = find_m_extremal(g, extremal_m, seed)) report = *ext;
  }
  std::cout << "kind: " << to_string(report.kind) << '\n';
  std::cout << "parameter: " << report.parameter << '\n';
  std::cout << "witness sizes:";
  for (const auto& w : report.witness) std::cout << ' ' << w.size();
  std::cout << '\n';
  std::cout << "exact: " << (report.exact ? "yes" : "no") << '\n';
  return 0;
}

int cmd_generate(const std::string& family, std::vector<int> params,
                 double noise, double delta, double p, uint64_t seed,
                 const std::string& out_path, const std::string& cert_path) {
  auto need = [&](size_t count) {
    if (params.size() < count)
      throw CLI::ValidationError("generate", "family needs more parameters");
  };
  GeneratorOutput out;
  bool has_certificate = true;
  if (family == "c4-extremal") {
    need(1);
    out = gen_c4_extremal(params[0]);
  } else if (family == "two-cliques") {
    need(2);
    out = gen_two_cliques(params[0], params[1]);
  } else if (family == "c4-bip-extremal") {
    need(1);
    out = gen_c4_bip_extremal(params[0]);
  } else if (family == "c2k-bip-extremal") {
    need(2);
    out = gen_c2k_bip_extremal(params[0], params[1]);
  } else if (family == "random-min-degree") {
    need(1);
    out.graph = gen_random_min_degree(params[0], delta, p, seed);
    has_certificate = false;
  } else if (family == "perturbed-two-cliques" || family == "perturbed-bipartite" ||
             family == "perturbed-tripartite") {
    need(1);
    PerturbShape shape = family == "perturbed-two-cliques"
                             ? PerturbShape::two_cliques
                             : (family == "perturbed-bipartite"
                                    ? PerturbShape::bipartite
                                    : PerturbShape::tripartite);
    out.graph = gen_perturbed(shape, params[0], noise, seed);
    has_certificate = false;
  } else {
    throw CLI::ValidationError("generate", "unknown family " + family);
  }
  save_edge_list(out_path, out.graph);
  std::cout << "n " << out.graph.order() << " m " << out.graph.edge_count()
            << " min-degree " << out.graph.min_degree() << '\n';
  if (!cert_path.empty()) {
    if (!has_certificate)
      std::cerr << "note: this family carries no certificate\n";
    else
      save_generator_certificate(cert_path, out);
  }
  return 0;
}

int cmd_gadget(const std::string& kind, int k, int count,
               const std::string& input, const std::string& out_path,
               const std::string& schedule_path,
               const std::string& schedule_c_path) {
  if (kind == "flower") {
    Graph f = make_flower(count, k);
    save_edge_list(out_path, f);
    if (!schedule_path.empty())
      save_certificate(schedule_path, flower_decomposition(count, k));
    std::cout << "flower " << count << "x" << 2 * k << ": " << f.order()
              << " vertices, " << f.edge_count() << " edges\n";
    return 0;
  }
  if (kind == "connector") {
    Graph h = load_edge_list(input);
    Graph con = make_connector(h, k, h.order());
    save_edge_list(out_path, con);
    std::cout << "connector: " << con.edge_count() << " edges\n";
    return 0;
  }
  if (kind == "transformer") {
    Graph h = load_edge_list(input);
    auto hom = euler_homomorphism(h);
    TransformerBundle bundle = k == 2 ? c4_transformer(h, hom, h.order())
                                      : generic_transformer(h, hom, k, h.order());
    save_edge_list(out_path, bundle.t);
    if (!schedule_path.empty())
      save_certificate(schedule_path, bundle.schedule_with_h);
    if (!schedule_c_path.empty())
      save_certificate(schedule_c_path, bundle.schedule_with_c);
    std::cout << "transformer: " << bundle.order() << " vertices, "
              << bundle.t.edge_count() << " edges\n";
    return 0;
  }
  if (kind == "absorber") {
    VertexSet u = VertexSet::full(count);
    AbsorberBundle bundle = build_absorber(u, k);
    save_edge_list(out_path, bundle.a_star);
    if (!schedule_path.empty()) {
      // the absorbing schedule for the first nonempty leftover
      for (size_t i = 0; i < bundle.entries.size(); ++i) {
        if (bundle.entries[i].leftover.edge_count() == 0) continue;
        save_certificate(schedule_path, bundle.absorb(i));
        break;
      }
    }
    std::cout << "absorber: " << bundle.entries.size() << " leftovers, "
              << bundle.a_star.edge_count() << " edges\n";
    return 0;
  }
  throw CLI::ValidationError("gadget", "unknown gadget " + kind);
}

struct Range {
  int from = 0;
  int to = 0;
  int step = 1;
};

Range parse_range(const std::string& text, int default_steps) {
  Range r;
  auto sep = text.find("..");
  if (sep == std::string::npos) {
    r.from = r.to = std::stoi(text);
    return r;
  }
  r.from = std::stoi(text.substr(0, sep));
  std::string rest = text.substr(sep + 2);
  auto sep2 = rest.find("..");
  if (sep2 == std::string::npos) {
    r.to = std::stoi(rest);
    r.step = std::max(1, (r.to - r.from) / default_steps);
  } else {
    r.to = std::stoi(rest.substr(0, sep2));
    r.step = std::max(1, std::stoi(rest.substr(sep2 + 2)));
  }
  return r;
}

int cmd_bench(int k, const std::string& n_range, const std::string& delta_range,
              uint64_t seed, const std::string& out_path) {
  Range nr = parse_range(n_range, 4);
  // the delta range comes in percent so the grid stays integral
  Range dr = parse_range(delta_range, 4);
  struct Cell {
    int n;
    int delta_percent;
    uint64_t seed;
    std::string outcome;
    long long cycles = 0;
    long long residual = 0;
    long long work = 0;
  };
  std::vector<Cell> cells;
  for (int n = nr.from; n <= nr.to; n += nr.step)
    for (int d = dr.from; d <= dr.to; d += dr.step)
      cells.push_back({n, d, 0, "", 0, 0, 0});
  for (size_t i = 0; i < cells.size(); ++i)
    cells[i].seed = Rng(seed).fork("bench").fork(static_cast<uint64_t>(i)).next();

#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < cells.size(); ++i) {
    Cell& cell = cells[i];
    EngineConfig cfg = EngineConfig::defaults(k);
    cfg.seed = cell.seed;
    auto instance =
        gen_divisible_min_degree(cell.n, 2 * k, cell.delta_percent / 100.0,
                                 cell.seed);
    if (!instance) {
      cell.outcome = "generator-failed";
      continue;
    }
    EngineOutcome outcome = decompose(*instance, k, cfg);
    switch (outcome.kind) {
      case OutcomeKind::certificate: cell.outcome = "certificate"; break;
      case OutcomeKind::nonexistence: cell.outcome = "nonexistence"; break;
      default: cell.outcome = "diagnostic:" + outcome.diagnostic.stage; break;
    }
    cell.cycles = outcome.cycles;
    cell.residual = outcome.residual_edges;
    cell.work = outcome.cycles;
  }

  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return std::tie(a.n, a.delta_percent) < std::tie(b.n, b.delta_percent);
  });
  std::ostringstream csv;
  csv << "# cycledec bench csv v1\n";
  csv << "k,n,delta_percent,cell_seed,outcome,cycles,residual_edges,work\n";
  for (const Cell& c : cells)
    csv << k << ',' << c.n << ',' << c.delta_percent << ',' << c.seed << ','
        << c.outcome << ',' << c.cycles << ',' << c.residual << ',' << c.work
        << '\n';
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << csv.str();
    std::cout << "wrote " << cells.size() << " cells\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact small-scale cycle decompositions: generators, gadgets, "
               "classification, covering engine"};
  app.require_subcommand(1);

  // decompose
  auto* dec = app.add_subcommand("decompose", "decompose a graph into cycles");
  std::string dec_input, dec_cert, dec_config, dec_record;
  int dec_k = 2;
  uint64_t dec_seed = 0;
  int dec_bip = -1;
  dec->add_option("--input", dec_input, "edge-list file")->required();
  dec->add_option("--k", dec_k, "half cycle length (cycles have length 2k)")
      ->required();
  dec->add_option("--cert", dec_cert, "certificate output path");
  dec->add_option("--seed", dec_seed, "random seed");
  dec->add_option("--config", dec_config, "engine config json");
  dec->add_option("--bipartite-split", dec_bip,
                  "treat vertices [0,s) and [s,n) as the two sides");
  dec->add_option("--record", dec_record, "run record json output");

  // verify
  auto* ver = app.add_subcommand("verify", "check a certificate against a graph");
  std::string ver_graph, ver_cert;
  ver->add_option("graph", ver_graph, "edge-list file")->required();
  ver->add_option("certificate", ver_cert, "certificate file")->required();

  // classify
  auto* cls = app.add_subcommand("classify", "structure classification");
  std::string cls_input;
  double cls_nu = 0.05, cls_eps = 0.01;
  bool cls_exact = false;
  uint64_t cls_seed = 0;
  int cls_m = 0;
  cls->add_option("--input", cls_input)->required();
  cls->add_option("--nu", cls_nu, "expansion parameter");
  cls->add_option("--epsilon", cls_eps, "closeness threshold");
  cls->add_flag("--exact", cls_exact, "force brute-force closeness");
  cls->add_option("--seed", cls_seed);
  cls->add_option("--extremal-m", cls_m,
                  "also try the two- and three-block witnesses");

  // generate
  auto* gen = app.add_subcommand("generate", "construct test families");
  std::string gen_family, gen_out, gen_cert;
  std::vector<int> gen_params;
  double gen_noise = 0.0, gen_delta = 0.5, gen_p = 0.5;
  uint64_t gen_seed = 0;
  gen->add_option("family", gen_family,
                  "c4-extremal | two-cliques | c4-bip-extremal | "
                  "c2k-bip-extremal | random-min-degree | perturbed-two-cliques"
                  " | perturbed-bipartite | perturbed-tripartite")
      ->required();
  gen->add_option("params", gen_params, "family parameters");
  gen->add_option("--noise", gen_noise, "perturbation density");
  gen->add_option("--delta", gen_delta, "minimum degree fraction");
  gen->add_option("--p", gen_p, "edge probability");
  gen->add_option("--seed", gen_seed);
  gen->add_option("-o,--output", gen_out, "edge-list output")->required();
  gen->add_option("--emit-certificate", gen_cert, "certificate output");

  // gadget
  auto* gad = app.add_subcommand("gadget", "emit absorption gadgets");
  std::string gad_kind, gad_input, gad_out, gad_sched, gad_sched_c;
  int gad_k = 2, gad_count = 1;
  gad->add_option("kind", gad_kind, "flower | connector | transformer | absorber")
      ->required();
  gad->add_option("--k", gad_k, "half cycle length")->required();
  gad->add_option("--count", gad_count, "petal count / universe size");
  gad->add_option("--input", gad_input, "host graph for connector/transformer");
  gad->add_option("-o,--output", gad_out, "edge-list output")->required();
  gad->add_option("--schedule", gad_sched, "primary schedule output");
  gad->add_option("--schedule-c", gad_sched_c, "auxiliary-cycle schedule output");

  // bench
  auto* ben = app.add_subcommand("bench", "sweep a (n, delta) grid");
  std::string ben_n = "40..80", ben_delta = "60..75", ben_out;
  int ben_k = 2;
  uint64_t ben_seed = 0;
  ben->add_option("--k", ben_k)->required();
  ben->add_option("--n", ben_n, "vertex range from..to[..step]");
  ben->add_option("--delta", ben_delta, "degree floor percent from..to[..step]");
  ben->add_option("--seed", ben_seed);
  ben->add_option("-o,--output", ben_out, "csv output (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*dec)
      return cmd_decompose(dec_input, dec_cert, dec_k, dec_seed, dec_config,
                           dec_bip, dec_record);
    if (*ver) return cmd_verify(ver_graph, ver_cert);
    if (*cls)
      return cmd_classify(cls_input, cls_nu, cls_eps, cls_exact, cls_seed, cls_m);
    if (*gen)
      return cmd_generate(gen_family, gen_params, gen_noise, gen_delta, gen_p,
                          gen_seed, gen_out, gen_cert);
    if (*gad)
      return cmd_gadget(gad_kind, gad_k, gad_count, gad_input, gad_out,
                        gad_sched, gad_sched_c);
    if (*ben) return cmd_bench(ben_k, ben_n, ben_delta, ben_seed, ben_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
