// hjw: exact small values, certificates, and bound audits for
// partition-style coloring numbers.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hjw/certificate.hpp"
#include "hjw/chain.hpp"
#include "hjw/checkers.hpp"
#include "hjw/cnf.hpp"
#include "hjw/growth.hpp"
#include "hjw/reductions.hpp"
#include "hjw/search.hpp"

namespace fs = std::filesystem;
using namespace hjw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerification = 2;
constexpr int kExitBudget = 3;
constexpr int kExitUsage = 64;

struct KindFlags {
  std::string kind = "hj";
  int m = 1;
  int n = 1;
  int alphabet = 2;
  int colors = 2;

  KindSpec spec() const {
    KindSpec s;
    s.kind = parse_kind(kind);
    s.h = s.kind == Kind::VDW ? 1 : alphabet;
    s.c = colors;
    s.m = m;
    s.n = n;
    s.validate();
    return s;
  }
};

void add_kind_flags(CLI::App* cmd, KindFlags& kf) {
  cmd->add_option("--kind", kf.kind,
                  "hj|hjeq|f8|f9|f8s|f9s|f9sn|f13|vdw|gw|oplus")
      ->required();
  cmd->add_option("--m", kf.m, "dimension / progression length");
  cmd->add_option("--n", kf.n, "block size (f9sn)");
  cmd->add_option("--alphabet", kf.alphabet, "alphabet size / grid dimension");
  cmd->add_option("--colors", kf.colors, "number of colors");
}

struct SearchFlags {
  double budget_seconds = 1e17;
  std::uint64_t max_nodes = UINT64_MAX;
  int threads = 1;
  std::uint64_t seed = 0;
  bool no_symmetry = false;
  bool coord_symmetry = false;
  bool no_divisibility = false;

  SearchOptions options() const {
    SearchOptions o;
    o.budget.max_seconds = budget_seconds;
    o.budget.max_nodes = max_nodes;
    o.threads = threads;
    o.seed = seed;
    o.color_symmetry = !no_symmetry;
    o.value_symmetry = !no_symmetry;
    o.coord_symmetry = coord_symmetry;
    o.enforce_divisibility = !no_divisibility;
    return o;
  }
};

void add_search_flags(CLI::App* cmd, SearchFlags& sf) {
  cmd->add_option("--budget", sf.budget_seconds, "wall-clock budget in seconds");
  cmd->add_option("--max-nodes", sf.max_nodes, "search node budget");
  cmd->add_option("--threads", sf.threads, "worker threads");
  cmd->add_option("--seed", sf.seed, "recorded in certificates");
  cmd->add_flag("--no-symmetry", sf.no_symmetry, "disable symmetry breaking");
  cmd->add_flag("--coord-symmetry", sf.coord_symmetry,
                "also break coordinate permutations (cube kinds)");
  cmd->add_flag("--no-divisibility", sf.no_divisibility,
                "scan every size for the f-family");
}

std::string cert_file_name(const KindSpec& spec, int size, const char* verdict) {
  std::string key = spec.key();
  for (auto& ch : key)
    if (ch == ':' || ch == '=') ch = '_';
  return key + ".k" + std::to_string(size) + "." + verdict + ".json";
}

Coloring load_coloring_file(const std::string& path) {
  auto j = load_json(path);
  return coloring_from_json(j, j.at("colors").get<int>());
}

void save_coloring_file(const Coloring& d, const std::string& path) {
  auto j = coloring_to_json(d);
  j["colors"] = d.colors;
  save_json_atomic(j, path);
}

int run_compute(const KindFlags& kf, const SearchFlags& sf, int max_size,
                const std::string& db_path, std::string cert_dir) {
  KindSpec spec = kf.spec();
  NumberResult res = compute_number(spec, max_size, sf.options());

  if (cert_dir.empty())
    cert_dir = db_path.empty() ? "." : fs::path(db_path).parent_path().string();
  if (cert_dir.empty()) cert_dir = ".";
  fs::create_directories(cert_dir);

  DbEntry entry;
  entry.spec = spec;
  entry.value = res.value;
  entry.lower = res.lower;
  entry.upper = res.upper;
  if (res.last_bad) {
    Certificate cert =
        make_bad_certificate(spec, res.last_bad->first, res.last_bad->second, res.total);
    std::string name = cert_file_name(spec, res.last_bad->first, "bad");
    save_json_atomic(cert.to_json(), (fs::path(cert_dir) / name).string());
    entry.bad_certificate = name;
  }
  if (res.exhaustion) {
    Certificate cert =
        make_exhausted_certificate(spec, res.exhaustion->first, res.exhaustion->second);
    std::string name = cert_file_name(spec, res.exhaustion->first, "exhausted");
    save_json_atomic(cert.to_json(), (fs::path(cert_dir) / name).string());
    entry.exhausted_certificate = name;
  }
  if (!db_path.empty()) {
    ResultsDb db(db_path);
    db.load();
    db.record(entry);
    db.save();
  }

  if (res.value) {
    std::cout << spec.display(*res.value) << '\n';
    return kExitOk;
  }
  std::cout << spec.display() << ">=" << res.lower
            << (res.budget_exhausted ? " (budget exhausted)" : " (max size reached)") << '\n';
  return res.budget_exhausted ? kExitBudget : kExitOk;
}

int run_find_bad(const KindFlags& kf, const SearchFlags& sf, int size,
                 const std::string& cert_path, bool naive) {
  KindSpec spec = kf.spec();
  SearchVerdict v = naive ? exists_bad_coloring_naive(spec, size)
                          : exists_bad_coloring(spec, size, sf.options());
  switch (v.kind) {
    case SearchVerdict::Kind::Bad: {
      Certificate cert = make_bad_certificate(spec, size, *v.bad, v.stats);
      if (!cert_path.empty()) save_json_atomic(cert.to_json(), cert_path);
      std::cout << spec.display() << " k=" << size << " bad coloring: "
                << v.bad->encode_table() << '\n';
      return kExitOk;
    }
    case SearchVerdict::Kind::NoneExists:
      if (!cert_path.empty()) {
        Certificate cert = make_exhausted_certificate(spec, size, v.stats);
        save_json_atomic(cert.to_json(), cert_path);
      }
      std::cout << spec.display() << " k=" << size << " exhausted: every coloring has a witness"
                << '\n';
      return kExitOk;
    case SearchVerdict::Kind::BudgetExceeded:
      std::cout << spec.display() << " k=" << size << " budget exceeded after "
                << v.stats.nodes << " nodes\n";
      return kExitBudget;
  }
  return kExitError;
}

int run_check_witness(const std::string& cert_path, bool refute,
                      const std::string& witness_path) {
  Certificate cert = Certificate::from_json(load_json(cert_path));
  if (refute) {
    if (cert.verdict != "bad" || !cert.coloring) {
      std::cout << "not a bad certificate\n";
      return kExitVerification;
    }
    if (cert.reverify()) {
      std::cout << "refutation verified: no witness at " << cert.spec.display()
                << " k=" << cert.size << '\n';
      return kExitOk;
    }
    std::cout << "refutation FAILED: a witness exists\n";
    return kExitVerification;
  }
  if (witness_path.empty()) {
    std::cout << "nothing to check: pass --refute or --witness\n";
    return kExitUsage;
  }
  if (!cert.coloring) {
    std::cout << "certificate has no coloring payload\n";
    return kExitVerification;
  }
  Witness w = witness_from_json(load_json(witness_path));
  bool ok = verify_witness(cert.spec, cert.size, *cert.coloring, w);
  std::cout << (ok ? "witness verifies" : "witness FAILS") << '\n';
  return ok ? kExitOk : kExitVerification;
}

int run_reduce(const std::string& op, const std::string& coloring_path,
               const std::string& witness_path, const std::string& blocks_path,
               int grid_n, int grid_m, const std::string& out_path) {
  Coloring d = load_coloring_file(coloring_path);
  Witness w = witness_from_json(load_json(witness_path));
  Witness out;
  if (op == "singleton") {
    out = Witness{singleton_blocks(std::get<F13Witness>(w), d)};
  } else if (op == "grid-lift") {
    out = Witness{grid_lift_witness(std::get<SubspaceWitness>(w), d, grid_n, grid_m,
                                    d.ground.h)};
  } else if (op == "embed-line") {
    Witness blocks = witness_from_json(load_json(blocks_path));
    out = Witness{embed_lift_line(std::get<SubspaceWitness>(w),
                                  std::get<SubspaceWitness>(blocks).system, d)};
  } else {
    std::cout << "unknown reduction '" << op << "'\n";
    return kExitUsage;
  }
  save_json_atomic(witness_to_json(out), out_path);
  std::cout << op << " -> " << witness_to_string(out) << '\n';
  return kExitOk;
}

int run_pipeline(const std::string& coloring_path, const std::string& witness_path,
                 const std::string& route_name, int n, const std::string& planted,
                 const std::string& out_path) {
  Coloring d = load_coloring_file(coloring_path);
  Witness w = witness_from_json(load_json(witness_path));
  OplusRoute route;
  if (route_name == "direct") {
    route.mode = OplusRoute::Mode::Direct;
  } else {
    route.mode = OplusRoute::Mode::GallaiWitt;
    route.n = n;
    if (!planted.empty()) {
      GwWitness gw;
      std::string coords = planted.substr(0, planted.find(';'));
      std::string step = planted.substr(planted.find(';') + 1);
      std::istringstream in(coords);
      std::string tok;
      while (std::getline(in, tok, ',')) gw.corner.push_back(std::stoll(tok));
      gw.step = std::stoll(step);
      route.planted = gw;
    }
  }
  PipelineResult res =
      find_monochromatic_line_main(d, std::get<SubspaceWitness>(w).system, route);
  nlohmann::json out = {{"line", witness_to_json(Witness{res.line})},
                        {"trace", res.trace}};
  if (!out_path.empty()) save_json_atomic(out, out_path);
  std::cout << "verified line: " << witness_to_string(Witness{res.line}) << '\n';
  return kExitOk;
}

int run_export_cnf(const KindFlags& kf, int size, const std::string& out_path) {
  KindSpec spec = kf.spec();
  CnfDocument doc = export_cnf(spec, size);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << doc.to_dimacs();
  std::cout << "wrote " << out_path << ": " << doc.num_vars << " vars, "
            << doc.clauses.size() << " clauses\n";
  return kExitOk;
}

int run_decode_model(const KindFlags& kf, int size, const std::string& model_path,
                     const std::string& cert_path) {
  KindSpec spec = kf.spec();
  std::ifstream in(model_path);
  if (!in) throw std::runtime_error("cannot read " + model_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::uint64_t points = spec.ground_for(size).point_count();
  const int point_vars =
      spec.c > 2 ? static_cast<int>(points) * spec.c : static_cast<int>(points);
  CnfModel model = CnfModel::parse(buffer.str(), point_vars);
  Certificate cert = decode_cnf_model(spec, size, model);
  if (!cert_path.empty()) save_json_atomic(cert.to_json(), cert_path);
  std::cout << "model decodes to bad coloring: " << cert.coloring->encode_table() << '\n';
  return kExitOk;
}

int run_bounds(const std::vector<std::string>& compare, const std::string& eval_spec,
               long max_bits) {
  GrowthBudget budget;
  budget.max_bits = max_bits;
  if (!eval_spec.empty()) {
    NamedTower t = parse_tower_spec(eval_spec, budget);
    auto v = tower_try_eval(t.expr, budget);
    if (!v) {
      std::cout << t.name << " exceeds " << max_bits << " bits\n";
      return kExitBudget;
    }
    std::cout << t.name << " = " << v->str() << '\n';
    return kExitOk;
  }
  if (compare.size() != 2) {
    std::cout << "--compare takes exactly two tower specs\n";
    return kExitUsage;
  }
  NamedTower a = parse_tower_spec(compare[0], budget);
  NamedTower b = parse_tower_spec(compare[1], budget);
  switch (tower_compare(a.expr, b.expr, budget)) {
    case Ordering::Less:
      std::cout << a.name << " < " << b.name << '\n';
      return kExitOk;
    case Ordering::Equal:
      std::cout << a.name << " = " << b.name << '\n';
      return kExitOk;
    case Ordering::Greater:
      std::cout << a.name << " > " << b.name << '\n';
      return kExitOk;
    case Ordering::Unknown:
      std::cout << a.name << " ? " << b.name << " (unknown ordering)\n";
      return kExitError;
  }
  return kExitError;
}

int run_verify_chain(const std::string& db_path, const std::string& mode_name,
                     const std::string& out_path) {
  ResultsDb db(db_path);
  db.load(/*verify_certificates=*/true);
  ChainMode mode = mode_name == "roundup" ? ChainMode::RoundUp : ChainMode::Strict;
  ChainReport report = verify_chain(db, mode);
  for (const auto& entry : report.entries)
    std::cout << chain_status_name(entry.status) << "  " << entry.description << '\n';
  if (!out_path.empty()) save_json_atomic(report.to_json(), out_path);
  return report.any_violated() ? kExitVerification : kExitOk;
}

int run_extract_coloring(const std::string& cert_path, const std::string& out_path) {
  Certificate cert = Certificate::from_json(load_json(cert_path));
  if (!cert.coloring) {
    std::cout << "certificate has no coloring payload\n";
    return kExitVerification;
  }
  save_coloring_file(*cert.coloring, out_path);
  std::cout << "wrote " << out_path << " (" << cert.coloring->ground.to_string() << ", "
            << cert.coloring->colors << " colors)\n";
  return kExitOk;
}

int run_db(const std::string& db_path, bool verify_certs) {
  ResultsDb db(db_path);
  db.load(verify_certs);
  for (const auto& [key, entry] : db.entries()) {
    std::cout << key << ": ";
    if (entry.value) std::cout << *entry.value;
    else if (entry.upper) std::cout << "[" << entry.lower << "," << *entry.upper << "]";
    else std::cout << ">=" << entry.lower;
    if (!entry.bad_certificate.empty()) std::cout << "  bad=" << entry.bad_certificate;
    if (!entry.exhausted_certificate.empty())
      std::cout << "  exhausted=" << entry.exhausted_certificate;
    std::cout << '\n';
  }
  if (verify_certs) std::cout << "all certificates verified\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact partition-number workbench"};
  app.require_subcommand(1);

  KindFlags kf;
  SearchFlags sf;

  auto* compute = app.add_subcommand("compute", "scan sizes for the exact number");
  int max_size = 8;
  std::string db_path, cert_dir;
  add_kind_flags(compute, kf);
  add_search_flags(compute, sf);
  compute->add_option("--max-k", max_size, "largest size to scan");
  compute->add_option("--db", db_path, "results database file");
  compute->add_option("--cert-dir", cert_dir, "certificate directory");

  auto* find_bad = app.add_subcommand("find-bad", "search one size for a bad coloring");
  KindFlags kf_fb;
  SearchFlags sf_fb;
  int fb_size = 1;
  std::string fb_cert;
  bool fb_naive = false;
  add_kind_flags(find_bad, kf_fb);
  add_search_flags(find_bad, sf_fb);
  find_bad->add_option("--k", fb_size, "size to search")->required();
  find_bad->add_option("--cert", fb_cert, "certificate output file");
  find_bad->add_flag("--naive", fb_naive, "full enumeration instead of pruned search");

  auto* check = app.add_subcommand("check-witness", "re-verify a certificate or witness");
  std::string cw_cert, cw_witness;
  bool cw_refute = false;
  check->add_option("--cert", cw_cert, "certificate file")->required();
  check->add_flag("--refute", cw_refute, "confirm the bad coloring admits no witness");
  check->add_option("--witness", cw_witness, "witness file to verify against the coloring");

  auto* reduce = app.add_subcommand("reduce", "run one witness transform");
  std::string rd_op, rd_coloring, rd_witness, rd_blocks, rd_out;
  int rd_n = 0, rd_m = 0;
  reduce->add_option("--op", rd_op, "singleton|grid-lift|embed-line")->required();
  reduce->add_option("--coloring", rd_coloring, "coloring file")->required();
  reduce->add_option("--witness", rd_witness, "input witness file")->required();
  reduce->add_option("--blocks", rd_blocks, "embedding witness file (embed-line)");
  reduce->add_option("--grid-n", rd_n, "outer length (grid-lift)");
  reduce->add_option("--grid-m", rd_m, "components per letter (grid-lift)");
  reduce->add_option("--out", rd_out, "output witness file")->required();

  auto* pipeline = app.add_subcommand("pipeline", "derive a verified line end to end");
  std::string pl_coloring, pl_witness, pl_route = "direct", pl_planted, pl_out;
  int pl_n = 0;
  pipeline->add_option("--coloring", pl_coloring, "coloring file")->required();
  pipeline->add_option("--witness", pl_witness, "embedding witness file")->required();
  pipeline->add_option("--route", pl_route, "gw|direct");
  pipeline->add_option("--n", pl_n, "grid side (gw route)");
  pipeline->add_option("--planted", pl_planted, "planted grid witness 'c0,c1,...;step'");
  pipeline->add_option("--out", pl_out, "trace output file");

  auto* export_cmd = app.add_subcommand("export-cnf", "write a DIMACS instance");
  KindFlags kf_ex;
  int ex_size = 1;
  std::string ex_out;
  add_kind_flags(export_cmd, kf_ex);
  export_cmd->add_option("--k", ex_size, "instance size")->required();
  export_cmd->add_option("--out", ex_out, "output .cnf file")->required();

  auto* decode = app.add_subcommand("decode-model", "turn a SAT model into a certificate");
  KindFlags kf_dm;
  int dm_size = 1;
  std::string dm_model, dm_cert;
  add_kind_flags(decode, kf_dm);
  decode->add_option("--k", dm_size, "instance size")->required();
  decode->add_option("--model", dm_model, "solver model file")->required();
  decode->add_option("--cert", dm_cert, "certificate output file");

  auto* bounds = app.add_subcommand("bounds", "evaluate or compare tower expressions");
  std::vector<std::string> bd_compare;
  std::string bd_eval;
  long bd_bits = 4096;
  bounds->add_option("--compare", bd_compare, "two tower specs")->expected(2);
  bounds->add_option("--eval", bd_eval, "tower spec to evaluate");
  bounds->add_option("--max-bits", bd_bits, "evaluation bit budget");

  auto* chain = app.add_subcommand("verify-chain", "audit inequalities across the database");
  std::string ch_db, ch_mode = "strict", ch_out;
  chain->add_option("--db", ch_db, "results database file")->required();
  chain->add_option("--mode", ch_mode, "strict|roundup")
      ->check(CLI::IsMember({"strict", "roundup"}));
  chain->add_option("--out", ch_out, "report output file");

  auto* db_cmd = app.add_subcommand("db", "list database entries");
  std::string db_file;
  bool db_verify = false;
  db_cmd->add_option("--db", db_file, "results database file")->required();
  db_cmd->add_flag("--verify-certs", db_verify, "re-verify every referenced certificate");

  auto* extract = app.add_subcommand("extract-coloring",
                                     "write a certificate's coloring as a standalone file");
  std::string ec_cert, ec_out;
  extract->add_option("--cert", ec_cert, "certificate file")->required();
  extract->add_option("--out", ec_out, "coloring output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) return run_compute(kf, sf, max_size, db_path, cert_dir);
    if (find_bad->parsed()) return run_find_bad(kf_fb, sf_fb, fb_size, fb_cert, fb_naive);
    if (check->parsed()) return run_check_witness(cw_cert, cw_refute, cw_witness);
    if (reduce->parsed())
      return run_reduce(rd_op, rd_coloring, rd_witness, rd_blocks, rd_n, rd_m, rd_out);
    if (pipeline->parsed())
      return run_pipeline(pl_coloring, pl_witness, pl_route, pl_n, pl_planted, pl_out);
    if (export_cmd->parsed()) return run_export_cnf(kf_ex, ex_size, ex_out);
    if (decode->parsed()) return run_decode_model(kf_dm, dm_size, dm_model, dm_cert);
    if (bounds->parsed()) return run_bounds(bd_compare, bd_eval, bd_bits);
    if (chain->parsed()) return run_verify_chain(ch_db, ch_mode, ch_out);
    if (db_cmd->parsed()) return run_db(db_file, db_verify);
    if (extract->parsed()) return run_extract_coloring(ec_cert, ec_out);
  } catch (const InconsistentModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const InvalidInputWitnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const RejectedResultError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
