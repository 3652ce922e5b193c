// Command-line front end: solve, verify, gen, bench.
//
// Exit codes for `solve`: 0 = YES, 1 = NO, 2 = usage or parse error,
// 3 = inconclusive (budget exhausted). `verify` exits 0 when the completion
// passes, 1 when it fails, 2 on errors. `gen` and `bench` exit 0 or 2.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dmc/dmc.hpp"

namespace {

using nlohmann::json;
using namespace dmc;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitInconclusive = 3;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

json witness_json(const CompleteMatrix& T) {
  json rows = json::array();
  for (std::size_t i = 0; i < T.n(); ++i) rows.push_back(T.row(i).to_string());
  return rows;
}

int cmd_solve(const std::string& file, const std::string& solver, std::uint64_t budget,
              bool want_witness, bool as_json) {
  DmcInstance inst = load_instance_file(file);
  auto choice = solver_from_name(solver);
  if (!choice) throw CLI::ValidationError("--solver", "unknown solver '" + solver + "'");

  auto start = std::chrono::steady_clock::now();
  SolveResult result = solve(inst, *choice, SearchBudget{budget});
  double ms = elapsed_ms(start);

  std::optional<DiameterStats> stats;
  if (result.yes()) stats = diameter_stats(*result.witness, inst.offsets());

  if (as_json) {
    json report{{"format", "dmc-report/1"},
                {"command", "solve"},
                {"file", file},
                {"n", inst.matrix().n()},
                {"l", inst.matrix().l()},
                {"alpha", inst.alpha()},
                {"beta", inst.beta()},
                {"verdict", outcome_name(result.outcome)},
                {"solver", result.solver},
                {"nodes", result.nodes},
                {"wall_time_ms", ms}};
    if (stats) {
      report["gamma"] = stats->gamma == kInfiniteDistance ? json(nullptr) : json(stats->gamma);
      report["delta"] = stats->delta;
    }
    if (result.yes() && want_witness) report["witness"] = witness_json(*result.witness);
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << outcome_name(result.outcome) << " solver=" << result.solver
              << " nodes=" << result.nodes << " time_ms=" << ms << '\n';
    if (stats) {
      std::cout << "gamma=";
      if (stats->gamma == kInfiniteDistance) std::cout << "inf";
      else std::cout << stats->gamma;
      std::cout << " delta=" << stats->delta << '\n';
    }
    if (result.yes() && want_witness) write_completion(std::cout, *result.witness);
  }

  switch (result.outcome) {
    case Outcome::Yes: return kExitYes;
    case Outcome::No: return kExitNo;
    default: return kExitInconclusive;
  }
}

// First violated constraint, if any: a known-entry mismatch or a row pair
// whose shifted distance leaves [alpha, beta].
struct VerifyReport {
  bool ok = true;
  std::string message;
};

VerifyReport diagnose(const DmcInstance& inst, const CompleteMatrix& T) {
  const IncompleteMatrix& S = inst.matrix();
  for (std::size_t i = 0; i < S.n(); ++i)
    for (std::size_t j = 0; j < S.l(); ++j) {
      Cell c = S.cell(i, j);
      if (c != Cell::Missing && c != T.cell(i, j)) {
        std::ostringstream os;
        os << "known entry mismatch at row " << i + 1 << ", column " << j + 1;
        return {false, os.str()};
      }
    }
  for (std::size_t h = 0; h + 1 < S.n(); ++h)
    for (std::size_t hp = h + 1; hp < S.n(); ++hp) {
      Dist d = hamming_distance(T.row(h), T.row(hp)) + inst.offsets().delta(h, hp);
      if (d < inst.alpha() || d > inst.beta()) {
        std::ostringstream os;
        os << "pair (" << h + 1 << ", " << hp + 1 << ") has distance " << d << " outside ["
           << inst.alpha() << ", " << inst.beta() << "]";
        return {false, os.str()};
      }
    }
  return {true, "completion satisfies all constraints"};
}

int cmd_verify(const std::string& instance_file, const std::string& completion_file, bool as_json) {
  DmcInstance inst = load_instance_file(instance_file);
  CompleteMatrix T = load_completion_file(completion_file, inst.matrix().n(), inst.matrix().l());
  VerifyReport rep = diagnose(inst, T);
  if (as_json) {
    json report{{"format", "dmc-report/1"},
                {"command", "verify"},
                {"ok", rep.ok},
                {"detail", rep.message}};
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << (rep.ok ? "PASS" : "FAIL") << ": " << rep.message << '\n';
  }
  return rep.ok ? kExitYes : kExitNo;
}

void write_instance_file(const std::string& path, const DmcInstance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_instance(out, inst);
}

void write_witness_file(const std::string& path, const CompleteMatrix& T) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_completion(out, T);
}

void write_label_file(const std::string& path, const std::string& label) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << label << '\n';
}

struct GenOptions {
  std::string kind, out, vectors;
  int n = 4, l = 8, m = 4, core = 1, petal = 1, i = 0, j = 1, bn = 4;
  std::int64_t alpha = -1, beta = -1, copies = 1;
  double missing = 0.2;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenOptions& opt) {
  if (opt.kind == "planted") {
    auto planted = plant_yes_instance(opt.n, opt.l, opt.missing, opt.seed);
    write_instance_file(opt.out, planted.instance);
    write_witness_file(opt.out + ".witness", planted.witness);
  } else if (opt.kind == "sunflower") {
    CompleteMatrix T = plant_sunflower_matrix(opt.n, opt.core, opt.petal, opt.l);
    DiameterStats st = diameter_stats(T);
    IncompleteMatrix S = T.grid();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t r = 0; r < S.n(); ++r)
      for (std::size_t c = 0; c < S.l(); ++c)
        if (coin(rng) < opt.missing) S.set_cell(r, c, Cell::Missing);
    write_instance_file(opt.out, DmcInstance(S, st.gamma, st.delta));
    write_witness_file(opt.out + ".witness", T);
  } else if (opt.kind == "ov") {
    std::ifstream in(opt.vectors);
    if (!in) throw std::runtime_error("cannot open '" + opt.vectors + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty() || lines.size() % 2 != 0)
      throw std::runtime_error("vector file must hold an even number of rows");
    OvInstance ov;
    for (std::size_t t = 0; t < lines.size(); ++t) {
      RowVector r = RowVector::from_string(lines[t]);
      (t < lines.size() / 2 ? ov.u : ov.v).push_back(r);
    }
    CompleteMatrix T = gen_ov(ov);
    Dist five_l = 5 * static_cast<Dist>(ov.u[0].size());
    DiameterStats st = diameter_stats(T);
    write_instance_file(opt.out, DmcInstance(T.grid(), 0, five_l));
    write_label_file(opt.out + ".label",
                     std::string(st.delta == five_l ? "YES" : "NO") +
                         " delta=" + std::to_string(st.delta));
  } else if (opt.kind == "sat3b2") {
    CnfFormula f = random_3b2(opt.m, opt.seed);
    Reduction3B2 red = opt.alpha >= 0
                           ? reduce_3b2sat(f, opt.alpha)
                           : reduce_3b2sat(f);
    write_instance_file(opt.out, red.instance);
    write_label_file(opt.out + ".label", brute_force_sat(f) ? "YES" : "NO");
    std::ofstream cnf(opt.out + ".cnf");
    cnf << to_dimacs(f);
  } else if (opt.kind == "oneinthree") {
    CnfFormula f = random_cubic_monotone(opt.m, opt.seed);
    Reduction1In3 red = reduce_1in3sat(f);
    write_instance_file(opt.out, red.instance);
    write_label_file(opt.out + ".label", brute_force_one_in_three(f) ? "YES" : "NO");
    std::ofstream cnf(opt.out + ".cnf");
    cnf << to_dimacs(f);
  } else if (opt.kind == "conrmc-r2") {
    std::mt19937_64 rng(opt.seed);
    IncompleteMatrix S = random_incomplete_matrix(rng, opt.n, opt.l, opt.l, opt.n * opt.l);
    Dist alpha = opt.alpha >= 0 ? opt.alpha : 0;
    Dist beta = opt.beta >= 0 ? opt.beta : 2 * ((alpha + 1) / 2) + 4;
    DmcInstance red = reduce_conrmc_r2(S, alpha, beta);
    write_instance_file(opt.out, red);
    if (S.l() <= 16) {
      bool center = false;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << S.l()) && !center; ++mask) {
        RowVector v(S.l());
        for (std::size_t t = 0; t < S.l(); ++t)
          v.set(t, (mask >> t) & 1 ? Cell::One : Cell::Zero);
        bool ok = true;
        for (std::size_t r = 0; r < S.n() && ok; ++r) ok = hamming_distance(v, S.row(r)) <= 2;
        center = ok;
      }
      write_label_file(opt.out + ".label", center ? "YES" : "NO");
    }
  } else if (opt.kind == "bmatrix") {
    CompleteMatrix B = gen_B(opt.bn, opt.i, opt.j);
    Dist gb = gamma_B(opt.bn);
    write_instance_file(opt.out, DmcInstance(B.grid(), gb, gb + 2));
  } else {
    throw CLI::ValidationError("kind", "unknown generator kind '" + opt.kind + "'");
  }
  return kExitYes;
}

struct BenchTask {
  std::string regime;
  int n = 0, l = 0;
  int instances = 0;
  std::uint64_t seed = 0;
  double missing_rate = 0.15;
  Dist alpha = 0, beta = 0;
  int k_cap = 0;  // 0 = unlimited
};

struct BenchCell {
  bool agreement = true;
  double mean_time_ms = 0.0;
};

BenchCell run_bench_cell(const BenchTask& task, std::uint64_t budget) {
  auto choice = solver_from_name(task.regime);
  BenchCell cell;
  double total_ms = 0.0;
  std::mt19937_64 rng(task.seed);
  for (int t = 0; t < task.instances; ++t) {
    int k_cap = task.k_cap > 0 ? task.k_cap : task.l;
    int budget_cells = static_cast<int>(task.missing_rate * task.n * task.l);
    IncompleteMatrix S = random_incomplete_matrix(rng, task.n, task.l, k_cap, budget_cells);
    DmcInstance inst(S, task.alpha, task.beta);

    auto start = std::chrono::steady_clock::now();
    SolveResult got = solve(inst, *choice, SearchBudget{budget});
    total_ms += elapsed_ms(start);

    if (got.inconclusive()) {
      cell.agreement = false;
      continue;
    }
    if (S.missing_count() <= 14) {
      auto oracle = solve_exhaustive(inst);
      if (oracle.inconclusive() || oracle.outcome != got.outcome) cell.agreement = false;
    }
    if (got.yes() && !verify_instance(inst, *got.witness)) cell.agreement = false;
  }
  cell.mean_time_ms = task.instances > 0 ? total_ms / task.instances : 0.0;
  return cell;
}

int cmd_bench(const std::string& config_file, const std::string& out_file, int parallel,
              std::uint64_t budget) {
  std::ifstream in(config_file);
  if (!in) throw std::runtime_error("cannot open '" + config_file + "'");
  json config = json::parse(in);

  std::vector<BenchTask> tasks;
  for (const auto& sweep : config.value("sweeps", json::array())) {
    BenchTask base;
    base.regime = sweep.at("regime").get<std::string>();
    auto choice = solver_from_name(base.regime);
    if (!choice) throw std::runtime_error("unknown regime '" + base.regime + "'");
    base.instances = sweep.value("instances", 10);
    base.seed = sweep.value("seed", 1);
    base.missing_rate = sweep.value("missing_rate", 0.15);
    Dist alpha = sweep.value("alpha", 0);
    switch (*choice) {
      case SolverChoice::D0B1: base.alpha = 0; base.beta = 1; base.k_cap = 0; break;
      case SolverChoice::D0B2: base.alpha = 0; base.beta = 2; base.k_cap = 0; break;
      case SolverChoice::D0B3: base.alpha = 0; base.beta = 3; base.k_cap = 0; break;
      case SolverChoice::AlphaEqBeta: base.alpha = alpha; base.beta = alpha; base.k_cap = 0; break;
      case SolverChoice::AlphaPlus1: base.alpha = alpha; base.beta = alpha + 1; base.k_cap = 0; break;
      case SolverChoice::K1: base.alpha = alpha; base.beta = sweep.value("beta", alpha + 2); base.k_cap = 1; break;
      case SolverChoice::K2Eq: base.alpha = alpha; base.beta = alpha; base.k_cap = 2; break;
      default: base.alpha = alpha; base.beta = sweep.value("beta", alpha + 2); base.k_cap = 0; break;
    }
    for (int n : sweep.at("n").get<std::vector<int>>())
      for (int l : sweep.at("l").get<std::vector<int>>()) {
        BenchTask task = base;
        task.n = n;
        task.l = l;
        task.seed = base.seed + static_cast<std::uint64_t>(n) * 1000003 + l;
        tasks.push_back(task);
      }
  }

  std::vector<BenchCell> cells(tasks.size());
  if (parallel > 1) {
    std::vector<std::future<void>> jobs;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < parallel; ++w)
      jobs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1))
          cells[t] = run_bench_cell(tasks[t], budget);
      }));
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t t = 0; t < tasks.size(); ++t) cells[t] = run_bench_cell(tasks[t], budget);
  }

  std::ostringstream csv;
  csv << "regime,n,l,solver,agreement,mean_time_ms\n";
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    csv << tasks[t].regime << ',' << tasks[t].n << ',' << tasks[t].l << ',' << tasks[t].regime
        << ',' << (cells[t].agreement ? "true" : "false") << ',' << cells[t].mean_time_ms << '\n';
  }
  if (out_file.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error("cannot write '" + out_file + "'");
    out << csv.str();
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvers for diameter matrix completion"};
  app.require_subcommand(1);

  std::string solve_file, solve_solver = "auto";
  std::uint64_t budget = SearchBudget{}.max_nodes;
  bool want_witness = false, as_json = false;
  auto* solve_cmd = app.add_subcommand("solve", "decide an instance file");
  solve_cmd->add_option("file", solve_file, "instance file")->required();
  solve_cmd->add_option("--solver", solve_solver, "auto|oracle|backtrack|d0b1|d0b2|d0b3|alpha_eq_beta|alpha_plus1|k1|k2eq");
  solve_cmd->add_option("--budget", budget, "search node budget");
  solve_cmd->add_flag("--witness", want_witness, "emit the witness completion");
  solve_cmd->add_flag("--json", as_json, "JSON report");

  std::string verify_instance_file, verify_completion_file;
  bool verify_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "check a completion against an instance");
  verify_cmd->add_option("instance", verify_instance_file, "instance file")->required();
  verify_cmd->add_option("completion", verify_completion_file, "completion file")->required();
  verify_cmd->add_flag("--json", verify_json, "JSON report");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate instances");
  gen_cmd->add_option("kind", gen.kind, "planted|sunflower|ov|sat3b2|oneinthree|conrmc-r2|bmatrix")
      ->required();
  gen_cmd->add_option("--out", gen.out, "output instance file")->required();
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--n", gen.n, "row count");
  gen_cmd->add_option("--l", gen.l, "column count");
  gen_cmd->add_option("--m", gen.m, "clause count");
  gen_cmd->add_option("--missing", gen.missing, "erasure probability");
  gen_cmd->add_option("--alpha", gen.alpha, "distance lower bound");
  gen_cmd->add_option("--beta", gen.beta, "distance upper bound");
  gen_cmd->add_option("--core", gen.core, "sunflower core size");
  gen_cmd->add_option("--petal", gen.petal, "sunflower petal size");
  gen_cmd->add_option("--bn", gen.bn, "row count of the distance-shift matrix");
  gen_cmd->add_option("--i", gen.i, "first row of the special pair");
  gen_cmd->add_option("--j", gen.j, "second row of the special pair");
  gen_cmd->add_option("--copies", gen.copies, "stack copies");
  gen_cmd->add_option("--vectors", gen.vectors, "orthogonal-vectors input file");

  std::string bench_config, bench_out;
  int parallel = 1;
  auto* bench_cmd = app.add_subcommand("bench", "agreement and timing sweeps");
  bench_cmd->add_option("config", bench_config, "JSON sweep configuration")->required();
  bench_cmd->add_option("--out", bench_out, "CSV output file (stdout when omitted)");
  bench_cmd->add_option("--parallel", parallel, "concurrent workers over independent instances");
  bench_cmd->add_option("--budget", budget, "search node budget");

  try {
    app.parse(argc, argv);
    if (solve_cmd->parsed()) return cmd_solve(solve_file, solve_solver, budget, want_witness, as_json);
    if (verify_cmd->parsed()) return cmd_verify(verify_instance_file, verify_completion_file, verify_json);
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_out, parallel, budget);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  } catch (const dmc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
