// mcbap: generate benchmark instances, run the ALNS solver, verify and score
// solutions, export the MIP, and draw berth plans.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcbap/construct.hpp"
#include "mcbap/instgen.hpp"
#include "mcbap/io.hpp"
#include "mcbap/oracle.hpp"
#include "mcbap/plot.hpp"
#include "mcbap/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mcbap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;
constexpr int kExitParam = 4;

std::string default_data_dir() {
  const char* env = std::getenv("MCBAP_DATA_DIR");
  return env && *env ? env : "bench";
}

json params_to_json(const SearchParams& p) {
  return json{{"time_limit_s", p.time_limit},
              {"seed", p.seed},
              {"max_iterations", p.max_iterations},
              {"cooling_share", p.cooling_share},
              {"start_temp_frac", p.start_temp_frac},
              {"end_temp_frac", p.end_temp_frac},
              {"destroy_fraction", p.destroy_fraction},
              {"shaw_pos_weight", p.shaw_pos_weight},
              {"shaw_start_weight", p.shaw_start_weight},
              {"shaw_end_weight", p.shaw_end_weight},
              {"shaw_alpha", p.shaw_alpha},
              {"greedy_gamma", p.greedy_gamma},
              {"arrival_mu", p.arrival_mu},
              {"regret_k", p.regret_k},
              {"update_interval", p.update_interval},
              {"adaptability", p.adaptability},
              {"reward_new_best", p.reward_new_best},
              {"reward_better", p.reward_better},
              {"reward_accepted", p.reward_accepted},
              {"reward_rejected", p.reward_rejected},
              {"position_bound_factor", p.position_bound_factor},
              {"variant", p.adaptive ? "alns" : "lns"},
              {"ls_policy", ls_policy_name(p.ls_policy)}};
}

SearchParams params_from_json(const json& j) {
  SearchParams p;
  p.time_limit = j.at("time_limit_s").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.max_iterations = j.at("max_iterations").get<long long>();
  p.cooling_share = j.at("cooling_share").get<double>();
  p.start_temp_frac = j.at("start_temp_frac").get<double>();
  p.end_temp_frac = j.at("end_temp_frac").get<double>();
  p.destroy_fraction = j.at("destroy_fraction").get<double>();
  p.shaw_pos_weight = j.at("shaw_pos_weight").get<double>();
  p.shaw_start_weight = j.at("shaw_start_weight").get<double>();
  p.shaw_end_weight = j.at("shaw_end_weight").get<double>();
  p.shaw_alpha = j.at("shaw_alpha").get<double>();
  p.greedy_gamma = j.at("greedy_gamma").get<double>();
  p.arrival_mu = j.at("arrival_mu").get<double>();
  p.regret_k = j.at("regret_k").get<int>();
  p.update_interval = j.at("update_interval").get<double>();
  p.adaptability = j.at("adaptability").get<double>();
  p.reward_new_best = j.at("reward_new_best").get<double>();
  p.reward_better = j.at("reward_better").get<double>();
  p.reward_accepted = j.at("reward_accepted").get<double>();
  p.reward_rejected = j.at("reward_rejected").get<double>();
  p.position_bound_factor = j.at("position_bound_factor").get<double>();
  p.adaptive = j.at("variant").get<std::string>() != "lns";
  p.ls_policy = ls_policy_from_name(j.at("ls_policy").get<std::string>());
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

void print_breakdown(const CostBreakdown& b) {
  std::cout << "  waiting      " << b.waiting << "\n"
            << "  handling     " << b.handling << "\n"
            << "  delay        " << b.delay << "\n"
            << "  lft_penalty  " << b.lft_penalty << "\n"
            << "  fuel         " << b.fuel << "\n"
            << "  total        " << b.total << "\n";
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string grid;
  std::string out = default_data_dir();
  bool force = false;
  GeneratorConfig cfg;
  bool single = false;
};

int cmd_generate(const GenerateArgs& a) {
  std::vector<GeneratorConfig> configs;
  std::string root = a.out;
  if (!a.grid.empty()) {
    GridKind kind = a.grid == "main" ? GridKind::Main : GridKind::Small;
    configs = benchmark_grid(kind);
    for (GeneratorConfig& c : configs) {
      c.rates = a.cfg.rates;
      c.time_step = a.cfg.time_step;
    }
    root = a.out + "/" + a.grid;
  } else {
    configs.push_back(a.cfg);
  }
  if (fs::exists(root) && !fs::is_empty(root) && !a.force) {
    std::cerr << "error: output directory " << root << " is not empty (use --force)\n";
    return kExitIo;
  }
  for (const GeneratorConfig& c : configs) {
    fs::path dir = fs::path(root) / c.group_name();
    fs::create_directories(dir);
    fs::path file = dir / ("seed" + std::to_string(c.seed) + ".json");
    write_instance(generate(c), file.string());
  }
  std::cout << "wrote " << configs.size() << " instance(s) under " << root << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string manifest;
  std::string out = "runs";
  int repeats = 1;
  std::string variant = "alns";
  std::string ls_policy = "on-improve";
  bool unsafe = false;
  SearchParams params;
};

int cmd_solve(const SolveArgs& a) {
  std::string instance_path = a.instance;
  SearchParams params = a.params;
  if (!a.manifest.empty()) {
    std::ifstream in(a.manifest);
    if (!in) throw IoError("cannot open " + a.manifest);
    json m = json::parse(in);
    instance_path = m.at("instance").get<std::string>();
    params = params_from_json(m.at("params"));
  } else {
    params.adaptive = a.variant != "lns";
    params.ls_policy = ls_policy_from_name(a.ls_policy);
  }
  if (!a.unsafe) validate_params(params);
  Instance inst = read_instance(instance_path);

  fs::create_directories(a.out);
  double best_overall = kInf;
  std::vector<double> objectives;
  for (int rep = 0; rep < a.repeats; ++rep) {
    SearchParams p = params;
    p.seed = params.seed + static_cast<std::uint64_t>(rep);
    SearchResult res = run_alns(inst, p);
    objectives.push_back(res.best_objective);
    best_overall = std::min(best_overall, res.best_objective);

    std::string tag = a.repeats > 1 ? "_r" + std::to_string(rep) : "";
    // The realized iteration count makes the manifest replayable bit-for-bit.
    SearchParams replay = p;
    if (replay.max_iterations == 0) replay.max_iterations = res.iterations;
    json manifest = {{"schema_version", 1},
                     {"instance", instance_path},
                     {"params", params_to_json(replay)},
                     {"output_dir", a.out}};
    write_text(a.out + "/manifest" + tag + ".json", manifest.dump(2) + "\n");
    write_solution(res.best, a.out + "/solution" + tag + ".json");
    write_text(a.out + "/trace" + tag + ".csv", trace_to_csv(res));
    write_text(a.out + "/operators" + tag + ".csv", operator_trace_to_csv(res));

    CostBreakdown b = evaluate(inst, res.best);
    std::cout << "run " << rep << ": construction " << res.construction_objective << ", best "
              << res.best_objective << " after " << res.iterations << " iterations\n";
    print_breakdown(b);
    auto violations = check_feasibility(inst, res.best);
    if (!violations.empty()) {
      std::cerr << "internal error: solver emitted an infeasible solution\n";
      return kExitInfeasible;
    }
  }
  if (a.repeats > 1) {
    double avg = 0, worst = -kInf;
    for (double o : objectives) {
      avg += gap(o, best_overall);
      worst = std::max(worst, gap(o, best_overall));
    }
    avg /= objectives.size();
    std::cout << "repeats: best " << best_overall << ", avg gap " << avg * 100
              << "%, worst gap " << worst * 100 << "%\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_evaluate(const std::string& instance_path, const std::string& solution_path,
                 double best) {
  Instance inst = read_instance(instance_path);
  Solution sol = read_solution(solution_path, inst.calls.size());
  auto violations = check_feasibility(inst, sol);
  if (sol.complete()) {
    CostBreakdown b = evaluate(inst, sol);
    std::cout << "objective " << b.total << "\n";
    print_breakdown(b);
    if (best > 0) std::cout << "gap vs best " << gap(b.total, best) * 100 << "%\n";
  } else {
    std::cout << "solution is incomplete\n";
  }
  if (!violations.empty()) {
    std::cout << violations.size() << " violation(s):\n";
    for (const Violation& v : violations)
      std::cout << "  " << violation_to_string(inst, v) << "\n";
    return kExitInfeasible;
  }
  std::cout << "feasible\n";
  return kExitOk;
}

int cmd_plot(const std::string& instance_path, const std::string& solution_path,
             const std::string& out_dir) {
  Instance inst = read_instance(instance_path);
  Solution sol = read_solution(solution_path, inst.calls.size());
  for (const std::string& f : write_solution_svgs(inst, sol, out_dir))
    std::cout << "wrote " << f << "\n";
  return kExitOk;
}

int cmd_export_mip(const std::string& instance_path, std::string out,
                   const std::string& check_solution) {
  Instance inst = read_instance(instance_path);
  if (out.empty()) out = fs::path(instance_path).replace_extension(".lp").string();
  export_lp(inst, out);
  std::cout << "wrote " << out << "\n";
  if (!check_solution.empty()) {
    Solution sol = read_solution(check_solution, inst.calls.size());
    LpCheckReport rep = substitute_and_check(inst, out, sol);
    std::cout << "substitution: " << rep.rows_checked << " rows, "
              << rep.violated_rows.size() << " violated, objective " << rep.objective << "\n";
    for (const std::string& r : rep.violated_rows) std::cout << "  violated: " << r << "\n";
    if (!rep.violated_rows.empty()) return kExitInfeasible;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string data = default_data_dir();
  std::string out = "bench_results.csv";
  double time_limit = 300;
  std::uint64_t seed = 1;
  int repeats = 1;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  long long max_iterations = 0;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(a.data))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "error: no instances under " << a.data << "\n";
    return kExitIo;
  }

  struct Row {
    std::string group, file;
    int repeat;
    double objective, construction;
    long long iterations;
  };
  std::vector<Row> rows(files.size() * a.repeats);
  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  int jobs = std::max(1, a.jobs);
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      const fs::path& file = files[i / a.repeats];
      int rep = static_cast<int>(i % a.repeats);
      Instance inst = read_instance(file.string());
      SearchParams p;
      p.time_limit = a.time_limit;
      p.seed = a.seed + static_cast<std::uint64_t>(rep);
      p.max_iterations = a.max_iterations;
      SearchResult res = run_alns(inst, p);
      rows[i] = {file.parent_path().filename().string(), file.string(), rep,
                 res.best_objective, res.construction_objective, res.iterations};
      std::lock_guard<std::mutex> lock(io_mutex);
      std::cout << file.string() << " rep " << rep << ": " << res.best_objective << "\n";
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  // Best known per instance, then per-group gap statistics.
  std::map<std::string, double> best_known;
  for (const Row& r : rows) {
    auto [it, fresh] = best_known.try_emplace(r.file, r.objective);
    if (!fresh) it->second = std::min(it->second, r.objective);
  }
  struct Agg {
    int n = 0;
    double sum_gap = 0, best_gap = kInf, worst_gap = -kInf, sum_obj = 0;
  };
  std::map<std::string, Agg> groups;
  for (const Row& r : rows) {
    double g = gap(r.objective, best_known[r.file]);
    Agg& agg = groups[r.group];
    agg.n++;
    agg.sum_gap += g;
    agg.best_gap = std::min(agg.best_gap, g);
    agg.worst_gap = std::max(agg.worst_gap, g);
    agg.sum_obj += r.objective;
  }
  std::ostringstream csv;
  csv << "group,runs,mean_objective,mean_gap,best_gap,worst_gap\n";
  for (const auto& [name, agg] : groups)
    csv << name << ',' << agg.n << ',' << agg.sum_obj / agg.n << ',' << agg.sum_gap / agg.n
        << ',' << agg.best_gap << ',' << agg.worst_gap << '\n';
  write_text(a.out, csv.str());
  std::cout << "wrote " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-port continuous berth allocation solver"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Generate benchmark instances");
  generate->add_option("--grid", gen.grid, "Benchmark grid: main (240) or small (720)")
      ->check(CLI::IsMember({"main", "small"}));
  generate->add_option("--out", gen.out, "Output directory (default $MCBAP_DATA_DIR or bench)");
  generate->add_flag("--force", gen.force, "Write into a non-empty directory");
  generate->add_option("--ships", gen.cfg.n_ships, "Number of optimized ships");
  generate->add_option("--external", gen.cfg.n_external_per_port, "External berths per port");
  generate->add_option("--segment", gen.cfg.segment_length, "Quay segment length (m)");
  generate->add_option("--seed", gen.cfg.seed, "Generator seed");
  generate->add_option("--ports", gen.cfg.n_ports, "Number of ports (2 or 3)");
  generate->add_option("--time-step", gen.cfg.time_step, "Berth-start grid (hours)");
  generate->add_option("--fuel-price", gen.cfg.rates.fuel_price, "USD per tonne");
  generate->add_option("--handling-rate", gen.cfg.rates.handling_rate, "USD per hour");
  generate->add_option("--delay-rate", gen.cfg.rates.delay_rate, "USD per hour");
  generate->add_option("--waiting-rate", gen.cfg.rates.waiting_rate, "USD per hour");
  generate->add_option("--lft-penalty-rate", gen.cfg.rates.lft_penalty_rate, "USD per hour");
  generate->add_option("--beta", gen.cfg.rates.deviation_factor,
                       "Handling increase per meter off the ideal position");

  SolveArgs sol;
  CLI::App* solve = app.add_subcommand("solve", "Run the ALNS solver on an instance");
  solve->add_option("instance", sol.instance, "Instance file");
  solve->add_option("--manifest", sol.manifest, "Re-run a recorded manifest");
  solve->add_option("--out", sol.out, "Output directory");
  solve->add_option("--time-limit", sol.params.time_limit, "Seconds");
  solve->add_option("--seed", sol.params.seed, "Search seed");
  solve->add_option("--max-iterations", sol.params.max_iterations,
                    "Deterministic iteration budget (0 = wall clock)");
  solve->add_option("--repeats", sol.repeats, "Independent runs, seeds seed+i");
  solve->add_option("--variant", sol.variant, "alns or lns (lns freezes operator weights)")
      ->check(CLI::IsMember({"alns", "lns"}));
  solve->add_option("--ls-policy", sol.ls_policy, "on-improve, every, every2, every4, off")
      ->check(CLI::IsMember({"on-improve", "every", "every2", "every4", "off"}));
  solve->add_flag("--unsafe", sol.unsafe, "Skip the tuned-range parameter check");
  solve->add_option("--cooling-share", sol.params.cooling_share, "");
  solve->add_option("--start-temp-frac", sol.params.start_temp_frac, "");
  solve->add_option("--end-temp-frac", sol.params.end_temp_frac, "");
  solve->add_option("--destroy-fraction", sol.params.destroy_fraction, "");
  solve->add_option("--shaw-a", sol.params.shaw_pos_weight, "");
  solve->add_option("--shaw-b", sol.params.shaw_start_weight, "");
  solve->add_option("--shaw-c", sol.params.shaw_end_weight, "");
  solve->add_option("--shaw-alpha", sol.params.shaw_alpha, "");
  solve->add_option("--gamma", sol.params.greedy_gamma, "");
  solve->add_option("--mu", sol.params.arrival_mu, "");
  solve->add_option("--regret-k", sol.params.regret_k, "");
  solve->add_option("--update-interval", sol.params.update_interval, "");
  solve->add_option("--adaptability", sol.params.adaptability, "");
  solve->add_option("--reward-best", sol.params.reward_new_best, "");
  solve->add_option("--reward-better", sol.params.reward_better, "");
  solve->add_option("--reward-accepted", sol.params.reward_accepted, "");
  solve->add_option("--reward-rejected", sol.params.reward_rejected, "");
  solve->add_option("--position-bound", sol.params.position_bound_factor, "");

  std::string eval_instance, eval_solution;
  double eval_best = 0;
  CLI::App* eval = app.add_subcommand("evaluate", "Score and verify a solution file");
  eval->add_option("instance", eval_instance, "Instance file")->required();
  eval->add_option("solution", eval_solution, "Solution file")->required();
  eval->add_option("--best", eval_best, "Known best objective for the gap");

  std::string plot_instance, plot_solution, plot_out = "plots";
  CLI::App* plot = app.add_subcommand("plot", "Render one SVG berth plan per port");
  plot->add_option("instance", plot_instance, "Instance file")->required();
  plot->add_option("solution", plot_solution, "Solution file")->required();
  plot->add_option("--out", plot_out, "Output directory");

  std::string mip_instance, mip_out, mip_check;
  CLI::App* mip = app.add_subcommand("export-mip", "Write the model in CPLEX-LP format");
  mip->add_option("instance", mip_instance, "Instance file")->required();
  mip->add_option("--out", mip_out, "Output .lp path");
  mip->add_option("--check-solution", mip_check, "Substitute a solution into the model");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Solve an instance tree and aggregate gaps");
  bench_cmd->add_option("--data", bench.data, "Instance tree root");
  bench_cmd->add_option("--out", bench.out, "Aggregate CSV path");
  bench_cmd->add_option("--time-limit", bench.time_limit, "Seconds per run");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--repeats", bench.repeats, "Runs per instance");
  bench_cmd->add_option("--jobs", bench.jobs, "Parallel workers");
  bench_cmd->add_option("--max-iterations", bench.max_iterations,
                        "Deterministic iteration budget per run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve) return cmd_solve(sol);
    if (*eval) return cmd_evaluate(eval_instance, eval_solution, eval_best);
    if (*plot) return cmd_plot(plot_instance, plot_solution, plot_out);
    if (*mip) return cmd_export_mip(mip_instance, mip_out, mip_check);
    if (*bench_cmd) return cmd_bench(bench);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParam;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
