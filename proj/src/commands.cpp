#include "tspdual/commands.hpp"

#include <algorithm>
#include <exception>
#include <ostream>

#include <nlohmann/json.hpp>

#include "tspdual/formulation.hpp"
#include "tspdual/instance.hpp"
#include "tspdual/inverse.hpp"
#include "tspdual/io.hpp"
#include "tspdual/reduction.hpp"

namespace tspdual {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed;
  for (std::uint64_t part : {a, b}) {
    z += 0x9e3779b97f4a7c15ULL + part;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
  }
  return z;
}

namespace {

struct ResolvedInstance {
  io::LoadedInstance data;
  std::string id;
  std::uint64_t seed;
};

ResolvedInstance resolve_instance(const CommandOptions& opts) {
  const std::uint64_t seed = opts.seed.value_or(0);
  if (opts.instance) {
    return {io::load_instance(*opts.instance), opts.instance->stem().string(),
            seed};
  }
  auto gen = random_euclidean_instance(opts.random_n, seed);
  return {{std::move(gen.d), std::move(gen.points)},
          "random_n" + std::to_string(opts.random_n) + "_s" +
              std::to_string(seed),
          seed};
}

json echo_options(const std::string& command, const CommandOptions& opts) {
  json j;
  j["command"] = command;
  j["instance"] = opts.instance ? json(opts.instance->string()) : json(nullptr);
  if (!opts.instance) j["random_n"] = opts.random_n;
  j["seed"] = opts.seed.value_or(0);
  return j;
}

json tour_json(const Tour& t) { return t.labels(); }

json gap_record_json(const GapRecord& g) {
  return {{"instance_id", g.instance_id},
          {"n", g.n},
          {"seed", g.seed},
          {"oracle_optimum", g.oracle_optimum},
          {"dual_bound", g.dual_bound},
          {"gap", g.gap},
          {"iterations", g.iterations},
          {"termination", to_string(g.termination)},
          {"verdict", to_string(g.verdict)}};
}

struct DualRun {
  GapRecord record;
  AscentResult ascent;
  VerifyReport verify;
};

DualRun run_dual(const DistanceMatrix& d, const AscentConfig& cfg,
                 std::string id, std::uint64_t seed) {
  const ReducedProblem r = reduce(build_formulation(d));
  const OracleResult oracle = brute_force_optimum(d, true);
  DualRun run;
  run.ascent = dual_ascent(r, default_dual_start(r), cfg);
  run.verify = verify_global(r, run.ascent.best_point, oracle,
                             VerifyConfig{.gtol = cfg.gtol});
  run.record.instance_id = std::move(id);
  run.record.n = d.n();
  run.record.seed = seed;
  run.record.oracle_optimum = oracle.best_length;
  run.record.dual_bound = run.ascent.best_value;
  run.record.gap = oracle.best_length - run.ascent.best_value;
  run.record.iterations = run.ascent.iterations;
  run.record.termination = run.ascent.termination;
  run.record.verdict = run.verify.verdict;
  return run;
}

std::string gap_csv_row(const GapRecord& g) {
  return g.instance_id + ',' + std::to_string(g.n) + ',' +
         std::to_string(g.seed) + ',' + io::format_double(g.oracle_optimum) +
         ',' + io::format_double(g.dual_bound) + ',' +
         io::format_double(g.gap) + ',' + std::to_string(g.iterations) + ',' +
         to_string(g.termination) + ',' + to_string(g.verdict) + '\n';
}

}  // namespace

int cmd_formulate(const CommandOptions& opts, std::ostream& log) {
  const ResolvedInstance inst = resolve_instance(opts);
  const DistanceMatrix& d = inst.data.d;
  const QpFormulation f = build_formulation(d);
  const OracleResult oracle = brute_force_optimum(d, true);

  io::write_text(opts.out / "A.csv", io::matrix_to_csv(f.A));
  io::write_text(opts.out / "C.csv", io::matrix_to_csv(f.C));
  io::write_text(opts.out / "D.csv", io::matrix_to_csv(f.D));

  json summary;
  summary["config"] = echo_options("formulate", opts);
  summary["n"] = d.n();
  summary["A_symmetric"] = (f.A - f.A.transpose()).cwiseAbs().maxCoeff() == 0.0;
  summary["oracle_tour"] = tour_json(oracle.best_tour);
  summary["oracle_length"] = oracle.best_length;
  summary["oracle_tour_objective"] = objective(f, encode_tour(oracle.best_tour));
  io::write_json(opts.out / "formulate_summary.json", summary);
  log << "formulate: n=" << d.n() << " oracle length "
      << io::format_double(oracle.best_length) << "\n";
  return kExitOk;
}

int cmd_reduce(const CommandOptions& opts, std::ostream& log) {
  const ResolvedInstance inst = resolve_instance(opts);
  const DistanceMatrix& d = inst.data.d;
  const ReducedProblem r = reduce(build_formulation(d));
  json j = io::reduced_to_json(r);
  j["config"] = echo_options("reduce", opts);
  if (d.n() == 4) j["paper_match"] = matches_four_city_display(r, d);
  io::write_json(opts.out / "reduced.json", j);
  log << "reduce: A_r " << r.A_r.rows() << "x" << r.A_r.cols() << ", E_r "
      << r.E_r.rows() << "x" << r.E_r.cols() << "\n";
  return kExitOk;
}

int cmd_dual(const CommandOptions& opts, std::ostream& log) {
  const ResolvedInstance inst = resolve_instance(opts);
  AscentConfig cfg;
  if (opts.config) cfg = io::ascent_config_from_json(io::read_json_file(*opts.config));

  const DualRun run = run_dual(inst.data.d, cfg, inst.id, inst.seed);

  json out;
  json echo = echo_options("dual", opts);
  echo["ascent"] = io::ascent_config_to_json(cfg);
  out["config"] = std::move(echo);
  out["instance"] = io::instance_to_json(inst.data.d, inst.data.points);
  out["gap_record"] = gap_record_json(run.record);
  out["verify"] = io::verify_report_to_json(run.verify);
  out["best_point"] = {{"lambda", io::vector_to_json(run.ascent.best_point.lambda)},
                       {"mu", io::vector_to_json(run.ascent.best_point.mu)}};
  io::write_json(opts.out / "gap_record.json", out);
  io::write_text(opts.out / "dual_trace.csv", io::ascent_trace_csv(run.ascent));

  log << "dual: optimum " << io::format_double(run.record.oracle_optimum)
      << " bound " << io::format_double(run.record.dual_bound) << " gap "
      << io::format_double(run.record.gap) << " ("
      << to_string(run.record.termination) << ", " << run.record.iterations
      << " iterations), verdict " << to_string(run.verify.verdict) << "\n";
  if (run.verify.verdict == Verdict::ConfirmsTheorem2) {
    log << "*** COUNTEREXAMPLE: the dual point certifies a binary global "
           "optimum ***\n";
    return kExitCounterexample;
  }
  return kExitOk;
}

int cmd_inverse(const CommandOptions& opts, std::ostream& log) {
  InverseConfig cfg;
  if (opts.config) cfg = io::inverse_config_from_json(io::read_json_file(*opts.config));
  if (opts.seed) cfg.seed = *opts.seed;
  if (cfg.n < 3 || cfg.n > kMaxOracleCities) {
    throw Error(ErrorKind::ConfigError,
                "n must lie in 3.." + std::to_string(kMaxOracleCities));
  }

  const InverseSearchReport rep = inverse_search(identity_target(cfg.n), cfg);
  io::write_json(opts.out / "inverse_report.json", io::inverse_report_to_json(rep));

  log << "inverse: n=" << cfg.n << " restarts=" << rep.restarts;
  if (rep.best) log << " best_min_eig=" << io::format_double(rep.best_min_eig);
  log << " verdict " << to_string(rep.verdict) << "\n";
  if (rep.verdict == InverseVerdict::FeasibleCounterexample) {
    log << "*** COUNTEREXAMPLE: feasible (d, lambda, mu) found and replayed ***\n";
    return kExitCounterexample;
  }
  return kExitOk;
}

int cmd_experiment(const CommandOptions& opts, std::ostream& log) {
  json cfg_json = json::object();
  if (opts.config) cfg_json = io::read_json_file(*opts.config);
  if (!cfg_json.is_object()) {
    throw Error(ErrorKind::ConfigError, "experiment config must be an object");
  }
  int k = 10;
  std::vector<int> ns{4, 5};
  std::uint64_t seed = 0;
  AscentConfig ascent;
  for (const auto& [key, value] : cfg_json.items()) {
    try {
      if (key == "k") {
        k = value.get<int>();
      } else if (key == "n") {
        ns = {value.get<int>()};
      } else if (key == "ns") {
        ns = value.get<std::vector<int>>();
      } else if (key == "seed") {
        seed = value.get<std::uint64_t>();
      } else if (key == "ascent") {
        ascent = io::ascent_config_from_json(value);
      } else {
        throw Error(ErrorKind::ConfigError,
                    "unknown experiment config key \"" + key + "\"");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigError,
                  "bad value for \"" + key + "\": " + e.what());
    }
  }
  if (opts.seed) seed = *opts.seed;
  if (k < 0) throw Error(ErrorKind::ConfigError, "k must be >= 0");
  for (int n : ns) {
    if (n < 3 || n > kMaxOracleCities) {
      throw Error(ErrorKind::ConfigError,
                  "n must lie in 3.." + std::to_string(kMaxOracleCities));
    }
  }

  struct Job {
    int n;
    int index;
  };
  std::vector<Job> jobs;
  for (int n : ns) {
    for (int i = 0; i < k; ++i) jobs.push_back({n, i});
  }
  std::vector<GapRecord> rows(jobs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    try {
      const auto s = derive_seed(seed, static_cast<std::uint64_t>(jobs[j].n),
                                 static_cast<std::uint64_t>(jobs[j].index));
      const auto inst = random_euclidean_instance(jobs[j].n, s);
      rows[j] = run_dual(inst.d, ascent,
                         "n" + std::to_string(jobs[j].n) + "_i" +
                             std::to_string(jobs[j].index),
                         s)
                    .record;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::string csv =
      "instance_id,n,seed,oracle_optimum,dual_bound,gap,iterations,"
      "termination,verdict\n";
  for (const auto& g : rows) csv += gap_csv_row(g);
  if (!rows.empty()) {
    double lo = rows.front().gap, hi = lo, sum = 0.0;
    for (const auto& g : rows) {
      lo = std::min(lo, g.gap);
      hi = std::max(hi, g.gap);
      sum += g.gap;
    }
    const double mean = sum / static_cast<double>(rows.size());
    for (const auto& [label, v] :
         {std::pair{"summary_mean", mean}, std::pair{"summary_min", lo},
          std::pair{"summary_max", hi}}) {
      csv += std::string(label) + ",,,,," + io::format_double(v) + ",,,\n";
    }
  }
  io::write_text(opts.out / "experiment.csv", csv);

  json echo = echo_options("experiment", opts);
  echo["k"] = k;
  echo["ns"] = ns;
  echo["seed"] = seed;
  echo["ascent"] = io::ascent_config_to_json(ascent);
  io::write_json(opts.out / "experiment_config.json", echo);

  log << "experiment: " << rows.size() << " instances\n";
  return kExitOk;
}

int run_command(const std::string& name, const CommandOptions& opts,
                std::ostream& log, std::ostream& err) {
  try {
    if (name == "formulate") return cmd_formulate(opts, log);
    if (name == "reduce") return cmd_reduce(opts, log);
    if (name == "dual") return cmd_dual(opts, log);
    if (name == "inverse") return cmd_inverse(opts, log);
    if (name == "experiment") return cmd_experiment(opts, log);
    err << "unknown command: " << name << "\n";
    return kExitInputError;
  } catch (const json::parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace tspdual
