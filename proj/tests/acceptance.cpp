// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Usage: tspdual_acceptance [--workdir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "tspdual/commands.hpp"
#include "tspdual/formulation.hpp"
#include "tspdual/io.hpp"

using namespace tspdual;
using tspdual::testing::all_tours;
using tspdual::testing::distinct_four_city;
using tspdual::testing::sample_s_plus;
using tspdual::testing::tours_fixing_first;
using tspdual::testing::unit_square;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure reasons; the first one ends up in the detail text.
struct Check {
  Outcome out;
  void require(bool ok, const std::string& why) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = why;
    }
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const fs::path& p) {
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int quiet(int (*cmd)(const CommandOptions&, std::ostream&), const CommandOptions& opts) {
  std::ostringstream log;
  return cmd(opts, log);
}

fs::path write_instance(const fs::path& dir, const std::string& name, const DistanceMatrix& d) {
  const fs::path p = dir / name;
  io::write_json(p, io::instance_to_json(d, std::nullopt));
  return p;
}

ReducedProblem reduced(const DistanceMatrix& d) { return reduce(build_formulation(d)); }

Outcome structural_reproduction(const fs::path& work) {
  Check c;
  const fs::path dir = fresh_dir(work / "c1");
  const auto d = distinct_four_city();
  CommandOptions opts;
  opts.instance = write_instance(dir, "distinct.json", d);
  opts.out = dir;
  const auto t0 = Clock::now();
  const int rc = quiet(cmd_reduce, opts);
  const double elapsed = seconds_since(t0);
  c.require(rc == kExitOk, "reduce exit code " + std::to_string(rc));
  if (!c.out.pass) return c.out;

  const json j = io::read_json_file(dir / "reduced.json");
  c.require(j.value("paper_match", false), "paper_match is false");

  // Independent reading of the file against the hand-written block form.
  auto dd = [&](int i, int k) { return d(i - 1, k - 1); };
  Eigen::MatrixXd D(3, 3);
  D << 0, dd(2, 3), dd(2, 4),
       dd(3, 2), 0, dd(3, 4),
       dd(4, 2), dd(4, 3), 0;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(9, 9);
  A.block(0, 3, 3, 3) = D;
  A.block(3, 0, 3, 3) = D;
  A.block(3, 6, 3, 3) = D;
  A.block(6, 3, 3, 3) = D;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(9);
  for (int i = 0; i < 3; ++i) {
    b(i) = -dd(1, i + 2);
    b(6 + i) = -dd(1, i + 2);
  }
  const Eigen::MatrixXd E = four_city_constraint_display();
  for (int i = 0; i < 9; ++i) {
    c.require(j["b_r"][i].get<double>() == b(i), "b_r entry " + std::to_string(i + 1));
    for (int k = 0; k < 9; ++k) {
      c.require(j["A_r"][i][k].get<double>() == A(i, k),
                "A_r entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")");
    }
  }
  c.require(j["E_r"].size() == 5, "E_r row count");
  for (int i = 0; i < 5 && c.out.pass; ++i) {
    for (int k = 0; k < 9; ++k) {
      c.require(j["E_r"][i][k].get<double>() == E(i, k),
                "E_r entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")");
    }
  }
  c.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  if (c.out.pass) c.out.detail = "exact match, " + std::to_string(elapsed) + " s";
  return c.out;
}

Outcome objective_equivalence() {
  Check c;
  const auto t0 = Clock::now();
  double worst = 0.0;
  int checked = 0;
  for (int n : {4, 5}) {
    const auto tours = all_tours(n);
    c.require(tours.size() == (n == 4 ? 24u : 120u), "tour count");
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto d = random_euclidean_instance(n, 1000 + 100 * n + seed).d;
      const QpFormulation f = build_formulation(d);
      for (const Tour& t : tours) {
        const double err = std::abs(objective(f, encode_tour(t)) - tour_length(d, t));
        worst = std::max(worst, err);
        ++checked;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  c.require(worst <= 1e-12, "max error " + io::format_double(worst));
  c.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
  if (c.out.pass) {
    c.out.detail = std::to_string(checked) + " tours, max error " + io::format_double(worst) +
                   ", " + std::to_string(elapsed) + " s";
  }
  return c.out;
}

Outcome reduction_consistency() {
  Check c;
  double worst = 0.0;
  int checked = 0;
  for (int n : {3, 4, 5}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto d = random_euclidean_instance(n, 2000 + 10 * n + seed).d;
      const QpFormulation f = build_formulation(d);
      const ReducedProblem r = reduce(f);
      c.require(r.c0 == 0.0, "c0 = " + io::format_double(r.c0));
      for (const Tour& t : tours_fixing_first(n)) {
        const double full = objective(f, encode_tour(t));
        const double red = reduced_objective(r, embed_tour(r.map, t)) + r.c0;
        worst = std::max(worst, std::abs(full - red));
        ++checked;
      }
    }
  }
  c.require(worst <= 1e-12, "max error " + io::format_double(worst));
  if (c.out.pass) {
    c.out.detail = std::to_string(checked) + " tours, max error " + io::format_double(worst);
  }
  return c.out;
}

// Writes formulate artifacts for the unit square under dir.
Outcome oracle_ground_truth(const fs::path& inputs, const fs::path& dir) {
  Check c;
  const auto d = unit_square();
  const OracleResult o = brute_force_optimum(d);
  c.require(o.best_length == 4.0, "optimum " + io::format_double(o.best_length));
  c.require(o.best_tour == Tour::from_labels({1, 2, 3, 4}), "optimal tour");
  c.require(o.all_lengths.size() == 3, "expected 3 canonical tours");
  Eigen::VectorXd ybar(9);
  ybar << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  c.require(embed_tour(IndexMap(4), o.best_tour) == ybar, "embedded Ybar");

  CommandOptions opts;
  opts.instance = inputs / "unit_square.json";
  opts.out = dir;
  c.require(quiet(cmd_formulate, opts) == kExitOk, "formulate failed");
  const json s = io::read_json_file(dir / "formulate_summary.json");
  c.require(s["oracle_length"].get<double>() == 4.0, "summary oracle_length");
  c.require(s["oracle_tour_objective"].get<double>() == 4.0, "summary oracle_tour_objective");
  c.require(s["oracle_tour"] == json({1, 2, 3, 4}), "summary oracle_tour");
  if (c.out.pass) c.out.detail = "optimum 4, tour (1,2,3,4), Ybar (1,0,0,0,1,0,0,0,1)";
  return c.out;
}

Outcome weak_duality(const fs::path& dir) {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::ostringstream csv;
  csv << "instance,optimum,max_dual_value,violations\n";
  int violations = 0;
  double worst_slack = -INFINITY;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto d = random_euclidean_instance(4, 3000 + k).d;
    const ReducedProblem r = reduced(d);
    const double opt = brute_force_optimum(d).best_length;
    double best = -INFINITY;
    int bad = 0;
    for (int s = 0; s < 1000; ++s) {
      const double v = dual_value(r, sample_s_plus(r, rng, 1.0 + static_cast<double>(s % 4))).value;
      best = std::max(best, v);
      if (v > opt + 1e-8) ++bad;
    }
    violations += bad;
    worst_slack = std::max(worst_slack, best - opt);
    csv << k << ',' << io::format_double(opt) << ',' << io::format_double(best) << ',' << bad
        << '\n';
  }
  io::write_text(dir / "weak_duality.csv", csv.str());
  const double elapsed = seconds_since(t0);
  c.require(violations == 0, std::to_string(violations) + " violations");
  c.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  if (c.out.pass) {
    c.out.detail = "10000 points, 0 violations, max(g - opt) " + io::format_double(worst_slack) +
                   ", " + std::to_string(elapsed) + " s";
  }
  return c.out;
}

Outcome gradient_check(const fs::path& dir) {
  Check c;
  std::mt19937_64 rng(6);
  const double h = 1e-6;
  double worst = 0.0;
  std::ostringstream csv;
  csv << "point,n,relative_error\n";
  for (int k = 0; k < 100; ++k) {
    const int n = k % 2 == 0 ? 4 : 5;
    const ReducedProblem r = reduced(random_euclidean_instance(n, 4000 + k).d);
    const DualPoint p = sample_s_plus(r, rng);
    const DualEvaluation ev = dual_value(r, p);
    Eigen::VectorXd analytic(ev.grad_lambda.size() + ev.grad_mu.size());
    analytic << ev.grad_lambda, ev.grad_mu;
    Eigen::VectorXd fd(analytic.size());
    const int m = r.multipliers();
    for (Eigen::Index i = 0; i < fd.size(); ++i) {
      DualPoint up = p, dn = p;
      double& u = i < m ? up.lambda(i) : up.mu(i - m);
      double& w = i < m ? dn.lambda(i) : dn.mu(i - m);
      u += h;
      w -= h;
      fd(i) = (dual_value(r, up).value - dual_value(r, dn).value) / (2.0 * h);
    }
    const double rel = (fd - analytic).norm() / analytic.norm();
    worst = std::max(worst, rel);
    csv << k << ',' << n << ',' << io::format_double(rel) << '\n';
  }
  io::write_text(dir / "gradient_check.csv", csv.str());
  c.require(worst < 1e-5, "max relative error " + io::format_double(worst));
  if (c.out.pass) c.out.detail = "100 points, max relative error " + io::format_double(worst);
  return c.out;
}

std::vector<double> trace_values(const fs::path& csv) {
  std::istringstream in(slurp(csv));
  std::vector<double> g;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    g.push_back(std::stod(line.substr(a + 1, b - a - 1)));
  }
  return g;
}

Outcome ascent_sanity(const fs::path& inputs, const fs::path& dir) {
  Check c;
  std::string detail;
  struct Case {
    std::string name;
    std::optional<fs::path> instance;
    std::optional<std::uint64_t> seed;
  };
  const std::vector<Case> cases = {
      {"unit_square", inputs / "unit_square.json", std::nullopt},
      {"random_seed17", std::nullopt, 17},
  };
  for (const Case& k : cases) {
    const fs::path out = dir / k.name;
    fs::create_directories(out);
    CommandOptions opts;
    opts.instance = k.instance;
    opts.seed = k.seed;
    opts.out = out;
    const int rc = quiet(cmd_dual, opts);
    c.require(rc == kExitOk || rc == kExitCounterexample, k.name + ": exit code " + std::to_string(rc));
    if (!c.out.pass) return c.out;
    const json rec = io::read_json_file(out / "gap_record.json");
    const std::string verdict = rec["verify"]["verdict"].get<std::string>();
    const bool confirms = verdict == "ConfirmsTheorem2";
    c.require((rc == kExitCounterexample) == confirms, k.name + ": exit code does not match verdict");
    const double opt = rec["gap_record"]["oracle_optimum"].get<double>();
    const double bound = rec["gap_record"]["dual_bound"].get<double>();
    c.require(bound <= opt + 1e-8, k.name + ": bound above optimum");
    c.require(rec["gap_record"]["gap"].get<double>() >= -1e-8, k.name + ": negative gap");
    const auto g = trace_values(out / "dual_trace.csv");
    c.require(!g.empty(), k.name + ": empty trace");
    for (std::size_t i = 1; i < g.size(); ++i) {
      c.require(g[i] >= g[i - 1], k.name + ": trajectory decreases at step " + std::to_string(i));
    }
    if (!detail.empty()) detail += "; ";
    detail += k.name + " bound " + io::format_double(bound) + " <= " + io::format_double(opt) +
              ", verdict " + verdict + (confirms ? " (COUNTEREXAMPLE, exit 10)" : "");
  }
  if (c.out.pass) c.out.detail = detail;
  return c.out;
}

Outcome negative_result(const fs::path& inputs, const fs::path& dir, double* elapsed_out) {
  Check c;
  InverseConfig cfg;  // n = 4, 1000 restarts, default local refinement
  cfg.seed = 2024;
  CommandOptions opts;
  opts.config = inputs / "inverse_config.json";
  io::write_json(*opts.config, io::inverse_config_to_json(cfg));
  opts.out = dir;
  const auto t0 = Clock::now();
  const int rc = quiet(cmd_inverse, opts);
  const double elapsed = seconds_since(t0);
  if (elapsed_out) *elapsed_out = elapsed;
  c.require(rc == kExitOk || rc == kExitCounterexample, "exit code " + std::to_string(rc));
  if (!c.out.pass) return c.out;
  const json rep = io::read_json_file(dir / "inverse_report.json");
  c.require(rep["config"]["restarts"].get<int>() >= 1000, "fewer than 1000 restarts");
  c.require(rep["restarts"].get<int>() >= 1000, "restarts not all run");
  const std::string verdict = rep["verdict"].get<std::string>();
  if (verdict == "NoFeasiblePointFound") {
    c.require(rc == kExitOk, "negative verdict with nonzero exit");
    c.require(rep["best_min_eig"].get<double>() <= 1e-8,
              "best_min_eig " + io::format_double(rep["best_min_eig"].get<double>()));
  } else {
    // A counterexample is acceptable only when the independent replay holds.
    c.require(rc == kExitCounterexample, "counterexample without exit code 10");
    c.require(rep["replay"].is_object() && rep["replay"].value("passed", false),
              "counterexample failed replay");
  }
  c.require(elapsed < 300.0, "runtime " + std::to_string(elapsed) + " s");
  if (c.out.pass) {
    c.out.detail = "verdict " + verdict + ", best_min_eig " +
                   io::format_double(rep["best_min_eig"].get<double>()) + ", " +
                   std::to_string(rep["restarts"].get<int>()) + " restarts, " +
                   std::to_string(elapsed) + " s";
  }
  return c.out;
}

// Everything criteria 4-8 write, keyed by path relative to root.
std::vector<fs::path> artifact_files(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void report(int id, const std::string& name, const Outcome& o, bool& all) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << name;
  if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
  std::cout << std::endl;
  all = all && o.pass;
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "tspdual_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--workdir" && i + 1 < argc) {
      work = argv[++i];
    } else {
      std::cerr << "usage: tspdual_acceptance [--workdir DIR]\n";
      return 2;
    }
  }
  fresh_dir(work);

  // Criteria 4-8 run twice from the same inputs into separate trees;
  // criterion 9 diffs the trees.
  const fs::path inputs = fresh_dir(work / "inputs");
  write_instance(inputs, "unit_square.json", unit_square());
  struct Run {
    Outcome c4, c5, c6, c7, c8;
  };
  double inverse_seconds = 0.0;
  auto produce = [&](const fs::path& root, double* inv_time) {
    Run r;
    r.c4 = guarded([&] { return oracle_ground_truth(inputs, fresh_dir(root / "c4")); });
    r.c5 = guarded([&] { return weak_duality(fresh_dir(root / "c5")); });
    r.c6 = guarded([&] { return gradient_check(fresh_dir(root / "c6")); });
    r.c7 = guarded([&] { return ascent_sanity(inputs, fresh_dir(root / "c7")); });
    r.c8 = guarded([&] { return negative_result(inputs, fresh_dir(root / "c8"), inv_time); });
    return r;
  };

  bool all = true;
  report(1, "four-city reduced data equal the closed-form displays",
         guarded([&] { return structural_reproduction(work); }), all);
  report(2, "1/2 X'AX equals tour length on every tour", guarded(objective_equivalence), all);
  report(3, "reduced objective + c0 equals full objective", guarded(reduction_consistency), all);

  const Run first = produce(work / "run_a", &inverse_seconds);
  report(4, "unit-square oracle ground truth", first.c4, all);
  report(5, "weak duality on sampled cone points", first.c5, all);
  report(6, "analytic dual gradient matches central differences", first.c6, all);
  report(7, "dual ascent sanity and verifier verdict", first.c7, all);
  report(8, "inverse search finds no dual-feasible instance", first.c8, all);

  const Outcome c9 = guarded([&] {
    Check c;
    double ignored = 0.0;
    const Run second = produce(work / "run_b", &ignored);
    c.require(second.c4.pass && second.c5.pass && second.c6.pass && second.c7.pass &&
                  second.c8.pass,
              "rerun outcome differs");
    const auto fa = artifact_files(work / "run_a");
    const auto fb = artifact_files(work / "run_b");
    c.require(fa == fb, "different file sets");
    std::size_t same = 0;
    for (const auto& f : fa) {
      const bool eq = slurp(work / "run_a" / f) == slurp(work / "run_b" / f);
      c.require(eq, f.string() + " differs");
      same += eq ? 1 : 0;
    }
    c.require(!fa.empty(), "no artifacts");
    if (c.out.pass) c.out.detail = std::to_string(same) + " files byte-identical";
    return c.out;
  });
  report(9, "fixed-seed reruns of criteria 4-8 are byte-identical", c9, all);

  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}
