#include "exactfit/convexfit.hpp"
#include "exactfit/corpus.hpp"
#include "exactfit/json_io.hpp"
#include "exactfit/nets.hpp"
#include "exactfit/oracle.hpp"
#include "exactfit/reductions.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

namespace {

using namespace exactfit;

constexpr int kExitFit = 0;       // fit-found / verified
constexpr int kExitNoFit = 1;     // no-fit / refuted
constexpr int kExitError = 2;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string format_point(const std::vector<Rat>& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += rat_to_string(x[i]);
  }
  return out + ")";
}

void print_instance_digest(const nets::Instance& inst) {
  std::cout << "instance: n=" << inst.points.size() << " d=" << inst.dim << " k=" << inst.k
            << " gamma=" << rat_to_string(inst.gamma)
            << " activation=" << io::activation_name(inst.activation) << "\n";
}

// Residual table for a refuted verification; lists every mismatch exactly.
template <typename Net, typename Eval>
int report_residuals(const Net& net, const nets::Instance& inst, Eval eval) {
  long long mismatches = 0;
  for (const nets::LabeledPoint& p : inst.points)
    if (eval(net, p.x) != p.y) ++mismatches;
  if (mismatches == 0) {
    std::cout << "verdict: verified\n";
    return kExitFit;
  }
  std::cout << "verdict: refuted\n";
  std::cout << "residuals (" << mismatches << " of " << inst.points.size()
            << " points mismatch):\n";
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    const nets::LabeledPoint& p = inst.points[i];
    Rat value = eval(net, p.x);
    if (value == p.y) continue;
    std::cout << "  point " << i << ": x=" << format_point(p.x)
              << " y=" << rat_to_string(p.y) << " phi=" << rat_to_string(value)
              << " residual=" << rat_to_string(Rat(value - p.y)) << "\n";
  }
  return kExitNoFit;
}

int run_verify(const std::string& instance_path, const std::string& network_path) {
  Stopwatch timer;
  nets::Instance inst = io::instance_from_json(io::load_json_file(instance_path));
  io::AnyNetwork net = io::network_from_json(io::load_json_file(network_path));
  std::cout << "command: verify " << instance_path << " " << network_path << "\n";
  print_instance_digest(inst);
  int code = std::visit(
      [&](const auto& n) {
        using NetT = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<NetT, nets::ReluNetwork>) {
          if (inst.activation != nets::Activation::Relu)
            throw std::invalid_argument("rectifier network given for a threshold instance");
          if (n.dim != inst.dim) throw std::invalid_argument("network/instance dimension mismatch");
          return report_residuals(n, inst, [](const nets::ReluNetwork& nn, const std::vector<Rat>& x) {
            return nets::eval_relu(nn, x);
          });
        } else {
          if (inst.activation != nets::Activation::LinearThreshold)
            throw std::invalid_argument("threshold network given for a rectifier instance");
          if (n.dim != inst.dim) throw std::invalid_argument("network/instance dimension mismatch");
          return report_residuals(n, inst, [](const nets::LTNetwork& nn, const std::vector<Rat>& x) {
            return nets::eval_lt(nn, x);
          });
        }
      },
      net);
  std::cout << "wall-time: " << timer.ms() << "ms\n";
  return code;
}

int run_solve(const std::string& instance_path, const std::string& method, bool convex_only,
              const std::string& out_path, const std::string& log_path) {
  Stopwatch timer;
  nets::Instance inst = io::instance_from_json(io::load_json_file(instance_path));
  std::cout << "command: solve " << instance_path << " --method " << method << "\n";
  print_instance_digest(inst);

  std::optional<io::AnyNetwork> found;
  if (method == "convex") {
    if (convex_only) throw std::invalid_argument("--convex-only applies to --method brute");
    convex::SearchStats stats;
    convex::SearchLog log;
    auto result = convex::exact_fit_convex(inst, &stats, log_path.empty() ? nullptr : &log);
    std::cout << "search: nodes=" << stats.nodes << " forced=" << stats.forced_moves
              << " rejected=" << stats.rejections << " max-depth=" << stats.max_depth << "\n";
    if (!log_path.empty()) {
      io::save_json_file(log_path, io::to_json(log));
      std::cout << "log: " << log_path << "\n";
    }
    if (result) found = std::move(result->net);
  } else if (method == "brute") {
    if (inst.activation == nets::Activation::Relu) {
      auto result = oracle::brute_force_fit_relu(inst, convex_only);
      if (result) found = std::move(*result);
    } else {
      if (convex_only)
        throw std::invalid_argument("--convex-only applies to rectifier instances");
      auto result = oracle::brute_force_fit_lt(inst);
      if (result) found = std::move(*result);
    }
  } else {
    throw std::invalid_argument("unknown method: " + method + " (expected convex or brute)");
  }

  if (!found) {
    std::cout << "verdict: no-fit\n";
    std::cout << "wall-time: " << timer.ms() << "ms\n";
    return kExitNoFit;
  }
  std::cout << "verdict: fit-found\n";
  if (!out_path.empty()) {
    std::visit([&](const auto& n) { io::save_json_file(out_path, io::to_json(n)); }, *found);
    std::cout << "witness: " << out_path << "\n";
  }
  std::cout << "wall-time: " << timer.ms() << "ms\n";
  return kExitFit;
}

int run_gen_poits(const std::string& formula_path, const std::string& activation,
                  const std::string& out_path) {
  reduce::PoitsFormula formula = io::formula_from_json(io::load_json_file(formula_path));
  nets::Instance inst = activation == "lt" ? reduce::poits_reduction_lt(formula)
                                           : reduce::poits_reduction(formula);
  io::save_json_file(out_path, io::to_json(inst));
  std::cout << "command: gen-poits " << formula_path << " --activation " << activation << "\n";
  std::cout << "formula: m=" << formula.clauses.size() << " n=" << formula.num_vars << "\n";
  print_instance_digest(inst);
  std::cout << "out: " << out_path << "\n";
  return kExitFit;
}

int run_gen_hsep(const std::string& points_path, const std::string& out_path) {
  reduce::HsepInput input = io::hsep_from_json(io::load_json_file(points_path));
  nets::Instance inst = reduce::hsep_reduction(input);
  io::save_json_file(out_path, io::to_json(inst));
  std::cout << "command: gen-hsep " << points_path << "\n";
  std::cout << "sets: |Q|=" << input.q_points.size() << " |P|=" << input.p_points.size()
            << " m=" << input.total_points() << " epsilon=" << rat_to_string(input.epsilon())
            << "\n";
  print_instance_digest(inst);
  std::cout << "out: " << out_path << "\n";
  return kExitFit;
}

int run_witness(const std::string& input_path, const std::string& assignment_path,
                const std::string& activation, const std::string& out_path) {
  nlohmann::json j = io::load_json_file(input_path);
  std::cout << "command: witness " << input_path << "\n";
  if (j.contains("clauses")) {
    if (assignment_path.empty())
      throw std::invalid_argument("a formula witness needs an assignment file");
    reduce::PoitsFormula formula = io::formula_from_json(j);
    reduce::TruthAssignment assignment =
        io::assignment_from_json(io::load_json_file(assignment_path));
    if (activation == "lt") {
      nets::LTNetwork net = reduce::poits_solution_lt(formula, assignment);
      io::save_json_file(out_path, io::to_json(net));
      std::cout << "network: lt k=" << net.units.size() << "\n";
    } else {
      nets::ReluNetwork net = reduce::poits_solution_network(formula, assignment);
      io::save_json_file(out_path, io::to_json(net));
      std::cout << "network: relu k=" << net.units.size() << "\n";
    }
  } else if (j.contains("Q")) {
    reduce::HsepInput input = io::hsep_from_json(j);
    nets::ReluNetwork net = reduce::hsep_solution_network(input);
    io::save_json_file(out_path, io::to_json(net));
    std::cout << "network: relu k=" << net.units.size() << "\n";
  } else {
    throw std::invalid_argument("input is neither a formula nor a separation file");
  }
  std::cout << "out: " << out_path << "\n";
  return kExitFit;
}

int run_gen_random(std::uint64_t seed, int d, int n, int k, int range,
                   const std::string& activation, const std::string& out_path) {
  corpus::RandomInstanceParams params;
  params.d = d;
  params.n = n;
  params.k = k;
  params.value_min = -range;
  params.value_max = range;
  params.activation = io::activation_from_name(activation);
  nets::Instance inst = corpus::make_random_instance(seed, params);
  io::save_json_file(out_path, io::to_json(inst));
  std::cout << "command: gen-random --seed " << seed << "\n";
  print_instance_digest(inst);
  std::cout << "out: " << out_path << "\n";
  return kExitFit;
}

int run_demo_fig4(const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  const auto path = [&outdir](const char* name) {
    return (std::filesystem::path(outdir) / name).string();
  };

  reduce::PoitsFormula formula{5, {{5, 4, 3}, {4, 3, 2}, {5, 2, 1}}};
  reduce::TruthAssignment assignment{{1, 3}};
  io::save_json_file(path("fig4_formula.json"), io::to_json(formula));

  nets::Instance inst = reduce::poits_reduction(formula);
  io::save_json_file(path("fig4_instance.json"), io::to_json(inst));

  nets::ReluNetwork net = reduce::poits_solution_network(formula, assignment);
  io::save_json_file(path("fig4_network.json"), io::to_json(net));

  std::cout << "command: demo fig4\n";
  print_instance_digest(inst);
  std::cout << "network: relu k=" << net.units.size() << "\n";
  std::cout << "files: " << path("fig4_formula.json") << ", " << path("fig4_instance.json")
            << ", " << path("fig4_network.json") << "\n";
  if (!nets::is_exact_fit(net, inst)) {
    std::cout << "verdict: refuted\n";
    return kExitNoFit;
  }
  std::cout << "verdict: verified\n";
  return kExitFit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic training toolkit for two-layer networks"};
  app.require_subcommand(1);

  std::string formula_path, points_path, instance_path, network_path, assignment_path;
  std::string out_path, log_path, activation = "relu", method = "convex";
  std::string demo_name, outdir = ".";
  bool convex_only = false;
  std::uint64_t seed = 0;
  int rand_d = 1, rand_n = 4, rand_k = 1, rand_range = 2;

  auto* gen_poits = app.add_subcommand("gen-poits", "Formula file -> training instance");
  gen_poits->add_option("formula", formula_path, "formula JSON")->required();
  gen_poits->add_option("--activation", activation, "relu|lt")->check(CLI::IsMember({"relu", "lt"}));
  gen_poits->add_option("--out", out_path, "instance JSON to write")->required();

  auto* gen_hsep = app.add_subcommand("gen-hsep", "Separation points file -> training instance");
  gen_hsep->add_option("points", points_path, "points JSON with Q and P")->required();
  gen_hsep->add_option("--out", out_path, "instance JSON to write")->required();

  auto* witness = app.add_subcommand("witness", "Build the witness network for a yes-instance");
  witness->add_option("input", instance_path, "formula or separation JSON")->required();
  witness->add_option("assignment", assignment_path, "assignment JSON (formulas only)");
  witness->add_option("--activation", activation, "relu|lt")->check(CLI::IsMember({"relu", "lt"}));
  witness->add_option("--out", out_path, "network JSON to write")->required();

  auto* solve = app.add_subcommand("solve", "Decide exact fit for an instance file");
  solve->add_option("instance", instance_path, "instance JSON")->required();
  solve->add_option("--method", method, "convex|brute")->check(CLI::IsMember({"convex", "brute"}));
  solve->add_flag("--convex-only", convex_only, "restrict the brute method to all-positive units");
  solve->add_option("--out", out_path, "network JSON to write on fit-found");
  solve->add_option("--log", log_path, "search log JSON to write (convex method)");

  auto* verify = app.add_subcommand("verify", "Check a network against an instance exactly");
  verify->add_option("instance", instance_path, "instance JSON")->required();
  verify->add_option("network", network_path, "network JSON")->required();

  auto* gen_random = app.add_subcommand("gen-random", "Seeded random desk-scale instance");
  gen_random->add_option("--seed", seed, "RNG seed")->required();
  gen_random->add_option("--d", rand_d, "input dimension");
  gen_random->add_option("--n", rand_n, "point count");
  gen_random->add_option("--k", rand_k, "unit budget");
  gen_random->add_option("--range", rand_range, "coordinates and labels drawn from [-range, range]");
  gen_random->add_option("--activation", activation, "relu|lt")->check(CLI::IsMember({"relu", "lt"}));
  gen_random->add_option("--out", out_path, "instance JSON to write")->required();

  auto* demo = app.add_subcommand("demo", "One-command end-to-end reproduction");
  demo->add_option("name", demo_name, "demo name (fig4)")->required();
  demo->add_option("--outdir", outdir, "directory for generated files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (gen_poits->parsed()) return run_gen_poits(formula_path, activation, out_path);
    if (gen_hsep->parsed()) return run_gen_hsep(points_path, out_path);
    if (witness->parsed())
      return run_witness(instance_path, assignment_path, activation, out_path);
    if (solve->parsed())
      return run_solve(instance_path, method, convex_only, out_path, log_path);
    if (verify->parsed()) return run_verify(instance_path, network_path);
    if (gen_random->parsed())
      return run_gen_random(seed, rand_d, rand_n, rand_k, rand_range, activation, out_path);
    if (demo->parsed()) {
      if (demo_name != "fig4") throw std::invalid_argument("unknown demo: " + demo_name);
      return run_demo_fig4(outdir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
