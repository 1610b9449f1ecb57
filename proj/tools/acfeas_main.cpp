// Command line front end: analysis and certification of the five-bus
// benchmark system plus the exactly-one-true SAT to THROUGHPUT compiler
// with witness encoding, decoding, and checking.
//
// Exit codes: 0 success / verdict true, 1 verdict false or a failed
// certificate or UNSAT, 2 usage and format errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "acfeas/bgadget.hpp"
#include "acfeas/certify.hpp"
#include "acfeas/cnf.hpp"
#include "acfeas/json_io.hpp"
#include "acfeas/network.hpp"
#include "acfeas/reduction.hpp"

namespace {

using acfeas::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = acfeas::canonical_dump(j);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

struct Options {
  std::string input;
  std::string point;
  std::string assignment;
  std::string out;
  int delta_grid = 10001;
  double grid_step = 1e-5;
  double epsilon = 1e-6;
  double slack = -1.0;  // negative: use the per-instance default
};

int run(int argc, char** argv) {
  CLI::App app{"Lossless power-flow feasibility toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto* analyze = app.add_subcommand(
      "analyze-b", "Sweep the benchmark-system manifold and report modes, "
                   "throughput ranges and bound checks");
  analyze->add_option("--delta-grid", opt.delta_grid, "sweep resolution")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000000));
  analyze->add_option("--out,-o", opt.out, "output path (default stdout)");

  auto* verify = app.add_subcommand(
      "verify-constants",
      "Certify the named inequalities; nonzero exit if any fails");
  verify->add_option("--grid-step", opt.grid_step, "certification grid step")
      ->capture_default_str()
      ->check(CLI::Range(1e-12, 1e-4));
  verify->add_option("--out,-o", opt.out, "output path (default stdout)");

  auto* compile = app.add_subcommand(
      "compile", "Compile a DIMACS-style exactly-one-true instance");
  compile->add_option("input", opt.input, "input .cnf")->required();
  compile->add_option("--out,-o", opt.out, "instance JSON path");

  auto* encode = app.add_subcommand(
      "encode-witness", "Encode an assignment into an operating point");
  encode->add_option("instance", opt.input, "instance JSON")->required();
  encode->add_option("assignment", opt.assignment,
                     "assignment file, lines '<var> 0|1'")
      ->required();
  encode->add_option("--delta-grid", opt.delta_grid, "sweep resolution")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000000));
  encode->add_option("--out,-o", opt.out, "operating point JSON path");

  auto* decode = app.add_subcommand(
      "decode-witness", "Classify copy modes and extract the assignment; "
                        "exit 0 iff consistent and exactly-one-true holds");
  decode->add_option("instance", opt.input, "instance JSON")->required();
  decode->add_option("point", opt.point, "operating point JSON")->required();
  decode->add_option("--out,-o", opt.out, "report path (default stdout)");

  auto* check = app.add_subcommand(
      "check", "Feasibility and demand check of a witness; exit 0 iff "
               "feasible and demand reaches threshold - slack");
  check->add_option("instance", opt.input, "instance JSON")->required();
  check->add_option("point", opt.point, "operating point JSON")->required();
  check->add_option("--epsilon", opt.epsilon, "residual tolerance")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  check->add_option("--slack", opt.slack,
                    "demand slack (default 2e-2 * (vars + clauses))");
  check->add_option("--out,-o", opt.out, "report path (default stdout)");

  auto* oracle = app.add_subcommand(
      "oracle", "Brute-force the instance; prints an assignment or UNSAT");
  oracle->add_option("input", opt.input, "input .cnf")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (analyze->parsed()) {
    emit(acfeas::analyze_b_report(opt.delta_grid), opt.out);
    return 0;
  }

  if (verify->parsed()) {
    const auto certs = acfeas::gadget::verify_bounds(opt.grid_step);
    const json report = acfeas::certificates_report(certs);
    emit(report, opt.out);
    return report.at("all_hold").get<bool>() ? 0 : 1;
  }

  if (compile->parsed()) {
    const auto cnf = acfeas::reduction::parse_cnf(slurp(opt.input));
    emit(acfeas::to_json(acfeas::reduction::compile(cnf)), opt.out);
    return 0;
  }

  if (encode->parsed()) {
    const auto inst = acfeas::instance_from_json(load_json(opt.input));
    const auto structure = acfeas::reduction::derive_structure(inst);
    const auto a = acfeas::reduction::parse_assignment_text(
        slurp(opt.assignment), structure.num_vars);
    const auto pt =
        acfeas::reduction::encode_witness(inst, a, {opt.delta_grid});
    emit(acfeas::to_json(pt), opt.out);
    return 0;
  }

  if (decode->parsed()) {
    const auto inst = acfeas::instance_from_json(load_json(opt.input));
    const auto pt = acfeas::point_from_json(load_json(opt.point));
    const auto rep = acfeas::reduction::decode_witness(inst, pt);
    emit(acfeas::to_json(rep), opt.out);
    return rep.consistent && rep.one_in_three_ok ? 0 : 1;
  }

  if (check->parsed()) {
    const auto inst = acfeas::instance_from_json(load_json(opt.input));
    const auto pt = acfeas::point_from_json(load_json(opt.point));
    const double slack = opt.slack >= 0.0
                             ? opt.slack
                             : acfeas::reduction::default_check_slack(inst);
    const auto result =
        acfeas::reduction::check_witness(inst, pt, opt.epsilon, slack);
    emit(acfeas::to_json(result), opt.out);
    return result.ok ? 0 : 1;
  }

  if (oracle->parsed()) {
    const auto cnf = acfeas::reduction::parse_cnf(slurp(opt.input));
    const auto a = acfeas::reduction::brute_force_sat(cnf);
    if (!a) {
      std::cout << "UNSAT\n";
      return 1;
    }
    std::cout << acfeas::reduction::format_assignment_text(*a);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const acfeas::reduction::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const acfeas::json::parse_error& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
