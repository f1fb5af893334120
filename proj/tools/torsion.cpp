// torsion compute <file> --kind complex|morse|double|geometry|scenario
// torsion verify <suite> [--seed N] [--tolerance T] [--grid N] [--precision P] [--report json|text]
//
// Exit codes: 0 all checks pass, 1 a check fails, 2 input error,
// 3 data-invariant or numerical error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "torsion/errors.hpp"
#include "torsion/verify.hpp"

using namespace torsion;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Schema:
    case ErrorKind::Configuration:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion forms, Morse complexes and gluing checks"};
  app.require_subcommand(1);

  std::string format = "text";
  std::uint64_t seed = 7;
  std::optional<double> tolerance, precision;
  int grid = 64;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--report", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--tolerance", tolerance, "Replace every tolerance");
    sub->add_option("--precision", precision, "Remainder bound of the Euler-Maclaurin zeta route");
  };

  std::string file, kind = "complex";
  CLI::App* compute = app.add_subcommand("compute", "Torsions of an input document");
  compute->add_option("file", file, "JSON input")->required();
  compute->add_option("--kind", kind, "Input kind")
      ->check(CLI::IsMember({"complex", "morse", "double", "geometry", "scenario"}));
  common(compute);

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "finite, spectral, morse, analytic, gluing or all")
      ->required()
      ->check(CLI::IsMember({"finite", "spectral", "morse", "analytic", "gluing", "all"}));
  verify->add_option("--seed", seed, "Seed of the random generator");
  verify->add_option("--grid", grid, "Finest circle grid (power of two >= 8)");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  verify::Options opt;
  opt.seed = seed;
  opt.tolerance = tolerance;
  opt.grid = grid;
  opt.precision = precision;
  try {
    report::Report r = compute->parsed()
                           ? verify::compute(verify::kind_from_string(kind), io::read_file(file), opt)
                           : verify::run(verify::suite_from_string(suite), opt);
    if (format == "json")
      std::cout << report::to_json(r).dump(2) << "\n";
    else
      std::cout << report::to_text(r);
    return r.passed() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
