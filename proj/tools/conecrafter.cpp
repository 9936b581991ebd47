#include "conecrafter/document.hpp"
#include "conecrafter/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

int main(int argc, char** argv) {
  using namespace conecrafter;
  CLI::App app{"conecrafter: invariant ample cones and fundamental domains of polarized complex tori"};

  std::string command;
  std::string input;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> max_steps;
  std::string class_text;

  app.add_option("command", command, "check | endo | cone | funddom | reduce | verify")
      ->required()
      ->check(CLI::IsMember({"check", "endo", "cone", "funddom", "reduce", "verify"}));
  app.add_option("input", input, "problem document (JSON)")->required();
  app.add_option("--out", out_path, "write the JSON report here");
  app.add_option("--seed", seed, "seed for every sampled procedure (default: document, else 42)");
  app.add_option("--samples", samples, "tiling samples");
  app.add_option("--max-steps", max_steps, "reduction step bound");
  app.add_option("--class", class_text, "class to reduce, e.g. \"[3, 1/2, 5]\"");

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  try {
    const ProblemDocument doc = load_document(input);
    RunOptions options;
    options.seed = seed;
    options.samples = samples;
    options.max_steps = max_steps;
    if (!class_text.empty()) options.reduce_class = parse_class_list(class_text);

    const CommandResult result = run_command(command, doc, options);
    std::cout << result.text;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "elapsed " << std::fixed << std::setprecision(2) << seconds << " s\n";
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return kExitValidation;
      }
      out << result.report.dump(2) << "\n";
    }
    return result.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
