// Command-line front end: cdlab <run|sweep|verify|hypotheses> --config <path> [options]

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdlab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-species cross-diffusion experiments on the periodic unit interval"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t factor = 1;

  for (const auto& [name, help] : {std::pair{"run", "single run with invariant checks"},
                                   std::pair{"sweep", "vanishing-viscosity eta ladder"},
                                   std::pair{"verify", "all checks at 1x and 2x resolution"},
                                   std::pair{"hypotheses", "report H1-H4 on the initial data"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "TOML run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "random seed for perturbed initial data");
    sub->add_option("--resolution-factor", factor, "multiply grid.n_cells")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  cdlab::CommandOptions opt;
  opt.out_dir = out_dir;
  if (sub->count("--seed") > 0) opt.seed = seed;
  opt.resolution_factor = factor;
  return cdlab::dispatch(sub->get_name(), config, opt, std::cout, std::cerr);
}
