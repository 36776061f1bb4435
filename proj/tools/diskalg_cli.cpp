// diskalg: condition checks, geometry probes and approximation studies for
// the algebra generated by z^2 and a second generator on a small disk.

#include <iostream>

#include "CLI11.hpp"
#include "diskalg/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Function algebras generated by z^2 and w^2 on small disks"};
  app.require_subcommand(1, 1);

  diskalg::RunOptions opts;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int max_degree = -1;

  const char* help[] = {
      "coefficient conditions and the certificate polynomial",
      "margin trace on the unit circle and strict positivity",
      "sampled sign checks of the polynomial condition",
      "combine two certificates when the first margin has zeros",
      "point separation by the two generators",
      "half-plane probes on the preimage disks and straightened sheets",
      "residuals of the straightened sheets across radii",
      "least-squares convergence study",
      "full pipeline"};
  std::size_t i = 0;
  for (const auto& name : diskalg::subcommands()) {
    auto* sub = app.add_subcommand(name, help[i++]);
    sub->add_option("--config", config, "experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "seed for randomized sampling offsets");
    sub->add_option("--max-degree", max_degree, "cap on the approximation degree")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto* sub = app.get_subcommands().front();
  opts.config = config;
  if (sub->count("--out")) opts.out = out;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--max-degree")) opts.max_degree = max_degree;
  return diskalg::run(sub->get_name(), opts, std::cout);
}
