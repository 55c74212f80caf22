#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "vmvcli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Volterra McKean-Vlasov toolkit: resolvents, particle simulation, convergence studies"};
  app.require_subcommand(1);
  vmvcli::Invocation inv;
  std::string config, out_dir;
  std::uint64_t seed = 0;
  const std::map<std::string, std::string> about = {
      {"simulate", "Euler particle trajectories -> trajectories.csv"},
      {"converge-time", "strong convergence in the step size -> report.csv"},
      {"converge-chaos", "propagation of chaos in the particle count -> report.csv"},
      {"chaos-rate", "print the theoretical chaos-rate exponents for (p, d, q)"},
      {"resolvent", "resolvent kernel table -> resolvent.csv, resolvent_report.txt"},
      {"kernel-probe", "Hoelder or integrability probe of a kernel -> probe.csv"},
      {"wasserstein", "print W2 between two CSV point clouds"},
  };
  for (const auto& name : vmvcli::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("-c,--config", config, "config file");
    sub->add_option("-o,--out", out_dir, "output directory (default $VMV_OUT_DIR or .)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", inv.threads, "worker threads (0 = all cores)");
    sub->add_option("--set", inv.sets, "override a config value: section.key=value");
    if (name == "wasserstein") sub->add_option("points", inv.positional, "two CSV point files");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }
  const auto* sub = app.get_subcommands().front();
  inv.command = sub->get_name();
  if (sub->count("--config")) inv.config = config;
  if (sub->count("--out")) inv.out_dir = out_dir;
  if (sub->count("--seed")) inv.seed = seed;
  return vmvcli::run(inv, std::cout, std::cerr);
}
