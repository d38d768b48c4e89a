// usvauv: train | eval | plan | sweep | simulate-sea

#include <iostream>

#include "CLI11.hpp"
#include "usvauv/harness/commands.hpp"
#include "usvauv/kernels/kernels.hpp"

int main(int argc, char** argv) {
  using usvauv::harness::CommandLine;
  CLI::App app{"USV-AUV cooperative data-collection simulator"};
  app.require_subcommand(1);
  CommandLine cl;
  std::string isa;
  double oracle = 0.0;
  std::string seeds, out, profile, checkpoint;

  const std::pair<const char*, const char*> commands[] = {
      {"train", "train TD3 AUV policies, one run per seed"},
      {"eval", "roll out a checkpoint or scripted policy per USV mode"},
      {"plan", "one FIM waypoint for given AUV positions"},
      {"sweep", "eval over a list of values for one config key"},
      {"simulate-sea", "write wave and vortex fields at given times"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", cl.config_path, "config file (key = value, optional [sections])");
    sub->add_option("--seeds", seeds, "seed list, e.g. 1,2,3 or 1-5");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--profile", profile, "paper | desk | toy");
    sub->add_option("--usv-mode", cl.usv_modes, "fim | fixed:x,y (eval accepts several)");
    sub->add_option("--oracle-grid", oracle, "plan: brute-force grid step in m");
    sub->add_option("--checkpoint", checkpoint, "eval: checkpoint.bin to load");
    sub->add_option("--set", cl.sets, "extra key=value override");
    sub->add_option("--isa", isa, "kernel variant: scalar | avx2");
    sub->add_flag("--quiet", cl.quiet, "no per-episode progress lines");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  cl.command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  if (sub->count("--seeds")) cl.seeds = seeds;
  if (sub->count("--out")) cl.out = out;
  if (sub->count("--profile")) cl.profile = profile;
  if (sub->count("--oracle-grid")) cl.oracle_grid = oracle;
  if (sub->count("--checkpoint")) cl.checkpoint = checkpoint;
  if (!isa.empty()) {
    try {
      usvauv::kernels::set_isa(usvauv::kernels::parse_isa(isa));
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    }
  }
  return usvauv::harness::run_command(cl, std::cout, std::cerr);
}
