#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "rim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reparametrization-invariant mechanics toolkit"};
  app.set_version_flag("--version", rim::cli::version());
  app.require_subcommand(1, 1);

  const std::map<std::string, std::string> about = {
      {"signature", "classify a metric by signature and causality"},
      {"check", "run the Lagrangian identity sweeps"},
      {"simulate", "integrate a world line with RK4"},
      {"extremize", "extremize the discrete action between two events"},
      {"brane", "integrate a brane action over an embedding"},
      {"clifford", "solve for spin generators and check Dirac identities"}};

  rim::cli::Options opts;
  std::uint64_t seed = 0;
  for (const auto& name : rim::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", opts.config_path, "run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "directory for JSON/CSV artifacts");
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_flag("--json", opts.json, "print the JSON summary to stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rim::cli::kConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) opts.seed = seed;
  if (chosen->get_name() != "check" && chosen->get_name() != "clifford" && opts.config_path.empty()) {
    std::cerr << "config error: subcommand '" << chosen->get_name() << "' requires --config\n";
    return rim::cli::kConfigError;
  }
  return rim::cli::execute(chosen->get_name(), opts, std::cout, std::cerr);
}
