// Command-line front end: prbox-sim <sweep|chsh|mc|plan-frft|optimize> --config <path>

#include <iostream>

#include <CLI11.hpp>

#include "prbox/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Post-selected Gaussian photon-pair simulator with tunable PR-box correlations"};
  app.require_subcommand(1);

  prbox::cli::Invocation inv;
  std::string out, format;
  std::uint64_t seed = 0;

  for (const char* name : {"sweep", "chsh", "mc", "plan-frft", "optimize"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", inv.config_path, "key = value run description")
        ->required();
    sub->add_option("--out", out, "output file (sweep: output directory)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Monte Carlo master seed");
    sub->add_flag("--swap-widths", inv.swap_widths,
                  "exchange delta and gamma before building the state");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  inv.command = *prbox::cli::parse_command(sub->get_name());
  if (sub->count("--out")) inv.out = out;
  if (sub->count("--format"))
    inv.format = format == "json" ? prbox::cli::OutputFormat::json : prbox::cli::OutputFormat::csv;
  if (sub->count("--seed")) inv.seed = seed;
  return prbox::cli::run(inv, std::cout, std::cerr);
}
