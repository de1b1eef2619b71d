#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "freefock/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"freefock: full Fock space approximation and free limit experiments"};
  app.require_subcommand(1);

  freefock::RunConfig cfg;

  auto add_common = [&cfg](CLI::App* cmd) {
    cmd->add_option("--format", cfg.format, "Output format: csv or json")->capture_default_str();
    cmd->add_option("--output", cfg.output_path, "Write the table to this file instead of stdout only");
    cmd->add_flag("--assert", cfg.assert_mode, "Check the table against its reference values; exit 2 on failure");
    cmd->add_option("--tol", cfg.tol, "Tolerance for --assert")->capture_default_str();
  };
  auto add_n_list = [&cfg](CLI::App* cmd, const char* what) {
    cmd->add_option("--n-list", cfg.n_list, what)->delimiter(',');
  };

  CLI::App* cp = app.add_subcommand("converge-projection", "Projection error ||P_n f - f|| per partition rate n");
  add_n_list(cp, "Partition rates (points at i/n), comma separated");
  cp->add_option("--f", cfg.vector_name, "Built-in test vector name")->capture_default_str();
  cp->add_option("--mesh", cfg.mesh, "Grid cells per unit time (default: max of n-list, env FREEFOCK_MESH)");
  cp->add_option("--depth", cfg.depth, "Tensor degree cap (env FREEFOCK_DEPTH)");
  cp->add_option("--multiplicity", cfg.multiplicity, "Noise dimension N")->capture_default_str();
  add_common(cp);

  CLI::App* co = app.add_subcommand("converge-operator", "Discrete vs true noise operator error and proof bound");
  add_n_list(co, "Partition rates (points at i/n), comma separated");
  co->add_option("--f", cfg.vector_name, "Built-in test vector name")->capture_default_str();
  co->add_option("--eps", cfg.eps, "Operator kind: + (creation), - (annihilation), o (gauge), x (time)")
      ->capture_default_str();
  co->add_option("--t", cfg.t, "Time argument; must lie on the grid")->capture_default_str();
  co->add_option("--mesh", cfg.mesh, "Grid cells per unit time (default: max of n-list, env FREEFOCK_MESH)");
  co->add_option("--depth", cfg.depth, "Tensor degree cap (env FREEFOCK_DEPTH)");
  co->add_option("--multiplicity", cfg.multiplicity, "Noise dimension N")->capture_default_str();
  add_common(co);

  CLI::App* clt = app.add_subcommand("clt", "Free Bernoulli walk moments against the combinatorial oracle");
  add_n_list(clt, "Walk rates, comma separated (direct evaluation needs n <= 8)");
  clt->add_option("--k-max", cfg.k_max, "Highest moment order")->capture_default_str();
  clt->add_option("--t", cfg.t, "Time")->capture_default_str();
  clt->add_option("--depth", cfg.depth, "Degree cap; must be >= k-max (env FREEFOCK_DEPTH)");
  add_common(clt);

  CLI::App* po = app.add_subcommand("poisson", "Free Poisson walk moments against the combinatorial oracle");
  add_n_list(po, "Walk rates, comma separated (direct evaluation needs n <= 8)");
  po->add_option("--k-max", cfg.k_max, "Highest moment order")->capture_default_str();
  po->add_option("--t", cfg.t, "Time")->capture_default_str();
  po->add_option("--depth", cfg.depth, "Degree cap; must be >= k-max (env FREEFOCK_DEPTH)");
  add_common(po);

  CLI::App* fr = app.add_subcommand("freeness", "Vacuum moments of random alternating centered products");
  fr->add_option("--trials", cfg.trials, "Number of random products")->capture_default_str();
  fr->add_option("--sites", cfg.sites, "Number of sites to draw from")->capture_default_str();
  fr->add_option("--max-len", cfg.max_len, "Longest product")->capture_default_str();
  fr->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  add_common(fr);

  CLI::App* md = app.add_subcommand("multiplicity-demo",
                                    "Commuting vs non-commuting pair at noise dimension two");
  add_common(md);

  CLI::App* orc = app.add_subcommand("oracle", "Cumulant-route walk moments against the limit laws");
  add_n_list(orc, "Walk rates, comma separated (any size)");
  orc->add_option("--walk", cfg.walk, "brownian or poisson")->capture_default_str();
  orc->add_option("--k-max", cfg.k_max, "Highest moment order")->capture_default_str();
  orc->add_option("--t", cfg.t, "Time")->capture_default_str();
  add_common(orc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  const freefock::RunResult res = freefock::run(cfg);
  if (!res.log.empty()) std::cerr << res.log;
  if (res.exit_code != 1 && cfg.output_path.empty()) std::cout << res.table_text;
  return res.exit_code;
}
