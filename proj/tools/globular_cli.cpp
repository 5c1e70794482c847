#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "globular/driver.hpp"

// Command line front end.  All real work happens in run(); this file only
// maps flags onto a RunConfig.

int main(int argc, char** argv) {
  globular::RunConfig cfg;

  CLI::App app{"Path object towers over finite groupoids"};
  app.require_subcommand(1);

  auto add_backend = [&](CLI::App* cmd) {
    cmd->add_option("--backend", cfg.backend,
                    "object backend: chart or discrete")
        ->default_val("chart");
    cmd->add_option("--size", cfg.size,
                    "point count for the discrete backend");
    cmd->add_flag("--pretty", cfg.pretty, "indent the report");
  };

  CLI::App* theta0 = app.add_subcommand(
      "theta0", "enumerate shape morphisms between pasting diagrams");
  theta0->add_option("dom", cfg.table_a, "domain table, e.g. '(1,0,1)'")
      ->required();
  theta0->add_option("cod", cfg.table_b, "codomain table")->required();
  theta0->add_flag("--pretty", cfg.pretty, "indent the report");

  CLI::App* tower = app.add_subcommand(
      "tower", "build the path object tower and report its certificates");
  tower->add_option("fixture", cfg.input_path, "fixture file (chart backend)");
  tower->add_option("--dim", cfg.dim, "truncation level")->default_val(2);
  add_backend(tower);

  CLI::App* op = app.add_subcommand(
      "op", "synthesize an operation witness and its prerequisites");
  op->add_option("fixture", cfg.input_path, "fixture file (chart backend)");
  op->add_option("--name", cfg.op_name,
                 "operation: unit, m, w, lunit, runit, a, vcomp")
      ->required();
  op->add_option("--dim", cfg.dim, "truncation level")->default_val(2);
  add_backend(op);

  CLI::App* certify = app.add_subcommand(
      "certify", "lift every parallel pair generated over small tables");
  certify->add_option("fixture", cfg.input_path,
                      "fixture file (chart backend)");
  certify->add_option("--dim", cfg.dim, "truncation level")->default_val(2);
  certify->add_option("--max-dim", cfg.max_dim, "table dimension bound")
      ->default_val(1);
  certify->add_option("--max-len", cfg.max_len, "table length bound")
      ->default_val(3);
  certify->add_option("--budget", cfg.budget, "candidate pool bound")
      ->default_val(4096);
  add_backend(certify);

  CLI::App* eval = app.add_subcommand(
      "eval", "apply a shape morphism to the tower's pasting spaces");
  eval->add_option("fixture", cfg.input_path, "fixture file (chart backend)");
  eval->add_option("--theta", cfg.theta_path, "shape morphism file")
      ->required();
  eval->add_option("--dim", cfg.dim, "truncation level")->default_val(2);
  add_backend(eval);

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  return globular::run(cfg, std::cout);
}
