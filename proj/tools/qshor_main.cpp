#include <iostream>
#include <map>
#include <string>

#include "../vendor/CLI11.hpp"
#include "qshor/cli.hpp"

int main(int argc, char** argv) {
  using namespace qshor::cli;

  CLI::App app{"Order-finding circuits: generate, simulate, factor, verify"};
  app.require_subcommand(1);

  const std::map<std::string, Backend> backend_map{
      {"simulate", Backend::simulate},
      {"analytic", Backend::analytic},
      {"auto", Backend::auto_select},
  };

  GenArgs gen;
  auto* gen_cmd =
      app.add_subcommand("gen", "Emit the order-finding circuit as OpenQASM 2.0");
  gen_cmd->add_option("a", gen.a, "multiplier, 1 < a < N, coprime to N")->required();
  gen_cmd->add_option("N", gen.N, "modulus, N >= 3")->required();
  gen_cmd->add_option("-o,--out", gen.out_path,
                      "output path; '-' writes to stdout (default shor_<a>_<N>.qasm)");
  gen_cmd->add_flag("--compat", gen.compat,
                    "inline portable c3x/c4x definitions after the include");
  gen_cmd->add_flag("--no-measure", gen.no_measure, "omit the readout measurements");

  OrderFindArgs of;
  of.seed = default_seed();
  auto* of_cmd = app.add_subcommand(
      "order-find", "Sample phase readouts and post-process order candidates");
  of_cmd->add_option("a", of.a, "multiplier, 1 < a < N, coprime to N")->required();
  of_cmd->add_option("N", of.N, "modulus, N >= 3")->required();
  of_cmd->add_option("--shots", of.shots, "number of readouts (default 10000)");
  of_cmd->add_option("--seed", of.seed, "RNG seed (default $QSHOR_SEED, else 0)");
  of_cmd->add_option("--top", of.top, "histogram lines to print (default 10)");
  of_cmd->add_option("--backend", of.backend, "simulate | analytic | auto")
      ->transform(CLI::CheckedTransformer(backend_map, CLI::ignore_case));

  FactorArgs fac;
  fac.seed = default_seed();
  auto* fac_cmd = app.add_subcommand("factor", "Factor N end to end");
  fac_cmd->add_option("N", fac.N, "number to factor, N >= 2")->required();
  fac_cmd->add_option("--niter", fac.niter, "maximum trials (default 30)");
  fac_cmd->add_option("--seed", fac.seed, "RNG seed (default $QSHOR_SEED, else 0)");
  fac_cmd->add_option("--backend", fac.backend, "simulate | analytic | auto")
      ->transform(CLI::CheckedTransformer(backend_map, CLI::ignore_case));

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand(
      "verify", "Brute-force the number-theoretic facts and circuit contracts");
  ver_cmd->add_option("--prime-power-limit", ver.prime_power_limit,
                      "odd prime powers up to this value (default 2048)");
  ver_cmd->add_option("--reduction-limit", ver.reduction_limit,
                      "odd composite moduli up to this value (default 1000)");
  ver_cmd->add_option("--totient-limit", ver.totient_limit,
                      "totient ratio bound checked up to this value (default 100000)");
  ver_cmd->add_option("--legendre-limit", ver.legendre_limit,
                      "close-fraction denominators up to this value (default 512)");
  ver_cmd->add_option("--imm-limit", ver.imm_limit,
                      "exhaustive multiplication circuits up to this modulus (default 32)");
  ver_cmd->add_option("--qft-limit", ver.qft_limit,
                      "dense transform check up to this many wires (default 5)");

  StatsArgs stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "Emit per-size success and cost statistics as CSV");
  stats_cmd->add_option("--min-bits", stats.min_bits, "smallest input size (default 2)");
  stats_cmd->add_option("--max-bits", stats.max_bits, "largest input size (default 10)");
  stats_cmd->add_option("-o,--out", stats.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_param;
  }

  if (gen_cmd->parsed()) return cmd_gen(gen, std::cout, std::cerr);
  if (of_cmd->parsed()) return cmd_order_find(of, std::cout, std::cerr);
  if (fac_cmd->parsed()) return cmd_factor(fac, std::cout, std::cerr);
  if (ver_cmd->parsed()) return cmd_verify(ver, std::cout, std::cerr);
  if (stats_cmd->parsed()) return cmd_stats(stats, std::cout, std::cerr);
  return exit_param;
}
