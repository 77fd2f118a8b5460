#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace qshor::cli {

using u64 = std::uint64_t;

// Process exit codes shared by every subcommand.
enum ExitCode : int {
  exit_ok = 0,
  exit_verify_failed = 1,   // a verification sweep or check reported a violation
  exit_param = 2,           // invalid arguments (domain errors)
  exit_build = 3,           // typing/translation failure while building circuits
  exit_resource = 4,        // simulator resource cap exceeded
  exit_parse = 5,           // malformed OpenQASM input
  exit_io = 6,              // filesystem problems
  exit_no_factor = 7,       // factoring gave up after the requested trials
};

// Backend selection for order finding: exact circuit simulation or the
// closed-form readout distribution. "auto" simulates for N <= 64.
enum class Backend { simulate, analytic, auto_select };

struct GenArgs {
  u64 a = 0;
  u64 N = 0;
  std::string out_path;      // "-" writes the program to stdout
  bool compat = false;       // include c3x/c4x compat definitions
  bool no_measure = false;   // omit the phase-register measurement
};

struct OrderFindArgs {
  u64 a = 0;
  u64 N = 0;
  u64 shots = 10000;
  u64 seed = 0;
  Backend backend = Backend::auto_select;
  u64 top = 10;              // histogram lines to print
};

struct FactorArgs {
  u64 N = 0;
  u64 niter = 30;
  u64 seed = 0;
  Backend backend = Backend::auto_select;
};

struct VerifyArgs {
  u64 prime_power_limit = 2048;
  u64 reduction_limit = 1000;
  u64 totient_limit = 100000;
  u64 legendre_limit = 512;
  u64 imm_limit = 32;        // exhaustive in-place multiplication checks up to this N
  std::uint32_t qft_limit = 5;  // dense transform checks up to this many wires
};

struct StatsArgs {
  std::uint32_t min_bits = 2;
  std::uint32_t max_bits = 10;
  std::string out_path;      // empty writes CSV to stdout
};

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err);
int cmd_order_find(const OrderFindArgs& args, std::ostream& out, std::ostream& err);
int cmd_factor(const FactorArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err);

// Default seed when the flag is absent: the QSHOR_SEED environment variable,
// else 0.
u64 default_seed();

}  // namespace qshor::cli
