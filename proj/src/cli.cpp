#include "qshor/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "qshor/analysis.hpp"
#include "qshor/errors.hpp"
#include "qshor/gateir.hpp"
#include "qshor/numtheory.hpp"
#include "qshor/qasm.hpp"
#include "qshor/revarith.hpp"
#include "qshor/rng.hpp"
#include "qshor/sim.hpp"

namespace qshor::cli {

namespace nt = qshor::numtheory;

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const param_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_param;
  } catch (const typing_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_build;
  } catch (const translate_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_build;
  } catch (const resource_error& e) {
    err << "error: " << e.what() << " (support " << e.peak_support << ")\n";
    return exit_resource;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_parse;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  }
}

std::unique_ptr<nt::OrderOutcomeSource> make_source(Backend backend, u64 N) {
  if (backend == Backend::auto_select)
    backend = N <= 64 ? Backend::simulate : Backend::analytic;
  if (backend == Backend::simulate)
    return std::make_unique<analysis::SimulateOutcomeSource>();
  return std::make_unique<analysis::AnalyticOutcomeSource>();
}

const char* backend_name(Backend backend, u64 N) {
  if (backend == Backend::auto_select)
    backend = N <= 64 ? Backend::simulate : Backend::analytic;
  return backend == Backend::simulate ? "simulate" : "analytic";
}

const char* path_name(nt::Trial::Path p) {
  switch (p) {
    case nt::Trial::Path::unit_a: return "unit";
    case nt::Trial::Path::gcd_hit: return "gcd";
    case nt::Trial::Path::quantum: return "quantum";
  }
  return "?";
}

}  // namespace

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto sc = gateir::shor_circuit(args.a, args.N);
    std::optional<qasm::MeasureSpec> measure;
    if (!args.no_measure) measure = qasm::MeasureSpec{0, sc.params.m};
    const std::string text =
        qasm::emit(sc.gates, sc.params.total, measure, args.compat);

    std::string path = args.out_path;
    if (path.empty())
      path = "shor_" + std::to_string(args.a) + "_" + std::to_string(args.N) + ".qasm";
    if (path == "-") {
      out << text;
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f || !(f << text) || !f.flush())
        throw io_error("cannot write '" + path + "'");
    }
    err << "wrote " << (path == "-" ? "stdout" : path) << ": " << sc.params.total
        << " qubits (" << sc.params.m << " readout + " << sc.params.n << " work + "
        << sc.params.s << " ancilla), " << sc.gates.size() << " gates\n";
    return exit_ok;
  });
}

int cmd_order_find(const OrderFindArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto params = gateir::shor_params(args.a, args.N);
    if (args.shots == 0) throw param_error("order-find: shots must be positive");
    auto source = make_source(args.backend, args.N);
    Rng rng(args.seed);

    std::map<u64, u64> counts;
    for (u64 i = 0; i < args.shots; ++i)
      ++counts[source->draw(args.a, args.N, params.m, rng)];

    out << "order-find a=" << args.a << " N=" << args.N << " m=" << params.m
        << " shots=" << args.shots << " backend=" << backend_name(args.backend, args.N)
        << " seed=" << args.seed << '\n';

    std::vector<std::pair<u64, u64>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });

    std::map<u64, u64> order_shots;
    u64 postprocessed = 0;
    for (const auto& [outcome, count] : ranked) {
      const auto q = nt::of_post(args.a, args.N, outcome, params.m);
      if (q) {
        order_shots[*q] += count;
        postprocessed += count;
      }
    }
    const u64 top = std::min<u64>(args.top, ranked.size());
    for (u64 i = 0; i < top; ++i) {
      const auto& [outcome, count] = ranked[i];
      out << "outcome " << outcome << " count " << count << " candidate ";
      const auto q = nt::of_post(args.a, args.N, outcome, params.m);
      if (q)
        out << *q;
      else
        out << '-';
      out << '\n';
    }
    out << std::setprecision(6);
    for (const auto& [r, shots] : order_shots)
      out << "candidate " << r << " fraction "
          << static_cast<double>(shots) / static_cast<double>(args.shots) << '\n';
    out << "postprocessed fraction "
        << static_cast<double>(postprocessed) / static_cast<double>(args.shots) << '\n';
    return exit_ok;
  });
}

int cmd_factor(const FactorArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (args.N < 2) throw param_error("factor: N must be at least 2");
    if (args.niter == 0) throw param_error("factor: niter must be positive");
    auto source = make_source(args.backend, args.N);
    const auto result = nt::end_to_end(args.N, args.niter, args.seed, *source);

    out << "factor N=" << args.N << " niter=" << args.niter << " backend="
        << backend_name(args.backend, args.N) << " seed=" << args.seed << '\n';

    using IC = nt::InputClass;
    switch (result.classification.kind) {
      case IC::prime:
        out << args.N << " is prime; it has no nontrivial factor\n";
        return exit_ok;
      case IC::even:
        out << args.N << " = 2 * " << args.N / 2 << " (even input)\n";
        return exit_ok;
      case IC::prime_power:
        out << args.N << " = " << result.classification.p << "^"
            << result.classification.k << " (prime power)\n";
        return exit_ok;
      case IC::composite_odd:
        break;
    }

    u64 trial_no = 0;
    for (const auto& t : result.trials) {
      ++trial_no;
      out << "trial " << trial_no << " a=" << t.a << " path=" << path_name(t.path);
      if (t.path == nt::Trial::Path::quantum) {
        out << " outcome=" << t.outcome << " order=";
        if (t.order)
          out << *t.order;
        else
          out << '-';
      }
      out << " factor=";
      if (t.factor)
        out << *t.factor;
      else
        out << '-';
      out << '\n';
    }
    if (result.factor) {
      out << args.N << " = " << *result.factor << " * " << args.N / *result.factor
          << '\n';
      return exit_ok;
    }
    out << "no factor found in " << args.niter << " trials\n";
    return exit_no_factor;
  });
}

namespace {

// Exhaustive check of the in-place modular-multiplication circuit for one
// modulus: both the reversible evaluator and the sparse simulation of the
// lowered gates must send every |x> to |a x mod N> and restore every ancilla.
struct ImmSweep {
  u64 cases = 0;
  bool ok = true;
  std::string first_failure;
};

ImmSweep run_imm_sweep(u64 limit) {
  ImmSweep sweep;
  for (u64 N = 2; N <= limit && sweep.ok; ++N) {
    for (u64 a = 1; a < N && sweep.ok; ++a) {
      if (nt::gcd(a, N) != 1) continue;
      const auto circuit = revarith::imm(a, N);
      if (!rcir::well_typed(circuit.prog, circuit.width)) {
        sweep.ok = false;
        sweep.first_failure = "imm(" + std::to_string(a) + ", " + std::to_string(N) +
                              ") is not well typed";
        break;
      }
      const auto gates = gateir::translate_rcir(circuit.prog);
      for (u64 x = 0; x < N; ++x) {
        ++sweep.cases;
        const u64 expect = nt::mulmod(a, x, N);

        auto reg = rcir::register_of_value(circuit.width, x);
        rcir::eval_rcir(circuit.prog, reg);
        const u64 got_rev = rcir::value_of_register(reg);

        auto state = sim::run_circuit(sim::basis_state(circuit.width, x), gates);
        u64 got_sim = ~0ULL;
        if (state.amps.size() == 1) got_sim = state.amps.begin()->first;

        if (got_rev != expect || got_sim != expect) {
          sweep.ok = false;
          std::ostringstream os;
          os << "imm(" << a << ", " << N << ") on x=" << x << ": reversible "
             << got_rev << ", simulated " << got_sim << ", want " << expect;
          sweep.first_failure = os.str();
          break;
        }
      }
    }
  }
  return sweep;
}

// The k-wire transform circuit must reproduce omega^(j l) / sqrt(2^k) columns.
struct QftSweep {
  u64 cases = 0;
  double worst_err = 0.0;
  bool ok = true;
};

QftSweep run_qft_sweep(std::uint32_t limit) {
  QftSweep sweep;
  for (std::uint32_t k = 1; k <= limit; ++k) {
    const auto circuit = gateir::qft(k);
    const u64 K = 1ULL << k;
    const double norm = 1.0 / std::sqrt(static_cast<double>(K));
    for (u64 j = 0; j < K; ++j) {
      const auto state = sim::run_circuit(sim::basis_state(k, j), circuit);
      for (u64 l = 0; l < K; ++l) {
        ++sweep.cases;
        const double angle = 2.0 * M_PI * static_cast<double>(nt::mulmod(j, l, K)) /
                             static_cast<double>(K);
        const std::complex<double> want = std::polar(norm, angle);
        const auto it = state.amps.find(l);
        const std::complex<double> got = it == state.amps.end() ? 0.0 : it->second;
        sweep.worst_err = std::max(sweep.worst_err, std::abs(got - want));
      }
    }
  }
  sweep.ok = sweep.worst_err <= 1e-9;
  return sweep;
}

}  // namespace

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    bool all_ok = true;
    analysis::SweepLimits limits;
    limits.prime_power_limit = args.prime_power_limit;
    limits.reduction_limit = args.reduction_limit;
    limits.totient_limit = args.totient_limit;
    limits.legendre_limit = args.legendre_limit;

    out << std::setprecision(6);
    for (const auto& rep : analysis::verify_lemma_sweeps(limits)) {
      all_ok = all_ok && rep.satisfied;
      out << rep.name << ": " << (rep.satisfied ? "ok" : "FAILED") << " ("
          << rep.cases_checked << " cases, worst " << rep.empirical << ", bound "
          << rep.bound << ")";
      if (!rep.satisfied) out << " counterexample: " << rep.counterexample;
      out << '\n';
    }

    const auto imm = run_imm_sweep(args.imm_limit);
    all_ok = all_ok && imm.ok;
    out << "imm: " << (imm.ok ? "ok" : "FAILED") << " (" << imm.cases
        << " products, N <= " << args.imm_limit << ")";
    if (!imm.ok) out << " counterexample: " << imm.first_failure;
    out << '\n';

    const auto qft = run_qft_sweep(args.qft_limit);
    all_ok = all_ok && qft.ok;
    out << "qft: " << (qft.ok ? "ok" : "FAILED") << " (" << qft.cases
        << " matrix entries, k <= " << args.qft_limit << ", worst err "
        << qft.worst_err << ")\n";

    out << (all_ok ? "all checks passed" : "SOME CHECKS FAILED") << '\n';
    return all_ok ? exit_ok : exit_verify_failed;
  });
}

int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (args.out_path.empty() || args.out_path == "-") {
      analysis::emit_stats(out, args.min_bits, args.max_bits);
    } else {
      std::ofstream f(args.out_path, std::ios::binary);
      if (!f) throw io_error("cannot write '" + args.out_path + "'");
      analysis::emit_stats(f, args.min_bits, args.max_bits);
      if (!f.flush()) throw io_error("cannot write '" + args.out_path + "'");
      err << "wrote " << args.out_path << '\n';
    }
    return exit_ok;
  });
}

u64 default_seed() {
  const char* env = std::getenv("QSHOR_SEED");
  if (!env || !*env) return 0;
  u64 v = 0;
  const auto res = std::from_chars(env, env + std::string_view(env).size(), v);
  if (res.ec != std::errc{} || *res.ptr != '\0') return 0;
  return v;
}

}  // namespace qshor::cli
