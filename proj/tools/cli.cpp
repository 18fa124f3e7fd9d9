#include "cli.hpp"

#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "kme/bounds.hpp"
#include "kme/concurrence.hpp"
#include "kme/errors.hpp"
#include "kme/families.hpp"
#include "kme/format.hpp"
#include "kme/partitions.hpp"
#include "kme/probe_io.hpp"
#include "kme/state_io.hpp"
#include "kme/sweep.hpp"

namespace kme::cli {

namespace {

struct Globals {
  double tol = kDetectionTol;
  std::uint64_t seed = 1;
};

struct HkArgs {
  int n = 0, k = 0;
  bool brute_force = false;
  bool sound = false;
};

struct ConcurrenceArgs {
  std::string state;
  int k = 0;
  bool report_partition = false;
};

struct BoundArgs {
  int order = 1;
  std::string state, probe, probe2;
  int k = 0;
};

struct FamilyArgs {
  std::string name, out;
  int n = 0;
  std::optional<double> a, b, alpha, beta;
};

struct SweepArgs {
  std::string family = "w-antiw", probes = "canonical", out;
  int n = 5, k = 2, grid = 101;
  bool check_psd = false, triangle = false;
};

void print_report(std::ostream& out, const BoundReport& r) {
  out << "order: " << r.order << '\n' << "k: " << r.k << '\n' << "i_k:";
  for (double v : r.i_k_values) out << ' ' << format_real(v);
  out << '\n'
      << "prefactor: " << format_real(r.prefactor) << '\n'
      << "bound: " << format_real(r.bound_value) << '\n'
      << "detected: " << (r.detected ? "true" : "false") << '\n';
}

void run_hk(const HkArgs& a, std::ostream& out) {
  if (a.sound && a.brute_force) throw InputError("--sound and --brute-force are exclusive");
  const double v = a.sound ? h_k_sound(a.n, a.k) : a.brute_force ? h_k_bruteforce(a.n, a.k) : h_k(a.n, a.k);
  out << format_real(v) << '\n';
}

void run_concurrence(const ConcurrenceArgs& a, std::ostream& out) {
  const AnyState state = read_state_file(a.state);
  const auto* psi = std::get_if<StateVector>(&state);
  if (!psi)
    throw InputError("concurrence is computed exactly for pure states only; give a 'kind: vector' file "
                     "(use 'kme bound' for mixed states)");
  const ConcurrenceResult r = kme_concurrence_pure(*psi, a.k);
  out << format_real(r.value) << '\n';
  if (a.report_partition) out << r.argmin_partition.to_string() << '\n';
}

void run_bound(const BoundArgs& a, const Globals& g, std::ostream& out) {
  const DensityMatrix rho = as_density_matrix(read_state_file(a.state));
  const ProbeFile first = read_probe_file(a.probe);
  if (a.order == 1) {
    if (!a.probe2.empty()) throw InputError("--probe2 is only used with --order 2");
    print_report(out, bound1(rho, first.probe(), a.k, g.tol));
    return;
  }
  if (first.is_pair()) {
    if (!a.probe2.empty()) throw InputError("--probe already holds a pair; drop --probe2");
    print_report(out, bound2(rho, first.pair(), a.k, g.tol));
    return;
  }
  if (a.probe2.empty()) throw InputError("--order 2 needs a pair file (with 'y' lines) or --probe2");
  const ProbeFile second = read_probe_file(a.probe2);
  print_report(out, bound2(rho, ProbePair::from_probes(first.probe(), second.probe()), a.k, g.tol));
}

void run_family(const FamilyArgs& a, const Globals& g, std::ostream& out) {
  const bool pure = a.name == "ghz" || a.name == "w" || a.name == "anti-w" || a.name == "random-pure";
  if (pure) {
    if (a.a || a.b || a.alpha || a.beta) throw InputError("pure family '" + a.name + "' takes no mixing weights");
    const StateVector psi = a.name == "ghz"      ? make_ghz(a.n)
                            : a.name == "w"      ? make_w(a.n)
                            : a.name == "anti-w" ? make_anti_w(a.n)
                                                 : random_pure(SystemShape::qubits(a.n), g.seed);
    write_state_file(a.out, psi);
  } else {
    const FamilyId id = parse_family(a.name);
    double p1 = 0, p2 = 0;
    if (id == FamilyId::w_antiw) {
      if (a.alpha || a.beta) throw InputError("w-antiw takes --a/--b");
      p1 = a.a.value_or(0.0);
      p2 = a.b.value_or(0.0);
    } else {
      if (a.a || a.b) throw InputError("ghz-w takes --alpha/--beta");
      p1 = a.alpha.value_or(0.0);
      p2 = a.beta.value_or(0.0);
    }
    write_state_file(a.out, make_family(id, a.n, p1, p2));
  }
  out << "wrote " << a.out << '\n';
}

void run_sweep_cmd(const SweepArgs& a, const Globals& g, std::ostream& out) {
  SweepSpec spec;
  spec.family = parse_family(a.family);
  spec.probes = parse_probe_set(a.probes);
  spec.n = a.n;
  spec.k = a.k;
  spec.grid = a.grid;
  spec.check_psd = a.check_psd;
  spec.triangle = a.triangle;
  spec.tol = g.tol;
  write_sweep_csv_file(spec, a.out);
  out << "wrote " << a.out << '\n';
}

void run_budget(int n, std::ostream& out) {
  const auto b = measurement_budget(n);
  out << b.bound1_measurements << ' ' << b.bound2_measurements << ' ' << b.bound1_observables << ' '
      << b.bound2_observables << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-ME concurrence and its tomography-free lower bounds", "kme"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--tol", g.tol, "Detection threshold for bound values")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Seed for random generators");

  HkArgs hk;
  auto* hk_cmd = app.add_subcommand("hk", "Print the prefactor H_k");
  hk_cmd->add_option("--n", hk.n, "Number of parties")->required();
  hk_cmd->add_option("--k", hk.k, "Number of blocks")->required();
  hk_cmd->add_flag("--brute-force", hk.brute_force, "Minimise over block sizes exhaustively");
  hk_cmd->add_flag("--sound", hk.sound, "Print the prefactor the bounds use (differs from H_k for k >= 3)");

  ConcurrenceArgs cc;
  auto* cc_cmd = app.add_subcommand("concurrence", "Exact k-ME concurrence of a pure state");
  cc_cmd->add_option("--state", cc.state, "kme-state v1 vector file")->required();
  cc_cmd->add_option("--k", cc.k, "Number of blocks")->required();
  cc_cmd->add_flag("--report-partition", cc.report_partition, "Also print the minimising partition");

  BoundArgs bd;
  auto* bd_cmd = app.add_subcommand("bound", "Evaluate lower bound 1 or 2");
  bd_cmd->add_option("--order", bd.order, "Bound order")->check(CLI::IsMember({1, 2}));
  bd_cmd->add_option("--state", bd.state, "kme-state v1 file")->required();
  bd_cmd->add_option("--k", bd.k, "Number of blocks")->required();
  bd_cmd->add_option("--probe", bd.probe, "kme-probe v1 file (or pair file for order 2)")->required();
  bd_cmd->add_option("--probe2", bd.probe2, "Second probe for order 2");

  FamilyArgs fa;
  auto* fa_cmd = app.add_subcommand("family", "Write a benchmark state");
  fa_cmd->add_option("--name", fa.name, "w-antiw | ghz-w | ghz | w | anti-w | random-pure")->required();
  fa_cmd->add_option("--n", fa.n, "Number of qubits")->required();
  fa_cmd->add_option("--a", fa.a, "W weight (w-antiw)");
  fa_cmd->add_option("--b", fa.b, "anti-W weight (w-antiw)");
  fa_cmd->add_option("--alpha", fa.alpha, "GHZ weight (ghz-w)");
  fa_cmd->add_option("--beta", fa.beta, "W weight (ghz-w)");
  fa_cmd->add_option("--out", fa.out, "Output file")->required();

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "Grid sweep of a mixed family to CSV");
  sw_cmd->add_option("--family", sw.family, "w-antiw | ghz-w")->required();
  sw_cmd->add_option("--n", sw.n, "Number of qubits")->required();
  sw_cmd->add_option("--k", sw.k, "Number of blocks")->required();
  sw_cmd->add_option("--probes", sw.probes, "canonical | hadamard | both");
  sw_cmd->add_option("--grid", sw.grid, "Points per axis");
  sw_cmd->add_option("--out", sw.out, "CSV output path")->required();
  sw_cmd->add_flag("--check-psd", sw.check_psd, "Add a psd_ok column");
  sw_cmd->add_flag("--triangle", sw.triangle, "Only emit points with p1 + p2 <= 1");

  int budget_n = 0;
  auto* bu_cmd = app.add_subcommand("budget", "Measurement and observable counts");
  bu_cmd->add_option("--n", budget_n, "Number of parties")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    if (*hk_cmd) run_hk(hk, out);
    else if (*cc_cmd) run_concurrence(cc, out);
    else if (*bd_cmd) run_bound(bd, g, out);
    else if (*fa_cmd) run_family(fa, g, out);
    else if (*sw_cmd) run_sweep_cmd(sw, g, out);
    else if (*bu_cmd) run_budget(budget_n, out);
  } catch (const NumericIntegrityError& e) {
    err << "numeric integrity error: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace kme::cli
