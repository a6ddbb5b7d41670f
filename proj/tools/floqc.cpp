// floqc: command-line front end for the simple-circuit library.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "floquet/error.hpp"
#include "floquet/experiment.hpp"

namespace {

constexpr int kExitInvalid = 2;

void emit(const std::string& body, const std::string& out) {
  if (out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw floquet::Error(floquet::Errc::InvalidArgument, "cannot open " + out + " for writing");
  f << body;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace floquet;

  CLI::App app{"Simple Floquet circuits: classification, operators, and level statistics"};
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig cfg;
  std::string out;
  app.add_option("--seed", cfg.master_seed, "Master seed for every derived random stream");
  app.add_option("--out", out, "Write the output here instead of stdout");
  app.add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::Csv}, {"json", Format::Json}},
                                          CLI::ignore_case));
  app.add_option("--d", cfg.d, "Local dimension")->check(CLI::Range(2, 16));

  std::string sequence;
  int n = 0, q = 0, r = 0, periods = 1;
  bool identity_gate = false, no_sectors = false, force = false;

  auto* classify = app.add_subcommand("classify", "Class (q,r) and invariant C of a gate sequence");
  classify->add_option("sequence", sequence, "Gate order, e.g. 1,4,3,6,5,2")->required();

  auto* enumerate = app.add_subcommand("enumerate", "Allowed shift parameters (q,r) with their C values");
  enumerate->add_option("N", n)->required();

  auto* reduce = app.add_subcommand("reduce", "Moves that bring a sequence to its double staircase F_p");
  reduce->add_option("sequence", sequence)->required();

  auto* compress = app.add_subcommand("compress", "Greedy layer compression and filling fraction");
  compress->add_option("sequence", sequence)->required();
  compress->add_option("--periods,-t", periods, "Number of periods; 0 reports the long-run filling")
      ->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Check the operator identities for class (q,r)");
  verify->add_option("N", n)->required();
  verify->add_option("q", q)->required();
  verify->add_option("r", r)->required();
  verify->add_flag("--identity-gate", identity_gate, "Use V = identity");
  verify->add_flag("--no-sectors", no_sectors, "Skip the per-sector phase relation");

  SpectrumRequest spec_req;
  std::optional<std::string> spec_seq;
  std::optional<int> spec_k;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenphases of a circuit, its root, or a momentum sector");
  spectrum->add_option("--seq", spec_seq, "Gate sequence");
  spectrum->add_option("--n", spec_req.n);
  spectrum->add_option("--q", spec_req.q);
  spectrum->add_option("--r", spec_req.r);
  spectrum->add_option("--k", spec_k, "Momentum sector of S^q");
  spectrum->add_flag("--root", spec_req.root, "Spectrum of the root instead of F");
  spectrum->add_flag("--identity-gate", spec_req.identity_gate);

  LsdRequest lsd_req;
  bool small = false;
  auto* lsd = app.add_subcommand("lsd", "Level spacing statistics of F_{q,r} and its root in one sector");
  lsd->add_option("--n", lsd_req.n);
  lsd->add_option("--q", lsd_req.q);
  lsd->add_option("--r", lsd_req.r);
  lsd->add_option("--k", lsd_req.k);
  lsd->add_option("--circuits", lsd_req.n_circuits, "Number of Haar gates to average over");
  lsd->add_option("--bins", lsd_req.bins);
  lsd->add_option("--s-max", lsd_req.s_max);
  lsd->add_flag("--small", small, "N=8, q=2, r=1 preset");
  lsd->add_option("--max-root-cue", lsd_req.max_root_cue, "Fail if KS(root, CUE) exceeds this");
  lsd->add_option("--max-f-pm", lsd_req.max_f_pm, "Fail if KS(F, P_q) exceeds this");
  lsd->add_option("--min-f-cue", lsd_req.min_f_cue, "Fail if KS(F, CUE) is below this");
  lsd->add_option("--max-f-poisson", lsd_req.max_f_poisson, "Fail if KS(F, Poisson) exceeds this");

  std::int64_t dim = 0;
  int samples = 200;
  std::optional<double> max_ks;
  auto* rains = app.add_subcommand("rains", "Monte Carlo check of the q-th power of a Haar unitary");
  rains->add_option("dim", dim)->required();
  rains->add_option("q", q)->required();
  rains->add_option("--samples", samples);
  rains->add_option("--max-ks", max_ks, "Fail if the KS distance exceeds this");

  auto* bruteforce = app.add_subcommand("bruteforce", "Exhaustive equivalence classes of all N! sequences");
  bruteforce->add_option("N", n)->required();
  bruteforce->add_flag("--force", force, "Allow N above the default limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    CommandOutput result;
    if (*classify) {
      result = cmd_classify(sequence, cfg);
    } else if (*enumerate) {
      result = cmd_enumerate(n, cfg);
    } else if (*reduce) {
      result = cmd_reduce(sequence, cfg);
    } else if (*compress) {
      result = cmd_compress(sequence, periods, cfg);
    } else if (*verify) {
      result = cmd_verify(n, q, r, identity_gate, !no_sectors, cfg);
    } else if (*spectrum) {
      spec_req.sequence = spec_seq;
      spec_req.k = spec_k;
      result = cmd_spectrum(spec_req, cfg);
    } else if (*lsd) {
      if (small) {
        lsd_req.n = 8;
        lsd_req.q = 2;
        lsd_req.r = 1;
      }
      const auto res = run_lsd(lsd_req, cfg);
      const int code = res.passed() ? 0 : 1;
      if (!out.empty()) {
        emit(lsd_csv(res), out);
        std::cout << lsd_json(res);
        return code;
      }
      result = {cfg.format == Format::Csv ? lsd_csv(res) : lsd_json(res), code};
    } else if (*rains) {
      result = cmd_rains(dim, q, samples, max_ks, cfg);
    } else if (*bruteforce) {
      result = cmd_bruteforce(n, force, cfg);
    }
    emit(result.body, out);
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
