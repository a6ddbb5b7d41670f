#pragma once

// Command layer behind the floqc tool: each command computes a result record
// and renders it as CSV or JSON. Random gates for circuit i are
// haar_gate(d, derive_seed(master_seed, i)).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floquet/circuit_algebra.hpp"
#include "floquet/spectral_stats.hpp"
#include "floquet/unitary_engine.hpp"

namespace floquet {

enum class Format { Csv, Json };

struct ExperimentConfig {
  std::uint64_t master_seed = 0;
  int d = 2;
  Format format = Format::Json;
};

/// Text to emit plus the process exit status (0 ok, 1 threshold failure).
struct CommandOutput {
  std::string body;
  int exit_code = 0;
};

/// Gate used by circuit `index`, or the identity when `identity_gate` is set.
LocalGate<double> experiment_gate(const ExperimentConfig& cfg, std::uint64_t index, bool identity_gate = false);

CommandOutput cmd_classify(const std::string& sequence, const ExperimentConfig& cfg);

struct EnumerateRow {
  int q = 0;
  int r = 0;
  int c = 0;
  bool staircase = false;
};
std::vector<EnumerateRow> enumerate_rows(int n);
CommandOutput cmd_enumerate(int n, const ExperimentConfig& cfg);

CommandOutput cmd_reduce(const std::string& sequence, const ExperimentConfig& cfg);

/// `periods` = 0 reports the long-run filling instead of a fixed t.
CommandOutput cmd_compress(const std::string& sequence, int periods, const ExperimentConfig& cfg);

struct VerifyReport {
  int n = 0, q = 0, r = 0;
  double conjugation = 0.0;
  double root_identity = 0.0;
  double space_time = 0.0;
  double translation = 0.0;
  std::optional<double> sector_relation;  // max over all sectors
  double tolerance = 1e-11;
  double sector_tolerance = 1e-8;

  bool passed() const;
};
VerifyReport verify_class(int n, int q, int r, const LocalGate<double>& v, bool with_sectors);
CommandOutput cmd_verify(int n, int q, int r, bool identity_gate, bool with_sectors, const ExperimentConfig& cfg);

/// Eigenphases of a circuit (or of its root) on the full space or in momentum
/// sector k of S^q.
struct SpectrumRequest {
  std::optional<std::string> sequence;
  int n = 0, q = 0, r = 0;  // used when no sequence is given
  std::optional<int> k;
  bool root = false;
  bool identity_gate = false;
};
EigenphaseSet spectrum_of(const SpectrumRequest& req, const ExperimentConfig& cfg);
CommandOutput cmd_spectrum(const SpectrumRequest& req, const ExperimentConfig& cfg);

struct LsdRequest {
  int n = 12, q = 3, r = 2, k = 0;
  int n_circuits = 10;
  int bins = 40;
  double s_max = 4.0;
  // Optional thresholds; a violated one turns the exit code to 1.
  std::optional<double> max_root_cue;
  std::optional<double> max_f_pm;
  std::optional<double> min_f_cue;
  std::optional<double> max_f_poisson;
};

struct LsdResult {
  LsdRequest request;
  std::int64_t sector_dim = 0;
  std::vector<double> f_spacings;
  std::vector<double> root_spacings;
  double worst_mean_deviation = 0.0;  // max |mean spacing - 1| over sectors
  GofReport f_vs_pm, f_vs_cue, root_vs_cue, f_vs_poisson;

  bool passed() const;
};
LsdResult run_lsd(const LsdRequest& req, const ExperimentConfig& cfg);
/// Header s_mid,hist_F,hist_root,cue,p_m.
std::string lsd_csv(const LsdResult& res);
std::string lsd_json(const LsdResult& res);

CommandOutput cmd_rains(std::int64_t dim, int q, int n_samples, std::optional<double> max_ks,
                        const ExperimentConfig& cfg);

CommandOutput cmd_bruteforce(int n, bool force, const ExperimentConfig& cfg);

/// "index,phase" rows.
std::string phases_csv(const EigenphaseSet& phases);

}  // namespace floquet
