#include "floquet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "floquet/rng.hpp"
#include "json.hpp"

namespace floquet {
namespace {

using json = nlohmann::ordered_json;

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  return os;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json gof_json(const GofReport& g) { return json{{"ks", g.ks}, {"n", g.n}, {"curve", g.curve}}; }

std::string rational_string(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string join_gates(const std::vector<int>& gates, char sep) {
  std::string out;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(gates[i]);
  }
  return out;
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

LocalGate<double> experiment_gate(const ExperimentConfig& cfg, std::uint64_t index, bool identity_gate) {
  if (identity_gate) return LocalGate<double>::identity(cfg.d);
  return haar_gate<double>(cfg.d, derive_seed(cfg.master_seed, index));
}

CommandOutput cmd_classify(const std::string& sequence, const ExperimentConfig& cfg) {
  const auto cls = classify(GateSequence::parse(sequence));
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "n,q,r,p\n" << cls.n << ',' << cls.q << ',' << cls.r << ',' << cls.p << '\n';
    return {os.str()};
  }
  return {dump(json{{"n", cls.n}, {"q", cls.q}, {"r", cls.r}, {"p", cls.p}})};
}

std::vector<EnumerateRow> enumerate_rows(int n) {
  std::vector<EnumerateRow> rows;
  for (const auto& qr : allowed_qr(n)) rows.push_back({qr.q, qr.r, c_of_class(n, qr.q, qr.r), qr.q == n});
  return rows;
}

CommandOutput cmd_enumerate(int n, const ExperimentConfig& cfg) {
  const auto rows = enumerate_rows(n);
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "q,r,C,type\n";
    for (const auto& row : rows) os << row.q << ',' << row.r << ',' << row.c << ',' << (row.staircase ? "S" : "BW") << '\n';
    return {os.str()};
  }
  json arr = json::array();
  for (const auto& row : rows)
    arr.push_back({{"q", row.q}, {"r", row.r}, {"C", row.c}, {"type", row.staircase ? "S" : "BW"}});
  return {dump(json{{"n", n}, {"count", rows.size()}, {"rows", arr}})};
}

CommandOutput cmd_reduce(const std::string& sequence, const ExperimentConfig& cfg) {
  const auto seq = GateSequence::parse(sequence);
  const auto red = reduce_to_fp(seq);
  const auto target = canonical_fp(seq.n_sites(), red.p);
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "step,move\n";
    for (std::size_t i = 0; i < red.moves.size(); ++i) os << i + 1 << ',' << red.moves[i].to_string() << '\n';
    return {os.str()};
  }
  json moves = json::array();
  for (const auto& m : red.moves) moves.push_back(m.to_string());
  return {dump(json{{"n", seq.n_sites()}, {"p", red.p}, {"canonical", target.to_string()}, {"moves", moves}})};
}

CommandOutput cmd_compress(const std::string& sequence, int periods, const ExperimentConfig& cfg) {
  const auto seq = GateSequence::parse(sequence);
  if (periods < 0) throw Error(Errc::InvalidArgument, "periods must be non-negative", periods);
  const auto rep = periods == 0 ? steady_filling(seq) : compress(seq, periods);
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "layer,gates\n";
    for (std::size_t i = 0; i < rep.layers.size(); ++i) os << i + 1 << ',' << join_gates(rep.layers[i], ' ') << '\n';
    return {os.str()};
  }
  json layers = json::array();
  for (const auto& l : rep.layers) layers.push_back(l);
  return {dump(json{{"n", seq.n_sites()},
                    {"periods", rep.periods_used},
                    {"layers", rep.layers.size()},
                    {"filling", rational_string(rep.filling)},
                    {"filling_value", rep.filling.value()},
                    {"schedule", layers}})};
}

bool VerifyReport::passed() const {
  const bool ops = conjugation <= tolerance && root_identity <= tolerance && space_time <= tolerance &&
                   translation <= tolerance;
  return ops && (!sector_relation || *sector_relation <= sector_tolerance);
}

VerifyReport verify_class(int n, int q, int r, const LocalGate<double>& v, bool with_sectors) {
  if (!is_allowed(n, q, r))
    throw Error(Errc::InvalidClassParameters,
                "(q,r)=(" + std::to_string(q) + "," + std::to_string(r) + ") not allowed for N=" + std::to_string(n));
  VerifyReport rep;
  rep.n = n;
  rep.q = q;
  rep.r = r;
  rep.conjugation = verify_conjugation(n, v);
  rep.root_identity = verify_root_identity(n, q, r, v);
  rep.space_time = verify_space_time(n, q, r, v);
  rep.translation = verify_translation_sym(n, q, r, v);
  if (with_sectors) {
    double worst = 0.0;
    for (int k = 0; k < n / q; ++k) worst = std::max(worst, sector_spectra(n, q, r, v, k).phase_relation_error);
    rep.sector_relation = worst;
  }
  return rep;
}

CommandOutput cmd_verify(int n, int q, int r, bool identity_gate, bool with_sectors, const ExperimentConfig& cfg) {
  const auto v = experiment_gate(cfg, 0, identity_gate);
  const auto rep = verify_class(n, q, r, v, with_sectors);
  const int code = rep.passed() ? 0 : 1;
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "check,error,tolerance\n";
    os << "conjugation," << rep.conjugation << ',' << rep.tolerance << '\n';
    os << "root_identity," << rep.root_identity << ',' << rep.tolerance << '\n';
    os << "space_time," << rep.space_time << ',' << rep.tolerance << '\n';
    os << "translation," << rep.translation << ',' << rep.tolerance << '\n';
    if (rep.sector_relation) os << "sector_relation," << *rep.sector_relation << ',' << rep.sector_tolerance << '\n';
    return {os.str(), code};
  }
  json j{{"n", n},
         {"q", q},
         {"r", r},
         {"d", cfg.d},
         {"seed", cfg.master_seed},
         {"gate", identity_gate ? "identity" : "haar"},
         {"conjugation", rep.conjugation},
         {"root_identity", rep.root_identity},
         {"space_time", rep.space_time},
         {"translation", rep.translation}};
  if (rep.sector_relation) j["sector_relation"] = *rep.sector_relation;
  j["passed"] = rep.passed();
  return {dump(j), code};
}

EigenphaseSet spectrum_of(const SpectrumRequest& req, const ExperimentConfig& cfg) {
  const auto v = experiment_gate(cfg, 0, req.identity_gate);
  int n = req.n, q = req.q, r = req.r;
  std::optional<GateSequence> seq;
  if (req.sequence) {
    seq = GateSequence::parse(*req.sequence);
    const auto cls = classify(*seq);
    n = cls.n;
    q = cls.q;
    r = cls.r;
  } else if (!is_allowed(n, q, r)) {
    throw Error(Errc::InvalidClassParameters,
                "(q,r)=(" + std::to_string(q) + "," + std::to_string(r) + ") not allowed for N=" + std::to_string(n));
  }
  const OperatorWord word = req.root ? root_word(n, q, r) : circuit_word(seq ? *seq : canonical_fqr(n, q, r));
  if (req.k) {
    const auto basis = momentum_basis<double>(n, cfg.d, q, *req.k);
    return eigenphases(restrict_to_sector(word, v, basis));
  }
  return eigenphases(materialize(word, v));
}

std::string phases_csv(const EigenphaseSet& phases) {
  auto os = csv_stream();
  os << "index,phase\n";
  for (std::size_t i = 0; i < phases.phases.size(); ++i) os << i << ',' << phases.phases[i] << '\n';
  return os.str();
}

CommandOutput cmd_spectrum(const SpectrumRequest& req, const ExperimentConfig& cfg) {
  const auto ph = spectrum_of(req, cfg);
  if (cfg.format == Format::Csv) return {phases_csv(ph)};
  return {dump(json{{"dim", ph.dim()}, {"phases", ph.phases}})};
}

bool LsdResult::passed() const {
  bool ok = worst_mean_deviation <= 1e-9;
  if (request.max_root_cue) ok = ok && root_vs_cue.ks <= *request.max_root_cue;
  if (request.max_f_pm) ok = ok && f_vs_pm.ks <= *request.max_f_pm;
  if (request.min_f_cue) ok = ok && f_vs_cue.ks >= *request.min_f_cue;
  if (request.max_f_poisson) ok = ok && f_vs_poisson.ks <= *request.max_f_poisson;
  return ok;
}

LsdResult run_lsd(const LsdRequest& req, const ExperimentConfig& cfg) {
  if (!is_allowed(req.n, req.q, req.r))
    throw Error(Errc::InvalidClassParameters, "(q,r)=(" + std::to_string(req.q) + "," + std::to_string(req.r) +
                                                  ") not allowed for N=" + std::to_string(req.n));
  if (req.n_circuits < 1) throw Error(Errc::InvalidArgument, "need at least one circuit", req.n_circuits);
  if (req.bins < 1) throw Error(Errc::InvalidArgument, "bins must be positive", req.bins);
  if (!(req.s_max > 0)) throw Error(Errc::InvalidArgument, "s_max must be positive");

  LsdResult res;
  res.request = req;
  const auto basis = momentum_basis<double>(req.n, cfg.d, req.q, req.k);
  res.sector_dim = basis.dim();
  if (res.sector_dim < 2) throw Error(Errc::TooFewPhases, "sector too small for spacings", res.sector_dim);
  const auto f_word = circuit_word(canonical_fqr(req.n, req.q, req.r));
  const auto root = root_word(req.n, req.q, req.r);

  for (int i = 0; i < req.n_circuits; ++i) {
    const auto seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
    const auto v = haar_gate<double>(cfg.d, seed);
    const SpacingMeta meta{req.n, req.q, req.r, req.k, seed};
    const auto fs = spacings(eigenphases(restrict_to_sector(f_word, v, basis)), meta);
    const auto rs = spacings(eigenphases(restrict_to_sector(root, v, basis)), meta);
    res.worst_mean_deviation =
        std::max({res.worst_mean_deviation, std::abs(mean_of(fs.spacings) - 1.0), std::abs(mean_of(rs.spacings) - 1.0)});
    res.f_spacings.insert(res.f_spacings.end(), fs.spacings.begin(), fs.spacings.end());
    res.root_spacings.insert(res.root_spacings.end(), rs.spacings.begin(), rs.spacings.end());
  }
  res.f_vs_pm = ks_distance(res.f_spacings, ReferenceCurve::pm(req.q));
  res.f_vs_cue = ks_distance(res.f_spacings, ReferenceCurve::cue());
  res.root_vs_cue = ks_distance(res.root_spacings, ReferenceCurve::cue());
  res.f_vs_poisson = ks_distance(res.f_spacings, ReferenceCurve::poisson());
  return res;
}

std::string lsd_csv(const LsdResult& res) {
  const auto hf = histogram(res.f_spacings, res.request.bins, res.request.s_max);
  const auto hr = histogram(res.root_spacings, res.request.bins, res.request.s_max);
  const auto cue = ReferenceCurve::cue();
  const auto pm = ReferenceCurve::pm(res.request.q);
  auto os = csv_stream();
  os << "s_mid,hist_F,hist_root,cue,p_m\n";
  for (std::size_t i = 0; i < hf.bins(); ++i) {
    const double s = hf.mid(i);
    os << s << ',' << hf.density[i] << ',' << hr.density[i] << ',' << cue.density(s) << ',' << pm.density(s) << '\n';
  }
  return os.str();
}

std::string lsd_json(const LsdResult& res) {
  const auto& rq = res.request;
  json j{{"n", rq.n},
         {"q", rq.q},
         {"r", rq.r},
         {"k", rq.k},
         {"n_circuits", rq.n_circuits},
         {"sector_dim", res.sector_dim},
         {"pooled_spacings", res.f_spacings.size()},
         {"mean_spacing_max_dev", res.worst_mean_deviation},
         {"f_vs_pm", gof_json(res.f_vs_pm)},
         {"f_vs_cue", gof_json(res.f_vs_cue)},
         {"root_vs_cue", gof_json(res.root_vs_cue)},
         {"f_vs_poisson", gof_json(res.f_vs_poisson)},
         {"passed", res.passed()}};
  return dump(j);
}

CommandOutput cmd_rains(std::int64_t dim, int q, int n_samples, std::optional<double> max_ks,
                        const ExperimentConfig& cfg) {
  const auto rep = rains_mc(dim, q, n_samples, cfg.master_seed);
  const int code = max_ks && rep.ks > *max_ks ? 1 : 0;
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "ks,n,curve\n" << rep.ks << ',' << rep.n << ',' << rep.curve << '\n';
    return {os.str(), code};
  }
  return {dump(gof_json(rep)), code};
}

CommandOutput cmd_bruteforce(int n, bool force, const ExperimentConfig& cfg) {
  const auto classes = equivalence_classes_bruteforce(n, force);
  struct Row {
    std::size_t size;
    CanonicalClass cls;
    int fqr_members, fp_members;
    bool constant_c;
  };
  std::vector<GateSequence> fqrs, fps;
  for (const auto& qr : allowed_qr(n)) fqrs.push_back(canonical_fqr(n, qr.q, qr.r));
  for (int p = 1; p < n; ++p) fps.push_back(canonical_fp(n, p));
  std::vector<Row> rows;
  bool ok = static_cast<int>(classes.size()) == n - 1;
  for (const auto& members : classes) {
    Row row{members.size(), classify(members.front()), 0, 0, true};
    const int c0 = invariant_c(members.front());
    for (const auto& s : members) {
      if (invariant_c(s) != c0) row.constant_c = false;
      row.fqr_members += static_cast<int>(std::count(fqrs.begin(), fqrs.end(), s));
      row.fp_members += static_cast<int>(std::count(fps.begin(), fps.end(), s));
    }
    ok = ok && row.constant_c && row.fqr_members == 1 && row.fp_members == 1;
    rows.push_back(row);
  }
  const int code = ok ? 0 : 1;
  if (cfg.format == Format::Csv) {
    auto os = csv_stream();
    os << "size,q,r,C,fqr_members,fp_members,constant_c\n";
    for (const auto& row : rows)
      os << row.size << ',' << row.cls.q << ',' << row.cls.r << ',' << row.cls.p << ',' << row.fqr_members << ','
         << row.fp_members << ',' << (row.constant_c ? 1 : 0) << '\n';
    return {os.str(), code};
  }
  json arr = json::array();
  for (const auto& row : rows)
    arr.push_back({{"size", row.size},
                   {"q", row.cls.q},
                   {"r", row.cls.r},
                   {"C", row.cls.p},
                   {"fqr_members", row.fqr_members},
                   {"fp_members", row.fp_members},
                   {"constant_c", row.constant_c}});
  return {dump(json{{"n", n}, {"classes", rows.size()}, {"expected", n - 1}, {"passed", ok}, {"entries", arr}}), code};
}

}  // namespace floquet
