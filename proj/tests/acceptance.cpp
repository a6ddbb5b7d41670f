// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "floquet/circuit_algebra.hpp"
#include "floquet/experiment.hpp"
#include "floquet/rng.hpp"
#include "floquet/spectral_stats.hpp"
#include "floquet/unitary_engine.hpp"

using namespace floquet;

namespace {

enum class Verdict { Pass, Warn, Fail };

struct Outcome {
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int failures = 0;
int warnings = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {Verdict::Fail, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s && out.verdict != Verdict::Fail) {
    out.verdict = Verdict::Fail;
    out.detail += "; over time budget " + fmt(budget_s) + " s";
  }
  const char* tag = out.verdict == Verdict::Pass ? "PASS" : out.verdict == Verdict::Warn ? "WARN" : "FAIL";
  if (out.verdict == Verdict::Fail) ++failures;
  if (out.verdict == Verdict::Warn) ++warnings;
  std::printf("%s %2d %-28s %s [%.1f s]\n", tag, id, name.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome check(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

using QrSet = std::set<std::pair<int, int>>;

// Table 1 of the paper, transcribed.
const std::vector<std::pair<int, QrSet>> kTable1 = {
    {6, {{6, 1}, {6, 5}, {2, 1}, {3, 1}, {3, 2}}},
    {7, {{7, 1}, {7, 2}, {7, 3}, {7, 4}, {7, 5}, {7, 6}}},
    {8, {{8, 1}, {8, 3}, {8, 5}, {8, 7}, {2, 1}, {4, 1}, {4, 3}}},
    {9, {{9, 1}, {9, 2}, {9, 4}, {9, 5}, {9, 7}, {9, 8}, {3, 1}, {3, 2}}},
    {10, {{10, 1}, {10, 3}, {10, 7}, {10, 9}, {2, 1}, {5, 1}, {5, 2}, {5, 3}, {5, 4}}},
};

Outcome criterion_table1() {
  ExperimentConfig cfg;
  cfg.format = Format::Csv;
  for (const auto& [n, want] : kTable1) {
    std::istringstream in(cmd_enumerate(n, cfg).body);
    std::string line;
    std::getline(in, line);  // header
    QrSet got;
    while (std::getline(in, line)) {
      int q = 0, r = 0;
      if (std::sscanf(line.c_str(), "%d,%d", &q, &r) != 2) return check(false, "unparsable row: " + line);
      got.insert({q, r});
    }
    if (got != want) return check(false, "mismatch at N=" + std::to_string(n));
  }
  return check(true, "N=6..10 match Table 1");
}

Outcome criterion_class_counting() {
  const auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 10000; ++n)
    if (static_cast<int>(allowed_qr(n).size()) != n - 1) return check(false, "|Q_N| != N-1 at N=" + std::to_string(n));
  const double q_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (q_secs >= 1.0) return check(false, "|Q_N| sweep took " + fmt(q_secs) + " s");

  std::string sizes;
  for (int n = 4; n <= 8; ++n) {
    const auto t1 = std::chrono::steady_clock::now();
    const auto classes = equivalence_classes_bruteforce(n);
    if (static_cast<int>(classes.size()) != n - 1)
      return check(false, std::to_string(classes.size()) + " classes at N=" + std::to_string(n));
    std::set<GateSequence> fqrs, fps;
    for (const auto& qr : allowed_qr(n)) fqrs.insert(canonical_fqr(n, qr.q, qr.r));
    for (int p = 1; p < n; ++p) fps.insert(canonical_fp(n, p));
    for (const auto& members : classes) {
      int nq = 0, np = 0;
      const int c0 = invariant_c(members.front());
      for (const auto& s : members) {
        nq += static_cast<int>(fqrs.count(s));
        np += static_cast<int>(fps.count(s));
        if (invariant_c(s) != c0) return check(false, "C not constant in a class at N=" + std::to_string(n));
      }
      if (nq != 1 || np != 1) return check(false, "class without unique F_qr/F_p at N=" + std::to_string(n));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    if (n == 8 && secs >= 60.0) return check(false, "N=8 brute force took " + fmt(secs) + " s");
    sizes += (sizes.empty() ? "" : ",") + std::to_string(classes.size());
  }
  return check(true, "|Q_N|=N-1 for N<=1e4 in " + fmt(q_secs) + " s; classes N=4..8: " + sizes);
}

Outcome criterion_reduction() {
  std::mt19937_64 rng(20260101);
  long long total_moves = 0;
  for (int n = 4; n <= 10; ++n) {
    std::vector<int> order(n);
    for (int trial = 0; trial < 10000; ++trial) {
      std::iota(order.begin(), order.end(), 1);
      std::shuffle(order.begin(), order.end(), rng);
      auto seq = GateSequence::validate(order, n);
      const int c = invariant_c(seq);
      const auto red = reduce_to_fp(seq);
      for (const auto& m : red.moves) seq = apply_move(seq, m);
      total_moves += static_cast<long long>(red.moves.size());
      if (red.p != c || seq != canonical_fp(n, c))
        return check(false, "replay mismatch at N=" + std::to_string(n) + " for " + GateSequence::validate(order, n).to_string());
    }
  }
  return check(true, "7e4 sequences replayed to F_C (" + std::to_string(total_moves) + " moves)");
}

Outcome criterion_identities() {
  double worst = 0.0;
  int checks = 0;
  for (int n : {6, 8, 10, 12}) {
    for (int g = 0; g < 5; ++g) {
      const auto v = haar_gate<double>(2, derive_seed(4000 + n, g));
      worst = std::max(worst, verify_conjugation(n, v));
      ++checks;
      for (const auto& qr : allowed_qr(n)) {
        worst = std::max({worst, verify_root_identity(n, qr.q, qr.r, v), verify_space_time(n, qr.q, qr.r, v),
                          verify_translation_sym(n, qr.q, qr.r, v)});
        checks += 3;
      }
    }
  }
  return check(worst <= 1e-11, std::to_string(checks) + " checks, max error " + fmt(worst) + " (<= 1e-11)");
}

Outcome criterion_spectral_equivalence() {
  std::mt19937_64 rng(555);
  double worst_same = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<int> order(6);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    const auto seq = GateSequence::validate(order, 6);
    const auto cls = classify(seq);
    const auto v = haar_gate<double>(2, derive_seed(5000, i));
    worst_same = std::max(worst_same, spectral_equivalence_check(seq, canonical_fqr(6, cls.q, cls.r), v));
  }
  const auto v = haar_gate<double>(2, derive_seed(5000, 99));
  CMatrix<double> swap = CMatrix<double>::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  const double asym = max_abs_diff(swap * v.matrix() * swap, v.matrix());
  const double apart = spectral_equivalence_check(canonical_fqr(6, 3, 1), canonical_fqr(6, 3, 2), v);
  return check(worst_same <= 1e-9 && apart > 1e-3 && asym > 1e-2,
               "same-class max " + fmt(worst_same) + " (<= 1e-9); (3,1) vs (3,2) " + fmt(apart) + " (> 1e-3)");
}

Outcome criterion_sectors() {
  for (auto [n, q] : {std::pair{8, 2}, {12, 3}}) {
    const auto dims = sector_dims(n, 2, q);
    if (std::accumulate(dims.begin(), dims.end(), std::int64_t{0}) != (std::int64_t{1} << n))
      return check(false, "sector dims do not sum to 2^N at N=" + std::to_string(n));
  }
  const auto d0 = momentum_basis<double>(12, 2, 3, 0).dim();
  if (d0 != 1044) return check(false, "dim_0(12,3) = " + std::to_string(d0));
  const auto v = haar_gate<double>(2, derive_seed(6000, 0));
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, sector_spectra(12, 3, 2, v, k).phase_relation_error);
  return check(worst <= 1e-8, "dims sum to 2^N; dim_0=1044; phase relation max " + fmt(worst) + " (<= 1e-8)");
}

Outcome criterion_lsd() {
  ExperimentConfig cfg;
  cfg.master_seed = 2026;
  LsdRequest req;  // N=12, (3,2), k=0
  req.n_circuits = 10;
  const auto res = run_lsd(req, cfg);
  const double root_cue = res.root_vs_cue.ks, f_pm = res.f_vs_pm.ks, f_cue = res.f_vs_cue.ks;
  std::string detail = std::to_string(req.n_circuits) + " circuits, dim " + std::to_string(res.sector_dim) +
                       ": KS(root,CUE)=" + fmt(root_cue) + " (<= 0.02), KS(F,P3)=" + fmt(f_pm) +
                       " (<= 0.03), KS(F,CUE)=" + fmt(f_cue) + " (>= 0.1), mean dev " + fmt(res.worst_mean_deviation);
  const bool within = root_cue <= 0.02 && f_pm <= 0.03 && f_cue >= 0.1;
  const bool within_2x = root_cue <= 0.04 && f_pm <= 0.06 && f_cue >= 0.05;
  if (res.worst_mean_deviation > 1e-9 || !within_2x) return {Verdict::Fail, detail};
  return {within ? Verdict::Pass : Verdict::Warn, detail};
}

template <typename F>
double integrate(F f) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                                       25, 1e-11);
}

Outcome criterion_appendix_b() {
  double p1 = 0.0;
  for (int i = 0; i <= 1000; ++i) p1 = std::max(p1, std::abs(p_m(0.005 * i, 1) - wigner_cue(0.005 * i)));
  double norm = 0.0, mean = 0.0;
  for (int m : {2, 3, 5, 10}) {
    norm = std::max(norm, std::abs(integrate([m](double s) { return p_m(s, m); }) - 1.0));
    mean = std::max(mean, std::abs(integrate([m](double s) { return s * p_m(s, m); }) - 1.0));
  }
  double at0 = 0.0;
  for (int m = 1; m <= 20; ++m) at0 = std::max(at0, std::abs(p_m(0.0, m) - (1.0 - 1.0 / m)));
  return check(p1 <= 1e-10 && norm <= 1e-6 && mean <= 1e-6 && at0 <= 1e-8,
               "|P_1-P| " + fmt(p1) + ", |int-1| " + fmt(norm) + ", |mean-1| " + fmt(mean) + ", |P_m(0)-(1-1/m)| " +
                   fmt(at0));
}

Outcome criterion_rains() {
  const auto b2 = rains_block_sizes(120, 2), b3 = rains_block_sizes(120, 3);
  const bool sums = std::accumulate(b2.begin(), b2.end(), std::int64_t{0}) == 120 &&
                    std::accumulate(b3.begin(), b3.end(), std::int64_t{0}) == 120;
  const auto r2 = rains_mc(120, 2, 200, 9002);
  const auto r3 = rains_mc(120, 3, 200, 9003);
  return check(sums && r2.ks <= 0.02 && r3.ks <= 0.02,
               "KS q=2 " + fmt(r2.ks) + ", q=3 " + fmt(r3.ks) + " (<= 0.02, n=" + std::to_string(r2.n) +
                   "); block sizes sum to 120");
}

Outcome criterion_filling() {
  const auto a = compress(canonical_fqr(10, 5, 2), 2);
  const auto b = compress(canonical_fqr(10, 5, 1), 1);
  const auto c = compress(canonical_fqr(10, 2, 1), 1);
  const bool ok = a.layers.size() == 5 && a.filling == Rational::make(8, 10) && b.filling == Rational::make(4, 10) &&
                  c.filling == Rational::make(1, 1);
  return check(ok, "(5,2) t=2: " + std::to_string(a.layers.size()) + " layers, " + fmt(a.filling.value()) +
                       "; (5,1): " + fmt(b.filling.value()) + "; (2,1): " + fmt(c.filling.value()));
}

}  // namespace

int main() {
  run(1, "Table 1 reproduction", 1.0, criterion_table1);
  run(2, "Class counting", 120.0, criterion_class_counting);
  run(3, "Reduction oracle", 30.0, criterion_reduction);
  run(4, "Operator identities", 300.0, criterion_identities);
  run(5, "Spectral equivalence", 600.0, criterion_spectral_equivalence);
  run(6, "Sector structure", 600.0, criterion_sectors);
  run(7, "Level statistics N=12", 600.0, criterion_lsd);
  run(8, "Appendix B consistency", 600.0, criterion_appendix_b);
  run(9, "Rains theorem MC", 120.0, criterion_rains);
  run(10, "Filling fractions", 600.0, criterion_filling);
  std::printf("%d criteria, %d failed, %d warned\n", 10, failures, warnings);
  return failures == 0 ? 0 : 1;
}
