#include "floquet/experiment.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

namespace floquet {
namespace {

using nlohmann::json;

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

ExperimentConfig csv_config(std::uint64_t seed = 0) {
  ExperimentConfig cfg;
  cfg.master_seed = seed;
  cfg.format = Format::Csv;
  return cfg;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Classify, Examples) {
  const auto out = json::parse(cmd_classify("1,4,7,10,3,6,9,12,2,5,8,11", {}).body);
  EXPECT_EQ(out["q"], 3);
  EXPECT_EQ(out["r"], 2);
  EXPECT_EQ(out["n"], 12);
  const auto stair = json::parse(cmd_classify("1,2,3,4,5", {}).body);
  EXPECT_EQ(stair["q"], 5);
  EXPECT_EQ(stair["r"], 1);
  EXPECT_EQ(cmd_classify("1,4,3,6,5,2", csv_config()).body.substr(0, 8), "n,q,r,p\n");
  EXPECT_EQ(error_code([] { cmd_classify("1,1,2", {}); }), Errc::DuplicateGate);
}

TEST(Enumerate, RowCounts) {
  const auto six = json::parse(cmd_enumerate(6, {}).body);
  EXPECT_EQ(six["rows"].size(), 5u);
  for (int n = 2; n <= 300; ++n) EXPECT_EQ(line_count(cmd_enumerate(n, csv_config()).body), static_cast<std::size_t>(n));
  const auto rows = enumerate_rows(9);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows.back().q, 3);
  EXPECT_FALSE(rows.back().staircase);
}

TEST(Reduce, MovesReachCanonical) {
  const auto out = json::parse(cmd_reduce("1,4,3,6,5,2", {}).body);
  auto seq = GateSequence::parse("1,4,3,6,5,2");
  for (const auto& m : out["moves"]) {
    const std::string s = m;
    seq = apply_move(seq, s == "rotate" ? EquivalenceMove::rotate() : EquivalenceMove::swap(std::stoi(s.substr(5))));
  }
  EXPECT_EQ(seq.to_string(), out["canonical"].get<std::string>());
  EXPECT_EQ(out["p"], invariant_c(GateSequence::parse("1,4,3,6,5,2")));
}

TEST(Compress, Reports) {
  const auto out = json::parse(cmd_compress(canonical_fqr(10, 5, 2).to_string(), 2, {}).body);
  EXPECT_EQ(out["layers"], 5);
  EXPECT_EQ(out["filling"], "4/5");
  const auto steady = json::parse(cmd_compress(canonical_fqr(10, 5, 1).to_string(), 0, {}).body);
  EXPECT_EQ(steady["filling"], "2/5");
  EXPECT_EQ(line_count(cmd_compress("1,2,3,4", 1, csv_config()).body), 1u + 4u);
}

TEST(Verify, IdentityGateIsExact) {
  const auto rep = verify_class(8, 2, 1, LocalGate<double>::identity(2), true);
  EXPECT_EQ(rep.conjugation, 0.0);
  EXPECT_EQ(rep.root_identity, 0.0);
  EXPECT_EQ(rep.space_time, 0.0);
  EXPECT_EQ(rep.translation, 0.0);
  EXPECT_TRUE(rep.passed());
  const auto out = cmd_verify(6, 3, 2, false, true, {});
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_TRUE(json::parse(out.body)["passed"].get<bool>());
  EXPECT_EQ(error_code([] { cmd_verify(6, 3, 3, false, false, {}); }), Errc::InvalidClassParameters);
}

TEST(Spectrum, CsvAndSectors) {
  SpectrumRequest req;
  req.n = 6;
  req.q = 2;
  req.r = 1;
  const auto full = spectrum_of(req, {});
  EXPECT_EQ(full.dim(), 64u);
  std::vector<double> merged;
  for (int k = 0; k < 3; ++k) {
    req.k = k;
    const auto part = spectrum_of(req, {});
    merged.insert(merged.end(), part.phases.begin(), part.phases.end());
  }
  std::sort(merged.begin(), merged.end());
  EXPECT_LE(eigenphase_distance(merged, full.phases), 1e-9);
  const auto csv = cmd_spectrum(req, csv_config()).body;
  EXPECT_EQ(csv.substr(0, 12), "index,phase\n");
  req.sequence = "1,3,5,2,4,6";
  req.k = 0;
  EXPECT_EQ(spectrum_of(req, {}).dim(), 24u);
}

TEST(Lsd, SmallRunIsReproducible) {
  LsdRequest req;
  req.n = 8;
  req.q = 2;
  req.r = 1;
  req.n_circuits = 3;
  const auto a = run_lsd(req, csv_config(7));
  const auto b = run_lsd(req, csv_config(7));
  EXPECT_EQ(lsd_csv(a), lsd_csv(b));
  EXPECT_EQ(lsd_json(a), lsd_json(b));
  EXPECT_EQ(a.sector_dim, 70);
  EXPECT_EQ(a.f_spacings.size(), 210u);
  EXPECT_LE(a.worst_mean_deviation, 1e-9);
  const auto csv = lsd_csv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s_mid,hist_F,hist_root,cue,p_m");
  EXPECT_EQ(line_count(csv), 41u);
  const auto j = json::parse(lsd_json(a));
  EXPECT_EQ(j["f_vs_pm"]["curve"], "p_m(2)");
  EXPECT_NE(lsd_csv(run_lsd(req, csv_config(8))), lsd_csv(a));
}

TEST(Lsd, ThresholdsDriveExitStatus) {
  LsdRequest req;
  req.n = 6;
  req.q = 2;
  req.r = 1;
  req.n_circuits = 2;
  req.max_root_cue = 0.0;
  EXPECT_FALSE(run_lsd(req, {}).passed());
  req.max_root_cue.reset();
  EXPECT_TRUE(run_lsd(req, {}).passed());
  req.k = 3;
  EXPECT_EQ(error_code([&] { run_lsd(req, {}); }), Errc::InvalidSector);
}

TEST(Lsd, HighQStaircaseIsPoissonLike) {
  LsdRequest req;
  req.n = 10;
  req.q = 10;
  req.r = 3;
  req.n_circuits = 5;
  const auto res = run_lsd(req, csv_config(11));
  EXPECT_EQ(res.sector_dim, 1024);
  EXPECT_LE(res.f_vs_poisson.ks, 0.05);
}

TEST(Rains, CommandIsDeterministic) {
  const auto a = cmd_rains(40, 2, 20, std::nullopt, {});
  const auto b = cmd_rains(40, 2, 20, std::nullopt, {});
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(a.exit_code, 0);
  const auto j = json::parse(a.body);
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(j["n"], 800);
  EXPECT_EQ(cmd_rains(40, 2, 20, 0.0, {}).exit_code, 1);
  EXPECT_EQ(error_code([] { cmd_rains(10, 10, 5, std::nullopt, {}); }), Errc::InvalidQ);
}

TEST(Bruteforce, ClassCounts) {
  const auto six = json::parse(cmd_bruteforce(6, false, {}).body);
  EXPECT_EQ(six["classes"], 5);
  EXPECT_TRUE(six["passed"].get<bool>());
  const auto eight = cmd_bruteforce(8, false, {});
  EXPECT_EQ(eight.exit_code, 0);
  EXPECT_EQ(json::parse(eight.body)["classes"], 7);
  EXPECT_EQ(error_code([] { cmd_bruteforce(9, false, {}); }), Errc::TooLarge);
}

TEST(Seeds, GatePerCircuitIndex) {
  ExperimentConfig cfg;
  cfg.master_seed = 42;
  EXPECT_EQ(experiment_gate(cfg, 3).matrix(), experiment_gate(cfg, 3).matrix());
  EXPECT_NE(experiment_gate(cfg, 3).matrix(), experiment_gate(cfg, 4).matrix());
  EXPECT_EQ(experiment_gate(cfg, 3, true).matrix(), LocalGate<double>::identity(2).matrix());
}

}  // namespace
}  // namespace floquet
