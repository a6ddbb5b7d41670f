#include "floquet/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "floquet/rng.hpp"
#include "json.hpp"

namespace floquet {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kQuadTol = 1e-10;

template <typename F>
double integrate_to_inf(F f, double from) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, from, std::numeric_limits<double>::infinity(), 20, kQuadTol);
}

// The densities only need R and D; D' = -R and R' = -P, so both are stored
// with exact derivatives and read back by cubic Hermite interpolation.
struct GapTable {
  static constexpr double kStep = 0.002;
  static constexpr double kYMax = 6.0;
  std::vector<double> r, d;

  GapTable() {
    const auto count = static_cast<std::size_t>(std::lround(kYMax / kStep)) + 1;
    r.resize(count);
    d.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double y = static_cast<double>(i) * kStep;
      r[i] = r_of(y);
      d[i] = d_of(y);
    }
  }

  static const GapTable& get() {
    static const GapTable table;
    return table;
  }

  static double hermite(double f0, double f1, double df0, double df1, double t, double h) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * df0 + (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * df1;
  }

  // {R(y), D(y)}; both are below 1e-19 past kYMax and reported as zero there.
  std::pair<double, double> at(double y) const {
    if (y >= kYMax) return {0.0, 0.0};
    const double pos = y / kStep;
    const auto i = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(i);
    const double y0 = static_cast<double>(i) * kStep, y1 = y0 + kStep;
    const double rr = hermite(r[i], r[i + 1], -wigner_cue(y0), -wigner_cue(y1), t, kStep);
    const double dd = hermite(d[i], d[i + 1], -r[i], -r[i + 1], t, kStep);
    return {rr, dd};
  }
};

// P_m from P, R, D at y = s/m, written without dividing by D.
double superposition_density(double y, int m, double r, double d) {
  const double inv = 1.0 / m;
  double out = inv * std::pow(d, m - 1) * wigner_cue(y);
  if (m >= 2) out += (1.0 - inv) * std::pow(d, m - 2) * r * r;
  return out;
}

}  // namespace

SpacingSample spacings(const EigenphaseSet& phases, SpacingMeta meta) {
  const std::size_t n = phases.phases.size();
  if (n < 2) throw Error(Errc::TooFewPhases, "need at least two eigenphases", static_cast<long long>(n));
  SpacingSample out;
  out.source_dim = static_cast<std::int64_t>(n);
  out.meta = meta;
  out.spacings.resize(n);
  const double scale = static_cast<double>(n) / kTwoPi;
  const auto& p = phases.phases;
  for (std::size_t j = 0; j + 1 < n; ++j) out.spacings[j] = (p[j + 1] - p[j]) * scale;
  out.spacings[n - 1] = (p[0] + kTwoPi - p[n - 1]) * scale;
  return out;
}

double wigner_cue(double s) {
  if (s < 0) return 0.0;
  return 32.0 / (kPi * kPi) * s * s * std::exp(-4.0 * s * s / kPi);
}

double poisson(double s) { return s < 0 ? 0.0 : std::exp(-s); }

double r_of(double y) {
  return integrate_to_inf([](double x) { return wigner_cue(x); }, y);
}

double d_of(double y) {
  return integrate_to_inf([y](double x) { return (x - y) * wigner_cue(x); }, y);
}

double p_m(double s, int m) {
  if (m < 1) throw Error(Errc::InvalidArgument, "m must be at least 1", m);
  if (s < 0) return 0.0;
  const double y = s / m;
  if (m == 1) return wigner_cue(y);
  return superposition_density(y, m, r_of(y), d_of(y));
}

struct ReferenceCurve::Table {
  const GapTable* gaps;
};

ReferenceCurve::ReferenceCurve(Kind kind, int m) : kind_(kind), m_(m) {
  if (kind_ != Kind::Poisson) table_ = std::make_shared<const Table>(Table{&GapTable::get()});
}

ReferenceCurve ReferenceCurve::cue() { return ReferenceCurve(Kind::CueSurmise, 1); }
ReferenceCurve ReferenceCurve::poisson() { return ReferenceCurve(Kind::Poisson, 0); }
ReferenceCurve ReferenceCurve::pm(int m) {
  if (m < 1) throw Error(Errc::InvalidArgument, "m must be at least 1", m);
  return ReferenceCurve(Kind::Pm, m);
}

std::string ReferenceCurve::name() const {
  switch (kind_) {
    case Kind::CueSurmise:
      return "cue";
    case Kind::Poisson:
      return "poisson";
    case Kind::Pm:
      return "p_m(" + std::to_string(m_) + ")";
  }
  return "";
}

double ReferenceCurve::density(double s) const {
  if (s < 0) return 0.0;
  if (kind_ == Kind::Poisson) return std::exp(-s);
  if (m_ == 1) return wigner_cue(s);
  const double y = s / m_;
  const auto [r, d] = table_->gaps->at(y);
  return superposition_density(y, m_, r, d);
}

// -E'(s) = D^{m-1}(s/m) R(s/m) with E(s) = D(s/m)^m the gap probability, and
// P_m = E'', so the CDF is 1 + E'(s).
double ReferenceCurve::cdf(double s) const {
  if (s <= 0) return 0.0;
  if (kind_ == Kind::Poisson) return -std::expm1(-s);
  const double y = s / m_;
  const auto [r, d] = table_->gaps->at(y);
  return 1.0 - std::pow(d, m_ - 1) * r;
}

std::string to_json(const GofReport& report) {
  nlohmann::ordered_json j;
  j["ks"] = report.ks;
  j["n"] = report.n;
  j["curve"] = report.curve;
  return j.dump();
}

GofReport ks_distance(std::span<const double> sample, const ReferenceCurve& curve) {
  if (sample.empty()) throw Error(Errc::EmptySample, "no samples");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = curve.cdf(sorted[i]);
    sup = std::max({sup, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {sup, static_cast<std::int64_t>(sorted.size()), curve.name()};
}

GofReport ks_distance(const SpacingSample& sample, const ReferenceCurve& curve) {
  return ks_distance(std::span<const double>(sample.spacings), curve);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "no samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return sup;
}

Histogram histogram(std::span<const double> samples, int bin_count, double s_max) {
  if (bin_count < 1) throw Error(Errc::InvalidArgument, "bin_count must be positive", bin_count);
  if (!(s_max > 0)) throw Error(Errc::InvalidArgument, "s_max must be positive");
  Histogram h;
  h.s_max = s_max;
  h.density.assign(static_cast<std::size_t>(bin_count), 0.0);
  if (samples.empty()) return h;
  for (double s : samples) {
    if (s < 0 || s > s_max) continue;
    auto bin = static_cast<std::size_t>(s / s_max * bin_count);
    h.density[std::min(bin, h.density.size() - 1)] += 1.0;
  }
  const double norm = 1.0 / (static_cast<double>(samples.size()) * h.width());
  for (double& v : h.density) v *= norm;
  return h;
}

EigenphaseSet cue_spectrum_sample(std::int64_t dim, std::uint64_t seed) {
  if (dim < 1) throw Error(Errc::InvalidArgument, "dim must be positive", dim);
  std::mt19937_64 rng(seed);
  return eigenphases(haar_unitary<double>(dim, rng));
}

std::vector<std::int64_t> rains_block_sizes(std::int64_t dim, int q) {
  if (q < 1) throw Error(Errc::InvalidQ, "q must be positive", q);
  std::vector<std::int64_t> sizes;
  for (int j = 0; j < q; ++j) sizes.push_back((dim - j + q - 1) / q);
  return sizes;
}

RainsSamples rains_samples(std::int64_t dim, int q, int n_samples, std::uint64_t seed) {
  if (q < 1 || q >= dim)
    throw Error(Errc::InvalidQ, "q=" + std::to_string(q) + " must satisfy 1 <= q < dim=" + std::to_string(dim), q);
  if (n_samples < 1) throw Error(Errc::InvalidArgument, "n_samples must be positive", n_samples);
  const auto sizes = rains_block_sizes(dim, q);
  RainsSamples out;
  out.power.reserve(static_cast<std::size_t>(dim * n_samples));
  out.blocks.reserve(static_cast<std::size_t>(dim * n_samples));
  for (int i = 0; i < n_samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const CMatrix<double> m = haar_unitary<double>(dim, rng);
    CMatrix<double> mq = m;
    for (int p = 1; p < q; ++p) mq = (m * mq).eval();
    const auto ps = spacings(eigenphases(mq));
    out.power.insert(out.power.end(), ps.spacings.begin(), ps.spacings.end());

    EigenphaseSet merged;
    for (auto size : sizes) {
      const auto part = eigenphases(haar_unitary<double>(size, rng));
      merged.phases.insert(merged.phases.end(), part.phases.begin(), part.phases.end());
    }
    std::sort(merged.phases.begin(), merged.phases.end());
    const auto bs = spacings(merged);
    out.blocks.insert(out.blocks.end(), bs.spacings.begin(), bs.spacings.end());
  }
  return out;
}

GofReport rains_mc(std::int64_t dim, int q, int n_samples, std::uint64_t seed) {
  const auto s = rains_samples(dim, q, n_samples, seed);
  return {ks_two_sample(s.power, s.blocks), static_cast<std::int64_t>(s.power.size()),
          "rains(q=" + std::to_string(q) + ")"};
}

}  // namespace floquet
