#pragma once

// Level spacing statistics on the unit circle.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "floquet/unitary_engine.hpp"

namespace floquet {

struct SpacingMeta {
  int n = 0;
  int q = 0;
  int r = 0;
  int k = 0;
  std::uint64_t seed = 0;
};

/// Nearest-neighbour spacings scaled by dim / 2pi, wraparound included, so
/// there are exactly `source_dim` of them and their mean is 1.
struct SpacingSample {
  std::vector<double> spacings;
  std::int64_t source_dim = 0;
  SpacingMeta meta;
};

/// TooFewPhases for fewer than two phases.
SpacingSample spacings(const EigenphaseSet& phases, SpacingMeta meta = {});

/// CUE Wigner surmise (32/pi^2) s^2 exp(-4 s^2 / pi).
double wigner_cue(double s);
double poisson(double s);

/// R(y) = int_0^inf P(x+y) dx and D(y) = int_0^inf x P(x+y) dx for the CUE
/// surmise, by adaptive Gauss-Kronrod quadrature.
double r_of(double y);
double d_of(double y);

/// Spacing density of a direct sum of m independent equally sized CUE blocks.
double p_m(double s, int m);

/// A reference spacing density together with its CDF.
class ReferenceCurve {
 public:
  enum class Kind { CueSurmise, Poisson, Pm };

  static ReferenceCurve cue();
  static ReferenceCurve poisson();
  static ReferenceCurve pm(int m);

  Kind kind() const { return kind_; }
  int m() const { return m_; }
  /// "cue", "poisson", or "p_m(3)".
  std::string name() const;

  double density(double s) const;
  double cdf(double s) const;

 private:
  struct Table;
  ReferenceCurve(Kind kind, int m);

  Kind kind_;
  int m_;
  std::shared_ptr<const Table> table_;
};

struct GofReport {
  double ks = 0.0;
  std::int64_t n = 0;
  std::string curve;
};

/// {"ks":..,"n":..,"curve":..}
std::string to_json(const GofReport& report);

/// One-sample Kolmogorov-Smirnov distance. EmptySample if there is no data.
GofReport ks_distance(std::span<const double> sample, const ReferenceCurve& curve);
GofReport ks_distance(const SpacingSample& sample, const ReferenceCurve& curve);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
  double s_max = 0.0;
  std::vector<double> density;

  std::size_t bins() const { return density.size(); }
  double width() const { return s_max / static_cast<double>(density.size()); }
  double mid(std::size_t i) const { return (static_cast<double>(i) + 0.5) * width(); }
};

/// Density over [0, s_max] normalized by the total count, so the area equals
/// the fraction of samples that fall in range.
Histogram histogram(std::span<const double> samples, int bin_count = 40, double s_max = 4.0);

/// Eigenphases of one Haar unitary of size dim.
EigenphaseSet cue_spectrum_sample(std::int64_t dim, std::uint64_t seed);

/// ceil((dim - j) / q) for j = 0..q-1.
std::vector<std::int64_t> rains_block_sizes(std::int64_t dim, int q);

struct RainsSamples {
  std::vector<double> power;   // spacings of M^q
  std::vector<double> blocks;  // spacings of the union of q smaller spectra
};

/// Pooled spacing samples for the Rains comparison. InvalidQ if q >= dim.
RainsSamples rains_samples(std::int64_t dim, int q, int n_samples, std::uint64_t seed);

/// Two-sample KS distance between the two Rains samples.
GofReport rains_mc(std::int64_t dim, int q, int n_samples, std::uint64_t seed);

}  // namespace floquet
