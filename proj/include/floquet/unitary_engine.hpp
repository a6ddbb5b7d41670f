#pragma once

// Dense operators for simple circuits on a periodic chain of N qudits.
//
// Basis states are base-d digit strings (s_1 ... s_N) with site 1 the most
// significant digit. The translation S maps (s_1 s_2 ... s_N) to
// (s_2 ... s_N s_1), which makes V_{i+1,i+2} = S^-1 V_{i,i+1} S hold with the
// gate's first tensor factor on site i. Gate g acts on sites (g, g+1 mod N);
// for g = N that is the wrapped pair (N, 1), first factor on site N.
//
// Everything is templated on the real scalar; double is the working type and
// the only one LAPACK accelerates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "floquet/circuit_algebra.hpp"
#include "floquet/error.hpp"

namespace floquet {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CRowMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using CSparse = Eigen::SparseMatrix<std::complex<Real>>;

namespace tolerance {
inline constexpr double kGateUnitarity = 1e-12;
inline constexpr double kProductUnitarity = 1e-10;
inline constexpr double kSpectrumModulus = 1e-8;
inline constexpr double kBlockLeakage = 1e-8;
inline constexpr double kSectorCommutation = 1e-10;
}  // namespace tolerance

inline constexpr std::int64_t kDefaultDimensionCap = std::int64_t{1} << 20;

/// d^N, or DimensionOverflow when it exceeds `cap`.
inline std::int64_t hilbert_dim(int n_sites, int d, std::int64_t cap = kDefaultDimensionCap) {
  if (n_sites < 2 || d < 2) throw Error(Errc::InvalidArgument, "need N >= 2 and d >= 2");
  std::int64_t dim = 1;
  for (int i = 0; i < n_sites; ++i) {
    dim *= d;
    if (dim > cap)
      throw Error(Errc::DimensionOverflow,
                  std::to_string(d) + "^" + std::to_string(n_sites) + " exceeds the cap " + std::to_string(cap));
  }
  return dim;
}

/// max |U^dagger U - I|.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  const Plain g = u.adjoint() * u;
  return static_cast<double>((g - Plain::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff());
}

/// max entrywise |A - B|.
template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::InvalidArgument, "shape mismatch");
  if (a.size() == 0) return 0.0;
  return static_cast<double>((a - b).cwiseAbs().maxCoeff());
}

/// The two-site gate V as a d^2 x d^2 unitary, index a*d + b with a the digit
/// of the left site.
template <typename Real = double>
class LocalGate {
 public:
  LocalGate(int d, CMatrix<Real> matrix) : d_(d), matrix_(std::move(matrix)) {
    if (d < 2) throw Error(Errc::InvalidArgument, "local dimension must be at least 2", d);
    if (matrix_.rows() != d * d || matrix_.cols() != d * d)
      throw Error(Errc::InvalidArgument, "gate must be d^2 x d^2");
    const double defect = unitarity_defect(matrix_);
    if (!(defect <= tolerance::kGateUnitarity))
      throw Error(Errc::NonUnitaryGate, "gate unitarity defect " + std::to_string(defect));
  }

  static LocalGate identity(int d) { return LocalGate(d, CMatrix<Real>::Identity(d * d, d * d)); }

  int d() const { return d_; }
  const CMatrix<Real>& matrix() const { return matrix_; }

 private:
  int d_;
  CMatrix<Real> matrix_;
};

/// Haar-random dim x dim unitary: Ginibre sample, QR, then the phases of R's
/// diagonal folded into Q so the result is exactly Haar distributed.
template <typename Real = double, typename Engine>
CMatrix<Real> haar_unitary(Eigen::Index dim, Engine& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  CMatrix<Real> z(dim, dim);
  const Real scale = Real(1) / std::sqrt(Real(2));
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      z(i, j) = std::complex<Real>(re, im) * scale;
    }
  Eigen::HouseholderQR<CMatrix<Real>> qr(z);
  CMatrix<Real> q = qr.householderQ();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::complex<Real> rjj = qr.matrixQR()(j, j);
    const Real mag = std::abs(rjj);
    q.col(j) *= mag > Real(0) ? rjj / mag : std::complex<Real>(1);
  }
  return q;
}

template <typename Real = double>
LocalGate<Real> haar_gate(int d, std::uint64_t seed) {
  if (d < 2) throw Error(Errc::InvalidArgument, "local dimension must be at least 2", d);
  std::mt19937_64 rng(seed);
  return LocalGate<Real>(d, haar_unitary<Real>(d * d, rng));
}

namespace detail {

// Digit strides of a chain: site j (1-based) has stride d^(N-j).
struct ChainLayout {
  int n = 0;
  int d = 0;
  std::int64_t dim = 0;
  std::vector<std::int64_t> stride;  // index 1..N

  ChainLayout(int n_sites, int local_dim, std::int64_t cap = kDefaultDimensionCap)
      : n(n_sites), d(local_dim), dim(hilbert_dim(n_sites, local_dim, cap)), stride(n_sites + 1, 1) {
    for (int j = n - 1; j >= 1; --j) stride[j] = stride[j + 1] * d;
  }

  int digit(std::int64_t label, int site) const { return static_cast<int>((label / stride[site]) % d); }

  // Label of S^power applied to `label`: digits rotated left by `power`.
  std::int64_t shifted(std::int64_t label, int power) const {
    int p = power % n;
    if (p < 0) p += n;
    if (p == 0) return label;
    const std::int64_t high = stride[p];  // d^(N-p)
    return (label % high) * (dim / high) + label / high;
  }
};

}  // namespace detail

/// One factor of an operator word.
struct OperatorFactor {
  enum class Kind : std::uint8_t { Gate, Shift };
  Kind kind;
  /// Gate: site i of V_{i,i+1}. Shift: exponent of S (any sign).
  int value;
};

/// A product of gates and translations. Factors are listed in time order, so
/// the word [A, B, C] is the operator C B A.
class OperatorWord {
 public:
  explicit OperatorWord(int n_sites) : n_(n_sites) {
    if (n_sites < 2) throw Error(Errc::InvalidArgument, "N must be at least 2", n_sites);
  }

  OperatorWord& gate(int site) {
    if (site < 1 || site > n_) throw Error(Errc::OutOfRange, "gate site outside 1..N", site);
    factors_.push_back({OperatorFactor::Kind::Gate, site});
    return *this;
  }
  OperatorWord& shift(int power) {
    factors_.push_back({OperatorFactor::Kind::Shift, power});
    return *this;
  }
  /// Appends `later`, which then acts after everything already here.
  OperatorWord& then(const OperatorWord& later) {
    if (later.n_ != n_) throw Error(Errc::InvalidArgument, "word sizes differ");
    factors_.insert(factors_.end(), later.factors_.begin(), later.factors_.end());
    return *this;
  }
  OperatorWord power(int times) const {
    OperatorWord out(n_);
    for (int t = 0; t < times; ++t) out.then(*this);
    return out;
  }

  int n_sites() const { return n_; }
  std::span<const OperatorFactor> factors() const { return factors_; }

 private:
  int n_;
  std::vector<OperatorFactor> factors_;
};

/// The Floquet operator of a sequence: gate i_1 first (rightmost).
inline OperatorWord circuit_word(const GateSequence& seq) {
  OperatorWord w(seq.n_sites());
  for (int g : seq.order()) w.gate(g);
  return w;
}

/// The root S^r f_1, with f_1 the layer of gates 1, 1+q, 1+2q, ...
inline OperatorWord root_word(int n, int q, int r) {
  if (!is_allowed(n, q, r))
    throw Error(Errc::InvalidClassParameters,
                "(q,r)=(" + std::to_string(q) + "," + std::to_string(r) + ") not allowed for N=" + std::to_string(n));
  OperatorWord w(n);
  for (int i = 0; i < n / q; ++i) w.gate(1 + i * q);
  w.shift(r);
  return w;
}

/// S^-power W S^power.
inline OperatorWord conjugate_by_shift(const OperatorWord& w, int power) {
  OperatorWord out(w.n_sites());
  out.shift(power).then(w).shift(-power);
  return out;
}

/// A word compiled against a chain layout: per-site row groups and per-power
/// shift permutations are built once and reused for every operand.
template <typename Real>
class WordKernel {
 public:
  WordKernel(const OperatorWord& w, const LocalGate<Real>& v, std::int64_t cap = kDefaultDimensionCap)
      : layout_(w.n_sites(), v.d(), cap), v_(v.matrix()), factors_(w.factors().begin(), w.factors().end()) {
    const int n = layout_.n;
    for (const auto& f : factors_) {
      if (f.kind == OperatorFactor::Kind::Gate) {
        if (groups_.empty()) groups_.resize(n + 1);
        if (groups_[f.value].bases.empty()) groups_[f.value] = make_group(f.value);
      } else {
        const int p = ((f.value % n) + n) % n;
        if (p == 0 || perms_.count(p)) continue;
        std::vector<std::int64_t> dest(static_cast<std::size_t>(layout_.dim));
        for (std::int64_t x = 0; x < layout_.dim; ++x) dest[x] = layout_.shifted(x, p);
        perms_.emplace(p, std::move(dest));
      }
    }
  }

  std::int64_t dim() const { return layout_.dim; }

  /// Buffers reused across apply() calls on operands of one shape.
  struct Workspace {
    CRowMatrix<Real> scratch, gathered, mixed;
  };

  /// m <- W m, in place.
  void apply(CRowMatrix<Real>& m) const {
    Workspace ws;
    apply(m, ws);
  }

  void apply(CRowMatrix<Real>& m, Workspace& ws) const {
    if (m.rows() != layout_.dim) throw Error(Errc::InvalidArgument, "operand has the wrong number of rows");
    for (const auto& f : factors_) {
      if (f.kind == OperatorFactor::Kind::Gate) {
        apply_gate(groups_[f.value], m, ws);
      } else {
        const int p = ((f.value % layout_.n) + layout_.n) % layout_.n;
        if (p == 0) continue;
        const auto& dest = perms_.at(p);
        ws.scratch.resize(m.rows(), m.cols());
        for (std::int64_t x = 0; x < layout_.dim; ++x) ws.scratch.row(dest[x]) = m.row(x);
        m.swap(ws.scratch);
      }
    }
  }

 private:
  struct Group {
    std::vector<std::int64_t> bases;  // labels with both gate digits zero
    std::vector<std::int64_t> offs;   // a*stride(i) + b*stride(i+1)
  };

  Group make_group(int site) const {
    const int d = layout_.d;
    const std::int64_t sa = layout_.stride[site];
    const std::int64_t sb = layout_.stride[site % layout_.n + 1];
    Group g;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) g.offs.push_back(a * sa + b * sb);
    for (std::int64_t x = 0; x < layout_.dim; ++x)
      if ((x / sa) % d == 0 && (x / sb) % d == 0) g.bases.push_back(x);
    return g;
  }

  // Two-site contraction: each group of d^2 rows is mixed by V.
  // O(d^(N+2)) per column.
  void apply_gate(const Group& g, CRowMatrix<Real>& m, Workspace& ws) const {
    const auto dd = static_cast<Eigen::Index>(g.offs.size());
    auto& gathered = ws.gathered;
    auto& mixed = ws.mixed;
    gathered.resize(dd, m.cols());
    mixed.resize(dd, m.cols());
    for (std::int64_t x : g.bases) {
      for (Eigen::Index k = 0; k < dd; ++k) gathered.row(k) = m.row(x + g.offs[k]);
      mixed.noalias() = v_ * gathered;
      for (Eigen::Index k = 0; k < dd; ++k) m.row(x + g.offs[k]) = mixed.row(k);
    }
  }

  detail::ChainLayout layout_;
  CMatrix<Real> v_;
  std::vector<OperatorFactor> factors_;
  std::vector<Group> groups_;
  std::map<int, std::vector<std::int64_t>> perms_;
};

/// m <- W m for a word W, in place.
template <typename Real>
void apply_word(const OperatorWord& w, const LocalGate<Real>& v, CRowMatrix<Real>& m,
                std::int64_t cap = kDefaultDimensionCap) {
  WordKernel<Real>(w, v, cap).apply(m);
}

/// Dense matrix of a word.
template <typename Real>
CMatrix<Real> materialize(const OperatorWord& w, const LocalGate<Real>& v, std::int64_t cap = kDefaultDimensionCap) {
  const std::int64_t dim = hilbert_dim(w.n_sites(), v.d(), cap);
  CRowMatrix<Real> m = CRowMatrix<Real>::Identity(dim, dim);
  apply_word(w, v, m, cap);
  return CMatrix<Real>(m);
}

/// max |A - B| over all entries of two words, evaluated on blocks of identity
/// columns so neither operator is ever held in full.
template <typename Real>
double word_distance(const OperatorWord& a, const OperatorWord& b, const LocalGate<Real>& v,
                     Eigen::Index block = 32) {
  if (a.n_sites() != b.n_sites()) throw Error(Errc::InvalidArgument, "word sizes differ");
  const WordKernel<Real> ka(a, v), kb(b, v);
  const std::int64_t dim = ka.dim();
  typename WordKernel<Real>::Workspace ws;
  CRowMatrix<Real> xa, xb;
  Real worst2 = 0;
  for (std::int64_t c0 = 0; c0 < dim; c0 += block) {
    const Eigen::Index width = static_cast<Eigen::Index>(std::min<std::int64_t>(block, dim - c0));
    xa.setZero(dim, width);
    for (Eigen::Index j = 0; j < width; ++j) xa(c0 + j, j) = Real(1);
    xb = xa;
    ka.apply(xa, ws);
    kb.apply(xb, ws);
    worst2 = std::max(worst2, (xa - xb).cwiseAbs2().maxCoeff());
  }
  return static_cast<double>(std::sqrt(worst2));
}

/// The one-site translation S as a permutation matrix.
template <typename Real = double>
CMatrix<Real> translation_op(int n, int d) {
  const detail::ChainLayout layout(n, d);
  CMatrix<Real> s = CMatrix<Real>::Zero(layout.dim, layout.dim);
  for (std::int64_t x = 0; x < layout.dim; ++x) s(layout.shifted(x, 1), x) = Real(1);
  return s;
}

/// V_{i,i+1} on the full chain, built entry by entry. Reference path for small
/// N; the circuit builders use WordKernel instead.
template <typename Real>
CMatrix<Real> embed_gate(const LocalGate<Real>& v, int site, int n) {
  if (site < 1 || site > n) throw Error(Errc::OutOfRange, "gate site outside 1..N", site);
  const detail::ChainLayout layout(n, v.d());
  const int d = v.d();
  const int other = site % n + 1;
  CMatrix<Real> out = CMatrix<Real>::Zero(layout.dim, layout.dim);
  for (std::int64_t row = 0; row < layout.dim; ++row)
    for (std::int64_t col = 0; col < layout.dim; ++col) {
      bool spectators_match = true;
      for (int j = 1; j <= n && spectators_match; ++j)
        if (j != site && j != other && layout.digit(row, j) != layout.digit(col, j)) spectators_match = false;
      if (!spectators_match) continue;
      const int out_idx = layout.digit(row, site) * d + layout.digit(row, other);
      const int in_idx = layout.digit(col, site) * d + layout.digit(col, other);
      out(row, col) = v.matrix()(out_idx, in_idx);
    }
  return out;
}

template <typename Real>
CMatrix<Real> build_floquet(const GateSequence& seq, const LocalGate<Real>& v,
                            std::int64_t cap = kDefaultDimensionCap) {
  return materialize(circuit_word(seq), v, cap);
}

template <typename Real>
CMatrix<Real> build_root(int n, int q, int r, const LocalGate<Real>& v) {
  return materialize(root_word(n, q, r), v);
}

/// max over sites i of |V_{i+1,i+2} - S^-1 V_{i,i+1} S|.
template <typename Real>
double verify_conjugation(int n, const LocalGate<Real>& v) {
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    OperatorWord moved(n);
    moved.gate(i % n + 1);
    OperatorWord single(n);
    single.gate(i);
    worst = std::max(worst, word_distance(moved, conjugate_by_shift(single, 1), v));
  }
  return worst;
}

/// |F_{q,r} - S^-qr (root)^q|.
template <typename Real>
double verify_root_identity(int n, int q, int r, const LocalGate<Real>& v) {
  OperatorWord rhs = root_word(n, q, r).power(q);
  rhs.shift(-q * r);
  return word_distance(circuit_word(canonical_fqr(n, q, r)), rhs, v);
}

/// |S^-r F S^r - F'| where F' is the circuit started one layer later.
template <typename Real>
double verify_space_time(int n, int q, int r, const LocalGate<Real>& v) {
  const auto f = canonical_fqr(n, q, r);
  std::vector<int> later(f.order().begin(), f.order().end());
  std::rotate(later.begin(), later.begin() + n / q, later.end());
  const auto shifted_in_time = GateSequence::validate(later, n);
  return word_distance(conjugate_by_shift(circuit_word(f), r), circuit_word(shifted_in_time), v);
}

/// |S^-q root S^q - root|.
template <typename Real>
double verify_translation_sym(int n, int q, int r, const LocalGate<Real>& v) {
  const auto root = root_word(n, q, r);
  return word_distance(conjugate_by_shift(root, q), root, v);
}

/// Orthonormal basis of the S^q eigenspace with eigenvalue exp(2 pi i k q / N),
/// stored as sparse columns (each column lives on one translation orbit).
template <typename Real = double>
struct MomentumSectorBasis {
  int n = 0;
  int d = 0;
  int q = 0;
  int k = 0;
  CSparse<Real> columns;

  Eigen::Index dim() const { return columns.cols(); }
  std::complex<Real> eigenvalue() const {
    return std::polar(Real(1), Real(2) * std::numbers::pi_v<Real> * Real(k) * Real(q) / Real(n));
  }
};

/// Orbit construction: labels are grouped into orbits under S^q; an orbit of
/// length L contributes the Fourier vector L^-1/2 sum_j w^-j |S^{jq} x> to
/// sector k iff w^L = 1, w = exp(2 pi i k q / N).
template <typename Real = double>
MomentumSectorBasis<Real> momentum_basis(int n, int d, int q, int k) {
  if (q < 1 || n % q != 0) throw Error(Errc::InvalidArgument, "q must divide N", q);
  if (k < 0 || k >= n / q)
    throw Error(Errc::InvalidSector, "k=" + std::to_string(k) + " outside 0.." + std::to_string(n / q - 1), k);
  const detail::ChainLayout layout(n, d);
  std::vector<bool> seen(static_cast<std::size_t>(layout.dim), false);
  std::vector<Eigen::Triplet<std::complex<Real>, std::int64_t>> entries;
  entries.reserve(static_cast<std::size_t>(layout.dim));
  std::int64_t col = 0;
  std::vector<std::int64_t> orbit;
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  for (std::int64_t x = 0; x < layout.dim; ++x) {
    if (seen[x]) continue;
    orbit.clear();
    for (std::int64_t y = x; !seen[y]; y = layout.shifted(y, q)) {
      seen[y] = true;
      orbit.push_back(y);
    }
    const auto len = static_cast<std::int64_t>(orbit.size());
    if ((static_cast<std::int64_t>(k) * q * len) % n != 0) continue;
    const Real norm = Real(1) / std::sqrt(static_cast<Real>(len));
    for (std::int64_t j = 0; j < len; ++j) {
      // w^-j, with the exponent reduced exactly in integers.
      const std::int64_t num = (static_cast<std::int64_t>(k) * q * j) % n;
      entries.emplace_back(orbit[j], col, std::polar(norm, -two_pi * static_cast<Real>(num) / Real(n)));
    }
    ++col;
  }
  MomentumSectorBasis<Real> basis{n, d, q, k, CSparse<Real>(layout.dim, col)};
  basis.columns.setFromTriplets(entries.begin(), entries.end());
  basis.columns.makeCompressed();
  return basis;
}

/// Dimensions of all N/q sectors, k = 0..N/q-1.
inline std::vector<std::int64_t> sector_dims(int n, int d, int q) {
  std::vector<std::int64_t> dims;
  for (int k = 0; k < n / q; ++k) dims.push_back(momentum_basis<double>(n, d, q, k).dim());
  return dims;
}

namespace detail {

template <typename Real>
CMatrix<Real> project_checked(const CMatrix<Real>& ub, const MomentumSectorBasis<Real>& basis) {
  CMatrix<Real> block = basis.columns.adjoint() * ub;
  const CMatrix<Real> leakage = ub - basis.columns * block;
  const double leak = leakage.size() ? static_cast<double>(leakage.cwiseAbs().maxCoeff()) : 0.0;
  if (!(leak <= tolerance::kBlockLeakage))
    throw Error(Errc::NotBlockDiagonal, "operator leaks out of the sector by " + std::to_string(leak));
  return block;
}

}  // namespace detail

/// B^dagger U B for a dense U commuting with S^q.
template <typename Real>
CMatrix<Real> restrict_to_sector(const CMatrix<Real>& u, const MomentumSectorBasis<Real>& basis) {
  if (u.rows() != basis.columns.rows() || u.cols() != basis.columns.rows())
    throw Error(Errc::InvalidArgument, "operator and sector basis sizes differ");
  const detail::ChainLayout layout(basis.n, basis.d);
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, std::int64_t> sq(layout.dim);
  for (std::int64_t x = 0; x < layout.dim; ++x) sq.indices()(x) = layout.shifted(x, basis.q);
  const CMatrix<Real> conj = sq.transpose() * u * sq;
  const double defect = max_abs_diff(conj, u);
  if (!(defect <= tolerance::kSectorCommutation))
    throw Error(Errc::NotBlockDiagonal, "operator does not commute with S^q (" + std::to_string(defect) + ")");
  const CMatrix<Real> ub = u * basis.columns;
  return detail::project_checked(ub, basis);
}

/// B^dagger W B for a word, applying W straight to the basis columns.
template <typename Real>
CMatrix<Real> restrict_to_sector(const OperatorWord& w, const LocalGate<Real>& v,
                                 const MomentumSectorBasis<Real>& basis) {
  if (w.n_sites() != basis.n || v.d() != basis.d) throw Error(Errc::InvalidArgument, "word and sector basis differ");
  CRowMatrix<Real> x = CRowMatrix<Real>(basis.columns);
  apply_word(w, v, x);
  return detail::project_checked(CMatrix<Real>(x), basis);
}

/// Eigenphases in [0, 2 pi), ascending.
struct EigenphaseSet {
  std::vector<double> phases;
  std::size_t dim() const { return phases.size(); }
};

inline double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

/// Phases of all eigenvalues from a general complex Schur decomposition.
/// NonUnitarySpectrum if some |lambda| differs from 1 by more than 1e-8.
template <typename Derived>
EigenphaseSet eigenphases(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Scalar::value_type;
  if (u.rows() != u.cols()) throw Error(Errc::InvalidArgument, "matrix must be square");
  EigenphaseSet out;
  if (u.rows() == 0) return out;
  Eigen::ComplexEigenSolver<CMatrix<Real>> solver(u.eval(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error(Errc::NonUnitarySpectrum, "eigenvalue iteration did not converge");
  out.phases.reserve(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const std::complex<Real> lambda = solver.eigenvalues()(i);
    const double dev = std::abs(static_cast<double>(std::abs(lambda)) - 1.0);
    if (!(dev <= tolerance::kSpectrumModulus))
      throw Error(Errc::NonUnitarySpectrum, "|lambda| deviates from 1 by " + std::to_string(dev));
    out.phases.push_back(wrap_phase(static_cast<double>(std::arg(lambda))));
  }
  std::sort(out.phases.begin(), out.phases.end());
  return out;
}

/// Distance between two phase multisets on the circle: the best cyclic
/// alignment of the sorted lists, scored by the largest circular gap.
inline double eigenphase_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(Errc::InvalidArgument, "phase sets differ in size");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto circ = [](double x, double y) {
    const double dd = std::abs(x - y);
    return std::min(dd, two_pi - dd);
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < n; ++c) {
    if (circ(a[0], b[c]) >= best) continue;
    double worst = 0.0;
    for (std::size_t j = 0; j < n && worst < best; ++j) worst = std::max(worst, circ(a[j], b[(j + c) % n]));
    best = std::min(best, worst);
  }
  return best;
}

/// Largest phase mismatch between the spectra of two circuits built from the
/// same gate.
template <typename Real>
double spectral_equivalence_check(const GateSequence& a, const GateSequence& b, const LocalGate<Real>& v) {
  if (a.n_sites() != b.n_sites()) throw Error(Errc::InvalidArgument, "circuits have different N");
  const auto pa = eigenphases(build_floquet(a, v));
  const auto pb = eigenphases(build_floquet(b, v));
  return eigenphase_distance(pa.phases, pb.phases);
}

/// Phases of the root mapped through the root identity into sector k:
/// q*theta - 2 pi q k r / N (mod 2 pi), sorted.
inline std::vector<double> predicted_sector_phases(std::span<const double> root_phases, int n, int q, int r, int k) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const long long num = (static_cast<long long>(q) * k * r) % n;
  const double offset = two_pi * static_cast<double>(num) / n;
  std::vector<double> out;
  out.reserve(root_phases.size());
  for (double theta : root_phases) out.push_back(wrap_phase(q * theta - offset));
  std::sort(out.begin(), out.end());
  return out;
}

/// Sector-restricted spectra of F_{q,r} and of its root, and the mismatch of
/// the sector phase relation.
struct SectorSpectra {
  int k = 0;
  EigenphaseSet floquet;
  EigenphaseSet root;
  double phase_relation_error = 0.0;
};

template <typename Real>
SectorSpectra sector_spectra(int n, int q, int r, const LocalGate<Real>& v, int k) {
  const auto basis = momentum_basis<Real>(n, v.d(), q, k);
  SectorSpectra out;
  out.k = k;
  out.floquet = eigenphases(restrict_to_sector(circuit_word(canonical_fqr(n, q, r)), v, basis));
  out.root = eigenphases(restrict_to_sector(root_word(n, q, r), v, basis));
  const auto predicted = predicted_sector_phases(out.root.phases, n, q, r, k);
  out.phase_relation_error = eigenphase_distance(out.floquet.phases, predicted);
  return out;
}

}  // namespace floquet
