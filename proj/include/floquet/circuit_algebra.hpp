#pragma once

// Combinatorics of simple circuits: one fixed two-site gate applied once on
// every nearest-neighbour pair of a periodic chain of N sites, in some order.
//
// A circuit is written as the sequence of gate numbers (i_1, ..., i_N) in time
// order, gate g acting on sites (g, g+1 mod N). Gate numbers are 1-based and
// all modular reductions land in 1..N.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace floquet {

/// Reduces any integer to its representative in 1..n.
constexpr int wrap_gate(long long g, int n) {
  long long m = (g - 1) % n;
  if (m < 0) m += n;
  return static_cast<int>(m) + 1;
}

/// True when gates a and b act on disjoint site pairs.
constexpr bool gates_commute(int a, int b, int n) {
  if (a == b) return false;
  const int diff = wrap_gate(a - b + 1, n) - 1;  // (a - b) mod n in 0..n-1
  return diff != 1 && diff != n - 1;
}

class GateSequence {
 public:
  /// Accepts `order` iff it is a permutation of 1..n_sites. Throws Error with
  /// OutOfRange, DuplicateGate or MissingGate, naming the offending value.
  static GateSequence validate(std::span<const int> order, int n_sites);

  /// Parses "1,4,3,6,5,2"; the number of entries fixes N.
  static GateSequence parse(std::string_view text);

  int n_sites() const { return static_cast<int>(order_.size()); }
  std::span<const int> order() const { return order_; }
  /// 0-based time index.
  int operator[](std::size_t l) const { return order_[l]; }
  std::size_t size() const { return order_.size(); }

  std::string to_string() const;

  friend bool operator==(const GateSequence&, const GateSequence&) = default;
  friend auto operator<=>(const GateSequence&, const GateSequence&) = default;

 private:
  explicit GateSequence(std::vector<int> order) : order_(std::move(order)) {}
  std::vector<int> order_;
};

struct EquivalenceMove {
  enum class Kind : std::uint8_t { SwapAdjacentTimes, CyclicRotate };

  Kind kind = Kind::CyclicRotate;
  /// 1-based time index l of the swapped pair (l, l+1); unused for rotations.
  int index = 0;

  static EquivalenceMove swap(int l) { return {Kind::SwapAdjacentTimes, l}; }
  static EquivalenceMove rotate() { return {Kind::CyclicRotate, 0}; }

  /// "swap:3" or "rotate".
  std::string to_string() const;

  friend bool operator==(const EquivalenceMove&, const EquivalenceMove&) = default;
};

struct ShiftParameters {
  int q = 0;
  int r = 0;
  friend auto operator<=>(const ShiftParameters&, const ShiftParameters&) = default;
};

struct CanonicalClass {
  int n = 0;
  int q = 0;
  int r = 0;
  /// The conserved invariant C, equal to the length of the second staircase
  /// of the equivalent double staircase F_p.
  int p = 0;

  /// Generalized staircase (q = N) as opposed to generalized brick-wall.
  bool is_staircase() const { return q == n; }
  friend bool operator==(const CanonicalClass&, const CanonicalClass&) = default;
};

struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long num, long long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CompressionReport {
  /// Each layer holds mutually commuting gate numbers.
  std::vector<std::vector<int>> layers;
  int periods_used = 1;
  /// 2 * (total gates) / (N * layer count).
  Rational filling;
};

struct Reduction {
  int p = 0;
  std::vector<EquivalenceMove> moves;
};

/// Q_N: all (q, r) with q | N, q >= 2, 1 <= r < q, gcd(q, r) = 1. Generalized
/// staircase entries (q = N) come first, then brick-wall entries by q, each
/// group ordered by r.
std::vector<ShiftParameters> allowed_qr(int n);
bool is_allowed(int n, int q, int r);

/// F_{q,r}: gate 1 + j*r + i*q at time index j*(N/q) + i.
GateSequence canonical_fqr(int n, int q, int r);

/// F_p = (1, 2, ..., N-p, N, N-1, ..., N-p+1).
GateSequence canonical_fp(int n, int p);

/// Number of gates whose right neighbour (g+1 mod N) occurs earlier in time.
/// Linear in N.
int invariant_c(const GateSequence& seq);

int c_of_class(int n, int q, int r);

/// Matches invariant_c(seq) against the table of c_of_class over Q_N.
CanonicalClass classify(const GateSequence& seq);

/// Throws IllegalSwap when a swap would exchange spatially neighbouring gates
/// (or the index is out of range).
GateSequence apply_move(const GateSequence& seq, const EquivalenceMove& move);

/// Constructive reduction to the double staircase F_p. Replaying `moves` on
/// seq yields canonical_fp(N, p) exactly.
Reduction reduce_to_fp(const GateSequence& seq);

inline constexpr int kBruteForceMaxSites = 8;

/// Partitions all N! sequences into closures under the equivalence moves.
/// Classes are ordered by their lexicographically smallest member, members
/// within a class in lexicographic order. Throws TooLarge above N = 8 unless
/// `force` is set.
std::vector<std::vector<GateSequence>> equivalence_classes_bruteforce(int n, bool force = false);

/// Greedy as-soon-as-possible layering of `seq` repeated `periods` times:
/// every gate lands in the first layer after all earlier gates it shares a
/// site with.
CompressionReport compress(const GateSequence& seq, int periods);

/// Long-run filling fraction. The optimal layer count is subadditive in the
/// number of periods, so the limit is the supremum over t; returns the report
/// for the smallest t <= max_periods reaching the best filling. max_periods
/// defaults to 2q of the circuit's class.
CompressionReport steady_filling(const GateSequence& seq, int max_periods = 0);

}  // namespace floquet
