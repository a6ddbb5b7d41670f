#include "floquet/circuit_algebra.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <numeric>

#include "floquet/error.hpp"

namespace floquet {

namespace {

std::vector<int> positions_of(std::span<const int> order) {
  std::vector<int> pos(order.size() + 1, -1);
  for (std::size_t l = 0; l < order.size(); ++l) pos[order[l]] = static_cast<int>(l);
  return pos;
}

// Lehmer-code ranking of permutations of 1..n, used to index the brute-force
// state space.
std::int64_t permutation_rank(std::span<const int> order) {
  const int n = static_cast<int>(order.size());
  std::int64_t rank = 0;
  std::vector<bool> used(n + 1, false);
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int v = 1; v < order[i]; ++v)
      if (!used[v]) ++smaller;
    used[order[i]] = true;
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// In-place move application on a raw order, shared by apply_move and the
// reduction so that every recorded move has been checked once.
void apply_move_inplace(std::vector<int>& order, const EquivalenceMove& move) {
  const int n = static_cast<int>(order.size());
  if (move.kind == EquivalenceMove::Kind::CyclicRotate) {
    std::rotate(order.begin(), order.begin() + 1, order.end());
    return;
  }
  const int l = move.index;
  if (l < 1 || l > n - 1)
    throw Error(Errc::IllegalSwap, "swap index " + std::to_string(l) + " outside 1.." + std::to_string(n - 1), l);
  if (!gates_commute(order[l - 1], order[l], n))
    throw Error(Errc::IllegalSwap,
                "gates " + std::to_string(order[l - 1]) + " and " + std::to_string(order[l]) + " are spatial neighbours",
                l);
  std::swap(order[l - 1], order[l]);
}

class Reducer {
 public:
  explicit Reducer(std::span<const int> order) : order_(order.begin(), order.end()), n_(static_cast<int>(order.size())) {}

  Reduction run() {
    // Step 1: rotate gate 1 to the front.
    while (order_.front() != 1) record(EquivalenceMove::rotate());

    int k = 1;  // gates 1..k occupy time indices 1..k
    while (k < n_) {
      const int target = k + 1;
      const int blocker = target + 1;  // > n means gate 1, already in the prefix
      if (blocker > n_ || pos(blocker) > pos(target)) {
        move_left_to(pos(target), k);
        ++k;
        continue;
      }
      // Gate k+2 precedes k+1: attach k+1 right behind it and grow the
      // descending block (m, m-1, ..., k+1) while its left partner precedes it.
      move_left_to(pos(target), pos(blocker) + 1);
      int top = blocker;
      for (;;) {
        const int start = pos(top);  // block occupies [start, start + top - k - 1]
        if (top == n_) return finish(n_ - k);
        const int next = top + 1;
        if (pos(next) < start) {
          // Case (b): slide the whole block left until it sits behind `next`.
          const int len = top - k;
          for (int s = start; s > pos(next) + 1; --s) shift_other_past_block(s - 1, len);
          top = next;
          continue;
        }
        // Case (a): `next` comes after the block. Slide the block against the
        // prefix, pull its upper part in front of gate 1, then rotate it to the end.
        const int len = top - k;
        for (int s = start; s > k; --s) shift_other_past_block(s - 1, len);
        // Block now occupies [k, k + len); its gates top..k+2 commute with the
        // whole prefix.
        const int upper = len - 1;
        move_upper_block_to_front(k, upper);
        for (int j = 0; j < upper; ++j) record(EquivalenceMove::rotate());
        ++k;
        break;
      }
    }
    return finish(1);
  }

 private:
  int pos(int gate) const {
    const auto it = std::find(order_.begin(), order_.end(), gate);
    return static_cast<int>(it - order_.begin());
  }

  void record(const EquivalenceMove& move) {
    apply_move_inplace(order_, move);
    moves_.push_back(move);
  }

  // Moves the gate at 0-based index `from` left to index `to` by adjacent swaps.
  void move_left_to(int from, int to) {
    for (int i = from; i > to; --i) record(EquivalenceMove::swap(i));  // swaps 0-based (i-1, i)
  }

  // The gate at 0-based index `other` sits just before a block of `len`
  // gates; carry it to just after the block.
  void shift_other_past_block(int other, int len) {
    for (int i = other; i < other + len; ++i) record(EquivalenceMove::swap(i + 1));
  }

  // Prefix occupies [0, k); the `upper` gates right after it commute with every
  // prefix gate. Brings them, in order, to indices [0, upper).
  void move_upper_block_to_front(int k, int upper) {
    for (int j = 0; j < upper; ++j) move_left_to(k + j, j);
  }

  Reduction finish(int p) {
    Reduction out;
    out.p = p;
    out.moves = std::move(moves_);
    return out;
  }

  std::vector<int> order_;
  int n_;
  std::vector<EquivalenceMove> moves_;
};

}  // namespace

GateSequence GateSequence::validate(std::span<const int> order, int n_sites) {
  if (n_sites < 2) throw Error(Errc::OutOfRange, "a chain needs at least 2 sites, got " + std::to_string(n_sites), n_sites);
  for (int g : order)
    if (g < 1 || g > n_sites)
      throw Error(Errc::OutOfRange, "gate " + std::to_string(g) + " outside 1.." + std::to_string(n_sites), g);
  std::vector<int> seen(n_sites + 1, 0);
  for (int g : order)
    if (seen[g]++) throw Error(Errc::DuplicateGate, "gate " + std::to_string(g) + " appears more than once", g);
  for (int g = 1; g <= n_sites; ++g)
    if (!seen[g]) throw Error(Errc::MissingGate, "gate " + std::to_string(g) + " is missing", g);
  return GateSequence(std::vector<int>(order.begin(), order.end()));
}

GateSequence GateSequence::parse(std::string_view text) {
  std::vector<int> order;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view token = text.substr(0, comma);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
      throw Error(Errc::InvalidArgument, "cannot parse gate number '" + std::string(token) + "'");
    order.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return validate(order, static_cast<int>(order.size()));
}

std::string GateSequence::to_string() const {
  std::string out;
  for (std::size_t l = 0; l < order_.size(); ++l) {
    if (l) out += ',';
    out += std::to_string(order_[l]);
  }
  return out;
}

std::string EquivalenceMove::to_string() const {
  if (kind == Kind::CyclicRotate) return "rotate";
  return "swap:" + std::to_string(index);
}

Rational Rational::make(long long num, long long den) {
  if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num, den);
  return {num / g, den / g};
}

bool is_allowed(int n, int q, int r) {
  return n >= 2 && q >= 2 && q <= n && n % q == 0 && r >= 1 && r < q && std::gcd(q, r) == 1;
}

std::vector<ShiftParameters> allowed_qr(int n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "N must be at least 2", n);
  std::vector<int> primes;
  for (int m = n, p = 2; m > 1; ++p) {
    if (static_cast<long long>(p) * p > m) p = m;
    if (m % p) continue;
    primes.push_back(p);
    while (m % p == 0) m /= p;
  }
  std::vector<int> divisors;
  for (int q = 2; q < n; ++q)
    if (n % q == 0) divisors.push_back(q);
  divisors.insert(divisors.begin(), n);

  std::vector<ShiftParameters> out;
  out.reserve(static_cast<std::size_t>(n - 1));
  std::vector<char> shares_factor;
  for (int q : divisors) {
    shares_factor.assign(static_cast<std::size_t>(q), 0);
    for (int p : primes)
      if (q % p == 0)
        for (int r = p; r < q; r += p) shares_factor[r] = 1;
    for (int r = 1; r < q; ++r)
      if (!shares_factor[r]) out.push_back({q, r});
  }
  return out;
}

GateSequence canonical_fqr(int n, int q, int r) {
  if (!is_allowed(n, q, r))
    throw Error(Errc::InvalidClassParameters,
                "(q,r)=(" + std::to_string(q) + "," + std::to_string(r) + ") not allowed for N=" + std::to_string(n));
  const int per_layer = n / q;
  std::vector<int> order(n);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < per_layer; ++i)
      order[j * per_layer + i] = wrap_gate(1LL + static_cast<long long>(j) * r + static_cast<long long>(i) * q, n);
  return GateSequence::validate(order, n);
}

GateSequence canonical_fp(int n, int p) {
  if (n < 2) throw Error(Errc::InvalidArgument, "N must be at least 2", n);
  if (p < 1 || p > n - 1) throw Error(Errc::InvalidP, "p=" + std::to_string(p) + " outside 1.." + std::to_string(n - 1), p);
  std::vector<int> order;
  order.reserve(n);
  for (int g = 1; g <= n - p; ++g) order.push_back(g);
  for (int g = n; g > n - p; --g) order.push_back(g);
  return GateSequence::validate(order, n);
}

int invariant_c(const GateSequence& seq) {
  const int n = seq.n_sites();
  const auto pos = positions_of(seq.order());
  int count = 0;
  for (int g = 1; g <= n; ++g)
    if (pos[wrap_gate(g + 1, n)] < pos[g]) ++count;
  return count;
}

int c_of_class(int n, int q, int r) { return invariant_c(canonical_fqr(n, q, r)); }

CanonicalClass classify(const GateSequence& seq) {
  const int n = seq.n_sites();
  const int c = invariant_c(seq);
  for (const auto& [q, r] : allowed_qr(n))
    if (c_of_class(n, q, r) == c) return {n, q, r, c};
  throw Error(Errc::InternalInvariantViolation, "no canonical class with C=" + std::to_string(c) + " for " + seq.to_string(), c);
}

GateSequence apply_move(const GateSequence& seq, const EquivalenceMove& move) {
  std::vector<int> order(seq.order().begin(), seq.order().end());
  apply_move_inplace(order, move);
  return GateSequence::validate(order, seq.n_sites());
}

Reduction reduce_to_fp(const GateSequence& seq) { return Reducer(seq.order()).run(); }

std::vector<std::vector<GateSequence>> equivalence_classes_bruteforce(int n, bool force) {
  if (n < 2) throw Error(Errc::InvalidArgument, "N must be at least 2", n);
  if (n > kBruteForceMaxSites && !force)
    throw Error(Errc::TooLarge, "brute force is capped at N=" + std::to_string(kBruteForceMaxSites), n);

  const std::int64_t total = factorial(n);
  std::vector<int> class_of(static_cast<std::size_t>(total), -1);
  std::vector<std::vector<GateSequence>> classes;

  std::vector<int> start(n);
  std::iota(start.begin(), start.end(), 1);
  std::vector<EquivalenceMove> moves;
  for (int l = 1; l < n; ++l) moves.push_back(EquivalenceMove::swap(l));
  moves.push_back(EquivalenceMove::rotate());

  do {
    if (class_of[permutation_rank(start)] >= 0) continue;
    const int id = static_cast<int>(classes.size());
    std::vector<std::vector<int>> members;
    std::deque<std::vector<int>> frontier{start};
    class_of[permutation_rank(start)] = id;
    while (!frontier.empty()) {
      std::vector<int> cur = std::move(frontier.front());
      frontier.pop_front();
      for (const auto& m : moves) {
        if (m.kind == EquivalenceMove::Kind::SwapAdjacentTimes && !gates_commute(cur[m.index - 1], cur[m.index], n))
          continue;
        std::vector<int> next = cur;
        apply_move_inplace(next, m);
        auto& slot = class_of[permutation_rank(next)];
        if (slot < 0) {
          slot = id;
          frontier.push_back(std::move(next));
        }
      }
      members.push_back(std::move(cur));
    }
    std::sort(members.begin(), members.end());
    std::vector<GateSequence> cls;
    cls.reserve(members.size());
    for (const auto& m : members) cls.push_back(GateSequence::validate(m, n));
    classes.push_back(std::move(cls));
  } while (std::next_permutation(start.begin(), start.end()));
  return classes;
}

CompressionReport compress(const GateSequence& seq, int periods) {
  if (periods < 1) throw Error(Errc::InvalidArgument, "periods must be at least 1", periods);
  const int n = seq.n_sites();
  // layer_of_gate[g]: layer of the latest occurrence of gate g so far (0 = none).
  std::vector<int> latest(n + 1, 0);
  CompressionReport report;
  report.periods_used = periods;
  for (int t = 0; t < periods; ++t) {
    for (int g : seq.order()) {
      int layer = 0;
      for (int h : {wrap_gate(g - 1, n), g, wrap_gate(g + 1, n)}) layer = std::max(layer, latest[h]);
      ++layer;
      latest[g] = layer;
      if (static_cast<int>(report.layers.size()) < layer) report.layers.resize(layer);
      report.layers[layer - 1].push_back(g);
    }
  }
  const long long gates = static_cast<long long>(periods) * n;
  report.filling = Rational::make(2 * gates, static_cast<long long>(n) * static_cast<long long>(report.layers.size()));
  return report;
}

CompressionReport steady_filling(const GateSequence& seq, int max_periods) {
  if (max_periods <= 0) max_periods = 2 * classify(seq).q;
  CompressionReport best = compress(seq, 1);
  for (int t = 2; t <= max_periods; ++t) {
    auto rep = compress(seq, t);
    if (rep.filling.value() > best.filling.value() + 1e-15) best = std::move(rep);
  }
  return best;
}

}  // namespace floquet
