#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qhaar {

// Permutation of {0, ..., n-1} in one-line form: operator()(u) = image of u.
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }

  bool operator==(const Permutation&) const = default;
  bool operator<(const Permutation& o) const { return images_ < o.images_; }

private:
  std::vector<int> images_;
};

// (p * r)(i) = p(r(i)); sizes must match.
Permutation compose(const Permutation& p, const Permutation& r);
Permutation inverse(const Permutation& p);

struct CycleStats {
  std::vector<int> cycle_lengths;  // sorted descending
  int num_cycles = 0;
  int transposition_distance = 0;  // n - num_cycles, written |p|
  int parity = +1;                 // (-1)^{transposition_distance}
};

CycleStats cycle_stats(const Permutation& p);

// Partition of n given by the cycle lengths, sorted descending.  Key for
// class-function tables.
using CycleType = std::vector<int>;
CycleType cycle_type(const Permutation& p);

// True when every cycle (fixed points included) has even length.
bool is_even_cycle_only(const Permutation& p);

// k-th Catalan number.  Throws std::overflow_error once the value leaves the
// signed 64-bit range (k > 35).
long long catalan(int k);

// All n! permutations of {0..n-1} in lexicographic one-line order, n <= 8.
std::vector<Permutation> all_permutations(int n);

// Restartable lexicographic stream over S_n (n <= 8).
class PermutationStream {
public:
  explicit PermutationStream(int n);
  std::optional<Permutation> next();
  void reset();

private:
  int n_ = 0;
  bool done_ = false;
  std::vector<int> cur_;
};

// The n-cycle sending slot i to slot i+1 cyclically; parity (-1)^{n-1}.
Permutation canonical_pi(int n);

// Cycle-notation text, 1-based symbols, e.g. "(1 2)(3 4)".  Fixed points may
// be omitted; printing omits them and renders the identity as "()".
Permutation parse_cycles(const std::string& text, int n);
std::string to_cycle_string(const Permutation& p);

}  // namespace qhaar
