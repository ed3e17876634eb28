#include "qhaar/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qhaar {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  std::vector<char> seen(n, 0);
  for (int v : images_) {
    if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 0) throw std::invalid_argument("negative size");
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation compose(const Permutation& p, const Permutation& r) {
  if (p.size() != r.size()) throw std::invalid_argument("size mismatch");
  std::vector<int> im(p.size());
  for (int i = 0; i < p.size(); ++i) im[i] = p(r(i));
  return Permutation(std::move(im));
}

Permutation inverse(const Permutation& p) {
  std::vector<int> im(p.size());
  for (int i = 0; i < p.size(); ++i) im[p(i)] = i;
  return Permutation(std::move(im));
}

CycleStats cycle_stats(const Permutation& p) {
  CycleStats s;
  const int n = p.size();
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p(j)) {
      seen[j] = 1;
      ++len;
    }
    s.cycle_lengths.push_back(len);
  }
  std::sort(s.cycle_lengths.rbegin(), s.cycle_lengths.rend());
  s.num_cycles = static_cast<int>(s.cycle_lengths.size());
  s.transposition_distance = n - s.num_cycles;
  s.parity = (s.transposition_distance % 2 == 0) ? +1 : -1;
  return s;
}

CycleType cycle_type(const Permutation& p) { return cycle_stats(p).cycle_lengths; }

bool is_even_cycle_only(const Permutation& p) {
  for (int len : cycle_type(p))
    if (len % 2 != 0) return false;
  return true;
}

long long catalan(int k) {
  if (k < 0) throw std::invalid_argument("negative Catalan index");
  if (k > 35) throw std::overflow_error("Catalan number exceeds 64-bit range");
  // C_{j+1} = C_j * 2(2j+1)/(j+2); the product is always divisible.
  __int128 c = 1;
  for (int j = 0; j < k; ++j) c = c * 2 * (2 * j + 1) / (j + 2);
  return static_cast<long long>(c);
}

std::vector<Permutation> all_permutations(int n) {
  if (n < 0 || n > 8) throw std::invalid_argument("enumeration limited to n <= 8");
  std::vector<int> cur(n);
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(cur));
  } while (std::next_permutation(cur.begin(), cur.end()));
  return out;
}

PermutationStream::PermutationStream(int n) : n_(n), cur_(n) {
  if (n < 0 || n > 8) throw std::invalid_argument("enumeration limited to n <= 8");
  std::iota(cur_.begin(), cur_.end(), 0);
}

std::optional<Permutation> PermutationStream::next() {
  if (done_) return std::nullopt;
  Permutation out(cur_);
  done_ = !std::next_permutation(cur_.begin(), cur_.end());
  return out;
}

void PermutationStream::reset() {
  done_ = false;
  std::iota(cur_.begin(), cur_.end(), 0);
}

Permutation canonical_pi(int n) {
  if (n <= 0) throw std::invalid_argument("canonical_pi needs n >= 1");
  std::vector<int> im(n);
  for (int i = 0; i < n; ++i) im[i] = (i + 1) % n;
  return Permutation(std::move(im));
}

Permutation parse_cycles(const std::string& text, int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<char> used(n, 0);
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(') throw std::invalid_argument("expected '(' in cycle notation");
    ++pos;
    std::vector<int> cyc;
    for (;;) {
      skip_ws();
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) throw std::invalid_argument("expected symbol in cycle notation");
      int sym = std::stoi(text.substr(start, pos - start));
      if (sym < 1 || sym > n) throw std::invalid_argument("cycle symbol out of range");
      if (used[sym - 1]) throw std::invalid_argument("repeated symbol in cycle notation");
      used[sym - 1] = 1;
      cyc.push_back(sym - 1);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') ++pos;  // allow "(1, 2)" as well
    }
    for (size_t i = 0; i < cyc.size(); ++i) im[cyc[i]] = cyc[(i + 1) % cyc.size()];
    skip_ws();
  }
  return Permutation(std::move(im));
}

std::string to_cycle_string(const Permutation& p) {
  const int n = p.size();
  std::vector<char> seen(n, 0);
  std::ostringstream out;
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || p(i) == i) {
      seen[i] = 1;
      continue;
    }
    out << '(';
    bool first = true;
    for (int j = i; !seen[j]; j = p(j)) {
      seen[j] = 1;
      if (!first) out << ' ';
      out << (j + 1);
      first = false;
    }
    out << ')';
    any = true;
  }
  if (!any) return "()";
  return out.str();
}

}  // namespace qhaar
