#include "qhaar/cobweb.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qhaar {
namespace {

void require_valid(const CobwebDiagram& d) {
  if (d.n_vertices < 0 || d.n_vertices % 2 != 0)
    throw std::invalid_argument("ring size must be a non-negative even number");
  if (2 * static_cast<int>(d.matching.size()) != d.n_vertices)
    throw std::invalid_argument("matching must pair every ring vertex");
  std::vector<bool> seen(static_cast<std::size_t>(d.n_vertices), false);
  for (const auto& [u, v] : d.matching) {
    if (u < 0 || u >= d.n_vertices || v < 0 || v >= d.n_vertices)
      throw std::invalid_argument("chord endpoint outside the ring");
    if (u == v) throw std::invalid_argument("chord endpoints must differ");
    if (seen[static_cast<std::size_t>(u)] || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("vertex appears in two chords");
    seen[static_cast<std::size_t>(u)] = seen[static_cast<std::size_t>(v)] = true;
  }
  if (d.arc_vertices < 0) throw std::invalid_argument("negative arc size");
  if (d.arc_vertices > 0) {
    if (d.n_vertices != 4 * d.arc_vertices)
      throw std::invalid_argument("colored diagrams need four arcs of equal size");
    for (const auto& [u, v] : d.matching)
      if ((u / d.arc_vertices + v / d.arc_vertices) % 2 == 0)
        throw std::invalid_argument("chord joins same-colored arcs");
  }
}

std::vector<int> partner_map(const CobwebDiagram& d) {
  std::vector<int> mu(static_cast<std::size_t>(d.n_vertices), -1);
  for (const auto& [u, v] : d.matching) {
    mu[static_cast<std::size_t>(u)] = v;
    mu[static_cast<std::size_t>(v)] = u;
  }
  return mu;
}

// Index loops: cycles of v -> mu(v) + 1 (cross the chord, advance one
// boundary segment).  Per loop, records the traversed segment indices
// (segment i runs from vertex i to vertex i + 1 mod 2E).
std::vector<std::vector<int>> loop_segments(const CobwebDiagram& d) {
  const std::vector<int> mu = partner_map(d);
  const int n = d.n_vertices;
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> loops;
  for (int start = 0; start < n; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    std::vector<int> segments;
    int v = start;
    do {
      visited[static_cast<std::size_t>(v)] = true;
      const int landing = mu[static_cast<std::size_t>(v)];
      segments.push_back(landing);
      v = (landing + 1) % n;
    } while (v != start);
    loops.push_back(std::move(segments));
  }
  return loops;
}

void canonicalize(CobwebDiagram& d) {
  for (auto& chord : d.matching)
    if (chord.first > chord.second) std::swap(chord.first, chord.second);
  std::sort(d.matching.begin(), d.matching.end());
}

CobwebDiagram drop_two_vertices(const CobwebDiagram& d, int x, int y,
                                std::vector<std::pair<int, int>> chords) {
  const auto relabel = [x, y](int v) { return v - (v > x ? 1 : 0) - (v > y ? 1 : 0); };
  CobwebDiagram out;
  out.n_vertices = d.n_vertices - 2;
  out.matching.reserve(chords.size());
  for (const auto& [u, v] : chords) out.matching.emplace_back(relabel(u), relabel(v));
  canonicalize(out);
  return out;
}

int parse_int(const std::string& token) {
  if (token.empty()) throw std::invalid_argument("expected a number in diagram text");
  for (char ch : token)
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad number '" + token + "'");
  return std::stoi(token);
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

}  // namespace

CobwebDiagram make_diagram(int n_vertices, std::vector<std::pair<int, int>> matching,
                           int arc_vertices) {
  CobwebDiagram d{n_vertices, std::move(matching), arc_vertices};
  require_valid(d);
  canonicalize(d);
  return d;
}

int count_loops(const CobwebDiagram& d) {
  require_valid(d);
  if (d.n_vertices == 0) return 1;  // the bare perimeter ring
  return static_cast<int>(loop_segments(d).size());
}

int crossings(const CobwebDiagram& d) {
  require_valid(d);
  int count = 0;
  for (std::size_t i = 0; i < d.matching.size(); ++i)
    for (std::size_t j = i + 1; j < d.matching.size(); ++j) {
      auto [a, b] = d.matching[i];
      auto [c, e] = d.matching[j];
      if (a > b) std::swap(a, b);
      if (c > e) std::swap(c, e);
      const bool c_inside = a < c && c < b;
      const bool e_inside = a < e && e < b;
      if (c_inside != e_inside) ++count;
    }
  return count;
}

long long value(const CobwebDiagram& d, int q) {
  require_valid(d);
  if (d.arc_vertices != 0)
    throw std::invalid_argument("value is defined for uncolored diagrams");
  if (q < 1) throw std::domain_error("q must be positive");
  long long result = 1;
  for (int i = 0; i < count_loops(d); ++i) {
    if (result > std::numeric_limits<long long>::max() / q)
      throw std::overflow_error("q^N does not fit a 64-bit integer");
    result *= q;
  }
  return result;
}

bool vanishes_by_decoration(const CobwebDiagram& d) {
  require_valid(d);
  if (d.arc_vertices == 0 || d.n_vertices == 0) return false;
  const int t = d.arc_vertices;
  const std::array<int, 4> marks = {t - 1, 2 * t - 1, 3 * t - 1, 4 * t - 1};
  for (const auto& segments : loop_segments(d)) {
    int hits = 0;
    for (int seg : segments)
      hits += std::count(marks.begin(), marks.end(), seg) > 0 ? 1 : 0;
    if (hits % 2 == 1) return true;
  }
  return false;
}

int chords_between_arcs(const CobwebDiagram& d, int arc_a, int arc_b) {
  require_valid(d);
  if (d.arc_vertices == 0) throw std::invalid_argument("diagram is uncolored");
  if (arc_a < 0 || arc_a > 3 || arc_b < 0 || arc_b > 3)
    throw std::invalid_argument("arc index out of range");
  int count = 0;
  for (const auto& [u, v] : d.matching) {
    const int au = u / d.arc_vertices;
    const int av = v / d.arc_vertices;
    if ((au == arc_a && av == arc_b) || (au == arc_b && av == arc_a)) ++count;
  }
  return count;
}

std::vector<Reduction> available_reductions(const CobwebDiagram& d) {
  require_valid(d);
  const std::vector<int> mu = partner_map(d);
  const int n = d.n_vertices;
  std::vector<Reduction> bubbles;
  for (const auto& [u, v] : d.matching) {
    if ((u + 1) % n == v)
      bubbles.push_back({true, u, 0});
    else if ((v + 1) % n == u)
      bubbles.push_back({true, v, 0});
  }
  std::vector<Reduction> parallels;
  for (int a = 0; a < n; ++a) {
    const int b = (a + 1) % n;
    const int dd = mu[static_cast<std::size_t>(a)];
    const int c = mu[static_cast<std::size_t>(b)];
    if (dd != (c + 1) % n) continue;
    if (a == c || a == dd || b == c || b == dd || c == dd) continue;
    const Reduction r{false, std::min(a, c), std::max(a, c)};
    if (std::find(parallels.begin(), parallels.end(), r) == parallels.end())
      parallels.push_back(r);
  }
  const auto by_position = [](const Reduction& lhs, const Reduction& rhs) {
    return std::pair(lhs.a, lhs.c) < std::pair(rhs.a, rhs.c);
  };
  std::sort(bubbles.begin(), bubbles.end(), by_position);
  std::sort(parallels.begin(), parallels.end(), by_position);
  bubbles.insert(bubbles.end(), parallels.begin(), parallels.end());
  return bubbles;
}

CobwebDiagram apply_reduction(const CobwebDiagram& d, const Reduction& r) {
  require_valid(d);
  const std::vector<int> mu = partner_map(d);
  const int n = d.n_vertices;
  if (r.a < 0 || r.a >= n) throw std::invalid_argument("reduction does not apply");
  if (r.bubble) {
    const int b = (r.a + 1) % n;
    if (mu[static_cast<std::size_t>(r.a)] != b)
      throw std::invalid_argument("reduction does not apply");
    std::vector<std::pair<int, int>> rest;
    for (const auto& chord : d.matching)
      if (chord.first != r.a && chord.second != r.a) rest.push_back(chord);
    return drop_two_vertices(d, r.a, b, std::move(rest));
  }
  const int b = (r.a + 1) % n;
  const int dd = mu[static_cast<std::size_t>(r.a)];
  const int c = mu[static_cast<std::size_t>(b)];
  if (c != r.c || dd != (c + 1) % n || r.a == c || r.a == dd || b == c || b == dd || c == dd)
    throw std::invalid_argument("reduction does not apply");
  std::vector<std::pair<int, int>> rest;
  for (const auto& chord : d.matching)
    if (chord.first != r.a && chord.second != r.a && chord.first != b && chord.second != b)
      rest.push_back(chord);
  rest.emplace_back(r.a, c);
  return drop_two_vertices(d, b, dd, std::move(rest));
}

ReductionReport reduce(const CobwebDiagram& d) {
  ReductionReport report;
  report.reduced = d;
  report.reduced.arc_vertices = 0;
  canonicalize(report.reduced);
  require_valid(report.reduced);
  while (true) {
    const auto available = available_reductions(report.reduced);
    if (available.empty()) break;
    if (available.front().bubble)
      ++report.removed_bubble;
    else
      ++report.removed_parallel;
    report.reduced = apply_reduction(report.reduced, available.front());
  }
  report.loop_credits = report.removed_parallel + report.removed_bubble;
  return report;
}

CobwebDiagram ladder_diagram(int T, int n_within) {
  if (T < 1) throw std::invalid_argument("need T >= 1");
  if (n_within < 0 || n_within > T) throw std::invalid_argument("n_within out of range");
  std::vector<std::pair<int, int>> chords;
  for (int j = 1; j <= T; ++j) {
    if (j <= n_within) {
      chords.emplace_back(j - 1, 2 * T - j);          // copy 1 with its conjugate
      chords.emplace_back(2 * T + j - 1, 4 * T - j);  // copy 2 with its conjugate
    } else {
      chords.emplace_back(j - 1, 4 * T - j);          // copy 1 with conjugate of 2
      chords.emplace_back(2 * T + j - 1, 2 * T - j);  // copy 2 with conjugate of 1
    }
  }
  return make_diagram(4 * T, std::move(chords), T);
}

std::vector<CobwebDiagram> enumerate_leading(int T) {
  if (T < 2 || T > 4) throw std::invalid_argument("enumerate_leading needs 2 <= T <= 4");
  const int n = 4 * T;
  const int target_loops = 2 * T - 1;  // E - 1
  const auto color = [T](int v) { return (v / T) % 2; };

  // legal partners of vertex 0, one work item per first chord
  std::vector<int> first_partners;
  for (int v = 1; v < n; ++v)
    if (color(v) != color(0)) first_partners.push_back(v);

  std::vector<std::vector<CobwebDiagram>> buckets(first_partners.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < first_partners.size(); ++i) {
    std::vector<std::pair<int, int>> chords{{0, first_partners[i]}};
    std::vector<bool> matched(static_cast<std::size_t>(n), false);
    matched[0] = matched[static_cast<std::size_t>(first_partners[i])] = true;

    const auto dfs = [&](const auto& self, int lowest) -> void {
      while (lowest < n && matched[static_cast<std::size_t>(lowest)]) ++lowest;
      if (lowest == n) {
        CobwebDiagram d{n, chords, T};
        if (!vanishes_by_decoration(d) && count_loops(d) == target_loops)
          buckets[i].push_back(std::move(d));
        return;
      }
      matched[static_cast<std::size_t>(lowest)] = true;
      for (int v = lowest + 1; v < n; ++v) {
        if (matched[static_cast<std::size_t>(v)] || color(v) == color(lowest)) continue;
        matched[static_cast<std::size_t>(v)] = true;
        chords.emplace_back(lowest, v);
        self(self, lowest + 1);
        chords.pop_back();
        matched[static_cast<std::size_t>(v)] = false;
      }
      matched[static_cast<std::size_t>(lowest)] = false;
    };
    dfs(dfs, 1);
  }

  std::vector<CobwebDiagram> result;
  for (auto& bucket : buckets)
    result.insert(result.end(), bucket.begin(), bucket.end());
  return result;
}

CobwebDiagram parse_diagram(const std::string& text) {
  const auto parts = split(text, ';');
  if (parts.size() < 2 || parts.size() > 3)
    throw std::invalid_argument("expected '2E; a-b, c-d, ...' with optional '; colors: T'");
  const int n = parse_int(trimmed(parts[0]));

  std::vector<std::pair<int, int>> chords;
  const std::string chord_text = trimmed(parts[1]);
  if (!chord_text.empty()) {
    for (const auto& raw : split(chord_text, ',')) {
      const std::string token = trimmed(raw);
      const auto dash = token.find('-');
      if (dash == std::string::npos)
        throw std::invalid_argument("bad chord '" + token + "'");
      chords.emplace_back(parse_int(trimmed(token.substr(0, dash))),
                          parse_int(trimmed(token.substr(dash + 1))));
    }
  }

  int arc_vertices = 0;
  if (parts.size() == 3) {
    const std::string clause = trimmed(parts[2]);
    const std::string key = "colors:";
    if (clause.compare(0, key.size(), key) != 0)
      throw std::invalid_argument("expected 'colors: T', got '" + clause + "'");
    arc_vertices = parse_int(trimmed(clause.substr(key.size())));
  }
  return make_diagram(n, std::move(chords), arc_vertices);
}

std::string to_string(const CobwebDiagram& d) {
  CobwebDiagram canon = d;
  require_valid(canon);
  canonicalize(canon);
  std::ostringstream os;
  os << canon.n_vertices << ";";
  for (std::size_t i = 0; i < canon.matching.size(); ++i)
    os << (i == 0 ? " " : ", ") << canon.matching[i].first << "-" << canon.matching[i].second;
  if (canon.arc_vertices > 0) os << "; colors: " << canon.arc_vertices;
  return os.str();
}

}  // namespace qhaar
