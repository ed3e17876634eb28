#include "qhaar/verify.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "qhaar/cobweb.hpp"
#include "qhaar/correlators.hpp"
#include "qhaar/expr.hpp"
#include "qhaar/haar_mc.hpp"
#include "qhaar/oracle.hpp"
#include "qhaar/otoc.hpp"
#include "qhaar/perm.hpp"
#include "qhaar/weingarten.hpp"

namespace qhaar {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Runs `body` with timing and exception capture; `body` returns the detail
// string and flips `ok` on failure.
template <typename Body>
CheckResult run_check(std::string name, Body&& body) {
  CheckResult res;
  res.name = std::move(name);
  const auto start = Clock::now();
  try {
    bool ok = true;
    res.detail = body(ok);
    res.passed = ok;
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = elapsed(start);
  return res;
}

}  // namespace

CheckResult check_trace_power_moments(const std::vector<int>& qs) {
  return run_check("trace-power-moments", [&](bool& ok) {
    // multiplicity vectors a (a[i] = multiplicity of the power i+1) with
    // total weight sum (i+1)*a[i] <= 3
    const std::vector<std::vector<int>> families = {{}, {1},    {2},      {0, 1},
                                                    {3}, {1, 1}, {0, 0, 1}};
    long double worst = 0.0L;
    int cases = 0;
    for (int q : qs) {
      for (const auto& a : families) {
        for (const auto& b : families) {
          MomentExpression expr;
          for (std::size_t i = 0; i < a.size(); ++i)
            for (int c = 0; c < a[i]; ++c) expr.words.push_back({u_pow(static_cast<int>(i) + 1)});
          for (std::size_t i = 0; i < b.size(); ++i)
            for (int c = 0; c < b[i]; ++c) expr.words.push_back({u_pow(-static_cast<int>(i) - 1)});
          const long double closed = trace_power_moment(a, b, q);
          const complex_t got = haar_average(expr, q).value;
          // closed forms are integers >= 1 when nonzero, so this is the
          // relative error there and the absolute error at zero
          const long double err =
              std::abs(got - complex_t(closed, 0.0L)) / std::max<long double>(1.0L, std::fabs(closed));
          worst = std::max(worst, err);
          ++cases;
        }
      }
    }
    ok = worst <= 1e-9L;
    std::ostringstream os;
    os << cases << " (q, a, b) cases, worst error " << fmt(static_cast<double>(worst));
    return os.str();
  });
}

namespace {

// partitions of n in weakly decreasing order
void partitions_rec(int remaining, int cap, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(cap, remaining); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

// permutation with the given cycle type, cycles on consecutive blocks
Permutation representative(const std::vector<int>& type) {
  int n = 0;
  for (int len : type) n += len;
  std::vector<int> images(n);
  int offset = 0;
  for (int len : type) {
    for (int i = 0; i < len; ++i) images[offset + i] = offset + (i + 1) % len;
    offset += len;
  }
  return Permutation(images);
}

std::string type_label(const std::vector<int>& type) {
  std::string s;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(type[i]);
  }
  return s;
}

}  // namespace

CheckResult check_weingarten_asymptotics(const std::vector<int>& exact_qs,
                                         const std::vector<int>& band_qs) {
  return run_check("weingarten-asymptotics", [&](bool& ok) {
    if (band_qs.empty()) throw std::invalid_argument("band_qs must not be empty");
    // (a) the table solves the full n! x n! Gram system (the table itself is
    // built from the class-collapsed system, so this is an independent check)
    long double worst_exact = 0.0L;
    for (int n = 1; n <= 4; ++n) {
      const auto perms = all_permutations(n);
      for (int q : exact_qs) {
        const MatrixXr g = gram_matrix(n, static_cast<real_t>(q));
        VectorXr w(perms.size());
        for (std::size_t i = 0; i < perms.size(); ++i) w[static_cast<long>(i)] = wg_exact(n, q, perms[i]);
        const VectorXr r = g * w;
        for (std::size_t j = 0; j < perms.size(); ++j) {
          const long double target = (j == 0) ? 1.0L : 0.0L;  // lex index 0 = identity
          worst_exact = std::max(worst_exact, std::fabs(r[static_cast<long>(j)] - target));
        }
      }
    }
    if (worst_exact > 1e-9L) ok = false;

    // (b) |wg_exact - wg_leading| * q^{n+|sigma|+2} stays within a factor 3
    // of its value at the first q, for every cycle type with n <= 4
    double worst_ratio = 0.0;
    std::string worst_type;
    for (int n = 1; n <= 4; ++n) {
      for (const auto& type : partitions(n)) {
        const Permutation sigma = representative(type);
        const int dist = cycle_stats(sigma).transposition_distance;
        std::vector<long double> band;
        for (int q : band_qs) {
          const long double scale = powl(static_cast<long double>(q), n + dist + 2);
          band.push_back(std::fabs(wg_exact(n, q, sigma) - wg_leading(n, q, sigma)) * scale);
        }
        // a remainder that is identically zero (e.g. n = 1) passes by the
        // epsilon floor
        const long double bound = std::max(3.0L * band.front(), 1e-9L);
        for (std::size_t i = 0; i < band.size(); ++i) {
          if (band[i] > bound) ok = false;
          if (band.front() > 0.0L) {
            const double ratio = static_cast<double>(band[i] / band.front());
            if (ratio > worst_ratio) {
              worst_ratio = ratio;
              worst_type = type_label(type);
            }
          }
        }
      }
    }
    std::ostringstream os;
    os << "gram residual " << fmt(static_cast<double>(worst_exact)) << ", worst band ratio "
       << fmt(worst_ratio) << " (type " << worst_type << ")";
    return os.str();
  });
}

namespace {

// Canonical sequences of length n with first time 0: entries in 0..3 (every
// canonical sequence with at most 3 averaged unitary pairs fits in that
// window), cyclically adjacent-distinct, fixed by canonicalize, and with
// n_unitaries <= max_pairs.
std::vector<TimeSequence> canonical_sequences(int n, int max_pairs) {
  std::vector<TimeSequence> out;
  std::vector<int> t(n, 0);
  const long long combos = static_cast<long long>(std::pow(4.0, n - 1));
  for (long long code = 0; code < combos; ++code) {
    long long rest = code;
    bool adjacent_ok = true;
    for (int i = 1; i < n; ++i) {
      t[i] = static_cast<int>(rest % 4);
      rest /= 4;
      if (t[i] == t[i - 1]) adjacent_ok = false;
    }
    if (!adjacent_ok || t[n - 1] == t[0]) continue;
    TimeSequence canon = canonicalize(t);
    if (canon.times != t) continue;
    if (differences(canon).n_unitaries > max_pairs) continue;
    out.push_back(std::move(canon));
  }
  return out;
}

}  // namespace

CheckResult check_correlator_averages() {
  return run_check("correlator-averages", [&](bool& ok) {
    // (a) odd-length averages vanish identically
    double worst_odd = 0.0;
    int odd_cases = 0;
    for (int n : {3, 5}) {
      const auto seqs = canonical_sequences(n, 3);
      for (int q : {4, 6}) {
        const Eigen::MatrixXcd z = default_z(q);
        for (const auto& t : seqs) {
          worst_odd = std::max(worst_odd, std::abs(avg_correlator_exact(t, q, z)));
          ++odd_cases;
        }
      }
    }
    if (worst_odd > 1e-12) ok = false;

    // (b) four-point set: the compensated magnitude q^2 |value| stays O(1)
    double worst_even = 0.0;
    int even_cases = 0;
    const auto seqs4 = canonical_sequences(4, 3);
    for (int q : {6, 8, 12}) {
      const Eigen::MatrixXcd z = default_z(q);
      for (const auto& t : seqs4) {
        worst_even =
            std::max(worst_even, static_cast<double>(q) * q * std::abs(avg_correlator_exact(t, q, z)));
        ++even_cases;
      }
    }
    if (worst_even > 10.0) ok = false;

    // (c) alternating four-point anchor: exactly -1/(q^2-1)
    double worst_anchor = 0.0;
    const TimeSequence alt = canonicalize({0, 1, 0, 1});
    for (int q : {4, 8}) {
      const std::complex<double> v = avg_correlator_exact(alt, q, default_z(q));
      worst_anchor = std::max(worst_anchor, std::abs(v - std::complex<double>(-1.0 / (q * q - 1.0), 0.0)));
    }
    if (worst_anchor > 1e-12) ok = false;

    std::ostringstream os;
    os << odd_cases << " odd cases (worst " << fmt(worst_odd) << "), " << even_cases
       << " four-point cases (worst q^2|v| " << fmt(worst_even) << "), anchor error "
       << fmt(worst_anchor);
    return os.str();
  });
}

CheckResult check_second_moment_symmetry(long long n_samples, std::uint64_t seed) {
  return run_check("second-moment-scaling", [&](bool& ok) {
    // (a) |<Z Z(1)>|^2 averages to exactly 1/(q^2 - 1)
    double worst_exact = 0.0;
    const TimeSequence two = canonicalize({0, 1});
    for (int q : {4, 8}) {
      const std::complex<double> v = avg_product_exact({two, two}, {false, true}, q, default_z(q));
      worst_exact = std::max(worst_exact, std::abs(v - std::complex<double>(1.0 / (q * q - 1.0), 0.0)));
    }
    if (worst_exact > 1e-12) ok = false;

    // (b) alternating four-point second moment: q^2 <|v|^2> approaches 2
    // along a fitted C/q trend, each point within 3 sigma
    const TimeSequence alt = canonicalize({0, 1, 0, 1});
    struct Point {
      double x, y, sigma;
    };
    std::vector<Point> pts;
    for (int q : {8, 16}) {
      MomentExpression expr = product_expression({alt, alt}, {false, true});
      expr.operators["Z"] = default_z(q);
      const HaarEstimate est = estimate(expr, q, n_samples, seed + static_cast<std::uint64_t>(q));
      pts.push_back({1.0 / q, q * q * est.mean.real() - 2.0, q * q * est.std_error_re});
    }
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : pts) {
      const double w = 1.0 / (p.sigma * p.sigma);
      sxy += w * p.x * p.y;
      sxx += w * p.x * p.x;
    }
    const double c_fit = sxy / sxx;
    double worst_pull = 0.0;
    for (const auto& p : pts)
      worst_pull = std::max(worst_pull, std::abs(p.y - c_fit * p.x) / p.sigma);
    if (worst_pull > 3.0) ok = false;

    // (c) an inequivalent pair carries no second moment: the compensated
    // cross moment vanishes (measured exactly zero; 1e-9 allows roundoff)
    const TimeSequence other = canonicalize({0, 2});
    auto cross = [&](int q) {
      return q * q * std::abs(avg_product_exact({two, other}, {false, true}, q, default_z(q)));
    };
    const double c8 = cross(8), c16 = cross(16);
    if (!(c8 <= 1e-9 && c16 <= 1e-9)) ok = false;

    std::ostringstream os;
    os << "exact error " << fmt(worst_exact) << ", fitted C " << fmt(c_fit) << " (worst pull "
       << fmt(worst_pull) << " sigma), cross moment q^2|v| " << fmt(c8) << " -> " << fmt(c16);
    return os.str();
  });
}

CheckResult check_higher_moment_decay(const std::vector<int>& qs) {
  return run_check("higher-moment-decay", [&](bool& ok) {
    if (qs.empty()) throw std::invalid_argument("qs must not be empty");
    const TimeSequence two = canonicalize({0, 1});
    std::vector<double> band;
    for (int q : qs) {
      const std::complex<double> v =
          avg_product_exact({two, two, two}, {false, true, false}, q, default_z(q));
      band.push_back(q * q * std::abs(v));
    }
    const double bound = 3.0 * band.front() + 1e-12;
    for (double b : band)
      if (b > bound) ok = false;
    std::ostringstream os;
    os << "q^2|third moment| =";
    for (double b : band) os << " " << fmt(b);
    return os.str();
  });
}

CheckResult check_otoc_leading_order(const std::vector<int>& band_qs) {
  return run_check("otoc-leading-order", [&](bool& ok) {
    // (a) the dual-basis projector inverts the pair overlap matrix
    double worst_proj = 0.0;
    for (int q : {2, 4, 8, 64}) {
      const Eigen::Matrix2d r = projector_k(q) * pair_gram(q) - Eigen::Matrix2d::Identity();
      worst_proj = std::max(worst_proj, r.cwiseAbs().maxCoeff());
    }
    if (worst_proj > 1e-12) ok = false;

    // (b) undecorated value: pair-space chain and oracle both -1/(q^2-1)
    double worst_anchor = 0.0;
    for (int q : {4, 8}) {
      const OperatorTable ops = {{"Z", default_z(q)}};
      const std::complex<double> target(-1.0 / (q * q - 1.0), 0.0);
      worst_anchor = std::max(worst_anchor, std::abs(theorem4_value({}, q, ops) - target));
      worst_anchor = std::max(worst_anchor, std::abs(otoc_exact({}, q, ops) - target));
    }
    if (worst_anchor > 1e-12) ok = false;

    // (c) one insertion layer: the pair-space value tracks the oracle inside
    // a q^{-3} band, uniformly over the q sweep (empty sweep = anchors only)
    const std::vector<LayerSpec> layers = parse_layers("1,1b");
    std::vector<double> band;
    for (int q : band_qs) {
      const OperatorTable ops = {{"Z", default_z(q)}};
      const double q3 = static_cast<double>(q) * q * q;
      band.push_back(q3 * std::abs(theorem4_value(layers, q, ops) - otoc_exact(layers, q, ops)));
    }
    if (!band.empty()) {
      const double bound = 3.0 * band.front() + 1e-12;
      for (double b : band)
        if (b > bound) ok = false;
      if (band.front() > 10.0) ok = false;
    }

    std::ostringstream os;
    os << "projector error " << fmt(worst_proj) << ", anchor error " << fmt(worst_anchor);
    if (band.empty()) {
      os << ", band sweep skipped";
    } else {
      os << ", q^3 band =";
      for (double b : band) os << " " << fmt(b);
    }
    return os.str();
  });
}

namespace {

void matchings_rec(std::vector<bool>& used, std::vector<std::pair<int, int>>& cur,
                   std::vector<std::vector<std::pair<int, int>>>& out) {
  const int n = static_cast<int>(used.size());
  int u = 0;
  while (u < n && used[u]) ++u;
  if (u == n) {
    out.push_back(cur);
    return;
  }
  used[u] = true;
  for (int v = u + 1; v < n; ++v) {
    if (used[v]) continue;
    used[v] = true;
    cur.emplace_back(u, v);
    matchings_rec(used, cur, out);
    cur.pop_back();
    used[v] = false;
  }
  used[u] = false;
}

std::vector<std::vector<std::pair<int, int>>> all_matchings(int n_vertices) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<bool> used(n_vertices, false);
  std::vector<std::pair<int, int>> cur;
  matchings_rec(used, cur, out);
  return out;
}

struct Lcg {
  std::uint64_t state;
  std::uint32_t next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<std::uint32_t>(state >> 33);
  }
};

CobwebDiagram random_diagram(Lcg& rng, int edges) {
  std::vector<int> order(2 * edges);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next() % i]);
  std::vector<std::pair<int, int>> matching;
  for (int e = 0; e < edges; ++e) matching.emplace_back(order[2 * e], order[2 * e + 1]);
  return make_diagram(2 * edges, std::move(matching));
}

bool same_diagram_set(std::vector<CobwebDiagram> a, std::vector<CobwebDiagram> b) {
  auto key = [](const CobwebDiagram& d) { return d.matching; };
  std::sort(a.begin(), a.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
  std::sort(b.begin(), b.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
  return a == b;
}

}  // namespace

CheckResult check_cobweb_engine(int samples, std::uint64_t seed) {
  return run_check("cobweb-engine", [&](bool& ok) {
    // (a) exhaustively for E <= 5: planar <=> fully reducible <=> N = E+1,
    // with E loop credits on planar diagrams, loop parity, and loop
    // conservation along the reduction
    int exhaustive = 0;
    for (int edges = 0; edges <= 5; ++edges) {
      for (auto& matching : all_matchings(2 * edges)) {
        const CobwebDiagram d = make_diagram(2 * edges, std::move(matching));
        const int loops = count_loops(d);
        const bool planar = crossings(d) == 0;
        const ReductionReport rep = reduce(d);
        const bool reducible = rep.reduced.matching.empty();
        if (planar != reducible || planar != (loops == edges + 1)) ok = false;
        if (planar && rep.loop_credits != edges) ok = false;
        if ((edges + 1 - loops) % 2 != 0) ok = false;
        if (loops != rep.loop_credits + count_loops(rep.reduced)) ok = false;
        ++exhaustive;
      }
    }

    // (b) rewrite soundness on random diagrams: every applied rewrite drops
    // one edge and extracts exactly one loop, and the irreducible remainder
    // obeys 3 N' <= max(3, 2 E')
    Lcg rng{seed};
    for (int s = 0; s < samples; ++s) {
      CobwebDiagram cur = random_diagram(rng, 1 + static_cast<int>(rng.next() % 8));
      while (true) {
        const auto steps = available_reductions(cur);
        if (steps.empty()) break;
        const CobwebDiagram next = apply_reduction(cur, steps.front());
        if (edge_count(next) != edge_count(cur) - 1) ok = false;
        if (count_loops(cur) != count_loops(next) + 1) ok = false;
        cur = next;
      }
      const int ep = edge_count(cur), np = count_loops(cur);
      if (3 * np > std::max(3, 2 * ep)) ok = false;
    }

    // (c) the leading family is exactly the surviving ladder diagrams, and
    // its chord counts pair the copies symmetrically
    for (int t = 2; t <= 3; ++t) {
      std::vector<CobwebDiagram> expected;
      for (int m = 0; m <= t; ++m) {
        CobwebDiagram lad = ladder_diagram(t, m);
        if (!vanishes_by_decoration(lad) && count_loops(lad) == 2 * t - 1)
          expected.push_back(std::move(lad));
      }
      const std::vector<CobwebDiagram> got = enumerate_leading(t);
      if (!same_diagram_set(got, expected)) ok = false;
      for (const auto& d : got)
        if (chords_between_arcs(d, 0, 1) != chords_between_arcs(d, 2, 3)) ok = false;
    }

    std::ostringstream os;
    os << exhaustive << " exhaustive diagrams (E <= 5), " << samples
       << " random reductions, leading families T = 2, 3";
    return os.str();
  });
}

namespace {

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool run_cli(const std::string& cli_path, const std::string& args,
             const std::filesystem::path& out) {
  const std::string cmd =
      "\"" + cli_path + "\" " + args + " --out \"" + out.string() + "\" >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
}

}  // namespace

CheckResult check_reproducibility(const std::string& cli_path) {
  return run_check("reproducibility", [&](bool& ok) {
    // (a) Monte Carlo moments of |Tr U^m|^2 hit m within 4 sigma
    double worst_pull = 0.0;
    for (int m = 1; m <= 3; ++m) {
      MomentExpression expr;
      expr.words.push_back({u_pow(m)});
      expr.words.push_back({u_pow(-m)});
      const HaarEstimate est = estimate(expr, 8, 10000, 7100 + static_cast<std::uint64_t>(m));
      const double pull_re = std::abs(est.mean.real() - m) / est.std_error_re;
      const double pull_im = std::abs(est.mean.imag()) / (est.std_error_im + 1e-15);
      worst_pull = std::max({worst_pull, pull_re, pull_im});
    }
    if (worst_pull > 4.0) ok = false;

    // (b) repeated CLI runs with the same config and seed are byte-identical
    if (cli_path.empty()) {
      ok = false;
      return std::string("no CLI path given");
    }
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string tag = std::to_string(static_cast<long long>(::getpid()));
    int identical = 0;
    const std::vector<std::string> runs = {
        "scaling --times 0,1,0,1 --q 4,8 --mode mc --n 2000 --seed 99 --format csv",
        "otoc --layers 1,1b --q 8 --mode mc --n 500 --seed 7 --format json",
    };
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto file_a = tmp / ("qhaar_repro_" + tag + "_" + std::to_string(i) + "a");
      const auto file_b = tmp / ("qhaar_repro_" + tag + "_" + std::to_string(i) + "b");
      const bool ran = run_cli(cli_path, runs[i], file_a) && run_cli(cli_path, runs[i], file_b);
      const std::string bytes_a = read_bytes(file_a), bytes_b = read_bytes(file_b);
      if (ran && !bytes_a.empty() && bytes_a == bytes_b) ++identical;
      std::filesystem::remove(file_a);
      std::filesystem::remove(file_b);
    }
    if (identical != static_cast<int>(runs.size())) ok = false;

    std::ostringstream os;
    os << "MC moment worst pull " << fmt(worst_pull) << " sigma, " << identical << "/"
       << runs.size() << " CLI reruns byte-identical";
    return os.str();
  });
}

std::vector<CheckResult> check_all(const std::string& cli_path) {
  std::vector<CheckResult> out;
  out.push_back(check_trace_power_moments());
  out.push_back(check_weingarten_asymptotics());
  out.push_back(check_correlator_averages());
  out.push_back(check_second_moment_symmetry());
  out.push_back(check_higher_moment_decay());
  out.push_back(check_otoc_leading_order());
  out.push_back(check_cobweb_engine());
  out.push_back(check_reproducibility(cli_path));
  return out;
}

}  // namespace qhaar
