#include <CLI11.hpp>

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhaar/cobweb.hpp"
#include "qhaar/correlators.hpp"
#include "qhaar/expr.hpp"
#include "qhaar/haar_mc.hpp"
#include "qhaar/io.hpp"
#include "qhaar/oracle.hpp"
#include "qhaar/otoc.hpp"
#include "qhaar/perm.hpp"
#include "qhaar/verify.hpp"
#include "qhaar/weingarten.hpp"

namespace {

using namespace qhaar;

struct CommonOpts {
  std::string format = "csv";
  std::string out = "-";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output path, '-' for stdout")->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")->envname("QHAAR_SEED")->capture_default_str();
}

void emit(const Table& table, const CommonOpts& o, const std::string& config) {
  const RunMetadata meta{o.seed, config};
  const std::string text = (o.format == "json") ? render_jsonl(table, meta) : render_csv(table, meta);
  if (o.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + o.out);
    f << text;
  }
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

void require_q_list(const std::vector<int>& qs) {
  if (qs.empty()) throw std::invalid_argument("at least one --q value is required");
  for (int q : qs)
    if (q < 2) throw std::invalid_argument("q must be >= 2");
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

std::string type_label(const std::vector<int>& type) {
  std::string s;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(type[i]);
  }
  return s;
}

// ---- subcommand bodies ----

void run_wg(int n, const std::vector<int>& qs, const CommonOpts& o) {
  require_q_list(qs);
  Table table;
  table.columns = {"q", "cycle_type", "wg", "leading", "order"};
  const auto types = partitions(n);
  for (int q : qs) {
    const WeingartenTable tbl = WeingartenTable::build(n, static_cast<real_t>(q));
    for (const auto& type : types) {
      const Permutation sigma = representative(type);
      const int order = n + cycle_stats(sigma).transposition_distance;
      table.rows.push_back({q, type_label(type), static_cast<double>(tbl.by_type(type)),
                            static_cast<double>(wg_leading(n, q, sigma)), order});
    }
  }
  emit(table, o, "wg n=" + std::to_string(n) + " q=" + join_ints(qs));
}

void run_avg_corr(const std::vector<int>& times, const std::vector<int>& qs,
                  const std::string& mode, long long n_samples, const CommonOpts& o) {
  require_q_list(qs);
  const TimeSequence t = canonicalize(times);
  Table table;
  table.columns = {"q", "mode", "re", "im", "se_re", "se_im", "n_samples"};
  for (int q : qs) {
    const Eigen::MatrixXcd z = default_z(q);
    if (mode == "exact") {
      const std::complex<double> v = avg_correlator_exact(t, q, z);
      table.rows.push_back({q, mode, v.real(), v.imag(), Cell(), Cell(), Cell()});
    } else {
      MomentExpression expr = correlator_expression(differences(t).x);
      expr.operators["Z"] = z;
      const HaarEstimate est = estimate(expr, q, n_samples, o.seed);
      table.rows.push_back({q, mode, est.mean.real(), est.mean.imag(), est.std_error_re,
                            est.std_error_im, est.n_samples});
    }
  }
  std::ostringstream cfg;
  cfg << "avg-corr times=" << join_ints(t.times) << " q=" << join_ints(qs) << " mode=" << mode
      << " n=" << n_samples << " seed=" << o.seed;
  emit(table, o, cfg.str());
}

void run_moments(const std::vector<int>& powers, const std::vector<int>& qs,
                 const CommonOpts& o) {
  require_q_list(qs);
  if (powers.empty()) throw std::invalid_argument("at least one --powers value is required");
  int max_power = 0;
  for (int p : powers) {
    if (p < 1) throw std::invalid_argument("powers must be >= 1");
    max_power = std::max(max_power, p);
  }
  std::vector<int> mult(max_power, 0);
  for (int p : powers) ++mult[p - 1];
  MomentExpression expr;
  for (int p : powers) {
    expr.words.push_back({u_pow(p)});
    expr.words.push_back({u_pow(-p)});
  }
  Table table;
  table.columns = {"q", "re", "im", "closed_form", "abs_error"};
  for (int q : qs) {
    const complex_t v = haar_average(expr, q).value;
    const long double closed = trace_power_moment(mult, mult, q);
    table.rows.push_back({q, static_cast<double>(v.real()), static_cast<double>(v.imag()),
                          static_cast<double>(closed),
                          static_cast<double>(std::abs(v - complex_t(closed, 0.0L)))});
  }
  emit(table, o, "moments powers=" + join_ints(powers) + " q=" + join_ints(qs));
}

void run_second_moment(const std::vector<int>& times, const std::vector<int>& times2,
                       const std::vector<int>& qs, const std::string& mode, long long n_samples,
                       const CommonOpts& o) {
  require_q_list(qs);
  const TimeSequence t1 = canonicalize(times);
  const TimeSequence t2 = canonicalize(times2.empty() ? times : times2);
  Table table;
  table.columns = {"q", "re", "im", "re_times_q2", "se_re", "se_im", "n_samples"};
  for (int q : qs) {
    const Eigen::MatrixXcd z = default_z(q);
    if (mode == "exact") {
      const std::complex<double> v = avg_product_exact({t1, t2}, {false, true}, q, z);
      table.rows.push_back(
          {q, v.real(), v.imag(), static_cast<double>(q) * q * v.real(), Cell(), Cell(), Cell()});
    } else {
      MomentExpression expr = product_expression({t1, t2}, {false, true});
      expr.operators["Z"] = z;
      const HaarEstimate est = estimate(expr, q, n_samples, o.seed);
      table.rows.push_back({q, est.mean.real(), est.mean.imag(),
                            static_cast<double>(q) * q * est.mean.real(), est.std_error_re,
                            est.std_error_im, est.n_samples});
    }
  }
  std::ostringstream cfg;
  cfg << "second-moment times=" << join_ints(t1.times) << " times2=" << join_ints(t2.times)
      << " q=" << join_ints(qs) << " mode=" << mode << " n=" << n_samples << " seed=" << o.seed;
  emit(table, o, cfg.str());
}

void run_otoc(const std::string& layers_text, const std::vector<int>& qs, const std::string& mode,
              long long n_samples, const CommonOpts& o) {
  require_q_list(qs);
  const std::vector<LayerSpec> layers = parse_layers(layers_text);
  Table table;
  table.columns = {"q", "re", "im", "se_re", "se_im", "n_samples"};
  for (int q : qs) {
    const OperatorTable ops = {{"Z", default_z(q)}};
    if (mode == "mc") {
      const HaarEstimate est = otoc_mc(layers, q, n_samples, o.seed, ops);
      table.rows.push_back({q, est.mean.real(), est.mean.imag(), est.std_error_re,
                            est.std_error_im, est.n_samples});
    } else {
      const std::complex<double> v =
          (mode == "exact") ? otoc_exact(layers, q, ops) : theorem4_value(layers, q, ops);
      table.rows.push_back({q, v.real(), v.imag(), Cell(), Cell(), Cell()});
    }
  }
  std::ostringstream cfg;
  cfg << "otoc layers=" << layers_text << " q=" << join_ints(qs) << " mode=" << mode
      << " n=" << n_samples << " seed=" << o.seed;
  emit(table, o, cfg.str());
}

void run_scaling(const std::vector<int>& times, const std::vector<int>& qs,
                 const std::string& mode, bool second_moment, long long n_samples,
                 const CommonOpts& o) {
  require_q_list(qs);
  for (std::size_t i = 1; i < qs.size(); ++i)
    if (qs[i] <= qs[i - 1]) throw std::invalid_argument("--q values must be ascending");
  const TimeSequence t = canonicalize(times);
  const ProbeMode pm = (mode == "exact") ? ProbeMode::exact : ProbeMode::mc;
  const auto rows = scaling_probe(t, qs, pm, second_moment, n_samples, o.seed);
  Table table;
  table.columns = {"q", "re", "im", "re_times_q2"};
  for (const auto& r : rows)
    table.rows.push_back({r.q, r.value.real(), r.value.imag(), r.value_q2.real()});
  std::ostringstream cfg;
  cfg << "scaling times=" << join_ints(t.times) << " q=" << join_ints(qs) << " mode=" << mode
      << " second_moment=" << (second_moment ? 1 : 0) << " n=" << n_samples << " seed=" << o.seed;
  emit(table, o, cfg.str());
}

void run_cobweb(const std::string& diagram_text, const std::vector<int>& qs,
                const CommonOpts& o) {
  for (int q : qs)
    if (q < 2) throw std::invalid_argument("q must be >= 2");
  const CobwebDiagram d = parse_diagram(diagram_text);
  const ReductionReport rep = reduce(d);
  const std::string text = to_string(d);
  const int loops = count_loops(d);
  const int cross = crossings(d);
  const int e_prime = edge_count(rep.reduced);
  const bool colored = d.arc_vertices > 0;
  Table table;
  table.columns = {"diagram",  "e",      "loops",           "crossings",      "e_prime",
                   "removed_parallel", "removed_bubble", "q", "value"};
  auto base_row = [&]() {
    return std::vector<Cell>{text,    edge_count(d),        loops,
                             cross,   e_prime,              rep.removed_parallel,
                             rep.removed_bubble};
  };
  if (qs.empty()) {
    auto row = base_row();
    row.push_back(Cell());
    row.push_back(Cell());
    table.rows.push_back(std::move(row));
  } else {
    for (int q : qs) {
      auto row = base_row();
      row.push_back(q);
      if (colored)
        row.push_back(Cell());  // colored diagrams carry operator marks, not a plain q^N value
      else
        row.push_back(value(d, q));
      table.rows.push_back(std::move(row));
    }
  }
  emit(table, o, "cobweb diagram=" + text + " q=" + join_ints(qs));
}

int run_verify(const std::string& suite, const std::vector<int>& qs, int samples,
               std::uint64_t seed, bool seed_given, int depth, const CommonOpts& o) {
  std::vector<CheckResult> results;
  const std::string cli_path = std::filesystem::read_symlink("/proc/self/exe").string();
  auto wants = [&](std::initializer_list<const char*> names) {
    if (suite == "all") return true;
    for (const char* name : names)
      if (suite == name) return true;
    return false;
  };
  bool known = suite == "all";
  if (wants({"diaconis", "moments"})) {
    results.push_back(qs.empty() ? check_trace_power_moments() : check_trace_power_moments(qs));
    known = true;
  }
  if (wants({"weingarten"})) {
    results.push_back(qs.empty() ? check_weingarten_asymptotics()
                                 : check_weingarten_asymptotics({6, 9}, qs));
    known = true;
  }
  if (wants({"correlators", "theorem1"})) {
    results.push_back(check_correlator_averages());
    known = true;
  }
  if (wants({"second-moment", "theorem3"})) {
    results.push_back(check_second_moment_symmetry(samples > 0 ? samples : 20000,
                                                   seed_given ? seed : 20260814ull));
    known = true;
  }
  if (wants({"higher-moments", "theorem2"})) {
    results.push_back(qs.empty() ? check_higher_moment_decay() : check_higher_moment_decay(qs));
    known = true;
  }
  if (wants({"otoc", "theorem4"})) {
    std::vector<int> band = qs.empty() ? std::vector<int>{4, 8, 16} : qs;
    if (depth == 1) band.clear();  // anchors only
    results.push_back(check_otoc_leading_order(band));
    known = true;
  }
  if (wants({"cobweb"})) {
    results.push_back(check_cobweb_engine(samples > 0 ? samples : 200, seed_given ? seed : 1ull));
    known = true;
  }
  if (wants({"reproducibility", "repro"})) {
    results.push_back(check_reproducibility(cli_path));
    known = true;
  }
  if (!known) throw std::invalid_argument("unknown verify suite: " + suite);

  Table table;
  table.columns = {"check", "passed", "seconds", "detail"};
  bool all_passed = true;
  for (const auto& r : results) {
    table.rows.push_back({r.name, r.passed, r.seconds, r.detail});
    all_passed = all_passed && r.passed;
  }
  std::ostringstream cfg;
  cfg << "verify suite=" << suite << " q=" << join_ints(qs) << " samples=" << samples
      << " seed=" << seed << " T=" << depth;
  emit(table, o, cfg.str());
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo Haar averages of moments, correlators, and OTOCs of a "
               "q-dimensional quantum dot, plus the chord-diagram reduction engine"};
  app.require_subcommand(1);
  int exit_code = 0;

  // wg
  {
    auto* cmd = app.add_subcommand("wg", "Weingarten coefficients by cycle type");
    auto n = std::make_shared<int>(3);
    auto qs = std::make_shared<std::vector<int>>();
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--n", *n, "moment order (number of averaged pairs)")
        ->check(CLI::Range(1, 7))
        ->capture_default_str();
    cmd->add_option("--q", *qs, "dot dimensions")->delimiter(',')->required();
    add_common(cmd, *opts);
    cmd->callback([n, qs, opts]() { run_wg(*n, *qs, *opts); });
  }

  // avg-corr
  {
    auto* cmd = app.add_subcommand("avg-corr", "Haar-averaged n-point correlator");
    auto times = std::make_shared<std::vector<int>>();
    auto qs = std::make_shared<std::vector<int>>();
    auto mode = std::make_shared<std::string>("exact");
    auto n_samples = std::make_shared<long long>(4096);
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--times", *times, "correlator time sequence")->delimiter(',')->required();
    cmd->add_option("--q", *qs, "dot dimensions")->delimiter(',')->required();
    cmd->add_option("--mode", *mode, "evaluation mode")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    cmd->add_option("--n", *n_samples, "Monte Carlo sample count")->capture_default_str();
    add_common(cmd, *opts);
    cmd->callback(
        [times, qs, mode, n_samples, opts]() { run_avg_corr(*times, *qs, *mode, *n_samples, *opts); });
  }

  // moments
  {
    auto* cmd = app.add_subcommand("moments", "moments of products of traces of powers");
    auto powers = std::make_shared<std::vector<int>>();
    auto qs = std::make_shared<std::vector<int>>();
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--powers", *powers, "power multiset, e.g. 1,1,2")->delimiter(',')->required();
    cmd->add_option("--q", *qs, "dot dimensions")->delimiter(',')->required();
    add_common(cmd, *opts);
    cmd->callback([powers, qs, opts]() { run_moments(*powers, *qs, *opts); });
  }

  // second-moment
  {
    auto* cmd = app.add_subcommand("second-moment",
                                   "average of corr(times) * conj(corr(times2))");
    auto times = std::make_shared<std::vector<int>>();
    auto times2 = std::make_shared<std::vector<int>>();
    auto qs = std::make_shared<std::vector<int>>();
    auto mode = std::make_shared<std::string>("exact");
    auto n_samples = std::make_shared<long long>(4096);
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--times", *times, "first time sequence")->delimiter(',')->required();
    cmd->add_option("--times2", *times2, "second time sequence (default: same as --times)")
        ->delimiter(',');
    cmd->add_option("--q", *qs, "dot dimensions")->delimiter(',')->required();
    cmd->add_option("--mode", *mode, "evaluation mode")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    cmd->add_option("--n", *n_samples, "Monte Carlo sample count")->capture_default_str();
    add_common(cmd, *opts);
    cmd->callback([times, times2, qs, mode, n_samples, opts]() {
      run_second_moment(*times, *times2, *qs, *mode, *n_samples, *opts);
    });
  }

  // otoc
  {
    auto* cmd = app.add_subcommand("otoc", "regularized out-of-time-order correlator");
    auto layers = std::make_shared<std::string>("");
    auto qs = std::make_shared<std::vector<int>>();
    auto mode = std::make_shared<std::string>("exact");
    auto n_samples = std::make_shared<long long>(4096);
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--layers", *layers,
                    "insertion layers, e.g. \"1,1b;2,2b\" (empty = no layers)")
        ->capture_default_str();
    cmd->add_option("--q", *qs, "dot dimensions")->delimiter(',')->required();
    cmd->add_option("--mode", *mode, "evaluation mode")
        ->check(CLI::IsMember({"exact", "mc", "leading"}))
        ->capture_default_str();
    cmd->add_option("--n", *n_samples, "Monte Carlo sample count")->capture_default_str();
    add_common(cmd, *opts);
    cmd->callback(
        [layers, qs, mode, n_samples, opts]() { run_otoc(*layers, *qs, *mode, *n_samples, *opts); });
  }

  // scaling
  {
    auto* cmd = app.add_subcommand("scaling", "q sweep with the q^2-compensated column");
    auto times = std::make_shared<std::vector<int>>();
    auto qs = std::make_shared<std::vector<int>>();
    auto mode = std::make_shared<std::string>("exact");
    auto second = std::make_shared<bool>(false);
    auto n_samples = std::make_shared<long long>(4096);
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--times", *times, "correlator time sequence")->delimiter(',')->required();
    cmd->add_option("--q", *qs, "ascending dot dimensions")->delimiter(',')->required();
    cmd->add_option("--mode", *mode, "evaluation mode")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    cmd->add_flag("--second-moment", *second, "probe <|corr|^2> instead of <corr>");
    cmd->add_option("--n", *n_samples, "Monte Carlo sample count")->capture_default_str();
    add_common(cmd, *opts);
    cmd->callback([times, qs, mode, second, n_samples, opts]() {
      run_scaling(*times, *qs, *mode, *second, *n_samples, *opts);
    });
  }

  // cobweb
  {
    auto* cmd = app.add_subcommand("cobweb", "chord-diagram loops, crossings, and reduction");
    auto diagram = std::make_shared<std::string>();
    auto qs = std::make_shared<std::vector<int>>();
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("--diagram", *diagram, "diagram text, e.g. \"4; 0-2, 1-3\"")->required();
    cmd->add_option("--q", *qs, "dot dimensions (uncolored value = q^loops)")->delimiter(',');
    add_common(cmd, *opts);
    cmd->callback([diagram, qs, opts]() { run_cobweb(*diagram, *qs, *opts); });
  }

  // verify
  {
    auto* cmd = app.add_subcommand("verify", "self-checks; exit code 1 if any check fails");
    auto suite = std::make_shared<std::string>("all");
    auto qs = std::make_shared<std::vector<int>>();
    auto samples = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto depth = std::make_shared<int>(2);
    auto opts = std::make_shared<CommonOpts>();
    cmd->add_option("suite", *suite,
                    "all, moments, weingarten, correlators, second-moment, higher-moments, "
                    "otoc, cobweb, repro")
        ->capture_default_str();
    cmd->add_option("--q", *qs, "override the q sweep of the chosen suite")->delimiter(',');
    cmd->add_option("--samples", *samples, "override the sample count of the chosen suite");
    auto* seed_opt = cmd->add_option("--seed", *seed, "override the seed of the chosen suite")
                         ->envname("QHAAR_SEED");
    cmd->add_option("--T", *depth, "layer depth for the otoc suite (1 = anchors only)")
        ->check(CLI::Range(1, 2));
    cmd->add_option("--format", opts->format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", opts->out, "output path, '-' for stdout")->capture_default_str();
    cmd->callback([suite, qs, samples, seed, depth, opts, seed_opt, &exit_code]() {
      opts->seed = *seed;
      exit_code =
          run_verify(*suite, *qs, *samples, *seed, seed_opt->count() > 0, *depth, *opts);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
