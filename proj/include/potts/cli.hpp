#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "potts/crt.hpp"
#include "potts/engine.hpp"
#include "potts/error.hpp"
#include "potts/graph.hpp"
#include "potts/oracle.hpp"
#include "potts/roots.hpp"
#include "potts/schedule.hpp"
#include "potts/treedecomp.hpp"
#include "potts/weights.hpp"

namespace potts::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCompute = 3;
inline constexpr int kExitGuard = 4;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

inline TreeDecomposition read_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open decomposition file '" + path + "'");
  return parse_decomposition(in);
}

/// Coefficients of Z / den^M, each printed as a reduced fraction.
inline std::string format_rational_poly(const IntPoly& scaled, const BigInt& den, std::size_t n_edges) {
  if (scaled.is_zero()) return "0";
  BigInt total = 1;
  for (std::size_t i = 0; i < n_edges; ++i) total *= den;
  std::string out;
  for (std::size_t k = 0; k < scaled.coeffs().size(); ++k) {
    if (k) out += ' ';
    out += to_string(Rational(scaled.coeffs()[k], total));
  }
  return out;
}

/// Everything a single-graph run reports.
struct RunReport {
  int n_vertices = 0;
  std::size_t n_edges = 0;
  std::size_t bags = 0;
  std::size_t n_max = 0;
  int width = -1;
  std::size_t fusions = 0;
  std::string mode;
  double wall_seconds = 0.0;
  std::size_t peak_table_size = 0;
  std::size_t primes_used = 0;
  std::optional<std::string> result;

  Json to_json() const {
    Json j;
    j["N"] = n_vertices;
    j["M"] = n_edges;
    j["B"] = bags;
    j["n_max"] = n_max;
    j["width"] = width;
    j["F"] = fusions;
    j["mode"] = mode;
    j["wall_time_s"] = wall_seconds;
    j["peak_table_size"] = peak_table_size;
    if (primes_used) j["primes_used"] = primes_used;
    j["result"] = result ? Json(*result) : Json(nullptr);
    return j;
  }
};

struct Prepared {
  TreeDecomposition td;
  Schedule schedule;
};

inline Prepared prepare(const Graph& g, const std::string& decomposition_file, bool path, bool planar) {
  Prepared p;
  int root = kAutoRoot;
  if (!decomposition_file.empty()) {
    p.td = read_decomposition_file(decomposition_file);
    const auto check = verify_decomposition(g, p.td);
    if (!check.valid) throw InputError("invalid decomposition: " + check.violation);
    root = p.td.root;
  } else {
    DecomposeOptions opt;
    opt.path = path;
    p.td = decompose(g, opt);
  }
  p.schedule = build_schedule(g, p.td, root, planar);
  p.td.root = p.schedule.root;
  return p;
}

inline void fill_report(RunReport& r, const Graph& g, const Prepared& p) {
  r.n_vertices = g.n_vertices();
  r.n_edges = g.n_edges();
  r.bags = p.td.bags.size();
  r.n_max = p.td.n_max();
  r.width = p.td.width();
  r.fusions = fusion_count(p.schedule);
}

/// Chromatic polynomial through the adaptive modular path.
inline IntPoly chromatic_by_crt(const Graph& g, const Schedule& s, bool pruning, std::size_t* primes_used,
                                std::size_t* peak) {
  auto compute = [&](std::uint32_t p) {
    Engine<ModularRing> engine(ModularRing(p, -1), EngineOptions<ModularRing>{pruning, {}});
    ModPoly r = engine.run(g, s);
    if (peak) *peak = std::max(*peak, engine.stats().peak_table_size);
    return r;
  };
  auto verify = [&](std::uint64_t q0, std::uint32_t p) { return compute(p).eval(q0); };
  return adaptive_crt_run(compute, verify, PrimeSchedule::cap_from_env(), primes_used);
}

inline int cmd_chromatic(const std::string& file, bool no_prune, bool crt, bool report, bool path,
                         const std::string& decomposition_file, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = read_graph_file(file);
  const Prepared p = prepare(g, decomposition_file, path, true);
  RunReport rep;
  fill_report(rep, g, p);
  IntPoly chi;
  if (crt) {
    rep.mode = "modular-crt";
    chi = chromatic_by_crt(g, p.schedule, !no_prune, &rep.primes_used, &rep.peak_table_size);
  } else {
    rep.mode = "univariate";
    Engine<UnivariateRing> engine(UnivariateRing{}, EngineOptions<UnivariateRing>{!no_prune, {}});
    chi = engine.run(g, p.schedule);
    rep.peak_table_size = engine.stats().peak_table_size;
  }
  rep.result = format_poly(chi);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << *rep.result << '\n';
  if (report) err << rep.to_json().dump() << '\n';
  return kExitOk;
}

struct PottsFlags {
  std::optional<std::string> v;
  bool bivariate = false;
  std::vector<double> eval;
  std::optional<double> coupling;
  std::optional<double> q;
  std::string decomposition_file;
  bool path = false;
};

inline int cmd_potts(const std::string& file, const PottsFlags& f, std::ostream& out) {
  const int chosen = int(f.v.has_value()) + int(f.bivariate) + int(!f.eval.empty()) + int(f.coupling.has_value());
  if (chosen != 1) throw InputError("exactly one of --v, --bivariate, --eval, --coupling is required");
  if (f.coupling && !f.q) throw InputError("--coupling needs --q");
  if (f.q && !f.coupling) throw InputError("--q is only used with --coupling");

  const Graph g = read_graph_file(file);
  const Prepared p = prepare(g, f.decomposition_file, f.path, false);

  if (f.v) {
    const Rational v = parse_rational(*f.v);
    const auto r = run(g, p.schedule, EngineConfig{UnivariateMode{v}, false, {}});
    out << format_rational_poly(std::get<IntPoly>(r.value), denominator(v), g.n_edges()) << '\n';
  } else if (f.bivariate) {
    const auto r = run(g, p.schedule, EngineConfig{BivariateMode{}, false, {}});
    out << format_poly(std::get<BiPoly>(r.value));
  } else {
    double q, v;
    if (f.coupling) {
      q = *f.q;
      v = std::expm1(*f.coupling);
    } else {
      q = f.eval[0];
      v = f.eval[1];
    }
    const auto r = run(g, p.schedule, EngineConfig{ScalarMode{q, v}, false, {}});
    out << format_double(std::get<double>(r.value)) << '\n';
  }
  return kExitOk;
}

inline int cmd_decompose(const std::string& file, bool path, const std::string& order, std::optional<int> root,
                         bool bell_bound, std::ostream& out) {
  const Graph g = read_graph_file(file);
  DecomposeOptions opt;
  opt.path = path;
  if (order == "lex") {
    if (!path) throw InputError("--order applies to --path decompositions");
    opt.order.resize(static_cast<std::size_t>(g.n_vertices()));
    for (int i = 0; i < g.n_vertices(); ++i) opt.order[static_cast<std::size_t>(i)] = i;
  } else if (order != "greedy") {
    throw InputError("unknown order '" + order + "' (expected greedy or lex)");
  }
  TreeDecomposition td = decompose(g, opt);
  if (root && (*root < 0 || static_cast<std::size_t>(*root) >= td.bags.size()))
    throw InputError("--root out of range");
  const Schedule s = build_schedule(g, td, root.value_or(kAutoRoot), !bell_bound);
  td.root = s.root;
  out << format_decomposition(td);
  out << "estimate " << to_string(estimate_cost(g, td, s, !bell_bound)) << '\n';
  return kExitOk;
}

// splitmix64 step, used to give every ensemble member its own seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct EnsembleMember {
  bool ok = false;
  std::string error;
  RootSet roots;
  std::size_t violations = 0;
  std::size_t n_max = 0;
  double seconds = 0.0;
};

inline EnsembleMember run_member(int n, std::uint64_t seed) {
  EnsembleMember m;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Graph g = random_planar_graph(n, seed);
    const auto td = decompose(g);
    const auto s = build_schedule(g, td, kAutoRoot, true);
    m.n_max = td.n_max();
    Engine<UnivariateRing> engine(UnivariateRing{}, EngineOptions<UnivariateRing>{true, {}});
    const IntPoly chi = engine.run(g, s);
    m.roots = find_roots(chi);
    m.violations = audit_real_roots(m.roots).size();
    m.ok = true;
  } catch (const std::exception& e) {
    m.error = e.what();
  }
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

inline int cmd_ensemble(int n, int count, std::uint64_t seed, const std::string& outdir, int jobs,
                        std::ostream& out, std::ostream& err) {
  if (n < 1) throw InputError("--n must be positive");
  if (count < 0) throw InputError("--count must be nonnegative");
  if (jobs < 1) throw InputError("--jobs must be positive");
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw InputError("cannot create output directory '" + outdir + "': " + ec.message());

  std::vector<EnsembleMember> members(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      auto& m = members[static_cast<std::size_t>(i)];
      m = run_member(n, derive_seed(seed, static_cast<std::uint64_t>(i)));
      std::lock_guard lock(log_mutex);
      err << "graph " << i << (m.ok ? " ok" : " FAILED: " + m.error) << " n_max=" << m.n_max
          << " violations=" << m.violations << " time=" << format_double(m.seconds) << "s\n";
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min(jobs, std::max(count, 1)); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Collect in graph order so the outputs do not depend on scheduling.
  EnsembleStats stats;
  std::size_t failed = 0, violations = 0, unconverged = 0;
  double total = 0.0, slowest = 0.0;
  std::map<std::size_t, std::size_t> n_max_hist;
  for (const auto& m : members) {
    total += m.seconds;
    slowest = std::max(slowest, m.seconds);
    if (!m.ok) {
      ++failed;
      continue;
    }
    stats.add(m.roots);
    violations += m.violations;
    unconverged += m.roots.converged ? 0 : 1;
    ++n_max_hist[m.n_max];
  }

  auto write = [&](const std::string& name, auto&& writer) {
    const auto path = std::filesystem::path(outdir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    writer(f);
    if (!f) throw InputError("error writing " + path.string());
  };
  write("complex_density.csv", [&](std::ostream& f) { write_complex_density_csv(f, stats); });
  write("real_hist.csv", [&](std::ostream& f) { write_real_hist_csv(f, stats); });
  write("beraha.csv", [&](std::ostream& f) { write_beraha_csv(f, stats); });

  Json summary;
  summary["n"] = n;
  summary["count"] = count;
  summary["seed"] = seed;
  summary["succeeded"] = count - static_cast<int>(failed);
  summary["failed"] = failed;
  summary["audit_violations"] = violations;
  summary["unconverged_root_sets"] = unconverged;
  summary["total_time_s"] = total;
  summary["mean_time_s"] = count ? total / count : 0.0;
  summary["max_time_s"] = slowest;
  Json hist = Json::object();
  for (const auto& [k, c] : n_max_hist) hist[std::to_string(k)] = c;
  summary["n_max_distribution"] = hist;
  write("summary.json", [&](std::ostream& f) { f << summary.dump(2) << '\n'; });
  out << summary.dump() << '\n';
  return kExitOk;
}

inline int cmd_oracle(const std::string& file, bool fk, std::optional<int> colourings, bool delcon,
                      const std::optional<std::string>& v, std::ostream& out) {
  if (int(fk) + int(colourings.has_value()) + int(delcon) != 1)
    throw InputError("exactly one of --fk, --colourings, --delcon is required");
  const Graph g = read_graph_file(file);
  if (colourings) {
    out << colouring_count(g, *colourings) << '\n';
    return kExitOk;
  }
  if (v) {
    const Rational rv = parse_rational(*v);
    const UnivariateRing ring(rv);
    const IntPoly z = fk ? fk_brute_force(g, ring) : deletion_contraction(g, ring);
    out << format_rational_poly(z, denominator(rv), g.n_edges()) << '\n';
  } else {
    const BivariateRing ring;
    out << format_poly(fk ? fk_brute_force(g, ring) : deletion_contraction(g, ring));
  }
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact Potts partition functions and chromatic polynomials by tree-decomposed transfer matrices"};
  app.require_subcommand(1);

  std::string file, decomposition_file;

  auto* chrom = app.add_subcommand("chromatic", "chromatic polynomial, coefficients in ascending order");
  bool no_prune = false, crt = false, report = false, chrom_path = false;
  chrom->add_option("graph", file, "graph file")->required();
  chrom->add_flag("--no-prune", no_prune, "disable pruning");
  chrom->add_flag("--crt", crt, "compute modulo primes and lift");
  chrom->add_flag("--report", report, "print a JSON run report to stderr");
  chrom->add_flag("--path", chrom_path, "use a path decomposition");
  chrom->add_option("--use-decomposition", decomposition_file, "decomposition file to use");

  auto* pt = app.add_subcommand("potts", "Potts partition function");
  PottsFlags pf;
  pt->add_option("graph", file, "graph file")->required();
  pt->add_option("--v", pf.v, "fixed rational v, as p or p/q");
  pt->add_flag("--bivariate", pf.bivariate, "full polynomial in Q and v");
  pt->add_option("--eval", pf.eval, "evaluate at numeric Q v")->expected(2);
  pt->add_option("--coupling", pf.coupling, "coupling K, v = exp(K) - 1 (needs --q)");
  pt->add_option("--q", pf.q, "numeric Q for --coupling");
  pt->add_flag("--path", pf.path, "use a path decomposition");
  pt->add_option("--use-decomposition", pf.decomposition_file, "decomposition file to use");

  auto* dec = app.add_subcommand("decompose", "print a tree decomposition and its cost estimate");
  bool dec_path = false, auto_root = false, bell_bound = false;
  std::string order = "greedy";
  std::optional<int> root;
  dec->add_option("graph", file, "graph file")->required();
  dec->add_flag("--path", dec_path, "path decomposition by active-vertex slicing");
  dec->add_option("--order", order, "vertex order for --path: greedy or lex");
  auto* root_opt = dec->add_option("--root", root, "root bag index");
  dec->add_flag("--auto-root", auto_root, "choose the cheapest root (default)")->excludes(root_opt);
  dec->add_flag("--bell", bell_bound, "bound states by Bell rather than Catalan numbers");

  auto* ens = app.add_subcommand("ensemble", "chromatic roots over random planar graphs");
  int ens_n = 30, ens_count = 10, jobs = 1;
  std::uint64_t seed = 1;
  std::string outdir = ".";
  ens->add_option("--n", ens_n, "vertices per graph");
  ens->add_option("--count", ens_count, "number of graphs");
  ens->add_option("--seed", seed, "base seed");
  ens->add_option("--outdir", outdir, "output directory");
  ens->add_option("--jobs", jobs, "worker threads");

  auto* orc = app.add_subcommand("oracle", "brute-force references");
  bool fk = false, delcon = false;
  std::optional<int> colourings;
  std::optional<std::string> orc_v;
  orc->add_option("graph", file, "graph file")->required();
  orc->add_flag("--fk", fk, "sum over all edge subsets");
  orc->add_option("--colourings", colourings, "count proper colourings with q colours");
  orc->add_flag("--delcon", delcon, "deletion-contraction");
  orc->add_option("--v", orc_v, "fixed rational v for --fk or --delcon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (chrom->parsed()) return cmd_chromatic(file, no_prune, crt, report, chrom_path, decomposition_file, out, err);
    if (pt->parsed()) return cmd_potts(file, pf, out);
    if (dec->parsed()) return cmd_decompose(file, dec_path, order, root, bell_bound, out);
    if (ens->parsed()) return cmd_ensemble(ens_n, ens_count, seed, outdir, jobs, out, err);
    if (orc->parsed()) return cmd_oracle(file, fk, colourings, delcon, orc_v, out);
  } catch (const GuardError& e) {
    err << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ComputeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitInput;
}

}  // namespace potts::cli
