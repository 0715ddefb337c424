#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "risd2d/experiment/config.hpp"
#include "risd2d/experiment/csv.hpp"
#include "risd2d/experiment/validation.hpp"
#include "risd2d/montecarlo.hpp"

namespace risd2d::experiment {

inline constexpr const char* kVersion = "0.1.0";

// Geometry and link-budget pins for the figure profiles. Everything not listed
// here comes from the loaded configuration.
namespace profile {
inline constexpr double kContourDbd = 3.5;          // fig7, fig8b
inline constexpr double kBenchmarkDbd = 1.0;        // fig9, fig10
inline constexpr double kFig10ThresholdDb = 2.0;
inline constexpr int kFig10Elements = 40;
}  // namespace profile

struct RunResult {
  std::string experiment;
  std::vector<std::string> outputs;  // file names relative to the output directory
  bool passed = true;                // only meaningful for validate
};

struct RunOptions {
  std::string out_dir;
  McOptions mc;
  bool write_manifest = true;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return v;
}

inline LinkStats stats_at(const SystemParams& p, const Topology& topo, const std::optional<FixedLink>& fl, double d,
                          double p_s) {
  if (fl) {
    return make_link_stats(p, path_loss(fl->d_sr, p, LinkClass::Local), path_loss(fl->d_rd, p, LinkClass::Local), p_s);
  }
  return make_link_stats(p, topo, d, p_s);
}

inline double placement_for(const ExperimentConfig& c, const Topology& topo) {
  if (c.placement) {
    topo.check_feasible(*c.placement);
    return *c.placement;
  }
  return optimal_placement(topo).selected;
}

struct OpPoint {
  double closed = 0.0;
  double quad = 0.0;
  McEstimate sim;
};

inline OpPoint eval_op(const LinkStats& ls, const SystemParams& p, std::uint64_t trials, std::uint64_t seed,
                       const McOptions& mc) {
  return {outage_probability(ls, p).p_out, outage_by_quadrature(ls, p), estimate_outage(ls, p, trials, seed, mc)};
}

class Writer {
 public:
  Writer(std::string dir, RunResult& r) : dir_(std::move(dir)), r_(r) {}
  void put(const std::string& name, const CsvTable& t) {
    t.write((std::filesystem::path(dir_) / name).string());
    r_.outputs.push_back(name);
  }
  void put_text(const std::string& name, const std::string& body) {
    std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
    if (!f) throw IoError("cannot write '" + name + "' in '" + dir_ + "'");
    f << body;
    r_.outputs.push_back(name);
  }

 private:
  std::string dir_;
  RunResult& r_;
};

// Points run sequentially when MC already fans out, concurrently otherwise.
template <class T, class Fn>
std::vector<T> over_points(std::size_t n, const McOptions& mc, Fn&& fn) {
  McOptions inner = mc;
  inner.workers = 1;
  return parallel_map<T>(n, [&](std::size_t i) { return fn(i, inner); }, mc.workers);
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------- experiments

inline void run_fig3(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  const std::vector<int> ns = {10, 20, 40, 80};
  const auto gs_db = detail::linspace(0.0, 20.0, 11);
  const double d = c.fixed_link ? 0.0 : detail::placement_for(c, c.topology);
  CsvTable t({"n_elements", "gamma_s_db", "sinr_hat", "sinr_sim", "std_error", "rel_error"});
  const std::size_t total = ns.size() * gs_db.size();
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    SystemParams p = c.system;
    p.n_elements = ns[k / gs_db.size()];
    const double g_db = gs_db[k % gs_db.size()];
    const auto ls = detail::stats_at(p, c.topology, c.fixed_link, d, db_to_linear(g_db) * p.noise_power);
    const auto mode = c.moment_mode.value_or(default_moment_mode(p.n_antennas));
    const double hat = sinr_hat(ls, p, mode).value;
    const auto sim = estimate_mean_sinr(ls, p, c.trials, c.seed, mc);
    return std::vector<double>{static_cast<double>(p.n_elements), g_db, hat, sim.value, sim.std_error,
                               (hat - sim.value) / sim.value};
  });
  for (const auto& r : rows) {
    CsvTable::Row row;
    row << static_cast<int>(r[0]) << r[1] << r[2] << r[3] << r[4] << r[5];
    t.add(row);
  }
  w.put("fig3.csv", t);
}

inline void run_fig4(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  const std::vector<int> ms = {2, 5};
  std::vector<int> ns;
  for (int n = 10; n <= 100; n += 10) ns.push_back(n);
  CsvTable t({"n_antennas", "n_elements", "scheme", "d", "p_s", "sinr_hat", "sinr_sim", "std_error"});
  const BenchmarkOptions bo;
  const std::size_t total = ms.size() * ns.size() * 2;
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    SystemParams p = c.system;
    p.n_antennas = ms[k / (ns.size() * 2)];
    p.n_elements = ns[(k / 2) % ns.size()];
    const bool joint = k % 2 == 0;
    const auto js = joint_optimize(c.topology, p);
    double d = js.d_selected, ps = js.p_s_star;
    if (!joint) {
      d = c.topology.d_sd - bo.fixed_d_offset;
      ps = std::min(db_to_linear(linear_to_db(p.p_s_max) - bo.fixed_power_backoff_db), js.p_ub);
    }
    const auto ls = make_link_stats(p, c.topology, d, ps);
    const auto mode = c.moment_mode.value_or(default_moment_mode(p.n_antennas));
    const auto sim = estimate_mean_sinr(ls, p, c.trials, c.seed, mc);
    return std::vector<double>{static_cast<double>(p.n_antennas), static_cast<double>(p.n_elements), joint ? 1.0 : 0.0,
                               d, ps, sinr_hat(ls, p, mode).value, sim.value, sim.std_error};
  });
  for (const auto& r : rows) {
    CsvTable::Row row;
    row << static_cast<int>(r[0]) << static_cast<int>(r[1]) << (r[2] > 0.5 ? "joint" : "fixed") << r[3] << r[4] << r[5]
        << r[6] << r[7];
    t.add(row);
  }
  w.put("fig4.csv", t);
}

inline const std::vector<double>& fig5_alpha_db() {
  static const std::vector<double> v = {0.0, 5.0, 10.0, 15.0};
  return v;
}

inline void run_fig5(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w, bool variance) {
  std::vector<int> ms;
  for (int m = 1; m <= kMaxAntennas; m = m < 8 ? m + 1 : m * 2) ms.push_back(m);
  const auto& alphas = fig5_alpha_db();
  const std::size_t total = alphas.size() * ms.size();
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    const double a_db = alphas[k / ms.size()];
    const int m = ms[k % ms.size()];
    const double a = db_to_linear(a_db);
    const auto ex = mean_var_gamma_v(a, m, MomentMode::ExactSum);
    const auto gu = mean_var_gamma_v(a, m, MomentMode::Gumbel);
    const auto sim = estimate_gamma_v(a, m, c.trials, c.seed, mc);
    if (variance) return std::vector<double>{a_db, double(m), ex.variance, gu.variance, sim.variance, sim.variance_std_error};
    return std::vector<double>{a_db, double(m), ex.mean, gu.mean, sim.mean.value, sim.mean.std_error};
  });
  const char* what = variance ? "variance" : "mean";
  CsvTable t({"alpha_bd_db", "n_antennas", std::string(what) + "_exact", std::string(what) + "_gumbel",
              std::string(what) + "_sim", "std_error"});
  for (const auto& r : rows) {
    CsvTable::Row row;
    row << r[0] << static_cast<int>(r[1]) << r[2] << r[3] << r[4] << r[5];
    t.add(row);
  }
  w.put(variance ? "fig5b.csv" : "fig5a.csv", t);
}

inline void run_fig6(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  const std::vector<int> ns = {50, 60};
  const std::vector<double> gs_db = {3.0, 10.0};
  const std::vector<double> dbds = {3.5, 4.5};
  const auto th_db = detail::linspace(-10.0, 10.0, 11);
  const double d = c.fixed_link ? 0.0 : detail::placement_for(c, c.topology);
  const std::size_t per = th_db.size();
  const std::size_t total = ns.size() * gs_db.size() * dbds.size() * per;
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    std::size_t q = k / per;
    const double th = th_db[k % per];
    const double dbd = dbds[q % dbds.size()];
    q /= dbds.size();
    const double g = gs_db[q % gs_db.size()];
    const int n = ns[q / gs_db.size()];
    SystemParams p = c.system;
    p.n_elements = n;
    p.d_bd = dbd;
    p.sinr_threshold = db_to_linear(th);
    const auto ls = detail::stats_at(p, c.topology, c.fixed_link, d, db_to_linear(g) * p.noise_power);
    const auto e = detail::eval_op(ls, p, c.trials, c.seed, mc);
    return std::vector<double>{double(n), g, dbd, th, e.closed, e.quad, e.sim.value, e.sim.std_error};
  });
  CsvTable t({"n_elements", "gamma_s_db", "d_bd", "gamma_th_db", "op_closed", "op_quad", "op_sim", "std_error"});
  for (const auto& r : rows) {
    CsvTable::Row row;
    row << static_cast<int>(r[0]) << r[1] << r[2] << r[3] << r[4] << r[5] << r[6] << r[7];
    t.add(row);
  }
  w.put("fig6.csv", t);
}

inline SystemParams fig7_params(const ExperimentConfig& c) {
  SystemParams p = c.system;
  p.d_bd = profile::kContourDbd;
  p.sinr_threshold = 1.0;
  return p;
}

inline GridSpec fig7_grid(const SystemParams& p) {
  GridSpec g;
  g.p_min = 1.0;
  g.p_max = p.p_s_max;
  return g;
}

inline void run_fig7(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  const auto p = fig7_params(c);
  const auto surf = grid_search(c.topology, p, fig7_grid(p), GridObjective::ClosedFormOP, o.mc);
  CsvTable t({"d", "p_s_db", "op_closed", "feasible"});
  for (std::size_t i = 0; i < surf.d_values.size(); ++i)
    for (std::size_t j = 0; j < surf.p_values.size(); ++j) {
      CsvTable::Row row;
      row << surf.d_values[i] << linear_to_db(surf.p_values[j]) << surf.at(int(i), int(j))
          << int(surf.feasible[i * surf.p_values.size() + j]);
      t.add(row);
    }
  w.put("fig7_surface.csv", t);

  // Candidate placements at the optimal power, each with its MC estimate.
  const auto js = joint_optimize(c.topology, p);
  CsvTable s({"label", "d", "p_s", "objective_z", "feasible", "selected", "op_closed", "op_sim", "std_error"});
  for (const auto& cand : js.candidates) {
    CsvTable::Row row;
    row << cand.label << cand.d << js.p_s_star << cand.objective_z << int(cand.feasible)
        << int(cand.feasible && std::abs(cand.d - js.d_selected) < 1e-12);
    if (cand.feasible) {
      const auto ls = make_link_stats(p, c.topology, cand.d, js.p_s_star);
      const auto sim = estimate_outage(ls, p, c.trials, c.seed, o.mc);
      row << outage_probability(ls, p).p_out << sim.value << sim.std_error;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row << nan << nan << nan;
    }
    s.add(row);
  }
  w.put("fig7_candidates.csv", s);
}

inline void run_fig8a(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  const std::vector<double> dscs = {1.5, 2.5};
  const std::vector<double> th_db = {0.0, 2.0};
  const auto dbds = detail::linspace(1.0, 5.0, 9);
  const double d = detail::placement_for(c, c.topology);
  const std::size_t total = dscs.size() * th_db.size() * dbds.size();
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    SystemParams p = c.system;
    p.d_sc = dscs[k / (th_db.size() * dbds.size())];
    const double th = th_db[(k / dbds.size()) % th_db.size()];
    p.sinr_threshold = db_to_linear(th);
    p.d_bd = dbds[k % dbds.size()];
    const double ps = optimal_power(p).p_s_star;
    const auto ls = make_link_stats(p, c.topology, d, ps);
    const auto e = detail::eval_op(ls, p, c.trials, c.seed, mc);
    return std::vector<double>{p.d_sc, th, p.d_bd, ps, d, e.closed, e.quad, e.sim.value, e.sim.std_error};
  });
  CsvTable t({"d_sc", "gamma_th_db", "d_bd", "p_s", "d", "op_closed", "op_quad", "op_sim", "std_error"});
  for (const auto& r : rows) {
    CsvTable::Row row;
    for (double v : r) row << v;
    t.add(row);
  }
  w.put("fig8a.csv", t);
}

inline void run_fig8b(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  const std::vector<double> th_db = {2.3, 3.6};
  const std::vector<double> alphas = {0.7, 0.8};
  const auto iv = c.topology.feasible_interval();
  const auto ds = detail::linspace(iv.lower, iv.upper, 21);
  const std::size_t total = th_db.size() * alphas.size() * ds.size();
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    SystemParams p = c.system;
    p.d_bd = profile::kContourDbd;
    const double th = th_db[k / (alphas.size() * ds.size())];
    p.sinr_threshold = db_to_linear(th);
    p.element_amplitude = alphas[(k / ds.size()) % alphas.size()];
    const double d = ds[k % ds.size()];
    const double ps = optimal_power(p).p_s_star;
    const auto ls = make_link_stats(p, c.topology, d, ps);
    const auto e = detail::eval_op(ls, p, c.trials, c.seed, mc);
    return std::vector<double>{p.element_amplitude, th, d, ps, e.closed, e.quad, e.sim.value, e.sim.std_error};
  });
  CsvTable t({"alpha", "gamma_th_db", "d", "p_s", "op_closed", "op_quad", "op_sim", "std_error"});
  for (const auto& r : rows) {
    CsvTable::Row row;
    for (double v : r) row << v;
    t.add(row);
  }
  w.put("fig8b.csv", t);
}

struct BenchmarkCase {
  std::string name;
  int n_elements;
  double gamma_th_db;
  int n_antennas = 1;
};

inline std::vector<BenchmarkCase> fig9_cases() {
  return {{"case1", 40, 0.0}, {"case2", 60, 0.0}, {"case3", 40, 2.0}, {"case4", 60, 2.0}};
}

inline SystemParams benchmark_params(const SystemParams& base, const BenchmarkCase& bc) {
  SystemParams p = base;
  p.d_bd = profile::kBenchmarkDbd;
  p.n_elements = bc.n_elements;
  p.sinr_threshold = db_to_linear(bc.gamma_th_db);
  p.n_antennas = bc.n_antennas;
  return p;
}

namespace detail {

inline void benchmark_rows(const ExperimentConfig& c, const McOptions& mc, const BenchmarkCase& bc, CsvTable& t,
                           BenchmarkResult& out) {
  const auto p = benchmark_params(c.system, bc);
  out = benchmark_schemes(c.topology, p);
  for (const SchemeResult* s : {&out.joint, &out.optimal_d_fixed_power, &out.optimal_power_fixed_d, &out.fixed_fixed}) {
    const auto ls = make_link_stats(p, c.topology, s->d, s->p_s);
    const auto sim = estimate_outage(ls, p, c.trials, c.seed, mc);
    CsvTable::Row row;
    row << bc.name << bc.n_elements << bc.gamma_th_db << bc.n_antennas << s->name << s->d << s->p_s << s->outage
        << sim.value << sim.std_error << s->sinr_hat;
    t.add(row);
  }
}

inline std::vector<std::string> benchmark_header() {
  return {"case", "n_elements", "gamma_th_db", "n_antennas", "scheme", "d", "p_s",
          "op_closed", "op_sim", "std_error", "sinr_hat"};
}

}  // namespace detail

inline void run_fig9(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  CsvTable t(detail::benchmark_header());
  CsvTable g({"case", "reduction_vs_optimal_power", "reduction_vs_optimal_distance", "increase_vs_optimal_power",
              "increase_vs_optimal_distance"});
  for (const auto& bc : fig9_cases()) {
    BenchmarkResult r;
    detail::benchmark_rows(c, o.mc, bc, t, r);
    CsvTable::Row row;
    row << bc.name << BenchmarkResult::reduction(r.joint, r.optimal_power_fixed_d)
        << BenchmarkResult::reduction(r.joint, r.optimal_d_fixed_power)
        << BenchmarkResult::increase(r.joint, r.optimal_power_fixed_d)
        << BenchmarkResult::increase(r.joint, r.optimal_d_fixed_power);
    g.add(row);
  }
  w.put("fig9.csv", t);
  w.put("fig9_gains.csv", g);
}

inline void run_fig10(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  CsvTable t(detail::benchmark_header());
  CsvTable g({"n_antennas", "increase_joint", "increase_optimal_distance", "increase_optimal_power"});
  BenchmarkResult base;
  for (int m = 1; m <= 4; ++m) {
    BenchmarkResult r;
    detail::benchmark_rows(c, o.mc, {"m" + std::to_string(m), profile::kFig10Elements, profile::kFig10ThresholdDb, m}, t, r);
    if (m == 1) base = r;
    CsvTable::Row row;
    row << m << r.joint.outage / base.joint.outage - 1.0
        << r.optimal_d_fixed_power.outage / base.optimal_d_fixed_power.outage - 1.0
        << r.optimal_power_fixed_d.outage / base.optimal_power_fixed_d.outage - 1.0;
    g.add(row);
  }
  w.put("fig10.csv", t);
  w.put("fig10_increase.csv", g);
}

inline void run_custom(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  std::vector<std::string> header;
  std::size_t total = 1;
  for (const auto& ax : c.sweep) {
    header.push_back(ax.path);
    total *= ax.values.size();
  }
  for (const char* h : {"d", "p_s", "op_closed", "op_quad", "op_sim", "std_error", "sinr_hat", "sinr_sim",
                        "sinr_std_error"})
    header.emplace_back(h);
  auto rows = detail::over_points<std::vector<double>>(total, o.mc, [&](std::size_t k, const McOptions& mc) {
    ExperimentConfig pt = c;
    std::vector<double> r;
    std::size_t rem = k;
    std::vector<double> coords(c.sweep.size());
    for (std::size_t a = c.sweep.size(); a-- > 0;) {
      const auto& ax = c.sweep[a];
      coords[a] = ax.values[rem % ax.values.size()];
      rem /= ax.values.size();
    }
    for (std::size_t a = 0; a < c.sweep.size(); ++a) set_parameter(pt, c.sweep[a].path, coords[a]);
    pt.system.validate();
    const double d = pt.fixed_link ? 0.0 : detail::placement_for(pt, pt.topology);
    const double ps = optimal_power(pt.system).p_s_star;
    const auto ls = detail::stats_at(pt.system, pt.topology, pt.fixed_link, d, ps);
    const auto e = detail::eval_op(ls, pt.system, pt.trials, pt.seed, mc);
    const auto mode = pt.moment_mode.value_or(default_moment_mode(pt.system.n_antennas));
    const auto s = estimate_mean_sinr(ls, pt.system, pt.trials, pt.seed, mc);
    r = coords;
    for (double v : {pt.fixed_link ? std::numeric_limits<double>::quiet_NaN() : d, ps, e.closed, e.quad, e.sim.value,
                     e.sim.std_error, sinr_hat(ls, pt.system, mode).value, s.value, s.std_error})
      r.push_back(v);
    return r;
  });
  CsvTable t(header);
  for (const auto& r : rows) {
    CsvTable::Row row;
    for (double v : r) row << v;
    t.add(row);
  }
  w.put("custom.csv", t);
}

// Oracle suite on the loaded profile. Sets passed = false on any failed check.
inline bool run_validate(const ExperimentConfig& c, const RunOptions& o, detail::Writer& w) {
  bool ok = true;
  const std::uint64_t trials = c.trials;

  CsvTable tri({"index", "n_elements", "n_antennas", "d_bd", "gamma_th_db", "d", "p_s", "op_closed", "op_quad",
                "op_sim", "std_error", "closed_vs_quad_ok", "quad_vs_sim_ok"});
  const auto cases = sample_cases(c.system, c.topology, 10, c.seed);
  auto rows = detail::over_points<TriangleRow>(cases.size(), o.mc, [&](std::size_t i, const McOptions& mc) {
    return check_triangle(cases[i], trials, c.seed, mc);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CsvTable::Row row;
    row << int(i) << r.config.params.n_elements << r.config.params.n_antennas << r.config.params.d_bd
        << linear_to_db(r.config.params.sinr_threshold) << r.config.d << r.config.p_s << r.closed_form
        << r.quadrature << r.mc.value << r.se_used << int(r.closed_ok) << int(r.mc_ok);
    tri.add(row);
    ok = ok && r.pass();
  }
  w.put("validate_triangle.csv", tri);

  // Placement against a dense grid of the closed form at the optimal power.
  CsvTable pl({"d_star", "grid_argmin", "grid_step", "op_at_d_star", "op_grid_min", "ok"});
  {
    const auto js = joint_optimize(c.topology, c.system);
    const auto iv = c.topology.feasible_interval();
    const auto ds = detail::linspace(iv.lower, iv.upper, 10'000);
    double best = 2.0, arg = ds.front();
    for (double d : ds) {
      const double v = outage_at(d, js.p_s_star, c.topology, c.system);
      if (v < best) best = v, arg = d;
    }
    const double step = ds[1] - ds[0];
    bool hit = false;
    for (double d : js.d_star) hit = hit || std::abs(d - arg) <= step * (1.0 + 1e-9);
    CsvTable::Row row;
    row << js.d_selected << arg << step << js.achieved_outage << best << int(hit);
    pl.add(row);
    ok = ok && hit;
  }
  w.put("validate_placement.csv", pl);

  // Interference cap audit at P_ub.
  CsvTable ic({"p_ub", "interference_threshold", "interference_sim", "std_error", "ok"});
  {
    const double p_ub = optimal_power(c.system).p_ub;
    const auto e = estimate_interference(p_ub, c.system, trials, c.seed, o.mc);
    const bool hit = e.value <= c.system.interference_threshold + 3.0 * e.std_error;
    CsvTable::Row row;
    row << p_ub << c.system.interference_threshold << e.value << e.std_error << int(hit);
    ic.add(row);
    ok = ok && hit;
  }
  w.put("validate_interference.csv", ic);

  // Moment identities of gamma_v against simulation.
  CsvTable gv({"alpha_bd", "n_antennas", "mean_exact", "mean_sim", "std_error", "ok"});
  for (int m : {1, 4, 16}) {
    const double a = 10.0;
    const auto ex = mean_var_gamma_v(a, m, MomentMode::ExactSum);
    const auto sim = estimate_gamma_v(a, m, trials, c.seed, o.mc);
    const bool hit = std::abs(ex.mean - sim.mean.value) <= 4.0 * sim.mean.std_error;
    CsvTable::Row row;
    row << a << m << ex.mean << sim.mean.value << sim.mean.std_error << int(hit);
    gv.add(row);
    ok = ok && hit;
  }
  w.put("validate_gamma_v.csv", gv);
  return ok;
}

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> v = {"fig3",  "fig4",  "fig5a", "fig5b", "fig6",  "fig7",
                                             "fig8a", "fig8b", "fig9",  "fig10", "custom", "validate"};
  return v;
}

inline void write_manifest(const ExperimentConfig& c, const RunOptions& o, const RunResult& r) {
  json m;
  m["experiment"] = r.experiment;
  m["version"] = kVersion;
  m["seed"] = c.seed;
  m["trials"] = c.trials;
  m["config_hash"] = config_hash(c);
  m["config"] = c.normalized;
  m["timestamp"] = detail::utc_timestamp();
  m["outputs"] = r.outputs;
  m["passed"] = r.passed;
  m["versions"] = {{"risd2d", kVersion},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"compiler", __VERSION__}};
  std::ofstream f(std::filesystem::path(o.out_dir) / "manifest.json", std::ios::binary);
  if (!f) throw IoError("cannot write manifest in '" + o.out_dir + "'");
  f << m.dump(2) << '\n';
}

inline RunResult run_experiment(const ExperimentConfig& c, const std::string& name, const RunOptions& opts) {
  RunOptions o = opts;
  if (o.out_dir.empty()) o.out_dir = c.output_dir;
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError("unknown experiment '" + name + "'");
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + o.out_dir + "': " + ec.message());
  risd2d::detail::require_trials(c.trials);

  RunResult r;
  r.experiment = name;
  detail::Writer w(o.out_dir, r);
  if (name == "fig3") run_fig3(c, o, w);
  else if (name == "fig4") run_fig4(c, o, w);
  else if (name == "fig5a") run_fig5(c, o, w, false);
  else if (name == "fig5b") run_fig5(c, o, w, true);
  else if (name == "fig6") run_fig6(c, o, w);
  else if (name == "fig7") run_fig7(c, o, w);
  else if (name == "fig8a") run_fig8a(c, o, w);
  else if (name == "fig8b") run_fig8b(c, o, w);
  else if (name == "fig9") run_fig9(c, o, w);
  else if (name == "fig10") run_fig10(c, o, w);
  else if (name == "custom") run_custom(c, o, w);
  else r.passed = run_validate(c, o, w);
  if (o.write_manifest) write_manifest(c, o, r);
  return r;
}

// Joint solution for the loaded profile as JSON.
inline json optimize_report(const ExperimentConfig& c) {
  const auto js = joint_optimize(c.topology, c.system);
  json j;
  j["topology"] = to_string(c.topology.kind);
  j["d_star"] = js.d_star;
  j["d_selected"] = js.d_selected;
  j["p_s_star"] = js.p_s_star;
  j["p_s_star_db"] = linear_to_db(js.p_s_star);
  j["p_ub"] = js.p_ub;
  j["binding_constraint"] = to_string(js.binding_constraint);
  j["outage"] = js.achieved_outage;
  j["sinr_hat"] = js.achieved_sinr_hat;
  for (const auto& cand : js.candidates)
    j["candidates"].push_back({{"label", cand.label},
                               {"d", cand.d},
                               {"origin", to_string(cand.origin)},
                               {"objective_z", cand.objective_z},
                               {"second_derivative", cand.second_derivative},
                               {"feasible", cand.feasible},
                               {"local_maximum", cand.local_maximum}});
  return j;
}

}  // namespace risd2d::experiment
