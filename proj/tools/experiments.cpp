#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "eacomm/auxiliary.hpp"
#include "eacomm/capacity_classical.hpp"
#include "eacomm/capacity_ea.hpp"
#include "eacomm/fock.hpp"
#include "eacomm/jdr1.hpp"
#include "eacomm/jdr2.hpp"
#include "eacomm/version.hpp"
#include "usage.hpp"

namespace eacomm::cli {

namespace {

double parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("not a number: '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

Grid Grid::log_space(double lo, double hi, int n) {
  if (n < 1) throw UsageError("grid must have at least one point");
  if (!(lo > 0 && hi > 0)) throw UsageError("log grid bounds must be positive");
  Grid g;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : double(i) / (n - 1);
    g.values.push_back(std::pow(10.0, std::log10(lo) + f * (std::log10(hi) - std::log10(lo))));
  }
  return g;
}

Grid Grid::linear(double lo, double hi, int n) {
  if (n < 1) throw UsageError("grid must have at least one point");
  Grid g;
  for (int i = 0; i < n; ++i) g.values.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return g;
}

Grid Grid::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
    const double n = parse_number(parts[3]);
    if (n != std::floor(n) || n < 1) throw UsageError("grid point count must be a positive integer");
    const double lo = parse_number(parts[1]), hi = parse_number(parts[2]);
    return parts[0] == "log" ? log_space(lo, hi, int(n)) : linear(lo, hi, int(n));
  }
  Grid g;
  for (const auto& item : split(text, ',')) {
    if (!item.empty()) g.values.push_back(parse_number(item));
  }
  if (g.values.empty()) throw UsageError("empty grid '" + text + "'");
  return g;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

int default_jobs() {
  if (const char* env = std::getenv("EACOMM_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Point {
  std::vector<double> inputs;
  std::function<std::vector<double>()> eval;
};

// Runs every point, catching per-point failures into the status column.
ResultTable evaluate(const std::vector<std::string>& in_names, const std::vector<std::string>& out_names,
                     const std::vector<Point>& points, int jobs) {
  ResultTable t;
  t.header = in_names;
  t.header.insert(t.header.end(), out_names.begin(), out_names.end());
  t.header.push_back("status");
  std::vector<std::vector<Cell>> rows(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    std::vector<double> out;
    std::string status = "ok";
    try {
      out = points[i].eval();
      if (out.size() != out_names.size()) throw std::logic_error("output width mismatch");
    } catch (const DomainError& e) {
      status = std::string("domain error: ") + e.what();
    } catch (const NumericalError& e) {
      status = std::string("numerical error: ") + e.what();
    } catch (const std::exception& e) {
      status = std::string("error: ") + e.what();
    }
    if (status != "ok") out.assign(out_names.size(), kNaN);
    std::vector<Cell> row(points[i].inputs.begin(), points[i].inputs.end());
    row.insert(row.end(), out.begin(), out.end());
    row.emplace_back(status);
    rows[i] = std::move(row);
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

void base_metadata(ResultTable& t, const std::string& name) {
  const Tolerance tol;
  t.add_meta("tool", std::string("eacomm ") + kVersion);
  t.add_meta("experiment", name);
  t.add_meta("abs_tol", format_number(tol.abs_tol));
  t.add_meta("rel_tol", format_number(tol.rel_tol));
}

struct Ctx {
  const RunSettings& s;
  double eta(double d) const { return s.eta.value_or(d); }
  double n_s(double d) const { return s.n_s.value_or(d); }
  double n_b(double d) const { return s.n_b.value_or(d); }
  double kappa(double d) const { return s.kappa.value_or(d); }
  double gain(double d) const { return s.gain.value_or(d); }
  long m(long d) const { return s.m.value_or(d); }
  long k(long d) const { return s.k_stages.value_or(d); }
  int l_max(int d) const { return s.l_max_exp.value_or(d); }
  int cutoff(int d) const { return s.cutoff.value_or(d); }
  // Named grid, else the scalar override as a one-point grid, else default.
  std::vector<double> grid(const std::string& name, std::optional<double> scalar, const Grid& d) const {
    auto it = s.grids.find(name);
    if (it != s.grids.end()) {
      if (it->second.values.empty()) throw UsageError("empty grid for '" + name + "'");
      return it->second.values;
    }
    if (scalar) return {*scalar};
    return d.values;
  }
  std::vector<double> grid(const std::string& name, const Grid& d) const { return grid(name, std::nullopt, d); }
};

long as_long(double v, const char* what) {
  if (!(v == std::floor(v)) || std::abs(v) > 9e15) throw DomainError(std::string(what) + " must be an integer");
  return static_cast<long>(v);
}

std::vector<long> l_grid_of(int l_max_exp) {
  if (l_max_exp < 1 || l_max_exp > 30) throw UsageError("l-max exponent must be in [1, 30]");
  return default_l_grid(l_max_exp);
}

double capacity_bits(const ChannelParams& p) { return holevo_capacity(p).value; }

void channel_metadata(ResultTable& t, const ChannelParams& p) {
  t.add_meta("eta", format_number(p.eta));
  t.add_meta("n_b", format_number(p.n_b));
}

// Ratio curves of the JDR rates over code order L.
ResultTable rate_curves(const std::string& name, const Ctx& c, bool second, long m_default) {
  const ChannelParams base{c.eta(0.01), 0.0, c.n_b(10)};
  const long m = c.m(m_default), k = c.k(100);
  const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-6, 1e-2, 9));
  const auto ls = l_grid_of(c.l_max(20));
  std::vector<Point> pts;
  for (double n : ns) {
    for (long l : ls) {
      pts.push_back({{n, double(l)}, [=] {
                       const ChannelParams p{base.eta, n, base.n_b};
                       const double r = second ? rate_rm(p, m, l, k).rate : jdr1_rate(p, {m, l, k});
                       return std::vector<double>{r / capacity_bits(p)};
                     }});
    }
  }
  ResultTable t = evaluate({"n_s", "l"}, {"rate_over_c"}, pts, c.s.jobs);
  base_metadata(t, name);
  channel_metadata(t, base);
  t.add_meta("m", std::to_string(m));
  t.add_meta("k_stages", std::to_string(k));
  return t;
}

// Envelope over L for each (M, N_S).
ResultTable envelope_vs_m(const std::string& name, const Ctx& c, bool second) {
  const ChannelParams base{c.eta(0.01), 0.0, c.n_b(10)};
  const long k = c.k(100);
  const auto ms = c.grid("m", c.s.m ? std::optional<double>(double(*c.s.m)) : std::nullopt,
                         Grid::parse("10,100,1000,10000,100000,1000000"));
  const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-4, 1e-2, 5));
  const auto ls = l_grid_of(c.l_max(20));
  std::vector<Point> pts;
  for (double mv : ms) {
    for (double n : ns) {
      pts.push_back({{mv, n}, [=] {
                       const long m = as_long(mv, "m");
                       const ChannelParams p{base.eta, n, base.n_b};
                       const Envelope e = second ? envelope_rm(p, m, k, ls) : envelope_over_l(p, m, k, ls);
                       return std::vector<double>{double(e.best_l), e.best_rate / capacity_bits(p)};
                     }});
    }
  }
  ResultTable t = evaluate({"m", "n_s"}, {"best_l", "envelope_over_c"}, pts, c.s.jobs);
  base_metadata(t, name);
  channel_metadata(t, base);
  t.add_meta("k_stages", std::to_string(k));
  return t;
}

ResultTable approx_compare(const std::string& name, const Ctx& c, long m_default) {
  const ChannelParams base{c.eta(0.01), 0.0, c.n_b(10)};
  const long m = c.m(m_default), k = c.k(100);
  const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-5, 1e-3, 9));
  const auto ls = l_grid_of(c.l_max(20));
  std::vector<Point> pts;
  for (double n : ns) {
    pts.push_back({{n}, [=] {
                     const ChannelParams p{base.eta, n, base.n_b};
                     const double cap = capacity_bits(p);
                     const Envelope e = envelope_over_l(p, m, k, ls);
                     const ApproxRate j = approx_rate_jarzyna(p, m);
                     double ww = kNaN, ww_l = kNaN;
                     try {
                       const ApproxRate w = approx_rate_wang_wornell(p, m);
                       ww = w.rate / cap;
                       ww_l = w.l;
                     } catch (const DomainError&) {
                     }
                     return std::vector<double>{e.best_rate / cap, double(e.best_l), j.rate / cap, j.l, ww, ww_l};
                   }});
  }
  ResultTable t = evaluate({"n_s"},
                           {"exact_over_c", "exact_best_l", "jarzyna_over_c", "jarzyna_l", "wang_wornell_over_c",
                            "wang_wornell_l"},
                           pts, c.s.jobs);
  base_metadata(t, name);
  channel_metadata(t, base);
  t.add_meta("m", std::to_string(m));
  t.add_meta("k_stages", std::to_string(k));
  return t;
}

ResultTable first_sfg_ratio(const std::string& name, const Ctx& c, double kappa_default) {
  const ChannelParams base{c.eta(0.1), 0.0, c.n_b(0.8)};
  const double kappa = c.kappa(kappa_default);
  const int cutoff = c.cutoff(3);
  const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-3, 1e-1, 3));
  const auto gts = c.grid("gt", Grid::linear(0.5, M_PI / 2, 5));
  std::vector<Point> pts;
  for (double n : ns) {
    for (double gt : gts) {
      pts.push_back({{n, gt}, [=] {
                       const ChannelParams p{base.eta, n, base.n_b};
                       SfgEvolution sfg;
                       sfg.gt = gt;
                       return std::vector<double>{first_sfg_holevo(p, kappa, cutoff, sfg) / capacity_bits(p)};
                     }});
    }
  }
  ResultTable t = evaluate({"n_s", "gt"}, {"holevo_over_c"}, pts, c.s.jobs);
  base_metadata(t, name);
  channel_metadata(t, base);
  t.add_meta("kappa", format_number(kappa));
  t.add_meta("cutoff", std::to_string(cutoff));
  return t;
}

using ExperimentFn = std::function<ResultTable(const Ctx&)>;

const std::vector<std::pair<std::string, ExperimentFn>>& experiments() {
  static const std::vector<std::pair<std::string, ExperimentFn>> table = {
      {"fig2",
       [](const Ctx& c) {
         const double eta = c.eta(0.01);
         const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-6, 1e-1, 11));
         const auto nb = c.grid("n_b", c.s.n_b, Grid::parse("0.1,1,10,100"));
         std::vector<Point> pts;
         for (double n : ns) {
           for (double b : nb) {
             pts.push_back({{n, b}, [=] {
                              const ChannelParams p{eta, n, b};
                              const double ratio = ea_capacity(p).value / capacity_bits(p);
                              return std::vector<double>{ratio, ratio / std::log(1 / n)};
                            }});
           }
         }
         ResultTable t = evaluate({"n_s", "n_b"}, {"ce_over_c", "log_scaling"}, pts, c.s.jobs);
         base_metadata(t, "fig2");
         t.add_meta("eta", format_number(eta));
         return t;
       }},
      {"fig3",
       [](const Ctx& c) {
         const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-6, 1, 13));
         const auto ls = l_grid_of(c.l_max(10));
         std::vector<Point> pts;
         for (double n : ns) {
           pts.push_back({{n}, [=] {
                            const ChannelParams p{1.0, n, 0.0};
                            double had = 0;
                            for (long l : ls) had = std::max(had, hadamard_gm_classical_rate(n, l));
                            return std::vector<double>{pie(capacity_bits(p), n), pie(bpsk_holevo(p).value, n),
                                                       pie(ook_holevo(p).value, n), pie(helstrom_bpsk_c1(n).value, n),
                                                       pie(had, n), pie(classical_rm_gm_kennedy_rate(n, 8), n)};
                          }});
         }
         ResultTable t = evaluate(
             {"n_s"}, {"pie_holevo", "pie_bpsk", "pie_ook", "pie_helstrom", "pie_hadamard_gm", "pie_rm_kennedy_l8"},
             pts, c.s.jobs);
         base_metadata(t, "fig3");
         return t;
       }},
      {"fig5",
       [](const Ctx& c) {
         const ChannelParams base{c.eta(0.1), 0.0, c.n_b(1)};
         const int cutoff = c.cutoff(12);
         const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-3, 1e-1, 5));
         std::vector<Point> pts;
         for (double n : ns) {
           pts.push_back({{n}, [=] {
                            const ChannelParams p{base.eta, n, base.n_b};
                            const double cap = capacity_bits(p);
                            return std::vector<double>{ea_bpsk_tmsv_capacity(p, cutoff).value / cap,
                                                       ea_ook_tmsv_capacity(p, cutoff).value / cap,
                                                       ea_capacity(p).value / cap};
                          }});
         }
         ResultTable t = evaluate({"n_s"}, {"bpsk_over_c", "ook_over_c", "ce_over_c"}, pts, c.s.jobs);
         base_metadata(t, "fig5");
         channel_metadata(t, base);
         t.add_meta("cutoff", std::to_string(cutoff));
         return t;
       }},
      {"fig7", [](const Ctx& c) { return rate_curves("fig7", c, false, 100000); }},
      {"fig8", [](const Ctx& c) { return rate_curves("fig8", c, true, 10000); }},
      {"fig9a", [](const Ctx& c) { return envelope_vs_m("fig9a", c, false); }},
      {"fig9b", [](const Ctx& c) { return envelope_vs_m("fig9b", c, true); }},
      {"fig11", [](const Ctx& c) { return approx_compare("fig11", c, 1000); }},
      {"fig12", [](const Ctx& c) { return approx_compare("fig12", c, 10000); }},
      {"fig13", [](const Ctx& c) { return approx_compare("fig13", c, 100000); }},
      {"fig15", [](const Ctx& c) { return first_sfg_ratio("fig15", c, 1.0); }},
      {"fig18", [](const Ctx& c) { return first_sfg_ratio("fig18", c, 0.05); }},
      {"fig19",
       [](const Ctx& c) {
         const ChannelParams base{c.eta(0.01), 0.0, c.n_b(10)};
         const auto ns = c.grid("n_s", c.s.n_s, Grid::log_space(1e-4, 1e-2, 5));
         const auto ks = c.grid("k_stages", c.s.k_stages ? std::optional<double>(double(*c.s.k_stages)) : std::nullopt,
                                Grid::parse("100,1000,5000"));
         std::vector<Point> pts;
         for (double n : ns) {
           for (double kv : ks) {
             pts.push_back({{n, kv}, [=] {
                              const ChannelParams p{base.eta, n, base.n_b};
                              const double nt = thermal_noise_recurrence(p, as_long(kv, "k_stages"));
                              return std::vector<double>{nt, n * p.n_s_prime() / nt};
                            }});
           }
         }
         ResultTable t = evaluate({"n_s", "k_stages"}, {"n_t0", "constant"}, pts, c.s.jobs);
         base_metadata(t, "fig19");
         channel_metadata(t, base);
         return t;
       }},
      {"figA",
       [](const Ctx& c) {
         const double eta = c.eta(0.978), ns = c.n_s(1e-5);
         const long m = c.m(10);
         const auto gains = c.grid("gain", c.s.gain, Grid::parse("1.0001,1.001,1.01,1.1"));
         const auto nbs = c.grid("n_b", c.s.n_b, Grid::parse("10,100,1000"));
         std::vector<Point> pts;
         for (double g : gains) {
           for (double b : nbs) {
             pts.push_back({{g, b}, [=] {
                              OpaParams o{{eta, ns, b}, g, 0.5, m};
                              const double cap = capacity_bits(o.channel);
                              return std::vector<double>{opa_gain_ratio(o),
                                                         opa_ea_capacity_leading(o.channel, g) / cap};
                            }});
           }
         }
         ResultTable t = evaluate({"gain", "n_b"}, {"exact_over_mc", "leading_over_c"}, pts, c.s.jobs);
         base_metadata(t, "figA");
         t.add_meta("eta", format_number(eta));
         t.add_meta("n_s", format_number(ns));
         t.add_meta("m", std::to_string(m));
         return t;
       }},
      {"figQ",
       [](const Ctx& c) {
         // Per-mode product eta N_S (1 + N_S) and y = 1 + N_S' are fixed.
         constexpr double kProduct = 0.8, kY = 20.0;
         const auto ks = c.grid("k_stages", c.s.k_stages ? std::optional<double>(double(*c.s.k_stages)) : std::nullopt,
                                Grid::parse("50,100,500,1000,5000,50000"));
         std::vector<Point> pts;
         for (double kv : ks) {
           pts.push_back({{kv}, [=] {
                            const long k = as_long(kv, "k_stages");
                            const double ratio = std::pow(1 - kY / double(k), 2);
                            const VonNullingScenario s =
                                make_von_scenario({1}, {1}, kProduct / double(k), ratio, k, 0.0);
                            const double inv = 1 / q_pochhammer(-4 * kProduct / double(k), ratio, k);
                            const double target = std::exp(-4 * s.alpha0 * s.alpha0);
                            return std::vector<double>{inv, target, inv / target - 1,
                                                       von_true_vacuum_prob(s) / von_effective_vacuum_prob(s) - 1};
                          }});
         }
         ResultTable t = evaluate({"k_stages"}, {"qpoch_inverse", "exp_target", "relative_gap", "slot_gap"}, pts,
                                  c.s.jobs);
         base_metadata(t, "figQ");
         return t;
       }},
      {"figR",
       [](const Ctx& c) {
         const ChannelParams p{c.eta(0.1), c.n_s(0.01), c.n_b(0.8)};
         const double kappa = c.kappa(0.05);
         const int cutoff = c.cutoff(10);
         const auto rs = c.grid("r", Grid::linear(0.0, 0.2, 5));
         std::vector<Point> pts;
         for (double r : rs) {
           pts.push_back({{r}, [=] {
                            const auto h = sandwiched_holevo_vs_r(p, kappa, {r}, cutoff);
                            return std::vector<double>{h.at(0).holevo, h.at(0).truncation_warning ? 1.0 : 0.0};
                          }});
         }
         ResultTable t = evaluate({"r"}, {"holevo_bits", "truncation_warning"}, pts, c.s.jobs);
         base_metadata(t, "figR");
         channel_metadata(t, p);
         t.add_meta("n_s", format_number(p.n_s));
         t.add_meta("kappa", format_number(kappa));
         t.add_meta("cutoff", std::to_string(cutoff));
         return t;
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [n, f] : experiments()) names.push_back(n);
  return names;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  for (const auto& [n, f] : experiments()) {
    if (n == spec.name) {
      for (const auto& [g, grid] : spec.settings.grids) {
        if (grid.values.empty()) throw UsageError("empty grid for '" + g + "'");
      }
      return f(Ctx{spec.settings});
    }
  }
  std::string list;
  for (const auto& n : experiment_names()) list += " " + n;
  throw UsageError("unknown experiment '" + spec.name + "'; available:" + list);
}

namespace {

ChannelParams channel_of(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

std::vector<SweepOp> build_registry() {
  std::vector<SweepOp> ops;
  const std::vector<std::string> ch{"eta", "n_s", "n_b"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> p = ch;
    p.insert(p.end(), extra.begin(), extra.end());
    return p;
  };
  ops.push_back({"capacity.holevo", ch, {0.01, 1e-3, 10}, {"c_bits"},
                 [](const std::vector<double>& v) { return std::vector<double>{capacity_bits(channel_of(v))}; }});
  ops.push_back({"capacity.ea", ch, {0.01, 1e-3, 10}, {"ce_bits", "ce_over_c"}, [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const double ce = ea_capacity(p).value;
                   return std::vector<double>{ce, ce / capacity_bits(p)};
                 }});
  ops.push_back({"capacity.bpsk", with({"cutoff"}), {1.0, 0.1, 0.0, 25}, {"bits", "cutoff_used"},
                 [](const std::vector<double>& v) {
                   const CapacityReport r = bpsk_holevo(channel_of(v), int(as_long(v[3], "cutoff")));
                   return std::vector<double>{r.value, double(r.cutoff_used)};
                 }});
  ops.push_back({"capacity.ook", with({"cutoff"}), {1.0, 0.1, 0.0, 25}, {"bits", "prior"},
                 [](const std::vector<double>& v) {
                   const CapacityReport r = ook_holevo(channel_of(v), int(as_long(v[3], "cutoff")));
                   return std::vector<double>{r.value, r.optimal_prior.value_or(kNaN)};
                 }});
  ops.push_back({"capacity.helstrom", {"n_s"}, {0.1}, {"bits", "error_probability"},
                 [](const std::vector<double>& v) {
                   return std::vector<double>{helstrom_bpsk_c1(v[0]).value, helstrom_error_probability(v[0])};
                 }});
  ops.push_back({"ea.bpsk", with({"cutoff"}), {0.1, 0.01, 1, 12}, {"bits", "over_c"},
                 [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const double b = ea_bpsk_tmsv_capacity(p, int(as_long(v[3], "cutoff"))).value;
                   return std::vector<double>{b, b / capacity_bits(p)};
                 }});
  ops.push_back({"ea.ook", with({"cutoff"}), {0.1, 0.01, 1, 12}, {"bits", "over_c", "prior"},
                 [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const CapacityReport r = ea_ook_tmsv_capacity(p, int(as_long(v[3], "cutoff")));
                   return std::vector<double>{r.value, r.value / capacity_bits(p), r.optimal_prior.value_or(kNaN)};
                 }});
  ops.push_back({"jdr1.rate", with({"m", "l", "k_stages"}), {0.01, 1e-3, 10, 100000, 64, 100},
                 {"rate", "rate_over_c"}, [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const double r = jdr1_rate(p, {as_long(v[3], "m"), as_long(v[4], "l"), as_long(v[5], "k_stages")});
                   return std::vector<double>{r, r / capacity_bits(p)};
                 }});
  ops.push_back({"jdr1.envelope", with({"m", "k_stages", "l_max"}), {0.01, 1e-3, 10, 100000, 100, 20},
                 {"best_l", "rate", "rate_over_c"}, [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const Envelope e = envelope_over_l(p, as_long(v[3], "m"), as_long(v[4], "k_stages"),
                                                      l_grid_of(int(as_long(v[5], "l_max"))));
                   return std::vector<double>{double(e.best_l), e.best_rate, e.best_rate / capacity_bits(p)};
                 }});
  ops.push_back({"jdr1.approx", with({"m"}), {0.01, 1e-4, 10, 1000}, {"jarzyna_rate", "jarzyna_l"},
                 [](const std::vector<double>& v) {
                   const ApproxRate a = approx_rate_jarzyna(channel_of(v), as_long(v[3], "m"));
                   return std::vector<double>{a.rate, a.l};
                 }});
  ops.push_back({"jdr2.rate", with({"m", "l", "k_stages"}), {0.01, 1e-3, 10, 10000, 64, 100},
                 {"rate", "rate_over_c", "p_plus"}, [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const RmRate r = rate_rm(p, as_long(v[3], "m"), as_long(v[4], "l"), as_long(v[5], "k_stages"));
                   return std::vector<double>{r.rate, r.rate / capacity_bits(p), r.p_plus};
                 }});
  ops.push_back({"jdr2.envelope", with({"m", "k_stages", "l_max"}), {0.01, 1e-3, 10, 10000, 100, 20},
                 {"best_l", "rate", "rate_over_c"}, [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const Envelope e = envelope_rm(p, as_long(v[3], "m"), as_long(v[4], "k_stages"),
                                                  l_grid_of(int(as_long(v[5], "l_max"))));
                   return std::vector<double>{double(e.best_l), e.best_rate, e.best_rate / capacity_bits(p)};
                 }});
  ops.push_back({"jdr2.recurrence", with({"k_stages"}), {0.01, 1e-3, 10, 5000}, {"n_t0", "constant"},
                 [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   const double nt = thermal_noise_recurrence(p, as_long(v[3], "k_stages"));
                   return std::vector<double>{nt, p.n_s * p.n_s_prime() / nt};
                 }});
  ops.push_back({"opa.mutual_info", with({"gain", "m", "prior"}), {0.978, 1e-5, 1000, 1.001, 10, 0.5},
                 {"bits_per_block", "over_mc", "leading_over_c"}, [](const std::vector<double>& v) {
                   const OpaParams o{channel_of(v), v[3], v[5], as_long(v[4], "m")};
                   const double bits = opa_exact_mutual_info(o);
                   const double cap = capacity_bits(o.channel);
                   return std::vector<double>{bits, bits / (double(o.m) * cap),
                                              opa_ea_capacity_leading(o.channel, o.gain) / cap};
                 }});
  ops.push_back({"von.slot", with({"m", "k_stages", "n_t0"}), {0.01, 0.01, 10, 10000, 5000, 0.01},
                 {"true_matched", "effective_matched", "relative_gap"}, [](const std::vector<double>& v) {
                   const VonNullingScenario s = make_von_scenario({1}, {1}, channel_of(v), as_long(v[3], "m"),
                                                                  as_long(v[4], "k_stages"), v[5]);
                   const double t = von_true_vacuum_prob(s), e = von_effective_vacuum_prob(s);
                   return std::vector<double>{t, e, t / e - 1};
                 }});
  ops.push_back({"fock.two_cycle", with({"kappa", "theta", "cutoff"}), {0.01, 0.01, 1, 0.01, M_PI, 6},
                 {"fidelity", "phase_insensitive_ratio", "phase_sensitive_ratio", "truncation_warning"},
                 [](const std::vector<double>& v) {
                   const TwoCycleReport r =
                       two_sfg_cycle_simulation(channel_of(v), v[4], v[3], int(as_long(v[5], "cutoff")));
                   return std::vector<double>{r.fidelity, r.phase_insensitive_ratio, r.phase_sensitive_ratio,
                                              r.truncation_warning ? 1.0 : 0.0};
                 }});
  ops.push_back({"fock.first_sfg", with({"kappa", "gt", "cutoff"}), {0.1, 0.01, 0.8, 0.05, M_PI / 2, 3},
                 {"holevo_bits", "over_c"}, [](const std::vector<double>& v) {
                   const ChannelParams p = channel_of(v);
                   SfgEvolution sfg;
                   sfg.gt = v[4];
                   const double h = first_sfg_holevo(p, v[3], int(as_long(v[5], "cutoff")), sfg);
                   return std::vector<double>{h, h / capacity_bits(p)};
                 }});
  ops.push_back({"fock.sandwich", with({"kappa", "r", "cutoff"}), {0.1, 0.01, 0.8, 0.05, 0.0, 10}, {"holevo_bits"},
                 [](const std::vector<double>& v) {
                   const auto h = sandwiched_holevo_vs_r(channel_of(v), v[3], {v[4]}, int(as_long(v[5], "cutoff")));
                   return std::vector<double>{h.at(0).holevo};
                 }});
  return ops;
}

}  // namespace

const std::vector<SweepOp>& sweep_registry() {
  static const std::vector<SweepOp> ops = build_registry();
  return ops;
}

const SweepOp& find_sweep_op(const std::string& name) {
  for (const auto& op : sweep_registry()) {
    if (op.name == name) return op;
  }
  std::string list;
  for (const auto& op : sweep_registry()) list += " " + op.name;
  throw UsageError("unknown operation '" + name + "'; available:" + list);
}

ResultTable sweep(const std::string& name, const std::vector<std::pair<std::string, Grid>>& grids,
                  const std::map<std::string, double>& fixed, int jobs) {
  const SweepOp& op = find_sweep_op(name);
  auto index_of = [&](const std::string& p) {
    const auto it = std::find(op.params.begin(), op.params.end(), p);
    if (it == op.params.end()) throw UsageError("operation '" + name + "' has no parameter '" + p + "'");
    return static_cast<std::size_t>(it - op.params.begin());
  };
  std::vector<double> base = op.defaults;
  for (const auto& [k, v] : fixed) base[index_of(k)] = v;
  std::vector<std::size_t> axes;
  for (const auto& [k, g] : grids) {
    if (g.values.empty()) throw UsageError("empty grid for '" + k + "'");
    const std::size_t ix = index_of(k);
    if (std::find(axes.begin(), axes.end(), ix) != axes.end()) throw UsageError("duplicate grid for '" + k + "'");
    axes.push_back(ix);
  }
  // Lexicographic enumeration, last grid fastest.
  std::vector<std::vector<double>> combos{base};
  for (std::size_t a = 0; a < grids.size(); ++a) {
    std::vector<std::vector<double>> next;
    for (const auto& c : combos) {
      for (double v : grids[a].second.values) {
        auto row = c;
        row[axes[a]] = v;
        next.push_back(std::move(row));
      }
    }
    combos = std::move(next);
  }
  std::vector<Point> pts;
  for (const auto& c : combos) pts.push_back({c, [&op, c] { return op.fn(c); }});
  ResultTable t = evaluate(op.params, op.outputs, pts, jobs);
  base_metadata(t, "sweep " + name);
  return t;
}

}  // namespace eacomm::cli
