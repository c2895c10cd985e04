// Acceptance runner: one PASS/FAIL line per criterion; exits non-zero if any fail.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "eacomm/auxiliary.hpp"
#include "eacomm/capacity_classical.hpp"
#include "eacomm/fock.hpp"
#include "eacomm/jdr1.hpp"
#include "eacomm/jdr2.hpp"
#include "eacomm/mathcore.hpp"

using namespace eacomm;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1)));
  return g;
}

// Evaluates f(i) for i in [0, n) on all hardware threads.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

double brute_force_mi(const Eigen::MatrixXd& x, const std::vector<double>& prior) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.cols());
  for (long i = 0; i < x.rows(); ++i) out += prior[i] * x.row(i).transpose();
  double mi = 0;
  for (long i = 0; i < x.rows(); ++i)
    for (long j = 0; j < x.cols(); ++j)
      if (prior[i] > 0 && x(i, j) > 0) mi += prior[i] * x(i, j) * std::log2(x(i, j) / out(j));
  return mi;
}

double capacity(const ChannelParams& p) { return holevo_capacity(p).value; }

Outcome ratio_at_small_signal() {
  const ChannelParams p{1e-3, 1e-3, 100.0};
  const double r = ea_capacity(p).value / capacity(p);
  return {std::abs(r - 7.0) <= 0.5, "C_E/C = " + fmt(r)};
}

Outcome pure_loss_free_identity() {
  double worst = 0;
  for (double n : {0.01, 0.1, 1.0}) {
    worst = std::max(worst, std::abs(ea_capacity({1.0, n, 0.0}).value - 2 * g_entropy(n)));
  }
  return {worst <= 1e-12, "max |C_E - 2 g(N_S)| = " + fmt(worst)};
}

Outcome helstrom_pie_limit() {
  const double n = 1e-6;
  const double v = pie(helstrom_bpsk_c1(n).value, n);
  const double target = 2 / std::log(2.0);
  return {std::abs(v / target - 1) <= 0.01, "C1/N_S = " + fmt(v) + " vs " + fmt(target)};
}

Outcome noiseless_bpsk_holevo() {
  double worst = 0;
  for (double n : {0.001, 0.01, 0.05, 0.1, 0.15, 0.2}) {
    const double fock = bpsk_holevo_fock({1.0, n, 0.0}, 25).value;
    worst = std::max(worst, std::abs(fock - binary_entropy((1 + std::exp(-2 * n)) / 2)));
  }
  return {worst <= 1e-3, "max deviation " + fmt(worst) + " bits"};
}

Outcome jdr1_envelope_growth() {
  const auto ns = log_grid(1e-6, 1e-2, 9);
  const auto grid = default_l_grid(20);
  const auto ratios = parallel_map<double>(ns.size(), [&](std::size_t i) {
    const ChannelParams p{0.01, ns[i], 10.0};
    return envelope_over_l(p, 100000, 100, grid).best_rate / capacity(p);
  });
  bool pass = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] <= 1e-3 * (1 + 1e-12) && ratios[i] <= 2) pass = false;
    if (i > 0 && ratios[i] >= ratios[i - 1]) pass = false;
    d << (i ? ", " : "") << fmt(ns[i]) << ":" << fmt(ratios[i]);
  }
  return {pass, "envelope/C " + d.str()};
}

Outcome approximation_ranking() {
  const auto ns = log_grid(1e-5, 1e-3, 9);
  const auto grid = default_l_grid(20);
  const auto closer = parallel_map<int>(ns.size(), [&](std::size_t i) {
    const ChannelParams p{0.01, ns[i], 10.0};
    const double exact = envelope_over_l(p, 1000, 100, grid).best_rate;
    const double jar = approx_rate_jarzyna(p, 1000).rate;
    const double ww = approx_rate_wang_wornell(p, 1000).rate;
    return std::abs(exact - jar) < std::abs(exact - ww) ? 1 : 0;
  });
  int wins = 0;
  for (int c : closer) wins += c;
  const double frac = double(wins) / double(ns.size());
  return {frac >= 0.8, "expansion closer at " + std::to_string(wins) + "/" + std::to_string(ns.size()) + " points"};
}

Outcome recurrence_constant() {
  bool pass = true;
  std::ostringstream d;
  for (double n : log_grid(1e-4, 1e-2, 5)) {
    const ChannelParams p{0.01, n, 10.0};
    const double c = n * p.n_s_prime() / thermal_noise_recurrence(p, 5000);
    if (std::abs(c / 7.611 - 1) > 0.01) pass = false;
    d << (d.tellp() ? ", " : "") << fmt(c);
  }
  return {pass, "N_S N_S'/N_T0 = " + d.str() + " (target 7.611)"};
}

Outcome transition_rows() {
  const ChannelParams p{0.01, 0.01, 10.0};
  const std::vector<long> ls{4, 8, 16};
  const auto worst_by_l = parallel_map<double>(ls.size(), [&](std::size_t i) {
    const TransitionMatrix tm = transition_matrix(p, 10000, ls[i], 100);
    double worst = 0;
    for (long r = 0; r < tm.x.rows(); ++r) worst = std::max(worst, std::abs(tm.x.row(r).sum() - 1));
    return worst;
  });
  const double worst = *std::max_element(worst_by_l.begin(), worst_by_l.end());
  return {worst <= 1e-6, "max |row sum - 1| = " + fmt(worst)};
}

Outcome jdr2_beats_jdr1() {
  const std::vector<long> ms{10, 100, 1000, 10000, 100000, 1000000};
  const auto ns = log_grid(1e-4, 1e-2, 5);
  const auto grid = default_l_grid(20);
  struct Pair {
    double first, second;
  };
  const auto env = parallel_map<Pair>(ms.size() * ns.size(), [&](std::size_t i) {
    const ChannelParams p{0.01, ns[i % ns.size()], 10.0};
    const long m = ms[i / ns.size()];
    return Pair{envelope_over_l(p, m, 100, grid).best_rate, envelope_rm(p, m, 100, grid).best_rate};
  });
  bool pass = true;
  std::ostringstream d;
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    if (ms[mi] != 1000 && ms[mi] != 10000) continue;
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const Pair& e = env[mi * ns.size() + j];
      if (e.second < e.first) pass = false;
    }
  }
  for (std::size_t j = 0; j < ns.size(); ++j) {
    std::size_t best1 = 0, best2 = 0;
    for (std::size_t mi = 0; mi < ms.size(); ++mi) {
      if (env[mi * ns.size() + j].first > env[best1 * ns.size() + j].first) best1 = mi;
      if (env[mi * ns.size() + j].second > env[best2 * ns.size() + j].second) best2 = mi;
    }
    if (ms[best1] != 100000 || ms[best2] != 10000) pass = false;
    d << (j ? ", " : "") << fmt(ns[j]) << ":M1=" << ms[best1] << ",M2=" << ms[best2];
  }
  return {pass, "optimal M " + d.str()};
}

Outcome opa_gain_bound() {
  std::vector<OpaParams> grid;
  for (double g : {1.001, 1.01, 1.1, 1.5}) {
    for (double nb : {10.0, 100.0, 1000.0}) {
      for (double ns : {1e-6, 1e-5, 1e-4}) {
        OpaParams o;
        o.channel = {0.978, ns, nb};
        o.gain = g;
        o.m = 10;
        grid.push_back(o);
      }
    }
  }
  const auto ratios = parallel_map<double>(grid.size(), [&](std::size_t i) { return opa_gain_ratio(grid[i]); });
  const double worst = *std::max_element(ratios.begin(), ratios.end());
  OpaParams limit;
  limit.channel = {0.978, 1e-5, 1000.0};
  limit.gain = 1.001;
  limit.m = 10;
  const double at_limit = opa_gain_ratio(limit);
  return {worst <= 2.1 && std::abs(at_limit / 2 - 1) <= 0.05,
          "max ratio " + fmt(worst) + ", limit point " + fmt(at_limit)};
}

Outcome two_cycle_fidelity() {
  struct Point {
    double kappa, n_s;
  };
  std::vector<Point> pts;
  for (double k : {0.01, 0.05, 0.1})
    for (double n : {0.01, 0.05, 0.1}) pts.push_back({k, n});
  const auto reports = parallel_map<TwoCycleReport>(pts.size(), [&](std::size_t i) {
    return two_sfg_cycle_simulation({0.01, pts[i].n_s, 1.0}, M_PI, pts[i].kappa, 6);
  });
  double min_fid = 1, worst_pi = 0, max_ps = 0;
  for (const auto& r : reports) {
    min_fid = std::min(min_fid, r.fidelity);
    worst_pi = std::max(worst_pi, std::abs(r.phase_insensitive_ratio - 1));
    max_ps = std::max(max_ps, r.phase_sensitive_ratio);
  }
  return {min_fid >= 0.99 && worst_pi <= 0.1 && max_ps < 0.05,
          "min fidelity " + fmt(min_fid) + ", max |insensitive ratio - 1| " + fmt(worst_pi) +
              ", max sensitive ratio " + fmt(max_ps)};
}

Outcome sandwich_flatness() {
  const std::vector<double> rs{0.0, 0.05, 0.1, 0.15, 0.2};
  const auto h = parallel_map<double>(rs.size(), [&](std::size_t i) {
    return sandwiched_holevo_vs_r({0.1, 0.01, 0.8}, 0.05, {rs[i]}, 10).front().holevo;
  });
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  const double spread = (*hi - *lo) / *hi;
  return {spread < 0.05, "relative spread " + fmt(spread) + " (min " + fmt(*lo) + ", max " + fmt(*hi) + ")"};
}

Outcome vacuum_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> noise(0.0, 0.01);
  const ChannelParams p{0.01, 0.01, 10.0};
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<int> b(8), c(8);
    for (int l = 0; l < 8; ++l) {
      b[l] = bit(rng) ? 1 : -1;
      c[l] = bit(rng) ? 1 : -1;
    }
    const auto s = make_von_scenario(b, c, p, 10000, 5000, noise(rng));
    worst = std::max(worst, std::abs(von_true_vacuum_prob(s) / von_effective_vacuum_prob(s) - 1));
  }
  return {worst <= 0.02, "max relative gap " + fmt(worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_ppm = 0;
  for (long l : {2L, 4L}) {
    for (int i = 0; i < 50; ++i) {
      const DmcProbs d = dmc_probs(0.01 + 0.99 * u(rng), 0.5 * u(rng), l);
      Eigen::MatrixXd x(l, l + 1);
      for (long a = 0; a < l; ++a) {
        for (long b = 0; b < l; ++b) x(a, b) = a == b ? d.p_e : d.p_d;
        x(a, l) = 1 - d.p_e - double(l - 1) * d.p_d;
      }
      const double oracle = brute_force_mi(x, std::vector<double>(l, 1.0 / double(l)));
      worst_ppm = std::max(worst_ppm, std::abs(ppm_mutual_info(d.p_e, d.p_d, l).bits * double(l) - oracle));
    }
  }
  double worst_rm = 0;
  for (int i = 0; i < 50; ++i) {
    const TransitionEntries e = transition_entries(4, 1.5 * u(rng), 0.2 * u(rng));
    const double p_plus = u(rng);
    std::vector<double> prior;
    for (int j = 0; j < 4; ++j) {
      prior.push_back(p_plus / 4);
      prior.push_back((1 - p_plus) / 4);
    }
    const double oracle = brute_force_mi(assemble_transition_matrix(e).x, prior);
    worst_rm = std::max(worst_rm, std::abs(mutual_info_rm(e, p_plus) - oracle));
  }
  return {worst_ppm <= 1e-12 && worst_rm <= 1e-10,
          "PPM max error " + fmt(worst_ppm) + ", RM max error " + fmt(worst_rm)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "capacity ratio at small signal", ratio_at_small_signal},
      {2, "lossless noiseless identity", pure_loss_free_identity},
      {3, "BPSK photon information efficiency limit", helstrom_pie_limit},
      {4, "noiseless BPSK Holevo via Fock path", noiseless_bpsk_holevo},
      {5, "PPM receiver envelope growth", jdr1_envelope_growth},
      {6, "approximation ranking", approximation_ranking},
      {7, "noise recurrence constant", recurrence_constant},
      {8, "Reed-Muller transition rows", transition_rows},
      {9, "Reed-Muller versus PPM receiver", jdr2_beats_jdr1},
      {10, "parametric amplifier gain bound", opa_gain_bound},
      {11, "two-cycle fidelity and correlations", two_cycle_fidelity},
      {12, "sandwiched Holevo flatness", sandwich_flatness},
      {13, "vacuum probability equivalence", vacuum_equivalence},
      {14, "mutual information oracle equivalence", oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
