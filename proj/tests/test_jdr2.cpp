#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "eacomm/capacity_classical.hpp"
#include "eacomm/jdr1.hpp"
#include "eacomm/jdr2.hpp"
#include "test_support.hpp"

using namespace eacomm;

namespace {

// Generic DMC mutual information, rows = inputs, written independently of the
// library routine.
double brute_force_mi(const Eigen::MatrixXd& x, const std::vector<double>& prior) {
  std::vector<double> out(x.cols(), 0.0);
  for (long j = 0; j < x.rows(); ++j)
    for (long i = 0; i < x.cols(); ++i) out[i] += prior[j] * x(j, i);
  double mi = 0;
  for (long j = 0; j < x.rows(); ++j)
    for (long i = 0; i < x.cols(); ++i)
      if (prior[j] > 0 && x(j, i) > 0) mi += prior[j] * x(j, i) * std::log2(x(j, i) / out[i]);
  return mi;
}

std::vector<double> rm_priors(long l, double p_plus) {
  std::vector<double> pr;
  for (long j = 0; j < l; ++j) {
    pr.push_back(p_plus / double(l));
    pr.push_back((1 - p_plus) / double(l));
  }
  return pr;
}

TransitionEntries synthetic_entries(eacomm::testing::Gen& gen, long l) {
  // Random valid entries: carrier rows and the shared off-carrier pair.
  TransitionEntries e;
  e.l = l;
  e.erasure = gen.uniform(0.05, 0.3);
  const double off = gen.uniform(0, (1 - e.erasure) / double(l));
  e.x13 = off * gen.uniform(0, 1);
  e.x14 = off - e.x13;
  const double carrier = 1 - e.erasure - double(l - 1) * off;
  e.x11 = carrier * gen.uniform(0, 1);
  e.x12 = carrier - e.x11;
  e.x21 = carrier * gen.uniform(0, 1);
  e.x22 = carrier - e.x21;
  return e;
}

const ChannelParams kRep{0.01, 0.01, 10.0};

}  // namespace

TEST(Gammas, FirstStageNearHalf) {
  const auto g = gamma_transmissivities({0.01, 1e-3, 1.0}, 5000);
  ASSERT_EQ(g.size(), 4999u);
  EXPECT_NEAR(g[0], 0.5, 1e-3);
  EXPECT_THROW(gamma_transmissivities(kRep, 1), DomainError);
}

TEST(Gammas, SmallTapLimit) {
  const auto g = gamma_transmissivities({0.01, 1e-3, 0.0}, 10000000);
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(g[k - 1], double(k) / (k + 1), 1e-5) << k;
}

TEST(Gammas, CascadeAddsMeanFieldsCoherently) {
  // Beam-splitter cascade on the stage fields alpha_k = a1 b^{k-1}.
  const ChannelParams p{0.05, 0.02, 2.0};
  const long k = 200, m = 1000;
  const auto g = gamma_transmissivities(p, k);
  const JdrConfig cfg{m, 2, k};
  const SfgStageValues sv = stage_values(p, cfg);
  double field = sv.alpha[0], energy = sv.alpha[0] * sv.alpha[0];
  for (long i = 1; i < k; ++i) {
    field = std::sqrt(g[i - 1]) * field + std::sqrt(1 - g[i - 1]) * sv.alpha[i];
    energy += sv.alpha[i] * sv.alpha[i];
  }
  EXPECT_NEAR(field * field, energy, 1e-10 * energy);
  EXPECT_NEAR(alpha0_squared(p, m, k), energy, 1e-10 * energy);
}

TEST(Alpha0, Examples) {
  EXPECT_EQ(alpha0_squared({0.01, 0.0, 10.0}, 1000, 100), 0.0);
  EXPECT_EQ(alpha0_squared_limit({0.01, 0.0, 10.0}, 1000), 0.0);
  // Partial sum of the stage energies at K = 5000; relative gap is about (1 + N_S')/(2K).
  const ChannelParams p{0.01, 0.01, 1.0};
  const long k = 5000, m = 10000;
  const double b = 1 - (1 + p.n_s_prime()) / double(k);
  double sum = 0;
  for (long i = 0; i < k; ++i) sum += double(m) * p.eta * p.n_s * (1 + p.n_s) / double(k) * std::pow(b * b, double(i));
  EXPECT_NEAR(sum / alpha0_squared_limit(p, m), 1.0, 1e-3);
  EXPECT_NEAR(alpha0_squared(p, m, k) / sum, 1.0, 1e-12);
  const ChannelParams bright{0.5, 0.01, 1e3};
  const double expected = double(m) * bright.eta * bright.n_s * (1 + bright.n_s) / (2 * (1 + bright.n_s_prime()));
  EXPECT_NEAR(alpha0_squared_limit(bright, m) / expected, 1.0, 1e-12);
}

TEST(NoiseRecurrence, SingleStageIsInitialCondition) {
  const ChannelParams p{0.01, 1e-3, 10.0};
  EXPECT_NEAR(thermal_noise_recurrence(p, 1), p.n_s * p.n_s_prime(), 1e-18);
  EXPECT_EQ(thermal_noise_recurrence(p, 1, 0.25), 0.25);
}

TEST(NoiseRecurrence, StepMatchesAngleForm) {
  // Effective transmissivity cos^2(arccos sqrt(g') - arccos sqrt(g)).
  eacomm::testing::Gen gen;
  for (int i = 0; i < 50; ++i) {
    const double n = gen.log_uniform(1e-8, 1), u = gen.log_uniform(1e-8, 1), g = gen.uniform(0, 1);
    const double gp = n / (u + n);
    const double c = std::cos(std::acos(std::sqrt(gp)) - std::acos(std::sqrt(g)));
    EXPECT_NEAR(noise_recurrence_step(n, u, g), c * c * (n + u), 1e-12 * (n + u));
  }
  const ChannelParams p{0.01, 1e-3, 10.0};
  const double u = p.n_s * p.n_s_prime() / 2;
  const double g1 = gamma_transmissivities(p, 2)[0];
  const double c = std::cos(std::acos(std::sqrt(0.5)) - std::acos(std::sqrt(g1)));
  EXPECT_NEAR(thermal_noise_recurrence(p, 2), c * c * 2 * u, 1e-15);
  EXPECT_THROW(noise_recurrence_step(-1, 0.1, 0.5), DomainError);
  EXPECT_THROW(noise_recurrence_step(0.1, 0.1, 1.5), DomainError);
}

TEST(NoiseRecurrence, PositiveAndBelowTotalNoise) {
  for (double ns : {1e-4, 1e-3, 1e-2}) {
    for (long k : {10L, 100L, 5000L}) {
      const ChannelParams p{0.01, ns, 10.0};
      const double n = thermal_noise_recurrence(p, k);
      EXPECT_GT(n, 0.0);
      EXPECT_LT(n, p.n_s * p.n_s_prime());
    }
  }
}

TEST(Jdr2ValuesBundle, Consistent) {
  const Jdr2Values v = jdr2_values(kRep, 10000, 100);
  EXPECT_EQ(v.gammas.size(), 99u);
  EXPECT_NEAR(v.alpha0 * v.alpha0, alpha0_squared(kRep, 10000, 100), 1e-14);
  EXPECT_EQ(v.n_t0, thermal_noise_recurrence(kRep, 100));
}

TEST(FirstClickDensity, Examples) {
  const auto c0 = Jdr2IntegrandContext::exact_nulling(0.3, 4, 0.0, 0.05);
  EXPECT_NEAR(first_click_density(c0, true), first_click_density(c0, false), 1e-15);
  const auto quiet = Jdr2IntegrandContext::exact_nulling(0.3, 4, 0.5, 0.0);
  EXPECT_EQ(first_click_density(quiet, false), 0.0);
  EXPECT_GT(first_click_density(quiet, true), 0.0);
  Jdr2IntegrandContext bad = quiet;
  bad.t = 1.5;
  EXPECT_THROW(first_click_density(bad, true), DomainError);
}

TEST(FirstClickDensity, NormalizedWithErasure) {
  for (long l : {2L, 4L, 16L}) {
    for (double a0 : {0.0, 0.3, 1.0}) {
      for (double n : {0.0, 0.01, 0.2}) {
        Tolerance tol;
        tol.rel_tol = 1e-10;
        const double carrier = integrate(
            [&](double t) { return first_click_density(Jdr2IntegrandContext::exact_nulling(t, l, a0, n), true); }, 0,
            1, tol).value;
        const double other = integrate(
            [&](double t) { return first_click_density(Jdr2IntegrandContext::exact_nulling(t, l, a0, n), false); }, 0,
            1, tol).value;
        EXPECT_NEAR(carrier + double(l - 1) * other + erasure_probability(l, a0, n), 1.0, 1e-6)
            << l << " " << a0 << " " << n;
      }
    }
  }
}

TEST(Kennedy, ProbabilitiesBoundedAndPhaseBlindWithoutLight) {
  eacomm::testing::Gen gen;
  for (int i = 0; i < 200; ++i) {
    const auto c = Jdr2IntegrandContext::exact_nulling(gen.uniform(0, 1), 1L << gen.integer(1, 8),
                                                       gen.uniform(0, 2), gen.uniform(0, 0.5));
    for (bool carrier : {true, false}) {
      for (int sign : {1, -1}) {
        const double pm = kennedy_minus_probability(c, carrier, sign);
        EXPECT_GE(pm, 0.0);
        EXPECT_LE(pm, 1.0);
        EXPECT_NEAR(pm + (1 - pm), 1.0, 0.0);
      }
    }
  }
  const auto dark = Jdr2IntegrandContext::exact_nulling(0.4, 8, 0.0, 0.05);
  EXPECT_NEAR(kennedy_minus_probability(dark, true, 1), kennedy_minus_probability(dark, true, -1), 1e-15);
}

TEST(Kennedy, MismatchedSignClicksMore) {
  const auto c = Jdr2IntegrandContext::exact_nulling(0.0, 4, 0.5, 0.01);
  const double click_mismatched = 1 - kennedy_minus_probability(c, true, +1);
  const double click_matched = 1 - kennedy_minus_probability(c, true, -1);
  EXPECT_GT(click_mismatched, click_matched);
}

TEST(Erasure, Examples) {
  EXPECT_EQ(erasure_probability(8, 0.0, 0.0), 1.0);
  EXPECT_LT(erasure_probability(1L << 20, 0.1, 0.01), 1e-300 + 1e-20);
  eacomm::testing::Gen gen;
  for (int i = 0; i < 20; ++i) {
    const long l = 1L << gen.integer(1, 6);
    const double a0 = gen.uniform(0, 1.5), n = gen.uniform(0, 0.3);
    double prod = vacuum_probability(std::sqrt(double(l)) * a0, n);
    for (long j = 1; j < l; ++j) prod *= vacuum_probability(0.0, n);
    EXPECT_NEAR(erasure_probability(l, a0, n), prod, 1e-14);
  }
  EXPECT_THROW(erasure_probability(0, 0.1, 0.1), DomainError);
}

TEST(TransitionMatrixTest, RowsSumToOneWithoutCompletion) {
  for (long l : {2L, 4L, 8L}) {
    const TransitionMatrix tm = transition_matrix(kRep, 10000, l, 100);
    EXPECT_EQ(tm.x.rows(), 2 * l);
    EXPECT_EQ(tm.x.cols(), 2 * l + 1);
    for (long r = 0; r < tm.x.rows(); ++r) EXPECT_NEAR(tm.x.row(r).sum(), 1.0, 1e-6) << l << " " << r;
    EXPECT_GE(tm.x.minCoeff(), -1e-9);
    EXPECT_LE(tm.x.maxCoeff(), 1 + 1e-9);
    EXPECT_NEAR(tm.entries.x13, tm.entries.x13_completion(), 1e-6);
  }
}

TEST(TransitionMatrixTest, NoAmplitudeCarriesNoSign) {
  const TransitionEntries e = transition_entries(4, 0.0, 0.05);
  EXPECT_NEAR(e.x11, e.x21, 1e-12);
  EXPECT_NEAR(e.x12, e.x22, 1e-12);
}

TEST(TransitionMatrixTest, SignSwapExchangesCarrierColumns) {
  const TransitionMatrix tm = transition_matrix(kRep, 10000, 4, 100);
  const TransitionEntries& e = tm.entries;
  for (long j = 0; j < 4; ++j) {
    EXPECT_EQ(tm.x(2 * j, 2 * j), e.x11);
    EXPECT_EQ(tm.x(2 * j, 2 * j + 1), e.x12);
    EXPECT_EQ(tm.x(2 * j + 1, 2 * j), e.x21);
    EXPECT_EQ(tm.x(2 * j + 1, 2 * j + 1), e.x22);
    for (long i = 0; i < 4; ++i) {
      if (i == j) continue;
      EXPECT_EQ(tm.x(2 * j, 2 * i), tm.x(2 * j + 1, 2 * i));
      EXPECT_EQ(tm.x(2 * j, 2 * i + 1), tm.x(2 * j + 1, 2 * i + 1));
    }
  }
  // Direct quadrature of the sign-swapped decision reproduces the other column.
  const auto v = jdr2_values(kRep, 10000, 100);
  Tolerance tol;
  tol.rel_tol = 1e-8;
  tol.abs_tol = 1e-13;
  // The density decays on a 1/(L alpha0^2) time scale and has a square-root
  // endpoint at t = 1: doubling mesh on [0, 1/2], t = 1 - v^2 on [1/2, 1].
  const double scale = 1.0 / (4 * v.alpha0 * v.alpha0 + 6 * v.n_t0);
  auto integrand = [&](int sign) {
    auto f = [&](double t) {
      const auto c = Jdr2IntegrandContext::exact_nulling(std::clamp(t, 0.0, 1.0), 4, v.alpha0, v.n_t0);
      return first_click_density(c, true) * kennedy_minus_probability(c, true, sign);
    };
    double total = 0, lo = 0;
    for (double hi = scale / 8; lo < 0.5; hi *= 2) {
      hi = std::min(hi, 0.5);
      total += integrate(f, lo, hi, tol).value;
      lo = hi;
    }
    total += integrate([&](double w) { return 2 * w * f(1 - w * w); }, 0, std::sqrt(0.5), tol).value;
    return total;
  };
  EXPECT_NEAR(integrand(+1), e.x12, 1e-7);
  EXPECT_NEAR(integrand(-1), e.x22, 1e-7);
}

TEST(MutualInfoRm, UniformRowsCarryNothing) {
  TransitionEntries e;
  e.l = 4;
  e.erasure = 0.2;
  e.x11 = e.x12 = e.x21 = e.x22 = e.x13 = e.x14 = 0.1;
  EXPECT_NEAR(mutual_info_rm(e, 0.3), 0.0, 1e-15);
}

TEST(MutualInfoRm, PerfectDetection) {
  TransitionEntries e;
  e.l = 8;
  e.x11 = e.x22 = 1.0;
  EXPECT_NEAR(mutual_info_rm(e, 0.5), 4.0, 1e-14);
}

TEST(MutualInfoRm, MatchesBruteForce) {
  eacomm::testing::Gen gen;
  for (long l : {2L, 4L, 8L}) {
    for (int i = 0; i < 10; ++i) {
      const TransitionEntries e = synthetic_entries(gen, l);
      const double p = gen.uniform(0, 1);
      const Eigen::MatrixXd x = assemble_transition_matrix(e).x;
      const double oracle = brute_force_mi(x, rm_priors(l, p));
      EXPECT_NEAR(mutual_info_rm(e, p), oracle, 1e-10);
      EXPECT_NEAR(dmc_mutual_information(x, rm_priors(l, p)), oracle, 1e-12);
    }
  }
  const TransitionEntries real = transition_entries(4, 0.4, 0.02);
  const Eigen::MatrixXd x = assemble_transition_matrix(real).x;
  EXPECT_NEAR(mutual_info_rm(real, 0.3), brute_force_mi(x, rm_priors(4, 0.3)), 1e-10);
}

TEST(MutualInfoRm, ConcaveInPrior) {
  eacomm::testing::Gen gen;
  for (int i = 0; i < 10; ++i) {
    const TransitionEntries e = synthetic_entries(gen, 8);
    const double h = 0.01;
    for (int j = 1; j < 100; ++j) {
      const double p = j * h;
      EXPECT_LE(mutual_info_rm(e, p + h) - 2 * mutual_info_rm(e, p) + mutual_info_rm(e, p - h), 1e-8);
    }
  }
}

TEST(RateRm, SymmetricChannelPrefersEqualPriors) {
  TransitionEntries e;
  e.l = 4;
  e.erasure = 0.3;
  e.x11 = e.x22 = 0.3;
  e.x12 = e.x21 = 0.1;
  e.x13 = e.x14 = 0.05;
  EXPECT_NEAR(rate_rm_from_entries(e, 1).p_plus, 0.5, 1e-6);
  EXPECT_THROW(rate_rm_from_entries(e, 0), DomainError);
}

TEST(RateRm, MatchesPriorScan) {
  const TransitionEntries e = transition_entries(8, 0.5, 0.01);
  double best = 0;
  for (int i = 0; i <= 1000; ++i) best = std::max(best, mutual_info_rm(e, i / 1000.0));
  const RmRate r = rate_rm_from_entries(e, 10);
  EXPECT_GE(r.rate * 80, best - 1e-12);
  EXPECT_NEAR(r.rate * 80, best, 1e-6);
}

TEST(HadamardVariant, Examples) {
  EXPECT_GE(rate_hadamard_variant(kRep, 10000, 2, 100), 0.0);
  EXPECT_EQ(rate_hadamard_variant({0.01, 0.0, 10.0}, 10000, 8, 100), 0.0);
  EXPECT_EQ(rate_rm({0.01, 0.0, 10.0}, 10000, 8, 100).rate, 0.0);
}

TEST(HadamardVariant, EnvelopeSlightlyBelowReedMuller) {
  const std::vector<long> grid = default_l_grid(12);
  for (double ns : {1e-3, 1e-2}) {
    const ChannelParams p{0.01, ns, 10.0};
    const Jdr2Values v = jdr2_values(p, 10000, 100);
    double rm = 0, had = 0;
    for (long l : grid) {
      const TransitionEntries e = transition_entries(l, v.alpha0, v.n_t0);
      rm = std::max(rm, rate_rm_from_entries(e, 10000).rate);
      had = std::max(had, rate_hadamard_from_entries(e, 10000));
    }
    EXPECT_GT(had, 0.0);
    EXPECT_LE(had, rm * (1 + 1e-9)) << ns;
    EXPECT_GE(had, 0.9 * rm) << ns;
  }
}

TEST(ClassicalRmKennedy, Examples) {
  EXPECT_EQ(classical_rm_gm_kennedy_rate(0.0, 8), 0.0);
  EXPECT_THROW(classical_rm_gm_kennedy_rate(-1.0, 8), DomainError);
}

TEST(ClassicalRmKennedy, EnvelopeAboveHadamardGreenMachine) {
  for (double ns : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
    double rm = 0, had = 0;
    for (long l = 2; l <= 1024; l *= 2) {
      rm = std::max(rm, classical_rm_gm_kennedy_rate(ns, l));
      had = std::max(had, hadamard_gm_classical_rate(ns, l));
    }
    EXPECT_GT(rm, had) << ns;
  }
}

TEST(ClassicalRmKennedy, OrderEightRegression) {
  // Frozen from the first verified run.
  const double ns[] = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  const double expected[] = {0.00029996566031363512, 0.0029965307855338097, 0.029619598402452822,
                             0.24322673177649709, 0.4788300134878718};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(classical_rm_gm_kennedy_rate(ns[i], 8) / expected[i], 1.0, 1e-7);
}

TEST(EnvelopeRm, AboveJdr1AtMatchedParameters) {
  const std::vector<long> grid = default_l_grid(16);
  for (double ns : {1e-4, 1e-3, 1e-2}) {
    const ChannelParams p{0.01, ns, 10.0};
    EXPECT_GE(envelope_rm(p, 10000, 100, grid).best_rate, envelope_over_l(p, 10000, 100, grid).best_rate) << ns;
  }
}
