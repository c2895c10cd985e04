#include "eacomm/jdr2.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace eacomm {

namespace {

double stage_base(const ChannelParams& p, long k) {
  return 1 - (1 + p.n_s_prime()) / static_cast<double>(k);
}

void check_stages(long k) {
  if (k < 1) throw DomainError("k_stages must be positive");
}

}  // namespace

std::vector<double> gamma_transmissivities(const ChannelParams& p, long k_stages) {
  p.validate();
  if (k_stages < 2) throw DomainError("gamma_transmissivities: needs at least two stages");
  const double lb = std::log(std::abs(stage_base(p, k_stages)));
  std::vector<double> g;
  for (long k = 1; k < k_stages; ++k) {
    // (1 - b^{2k}) / (1 - b^{2(k+1)}) with expm1 for b near 1.
    const double num = -std::expm1(2.0 * double(k) * lb);
    const double den = -std::expm1(2.0 * double(k + 1) * lb);
    g.push_back(num / den);
  }
  return g;
}

double alpha0_squared_limit(const ChannelParams& p, long m) {
  p.validate();
  const double y = 1 + p.n_s_prime();
  return double(m) * p.eta * p.n_s * (1 + p.n_s) * (-std::expm1(-2 * y)) / (2 * y);
}

double alpha0_squared(const ChannelParams& p, long m, long k_stages) {
  p.validate();
  check_stages(k_stages);
  const double kap = 1.0 / double(k_stages);
  const double base = stage_base(p, k_stages);
  const double mu = base * base;
  const double geo = std::abs(1 - mu) < 1e-15 ? double(k_stages)
                                              : -std::expm1(double(k_stages) * std::log(mu)) / (1 - mu);
  return double(m) * kap * p.eta * p.n_s * (1 + p.n_s) * geo;
}

double noise_recurrence_step(double n_prev, double u, double gamma) {
  if (!(n_prev >= 0 && u >= 0)) throw DomainError("noise_recurrence_step: negative thermal mean");
  if (!(gamma >= 0 && gamma <= 1)) throw DomainError("noise_recurrence_step: gamma outside [0,1]");
  if (n_prev + u == 0) return 0.0;
  const double gp = n_prev / (u + n_prev);
  const double eff = 2 * (gp * gamma + std::sqrt(gamma * (1 - gamma) * gp * (1 - gp))) + 1 - gamma - gp;
  return eff * (n_prev + u);
}

double thermal_noise_recurrence(const ChannelParams& p, long k_stages, std::optional<double> initial) {
  p.validate();
  check_stages(k_stages);
  const double u = p.n_s * p.n_s_prime() / double(k_stages);
  double n = initial.value_or(u);
  if (k_stages == 1) return n;
  for (double g : gamma_transmissivities(p, k_stages)) n = noise_recurrence_step(n, u, g);
  return n;
}

Jdr2Values jdr2_values(const ChannelParams& p, long m, long k_stages) {
  Jdr2Values v;
  v.gammas = k_stages >= 2 ? gamma_transmissivities(p, k_stages) : std::vector<double>{};
  v.alpha0 = std::sqrt(alpha0_squared(p, m, k_stages));
  v.n_t0 = thermal_noise_recurrence(p, k_stages);
  return v;
}

void Jdr2IntegrandContext::validate() const {
  if (!(T > 0)) throw DomainError("Jdr2IntegrandContext: T must be positive");
  if (!(t >= 0 && t <= T)) throw DomainError("Jdr2IntegrandContext: t outside [0, T]");
  if (!(beta >= 0 && alpha0 >= 0 && n_t0 >= 0)) throw DomainError("Jdr2IntegrandContext: negative amplitude or noise");
  if (l < 2) throw DomainError("Jdr2IntegrandContext: l must be at least 2");
}

Jdr2IntegrandContext Jdr2IntegrandContext::exact_nulling(double t, long l, double alpha0, double n_t0) {
  Jdr2IntegrandContext c;
  c.t = t;
  c.l = l;
  c.alpha0 = alpha0;
  c.n_t0 = n_t0;
  c.beta = std::sqrt(double(l)) * alpha0;
  return c;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0 ? std::log(x) : kNegInf; }

// Log densities and decision probabilities with s = t/T.
double log_first_click(const Jdr2IntegrandContext& c, bool carrier) {
  const double s = c.t / c.T, n = c.n_t0, a = double(c.l) * c.alpha0 * c.alpha0;
  const double bracket = s * n * n + n + (carrier ? a : 0.0);
  return -s * a / (1 + s * n) - double(c.l + 2) * std::log1p(s * n) + safe_log(bracket) - std::log(c.T);
}

double log_kennedy_minus(const Jdr2IntegrandContext& c, bool carrier, int sign_in) {
  const double s = c.t / c.T, n = c.n_t0, d = c.beta;
  const double rest = std::sqrt(std::max(0.0, 1 - s));
  if (!carrier) {
    return 2 * std::log1p(s * n) - 3 * std::log1p(n) + std::log((1 - s) * n * d * d + n + 1) -
           (1 + s * n) * d * d / (1 + n);
  }
  const double mu = (sign_in >= 0 ? 1.0 : -1.0) * std::sqrt(double(c.l)) * c.alpha0;
  const double denom = n * (1 + s * n) + mu * mu;
  const double num = n * (1 + n) + (mu - rest * d * n) * (mu - rest * d * n);
  if (denom == 0) return 0.0;  // no light and no noise: never clicks, decide "-"
  return 3 * std::log1p(s * n) - std::log(denom) - 3 * std::log1p(n) + s * mu * mu / (1 + s * n) -
         ((mu + d) * (mu + d) - 2 * mu * d * s / (1 + rest) + d * d * s * n) / (1 + n) + safe_log(num);
}

// density * P(-) and density * P(+) with the exponents combined.
double click_and_minus(const Jdr2IntegrandContext& c, bool carrier, int sign_in) {
  const double lp = log_first_click(c, carrier);
  if (lp == kNegInf) return 0.0;
  return std::exp(lp + log_kennedy_minus(c, carrier, sign_in));
}

double click_and_plus(const Jdr2IntegrandContext& c, bool carrier, int sign_in) {
  const double lp = log_first_click(c, carrier);
  if (lp == kNegInf) return 0.0;
  const double lk = std::min(0.0, log_kennedy_minus(c, carrier, sign_in));
  return std::exp(lp) * -std::expm1(lk);
}

// Integral over s in [0, 1] with s = 1 - (1 - x)^2, which smooths the
// sqrt(1 - s) endpoint, split geometrically around the decay rate `rate`.
// Each piece gets an absolute tolerance scaled to the whole integral.
double integrate_slices(const std::function<double(double)>& f, double rate, const Tolerance& tol,
                        const char* name) {
  auto g = [&](double x) { return 2 * (1 - x) * f(std::clamp(x * (2 - x), 0.0, 1.0)); };
  std::vector<double> cuts{0.0};
  if (rate > 1) {
    for (double x = 0.5 / rate; x < 1; x *= 4) cuts.push_back(x);
  }
  cuts.push_back(1.0);
  const double span = std::min(1.0, cuts[1]);
  const double scale = std::max({std::abs(g(0.0)), std::abs(g(0.5 * span)), std::abs(g(span))}) * span;
  Tolerance piece = tol;
  piece.abs_tol = std::max(tol.abs_tol, tol.rel_tol * scale);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    try {
      total += integrate(g, cuts[i], cuts[i + 1], piece).value;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("transition entry ") + name + ": " + e.what(), total + e.partial);
    }
  }
  return total;
}

}  // namespace

double first_click_density(const Jdr2IntegrandContext& ctx, bool carrier) {
  ctx.validate();
  const double lp = log_first_click(ctx, carrier);
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

double kennedy_minus_probability(const Jdr2IntegrandContext& ctx, bool carrier, int sign_in) {
  ctx.validate();
  const double lk = log_kennedy_minus(ctx, carrier, sign_in);
  return lk == kNegInf ? 0.0 : std::clamp(std::exp(lk), 0.0, 1.0);
}

double erasure_probability(long l, double alpha0, double n_t0) {
  if (l < 1 || !(alpha0 >= 0) || !(n_t0 >= 0)) throw DomainError("erasure_probability: invalid inputs");
  return std::exp(-double(l) * std::log1p(n_t0) - double(l) * alpha0 * alpha0 / (n_t0 + 1));
}

double TransitionEntries::x13_completion() const {
  return (1 - erasure - x11 - x12) / double(l - 1) - x14;
}

double TransitionEntries::row_sum_plus() const {
  return x11 + x12 + double(l - 1) * (x13 + x14) + erasure;
}

double TransitionEntries::row_sum_minus() const {
  return x21 + x22 + double(l - 1) * (x13 + x14) + erasure;
}

TransitionEntries transition_entries(long l, double alpha0, double n_t0, const Tolerance& tol_in) {
  if (l < 2) throw DomainError("transition_entries: l must be at least 2");
  if (!(alpha0 >= 0 && n_t0 >= 0)) throw DomainError("transition_entries: invalid amplitude or noise");
  Tolerance tol = tol_in;
  tol.rel_tol = std::max(tol.rel_tol, 1e-8);
  tol.abs_tol = std::min(tol.abs_tol, 1e-14);
  const double a = double(l) * alpha0 * alpha0 + double(l + 2) * n_t0;
  auto ctx = [&](double s) { return Jdr2IntegrandContext::exact_nulling(s, l, alpha0, n_t0); };

  TransitionEntries e;
  e.l = l;
  e.x11 = integrate_slices([&](double s) { return click_and_plus(ctx(s), true, +1); }, a, tol, "X11");
  e.x12 = integrate_slices([&](double s) { return click_and_minus(ctx(s), true, +1); }, a, tol, "X12");
  e.x21 = integrate_slices([&](double s) { return click_and_plus(ctx(s), true, -1); }, a, tol, "X21");
  e.x22 = integrate_slices([&](double s) { return click_and_minus(ctx(s), true, -1); }, a, tol, "X22");
  e.x13 = integrate_slices([&](double s) { return click_and_plus(ctx(s), false, +1); }, a, tol, "X13");
  e.x14 = integrate_slices([&](double s) { return click_and_minus(ctx(s), false, +1); }, a, tol, "X14");
  e.erasure = erasure_probability(l, alpha0, n_t0);
  return e;
}

TransitionMatrix assemble_transition_matrix(const TransitionEntries& e) {
  const long L = e.l;
  TransitionMatrix tm;
  tm.entries = e;
  tm.x = Eigen::MatrixXd::Zero(2 * L, 2 * L + 1);
  for (long j = 0; j < L; ++j) {
    for (long i = 0; i < L; ++i) {
      if (i == j) {
        tm.x(2 * j, 2 * i) = e.x11;
        tm.x(2 * j, 2 * i + 1) = e.x12;
        tm.x(2 * j + 1, 2 * i) = e.x21;
        tm.x(2 * j + 1, 2 * i + 1) = e.x22;
      } else {
        tm.x(2 * j, 2 * i) = tm.x(2 * j + 1, 2 * i) = e.x13;
        tm.x(2 * j, 2 * i + 1) = tm.x(2 * j + 1, 2 * i + 1) = e.x14;
      }
    }
    tm.x(2 * j, 2 * L) = tm.x(2 * j + 1, 2 * L) = e.erasure;
  }
  return tm;
}

TransitionMatrix transition_matrix(const ChannelParams& p, long m, long l, long k_stages,
                                   const Tolerance& tol) {
  const Jdr2Values v = jdr2_values(p, m, k_stages);
  return assemble_transition_matrix(transition_entries(l, v.alpha0, v.n_t0, tol));
}

namespace {
double clamp_prob(double x) { return x < 1e-14 ? 0.0 : x; }
}  // namespace

double mutual_info_rm(const TransitionEntries& e, double p_plus) {
  if (!(p_plus >= 0 && p_plus <= 1)) throw DomainError("mutual_info_rm: p_plus outside [0,1]");
  const double pm = 1 - p_plus, lm1 = double(e.l - 1);
  const double x11 = clamp_prob(e.x11), x12 = clamp_prob(e.x12), x21 = clamp_prob(e.x21);
  const double x22 = clamp_prob(e.x22), x13 = clamp_prob(e.x13), x14 = clamp_prob(e.x14);
  const double ap = lm1 * x13 + pm * x21 + p_plus * x11;
  const double am = lm1 * x14 + pm * x22 + p_plus * x12;
  const double info = std::log2(double(e.l)) * (ap + am) - xlog2x(ap) - xlog2x(am) +
                      lm1 * (xlog2x(x13) + xlog2x(x14)) + pm * (xlog2x(x21) + xlog2x(x22)) +
                      p_plus * (xlog2x(x11) + xlog2x(x12));
  return std::max(info, 0.0);
}

double dmc_mutual_information(const Eigen::MatrixXd& x, const std::vector<double>& priors) {
  if (static_cast<long>(priors.size()) != x.rows()) throw DomainError("dmc_mutual_information: prior count mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.cols());
  for (long j = 0; j < x.rows(); ++j) out += priors[j] * x.row(j).transpose();
  double info = 0;
  for (long j = 0; j < x.rows(); ++j) {
    if (priors[j] <= 0) continue;
    for (long i = 0; i < x.cols(); ++i) {
      if (x(j, i) > 0 && out(i) > 0) info += priors[j] * x(j, i) * std::log2(x(j, i) / out(i));
    }
  }
  return info;
}

RmRate rate_rm_from_entries(const TransitionEntries& e, long m) {
  if (m < 1) throw DomainError("rate_rm: m must be positive");
  Tolerance tol;
  tol.abs_tol = 1e-10;
  const Maximum best = maximize_scalar([&](double p) { return mutual_info_rm(e, p); }, 0.0, 1.0, tol);
  return {best.value / (double(e.l) * double(m)), best.argmax};
}

RmRate rate_rm(const ChannelParams& p, long m, long l, long k_stages) {
  const Jdr2Values v = jdr2_values(p, m, k_stages);
  return rate_rm_from_entries(transition_entries(l, v.alpha0, v.n_t0), m);
}

double rate_hadamard_from_entries(const TransitionEntries& e, long m) {
  if (m < 1) throw DomainError("rate_hadamard: m must be positive");
  return mutual_info_rm(e, 1.0) / (double(m) * double(e.l - 1));
}

double rate_hadamard_variant(const ChannelParams& p, long m, long l, long k_stages) {
  const Jdr2Values v = jdr2_values(p, m, k_stages);
  return rate_hadamard_from_entries(transition_entries(l, v.alpha0, v.n_t0), m);
}

double classical_rm_gm_kennedy_rate(double n_s, long l) {
  if (!(n_s >= 0)) throw DomainError("classical_rm_gm_kennedy_rate: negative n_s");
  return rate_rm_from_entries(transition_entries(l, std::sqrt(n_s), 0.0), 1).rate;
}

Envelope envelope_rm(const ChannelParams& p, long m, long k_stages, const std::vector<long>& l_grid) {
  const Jdr2Values v = jdr2_values(p, m, k_stages);
  std::vector<double> rates;
  for (long l : l_grid) rates.push_back(rate_rm_from_entries(transition_entries(l, v.alpha0, v.n_t0), m).rate);
  return envelope_of(l_grid, rates);
}

}  // namespace eacomm
