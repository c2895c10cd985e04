#include "eacomm/mathcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace eacomm {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

double from_nats(double nats, LogUnit unit) {
  return unit == LogUnit::Bits ? nats / kLn2 : nats;
}

double to_nats(double value, LogUnit unit) {
  return unit == LogUnit::Bits ? value * kLn2 : value;
}

void Tolerance::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0) || max_iter < 1) {
    throw DomainError("tolerance fields must be positive");
  }
}

double g_entropy(double x, LogUnit unit) {
  if (!(x >= 0)) throw DomainError("g_entropy: negative mean photon number");
  if (x == 0) return 0.0;
  const double nats = (1 + x) * std::log1p(x) - x * std::log(x);
  return from_nats(nats, unit);
}

double g_entropy_difference(double x, double d, LogUnit unit) {
  if (!(x >= 0 && x + d >= 0)) throw DomainError("g_entropy_difference: negative mean photon number");
  if (x == 0) return g_entropy(d, unit);
  // d log((1+x)/x) + (1+x+d) log1p(d/(1+x)) - (x+d) log1p(d/x)
  const double nats = d * std::log1p(1 / x) + (1 + x + d) * std::log1p(d / (1 + x)) - (x + d) * std::log1p(d / x);
  return from_nats(nats, unit);
}

double binary_entropy(double x) {
  if (!(x >= 0 && x <= 1)) throw DomainError("binary_entropy: argument outside [0,1]");
  if (x == 0 || x == 1) return 0.0;
  return -(x * std::log(x) + (1 - x) * std::log1p(-x)) / kLn2;
}

double lambert_w0(double x) {
  const double branch = -1.0 / M_E;
  if (x < branch) throw DomainError("lambert_w0: argument below -1/e");
  if (x == 0) return 0.0;
  if (x == branch) return -1.0;

  double w;
  if (x < -0.25) {
    // Series about the branch point.
    const double p = std::sqrt(2 * (M_E * x + 1));
    w = -1 + p - p * p / 3 + 11.0 / 72 * p * p * p;
  } else if (x < 3) {
    w = std::log1p(x);
    w = w * (1 - std::log1p(w) / (2 + w));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1;
    if (wp1 == 0) break;
    const double step = f / (ew * wp1 - (w + 2) * f / (2 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-15 * (1 + std::abs(w))) break;
  }
  return w;
}

double q_pochhammer(double a, double q, long n) {
  if (n < 0) throw DomainError("q_pochhammer: negative length");
  double prod = 1.0;
  double qk = 1.0;
  for (long k = 0; k < n; ++k) {
    prod *= 1 - a * qk;
    qk *= q;
  }
  return prod;
}

double vacuum_probability(std::complex<double> alpha, double nbar) {
  if (!(nbar >= 0)) throw DomainError("vacuum_probability: negative thermal mean");
  return std::exp(-std::norm(alpha) / (nbar + 1)) / (nbar + 1);
}

Integral integrate(const std::function<double(double)>& f, double lo, double hi,
                   const Tolerance& tol) {
  tol.validate();
  if (!(lo <= hi)) throw DomainError("integrate: lo > hi");
  if (lo == hi) return {0.0, 0.0};
  double err = 0, l1 = 0;
  const unsigned depth = static_cast<unsigned>(std::clamp(tol.max_iter, 1, 60));
  // Boost's local error estimates are not rescaled by the interval width, so
  // the integral is always taken over [-1, 1].
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto unit = [&](double u) { return half * f(mid + half * u); };
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      unit, -1.0, 1.0, depth, tol.rel_tol, &err, &l1);
  if (!std::isfinite(value)) throw NumericalError("integrate: non-finite estimate", value);
  if (err > std::max(tol.abs_tol, tol.rel_tol * std::abs(value))) {
    throw NumericalError("integrate: tolerance not reached", value);
  }
  return {value, err};
}

Maximum maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                        const Tolerance& tol) {
  if (!(lo < hi)) throw DomainError("maximize_scalar: empty interval");
  constexpr int kScan = 32;
  std::vector<double> xs(kScan), fs(kScan);
  for (int i = 0; i < kScan; ++i) {
    xs[i] = lo + (hi - lo) * i / (kScan - 1);
    fs[i] = f(xs[i]);
  }
  const int best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  Maximum out{xs[best], fs[best]};

  const double a = xs[std::max(best - 1, 0)];
  const double b = xs[std::min(best + 1, kScan - 1)];
  // Brent's bracket resolution is bounded by sqrt(eps); ask for the bits implied
  // by abs_tol relative to the bracket, capped there.
  const int bits = std::clamp(
      static_cast<int>(std::ceil(-std::log2(std::max(tol.abs_tol, 1e-300) / (b - a)))) + 2, 8,
      std::numeric_limits<double>::digits / 2);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima(
      [&](double x) { return -f(x); }, a, b, bits, iters);
  if (-r.second > out.value) out = {r.first, -r.second};
  return out;
}

double xlog2x(double x, double floor) {
  if (x <= floor) return 0.0;
  return x * std::log2(x);
}

}  // namespace eacomm
