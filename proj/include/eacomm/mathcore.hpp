#pragma once

#include <complex>
#include <functional>
#include <utility>

#include "eacomm/errors.hpp"

namespace eacomm {

enum class LogUnit { Bits, Nats };

// Convert an information quantity expressed in nats into `unit`.
double from_nats(double nats, LogUnit unit);
// Convert an information quantity expressed in `unit` into nats.
double to_nats(double value, LogUnit unit);

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_iter = 20;

  void validate() const;
};

// g(x) = (1+x) log(1+x) - x log x, the entropy of a thermal state with mean x.
double g_entropy(double x, LogUnit unit = LogUnit::Bits);

// g(x + d) - g(x) without cancellation when d << x.
double g_entropy_difference(double x, double d, LogUnit unit = LogUnit::Bits);

// h2(x) = -x log2 x - (1-x) log2 (1-x), in bits.
double binary_entropy(double x);

// Principal branch of the Lambert W function.
double lambert_w0(double x);

// (a; q)_n = prod_{k=0}^{n-1} (1 - a q^k).
double q_pochhammer(double a, double q, long n);

// <0| rho_th(alpha, nbar) |0> = exp(-|alpha|^2/(nbar+1)) / (nbar+1).
double vacuum_probability(std::complex<double> alpha, double nbar);

struct Integral {
  double value;
  double error;
};

// Adaptive Gauss-Kronrod quadrature on [lo, hi]. Throws NumericalError when
// the error estimate exceeds max(abs_tol, rel_tol*|value|).
Integral integrate(const std::function<double(double)>& f, double lo, double hi,
                   const Tolerance& tol = {});

struct Maximum {
  double argmax;
  double value;
};

// Bounded maximization: 32-point scan followed by Brent refinement around the
// best sample. Endpoints are valid answers.
Maximum maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                        const Tolerance& tol = {});

// x log2 x with the 0 log 0 = 0 convention; arguments below `floor` count as 0.
double xlog2x(double x, double floor = 1e-14);

}  // namespace eacomm
