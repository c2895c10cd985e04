#include "eacomm/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace eacomm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

void ChannelParams::validate() const {
  if (!(eta > 0 && eta <= 1)) throw DomainError("eta must lie in (0, 1]");
  if (!(n_s >= 0)) throw DomainError("n_s must be nonnegative");
  if (!(n_b >= 0)) throw DomainError("n_b must be nonnegative");
}

void SandwichConfig::validate() const {
  if (!(kappa > 0 && kappa <= 1)) throw DomainError("kappa must lie in (0, 1]");
}

GaussianState::GaussianState(VectorXd mean, MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0 || cov_.rows() != mean_.size() ||
      cov_.cols() != mean_.size()) {
    throw DomainError("GaussianState: inconsistent dimensions");
  }
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("GaussianState: covariance not symmetric");
  }
}

GaussianState GaussianState::vacuum(int n_modes) {
  if (n_modes < 1) throw DomainError("vacuum: need at least one mode");
  return {VectorXd::Zero(2 * n_modes), 0.5 * MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState GaussianState::thermal(double nbar) { return displaced_thermal(0.0, nbar); }

GaussianState GaussianState::coherent(cd alpha) { return displaced_thermal(alpha, 0.0); }

GaussianState GaussianState::displaced_thermal(cd alpha, double nbar) {
  if (!(nbar >= 0)) throw DomainError("thermal mean must be nonnegative");
  VectorXd m(2);
  m << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
  return {m, (nbar + 0.5) * MatrixXd::Identity(2, 2)};
}

void GaussianState::check_mode(int m) const {
  if (m < 0 || m >= n_modes()) throw DomainError("mode index out of range");
}

MatrixXd symplectic_form(int n) {
  MatrixXd om = MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    om(2 * k, 2 * k + 1) = 1;
    om(2 * k + 1, 2 * k) = -1;
  }
  return om;
}

double GaussianState::physicality_margin() const {
  const int n = n_modes();
  Eigen::MatrixXcd h = cov_.cast<cd>() + cd(0, 0.5) * symplectic_form(n).cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool GaussianState::is_physical(double tol) const { return physicality_margin() >= -tol; }

cd GaussianState::mean_field(int mode) const {
  check_mode(mode);
  return cd(mean_(2 * mode), mean_(2 * mode + 1)) / std::sqrt(2.0);
}

cd GaussianState::central_aa(int j, int k) const {
  check_mode(j);
  check_mode(k);
  const double qq = cov_(2 * j, 2 * k), pp = cov_(2 * j + 1, 2 * k + 1);
  const double qp = cov_(2 * j, 2 * k + 1), pq = cov_(2 * j + 1, 2 * k);
  return 0.5 * cd(qq - pp, qp + pq);
}

cd GaussianState::central_adag_a(int j, int k) const {
  check_mode(j);
  check_mode(k);
  const double qq = cov_(2 * j, 2 * k), pp = cov_(2 * j + 1, 2 * k + 1);
  const double qp = cov_(2 * j, 2 * k + 1), pq = cov_(2 * j + 1, 2 * k);
  cd v = 0.5 * cd(qq + pp, qp - pq);
  if (j == k) v -= 0.5;
  return v;
}

cd GaussianState::moment_aa(int j, int k) const {
  return central_aa(j, k) + mean_field(j) * mean_field(k);
}

cd GaussianState::moment_adag_a(int j, int k) const {
  return central_adag_a(j, k) + std::conj(mean_field(j)) * mean_field(k);
}

GaussianState GaussianState::transformed(const MatrixXd& s) const {
  return {s * mean_, s * cov_ * s.transpose()};
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int na = 2 * a.n_modes(), nb = 2 * b.n_modes();
  VectorXd m(na + nb);
  m << a.mean(), b.mean();
  MatrixXd c = MatrixXd::Zero(na + nb, na + nb);
  c.topLeftCorner(na, na) = a.cov();
  c.bottomRightCorner(nb, nb) = b.cov();
  return {m, c};
}

GaussianState select_modes(const GaussianState& s, const std::vector<int>& modes) {
  if (modes.empty()) throw DomainError("select_modes: empty selection");
  const int n = static_cast<int>(modes.size());
  VectorXd m(2 * n);
  MatrixXd c(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    if (modes[i] < 0 || modes[i] >= s.n_modes()) throw DomainError("select_modes: bad index");
    for (int u = 0; u < 2; ++u) {
      m(2 * i + u) = s.mean()(2 * modes[i] + u);
      for (int j = 0; j < n; ++j)
        for (int v = 0; v < 2; ++v) c(2 * i + u, 2 * j + v) = s.cov()(2 * modes[i] + u, 2 * modes[j] + v);
    }
  }
  return {m, c};
}

GaussianState tmsv(double nbar) {
  if (!(nbar >= 0)) throw DomainError("tmsv: negative mean photon number");
  MatrixXd c = (nbar + 0.5) * MatrixXd::Identity(4, 4);
  const double x = std::sqrt(nbar * (nbar + 1));
  c(0, 2) = c(2, 0) = x;
  c(1, 3) = c(3, 1) = -x;
  return {VectorXd::Zero(4), c};
}

namespace {

void check_pair(const GaussianState& s, int a, int b) {
  if (a < 0 || b < 0 || a >= s.n_modes() || b >= s.n_modes() || a == b) {
    throw DomainError("invalid mode pair");
  }
}

}  // namespace

GaussianState apply_beamsplitter(const GaussianState& s, int a, int b, double t) {
  check_pair(s, a, b);
  if (!(t >= 0 && t <= 1)) throw DomainError("beamsplitter transmissivity outside [0,1]");
  const double ct = std::sqrt(t), st = std::sqrt(1 - t);
  MatrixXd S = MatrixXd::Identity(2 * s.n_modes(), 2 * s.n_modes());
  for (int u = 0; u < 2; ++u) {
    S(2 * a + u, 2 * a + u) = ct;
    S(2 * a + u, 2 * b + u) = st;
    S(2 * b + u, 2 * a + u) = -st;
    S(2 * b + u, 2 * b + u) = ct;
  }
  return s.transformed(S);
}

GaussianState apply_two_mode_squeezer(const GaussianState& s, int a, int b, double r) {
  check_pair(s, a, b);
  const double c = std::sqrt(1 + r * r);
  MatrixXd S = MatrixXd::Identity(2 * s.n_modes(), 2 * s.n_modes());
  S(2 * a, 2 * a) = c;
  S(2 * a, 2 * b) = r;
  S(2 * a + 1, 2 * a + 1) = c;
  S(2 * a + 1, 2 * b + 1) = -r;
  S(2 * b, 2 * b) = c;
  S(2 * b, 2 * a) = r;
  S(2 * b + 1, 2 * b + 1) = c;
  S(2 * b + 1, 2 * a + 1) = -r;
  return s.transformed(S);
}

GaussianState apply_phase(const GaussianState& s, int mode, double theta) {
  if (mode < 0 || mode >= s.n_modes()) throw DomainError("apply_phase: bad mode");
  MatrixXd S = MatrixXd::Identity(2 * s.n_modes(), 2 * s.n_modes());
  const double c = std::cos(theta), sn = std::sin(theta);
  S(2 * mode, 2 * mode) = c;
  S(2 * mode, 2 * mode + 1) = sn;
  S(2 * mode + 1, 2 * mode) = -sn;
  S(2 * mode + 1, 2 * mode + 1) = c;
  return s.transformed(S);
}

GaussianState apply_lossy_thermal_channel(const GaussianState& s, int mode, const ChannelParams& p) {
  p.validate();
  if (mode < 0 || mode >= s.n_modes()) throw DomainError("channel: bad mode");
  const int d = 2 * s.n_modes();
  MatrixXd K = MatrixXd::Identity(d, d);
  K(2 * mode, 2 * mode) = K(2 * mode + 1, 2 * mode + 1) = std::sqrt(p.eta);
  MatrixXd c = K * s.cov() * K.transpose();
  c(2 * mode, 2 * mode) += (1 - p.eta) * (p.n_b + 0.5);
  c(2 * mode + 1, 2 * mode + 1) += (1 - p.eta) * (p.n_b + 0.5);
  return {K * s.mean(), c};
}

namespace {

bool is_binary_phase(double theta) {
  return std::abs(theta) < 1e-12 || std::abs(theta - M_PI) < 1e-12;
}

}  // namespace

GaussianState received_ri_state(double theta, const ChannelParams& params) {
  params.validate();
  if (!is_binary_phase(theta)) throw DomainError("received_ri_state: theta must be 0 or pi");
  GaussianState s = apply_phase(tmsv(params.n_s), 0, theta);
  return apply_lossy_thermal_channel(s, 0, params);
}

GaussianState receiver_input_three_mode(const ChannelParams& p, double theta, double kappa) {
  p.validate();
  if (!(kappa > 0 && kappa <= 1)) throw DomainError("kappa must lie in (0, 1]");
  if (!is_binary_phase(theta)) throw DomainError("theta must be 0 or pi");
  const double A = (1 - p.eta) * kappa * p.n_b + p.eta * kappa * p.n_s + 0.5;
  const double B = std::sqrt(kappa * (1 - kappa)) * ((1 - p.eta) * p.n_b + p.eta * p.n_s);
  const double C = std::sqrt(p.eta) * std::sqrt(p.n_s * (p.n_s + 1));
  const double D = (1 - p.eta) * (1 - kappa) * p.n_b + p.eta * (1 - kappa) * p.n_s + 0.5;
  const double c = std::cos(theta), s = std::sin(theta);
  const double ck = std::sqrt(kappa), cv = std::sqrt(1 - kappa);

  MatrixXd m = MatrixXd::Zero(6, 6);
  m(0, 0) = m(1, 1) = A;
  m(2, 2) = m(3, 3) = D;
  m(4, 4) = m(5, 5) = p.n_s + 0.5;
  m(0, 2) = m(1, 3) = B;
  // Tapped signal / idler block, then through signal / idler block.
  m(0, 4) = ck * C * c;
  m(0, 5) = -ck * C * s;
  m(1, 4) = -ck * C * s;
  m(1, 5) = -ck * C * c;
  m(2, 4) = cv * C * c;
  m(2, 5) = -cv * C * s;
  m(3, 4) = -cv * C * s;
  m(3, 5) = -cv * C * c;
  MatrixXd full = m + m.transpose();
  full.diagonal() = m.diagonal();
  return {VectorXd::Zero(6), full};
}

GaussianState receiver_input_three_mode_composed(const ChannelParams& p, double theta, double kappa) {
  if (!(kappa > 0 && kappa <= 1)) throw DomainError("kappa must lie in (0, 1]");
  GaussianState s = tensor(received_ri_state(theta, p), GaussianState::vacuum(1));
  // Slot 2 becomes the tapped signal, slot 0 the through signal.
  s = apply_beamsplitter(s, 2, 0, 1 - kappa);
  return select_modes(s, {2, 0, 1});
}

std::vector<double> symplectic_eigenvalues(const GaussianState& s) {
  const int n = s.n_modes();
  Eigen::MatrixXcd m = (cd(0, 1) * symplectic_form(n)).cast<cd>() * s.cov().cast<cd>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("symplectic_eigenvalues: eigensolver failed");
  std::vector<double> mods;
  for (int i = 0; i < 2 * n; ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(mods.begin(), mods.end());
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double a = mods[2 * i], b = mods[2 * i + 1];
    if (std::abs(a - b) > 1e-9 * std::max(1.0, b)) {
      throw NumericalError("symplectic_eigenvalues: unpaired spectrum");
    }
    const double nu = 0.5 * (a + b);
    if (nu < 0.5 - 1e-10) throw NumericalError("symplectic_eigenvalues: unphysical covariance");
    out.push_back(std::max(nu, 0.5));
  }
  return out;
}

double gaussian_entropy(const GaussianState& s, LogUnit unit) {
  double total = 0;
  for (double nu : symplectic_eigenvalues(s)) total += g_entropy(std::max(nu - 0.5, 0.0), LogUnit::Nats);
  return from_nats(total, unit);
}

double sandwich_xi(const ChannelParams& p, const SandwichConfig& cfg) {
  return std::cos(cfg.theta) * std::sqrt(cfg.kappa * p.eta * p.n_s * (p.n_s + 1)) + cfg.r;
}

namespace {

// Modes after the tap: 0 = through signal S2, 1 = idler, 2 = tapped signal S1.
GaussianState sandwich_before_post_squeezer(const ChannelParams& p, const SandwichConfig& cfg) {
  GaussianState s = tensor(received_ri_state(cfg.theta, p), GaussianState::vacuum(1));
  s = apply_beamsplitter(s, 2, 0, 1 - cfg.kappa);
  s = apply_two_mode_squeezer(s, 2, 1, cfg.r);
  return apply_two_mode_squeezer(s, 2, 1, -sandwich_xi(p, cfg));
}

}  // namespace

GaussianState sandwiched_sie_state(const ChannelParams& p, const SandwichConfig& cfg) {
  p.validate();
  cfg.validate();
  GaussianState s = sandwich_before_post_squeezer(p, cfg);
  s = apply_two_mode_squeezer(s, 2, 1, -cfg.r);
  // Recombine: slot 0 -> sqrt(1-k) S2 + sqrt(k) S1, slot 2 -> noise port.
  return apply_beamsplitter(s, 0, 2, 1 - cfg.kappa);
}

SandwichMoments sandwiched_sfg_moments(const ChannelParams& p, const SandwichConfig& cfg) {
  p.validate();
  cfg.validate();
  const GaussianState mid = sandwich_before_post_squeezer(p, cfg);
  const GaussianState out = sandwiched_sie_state(p, cfg);
  const double sign = std::cos(cfg.theta) >= 0 ? 1.0 : -1.0;

  SandwichMoments m{};
  m.xi = sandwich_xi(p, cfg);
  m.noise_photons = out.mean_photons(2);
  m.noise_photons_leading = sign * 2 * cfg.r * std::sqrt(p.eta * cfg.kappa * p.n_s) +
                            cfg.kappa * p.eta * p.n_s + cfg.r * cfg.r;
  m.idler_corr = mid.moment_aa(0, 1);
  m.idler_corr_leading = sign * (1 - cfg.kappa * (0.5 + p.n_b)) * std::sqrt(p.eta * p.n_s);
  m.signal_corr = mid.moment_adag_a(0, 2);
  m.signal_corr_leading = std::sqrt(cfg.kappa) * p.n_b;
  m.noise_photons_diff = std::abs(m.noise_photons - m.noise_photons_leading);
  m.idler_corr_diff = std::abs(m.idler_corr - m.idler_corr_leading);
  m.signal_corr_diff = std::abs(m.signal_corr - m.signal_corr_leading);
  return m;
}

}  // namespace eacomm
