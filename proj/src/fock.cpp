#include "eacomm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace eacomm {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

std::vector<long> strides_of(const std::vector<int>& cutoffs) {
  std::vector<long> s(cutoffs.size(), 1);
  for (int k = static_cast<int>(cutoffs.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * (cutoffs[k + 1] + 1);
  return s;
}

int digit(long index, const std::vector<int>& cutoffs, const std::vector<long>& strides, int mode) {
  return static_cast<int>((index / strides[mode]) % (cutoffs[mode] + 1));
}

void check_cutoffs(const std::vector<int>& cutoffs) {
  if (cutoffs.empty()) throw DomainError("Fock space needs at least one mode");
  for (int c : cutoffs)
    if (c < 0) throw DomainError("cutoffs must be nonnegative");
}

void check_mode(const FockDensity& rho, int mode) {
  if (mode < 0 || mode >= rho.n_modes()) throw DomainError("mode index out of range");
}

FockDensity make(const std::vector<int>& cutoffs, MatrixXcd m, double budget, bool warn) {
  FockDensity out;
  out.cutoffs = cutoffs;
  out.matrix = std::move(m);
  out.truncation_budget = budget;
  out.truncation_warning = warn;
  return out;
}

// Eigenvalues below this fraction of the largest are eigensolver noise.
constexpr double kSpectrumFloor = 1e-15;

Eigen::VectorXd floored(const Eigen::VectorXd& ev) {
  const double cut = kSpectrumFloor * std::max(ev.maxCoeff(), 0.0);
  return ev.unaryExpr([cut](double v) { return v > cut ? v : 0.0; });
}

// Hermitian square root with negative and noise-level eigenvalues set to zero.
MatrixXcd psd_sqrt(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m + m.adjoint()));
  Eigen::VectorXd ev = floored(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

long fock_dimension(const std::vector<int>& cutoffs) {
  check_cutoffs(cutoffs);
  long d = 1;
  for (int c : cutoffs) d *= c + 1;
  return d;
}

long fock_index(const std::vector<int>& cutoffs, const std::vector<int>& photons) {
  if (photons.size() != cutoffs.size()) throw DomainError("fock_index: mode count mismatch");
  long idx = 0;
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    if (photons[k] < 0 || photons[k] > cutoffs[k]) throw DomainError("fock_index: photon number beyond cutoff");
    idx = idx * (cutoffs[k] + 1) + photons[k];
  }
  return idx;
}

FockDensity FockDensity::normalized() const {
  const double tr = trace();
  if (!(tr > 0)) throw NumericalError("normalized: nonpositive trace");
  FockDensity out = *this;
  out.matrix /= tr;
  return out;
}

void FockDensity::validate(double budget_tol) const {
  if (matrix.rows() != fock_dimension(cutoffs) || matrix.cols() != matrix.rows()) {
    throw DomainError("FockDensity: matrix does not match cutoffs");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("FockDensity: matrix not Hermitian");
  }
  const double tr = trace();
  if (tr > 1 + 1e-10 || tr < 1 - std::max(budget_tol, truncation_budget) - 1e-10) {
    throw DomainError("FockDensity: trace outside the truncation budget");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw DomainError("FockDensity: negative eigenvalue");
}

FockDensity fock_vacuum(const std::vector<int>& cutoffs) {
  return fock_number_state(cutoffs, std::vector<int>(cutoffs.size(), 0));
}

FockDensity fock_pure(const std::vector<int>& cutoffs, const VectorXcd& amp) {
  if (amp.size() != fock_dimension(cutoffs)) throw DomainError("fock_pure: dimension mismatch");
  return make(cutoffs, amp * amp.adjoint(), 1 - amp.squaredNorm(), false);
}

FockDensity fock_number_state(const std::vector<int>& cutoffs, const std::vector<int>& photons) {
  VectorXcd v = VectorXcd::Zero(fock_dimension(cutoffs));
  v(fock_index(cutoffs, photons)) = 1;
  return fock_pure(cutoffs, v);
}

namespace {

// Quantities of the Gaussian state in the complex (a, a^dag) basis.
struct HermiteData {
  MatrixXcd a;    // adjacency matrix X (I - Q^-1)^*
  VectorXcd gam;  // loop weights beta^* - A beta
  cd prefactor;   // exp(-beta^dag Q^-1 beta / 2) / sqrt(det Q)
};

HermiteData hermite_data(const GaussianState& s) {
  const int n = s.n_modes();
  const double r2 = 1.0 / std::sqrt(2.0);
  MatrixXcd w = MatrixXcd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    w(k, 2 * k) = r2;
    w(k, 2 * k + 1) = cd(0, r2);
    w(n + k, 2 * k) = r2;
    w(n + k, 2 * k + 1) = cd(0, -r2);
  }
  const MatrixXcd sigma = w * s.cov().cast<cd>() * w.adjoint();
  const MatrixXcd q = sigma + 0.5 * MatrixXcd::Identity(2 * n, 2 * n);
  const Eigen::PartialPivLU<MatrixXcd> lu(q);
  const MatrixXcd qinv = lu.inverse();
  MatrixXcd x = MatrixXcd::Zero(2 * n, 2 * n);
  x.topRightCorner(n, n).setIdentity();
  x.bottomLeftCorner(n, n).setIdentity();
  HermiteData d;
  d.a = x * (MatrixXcd::Identity(2 * n, 2 * n) - qinv).conjugate();
  const VectorXcd beta = w * s.mean().cast<cd>();
  d.gam = beta.conjugate() - d.a * beta;
  const cd quad = (beta.adjoint() * qinv * beta)(0, 0);
  d.prefactor = std::exp(-0.5 * quad) / std::sqrt(lu.determinant());
  return d;
}

cd lhaf_rec(const MatrixXcd& a, std::vector<char>& used, int first) {
  const int n = static_cast<int>(a.rows());
  int i = first;
  while (i < n && used[i]) ++i;
  if (i == n) return 1.0;
  used[i] = 1;
  cd total = a(i, i) * lhaf_rec(a, used, i + 1);
  for (int j = i + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    total += a(i, j) * lhaf_rec(a, used, i + 1);
    used[j] = 0;
  }
  used[i] = 0;
  return total;
}

}  // namespace

cd loop_hafnian(const MatrixXcd& a) {
  if (a.rows() != a.cols()) throw DomainError("loop_hafnian: matrix must be square");
  std::vector<char> used(a.rows(), 0);
  return lhaf_rec(a, used, 0);
}

cd gaussian_fock_element(const GaussianState& state, const std::vector<int>& m,
                         const std::vector<int>& n) {
  const int modes = state.n_modes();
  if (static_cast<int>(m.size()) != modes || static_cast<int>(n.size()) != modes) {
    throw DomainError("gaussian_fock_element: photon vectors must match the mode count");
  }
  const HermiteData d = hermite_data(state);
  std::vector<int> rep;
  double fact = 1;
  for (int k = 0; k < 2 * modes; ++k) {
    const int cnt = k < modes ? n[k] : m[k - modes];
    if (cnt < 0) throw DomainError("gaussian_fock_element: negative photon number");
    for (int c = 0; c < cnt; ++c) {
      rep.push_back(k);
      fact *= c + 1;
    }
  }
  const int sz = static_cast<int>(rep.size());
  MatrixXcd abar(sz, sz);
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) abar(i, j) = i == j ? d.gam(rep[i]) : d.a(rep[i], rep[j]);
  return d.prefactor * loop_hafnian(abar) / std::sqrt(fact);
}

FockDensity gaussian_to_fock(const GaussianState& state, const std::vector<int>& cutoffs,
                             double warn_threshold) {
  const int n = state.n_modes();
  if (static_cast<int>(cutoffs.size()) != n) throw DomainError("gaussian_to_fock: cutoff count mismatch");
  if (!state.is_physical(1e-9)) throw DomainError("gaussian_to_fock: state not physical");
  const long dim = fock_dimension(cutoffs);
  const HermiteData d = hermite_data(state);

  // Index k over (n_0..n_{n-1}, m_0..m_{n-1}) for <m|rho|n>; flat = idx(n) * dim + idx(m).
  std::vector<int> cut2(2 * n);
  for (int k = 0; k < n; ++k) cut2[k] = cut2[n + k] = cutoffs[k];
  const std::vector<long> st2 = strides_of(cut2);
  const long total = dim * dim;
  std::vector<cd> f(total);
  f[0] = 1.0;
  std::vector<int> k(2 * n, 0);
  for (long flat = 1; flat < total; ++flat) {
    for (int p = 2 * n - 1; p >= 0; --p) {
      if (++k[p] <= cut2[p]) break;
      k[p] = 0;
    }
    int i = 2 * n - 1;
    while (k[i] == 0) --i;
    const long prev = flat - st2[i];
    --k[i];
    cd v = d.gam(i) * f[prev];
    for (int j = 0; j < 2 * n; ++j) {
      if (k[j] > 0 && d.a(i, j) != 0.0) v += d.a(i, j) * std::sqrt(double(k[j])) * f[prev - st2[j]];
    }
    ++k[i];
    f[flat] = v / std::sqrt(double(k[i]));
  }

  MatrixXcd rho(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c) rho(r, c) = d.prefactor * f[c * dim + r];
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double budget = 1 - rho.trace().real();
  return make(cutoffs, std::move(rho), budget, budget > warn_threshold);
}

SparseOp annihilation(const std::vector<int>& cutoffs, int mode) {
  const long dim = fock_dimension(cutoffs);
  if (mode < 0 || mode >= static_cast<int>(cutoffs.size())) throw DomainError("annihilation: bad mode");
  const std::vector<long> st = strides_of(cutoffs);
  std::vector<Eigen::Triplet<cd>> trip;
  for (long i = 0; i < dim; ++i) {
    const int nk = digit(i, cutoffs, st, mode);
    if (nk > 0) trip.emplace_back(i - st[mode], i, std::sqrt(double(nk)));
  }
  SparseOp a(dim, dim);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SparseOp number_operator(const std::vector<int>& cutoffs, int mode) {
  const SparseOp a = annihilation(cutoffs, mode);
  return SparseOp(a.adjoint()) * a;
}

SparseOp sfg_hamiltonian(const std::vector<int>& cutoffs, int signal, int idler, int sum) {
  const int n = static_cast<int>(cutoffs.size());
  if (n < 3 || signal == idler || signal == sum || idler == sum) {
    throw DomainError("sfg_hamiltonian: needs three distinct modes");
  }
  const SparseOp as = annihilation(cutoffs, signal);
  const SparseOp ai = annihilation(cutoffs, idler);
  const SparseOp b = annihilation(cutoffs, sum);
  const SparseOp down = SparseOp(b.adjoint()) * as * ai;
  SparseOp h = down + SparseOp(down.adjoint());
  h.prune(cd(0.0));
  return h;
}

SparseOp unitary_from_hamiltonian(const SparseOp& h, double t) {
  const long dim = h.rows();
  if (h.cols() != dim) throw DomainError("unitary_from_hamiltonian: matrix must be square");

  std::vector<long> parent(dim);
  std::iota(parent.begin(), parent.end(), 0L);
  auto find = [&](long x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int c = 0; c < h.outerSize(); ++c)
    for (SparseOp::InnerIterator it(h, c); it; ++it)
      if (it.value() != 0.0) parent[find(it.row())] = find(it.col());

  std::vector<std::vector<long>> blocks(dim);
  for (long i = 0; i < dim; ++i) blocks[find(i)].push_back(i);

  std::vector<Eigen::Triplet<cd>> trip;
  for (const auto& blk : blocks) {
    const long s = static_cast<long>(blk.size());
    if (s == 0) continue;
    MatrixXcd hb(s, s);
    for (long i = 0; i < s; ++i)
      for (long j = 0; j < s; ++j) hb(i, j) = h.coeff(blk[i], blk[j]);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hb);
    VectorXcd ph(s);
    for (long i = 0; i < s; ++i) ph(i) = std::exp(cd(0, -t * es.eigenvalues()(i)));
    const MatrixXcd ub = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    for (long i = 0; i < s; ++i)
      for (long j = 0; j < s; ++j)
        if (ub(i, j) != 0.0) trip.emplace_back(blk[i], blk[j], ub(i, j));
  }
  SparseOp u(dim, dim);
  u.setFromTriplets(trip.begin(), trip.end());
  return u;
}

FockDensity apply_unitary(const FockDensity& rho, const SparseOp& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) throw DomainError("apply_unitary: dimension mismatch");
  const MatrixXcd left = u * rho.matrix;
  MatrixXcd out = (u * left.adjoint()).adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return make(rho.cutoffs, std::move(out), rho.truncation_budget, rho.truncation_warning);
}

FockDensity evolve_unitary(const FockDensity& rho, const SparseOp& h, double t) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim()) throw DomainError("evolve_unitary: dimension mismatch");
  return apply_unitary(rho, unitary_from_hamiltonian(h, t));
}

FockDensity beamsplitter_unitary_fock(const FockDensity& rho, int mode_a, int mode_b, double t) {
  check_mode(rho, mode_a);
  check_mode(rho, mode_b);
  if (mode_a == mode_b) throw DomainError("beamsplitter: modes must differ");
  if (!(t >= 0 && t <= 1)) throw DomainError("beamsplitter: transmissivity outside [0,1]");
  const SparseOp a = annihilation(rho.cutoffs, mode_a);
  const SparseOp b = annihilation(rho.cutoffs, mode_b);
  // i (a^dag b - a b^dag) is Hermitian; exp(-i phi H) = exp(phi (a^dag b - a b^dag)).
  const SparseOp g = SparseOp(a.adjoint()) * b - a * SparseOp(b.adjoint());
  const SparseOp h = cd(0, 1) * g;
  return evolve_unitary(rho, h, std::acos(std::sqrt(t)));
}

FockDensity partial_trace(const FockDensity& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep must be nonempty");
  const int n = rho.n_modes();
  std::vector<char> kept(n, 0);
  for (int k : keep) {
    check_mode(rho, k);
    if (kept[k]) throw DomainError("partial_trace: repeated mode");
    kept[k] = 1;
  }
  std::vector<int> traced;
  for (int k = 0; k < n; ++k)
    if (!kept[k]) traced.push_back(k);

  std::vector<int> kcut, tcut;
  for (int k : keep) kcut.push_back(rho.cutoffs[k]);
  for (int k : traced) tcut.push_back(rho.cutoffs[k]);
  const long dk = fock_dimension(kcut);
  const long dt = traced.empty() ? 1 : fock_dimension(tcut);
  const std::vector<long> st = strides_of(rho.cutoffs);

  // full[i * dt + j] = full-space index of kept state i and traced state j.
  std::vector<long> full(dk * dt);
  const std::vector<long> kst = strides_of(kcut);
  const std::vector<long> tst = traced.empty() ? std::vector<long>{} : strides_of(tcut);
  for (long i = 0; i < dk; ++i) {
    long base = 0;
    for (std::size_t p = 0; p < keep.size(); ++p) base += digit(i, kcut, kst, p) * st[keep[p]];
    for (long j = 0; j < dt; ++j) {
      long off = 0;
      for (std::size_t p = 0; p < traced.size(); ++p) off += digit(j, tcut, tst, p) * st[traced[p]];
      full[i * dt + j] = base + off;
    }
  }
  MatrixXcd out = MatrixXcd::Zero(dk, dk);
  for (long c = 0; c < dk; ++c)
    for (long r = 0; r < dk; ++r) {
      cd acc = 0;
      for (long j = 0; j < dt; ++j) acc += rho.matrix(full[r * dt + j], full[c * dt + j]);
      out(r, c) = acc;
    }
  return make(kcut, std::move(out), rho.truncation_budget, rho.truncation_warning);
}

FockDensity fock_tensor(const FockDensity& a, const FockDensity& b) {
  const long da = a.dim(), db = b.dim();
  MatrixXcd out(da * db, da * db);
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix(i, j) * b.matrix;
  std::vector<int> cut = a.cutoffs;
  cut.insert(cut.end(), b.cutoffs.begin(), b.cutoffs.end());
  const double budget = 1 - (1 - a.truncation_budget) * (1 - b.truncation_budget);
  return make(cut, std::move(out), budget, a.truncation_warning || b.truncation_warning);
}

FockDensity reset_to_vacuum(const FockDensity& rho, int mode) {
  check_mode(rho, mode);
  const std::vector<long> st = strides_of(rho.cutoffs);
  const long dim = rho.dim();
  const int c = rho.cutoffs[mode];
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  for (long j = 0; j < dim; ++j) {
    if (digit(j, rho.cutoffs, st, mode) != 0) continue;
    for (long i = 0; i < dim; ++i) {
      if (digit(i, rho.cutoffs, st, mode) != 0) continue;
      cd acc = 0;
      for (int t = 0; t <= c; ++t) acc += rho.matrix(i + t * st[mode], j + t * st[mode]);
      out(i, j) = acc;
    }
  }
  return make(rho.cutoffs, std::move(out), rho.truncation_budget, rho.truncation_warning);
}

double von_neumann_entropy_fock(const FockDensity& rho, LogUnit unit) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix, Eigen::EigenvaluesOnly);
  double s = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l >= 1e-14) s -= l * std::log(l);
  }
  return from_nats(s, unit);
}

double uhlmann_fidelity(const FockDensity& a, const FockDensity& b) {
  if (a.dim() != b.dim() || a.cutoffs != b.cutoffs) throw DomainError("uhlmann_fidelity: dimension mismatch");
  const MatrixXcd sa = psd_sqrt(a.matrix);
  const MatrixXcd m = sa * b.matrix * sa;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const double root = floored(es.eigenvalues()).cwiseSqrt().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

void Ensemble::validate() const {
  if (states.empty() || states.size() != priors.size()) throw DomainError("Ensemble: states and priors mismatch");
  double sum = 0;
  for (double p : priors) {
    if (!(p >= 0)) throw DomainError("Ensemble: negative prior");
    sum += p;
  }
  if (std::abs(sum - 1) > 1e-12) throw DomainError("Ensemble: priors must sum to 1");
  for (const auto& s : states)
    if (s.cutoffs != states.front().cutoffs) throw DomainError("Ensemble: mode structures differ");
}

double holevo_information(const Ensemble& ens, LogUnit unit) {
  ens.validate();
  MatrixXcd avg = MatrixXcd::Zero(ens.states.front().dim(), ens.states.front().dim());
  double cond = 0;
  for (std::size_t i = 0; i < ens.states.size(); ++i) {
    if (ens.priors[i] == 0) continue;
    const FockDensity s = ens.states[i].normalized();
    avg += ens.priors[i] * s.matrix;
    cond += ens.priors[i] * von_neumann_entropy_fock(s, LogUnit::Nats);
  }
  FockDensity mix = make(ens.states.front().cutoffs, avg, 0, false);
  return from_nats(von_neumann_entropy_fock(mix, LogUnit::Nats) - cond, unit);
}

void SfgEvolution::validate() const {
  if (!(gt >= 0)) throw DomainError("SfgEvolution: gt must be nonnegative");
  if (n_pairs != 1) throw DomainError("SfgEvolution: only one signal-idler pair per gate is supported");
}

GaussianState two_cycle_model_state(const ChannelParams& p, double theta, double kappa) {
  p.validate();
  if (!(kappa > 0 && kappa <= 1)) throw DomainError("kappa must lie in (0, 1]");
  const double nth = kappa * p.n_s * p.n_s_prime();
  const double a1 = std::sqrt(kappa * p.eta * p.n_s * (1 + p.n_s));
  const double a2 = a1 * (1 - kappa * (1 + p.n_s_prime()));
  // Mean-field phase of the sum-frequency mode relative to the signal-idler
  // correlation: <b> ~ -i <a_S a_I>.
  const cd phase(0, -std::cos(theta));
  Eigen::VectorXd mean(4);
  const cd m1 = a1 * phase, m2 = a2 * phase;
  mean << std::sqrt(2.0) * m1.real(), std::sqrt(2.0) * m1.imag(), std::sqrt(2.0) * m2.real(),
      std::sqrt(2.0) * m2.imag();
  Eigen::MatrixXd cov = (nth + 0.5) * Eigen::MatrixXd::Identity(4, 4);
  cov(0, 2) = cov(2, 0) = cov(1, 3) = cov(3, 1) = nth;
  return {mean, cov};
}

namespace {

cd expect(const FockDensity& rho, const SparseOp& op) {
  return (op * rho.matrix).trace();
}

}  // namespace

TwoCycleReport two_sfg_cycle_simulation(const ChannelParams& p, double theta, double kappa,
                                        int cutoff, const SfgEvolution& sfg) {
  sfg.validate();
  if (cutoff < 1) throw DomainError("two_sfg_cycle_simulation: cutoff must be positive");
  constexpr int S = 0, V = 1, I = 2, B = 3;
  const std::vector<int> c3(3, cutoff), c1(1, cutoff);

  FockDensity rho = fock_tensor(gaussian_to_fock(receiver_input_three_mode(p, theta, kappa), c3),
                                fock_vacuum(c1));
  const SparseOp h1 = sfg_hamiltonian(rho.cutoffs, S, I, B);
  rho = evolve_unitary(rho, h1, sfg.gt);
  // Recombine the tapped signal into the through arm; the S slot holds the
  // discarded port.
  rho = beamsplitter_unitary_fock(rho, V, S, 1 - kappa);
  rho = reset_to_vacuum(rho, S);
  // Second tap: the S slot becomes the new tapped signal.
  rho = beamsplitter_unitary_fock(rho, S, V, 1 - kappa);
  // The V slot is recycled as the second sum-frequency mode.
  rho = reset_to_vacuum(rho, V);
  const SparseOp h2 = sfg_hamiltonian(rho.cutoffs, S, I, V);
  rho = evolve_unitary(rho, h2, sfg.gt);

  TwoCycleReport rep;
  rep.joint = partial_trace(rho, {B, V});
  const FockDensity joint = rep.joint.normalized();
  const GaussianState model = two_cycle_model_state(p, theta, kappa);
  rep.model = gaussian_to_fock(model, {cutoff, cutoff});
  rep.fidelity = uhlmann_fidelity(joint, rep.model.normalized());
  const FockDensity b1 = partial_trace(joint, {0});
  const FockDensity m1 = gaussian_to_fock(select_modes(model, {0}), {cutoff});
  rep.fidelity_single = uhlmann_fidelity(b1, m1.normalized());

  const SparseOp a1 = annihilation(joint.cutoffs, 0);
  const SparseOp a2 = annihilation(joint.cutoffs, 1);
  const cd e1 = expect(joint, a1), e2 = expect(joint, a2);
  const cd insens = expect(joint, SparseOp(a1 * SparseOp(a2.adjoint()))) - e1 * std::conj(e2);
  const cd sens = expect(joint, SparseOp(a1 * a2)) - e1 * e2;
  rep.sigma_max = kappa * p.n_s * p.n_s_prime();
  rep.phase_insensitive_ratio = std::abs(insens) / rep.sigma_max;
  rep.phase_sensitive_ratio = std::abs(sens) / rep.sigma_max;
  rep.truncation_warning = rho.truncation_warning || rep.model.truncation_warning;
  return rep;
}

double first_sfg_holevo(const ChannelParams& p, double kappa, int cutoff, const SfgEvolution& sfg,
                        LogUnit unit) {
  sfg.validate();
  Ensemble ens;
  for (double theta : {0.0, M_PI}) {
    const GaussianState si = select_modes(receiver_input_three_mode(p, theta, kappa), {0, 2});
    FockDensity rho = fock_tensor(gaussian_to_fock(si, {cutoff, cutoff}), fock_vacuum({cutoff}));
    rho = evolve_unitary(rho, sfg_hamiltonian(rho.cutoffs, 0, 1, 2), sfg.gt);
    ens.states.push_back(partial_trace(rho, {2}));
    ens.priors.push_back(0.5);
  }
  return holevo_information(ens, unit);
}

std::vector<HolevoPoint> sandwiched_holevo_vs_r(const ChannelParams& p, double kappa,
                                                const std::vector<double>& r_grid, int cutoff,
                                                LogUnit unit) {
  std::vector<HolevoPoint> out;
  const std::vector<int> cut(3, cutoff);
  for (double r : r_grid) {
    if (!std::isfinite(r)) throw DomainError("sandwiched_holevo_vs_r: r must be finite");
    Ensemble ens;
    bool warn = false;
    for (double theta : {0.0, M_PI}) {
      FockDensity s = gaussian_to_fock(sandwiched_sie_state(p, {r, kappa, theta}), cut);
      warn = warn || s.truncation_warning;
      ens.states.push_back(std::move(s));
      ens.priors.push_back(0.5);
    }
    out.push_back({r, holevo_information(ens, unit), warn});
  }
  return out;
}

}  // namespace eacomm
