#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "eacomm/gaussian.hpp"
#include "eacomm/mathcore.hpp"

namespace eacomm {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

// Density matrix over a product Fock basis. Mode k keeps photon numbers
// 0..cutoffs[k]; mode 0 is the most significant index.
struct FockDensity {
  std::vector<int> cutoffs;
  Eigen::MatrixXcd matrix;
  double truncation_budget = 0.0;  // 1 - trace of the source state in this basis
  bool truncation_warning = false;

  int n_modes() const { return static_cast<int>(cutoffs.size()); }
  long dim() const { return matrix.rows(); }
  double trace() const { return matrix.trace().real(); }
  // Copy rescaled to unit trace.
  FockDensity normalized() const;
  void validate(double budget_tol = 0.0) const;
};

long fock_dimension(const std::vector<int>& cutoffs);
// Flat basis index of a photon-number vector.
long fock_index(const std::vector<int>& cutoffs, const std::vector<int>& photons);

// Default truncation budget above which results carry a warning.
inline constexpr double kTruncationThreshold = 0.01;

FockDensity fock_vacuum(const std::vector<int>& cutoffs);
FockDensity fock_pure(const std::vector<int>& cutoffs, const Eigen::VectorXcd& amplitudes);
FockDensity fock_number_state(const std::vector<int>& cutoffs, const std::vector<int>& photons);

// Fock representation of a Gaussian state via the multidimensional Hermite
// recursion for loop-hafnian amplitudes.
FockDensity gaussian_to_fock(const GaussianState& state, const std::vector<int>& cutoffs,
                             double warn_threshold = kTruncationThreshold);
// Single matrix element <m|rho|n> from a direct loop-perfect-matching sum.
// Intended for small total photon numbers (sum of m and n up to about 12).
std::complex<double> gaussian_fock_element(const GaussianState& state, const std::vector<int>& m,
                                           const std::vector<int>& n);
// Loop hafnian by direct enumeration of loop perfect matchings.
std::complex<double> loop_hafnian(const Eigen::MatrixXcd& a);

// Truncated annihilation operator of one mode on the full product space.
SparseOp annihilation(const std::vector<int>& cutoffs, int mode);
SparseOp number_operator(const std::vector<int>& cutoffs, int mode);

// b^dag a_S a_I + h.c. on modes (signal, idler, sum) of the given space.
SparseOp sfg_hamiltonian(const std::vector<int>& cutoffs, int signal = 0, int idler = 1,
                         int sum = 2);

// exp(-i t H) for Hermitian sparse H, exponentiated block by block over the
// connected components of its nonzero pattern.
SparseOp unitary_from_hamiltonian(const SparseOp& h, double t);

// U rho U^dag.
FockDensity apply_unitary(const FockDensity& rho, const SparseOp& u);
// exp(-i t H) rho exp(i t H).
FockDensity evolve_unitary(const FockDensity& rho, const SparseOp& h, double t);

// Number-conserving beam splitter with Heisenberg action
// a -> sqrt(t) a + sqrt(1-t) b, b -> -sqrt(1-t) a + sqrt(t) b.
FockDensity beamsplitter_unitary_fock(const FockDensity& rho, int mode_a, int mode_b,
                                      double transmissivity);

// Reduced state on `keep`, modes ordered as listed.
FockDensity partial_trace(const FockDensity& rho, const std::vector<int>& keep);
// rho (x) sigma with rho's modes first.
FockDensity fock_tensor(const FockDensity& a, const FockDensity& b);
// Trace out `mode` and put a vacuum with the same cutoff in its place.
FockDensity reset_to_vacuum(const FockDensity& rho, int mode);

double von_neumann_entropy_fock(const FockDensity& rho, LogUnit unit = LogUnit::Bits);
double uhlmann_fidelity(const FockDensity& a, const FockDensity& b);

struct Ensemble {
  std::vector<FockDensity> states;
  std::vector<double> priors;
  void validate() const;
};

double holevo_information(const Ensemble& ens, LogUnit unit = LogUnit::Bits);

struct SfgEvolution {
  double gt = M_PI / 2;
  int n_pairs = 1;
  void validate() const;
};

struct TwoCycleReport {
  FockDensity joint;        // (b1, b2)
  FockDensity model;        // correlated displaced thermal model on (b1, b2)
  double fidelity;          // joint vs model
  double fidelity_single;   // b1 vs its single-mode model
  double sigma_max;         // kappa N_S N_S'
  double phase_insensitive_ratio;  // |<db1 db2^dag>| / sigma_max
  double phase_sensitive_ratio;    // |<db1 db2>| / sigma_max
  bool truncation_warning;
};

// Two SFG cycles of the feed-forward cascade on (S, V, I, b) at the given
// cutoff per mode, compared against the correlated-thermal model state.
TwoCycleReport two_sfg_cycle_simulation(const ChannelParams& params, double theta, double kappa,
                                        int cutoff = 6, const SfgEvolution& sfg = {});

// Correlated displaced thermal state used as the reference for the two-cycle
// output: thermal mean kappa N_S N_S' on each mode, fully correlated.
GaussianState two_cycle_model_state(const ChannelParams& params, double theta, double kappa);

// Holevo information of the {0, pi} ensemble at the first sum-frequency mode.
double first_sfg_holevo(const ChannelParams& params, double kappa, int cutoff,
                        const SfgEvolution& sfg = {}, LogUnit unit = LogUnit::Bits);

struct HolevoPoint {
  double r;
  double holevo;
  bool truncation_warning;
};

// Holevo information of the {0, pi} squeezer-sandwiched ensemble for each r.
std::vector<HolevoPoint> sandwiched_holevo_vs_r(const ChannelParams& params, double kappa,
                                                const std::vector<double>& r_grid, int cutoff = 10,
                                                LogUnit unit = LogUnit::Bits);

}  // namespace eacomm
