#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "output.hpp"

namespace eacomm::cli {

// Ordered list of grid values. Text forms: "log:lo:hi:n", "lin:lo:hi:n" or a
// comma-separated list.
struct Grid {
  std::vector<double> values;
  static Grid parse(const std::string& text);
  static Grid log_space(double lo, double hi, int n);
  static Grid linear(double lo, double hi, int n);
};

// User overrides; unset fields take the experiment's own defaults.
struct RunSettings {
  std::optional<double> eta, n_s, n_b, kappa, gain;
  std::optional<long> m, k_stages;
  std::optional<int> l_max_exp, cutoff;
  std::map<std::string, Grid> grids;
  int jobs = 1;
};

struct ExperimentSpec {
  std::string name;
  RunSettings settings;
};

std::vector<std::string> experiment_names();
// Evaluates a named experiment. Unknown names and invalid settings raise
// UsageError; per-point numerical failures are recorded in the status column.
ResultTable run_experiment(const ExperimentSpec& spec);

// A library operation exposed to generic sweeps.
struct SweepOp {
  std::string name;
  std::vector<std::string> params;   // inputs, with defaults in `defaults`
  std::vector<double> defaults;
  std::vector<std::string> outputs;
  std::function<std::vector<double>(const std::vector<double>&)> fn;
};

const std::vector<SweepOp>& sweep_registry();
const SweepOp& find_sweep_op(const std::string& name);

// Cartesian product over `grids` (first grid varies slowest); parameters
// without a grid take `fixed` values or the op defaults.
ResultTable sweep(const std::string& op, const std::vector<std::pair<std::string, Grid>>& grids,
                  const std::map<std::string, double>& fixed, int jobs);

// Evaluates f(0..n-1) on up to `jobs` threads; results keep index order.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f);

// EACOMM_JOBS if set and valid, otherwise 1.
int default_jobs();

}  // namespace eacomm::cli
