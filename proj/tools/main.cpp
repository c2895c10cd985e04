#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "eacomm/errors.hpp"
#include "eacomm/version.hpp"
#include "experiments.hpp"
#include "output.hpp"
#include "usage.hpp"

using namespace eacomm;
using namespace eacomm::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Values shared by every subcommand; unset optionals fall back to the config
// file, then to per-operation defaults.
struct Options {
  std::string config;
  std::optional<double> eta, n_s, n_b, kappa, gain, prior, theta, gt, r, n_t0;
  std::optional<long> m, l, l_max, k_stages, cutoff;
  std::optional<int> jobs;
  std::optional<std::string> out, format;
  std::vector<std::string> grids;
  std::string kind;
  std::string target;  // figure name or sweep operation
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "key=value settings file with [section] headers");
  sub->add_option("--eta", o.eta, "channel transmissivity");
  sub->add_option("--n-s", o.n_s, "mean signal photons per mode");
  sub->add_option("--n-b", o.n_b, "mean thermal photons per mode");
  sub->add_option("--m", o.m, "modes per symbol");
  sub->add_option("--l", o.l, "code order");
  sub->add_option("--l-max", o.l_max, "largest code order exponent (L up to 2^l-max)");
  sub->add_option("--k-stages", o.k_stages, "sum-frequency stages");
  sub->add_option("--cutoff", o.cutoff, "Fock cutoff per mode");
  sub->add_option("--kappa", o.kappa, "tap fraction per stage");
  sub->add_option("--gain", o.gain, "amplifier gain");
  sub->add_option("--prior", o.prior, "input prior");
  sub->add_option("--theta", o.theta, "modulation phase");
  sub->add_option("--gt", o.gt, "sum-frequency interaction time");
  sub->add_option("--r", o.r, "sandwich squeezing parameter");
  sub->add_option("--n-t0", o.n_t0, "thermal mean at the Green Machine input");
  sub->add_option("--grid", o.grids, "name=spec with spec log:lo:hi:n, lin:lo:hi:n or a,b,c");
  sub->add_option("--out", o.out, "output path (stdout if omitted)");
  sub->add_option("--format", o.format, "csv or json");
  sub->add_option("--jobs", o.jobs, "worker threads (default $EACOMM_JOBS or 1)");
}

// Config file values fill options the command line left unset.
void merge_config(Options& o) {
  if (o.config.empty()) return;
  const Config c = Config::load(o.config);
  const std::map<std::string, std::optional<double>*> doubles = {
      {"eta", &o.eta},     {"n-s", &o.n_s},     {"n-b", &o.n_b}, {"kappa", &o.kappa}, {"gain", &o.gain},
      {"prior", &o.prior}, {"theta", &o.theta}, {"gt", &o.gt},   {"r", &o.r},         {"n-t0", &o.n_t0}};
  const std::map<std::string, std::optional<long>*> longs = {
      {"m", &o.m}, {"l", &o.l}, {"l-max", &o.l_max}, {"k-stages", &o.k_stages}, {"cutoff", &o.cutoff}};
  for (const auto& [key, value] : c.values()) {
    if (auto it = doubles.find(key); it != doubles.end()) {
      if (!*it->second) *it->second = c.get_double(key);
    } else if (auto jt = longs.find(key); jt != longs.end()) {
      if (!*jt->second) *jt->second = c.get_long(key);
    } else if (key == "jobs") {
      if (!o.jobs) o.jobs = static_cast<int>(*c.get_long(key));
    } else if (key == "out") {
      if (!o.out) o.out = value;
    } else if (key == "format") {
      if (!o.format) o.format = value;
    } else if (key == "grid") {
      if (o.grids.empty()) o.grids.push_back(value);
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
}

std::vector<std::pair<std::string, Grid>> parsed_grids(const Options& o) {
  std::vector<std::pair<std::string, Grid>> out;
  for (const auto& g : o.grids) {
    const auto eq = g.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--grid expects name=spec, got '" + g + "'");
    std::string name = g.substr(0, eq);
    for (char& ch : name) ch = ch == '-' ? '_' : ch;
    out.emplace_back(name, Grid::parse(g.substr(eq + 1)));
  }
  return out;
}

std::map<std::string, double> fixed_values(const Options& o) {
  std::map<std::string, double> f;
  auto put = [&](const char* name, const auto& v) {
    if (v) f[name] = static_cast<double>(*v);
  };
  put("eta", o.eta);
  put("n_s", o.n_s);
  put("n_b", o.n_b);
  put("kappa", o.kappa);
  put("gain", o.gain);
  put("prior", o.prior);
  put("theta", o.theta);
  put("gt", o.gt);
  put("r", o.r);
  put("n_t0", o.n_t0);
  put("m", o.m);
  put("l", o.l);
  put("l_max", o.l_max);
  put("k_stages", o.k_stages);
  put("cutoff", o.cutoff);
  return f;
}

int jobs_of(const Options& o) {
  const int j = o.jobs.value_or(default_jobs());
  if (j < 1) throw UsageError("--jobs must be positive");
  return j;
}

int emit(const ResultTable& t, const Options& o) {
  write_table(t, parse_format(o.format.value_or("csv")), o.out.value_or(""));
  const long failed = t.failed_rows();
  if (failed == 0) return kExitOk;
  return failed == static_cast<long>(t.rows.size()) ? kExitNumerical : kExitPartial;
}

int run_op(const std::string& op, const Options& o) {
  const SweepOp& spec = find_sweep_op(op);
  auto fixed = fixed_values(o);
  for (const auto& [k, v] : fixed) {
    if (std::find(spec.params.begin(), spec.params.end(), k) == spec.params.end()) {
      throw UsageError("option for '" + k + "' does not apply to " + op);
    }
  }
  return emit(sweep(op, parsed_grids(o), fixed, jobs_of(o)), o);
}

std::string op_for(const std::string& command, const Options& o) {
  const std::string& k = o.kind;
  if (command == "capacity") {
    if (k.empty() || k == "ea") return "capacity.ea";
    if (k == "holevo" || k == "bpsk" || k == "ook" || k == "helstrom") return "capacity." + k;
  } else if (command == "ea") {
    if (k.empty() || k == "bpsk") return "ea.bpsk";
    if (k == "ook") return "ea.ook";
  } else if (command == "jdr1" || command == "jdr2") {
    if (k.empty()) return command + (o.l ? ".rate" : ".envelope");
    if (k == "rate" || k == "envelope") return command + "." + k;
    if (command == "jdr1" && k == "approx") return "jdr1.approx";
    if (command == "jdr2" && k == "recurrence") return "jdr2.recurrence";
  } else if (command == "opa") {
    if (k.empty()) return "opa.mutual_info";
  } else if (command == "fock-verify") {
    if (k.empty() || k == "two-cycle") return "fock.two_cycle";
    if (k == "first-sfg") return "fock.first_sfg";
    if (k == "sandwich") return "fock.sandwich";
  } else if (command == "von") {
    if (k.empty()) return "von.slot";
  }
  throw UsageError("unknown --kind '" + k + "' for " + command);
}

int run_figure(const Options& o) {
  ExperimentSpec spec;
  spec.name = o.target;
  RunSettings& s = spec.settings;
  s.eta = o.eta;
  s.n_s = o.n_s;
  s.n_b = o.n_b;
  s.kappa = o.kappa;
  s.gain = o.gain;
  s.m = o.m;
  s.k_stages = o.k_stages;
  if (o.l_max) s.l_max_exp = static_cast<int>(*o.l_max);
  if (o.cutoff) s.cutoff = static_cast<int>(*o.cutoff);
  for (auto& [name, grid] : parsed_grids(o)) s.grids[name] = grid;
  s.jobs = jobs_of(o);
  return emit(run_experiment(spec), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity and receiver models for entanglement-assisted communication"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"capacity", "Holevo, entanglement-assisted and binary-modulation capacities"},
      {"ea", "TMSV binary-modulation ensemble capacities"},
      {"jdr1", "sum-frequency PPM receiver rates"},
      {"jdr2", "sum-frequency Reed-Muller receiver rates"},
      {"opa", "parametric-amplifier receiver mutual information"},
      {"fock-verify", "truncated Fock-space checks of the sum-frequency stages"},
      {"von", "vacuum probabilities of the nulled Green Machine outputs"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, o);
    sub->add_option("--kind", o.kind, "variant of the computation");
  }
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a library operation over a parameter grid");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("operation", o.target, "operation name")->required();
  CLI::App* figure_cmd = app.add_subcommand("figure", "run a named experiment");
  add_common(figure_cmd, o);
  figure_cmd->add_option("name", o.target, "experiment name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    merge_config(o);
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "figure") return run_figure(o);
    if (command == "sweep") return run_op(o.target, o);
    return run_op(op_for(command, o), o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
