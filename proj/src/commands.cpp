// Copyright 2026 The quenchsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quench/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "quench/circuit.hpp"
#include "quench/ensemble.hpp"
#include "quench/format.hpp"
#include "quench/io.hpp"
#include "quench/mitigation.hpp"
#include "quench/noise.hpp"
#include "quench/parallel.hpp"
#include "quench/recompiler.hpp"
#include "quench/thermo.hpp"

namespace quench {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output.directory) / name).string();
}

/// Creates the output directory and echoes the effective config. Called
/// only after a command has finished computing, never before.
void prepare_out_dir(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output.directory);
  std::ostringstream text;
  text << "# config_hash=" << hash_hex(cfg.hash()) << "\n"
       << cfg.canonical_text();
  write_text_file(out_path(cfg, "config.txt"), text.str());
}

void write_meta(const ExperimentConfig& cfg, const std::string& basename,
                const json& results, const std::vector<std::string>& warnings) {
  if (!cfg.output.write_json) return;
  json j;
  j["command"] = basename;
  j["config_hash"] = hash_hex(cfg.hash());
  j["seed"] = cfg.protocol.seed;
  j["timestamp"] = utc_timestamp();
  j["warnings"] = warnings;
  j["results"] = results;
  write_text_file(out_path(cfg, basename + "_meta.json"), j.dump(2) + "\n");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

std::string circuit_file_name(int realization) {
  return "circuit_r" + std::to_string(realization) + ".txt";
}

std::string runs_file_name(int lambda) {
  return "noisy_runs_lambda" + std::to_string(lambda) + ".csv";
}

std::string occupations_file_name(int lambda) {
  return "noisy_occupations_lambda" + std::to_string(lambda) + ".csv";
}

[[noreturn]] void missing_artifact(const std::string& path,
                                   const std::string& producer) {
  throw ConfigError("missing artifact: expected file '" + path + "'; run `" +
                    producer + "` with the same config first");
}

/// Per-realization occupation rows stored as occ_<level> columns.
Table occupation_rows_table(const RealMatrix& rows) {
  Table t;
  t.columns.push_back("realization");
  for (int l = 0; l < rows.cols(); ++l) {
    t.columns.push_back("occ_" + std::to_string(l));
  }
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    std::vector<std::string> row;
    row.push_back(csv_cell(static_cast<long long>(r)));
    for (Eigen::Index l = 0; l < rows.cols(); ++l) {
      row.push_back(csv_cell(rows(r, l)));
    }
    t.add_row(std::move(row));
  }
  return t;
}

RealMatrix occupation_rows_from_table(const Table& t,
                                      const std::string& path) {
  std::vector<int> occ_cols;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c].rfind("occ_", 0) == 0) {
      occ_cols.push_back(static_cast<int>(c));
    }
  }
  if (occ_cols.empty() || t.rows.empty()) {
    throw ConfigError("no occupation columns in " + path);
  }
  RealMatrix rows(t.rows.size(), occ_cols.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < occ_cols.size(); ++c) {
      rows(r, c) = parse_double(t.rows[r][occ_cols[c]]);
    }
  }
  return rows;
}

RealVector column_mean(const RealMatrix& rows) {
  std::vector<RealVector> v(rows.rows());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    v[r] = rows.row(r).transpose();
  }
  return pairwise_sum(v) / static_cast<double>(rows.rows());
}

void check_upstream_hash(const ExperimentConfig& cfg, std::uint64_t found,
                         const std::string& path,
                         std::vector<std::string>& warnings) {
  if (found != 0 && found != cfg.hash()) {
    warnings.push_back("upstream artifact " + path +
                       " was produced with a different config (hash " +
                       hash_hex(found) + ")");
  }
}

int ansatz_cnots(const ExperimentConfig& cfg) {
  return cfg.recompile.layers * (cfg.protocol.sys.n_qubits - 1);
}

}  // namespace

int cmd_dynamics(const ExperimentConfig& cfg) {
  const EnsembleResult res = run_protocol(cfg.protocol);
  const EnergyBasis basis = energy_basis(cfg.protocol.sys);
  const RealVector window =
      equilibrium_average(res, cfg.protocol.window_start,
                          cfg.protocol.window_end);

  std::vector<std::string> warnings;
  ThermalFit fit;
  bool unfittable = false;
  try {
    fit = fit_temperature(window, basis.energies);
  } catch (const NumericalError& e) {
    unfittable = true;
    warnings.push_back(std::string("temperature fit skipped: ") + e.what());
  }

  if (!unfittable && cfg.protocol.bootstrap_resamples > 0 &&
      res.n_realizations() > 1) {
    const RealVector energies = basis.energies;
    const BootstrapEstimate boot = bootstrap(
        res,
        [&energies](const Resample& rs) {
          return fit_temperature(rs.window_occupations(), energies).beta;
        },
        cfg.protocol.bootstrap_resamples, cfg.protocol.seed);
    fit.beta_std = boot.std;
    if (!boot.warning.empty()) warnings.push_back(boot.warning);
  }

  KlSeries kl;
  if (!unfittable) kl = kl_thermal(res, fit.beta);

  const int n_t = static_cast<int>(res.times.size());
  Table t;
  t.columns = {"t",           "mean_h0",      "h0_std",
               "mean_total_energy", "diag_entropy", "kl"};
  double kl_window_sum = 0.0;
  int kl_window_count = 0;
  for (int k = 0; k < n_t; ++k) {
    const double var =
        std::max(0.0, res.mean_h0_sq(k) - res.mean_h0(k) * res.mean_h0(k));
    const RealVector occ = res.mean_occupations.row(k).transpose();
    const double kl_k = unfittable ? kNan : kl.direct(k);
    if (!unfittable && res.times[k] >= cfg.protocol.window_start - 1e-12 &&
        res.times[k] <= cfg.protocol.window_end + 1e-12) {
      kl_window_sum += kl_k;
      ++kl_window_count;
    }
    t.add_row({csv_cell(res.times[k]), csv_cell(res.mean_h0(k)),
               csv_cell(std::sqrt(var)), csv_cell(res.mean_total_energy(k)),
               csv_cell(diagonal_entropy(occ)), csv_cell(kl_k)});
  }

  Table w;
  w.columns = {"level", "label", "energy", "occupation", "gibbs"};
  const RealVector gibbs =
      unfittable ? RealVector::Constant(basis.dim(), kNan)
                 : gibbs_occupations(basis.energies, fit.beta);
  for (int l = 0; l < basis.dim(); ++l) {
    w.add_row({csv_cell(static_cast<long long>(l)),
               format_state_label(basis.labels[l], cfg.protocol.sys.n_qubits),
               csv_cell(basis.energies(l)), csv_cell(window(l)),
               csv_cell(gibbs(l))});
  }

  prepare_out_dir(cfg);
  if (cfg.output.write_csv) {
    write_table_csv(out_path(cfg, "dynamics.csv"), cfg.hash(), t);
    write_table_csv(out_path(cfg, "window_occupations.csv"), cfg.hash(), w);
    if (cfg.output.per_realization) {
      Table pr;
      pr.columns.push_back("t");
      for (int r = 0; r < res.n_realizations(); ++r) {
        pr.columns.push_back("h0_r" + std::to_string(r));
      }
      for (int k = 0; k < n_t; ++k) {
        std::vector<std::string> row;
        row.push_back(csv_cell(res.times[k]));
        for (int r = 0; r < res.n_realizations(); ++r) {
          const RealVector occ =
              res.realization_occupations[r].row(k).transpose();
          row.push_back(csv_cell(basis.energies.dot(occ)));
        }
        pr.add_row(std::move(row));
      }
      write_table_csv(out_path(cfg, "dynamics_realizations.csv"), cfg.hash(),
                      pr);
    }
  }

  json results;
  results["initial_state"] = cfg.protocol.initial_state;
  results["initial_energy"] = res.initial_energy;
  results["realizations"] = res.n_realizations();
  results["max_energy_drift"] = res.max_energy_drift;
  results["unfittable"] = unfittable;
  if (!unfittable) {
    results["beta"] = fit.beta;
    results["beta_std"] = fit.beta_std;
    results["near_infinite_temperature"] = fit.near_infinite_temperature;
    results["kl_to_fitted_gibbs"] = fit.kl;
    if (kl_window_count > 0) {
      results["kl_window_mean"] = kl_window_sum / kl_window_count;
    }
  }
  write_meta(cfg, "dynamics", results, warnings);
  print_warnings(warnings);
  std::cout << "dynamics: initial " << cfg.protocol.initial_state << " (eps_in "
            << format_double(res.initial_energy) << " J), R = "
            << res.n_realizations();
  if (!unfittable) {
    std::cout << ", beta = " << format_double(fit.beta) << " +- "
              << format_double(fit.beta_std) << " /J";
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_temperature_curve(const ExperimentConfig& cfg) {
  const std::vector<TemperatureCurvePoint> pts = temperature_curve(cfg.protocol);

  Table t;
  t.columns = {"initial_state",   "initial_energy",
               "beta",            "beta_std",
               "diag_entropy",    "thermal_entropy",
               "near_infinite_temperature", "unfittable"};
  int unfittable_count = 0;
  for (const TemperatureCurvePoint& p : pts) {
    unfittable_count += p.unfittable ? 1 : 0;
    t.add_row({p.initial_label, csv_cell(p.initial_energy), csv_cell(p.beta),
               csv_cell(p.beta_std), csv_cell(p.diag_entropy),
               csv_cell(p.thermal_entropy),
               csv_cell(static_cast<long long>(p.near_infinite_temperature)),
               csv_cell(static_cast<long long>(p.unfittable))});
  }

  prepare_out_dir(cfg);
  if (cfg.output.write_csv) {
    write_table_csv(out_path(cfg, "temperature_curve.csv"), cfg.hash(), t);
  }
  json results;
  results["states"] = static_cast<int>(pts.size());
  results["unfittable_states"] = unfittable_count;
  results["realizations"] = cfg.protocol.realizations;
  std::vector<std::string> warnings;
  write_meta(cfg, "temperature_curve", results, warnings);
  std::cout << "temperature-curve: " << pts.size() << " initial states, "
            << unfittable_count << " unfittable\n";
  return kExitOk;
}

int cmd_recompile(const ExperimentConfig& cfg) {
  const QuenchSystem& sys = cfg.protocol.sys;
  const Matrix h0 = build_h0(sys);
  const int n_r = cfg.recompile.realizations;
  const std::uint64_t real_stream =
      derive_seed(cfg.protocol.seed, kStreamRealizations);
  const std::uint64_t rec_stream =
      derive_seed(cfg.protocol.seed, kStreamRecompile);

  std::vector<RecompileResult> results(n_r);
  const Circuit circ = ansatz(sys.n_qubits, cfg.recompile.layers);
  parallel_for(n_r, cfg.protocol.threads, [&](int r) {
    const CouplingSample cs = sample_couplings(sys, derive_seed(real_stream, r));
    RecompileProblem p;
    p.target = Propagator(h0 + build_interaction(sys, cs))
                   .unitary(cfg.recompile.time);
    p.circuit = circ;
    p.options = cfg.recompile.options;
    p.options.seed = derive_seed(rec_stream, r);
    results[r] = basin_hopping(p);
  });

  std::vector<std::string> warnings;
  Table t;
  t.columns = {"realization",  "cost",        "fidelity",
               "cnots",        "iterations",  "evaluations",
               "reached_tolerance", "line_search_failed"};
  for (int r = 0; r < n_r; ++r) {
    const RecompileResult& res = results[r];
    if (res.cost > cfg.recompile.options.cost_tolerance) {
      warnings.push_back("realization " + std::to_string(r) +
                         " stopped above cost_tolerance (cost " +
                         format_double(res.cost) + ")");
    }
    t.add_row({csv_cell(static_cast<long long>(r)), csv_cell(res.cost),
               csv_cell(res.fidelity),
               csv_cell(static_cast<long long>(circ.cnot_count())),
               csv_cell(static_cast<long long>(res.total_iterations)),
               csv_cell(static_cast<long long>(res.total_evaluations)),
               csv_cell(static_cast<long long>(res.reached_tolerance)),
               csv_cell(static_cast<long long>(res.line_search_failed))});
  }

  prepare_out_dir(cfg);
  if (cfg.output.write_csv) {
    write_table_csv(out_path(cfg, "recompile.csv"), cfg.hash(), t);
  }
  for (int r = 0; r < n_r; ++r) {
    std::ostringstream text;
    text << "# config_hash=" << hash_hex(cfg.hash()) << "\n"
         << circuit_to_text(circ, &results[r].params);
    write_text_file(out_path(cfg, circuit_file_name(r)), text.str());
  }

  double min_fidelity = 1.0;
  json fidelities = json::array();
  for (const RecompileResult& res : results) {
    fidelities.push_back(res.fidelity);
    min_fidelity = std::min(min_fidelity, res.fidelity);
  }
  json results_json;
  results_json["realizations"] = n_r;
  results_json["layers"] = cfg.recompile.layers;
  results_json["cnots"] = circ.cnot_count();
  results_json["parameters"] = circ.n_params;
  results_json["time"] = cfg.recompile.time;
  results_json["fidelities"] = fidelities;
  results_json["min_fidelity"] = min_fidelity;
  write_meta(cfg, "recompile", results_json, warnings);
  print_warnings(warnings);
  std::cout << "recompile: " << n_r << " realizations at t = "
            << format_double(cfg.recompile.time) << "/J, min fidelity "
            << format_double(min_fidelity) << "\n";
  return kExitOk;
}

int cmd_noisy_run(const ExperimentConfig& cfg) {
  const QuenchSystem& sys = cfg.protocol.sys;
  const EnergyBasis basis = energy_basis(sys);
  const int dim = sys.dim();
  const int n_r = cfg.recompile.realizations;
  const std::uint32_t bits = cfg.protocol.initial_bits();

  std::vector<std::string> warnings;
  std::vector<Circuit> circuits(n_r);
  std::vector<RealVector> params(n_r);
  for (int r = 0; r < n_r; ++r) {
    const std::string path = out_path(cfg, circuit_file_name(r));
    if (!file_exists(path)) missing_artifact(path, "quenchsim recompile");
    RealVector values;
    circuits[r] = circuit_from_text(read_text_file(path), &values);
    params[r] = values;
    if (circuits[r].n_qubits != sys.n_qubits) {
      throw ConfigError("circuit in " + path + " has " +
                        std::to_string(circuits[r].n_qubits) +
                        " qubits, config wants " +
                        std::to_string(sys.n_qubits));
    }
  }

  // Exact-evolution reference occupations over the same coupling draws.
  const Matrix h0 = build_h0(sys);
  const std::uint64_t real_stream =
      derive_seed(cfg.protocol.seed, kStreamRealizations);
  RealMatrix ideal_rows(n_r, dim);
  parallel_for(n_r, cfg.protocol.threads, [&](int r) {
    const CouplingSample cs = sample_couplings(sys, derive_seed(real_stream, r));
    const Propagator prop(h0 + build_interaction(sys, cs));
    const Vector psi0 = basis.eigenvectors.col(basis.index_of_label[bits]);
    const Vector psi = prop.evolve(psi0, cfg.recompile.time);
    ideal_rows.row(r) = occupations(basis, psi).transpose();
  });

  const NoiseModel model = cfg.noise.build_model();
  const std::uint64_t noisy_stream =
      derive_seed(cfg.protocol.seed, kStreamNoisyRun);
  std::vector<RealMatrix> unfolded_rows;
  std::vector<RealMatrix> raw_rows;
  for (int lambda : cfg.noise.noise_factors) {
    RealMatrix rows(n_r, dim);
    RealMatrix raw(n_r, dim);
    const std::uint64_t lambda_stream =
        derive_seed(noisy_stream, static_cast<std::uint64_t>(lambda));
    parallel_for(n_r, cfg.protocol.threads, [&](int r) {
      const Circuit folded = fold_cnots(circuits[r], lambda);
      const Circuit prepped = with_y_basis_preparation(folded, bits);
      const NoisyRunResult run =
          run_noisy(prepped, params[r], sys, model, cfg.noise.readout,
                    cfg.noise.rc, derive_seed(lambda_stream, r));
      rows.row(r) = run.occupations.transpose();
      raw.row(r) = run.raw_occupations.transpose();
    });
    unfolded_rows.push_back(std::move(rows));
    raw_rows.push_back(std::move(raw));
  }

  prepare_out_dir(cfg);
  if (cfg.output.write_csv) {
    for (std::size_t i = 0; i < cfg.noise.noise_factors.size(); ++i) {
      const int lambda = cfg.noise.noise_factors[i];
      write_table_csv(out_path(cfg, runs_file_name(lambda)), cfg.hash(),
                      occupation_rows_table(unfolded_rows[i]));
      const RealVector mean = column_mean(unfolded_rows[i]);
      const RealVector mean_raw = column_mean(raw_rows[i]);
      Table t;
      t.columns = {"level", "label", "energy", "occupation",
                   "raw_occupation"};
      for (int l = 0; l < dim; ++l) {
        t.add_row({csv_cell(static_cast<long long>(l)),
                   format_state_label(basis.labels[l], sys.n_qubits),
                   csv_cell(basis.energies(l)), csv_cell(mean(l)),
                   csv_cell(mean_raw(l))});
      }
      write_table_csv(out_path(cfg, occupations_file_name(lambda)),
                      cfg.hash(), t);
    }
    write_table_csv(out_path(cfg, "ideal_runs.csv"), cfg.hash(),
                    occupation_rows_table(ideal_rows));
    const RealVector ideal_mean = column_mean(ideal_rows);
    Table t;
    t.columns = {"level", "label", "energy", "occupation"};
    for (int l = 0; l < dim; ++l) {
      t.add_row({csv_cell(static_cast<long long>(l)),
                 format_state_label(basis.labels[l], sys.n_qubits),
                 csv_cell(basis.energies(l)), csv_cell(ideal_mean(l))});
    }
    write_table_csv(out_path(cfg, "ideal_occupations.csv"), cfg.hash(), t);
  }

  json results;
  results["noise_factors"] = cfg.noise.noise_factors;
  results["realizations"] = n_r;
  results["shots"] = cfg.noise.readout.shots;
  results["rc_samples"] = cfg.noise.rc.samples;
  results["preset"] = cfg.noise.preset;
  results["initial_state"] = cfg.protocol.initial_state;
  write_meta(cfg, "noisy_run", results, warnings);
  print_warnings(warnings);
  std::cout << "noisy-run: " << n_r << " circuits, noise factors";
  for (int lambda : cfg.noise.noise_factors) std::cout << " " << lambda;
  std::cout << ", " << cfg.noise.rc.samples << " dressings\n";
  return kExitOk;
}

int cmd_mitigate(const ExperimentConfig& cfg) {
  const QuenchSystem& sys = cfg.protocol.sys;
  const EnergyBasis basis = energy_basis(sys);
  std::vector<std::string> warnings;

  std::vector<int> factors = cfg.noise.noise_factors;
  std::sort(factors.begin(), factors.end());

  struct LambdaFit {
    int lambda = 1;
    NoisyFit fit;
  };
  std::vector<LambdaFit> fits;
  for (int lambda : factors) {
    const std::string path = out_path(cfg, runs_file_name(lambda));
    if (!file_exists(path)) missing_artifact(path, "quenchsim noisy-run");
    std::uint64_t upstream = 0;
    const Table t = read_table_csv(path, &upstream);
    check_upstream_hash(cfg, upstream, path, warnings);
    const RealMatrix rows = occupation_rows_from_table(t, path);
    if (rows.cols() != basis.dim()) {
      throw ConfigError("artifact " + path + " has " +
                        std::to_string(rows.cols()) +
                        " levels, config wants " +
                        std::to_string(basis.dim()));
    }
    LambdaFit lf;
    lf.lambda = lambda;
    lf.fit = fit_noisy_model_bootstrap(
        rows, basis.energies, lambda * ansatz_cnots(cfg),
        cfg.protocol.bootstrap_resamples,
        derive_seed(cfg.protocol.seed, static_cast<std::uint64_t>(lambda)));
    fits.push_back(lf);
  }

  const std::string ideal_path = out_path(cfg, "ideal_runs.csv");
  if (!file_exists(ideal_path)) {
    missing_artifact(ideal_path, "quenchsim noisy-run");
  }
  std::uint64_t ideal_hash = 0;
  const Table ideal_table = read_table_csv(ideal_path, &ideal_hash);
  check_upstream_hash(cfg, ideal_hash, ideal_path, warnings);
  const RealMatrix ideal_rows =
      occupation_rows_from_table(ideal_table, ideal_path);
  const NoisyFit ideal_fit = fit_noisy_model_bootstrap(
      ideal_rows, basis.energies, 0, cfg.protocol.bootstrap_resamples,
      derive_seed(cfg.protocol.seed, 0xED));
  const RealVector ideal_mean = column_mean(ideal_rows);

  std::optional<ZneResult> zne_res;
  std::optional<ZneResult> mzne_res;
  if (fits.size() >= 2) {
    if (fits.size() > 2) {
      warnings.push_back(
          "more than two noise factors; extrapolating from the two "
          "smallest");
    }
    ZnePoint p1{static_cast<double>(fits[0].lambda), fits[0].fit.beta,
                fits[0].fit.beta_std};
    ZnePoint p2{static_cast<double>(fits[1].lambda), fits[1].fit.beta,
                fits[1].fit.beta_std};
    zne_res = zne(p1, p2);
    mzne_res = mirrored_zne(p1, p2);
    if (mzne_res->warning) warnings.push_back(mzne_res->warning_text);
  } else {
    warnings.push_back(
        "single noise factor; reporting the fit only, no extrapolation");
  }

  Table t;
  t.columns = {"label",    "beta",     "beta_std", "g",
               "g_std",    "per_gate_fidelity",    "residual",
               "mean_h0",  "mean_h0_err",          "std_h0",
               "std_h0_err"};
  const auto fit_row = [&](const std::string& label, const NoisyFit& f) {
    const MitigatedObservables obs =
        mitigated_observables(f.beta, f.beta_std, basis.energies);
    t.add_row({label, csv_cell(f.beta), csv_cell(f.beta_std), csv_cell(f.g),
               csv_cell(f.g_std), csv_cell(f.per_gate_fidelity),
               csv_cell(f.residual), csv_cell(obs.mean_h0),
               csv_cell(obs.mean_h0_err), csv_cell(obs.std_h0),
               csv_cell(obs.std_h0_err)});
  };
  const auto zne_row = [&](const std::string& label, const ZneResult& z) {
    const MitigatedObservables obs =
        mitigated_observables(z.beta, z.std, basis.energies);
    t.add_row({label, csv_cell(z.beta), csv_cell(z.std), csv_cell(kNan),
               csv_cell(kNan), csv_cell(kNan), csv_cell(kNan),
               csv_cell(obs.mean_h0), csv_cell(obs.mean_h0_err),
               csv_cell(obs.std_h0), csv_cell(obs.std_h0_err)});
  };
  for (const LambdaFit& lf : fits) {
    fit_row("lambda=" + std::to_string(lf.lambda), lf.fit);
  }
  if (zne_res) zne_row("zne", *zne_res);
  if (mzne_res) zne_row("mzne", *mzne_res);
  fit_row("ed_fit", ideal_fit);
  {
    // Direct moments of the exact-evolution occupations, no Gibbs model.
    const double mean = basis.energies.dot(ideal_mean);
    const double var =
        basis.energies.cwiseAbs2().dot(ideal_mean) - mean * mean;
    t.add_row({"ed_direct", csv_cell(kNan), csv_cell(kNan), csv_cell(kNan),
               csv_cell(kNan), csv_cell(kNan), csv_cell(kNan),
               csv_cell(mean), csv_cell(kNan),
               csv_cell(std::sqrt(std::max(0.0, var))), csv_cell(kNan)});
  }

  prepare_out_dir(cfg);
  if (cfg.output.write_csv) {
    write_table_csv(out_path(cfg, "mitigation.csv"), cfg.hash(), t);
  }
  json results;
  for (const LambdaFit& lf : fits) {
    json jf;
    jf["beta"] = lf.fit.beta;
    jf["beta_std"] = lf.fit.beta_std;
    jf["g"] = lf.fit.g;
    jf["g_std"] = lf.fit.g_std;
    jf["per_gate_fidelity"] = lf.fit.per_gate_fidelity;
    jf["unidentifiable"] = lf.fit.unidentifiable;
    results["lambda_" + std::to_string(lf.lambda)] = jf;
  }
  if (zne_res) {
    results["zne"] = {{"beta", zne_res->beta}, {"beta_std", zne_res->std}};
  }
  if (mzne_res) {
    results["mzne"] = {{"beta", mzne_res->beta},
                       {"beta_std", mzne_res->std},
                       {"warning", mzne_res->warning}};
  }
  results["ed_fit_beta"] = ideal_fit.beta;
  write_meta(cfg, "mitigate", results, warnings);
  print_warnings(warnings);
  for (const LambdaFit& lf : fits) {
    std::cout << "mitigate: lambda " << lf.lambda << " -> beta = "
              << format_double(lf.fit.beta) << " +- "
              << format_double(lf.fit.beta_std) << " /J, g = "
              << format_double(lf.fit.g) << "\n";
  }
  if (zne_res) {
    std::cout << "mitigate: zne beta = " << format_double(zne_res->beta)
              << " +- " << format_double(zne_res->std) << " /J";
    if (mzne_res) {
      std::cout << ", mzne beta = " << format_double(mzne_res->beta) << " +- "
                << format_double(mzne_res->std) << " /J";
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_report(const ExperimentConfig& cfg) {
  std::ostringstream rep;
  rep << "# config_hash=" << hash_hex(cfg.hash()) << "\n";
  rep << "quenchsim report\n";
  rep << "out_dir: " << cfg.output.directory << "\n";
  int artifacts = 0;

  const auto meta_value = [&](const std::string& basename) -> json {
    const std::string path = out_path(cfg, basename + "_meta.json");
    if (!file_exists(path)) return json();
    return json::parse(read_text_file(path));
  };

  const json dyn = meta_value("dynamics");
  if (!dyn.is_null()) {
    ++artifacts;
    rep << "\n[dynamics]\n";
    const json& r = dyn["results"];
    rep << "initial_state: " << r["initial_state"].get<std::string>() << "\n";
    rep << "initial_energy: "
        << format_double(r["initial_energy"].get<double>()) << " J\n";
    if (r.contains("beta")) {
      rep << "beta: " << format_double(r["beta"].get<double>()) << " +- "
          << format_double(r["beta_std"].get<double>()) << " /J\n";
    }
    if (r.contains("kl_window_mean")) {
      rep << "kl_window_mean: "
          << format_double(r["kl_window_mean"].get<double>()) << "\n";
    }
  }

  const std::string curve_path = out_path(cfg, "temperature_curve.csv");
  if (file_exists(curve_path)) {
    ++artifacts;
    const Table t = read_table_csv(curve_path, nullptr);
    rep << "\n[temperature-curve]\n";
    rep << "states: " << t.rows.size() << "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      rep << t.rows[r][0] << " eps_in " << t.rows[r][1] << " beta "
          << t.rows[r][2] << " +- " << t.rows[r][3] << "\n";
    }
  }

  const std::string recompile_path = out_path(cfg, "recompile.csv");
  if (file_exists(recompile_path)) {
    ++artifacts;
    const Table t = read_table_csv(recompile_path, nullptr);
    rep << "\n[recompile]\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      rep << "realization " << t.rows[r][0] << " fidelity "
          << t.rows[r][t.column_index("fidelity")] << "\n";
    }
  }

  for (int lambda : cfg.noise.noise_factors) {
    const std::string path = out_path(cfg, occupations_file_name(lambda));
    if (!file_exists(path)) continue;
    ++artifacts;
    rep << "\n[noisy-run lambda=" << lambda << "]\n";
    const Table t = read_table_csv(path, nullptr);
    const int occ = t.column_index("occupation");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      rep << "level " << t.rows[r][0] << " (" << t.rows[r][1] << ") energy "
          << t.rows[r][2] << " occupation " << t.rows[r][occ] << "\n";
    }
  }

  const std::string mit_path = out_path(cfg, "mitigation.csv");
  if (file_exists(mit_path)) {
    ++artifacts;
    const Table t = read_table_csv(mit_path, nullptr);
    rep << "\n[mitigate]\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      rep << t.rows[r][0] << ": beta " << t.rows[r][1] << " +- "
          << t.rows[r][2] << ", g " << t.rows[r][3] << ", <H0> "
          << t.rows[r][7] << " +- " << t.rows[r][8] << ", std(H0) "
          << t.rows[r][9] << " +- " << t.rows[r][10] << "\n";
    }
  }

  if (artifacts == 0) {
    rep << "\nno artifacts found; run a command first\n";
  }

  prepare_out_dir(cfg);
  write_text_file(out_path(cfg, "report.txt"), rep.str());
  std::cout << rep.str();
  return kExitOk;
}

int run_command(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "dynamics") return cmd_dynamics(cfg);
  if (name == "temperature-curve") return cmd_temperature_curve(cfg);
  if (name == "recompile") return cmd_recompile(cfg);
  if (name == "noisy-run") return cmd_noisy_run(cfg);
  if (name == "mitigate") return cmd_mitigate(cfg);
  if (name == "report") return cmd_report(cfg);
  throw ConfigError("unknown command: " + name);
}

}  // namespace quench
