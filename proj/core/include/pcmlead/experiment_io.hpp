#pragma once

// On-disk formats of the simulation harness.
//
// Config: JSON object with the ExperimentConfig field names
//   nRange, profilesPerN, alphaGrid, seed, algorithms, strategies,
//   scaleBoundM, ciBinWidth, ciBinMinCount, perturbation
// (all optional; missing fields take the desk-scale defaults).
//
// Output directory:
//   records.csv          n,alpha,profile_id,algorithm,strategy,target,
//                        iterations,ci_input,ci_output
//                        (target is 1-based; the trial id of a record is its
//                        0-based data row)
//   trace_frobenius.csv  trial_id,iteration,value   (iteration 1..k)
//   trace_arsi.csv       trial_id,iteration,value   (iteration 0..k)
//   failures.csv         trial_id,message
//   fig1_iterations_by_n.csv, fig2_ci_bins.csv, fig3_frobenius.csv,
//   fig4_arsi_by_n.csv, fig5_arsi_by_iter.csv, ci_change.csv
//
// Every floating-point value is written with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcmlead/montecarlo.hpp"

namespace pcmlead {

/// Throws ParseError on malformed JSON, unknown or wrongly typed fields, and
/// values rejected by ExperimentConfig::validate().
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig read_experiment_config(const std::filesystem::path& path);
std::string experiment_config_to_json(const ExperimentConfig& config);

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_frobenius_trace_csv(std::ostream& out,
                               const std::vector<TrialRecord>& records);
void write_arsi_trace_csv(std::ostream& out,
                          const std::vector<TrialRecord>& records);
void write_failures_csv(std::ostream& out,
                        const std::vector<TrialRecord>& records);

/// Writes the record and trace files above into `dir` (created if missing).
void write_trial_files(const std::filesystem::path& dir,
                       const std::vector<TrialRecord>& records);

/// Writes the figure tables and ci_change.csv into `dir`.
void write_aggregate_files(const std::filesystem::path& dir,
                           const std::vector<TrialRecord>& records,
                           const ExperimentConfig& config);

/// Reads records.csv plus the trace and failure files back.
std::vector<TrialRecord> read_trial_files(const std::filesystem::path& dir);

}  // namespace pcmlead
