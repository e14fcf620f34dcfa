#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "csmdpc/kem.hpp"

namespace csmdpc::tuning {

struct Theta0Estimate {
    double mean = 0.0;
    double stddev = 0.0;
    int rounded = 0;  ///< nearest-integer mean, the value used as theta_0
};

/// Samples num_codes random keys and, for each, num_errors_per_code random
/// weight-t patterns; tallies the initial maximum unsatisfied-check count
/// per pattern and returns its mean and standard deviation.
Theta0Estimate estimate_theta0(const ParameterSet& params, int num_codes,
                               int num_errors_per_code, std::uint64_t seed);

struct DeltaRow {
    int delta = 0;
    int trials = 0;
    int failures = 0;
    double dfr = 0.0;
    double mean_iterations = 0.0;
    double mean_micros = 0.0;
};

/// Grid evaluation of candidate threshold margins. Reports only; picking the
/// speed/DFR cutoff is the operator's call.
std::vector<DeltaRow> tune_delta(const ParameterSet& params,
                                 const std::vector<int>& candidate_deltas,
                                 int trials_per_delta, std::uint64_t seed);

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    bool success = false;
    int iterations = 0;
    int restarts = 0;
    std::size_t peak_weight = 0;
    std::int64_t micros = 0;
};

struct TrialReport {
    std::string params_id;
    std::uint64_t master_seed = 0;
    int trials = 0;
    int successes = 0;
    double dfr = 0.0;
    double theta0_mean = 0.0;    ///< mean of per-trial initial max unsat counts
    double theta0_stddev = 0.0;
    std::map<int, int> iteration_histogram;
    double mean_micros = 0.0;
    std::int64_t max_micros = 0;
    std::vector<TrialRecord> rows;  ///< in trial order, independent of scheduling
};

/// Full keygen/encrypt/decrypt round trips; a fresh key every
/// trials_per_key trials. Outcome fields are bit-reproducible for a fixed
/// seed regardless of jobs; timing fields are measurements and are not.
TrialReport measure_dfr(const ParameterSet& params, int trials, std::uint64_t seed,
                        int trials_per_key = 100, int jobs = 1);

/// CSV columns: params_id, seed, trial, outcome, iterations, restarts,
/// peak_weight, micros.
void write_csv(std::ostream& os, const TrialReport& report);
void write_summary(std::ostream& os, const TrialReport& report);

}  // namespace csmdpc::tuning
