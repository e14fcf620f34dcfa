#include "csmdpc/tuning.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

namespace csmdpc::tuning {

namespace {

// Seed-space domains so key, error, and trial streams never collide.
constexpr std::uint64_t kKeyDomain = 0x4b45590000000000ULL;
constexpr std::uint64_t kErrDomain = 0x4552520000000000ULL;

std::int64_t now_micros() {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

Theta0Estimate estimate_theta0(const ParameterSet& params, int num_codes,
                               int num_errors_per_code, std::uint64_t seed) {
    if (num_codes < 1 || num_errors_per_code < 1)
        throw std::invalid_argument("estimate_theta0: counts must be >= 1");
    double sum = 0.0, sumsq = 0.0;
    long count = 0;
    for (int ci = 0; ci < num_codes; ++ci) {
        Rng krng = Rng::derive(seed ^ kKeyDomain, std::uint64_t(ci));
        KeyPair kp = keygen(params, krng);
        for (int ei = 0; ei < num_errors_per_code; ++ei) {
            Rng erng = Rng::derive(seed ^ kErrDomain,
                                   std::uint64_t(ci) * 0x10000ULL + std::uint64_t(ei));
            ErrorVector e = cwe::sample_error(params.n(), params.t, erng);
            Cryptogram c = public_syndrome(kp.pk, e);
            DenseRingElement s = private_syndrome(kp.sk, c);
            int mx = max_unsat_count(kp.sk.blocks, params.mode, s);
            sum += mx;
            sumsq += double(mx) * mx;
            ++count;
        }
    }
    Theta0Estimate est;
    est.mean = sum / double(count);
    double var = sumsq / double(count) - est.mean * est.mean;
    est.stddev = var > 0 ? std::sqrt(var) : 0.0;
    est.rounded = int(std::lround(est.mean));
    return est;
}

namespace {

TrialRecord run_trial(const ParameterSet& params, const KeyPair& kp, int trial,
                      std::uint64_t master_seed, int* initial_max_unsat) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = master_seed ^ kErrDomain ^ std::uint64_t(trial);
    Rng erng = Rng::derive(master_seed ^ kErrDomain, std::uint64_t(trial));
    ErrorVector e = cwe::sample_error(params.n(), params.t, erng);
    std::int64_t t0 = now_micros();
    Cryptogram c = encrypt(kp.pk, e);
    if (initial_max_unsat) {
        DenseRingElement s = private_syndrome(kp.sk, c);
        *initial_max_unsat = max_unsat_count(kp.sk.blocks, params.mode, s);
    }
    DecryptResult dr = decrypt(kp.sk, kp.pk, c);
    rec.micros = now_micros() - t0;
    bool recovered = dr.status == DecryptStatus::ok &&
                     dr.e.sorted_coords() == e.sorted_coords();
    rec.success = recovered;
    rec.iterations = dr.stats.iterations;
    rec.restarts = dr.stats.restarts;
    rec.peak_weight = dr.stats.peak_weight;
    return rec;
}

}  // namespace

std::vector<DeltaRow> tune_delta(const ParameterSet& params,
                                 const std::vector<int>& candidate_deltas,
                                 int trials_per_delta, std::uint64_t seed) {
    if (trials_per_delta < 1) throw std::invalid_argument("tune_delta: trials must be >= 1");
    std::vector<DeltaRow> table;
    for (int delta : candidate_deltas) {
        ParameterSet p = params;
        p.delta = delta;
        DeltaRow row;
        row.delta = delta;
        row.trials = trials_per_delta;
        double iter_sum = 0.0, micros_sum = 0.0;
        Rng krng = Rng::derive(seed ^ kKeyDomain, 0);
        KeyPair kp = keygen(p, krng);
        for (int trial = 0; trial < trials_per_delta; ++trial) {
            TrialRecord rec = run_trial(p, kp, trial, seed, nullptr);
            if (!rec.success) ++row.failures;
            iter_sum += rec.iterations;
            micros_sum += double(rec.micros);
        }
        row.dfr = double(row.failures) / row.trials;
        row.mean_iterations = iter_sum / row.trials;
        row.mean_micros = micros_sum / row.trials;
        table.push_back(row);
    }
    return table;
}

TrialReport measure_dfr(const ParameterSet& params, int trials, std::uint64_t seed,
                        int trials_per_key, int jobs) {
    if (trials < 1) throw std::invalid_argument("measure_dfr: trials must be >= 1");
    if (trials_per_key < 1) trials_per_key = 1;

    int num_keys = (trials + trials_per_key - 1) / trials_per_key;
    std::vector<KeyPair> keys;
    keys.reserve(std::size_t(num_keys));
    for (int k = 0; k < num_keys; ++k) {
        Rng krng = Rng::derive(seed ^ kKeyDomain, std::uint64_t(k));
        keys.push_back(keygen(params, krng));
    }

    TrialReport rep;
    rep.params_id = params.id;
    rep.master_seed = seed;
    rep.trials = trials;
    rep.rows.resize(std::size_t(trials));
    std::vector<int> max_unsat(std::size_t(trials), 0);

    auto work = [&](int lo, int hi) {
        for (int trial = lo; trial < hi; ++trial) {
            const KeyPair& kp = keys[std::size_t(trial / trials_per_key)];
            rep.rows[std::size_t(trial)] =
                run_trial(params, kp, trial, seed, &max_unsat[std::size_t(trial)]);
        }
    };
    if (jobs <= 1) {
        work(0, trials);
    } else {
        std::vector<std::thread> pool;
        int chunk = (trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            int lo = j * chunk, hi = std::min(trials, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sumsq = 0.0, micros_sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const TrialRecord& rec = rep.rows[std::size_t(trial)];
        if (rec.success) ++rep.successes;
        ++rep.iteration_histogram[rec.iterations];
        sum += max_unsat[std::size_t(trial)];
        sumsq += double(max_unsat[std::size_t(trial)]) * max_unsat[std::size_t(trial)];
        micros_sum += double(rec.micros);
        rep.max_micros = std::max(rep.max_micros, rec.micros);
    }
    rep.dfr = double(trials - rep.successes) / trials;
    rep.theta0_mean = sum / trials;
    double var = sumsq / trials - rep.theta0_mean * rep.theta0_mean;
    rep.theta0_stddev = var > 0 ? std::sqrt(var) : 0.0;
    rep.mean_micros = micros_sum / trials;
    return rep;
}

void write_csv(std::ostream& os, const TrialReport& report) {
    os << "params_id,seed,trial,outcome,iterations,restarts,peak_weight,micros\n";
    for (const auto& rec : report.rows) {
        os << report.params_id << ',' << rec.seed << ',' << rec.trial << ','
           << (rec.success ? "success" : "failure") << ',' << rec.iterations << ','
           << rec.restarts << ',' << rec.peak_weight << ',' << rec.micros << '\n';
    }
}

void write_summary(std::ostream& os, const TrialReport& report) {
    os << "params: " << report.params_id << "  seed: " << report.master_seed
       << "  trials: " << report.trials << '\n';
    os << "successes: " << report.successes << "  DFR: " << report.dfr << '\n';
    os << "initial max-unsat mean: " << report.theta0_mean
       << "  stddev: " << report.theta0_stddev << '\n';
    os << "mean micros/trial: " << report.mean_micros
       << "  max micros: " << report.max_micros << '\n';
    os << "iteration histogram:";
    for (const auto& [iters, count] : report.iteration_histogram)
        os << ' ' << iters << ':' << count;
    os << '\n';
}

}  // namespace csmdpc::tuning
