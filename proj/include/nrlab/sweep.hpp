#pragma once

// The pi-grid experiment: one simulated dataset per grid point, false-positive
// estimates with exact intervals on both the observed and the full data, and a
// seed search for cells matching a published study summary.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/rng.hpp"
#include "nrlab/scoring.hpp"
#include "nrlab/simulate.hpp"

namespace nrlab {

struct SweepGrid {
    std::vector<double> values;

    // 101 equally spaced points on [0, 1].
    static SweepGrid uniform101() {
        SweepGrid g;
        g.values.reserve(101);
        for (int i = 0; i <= 100; ++i) g.values.push_back(i / 100.0);
        return g;
    }

    void check() const {
        if (values.empty()) throw ConfigError("sweep grid is empty");
        double prev = -1.0;
        for (double v : values) {
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("grid value outside [0, 1]");
            if (v <= prev) throw ConfigError("grid values must be strictly increasing");
            prev = v;
        }
    }
};

struct CellResult {
    double pi = 0.0;
    RateEstimate observed;
    RateEstimate full;
    FpHistogram histogram_observed;
    long long errors_observed = 0;
    long long erring_examiners_observed = 0;
    double realized_missing = 0.0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
};

inline CellResult run_cell(const PopulationSpec& spec, MissingnessConfig config,
                           double pi, std::uint64_t seed, double level = 0.95) {
    config.pi = pi;
    if (config.kind == MechanismKind::Mcar) config.rate = pi;
    SimulatedDataset ds = generate(spec, config, seed);
    MaskedRecords records = mask(ds);

    ScoringPolicy policy;  // default: inconclusives correct, assessments observed
    CellResult cell;
    cell.pi = pi;
    cell.seed = seed;
    cell.realized_missing = ds.realized_missing();
    cell.observed = summarize(records.observed, policy, level).false_positive;
    cell.full = summarize(records.full, policy, level).false_positive;
    cell.histogram_observed = fp_histogram(records.observed, policy);
    cell.errors_observed = cell.histogram_observed.total_fp;
    cell.erring_examiners_observed = cell.histogram_observed.erring_examiners;
    return cell;
}

inline std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t grid_index) {
    return derive_stream(base_seed, StreamTag::SweepCell, grid_index);
}

// One CellResult per grid value, each from its own derived substream. Cells
// are independent tasks; results land in grid order no matter how many
// workers run them, and a failed cell is recorded without aborting the sweep.
inline std::vector<CellResult> run_sweep(const PopulationSpec& spec,
                                         const MissingnessConfig& config_template,
                                         const SweepGrid& grid, std::uint64_t base_seed,
                                         unsigned threads = 1) {
    grid.check();
    spec.check();
    const std::size_t count = grid.values.size();
    std::vector<CellResult> results(count);
    std::atomic<std::size_t> cursor{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = run_cell(spec, config_template, grid.values[i],
                                      cell_seed(base_seed, i));
            } catch (const std::exception& e) {
                results[i] = CellResult{};
                results[i].pi = grid.values[i];
                results[i].seed = cell_seed(base_seed, i);
                results[i].failed = true;
                results[i].error = e.what();
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

// The published pre-release summary shape: an FP-by-examiner histogram plus
// total errors and the number of distinct erring examiners.
struct PublishedSummary {
    long long zero = 0;
    long long one = 0;
    long long two_plus = 0;
    long long errors = 0;
    long long erring_examiners = 0;
};

inline bool match_published(const CellResult& cell, const PublishedSummary& ref) {
    return cell.histogram_observed.zero == ref.zero && cell.histogram_observed.one == ref.one &&
           cell.histogram_observed.two_plus == ref.two_plus && cell.errors_observed == ref.errors &&
           cell.erring_examiners_observed == ref.erring_examiners;
}

// Relative understatement of the full-data estimate by the observed one.
// An observed estimate of zero understates infinitely.
inline double bias_report(const CellResult& cell) {
    if (!cell.observed.defined || !cell.full.defined) {
        throw NumericError("bias_report: cell estimates undefined");
    }
    if (cell.observed.point == 0.0) return std::numeric_limits<double>::infinity();
    return cell.full.point / cell.observed.point - 1.0;
}

struct SearchOutcome {
    std::vector<CellResult> matches;
    // Nearest miss by histogram distance, for diagnostics when nothing matches.
    std::optional<CellResult> nearest;
    long long nearest_distance = std::numeric_limits<long long>::max();
    long long seeds_scanned = 0;
};

// Scans base seeds [seed_begin, seed_begin + budget) at a fixed pi for cells
// matching the reference summary. The published dataset's seed is unknown, so
// matching is a search, not a fixed assertion.
inline SearchOutcome search_published(const PopulationSpec& spec,
                                      const MissingnessConfig& config_template, double pi,
                                      const PublishedSummary& ref, std::uint64_t seed_begin,
                                      long long budget, unsigned threads = 1) {
    SearchOutcome outcome;
    outcome.seeds_scanned = budget;
    std::atomic<long long> cursor{0};
    std::mutex merge;
    auto distance = [&](const CellResult& cell) {
        return std::llabs(cell.histogram_observed.zero - ref.zero) +
               std::llabs(cell.histogram_observed.one - ref.one) +
               std::llabs(cell.histogram_observed.two_plus - ref.two_plus) +
               std::llabs(cell.errors_observed - ref.errors) +
               std::llabs(cell.erring_examiners_observed - ref.erring_examiners);
    };
    auto worker = [&]() {
        std::vector<CellResult> local_matches;
        CellResult local_nearest;
        long long local_distance = std::numeric_limits<long long>::max();
        for (;;) {
            long long i = cursor.fetch_add(1);
            if (i >= budget) break;
            CellResult cell = run_cell(spec, config_template, pi,
                                       seed_begin + static_cast<std::uint64_t>(i));
            if (match_published(cell, ref)) {
                local_matches.push_back(cell);
            } else if (long long d = distance(cell);
                       d < local_distance ||
                       (d == local_distance && cell.seed < local_nearest.seed)) {
                local_distance = d;
                local_nearest = cell;
            }
        }
        std::lock_guard<std::mutex> lock(merge);
        for (auto& m : local_matches) outcome.matches.push_back(std::move(m));
        // Ties break toward the lower seed so the outcome is thread-count
        // independent.
        if (local_distance < outcome.nearest_distance ||
            (local_distance == outcome.nearest_distance && outcome.nearest &&
             local_nearest.seed < outcome.nearest->seed)) {
            outcome.nearest_distance = local_distance;
            outcome.nearest = local_nearest;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    // Deterministic order regardless of worker interleaving.
    std::sort(outcome.matches.begin(), outcome.matches.end(),
              [](const CellResult& a, const CellResult& b) { return a.seed < b.seed; });
    return outcome;
}

}  // namespace nrlab
