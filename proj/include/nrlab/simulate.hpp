#pragma once

// Missingness simulator. Generates a complete error matrix Y and a masking
// matrix M under MCAR or the two-group NMAR mechanism:
//
//   Y[i][j] ~ Bern(p_i)
//   M[i][j] | Y = 1 ~ Bern(pi)
//   M[i][j] | Y = 0 ~ Bern(theta_i)
//
// Group B (the high-error block) fixes its own missing-rate target; group A's
// theta is then calibrated against group B's *realized* missingness so the
// overall expected missing rate hits the configured target. All randomness
// comes from per-examiner counter-derived substreams, so generation is
// bit-identical regardless of evaluation order or thread count.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/rng.hpp"
#include "nrlab/study.hpp"

namespace nrlab {

struct Group {
    long long size = 0;
    double p_low = 0.0;
    double p_high = 0.0;
};

struct PopulationSpec {
    long long n_examiners = 173;
    long long items_per_examiner = 20;
    std::vector<Group> groups = {{163, 0.0, 0.007}, {10, 0.55, 0.6}};

    void check() const {
        if (n_examiners < 1 || items_per_examiner < 1) {
            throw ConfigError("population: need at least one examiner and one item");
        }
        long long total = 0;
        for (const auto& g : groups) {
            if (g.size < 0) throw ConfigError("population: negative group size");
            if (!(0.0 <= g.p_low && g.p_low <= g.p_high && g.p_high <= 1.0)) {
                throw ConfigError("population: need 0 <= p_low <= p_high <= 1");
            }
            total += g.size;
        }
        if (total != n_examiners) {
            throw ConfigError("population: group sizes sum to " + std::to_string(total) +
                              ", expected " + std::to_string(n_examiners));
        }
    }

    // Analytic mean of the per-examiner error probabilities.
    double mean_error_prob() const {
        double acc = 0.0;
        for (const auto& g : groups) {
            acc += static_cast<double>(g.size) * 0.5 * (g.p_low + g.p_high);
        }
        return acc / static_cast<double>(n_examiners);
    }
};

enum class MechanismKind { Mcar, NmarTwoGroup };

struct MissingnessConfig {
    MechanismKind kind = MechanismKind::NmarTwoGroup;
    double rate = 0.0;  // MCAR only: pi = theta = rate
    double pi = 0.0;    // NMAR: masking probability for errors
    double target_overall = 0.179;
    double group_b_target = 0.4;
    bool clamp_theta = true;
    // Calibration weights: the published constants by default, or the exact
    // group-size fractions when set.
    bool exact_weights = false;

    void check() const {
        for (double v : {rate, pi, target_overall, group_b_target}) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError("mechanism: probabilities must lie in [0, 1]");
            }
        }
    }
};

inline constexpr double kGroupAWeight = 0.942;
inline constexpr double kGroupBWeight = 0.058;

struct SimulatedDataset {
    long long n_examiners = 0;
    long long items_per_examiner = 0;
    std::vector<std::uint8_t> y;  // row-major n x k, 1 = error
    std::vector<std::uint8_t> m;  // row-major n x k, 1 = missing
    std::vector<double> p;        // per-examiner error probability
    std::vector<double> theta;    // per-examiner masking probability for correct cells
    double pi = 0.0;
    std::uint64_t seed = 0;

    std::size_t idx(long long i, long long j) const {
        return static_cast<std::size_t>(i * items_per_examiner + j);
    }

    long long cells() const { return n_examiners * items_per_examiner; }

    long long missing_count() const {
        long long c = 0;
        for (auto v : m) c += v;
        return c;
    }

    double realized_missing() const {
        return static_cast<double>(missing_count()) / static_cast<double>(cells());
    }
};

inline std::vector<double> draw_error_probs(const PopulationSpec& spec, std::uint64_t seed) {
    spec.check();
    std::vector<double> p(static_cast<std::size_t>(spec.n_examiners));
    long long i = 0;
    for (const auto& g : spec.groups) {
        for (long long s = 0; s < g.size; ++s, ++i) {
            Substream rng(derive_stream(seed, StreamTag::ErrorProbs,
                                        static_cast<std::uint64_t>(i)));
            p[static_cast<std::size_t>(i)] = g.p_low + (g.p_high - g.p_low) * rng.uniform();
        }
    }
    return p;
}

namespace detail {

inline double theta_from_target(double target, double p_i, double pi, bool clamp,
                                long long examiner_index) {
    if (p_i >= 1.0) {
        throw NumericError("theta: examiner " + std::to_string(examiner_index) +
                           " has error probability 1");
    }
    double theta = (target - p_i * pi) / (1.0 - p_i);
    if (theta < 0.0 || theta > 1.0) {
        if (!clamp) {
            throw NumericError("theta out of [0,1] for examiner " +
                               std::to_string(examiner_index) + ": " +
                               std::to_string(theta));
        }
        theta = theta < 0.0 ? 0.0 : 1.0;
    }
    return theta;
}

// One examiner row: Y then M per item, always in item order, from the row's
// own substream keyed by the global examiner index.
inline void simulate_row(std::uint64_t seed, long long examiner_index, long long items,
                         double p_i, double theta_i, double pi,
                         std::span<std::uint8_t> y_row, std::span<std::uint8_t> m_row) {
    Substream rng(derive_stream(seed, StreamTag::Row,
                                static_cast<std::uint64_t>(examiner_index)));
    for (long long j = 0; j < items; ++j) {
        bool err = rng.bernoulli(p_i);
        bool missing = rng.bernoulli(err ? pi : theta_i);
        y_row[static_cast<std::size_t>(j)] = err ? 1 : 0;
        m_row[static_cast<std::size_t>(j)] = missing ? 1 : 0;
    }
}

}  // namespace detail

struct GroupBResult {
    std::vector<std::uint8_t> y;
    std::vector<std::uint8_t> m;
    std::vector<double> theta;
    double realized_mb = 0.0;
};

// Group B rows with theta_i = (target - p_i*pi) / (1 - p_i). index_offset is
// the global index of the first group-B examiner, which keys the substreams.
inline GroupBResult simulate_group_b(const std::vector<double>& p_b, double pi,
                                     double group_b_target, std::uint64_t seed,
                                     long long items, long long index_offset,
                                     bool clamp_theta = true) {
    GroupBResult out;
    const auto nb = static_cast<long long>(p_b.size());
    out.y.resize(static_cast<std::size_t>(nb * items));
    out.m.resize(static_cast<std::size_t>(nb * items));
    out.theta.resize(p_b.size());
    long long missing = 0;
    for (long long i = 0; i < nb; ++i) {
        double theta = detail::theta_from_target(group_b_target, p_b[static_cast<std::size_t>(i)],
                                                 pi, clamp_theta, index_offset + i);
        out.theta[static_cast<std::size_t>(i)] = theta;
        auto offset = static_cast<std::size_t>(i * items);
        detail::simulate_row(seed, index_offset + i, items, p_b[static_cast<std::size_t>(i)],
                             theta, pi,
                             std::span(out.y).subspan(offset, static_cast<std::size_t>(items)),
                             std::span(out.m).subspan(offset, static_cast<std::size_t>(items)));
    }
    for (auto v : out.m) missing += v;
    out.realized_mb = nb > 0 ? static_cast<double>(missing) / static_cast<double>(nb * items) : 0.0;
    return out;
}

// Group A thetas calibrated so the whole-study expected missing rate hits
// target_overall given group B's realized missingness:
//   m_A = (target - w_B * realized_mb) / w_A,  theta_i = (m_A - p_i*pi)/(1 - p_i)
inline std::vector<double> calibrate_group_a(const std::vector<double>& p_a, double pi,
                                             double target_overall, double realized_mb,
                                             std::pair<double, double> weights = {kGroupAWeight,
                                                                                  kGroupBWeight},
                                             bool clamp_theta = true) {
    if (!(realized_mb >= 0.0 && realized_mb <= 1.0)) {
        throw NumericError("calibrate_group_a: realized_mb must lie in [0, 1]");
    }
    double m_a = (target_overall - weights.second * realized_mb) / weights.first;
    std::vector<double> theta(p_a.size());
    for (std::size_t i = 0; i < p_a.size(); ++i) {
        theta[i] = detail::theta_from_target(m_a, p_a[i], pi, clamp_theta,
                                             static_cast<long long>(i));
    }
    return theta;
}

inline SimulatedDataset generate(const PopulationSpec& spec, const MissingnessConfig& config,
                                 std::uint64_t seed) {
    spec.check();
    config.check();
    SimulatedDataset ds;
    ds.n_examiners = spec.n_examiners;
    ds.items_per_examiner = spec.items_per_examiner;
    ds.seed = seed;
    ds.p = draw_error_probs(spec, seed);
    ds.y.resize(static_cast<std::size_t>(ds.cells()));
    ds.m.resize(static_cast<std::size_t>(ds.cells()));
    ds.theta.assign(static_cast<std::size_t>(spec.n_examiners), 0.0);

    const long long items = spec.items_per_examiner;
    if (config.kind == MechanismKind::Mcar) {
        // pi = theta = rate realizes M independent of Y.
        ds.pi = config.rate;
        for (long long i = 0; i < spec.n_examiners; ++i) {
            ds.theta[static_cast<std::size_t>(i)] = config.rate;
            auto offset = static_cast<std::size_t>(i * items);
            detail::simulate_row(seed, i, items, ds.p[static_cast<std::size_t>(i)],
                                 config.rate, config.rate,
                                 std::span(ds.y).subspan(offset, static_cast<std::size_t>(items)),
                                 std::span(ds.m).subspan(offset, static_cast<std::size_t>(items)));
        }
        return ds;
    }

    if (spec.groups.size() != 2) {
        throw ConfigError("nmar_two_group mechanism needs exactly two population groups");
    }
    ds.pi = config.pi;
    const long long na = spec.groups[0].size;
    const long long nb = spec.groups[1].size;
    std::vector<double> p_a(ds.p.begin(), ds.p.begin() + na);
    std::vector<double> p_b(ds.p.begin() + na, ds.p.end());

    // Group B first; group A calibration consumes its realized missingness.
    GroupBResult gb = simulate_group_b(p_b, config.pi, config.group_b_target, seed, items,
                                       na, config.clamp_theta);
    std::pair<double, double> weights = {kGroupAWeight, kGroupBWeight};
    if (config.exact_weights) {
        weights = {static_cast<double>(na) / static_cast<double>(spec.n_examiners),
                   static_cast<double>(nb) / static_cast<double>(spec.n_examiners)};
    }
    std::vector<double> theta_a = calibrate_group_a(p_a, config.pi, config.target_overall,
                                                    gb.realized_mb, weights, config.clamp_theta);

    for (long long i = 0; i < na; ++i) {
        ds.theta[static_cast<std::size_t>(i)] = theta_a[static_cast<std::size_t>(i)];
        auto offset = static_cast<std::size_t>(i * items);
        detail::simulate_row(seed, i, items, ds.p[static_cast<std::size_t>(i)],
                             theta_a[static_cast<std::size_t>(i)], config.pi,
                             std::span(ds.y).subspan(offset, static_cast<std::size_t>(items)),
                             std::span(ds.m).subspan(offset, static_cast<std::size_t>(items)));
    }
    std::copy(gb.y.begin(), gb.y.end(), ds.y.begin() + static_cast<std::ptrdiff_t>(na * items));
    std::copy(gb.m.begin(), gb.m.end(), ds.m.begin() + static_cast<std::ptrdiff_t>(na * items));
    std::copy(gb.theta.begin(), gb.theta.end(), ds.theta.begin() + static_cast<std::ptrdiff_t>(na));
    return ds;
}

namespace detail {

inline std::string padded_id(char prefix, long long value, int width) {
    std::string digits = std::to_string(value);
    std::string out(1, prefix);
    for (int i = static_cast<int>(digits.size()); i < width; ++i) out += '0';
    return out + digits;
}

}  // namespace detail

inline std::string examiner_id_for(long long index) {
    return detail::padded_id('E', index + 1, 3);
}

inline std::string item_id_for(long long index) {
    return detail::padded_id('I', index + 1, 2);
}

// Every simulated cell is a different-source comparison: an error is an
// Identification, a correct response is an Exclusion.
struct MaskedRecords {
    std::vector<ResponseRecord> observed;  // cells with m = 0
    std::vector<ResponseRecord> full;      // every cell
};

inline MaskedRecords mask(const SimulatedDataset& ds) {
    MaskedRecords out;
    out.full.reserve(static_cast<std::size_t>(ds.cells()));
    for (long long i = 0; i < ds.n_examiners; ++i) {
        std::string examiner = examiner_id_for(i);
        for (long long j = 0; j < ds.items_per_examiner; ++j) {
            ResponseRecord rec;
            rec.examiner_id = examiner;
            rec.item_id = item_id_for(j);
            rec.truth = SourceLabel::DifferentSource;
            rec.decision = ds.y[ds.idx(i, j)] ? Decision::Identification : Decision::Exclusion;
            out.full.push_back(rec);
            if (!ds.m[ds.idx(i, j)]) out.observed.push_back(rec);
        }
    }
    return out;
}

// Explicit-nonresponse encoding: one record per cell, masked cells carrying
// an absent decision. Normalizes to the same state as design_for + observed.
inline std::vector<ResponseRecord> export_records(const SimulatedDataset& ds) {
    std::vector<ResponseRecord> out;
    out.reserve(static_cast<std::size_t>(ds.cells()));
    for (long long i = 0; i < ds.n_examiners; ++i) {
        std::string examiner = examiner_id_for(i);
        for (long long j = 0; j < ds.items_per_examiner; ++j) {
            ResponseRecord rec;
            rec.examiner_id = examiner;
            rec.item_id = item_id_for(j);
            rec.truth = SourceLabel::DifferentSource;
            if (!ds.m[ds.idx(i, j)]) {
                rec.decision = ds.y[ds.idx(i, j)] ? Decision::Identification : Decision::Exclusion;
            }
            out.push_back(rec);
        }
    }
    return out;
}

inline StudyDesign design_for(const SimulatedDataset& ds) {
    StudyDesign design;
    for (long long i = 0; i < ds.n_examiners; ++i) {
        std::string examiner = examiner_id_for(i);
        for (long long j = 0; j < ds.items_per_examiner; ++j) {
            design.add_assignment(examiner, item_id_for(j), SourceLabel::DifferentSource);
        }
    }
    design.set_enrolled(ds.n_examiners);
    return design;
}

}  // namespace nrlab
