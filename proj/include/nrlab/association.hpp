#pragma once

// Association between a binary examiner characteristic and high item
// nonresponse. For a binary characteristic and binary flag the permutation
// null of the overlap statistic is exactly hypergeometric, so the exact tail
// is the default p-value; Monte-Carlo permutation cross-validates it.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/exact.hpp"
#include "nrlab/rng.hpp"
#include "nrlab/study.hpp"

namespace nrlab {

// 2x2 overlap summary: k_overlap examiners are both flagged and carry the
// characteristic, out of n_flagged flagged and n_characteristic carriers
// among n_total examiners.
struct ContingencySummary {
    long long n_total = 0;
    long long n_characteristic = 0;
    long long n_flagged = 0;
    long long k_overlap = 0;
};

namespace detail {

inline double log_choose(long long n, long long k) {
    return std::lgamma(static_cast<double>(n + 1)) -
           std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace detail

// P(X >= k) for X ~ Hypergeometric(N, K, n): the chance that k or more of the
// n draws carry the characteristic shared by K of the N population members.
// Exact summation of log-space terms.
inline double hypergeom_tail(long long N, long long K, long long n, long long k) {
    if (N < 0 || K < 0 || K > N || n < 0 || n > N || k < 0 || k > n) {
        throw NumericError("hypergeom_tail: need 0 <= k <= n <= N and 0 <= K <= N");
    }
    long long hi = std::min(n, K);
    if (k > hi) return 0.0;
    long long lo = std::max<long long>(k, std::max<long long>(0, n + K - N));
    double log_denom = detail::log_choose(N, n);
    double total = 0.0;
    for (long long j = hi; j >= lo; --j) {  // smallest terms first
        total += std::exp(detail::log_choose(K, j) + detail::log_choose(N - K, n - j) -
                          log_denom);
    }
    return std::min(total, 1.0);
}

struct PermutationResult {
    double p_hat = 0.0;   // (1 + #{perms with overlap >= observed}) / (n_perm + 1)
    double mc_low = 0.0;  // Clopper-Pearson interval on the permutation proportion
    double mc_high = 1.0;
    long long observed_overlap = 0;
    long long n_perm = 0;
};

// One-sided Monte-Carlo permutation test of the overlap statistic. The
// characteristic labels are permuted uniformly; only the first n_flagged
// positions of each permutation matter, so a partial Fisher-Yates shuffle
// suffices. Each permutation draws from its own substream, making the result
// independent of batch partitioning.
inline PermutationResult permutation_p(const std::map<std::string, bool>& flags,
                                       const std::map<std::string, bool>& characteristic,
                                       long long n_perm, std::uint64_t seed) {
    if (n_perm < 1) throw NumericError("permutation_p: n_perm must be >= 1");
    if (flags.size() != characteristic.size()) {
        throw DataError("permutation_p: flag and characteristic key sets differ");
    }
    std::vector<char> flag_vec, char_vec;
    flag_vec.reserve(flags.size());
    char_vec.reserve(flags.size());
    {
        auto fit = flags.begin();
        auto cit = characteristic.begin();
        for (; fit != flags.end(); ++fit, ++cit) {
            if (fit->first != cit->first) {
                throw DataError("permutation_p: flag and characteristic key sets differ");
            }
            flag_vec.push_back(fit->second ? 1 : 0);
            char_vec.push_back(cit->second ? 1 : 0);
        }
    }
    const long long total = static_cast<long long>(flag_vec.size());
    const long long n_flagged = std::count(flag_vec.begin(), flag_vec.end(), char{1});
    long long observed = 0;
    for (long long i = 0; i < total; ++i) {
        if (flag_vec[i] && char_vec[i]) observed++;
    }

    std::vector<std::uint32_t> index(total);
    long long at_least = 0;
    for (long long t = 0; t < n_perm; ++t) {
        Substream rng(derive_stream(seed, StreamTag::Permutation, static_cast<std::uint64_t>(t)));
        std::iota(index.begin(), index.end(), 0u);
        long long overlap = 0;
        for (long long i = 0; i < n_flagged; ++i) {
            auto j = i + static_cast<long long>(rng.below(static_cast<std::uint64_t>(total - i)));
            std::swap(index[i], index[j]);
            if (char_vec[index[i]]) overlap++;
        }
        if (overlap >= observed) at_least++;
    }

    PermutationResult result;
    result.observed_overlap = observed;
    result.n_perm = n_perm;
    result.p_hat = static_cast<double>(1 + at_least) / static_cast<double>(n_perm + 1);
    Interval ci = clopper_pearson(at_least, n_perm, 0.95);
    result.mc_low = ci.low;
    result.mc_high = ci.high;
    return result;
}

struct BatteryRow {
    std::string characteristic;
    ContingencySummary contingency;
    double exact_p = 1.0;
    PermutationResult mc;
    long long excluded = 0;  // examiners lacking a value for this characteristic
};

// One row per characteristic: contingency counts, the exact hypergeometric
// tail, and the Monte-Carlo permutation estimate. Examiners missing a value
// for a characteristic are excluded from that row only.
inline std::vector<BatteryRow> run_battery(const std::map<std::string, bool>& flags,
                                           const std::vector<ExaminerAttributes>& attributes,
                                           const std::vector<std::string>& characteristics,
                                           long long n_perm, std::uint64_t seed) {
    std::map<std::string, const ExaminerAttributes*> by_id;
    for (const auto& a : attributes) by_id[a.examiner_id] = &a;

    std::vector<BatteryRow> rows;
    std::uint64_t row_index = 0;
    for (const auto& name : characteristics) {
        BatteryRow row;
        row.characteristic = name;
        std::map<std::string, bool> restricted_flags, restricted_char;
        for (const auto& [examiner, flagged] : flags) {
            auto it = by_id.find(examiner);
            if (it == by_id.end()) {
                row.excluded++;
                continue;
            }
            auto fit = it->second->flags.find(name);
            if (fit == it->second->flags.end()) {
                row.excluded++;
                continue;
            }
            restricted_flags[examiner] = flagged;
            restricted_char[examiner] = fit->second;
        }
        auto& c = row.contingency;
        c.n_total = static_cast<long long>(restricted_flags.size());
        for (const auto& [examiner, flagged] : restricted_flags) {
            bool ch = restricted_char[examiner];
            if (ch) c.n_characteristic++;
            if (flagged) c.n_flagged++;
            if (ch && flagged) c.k_overlap++;
        }
        if (c.n_total > 0) {
            row.exact_p = hypergeom_tail(c.n_total, c.n_characteristic, c.n_flagged, c.k_overlap);
            row.mc = permutation_p(restricted_flags, restricted_char, n_perm,
                                   derive_stream(seed, StreamTag::Permutation, row_index,
                                                 0xBA77E2));
        }
        rows.push_back(std::move(row));
        ++row_index;
    }
    return rows;
}

}  // namespace nrlab
