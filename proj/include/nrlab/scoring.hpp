#pragma once

// The four accuracy measures under a configurable inconclusive policy, with
// exact Clopper-Pearson intervals and the per-examiner false-positive
// histogram that published study summaries report.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nrlab/exact.hpp"
#include "nrlab/study.hpp"

namespace nrlab {

enum class InconclusiveTreatment { Correct, Error, Excluded };
enum class AssessmentTreatment { ObservedNonError, Missing };

struct ScoringPolicy {
    InconclusiveTreatment inconclusive = InconclusiveTreatment::Correct;
    AssessmentTreatment unsuitable = AssessmentTreatment::ObservedNonError;
    AssessmentTreatment no_value = AssessmentTreatment::ObservedNonError;
};

enum class Classification {
    FalsePositive,
    FalseNegative,
    TruePositive,
    TrueNegative,
    CorrectByPolicy,
    NotScored,
};

inline Classification classify(SourceLabel truth, std::optional<Decision> decision,
                               const ScoringPolicy& policy) {
    if (!decision.has_value()) return Classification::NotScored;
    switch (*decision) {
        case Decision::Identification:
            return truth == SourceLabel::SameSource ? Classification::TruePositive
                                                    : Classification::FalsePositive;
        case Decision::Exclusion:
            return truth == SourceLabel::SameSource ? Classification::FalseNegative
                                                    : Classification::TrueNegative;
        case Decision::NoValue:
            return policy.no_value == AssessmentTreatment::ObservedNonError
                       ? Classification::CorrectByPolicy
                       : Classification::NotScored;
        case Decision::Unsuitable:
            return policy.unsuitable == AssessmentTreatment::ObservedNonError
                       ? Classification::CorrectByPolicy
                       : Classification::NotScored;
        default:
            break;
    }
    // Inconclusive (any grade); the grade tags never affect scoring.
    switch (policy.inconclusive) {
        case InconclusiveTreatment::Correct:
            return Classification::CorrectByPolicy;
        case InconclusiveTreatment::Error:
            return truth == SourceLabel::SameSource ? Classification::FalseNegative
                                                    : Classification::FalsePositive;
        case InconclusiveTreatment::Excluded:
            return Classification::NotScored;
    }
    return Classification::NotScored;
}

// Point estimate with an exact confidence interval. A zero denominator leaves
// the estimate undefined (defined = false, point/CI meaningless).
struct RateEstimate {
    long long numerator = 0;
    long long denominator = 0;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double level = 0.95;
    bool defined = false;
};

inline RateEstimate make_rate(long long numerator, long long denominator, double level) {
    RateEstimate r;
    r.numerator = numerator;
    r.denominator = denominator;
    r.level = level;
    if (denominator > 0) {
        r.defined = true;
        r.point = static_cast<double>(numerator) / static_cast<double>(denominator);
        Interval ci = clopper_pearson(numerator, denominator, level);
        r.ci_low = ci.low;
        r.ci_high = ci.high;
    }
    return r;
}

struct ScoredCounts {
    long long false_positive = 0;
    long long false_negative = 0;
    long long true_positive = 0;
    long long true_negative = 0;
    long long correct_by_policy_same = 0;
    long long correct_by_policy_different = 0;
    long long not_scored = 0;

    long long scored_same() const {
        return true_positive + false_negative + correct_by_policy_same;
    }
    long long scored_different() const {
        return true_negative + false_positive + correct_by_policy_different;
    }
};

struct AccuracySummary {
    RateEstimate false_positive;
    RateEstimate false_negative;
    RateEstimate sensitivity;
    RateEstimate specificity;
    ScoredCounts counts;
};

inline AccuracySummary summarize(const std::vector<ResponseRecord>& records,
                                 const ScoringPolicy& policy, double level) {
    ScoredCounts c;
    for (const auto& rec : records) {
        switch (classify(rec.truth, rec.decision, policy)) {
            case Classification::FalsePositive: c.false_positive++; break;
            case Classification::FalseNegative: c.false_negative++; break;
            case Classification::TruePositive: c.true_positive++; break;
            case Classification::TrueNegative: c.true_negative++; break;
            case Classification::CorrectByPolicy:
                (rec.truth == SourceLabel::SameSource ? c.correct_by_policy_same
                                                      : c.correct_by_policy_different)++;
                break;
            case Classification::NotScored: c.not_scored++; break;
        }
    }
    AccuracySummary s;
    s.counts = c;
    s.false_positive = make_rate(c.false_positive, c.scored_different(), level);
    s.false_negative = make_rate(c.false_negative, c.scored_same(), level);
    s.sensitivity = make_rate(c.true_positive, c.scored_same(), level);
    s.specificity = make_rate(c.true_negative, c.scored_different(), level);
    return s;
}

// Examiners bucketed by observed false-positive count, the summary format
// black-box studies publish in place of raw data. Every examiner with at
// least one scored different-source decision lands in exactly one bucket.
struct FpHistogram {
    long long zero = 0;
    long long one = 0;
    long long two_plus = 0;
    long long total_fp = 0;
    long long erring_examiners = 0;

    bool operator==(const FpHistogram&) const = default;
};

inline FpHistogram fp_histogram(const std::vector<ResponseRecord>& records,
                                const ScoringPolicy& policy) {
    std::map<std::string, std::pair<long long, long long>> per_examiner;  // (scored DS, FP)
    for (const auto& rec : records) {
        if (rec.truth != SourceLabel::DifferentSource) continue;
        Classification cls = classify(rec.truth, rec.decision, policy);
        if (cls == Classification::NotScored) continue;
        auto& [scored, fp] = per_examiner[rec.examiner_id];
        scored++;
        if (cls == Classification::FalsePositive) fp++;
    }
    FpHistogram h;
    for (const auto& [examiner, counts] : per_examiner) {
        long long fp = counts.second;
        if (fp == 0) {
            h.zero++;
        } else if (fp == 1) {
            h.one++;
        } else {
            h.two_plus++;
        }
        if (fp > 0) {
            h.total_fp += fp;
            h.erring_examiners++;
        }
    }
    return h;
}

}  // namespace nrlab
