#pragma once

// Unit and item nonresponse accounting. Unit nonresponse: an enrolled
// participant answers nothing in scope. Item nonresponse: an active responder
// leaves some in-scope assignments unanswered. The two are disjoint, so the
// item denominator counts only items assigned to active responders.

#include <map>
#include <string>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/study.hpp"

namespace nrlab {

enum class Scope { All, DifferentSourceOnly, SameSourceOnly };

// What counts as an answer. AnyRecordedDecision mirrors published nonresponse
// tables (a suitability assessment is a response); ComparisonDecisionRequired
// mirrors error-rate denominators (only id/exclusion/inconclusive count).
enum class AnsweredPolicy { AnyRecordedDecision, ComparisonDecisionRequired };

inline bool counts_as_answered(const std::optional<Decision>& decision,
                               AnsweredPolicy policy) {
    if (!decision.has_value()) return false;
    if (policy == AnsweredPolicy::AnyRecordedDecision) return true;
    return is_comparison_decision(*decision);
}

inline bool in_scope(SourceLabel truth, Scope scope) {
    switch (scope) {
        case Scope::All: return true;
        case Scope::DifferentSourceOnly: return truth == SourceLabel::DifferentSource;
        case Scope::SameSourceOnly: return truth == SourceLabel::SameSource;
    }
    return false;
}

struct NonresponseLedger {
    Scope scope = Scope::All;
    long long enrolled = 0;
    long long active_responders = 0;
    double unit_rate = 0.0;
    bool unit_rate_defined = false;
    long long assigned_items = 0;  // assignments of active responders only
    long long answered_items = 0;
    double item_rate = 0.0;
    bool item_rate_defined = false;
    std::map<std::string, double> per_examiner_rates;  // active responders
};

inline NonresponseLedger ledger(const StudyDesign& design,
                                const std::vector<ResponseRecord>& records,
                                Scope scope = Scope::All,
                                AnsweredPolicy answered = AnsweredPolicy::AnyRecordedDecision) {
    // Per-examiner tallies over in-scope assignments; normalize() guarantees
    // one row per assignment regardless of how missing responses were encoded.
    std::map<std::string, std::pair<long long, long long>> tallies;  // (assigned, answered)
    for (const auto& rec : normalize(design, records)) {
        if (!in_scope(rec.truth, scope)) continue;
        auto& [assigned, count] = tallies[rec.examiner_id];
        assigned++;
        if (counts_as_answered(rec.decision, answered)) count++;
    }

    NonresponseLedger led;
    led.scope = scope;
    led.enrolled = design.enrolled();
    for (const auto& [examiner, t] : tallies) {
        if (t.second > 0) {
            led.active_responders++;
            led.assigned_items += t.first;
            led.answered_items += t.second;
            led.per_examiner_rates[examiner] =
                1.0 - static_cast<double>(t.second) / static_cast<double>(t.first);
        }
    }
    if (led.enrolled > 0) {
        led.unit_rate_defined = true;
        led.unit_rate = 1.0 - static_cast<double>(led.active_responders) /
                                  static_cast<double>(led.enrolled);
    }
    if (led.assigned_items > 0) {
        led.item_rate_defined = true;
        led.item_rate = 1.0 - static_cast<double>(led.answered_items) /
                                  static_cast<double>(led.assigned_items);
    }
    return led;
}

// Item nonresponse from published assigned/answered totals.
inline double derived_rate(long long assigned, long long answered) {
    if (assigned <= 0) throw NumericError("derived_rate: assigned must be positive");
    if (answered < 0 || answered > assigned) {
        throw NumericError("derived_rate: need 0 <= answered <= assigned");
    }
    return 1.0 - static_cast<double>(answered) / static_cast<double>(assigned);
}

struct HighNonresponseFlags {
    std::map<std::string, bool> flags;          // examiners with >= 1 assignment
    std::vector<std::string> zero_assignment;   // listed separately
};

// Flags examiners whose item nonresponse strictly exceeds the threshold
// ("over half" in the source analyses is a strict inequality).
inline HighNonresponseFlags high_nonresponse_flags(
    const StudyDesign& design, const std::vector<ResponseRecord>& records,
    double threshold = 0.5,
    AnsweredPolicy answered = AnsweredPolicy::AnyRecordedDecision) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw NumericError("high_nonresponse_flags: threshold must lie in (0, 1)");
    }
    std::map<std::string, std::pair<long long, long long>> tallies;
    for (const auto& rec : normalize(design, records)) {
        auto& [assigned, count] = tallies[rec.examiner_id];
        assigned++;
        if (counts_as_answered(rec.decision, answered)) count++;
    }
    HighNonresponseFlags out;
    for (const auto& [examiner, items] : design.assignments()) {
        auto it = tallies.find(examiner);
        if (it == tallies.end() || it->second.first == 0) {
            out.zero_assignment.push_back(examiner);
            continue;
        }
        double rate = 1.0 - static_cast<double>(it->second.second) /
                                static_cast<double>(it->second.first);
        out.flags[examiner] = rate > threshold;
    }
    return out;
}

}  // namespace nrlab
