#pragma once

// Shared data model for black-box proficiency study data, real or simulated.
// An assignment ledger (StudyDesign) plus response rows (ResponseRecord) are
// the inputs every analysis works from.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nrlab/errors.hpp"

namespace nrlab {

enum class SourceLabel { SameSource, DifferentSource };

enum class Decision {
    Identification,
    Exclusion,
    Inconclusive,
    InconclusiveA,
    InconclusiveB,
    InconclusiveC,
    NoValue,
    Unsuitable,
};

inline bool is_inconclusive(Decision d) {
    return d == Decision::Inconclusive || d == Decision::InconclusiveA ||
           d == Decision::InconclusiveB || d == Decision::InconclusiveC;
}

// Identification / Exclusion / Inconclusive are comparison decisions;
// NoValue and Unsuitable are suitability assessments.
inline bool is_comparison_decision(Decision d) {
    return d == Decision::Identification || d == Decision::Exclusion ||
           is_inconclusive(d);
}

enum class Difficulty { VeryEasy, Easy, Moderate, Difficult, VeryDifficult };

inline constexpr std::array<Difficulty, 5> kAllDifficulties = {
    Difficulty::VeryEasy, Difficulty::Easy, Difficulty::Moderate,
    Difficulty::Difficult, Difficulty::VeryDifficult};

// One examiner x item comparison. decision == nullopt means the assignment is
// known but no response was recorded. difficulty may be present even when the
// decision is absent (an examiner can rate an item and then skip it).
struct ResponseRecord {
    std::string examiner_id;
    std::string item_id;
    SourceLabel truth = SourceLabel::DifferentSource;
    std::optional<Decision> decision;
    std::optional<Difficulty> difficulty;
};

struct Assignment {
    std::string item_id;
    SourceLabel truth = SourceLabel::DifferentSource;
};

// Which items (with ground-truth labels) each examiner was assigned, plus the
// number of enrolled participants (including those who returned nothing).
class StudyDesign {
  public:
    void add_assignment(const std::string& examiner_id, const std::string& item_id,
                        SourceLabel truth) {
        auto& items = assignments_[examiner_id];
        for (const auto& a : items) {
            if (a.item_id == item_id) {
                throw DataError("duplicate assignment: examiner '" + examiner_id +
                                "' item '" + item_id + "'");
            }
        }
        items.push_back({item_id, truth});
    }

    // Makes an examiner known to the design without assigning items.
    void declare_examiner(const std::string& examiner_id) { assignments_[examiner_id]; }

    // Enrollment must cover every examiner that has assignments.
    void set_enrolled(long long n) {
        if (n < static_cast<long long>(assignments_.size())) {
            throw DataError("enrolled_count " + std::to_string(n) +
                            " is smaller than the " +
                            std::to_string(assignments_.size()) +
                            " examiners with assignments");
        }
        enrolled_ = n;
    }

    long long enrolled() const {
        return enrolled_ < 0 ? static_cast<long long>(assignments_.size())
                             : enrolled_;
    }

    const std::map<std::string, std::vector<Assignment>>& assignments() const {
        return assignments_;
    }

    const Assignment* find(const std::string& examiner_id,
                           const std::string& item_id) const {
        auto it = assignments_.find(examiner_id);
        if (it == assignments_.end()) return nullptr;
        for (const auto& a : it->second) {
            if (a.item_id == item_id) return &a;
        }
        return nullptr;
    }

  private:
    std::map<std::string, std::vector<Assignment>> assignments_;
    long long enrolled_ = -1;  // default: examiners with assignments
};

// Boolean examiner characteristics ("non_us_employer", ...), one row per
// examiner in the attributes CSV.
struct ExaminerAttributes {
    std::string examiner_id;
    std::map<std::string, bool> flags;
};

struct Violation {
    std::string kind;  // "unassigned_response" | "duplicate_record" | "truth_mismatch"
    std::string examiner_id;
    std::string item_id;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks records against a design. Violations are data, not failures: the
// report is empty iff every record's (examiner, item) is assigned with the
// same ground truth and no pair appears twice.
inline ValidationReport validate(const std::vector<ResponseRecord>& records,
                                 const StudyDesign& design) {
    ValidationReport report;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& rec : records) {
        if (!seen.insert({rec.examiner_id, rec.item_id}).second) {
            report.violations.push_back({"duplicate_record", rec.examiner_id,
                                         rec.item_id,
                                         "(examiner,item) appears more than once"});
        }
        const Assignment* a = design.find(rec.examiner_id, rec.item_id);
        if (a == nullptr) {
            report.violations.push_back({"unassigned_response", rec.examiner_id,
                                         rec.item_id,
                                         "response without a matching assignment"});
        } else if (a->truth != rec.truth) {
            report.violations.push_back({"truth_mismatch", rec.examiner_id,
                                         rec.item_id,
                                         "record truth disagrees with design"});
        }
    }
    return report;
}

// Normalizes both legal encodings of a missing response -- an explicit record
// with no decision, or no record at all -- into one record per assignment.
// Published datasets usually ship only the observed rows, so analyses must
// treat the two encodings identically.
inline std::vector<ResponseRecord> normalize(const StudyDesign& design,
                                             const std::vector<ResponseRecord>& records) {
    std::map<std::pair<std::string, std::string>, const ResponseRecord*> by_key;
    for (const auto& rec : records) {
        by_key[{rec.examiner_id, rec.item_id}] = &rec;
    }
    std::vector<ResponseRecord> out;
    for (const auto& [examiner, items] : design.assignments()) {
        for (const auto& a : items) {
            auto it = by_key.find({examiner, a.item_id});
            if (it != by_key.end()) {
                out.push_back(*it->second);
            } else {
                out.push_back({examiner, a.item_id, a.truth, std::nullopt, std::nullopt});
            }
        }
    }
    return out;
}

// Difficulty ratings split by whether any decision was recorded. The
// unanswered column is the rate-then-skip pattern: a difficulty rating with
// no recorded decision at all.
struct DifficultyProfile {
    std::array<long long, 5> answered{};
    std::array<long long, 5> unanswered{};

    long long total_unanswered() const {
        long long t = 0;
        for (auto c : unanswered) t += c;
        return t;
    }
};

inline DifficultyProfile difficulty_profile(const std::vector<ResponseRecord>& records) {
    DifficultyProfile profile;
    for (const auto& rec : records) {
        if (!rec.difficulty.has_value()) continue;
        auto idx = static_cast<std::size_t>(*rec.difficulty);
        (rec.decision.has_value() ? profile.answered : profile.unanswered)[idx]++;
    }
    return profile;
}

}  // namespace nrlab
