#pragma once

// Shared fixture builders: reconstructions of the published study summaries
// used across the unit and acceptance suites.

#include <string>
#include <vector>

#include "nrlab/study.hpp"

namespace nrlab::fixtures {

inline std::string numbered_id(const std::string& prefix, long long n, int width = 3) {
    std::string digits = std::to_string(n);
    std::string out = prefix;
    for (int i = static_cast<int>(digits.size()); i < width; ++i) out += '0';
    return out + digits;
}

// 173 examiners, 2,842 scored different-source decisions, 20 false positives:
// five examiners with one each, five with three each, so the FP-by-examiner
// histogram is {0: 163, 1: 5, 2+: 5}. Note those bucket counts force exactly
// ten distinct erring examiners.
inline std::vector<ResponseRecord> fbi_ames_observed() {
    std::vector<ResponseRecord> records;
    records.reserve(2842);
    for (long long e = 1; e <= 173; ++e) {
        long long scored = 16 + (e <= 74 ? 1 : 0);  // 173*16 + 74 = 2,842
        long long fp = 0;
        if (e <= 5) {
            fp = 1;
        } else if (e <= 10) {
            fp = 3;
        }
        std::string examiner = numbered_id("E", e);
        for (long long j = 1; j <= scored; ++j) {
            ResponseRecord rec;
            rec.examiner_id = examiner;
            rec.item_id = numbered_id("I", j, 2);
            rec.truth = SourceLabel::DifferentSource;
            rec.decision = j <= fp ? Decision::Identification : Decision::Exclusion;
            records.push_back(rec);
        }
    }
    return records;
}

struct EdcFixture {
    StudyDesign design;
    std::vector<ResponseRecord> records;
};

// False-positive scope of the palmar-print study: 328 enrolled, each assigned
// 22 different-source comparisons. 185 examiners render comparison decisions
// (2,560 in total), 41 respond without any comparison decision, 102 return
// nothing.
inline EdcFixture edc_fp_scope() {
    EdcFixture fx;
    for (long long e = 1; e <= 328; ++e) {
        std::string examiner = numbered_id("P", e);
        for (long long j = 1; j <= 22; ++j) {
            fx.design.add_assignment(examiner, numbered_id("I", j, 2),
                                     SourceLabel::DifferentSource);
        }
    }
    fx.design.set_enrolled(328);
    for (long long e = 1; e <= 185; ++e) {
        std::string examiner = numbered_id("P", e);
        long long decisions = 13 + (e <= 155 ? 1 : 0);  // 185*13 + 155 = 2,560
        for (long long j = 1; j <= decisions; ++j) {
            fx.records.push_back({examiner, numbered_id("I", j, 2),
                                  SourceLabel::DifferentSource, Decision::Exclusion,
                                  std::nullopt});
        }
    }
    // Responders without a comparison decision: suitability assessments only.
    for (long long e = 186; e <= 226; ++e) {
        fx.records.push_back({numbered_id("P", e), "I01", SourceLabel::DifferentSource,
                              Decision::NoValue, std::nullopt});
    }
    return fx;
}

// Bullet comparisons across all study stages: 256 enrolled, 173 responders
// assigned 90 bullet comparisons each (15,570 total), 10,020 answered.
inline EdcFixture ames_bullets() {
    EdcFixture fx;
    for (long long e = 1; e <= 173; ++e) {
        std::string examiner = numbered_id("B", e);
        for (long long j = 1; j <= 90; ++j) {
            fx.design.add_assignment(examiner, numbered_id("I", j, 2),
                                     SourceLabel::DifferentSource);
        }
        long long answered = 57 + (e <= 159 ? 1 : 0);  // 173*57 + 159 = 10,020
        for (long long j = 1; j <= answered; ++j) {
            fx.records.push_back({examiner, numbered_id("I", j, 2),
                                  SourceLabel::DifferentSource, Decision::Exclusion,
                                  std::nullopt});
        }
    }
    fx.design.set_enrolled(256);
    return fx;
}

// 197 examiners with 75 assignments each; the first 49 leave 38 items blank
// (just over half), the rest leave 20.
inline EdcFixture edc_high_nonresponse() {
    EdcFixture fx;
    for (long long e = 1; e <= 197; ++e) {
        std::string examiner = numbered_id("X", e);
        long long unanswered = e <= 49 ? 38 : 20;
        for (long long j = 1; j <= 75; ++j) {
            fx.design.add_assignment(examiner, numbered_id("I", j, 2),
                                     SourceLabel::DifferentSource);
            if (j > unanswered) {
                fx.records.push_back({examiner, numbered_id("I", j, 2),
                                      SourceLabel::DifferentSource, Decision::Exclusion,
                                      std::nullopt});
            }
        }
    }
    fx.design.set_enrolled(197);
    return fx;
}

// Attribute rows matching the foreign-employer analysis: 38 of 197 carry the
// characteristic; overlap with the 49 flagged examiners of
// edc_high_nonresponse() is 14 (X001..X014 foreign and flagged, X050..X073
// foreign and unflagged).
inline std::vector<ExaminerAttributes> edc_attributes() {
    std::vector<ExaminerAttributes> rows;
    for (long long e = 1; e <= 197; ++e) {
        bool foreign = e <= 14 || (e >= 50 && e <= 73);
        rows.push_back({numbered_id("X", e), {{"non_us_employer", foreign}}});
    }
    return rows;
}

}  // namespace nrlab::fixtures
