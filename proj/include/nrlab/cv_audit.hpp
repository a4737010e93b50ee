#pragma once

// Expert-witness CV audit: collapse duplicate resumes into unique expert
// profiles and summarize how many satisfy the study inclusion criteria.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/format.hpp"

namespace nrlab {

enum class Employment { Public, Private, Unstated };

struct CvRecord {
    std::string expert_id;
    std::optional<bool> afte_member;
    Employment employment = Employment::Unstated;
};

struct ExpertProfile {
    std::string expert_id;
    bool afte_member = false;
    bool public_employer = false;
    long long n_resumes = 0;
};

// Duplicate resumes resolve in favor of the inclusion criteria: any resume
// claiming AFTE membership makes the expert a member, any public position
// makes the expert publicly employed, and unstated-only employment resolves
// to private.
inline std::vector<ExpertProfile> resolve(const std::vector<CvRecord>& records) {
    std::map<std::string, ExpertProfile> by_id;
    for (const auto& rec : records) {
        if (rec.expert_id.empty()) throw DataError("cv record with empty expert_id");
        auto& profile = by_id[rec.expert_id];
        profile.expert_id = rec.expert_id;
        profile.n_resumes++;
        if (rec.afte_member.value_or(false)) profile.afte_member = true;
        if (rec.employment == Employment::Public) profile.public_employer = true;
    }
    std::vector<ExpertProfile> out;
    out.reserve(by_id.size());
    for (auto& [id, profile] : by_id) out.push_back(std::move(profile));
    return out;
}

struct CriteriaSummary {
    long long n_experts = 0;
    long long n_afte = 0;
    long long n_public = 0;
    long long n_both = 0;
    double pct_afte = 0.0;  // one-decimal percents, table precision
    double pct_public = 0.0;
    double pct_both = 0.0;
};

inline CriteriaSummary criteria_summary(const std::vector<ExpertProfile>& profiles) {
    if (profiles.empty()) throw DataError("criteria_summary: no profiles");
    CriteriaSummary s;
    s.n_experts = static_cast<long long>(profiles.size());
    for (const auto& p : profiles) {
        if (p.afte_member) s.n_afte++;
        if (p.public_employer) s.n_public++;
        if (p.afte_member && p.public_employer) s.n_both++;
    }
    auto pct = [&](long long c) {
        return round_half_away(100.0 * static_cast<double>(c) / static_cast<double>(s.n_experts), 1);
    };
    s.pct_afte = pct(s.n_afte);
    s.pct_public = pct(s.n_public);
    s.pct_both = pct(s.n_both);
    return s;
}

struct ResumeHistogram {
    std::map<long long, long long> counts;  // n_resumes -> expert count
    long long total_experts = 0;
    long long total_resumes = 0;
};

inline ResumeHistogram resume_histogram(const std::vector<ExpertProfile>& profiles) {
    ResumeHistogram h;
    for (const auto& p : profiles) {
        h.counts[p.n_resumes]++;
        h.total_experts++;
        h.total_resumes += p.n_resumes;
    }
    return h;
}

}  // namespace nrlab
