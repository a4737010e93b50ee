#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "nrlab/cv_audit.hpp"
#include "nrlab/format.hpp"

using namespace nrlab;

namespace {

// 60 experts with the marginal counts behind the published criteria table:
// 38 AFTE members, 39 publicly employed, 23 satisfying both.
std::vector<ExpertProfile> criteria_fixture() {
    std::vector<ExpertProfile> profiles;
    auto add = [&](int count, bool afte, bool pub) {
        for (int i = 0; i < count; ++i) {
            ExpertProfile p;
            p.expert_id = "w" + std::to_string(profiles.size() + 1);
            p.afte_member = afte;
            p.public_employer = pub;
            p.n_resumes = 1;
            profiles.push_back(p);
        }
    };
    add(23, true, true);
    add(15, true, false);
    add(16, false, true);
    add(6, false, false);
    return profiles;
}

// Resume multiplicities from the duplicate-resolution appendix.
std::vector<CvRecord> resume_multiplicity_fixture() {
    std::vector<std::pair<int, int>> shape = {{1, 42}, {2, 8}, {3, 1}, {4, 3},
                                              {6, 3}, {8, 1}, {9, 1}, {23, 1}};
    std::vector<CvRecord> records;
    int expert = 0;
    for (auto [copies, experts] : shape) {
        for (int e = 0; e < experts; ++e) {
            ++expert;
            for (int c = 0; c < copies; ++c) {
                records.push_back({"w" + std::to_string(expert), false, Employment::Private});
            }
        }
    }
    return records;
}

}  // namespace

TEST_CASE("duplicate resumes resolve in favor of the inclusion criteria") {
    std::vector<CvRecord> records = {
        {"a", true, Employment::Private},
        {"a", false, Employment::Private},
        {"b", false, Employment::Private},
        {"b", std::nullopt, Employment::Public},
        {"c", false, Employment::Unstated},
    };
    auto profiles = resolve(records);
    REQUIRE(profiles.size() == 3);
    auto find = [&](const std::string& id) {
        return *std::find_if(profiles.begin(), profiles.end(),
                             [&](const auto& p) { return p.expert_id == id; });
    };
    REQUIRE(find("a").afte_member);          // any member record wins
    REQUIRE_FALSE(find("a").public_employer);
    REQUIRE(find("b").public_employer);      // any public record wins
    REQUIRE_FALSE(find("b").afte_member);
    REQUIRE_FALSE(find("c").afte_member);    // unstated-only employment is private
    REQUIRE_FALSE(find("c").public_employer);
    REQUIRE(find("a").n_resumes == 2);
    REQUIRE(find("c").n_resumes == 1);
}

TEST_CASE("criteria summary reproduces the published percentages") {
    auto summary = criteria_summary(criteria_fixture());
    REQUIRE(summary.n_experts == 60);
    REQUIRE(summary.n_afte == 38);
    REQUIRE(summary.n_public == 39);
    REQUIRE(summary.n_both == 23);
    REQUIRE(summary.pct_afte == Catch::Approx(63.3).margin(1e-9));
    REQUIRE(summary.pct_public == Catch::Approx(65.0).margin(1e-9));
    REQUIRE(summary.pct_both == Catch::Approx(38.3).margin(1e-9));
}

TEST_CASE("criteria summary boundary behavior") {
    std::vector<ExpertProfile> all_both(4, ExpertProfile{"x", true, true, 1});
    auto summary = criteria_summary(all_both);
    REQUIRE(summary.pct_afte == 100.0);
    REQUIRE(summary.pct_public == 100.0);
    REQUIRE(summary.pct_both == 100.0);

    REQUIRE_THROWS_AS(criteria_summary({}), DataError);
}

TEST_CASE("the joint criterion never exceeds either marginal") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<ExpertProfile> profiles;
        int n = 1 + static_cast<int>(rng() % 50);
        for (int i = 0; i < n; ++i) {
            profiles.push_back({"e" + std::to_string(i), rng() % 2 == 0, rng() % 2 == 0, 1});
        }
        auto summary = criteria_summary(profiles);
        REQUIRE(summary.pct_both <= std::min(summary.pct_afte, summary.pct_public) + 1e-9);
    }
}

TEST_CASE("resume histogram matches the appendix table") {
    auto profiles = resolve(resume_multiplicity_fixture());
    auto hist = resume_histogram(profiles);
    std::map<long long, long long> expected = {{1, 42}, {2, 8}, {3, 1}, {4, 3},
                                               {6, 3}, {8, 1}, {9, 1}, {23, 1}};
    REQUIRE(hist.counts == expected);
    REQUIRE(hist.total_experts == 60);
    REQUIRE(hist.total_resumes == 131);

    SECTION("totals identity") {
        long long resumes = 0;
        for (const auto& [copies, experts] : hist.counts) resumes += copies * experts;
        REQUIRE(resumes == hist.total_resumes);
    }
}

TEST_CASE("single expert single record") {
    auto hist = resume_histogram(resolve({{"only", true, Employment::Public}}));
    REQUIRE(hist.counts == std::map<long long, long long>{{1, 1}});
}

TEST_CASE("resolve is idempotent and order-insensitive") {
    auto records = resume_multiplicity_fixture();
    records[0].afte_member = true;
    records[5].employment = Employment::Public;

    auto baseline = resolve(records);
    std::mt19937 rng(8);
    std::shuffle(records.begin(), records.end(), rng);
    auto shuffled = resolve(records);
    REQUIRE(shuffled.size() == baseline.size());
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        REQUIRE(shuffled[i].expert_id == baseline[i].expert_id);
        REQUIRE(shuffled[i].afte_member == baseline[i].afte_member);
        REQUIRE(shuffled[i].public_employer == baseline[i].public_employer);
    }

    // Feeding resolved profiles back through as single records is an identity
    // on the boolean fields.
    std::vector<CvRecord> as_records;
    for (const auto& p : baseline) {
        as_records.push_back({p.expert_id, p.afte_member,
                              p.public_employer ? Employment::Public : Employment::Private});
    }
    auto again = resolve(as_records);
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        REQUIRE(again[i].afte_member == baseline[i].afte_member);
        REQUIRE(again[i].public_employer == baseline[i].public_employer);
        REQUIRE(again[i].n_resumes == 1);
    }
}

TEST_CASE("duplicating a record never changes the criteria summary") {
    auto records = resume_multiplicity_fixture();
    records[3].afte_member = true;
    auto base = criteria_summary(resolve(records));
    std::mt19937 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        auto copy = records;
        copy.push_back(records[rng() % records.size()]);
        auto dup = criteria_summary(resolve(copy));
        REQUIRE(dup.pct_afte == base.pct_afte);
        REQUIRE(dup.pct_public == base.pct_public);
        REQUIRE(dup.pct_both == base.pct_both);
    }
}

TEST_CASE("empty expert id is rejected") {
    REQUIRE_THROWS_AS(resolve({{"", true, Employment::Public}}), DataError);
}
