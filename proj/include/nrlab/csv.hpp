#pragma once

// CSV ingestion and emission for the record / design / attributes formats.
// Comma separator, UTF-8, headers mandatory; the fixed vocabularies need no
// quoting, so none is implemented.

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nrlab/errors.hpp"
#include "nrlab/study.hpp"

namespace nrlab {

inline std::string to_string(SourceLabel s) {
    return s == SourceLabel::SameSource ? "same" : "different";
}

inline SourceLabel source_label_from(const std::string& s, long long line) {
    if (s == "same") return SourceLabel::SameSource;
    if (s == "different") return SourceLabel::DifferentSource;
    throw DataError("line " + std::to_string(line) + ": unknown truth '" + s + "'");
}

inline std::string to_string(Decision d) {
    switch (d) {
        case Decision::Identification: return "id";
        case Decision::Exclusion: return "exclusion";
        case Decision::Inconclusive: return "inconclusive";
        case Decision::InconclusiveA: return "inconclusive_a";
        case Decision::InconclusiveB: return "inconclusive_b";
        case Decision::InconclusiveC: return "inconclusive_c";
        case Decision::NoValue: return "no_value";
        case Decision::Unsuitable: return "unsuitable";
    }
    return "";
}

inline std::optional<Decision> decision_from(const std::string& s, long long line) {
    if (s.empty()) return std::nullopt;
    if (s == "id") return Decision::Identification;
    if (s == "exclusion") return Decision::Exclusion;
    if (s == "inconclusive") return Decision::Inconclusive;
    if (s == "inconclusive_a") return Decision::InconclusiveA;
    if (s == "inconclusive_b") return Decision::InconclusiveB;
    if (s == "inconclusive_c") return Decision::InconclusiveC;
    if (s == "no_value") return Decision::NoValue;
    if (s == "unsuitable") return Decision::Unsuitable;
    throw DataError("line " + std::to_string(line) + ": unknown decision '" + s + "'");
}

inline std::string to_string(Difficulty d) {
    switch (d) {
        case Difficulty::VeryEasy: return "very_easy";
        case Difficulty::Easy: return "easy";
        case Difficulty::Moderate: return "moderate";
        case Difficulty::Difficult: return "difficult";
        case Difficulty::VeryDifficult: return "very_difficult";
    }
    return "";
}

inline std::optional<Difficulty> difficulty_from(const std::string& s, long long line) {
    if (s.empty()) return std::nullopt;
    if (s == "very_easy") return Difficulty::VeryEasy;
    if (s == "easy") return Difficulty::Easy;
    if (s == "moderate") return Difficulty::Moderate;
    if (s == "difficult") return Difficulty::Difficult;
    if (s == "very_difficult") return Difficulty::VeryDifficult;
    throw DataError("line " + std::to_string(line) + ": unknown difficulty '" + s + "'");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

inline void expect_header(const std::vector<std::string>& got,
                          const std::vector<std::string>& want,
                          const std::string& what) {
    if (got != want) {
        std::string expected;
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (i) expected += ",";
            expected += want[i];
        }
        throw DataError(what + ": expected header '" + expected + "'");
    }
}

}  // namespace detail

// records CSV: examiner_id,item_id,truth,decision,difficulty
inline std::vector<ResponseRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("records CSV: empty input");
    detail::expect_header(detail::split_csv_line(line),
                          {"examiner_id", "item_id", "truth", "decision", "difficulty"},
                          "records CSV");
    std::vector<ResponseRecord> records;
    long long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 5) {
            throw DataError("line " + std::to_string(lineno) + ": expected 5 cells, got " +
                            std::to_string(cells.size()));
        }
        ResponseRecord rec;
        rec.examiner_id = cells[0];
        rec.item_id = cells[1];
        rec.truth = source_label_from(cells[2], lineno);
        rec.decision = decision_from(cells[3], lineno);
        rec.difficulty = difficulty_from(cells[4], lineno);
        if (rec.examiner_id.empty() || rec.item_id.empty()) {
            throw DataError("line " + std::to_string(lineno) + ": empty id");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline void write_records_csv(std::ostream& out,
                              const std::vector<ResponseRecord>& records) {
    out << "examiner_id,item_id,truth,decision,difficulty\n";
    for (const auto& rec : records) {
        out << rec.examiner_id << ',' << rec.item_id << ',' << to_string(rec.truth) << ','
            << (rec.decision ? to_string(*rec.decision) : std::string()) << ','
            << (rec.difficulty ? to_string(*rec.difficulty) : std::string()) << '\n';
    }
}

// design CSV: examiner_id,item_id,truth
inline StudyDesign read_design_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("design CSV: empty input");
    detail::expect_header(detail::split_csv_line(line),
                          {"examiner_id", "item_id", "truth"}, "design CSV");
    StudyDesign design;
    long long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 3) {
            throw DataError("line " + std::to_string(lineno) + ": expected 3 cells, got " +
                            std::to_string(cells.size()));
        }
        design.add_assignment(cells[0], cells[1], source_label_from(cells[2], lineno));
    }
    return design;
}

inline void write_design_csv(std::ostream& out, const StudyDesign& design) {
    out << "examiner_id,item_id,truth\n";
    for (const auto& [examiner, items] : design.assignments()) {
        for (const auto& a : items) {
            out << examiner << ',' << a.item_id << ',' << to_string(a.truth) << '\n';
        }
    }
}

// attributes CSV: examiner_id,<flag1>,<flag2>,... with cells in {0,1}
inline std::vector<ExaminerAttributes> read_attributes_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("attributes CSV: empty input");
    auto header = detail::split_csv_line(line);
    if (header.empty() || header[0] != "examiner_id") {
        throw DataError("attributes CSV: first column must be examiner_id");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].empty()) throw DataError("attributes CSV: empty characteristic name");
        for (std::size_t j = 1; j < i; ++j) {
            if (header[j] == header[i]) {
                throw DataError("attributes CSV: duplicate characteristic '" + header[i] + "'");
            }
        }
    }
    std::vector<ExaminerAttributes> rows;
    long long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
        }
        ExaminerAttributes attrs;
        attrs.examiner_id = cells[0];
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (cells[i] == "1") {
                attrs.flags[header[i]] = true;
            } else if (cells[i] == "0") {
                attrs.flags[header[i]] = false;
            } else {
                throw DataError("line " + std::to_string(lineno) + ": flag cell must be 0 or 1, got '" +
                                cells[i] + "'");
            }
        }
        rows.push_back(std::move(attrs));
    }
    return rows;
}

inline std::vector<ResponseRecord> read_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open records file '" + path + "'");
    return read_records_csv(in);
}

inline StudyDesign read_design_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open design file '" + path + "'");
    return read_design_csv(in);
}

inline std::vector<ExaminerAttributes> read_attributes_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open attributes file '" + path + "'");
    return read_attributes_csv(in);
}

}  // namespace nrlab
