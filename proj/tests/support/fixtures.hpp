#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kappax/agreement.hpp"
#include "kappax/hierarchy.hpp"

namespace kappax::test {

inline std::string data_path(const std::string& name) {
    return std::string(KAPPAX_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline ClassificationTensor exam_tensor() {
    auto records = parse_ratings(read_file(data_path("exam.csv")));
    auto categories = parse_categories(read_file(data_path("exam_categories")));
    return build_tensor(records, std::nullopt, categories);
}

inline std::vector<AvailabilityRule> exam_rules() {
    return parse_hierarchy(read_file(data_path("exam_hierarchy.json")));
}

inline ClassificationTensor dsm_tensor() {
    auto records = parse_ratings(read_file(data_path("dsm.csv")));
    auto roster = parse_roster(read_file(data_path("dsm_roster.csv")));
    auto categories = parse_categories(read_file(data_path("dsm_categories")));
    return build_tensor(records, roster, categories);
}

/// Random multi-label data; every rater rates every subject.
struct RandomTensorParams {
    std::size_t max_subjects = 20;
    std::size_t max_raters = 6;
    std::size_t max_categories = 8;
    double select_prob = 0.4;
};

inline std::string padded_id(char prefix, std::size_t n) {
    std::string digits = std::to_string(n);
    if (digits.size() < 2) digits.insert(digits.begin(), '0');
    return prefix + digits;
}

inline ClassificationTensor random_tensor(std::mt19937_64& rng, const RandomTensorParams& p = {},
                                          double participation_prob = 1.0) {
    std::uniform_int_distribution<std::size_t> subj(1, p.max_subjects);
    std::uniform_int_distribution<std::size_t> rate(2, p.max_raters);
    std::uniform_int_distribution<std::size_t> cats(1, p.max_categories);
    const std::size_t I = subj(rng), J = rate(rng), C = cats(rng);

    std::vector<std::string> subjects, raters, categories;
    for (std::size_t i = 0; i < I; ++i) subjects.push_back(padded_id('s', i));
    for (std::size_t j = 0; j < J; ++j) raters.push_back(padded_id('r', j));
    for (std::size_t c = 0; c < C; ++c) categories.push_back(padded_id('c', c));

    std::vector<std::uint8_t> participation(I * J, 1);
    if (participation_prob < 1.0) {
        std::bernoulli_distribution attend(participation_prob);
        for (auto& bit : participation) bit = attend(rng) ? 1 : 0;
        // keep every subject rated and every rater active, so identities
        // survive a CSV round trip
        for (std::size_t i = 0; i < I; ++i) {
            bool any = false;
            for (std::size_t j = 0; j < J; ++j) any |= participation[i * J + j] != 0;
            if (!any) participation[i * J + rng() % J] = 1;
        }
        for (std::size_t j = 0; j < J; ++j) {
            bool any = false;
            for (std::size_t i = 0; i < I; ++i) any |= participation[i * J + j] != 0;
            if (!any) participation[(rng() % I) * J + j] = 1;
        }
    }

    std::bernoulli_distribution pick(p.select_prob);
    std::vector<std::uint8_t> selections(I * J * C, 0);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            if (!participation[i * J + j]) continue;
            for (std::size_t c = 0; c < C; ++c)
                selections[(i * J + j) * C + c] = pick(rng) ? 1 : 0;
        }
    return ClassificationTensor(subjects, raters, categories, selections, participation);
}

/// The tensor's selection events as parser-shaped records.
inline std::vector<RatingRecord> records_of(const ClassificationTensor& tensor) {
    std::vector<RatingRecord> records;
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        for (std::size_t j = 0; j < tensor.rater_count(); ++j)
            for (std::size_t c = 0; c < tensor.category_count(); ++c)
                if (tensor.selected(i, j, c))
                    records.push_back({tensor.subjects()[i], tensor.raters()[j],
                                       tensor.categories()[c]});
    return records;
}

/// Random mutually exclusive data: every rater picks exactly one category
/// per subject (the Fleiss regime).
inline AgreementTable random_exclusive_table(std::mt19937_64& rng, std::size_t max_subjects = 20,
                                             std::size_t max_raters = 6,
                                             std::size_t max_categories = 8) {
    std::uniform_int_distribution<std::size_t> subj(2, max_subjects);
    std::uniform_int_distribution<std::size_t> rate(2, max_raters);
    std::uniform_int_distribution<std::size_t> cats(2, max_categories);
    const std::size_t I = subj(rng), J = rate(rng), C = cats(rng);

    AgreementTable table;
    table.subjects = I;
    table.categories = C;
    table.counts.assign(I * C, 0);
    std::uniform_int_distribution<std::size_t> category(0, C - 1);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) ++table.counts[i * C + category(rng)];
    table.rater_counts.kind = RaterCounts::Kind::Fixed;
    table.rater_counts.fixed = static_cast<int>(J);
    return table;
}

} // namespace kappax::test
