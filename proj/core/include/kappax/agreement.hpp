#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kappax/error.hpp"

namespace kappax {

/// One selection event: rater assigned category to subject.
/// Absence of a record means the category was not selected.
struct RatingRecord {
    std::string subject;
    std::string rater;
    std::string category;

    bool operator==(const RatingRecord&) const = default;
};

/// Parses `subject,rater,category` CSV content (RFC 4180 quoting).
/// Records come back in file order; duplicate triples are rejected.
std::vector<RatingRecord> parse_ratings(std::string_view text);

/// Parses `subject,rater` CSV content into unique participation pairs.
std::vector<std::pair<std::string, std::string>> parse_roster(std::string_view text);

/// Parses a declared category list: one id per line, blank lines skipped.
std::vector<std::string> parse_categories(std::string_view text);

/// Binary classification data x_ijc plus the participation mask, with
/// deterministic subject/rater ordering (lexicographic) and category
/// ordering (declared list if given, else lexicographic).
class ClassificationTensor {
public:
    ClassificationTensor(std::vector<std::string> subjects,
                         std::vector<std::string> raters,
                         std::vector<std::string> categories,
                         std::vector<std::uint8_t> selections,
                         std::vector<std::uint8_t> participation);

    std::size_t subject_count() const noexcept { return subjects_.size(); }
    std::size_t rater_count() const noexcept { return raters_.size(); }
    std::size_t category_count() const noexcept { return categories_.size(); }

    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    const std::vector<std::string>& raters() const noexcept { return raters_; }
    const std::vector<std::string>& categories() const noexcept { return categories_; }

    bool selected(std::size_t i, std::size_t j, std::size_t c) const {
        return selections_[(i * raters_.size() + j) * categories_.size() + c] != 0;
    }
    bool participates(std::size_t i, std::size_t j) const {
        return participation_[i * raters_.size() + j] != 0;
    }

    /// Number of raters who rated subject i.
    int raters_for_subject(std::size_t i) const;

    std::optional<std::size_t> subject_index(std::string_view id) const;
    std::optional<std::size_t> category_index(std::string_view id) const;

private:
    std::vector<std::string> subjects_;
    std::vector<std::string> raters_;
    std::vector<std::string> categories_;
    std::vector<std::uint8_t> selections_;    // I x J x C
    std::vector<std::uint8_t> participation_; // I x J
};

ClassificationTensor build_tensor(
    const std::vector<RatingRecord>& records,
    const std::optional<std::vector<std::pair<std::string, std::string>>>& roster = std::nullopt,
    const std::optional<std::vector<std::string>>& declared_categories = std::nullopt);

/// How many raters back each count in an AgreementTable.
struct RaterCounts {
    enum class Kind { Fixed, PerSubject, PerCell };
    Kind kind = Kind::Fixed;
    int fixed = 0;                  // Kind::Fixed
    std::vector<int> per_subject;   // Kind::PerSubject, length I
    std::vector<int> per_cell;      // Kind::PerCell, I x C row-major

    /// The applicable rater count for cell (i, c) regardless of kind.
    int at(std::size_t i, std::size_t c, std::size_t categories) const;
};

/// Counts x_ic plus the rater counts they were taken against.
struct AgreementTable {
    std::size_t subjects = 0;
    std::size_t categories = 0;
    std::vector<int> counts; // I x C row-major

    RaterCounts rater_counts;

    int count(std::size_t i, std::size_t c) const { return counts[i * categories + c]; }
};

AgreementTable tally(const ClassificationTensor& tensor);

struct Diagnostic {
    enum class Kind { NeverSelectedCategory, NoRaterPairs, IdleRater };
    Kind kind;
    std::string id;       // category, subject or rater id
    std::string message;
};

/// Non-fatal data quality findings: categories nobody selected, subjects
/// with fewer than two raters, raters that never participated.
std::vector<Diagnostic> validate(const ClassificationTensor& tensor, const AgreementTable& table);

/// Inverse writers, so build_tensor(parse(render(t))) reproduces t.
struct RenderedCsv {
    std::string ratings;
    std::string roster;
    std::string categories;
};
RenderedCsv render_csv(const ClassificationTensor& tensor);

} // namespace kappax
