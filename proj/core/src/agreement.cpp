#include "kappax/agreement.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace kappax {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::DuplicateRecord: return "DuplicateRecord";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::DuplicatePair: return "DuplicatePair";
        case ErrorCode::RecordOutsideRoster: return "RecordOutsideRoster";
        case ErrorCode::UnknownCategory: return "UnknownCategory";
        case ErrorCode::MalformedPredicate: return "MalformedPredicate";
        case ErrorCode::UnknownCategoryReference: return "UnknownCategoryReference";
        case ErrorCode::CyclicDependency: return "CyclicDependency";
        case ErrorCode::HierarchyViolation: return "HierarchyViolation";
        case ErrorCode::InvalidCounts: return "InvalidCounts";
        case ErrorCode::ZeroOpportunity: return "ZeroOpportunity";
        case ErrorCode::NotMutuallyExclusive: return "NotMutuallyExclusive";
        case ErrorCode::AllZeroScores: return "AllZeroScores";
        case ErrorCode::NotTwoRaters: return "NotTwoRaters";
        case ErrorCode::UndefinedKappa: return "UndefinedKappa";
        case ErrorCode::NoValidPairs: return "NoValidPairs";
        case ErrorCode::TooFewReplicates: return "TooFewReplicates";
        case ErrorCode::AllReplicatesDegenerate: return "AllReplicatesDegenerate";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::DuplicateCategory: return "DuplicateCategory";
        case ErrorCode::MalformedConfig: return "MalformedConfig";
        case ErrorCode::IoError: return "IoError";
    }
    return "Error";
}

namespace {

// RFC 4180 row splitter. Returns false at end of input.
bool next_row(std::string_view text, std::size_t& pos, std::vector<std::string>& fields) {
    fields.clear();
    if (pos >= text.size()) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    while (pos < text.size()) {
        char ch = text[pos];
        if (quoted) {
            if (ch == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field.push_back('"');
                    pos += 2;
                } else {
                    quoted = false;
                    ++pos;
                }
            } else {
                field.push_back(ch);
                ++pos;
            }
            continue;
        }
        if (ch == '"' && field.empty()) {
            quoted = true;
            any = true;
            ++pos;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
            any = true;
            ++pos;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            break;
        } else {
            field.push_back(ch);
            any = true;
            ++pos;
        }
    }
    if (quoted) fail(ErrorCode::MalformedRow, "unterminated quoted field");
    if (!any && field.empty() && fields.empty()) return next_row(text, pos, fields);
    fields.push_back(std::move(field));
    return true;
}

std::string_view strip_bom(std::string_view text) {
    if (text.substr(0, 3) == "\xef\xbb\xbf") return text.substr(3);
    return text;
}

void expect_header(const std::vector<std::string>& fields,
                   const std::vector<std::string>& expected) {
    if (fields != expected) {
        std::string want;
        for (const auto& f : expected) {
            if (!want.empty()) want += ',';
            want += f;
        }
        fail(ErrorCode::MalformedRow, "expected header '" + want + "'");
    }
}

bool plain_id(std::string_view id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char ch) {
        return std::isalnum(ch) || ch == '_' || ch == '.' || ch == '-';
    });
}

std::string csv_field(const std::string& id) {
    if (plain_id(id)) return id;
    std::string out = "\"";
    for (char ch : id) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += '"';
    return out;
}

} // namespace

std::vector<RatingRecord> parse_ratings(std::string_view text) {
    text = strip_bom(text);
    std::size_t pos = 0;
    std::vector<std::string> fields;
    if (!next_row(text, pos, fields)) fail(ErrorCode::EmptyFile, "ratings file has no content");
    expect_header(fields, {"subject", "rater", "category"});

    std::vector<RatingRecord> records;
    std::set<std::array<std::string, 3>> seen;
    std::size_t line = 1;
    while (next_row(text, pos, fields)) {
        ++line;
        if (fields.size() != 3)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(line) + ": expected 3 fields, got " +
                     std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty() || fields[2].empty())
            fail(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": empty id");
        if (!seen.insert({fields[0], fields[1], fields[2]}).second)
            fail(ErrorCode::DuplicateRecord,
                 "line " + std::to_string(line) + ": (" + fields[0] + ", " + fields[1] + ", " +
                     fields[2] + ") appears twice");
        records.push_back({fields[0], fields[1], fields[2]});
    }
    if (records.empty()) fail(ErrorCode::EmptyFile, "ratings file has no data rows");
    return records;
}

std::vector<std::pair<std::string, std::string>> parse_roster(std::string_view text) {
    text = strip_bom(text);
    std::size_t pos = 0;
    std::vector<std::string> fields;
    if (!next_row(text, pos, fields)) fail(ErrorCode::EmptyFile, "roster file has no content");
    expect_header(fields, {"subject", "rater"});

    std::vector<std::pair<std::string, std::string>> pairs;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t line = 1;
    while (next_row(text, pos, fields)) {
        ++line;
        if (fields.size() != 2)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(line) + ": expected 2 fields, got " +
                     std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            fail(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": empty id");
        std::pair<std::string, std::string> pair{fields[0], fields[1]};
        if (!seen.insert(pair).second)
            fail(ErrorCode::DuplicatePair,
                 "line " + std::to_string(line) + ": (" + pair.first + ", " + pair.second +
                     ") appears twice");
        pairs.push_back(std::move(pair));
    }
    if (pairs.empty()) fail(ErrorCode::EmptyFile, "roster file has no data rows");
    return pairs;
}

std::vector<std::string> parse_categories(std::string_view text) {
    text = strip_bom(text);
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::string id = line.substr(start);
        if (!seen.insert(id).second)
            fail(ErrorCode::DuplicateCategory, "category '" + id + "' declared twice");
        out.push_back(std::move(id));
    }
    if (out.empty()) fail(ErrorCode::EmptyFile, "category file has no entries");
    return out;
}

ClassificationTensor::ClassificationTensor(std::vector<std::string> subjects,
                                           std::vector<std::string> raters,
                                           std::vector<std::string> categories,
                                           std::vector<std::uint8_t> selections,
                                           std::vector<std::uint8_t> participation)
    : subjects_(std::move(subjects)),
      raters_(std::move(raters)),
      categories_(std::move(categories)),
      selections_(std::move(selections)),
      participation_(std::move(participation)) {
    if (subjects_.empty() || categories_.empty())
        fail(ErrorCode::InvalidCounts, "need at least one subject and one category");
    if (raters_.size() < 2)
        fail(ErrorCode::InvalidCounts, "need at least two raters, got " +
                                           std::to_string(raters_.size()));
    for (std::size_t i = 0; i < subjects_.size(); ++i)
        for (std::size_t j = 0; j < raters_.size(); ++j)
            for (std::size_t c = 0; c < categories_.size(); ++c)
                if (selected(i, j, c) && !participates(i, j))
                    fail(ErrorCode::RecordOutsideRoster,
                         "selection by non-participating rater " + raters_[j] + " on subject " +
                             subjects_[i]);
}

int ClassificationTensor::raters_for_subject(std::size_t i) const {
    int n = 0;
    for (std::size_t j = 0; j < raters_.size(); ++j)
        if (participates(i, j)) ++n;
    return n;
}

std::optional<std::size_t> ClassificationTensor::subject_index(std::string_view id) const {
    auto it = std::find(subjects_.begin(), subjects_.end(), id);
    if (it == subjects_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - subjects_.begin());
}

std::optional<std::size_t> ClassificationTensor::category_index(std::string_view id) const {
    auto it = std::find(categories_.begin(), categories_.end(), id);
    if (it == categories_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - categories_.begin());
}

ClassificationTensor build_tensor(
    const std::vector<RatingRecord>& records,
    const std::optional<std::vector<std::pair<std::string, std::string>>>& roster,
    const std::optional<std::vector<std::string>>& declared_categories) {
    std::set<std::string> subject_set, rater_set;
    for (const auto& r : records) {
        subject_set.insert(r.subject);
        rater_set.insert(r.rater);
    }
    if (roster) {
        for (const auto& [s, t] : *roster) {
            subject_set.insert(s);
            rater_set.insert(t);
        }
    }

    std::vector<std::string> subjects(subject_set.begin(), subject_set.end());
    std::vector<std::string> raters(rater_set.begin(), rater_set.end());

    std::vector<std::string> categories;
    if (declared_categories) {
        categories = *declared_categories;
        std::set<std::string> declared(categories.begin(), categories.end());
        if (declared.size() != categories.size())
            fail(ErrorCode::DuplicateCategory, "declared category list has duplicates");
        for (const auto& r : records)
            if (!declared.count(r.category))
                fail(ErrorCode::UnknownCategory,
                     "category '" + r.category + "' not in the declared list");
    } else {
        std::set<std::string> cat_set;
        for (const auto& r : records) cat_set.insert(r.category);
        categories.assign(cat_set.begin(), cat_set.end());
    }

    auto index_of = [](const std::vector<std::string>& ids, const std::string& id) {
        return static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    // categories may be in declared (non-sorted) order
    std::map<std::string, std::size_t> cat_index;
    for (std::size_t c = 0; c < categories.size(); ++c) cat_index[categories[c]] = c;

    const std::size_t I = subjects.size(), J = raters.size(), C = categories.size();
    std::vector<std::uint8_t> participation(I * J, 0);
    if (roster) {
        for (const auto& [s, t] : *roster)
            participation[index_of(subjects, s) * J + index_of(raters, t)] = 1;
    } else {
        std::fill(participation.begin(), participation.end(), 1);
    }

    std::vector<std::uint8_t> selections(I * J * C, 0);
    for (const auto& r : records) {
        std::size_t i = index_of(subjects, r.subject);
        std::size_t j = index_of(raters, r.rater);
        if (!participation[i * J + j])
            fail(ErrorCode::RecordOutsideRoster,
                 "(" + r.subject + ", " + r.rater + ") is not in the roster");
        selections[(i * J + j) * C + cat_index.at(r.category)] = 1;
    }

    return ClassificationTensor(std::move(subjects), std::move(raters), std::move(categories),
                                std::move(selections), std::move(participation));
}

int RaterCounts::at(std::size_t i, std::size_t c, std::size_t categories) const {
    switch (kind) {
        case Kind::Fixed: return fixed;
        case Kind::PerSubject: return per_subject[i];
        case Kind::PerCell: return per_cell[i * categories + c];
    }
    return 0;
}

AgreementTable tally(const ClassificationTensor& tensor) {
    const std::size_t I = tensor.subject_count();
    const std::size_t J = tensor.rater_count();
    const std::size_t C = tensor.category_count();

    AgreementTable table;
    table.subjects = I;
    table.categories = C;
    table.counts.assign(I * C, 0);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) {
            if (!tensor.participates(i, j)) continue;
            for (std::size_t c = 0; c < C; ++c)
                if (tensor.selected(i, j, c)) ++table.counts[i * C + c];
        }

    std::vector<int> per_subject(I, 0);
    bool complete = true;
    for (std::size_t i = 0; i < I; ++i) {
        per_subject[i] = tensor.raters_for_subject(i);
        if (per_subject[i] != static_cast<int>(J)) complete = false;
    }
    if (complete) {
        table.rater_counts.kind = RaterCounts::Kind::Fixed;
        table.rater_counts.fixed = static_cast<int>(J);
    } else {
        table.rater_counts.kind = RaterCounts::Kind::PerSubject;
        table.rater_counts.per_subject = std::move(per_subject);
    }
    return table;
}

std::vector<Diagnostic> validate(const ClassificationTensor& tensor, const AgreementTable& table) {
    std::vector<Diagnostic> out;
    const std::size_t I = tensor.subject_count();
    const std::size_t J = tensor.rater_count();
    const std::size_t C = tensor.category_count();

    for (std::size_t c = 0; c < C; ++c) {
        long total = 0;
        for (std::size_t i = 0; i < I; ++i) total += table.count(i, c);
        if (total == 0)
            out.push_back({Diagnostic::Kind::NeverSelectedCategory, tensor.categories()[c],
                           "category '" + tensor.categories()[c] + "' was never selected"});
    }
    for (std::size_t i = 0; i < I; ++i) {
        if (tensor.raters_for_subject(i) < 2)
            out.push_back({Diagnostic::Kind::NoRaterPairs, tensor.subjects()[i],
                           "subject '" + tensor.subjects()[i] +
                               "' has fewer than two raters and contributes no rater pairs"});
    }
    for (std::size_t j = 0; j < J; ++j) {
        bool any = false;
        for (std::size_t i = 0; i < I && !any; ++i) any = tensor.participates(i, j);
        if (!any)
            out.push_back({Diagnostic::Kind::IdleRater, tensor.raters()[j],
                           "rater '" + tensor.raters()[j] + "' never participated"});
    }
    return out;
}

RenderedCsv render_csv(const ClassificationTensor& tensor) {
    RenderedCsv out;
    out.ratings = "subject,rater,category\n";
    out.roster = "subject,rater\n";
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        for (std::size_t j = 0; j < tensor.rater_count(); ++j) {
            if (!tensor.participates(i, j)) continue;
            out.roster += csv_field(tensor.subjects()[i]) + ',' +
                          csv_field(tensor.raters()[j]) + '\n';
            for (std::size_t c = 0; c < tensor.category_count(); ++c)
                if (tensor.selected(i, j, c))
                    out.ratings += csv_field(tensor.subjects()[i]) + ',' +
                                   csv_field(tensor.raters()[j]) + ',' +
                                   csv_field(tensor.categories()[c]) + '\n';
        }
    for (const auto& c : tensor.categories()) out.categories += c + '\n';
    return out;
}

} // namespace kappax
