#include "kappax/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace kappax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2 || b.size() != n) return std::nullopt;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;
    return cov / std::sqrt(va * vb);
}

// Participating cells of the I x J grid, in row-major grid order.
struct Cell {
    std::size_t subject;
    std::size_t rater;
};

std::vector<Cell> participating_cells(const ClassificationTensor& tensor) {
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        for (std::size_t j = 0; j < tensor.rater_count(); ++j)
            if (tensor.participates(i, j)) cells.push_back({i, j});
    return cells;
}

bool complete_grid(const ClassificationTensor& tensor) {
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        for (std::size_t j = 0; j < tensor.rater_count(); ++j)
            if (!tensor.participates(i, j)) return false;
    return true;
}

std::set<std::string> selection_set(const ClassificationTensor& tensor, std::size_t i,
                                    std::size_t j) {
    std::set<std::string> out;
    for (std::size_t c = 0; c < tensor.category_count(); ++c)
        if (tensor.selected(i, j, c)) out.insert(tensor.categories()[c]);
    return out;
}

std::vector<double> selection_vector(const ClassificationTensor& tensor, std::size_t i,
                                     std::size_t j) {
    std::vector<double> v(tensor.category_count(), 0.0);
    for (std::size_t c = 0; c < tensor.category_count(); ++c)
        if (tensor.selected(i, j, c)) v[c] = 1.0;
    return v;
}

void require_two_raters(const ClassificationTensor& tensor) {
    if (tensor.rater_count() != 2)
        fail(ErrorCode::NotTwoRaters, "method needs exactly 2 raters, got " +
                                          std::to_string(tensor.rater_count()));
}

// Per-category 2x2 columns over subjects both raters saw.
std::pair<std::vector<int>, std::vector<int>> cohen_columns(const ClassificationTensor& tensor,
                                                            std::size_t c) {
    std::vector<int> a, b;
    for (std::size_t i = 0; i < tensor.subject_count(); ++i) {
        if (!tensor.participates(i, 0) || !tensor.participates(i, 1)) continue;
        a.push_back(tensor.selected(i, 0, c) ? 1 : 0);
        b.push_back(tensor.selected(i, 1, c) ? 1 : 0);
    }
    return {std::move(a), std::move(b)};
}

} // namespace

PairwiseKappa cohen_kappa(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        fail(ErrorCode::InvalidCounts, "the two raters cover different subjects");
    if (a.empty()) fail(ErrorCode::NoValidPairs, "no jointly rated subjects");
    const double n = static_cast<double>(a.size());
    double agree = 0.0, pa = 0.0, pb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] != 0) == (b[i] != 0)) agree += 1.0;
        if (a[i] != 0) pa += 1.0;
        if (b[i] != 0) pb += 1.0;
    }
    pa /= n;
    pb /= n;
    PairwiseKappa result;
    result.po = agree / n;
    result.pe = pa * pb + (1.0 - pa) * (1.0 - pb);
    result.kappa = result.pe == 1.0 ? kNaN : (result.po - result.pe) / (1.0 - result.pe);
    return result;
}

std::optional<double> averaged_cohen(const ClassificationTensor& tensor) {
    require_two_raters(tensor);
    double sum = 0.0;
    for (std::size_t c = 0; c < tensor.category_count(); ++c) {
        auto [a, b] = cohen_columns(tensor, c);
        const double kappa = cohen_kappa(a, b).kappa;
        if (std::isnan(kappa)) return std::nullopt;
        sum += kappa;
    }
    return sum / static_cast<double>(tensor.category_count());
}

PairwiseKappa pooled_cohen(const ClassificationTensor& tensor) {
    require_two_raters(tensor);
    double sum_po = 0.0, sum_pe = 0.0;
    for (std::size_t c = 0; c < tensor.category_count(); ++c) {
        auto [a, b] = cohen_columns(tensor, c);
        const PairwiseKappa cat = cohen_kappa(a, b);
        sum_po += cat.po;
        sum_pe += cat.pe;
    }
    const double count = static_cast<double>(tensor.category_count());
    PairwiseKappa result;
    result.po = sum_po / count;
    result.pe = sum_pe / count;
    if (result.pe == 1.0)
        fail(ErrorCode::UndefinedKappa, "mean chance agreement is 1, nothing to correct");
    result.kappa = (result.po - result.pe) / (1.0 - result.pe);
    return result;
}

std::optional<double> jaccard_overlap(const std::set<std::string>& a,
                                      const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return std::nullopt;
    std::size_t inter = 0;
    for (const auto& id : a) inter += b.count(id);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::pair<int, int> cell_to_subject_rater(long n, int raters) {
    if (raters < 1) fail(ErrorCode::OutOfRange, "rater count must be positive");
    if (n < 1) fail(ErrorCode::OutOfRange, "cell index " + std::to_string(n) + " is not 1-based");
    const long subject = (n + raters - 1) / raters; // ceil(n / J)
    const long rater = (n - 1) % raters + 1;
    return {static_cast<int>(subject), static_cast<int>(rater)};
}

PairwiseKappa mezzich_kappa(const ClassificationTensor& tensor) {
    const std::size_t I = tensor.subject_count();
    const std::size_t J = tensor.rater_count();

    std::vector<std::vector<std::set<std::string>>> sets(I);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            if (tensor.participates(i, j)) sets[i].push_back(selection_set(tensor, i, j));

    // Overlap is incalculable when either selection set is empty.
    auto overlap = [](const std::set<std::string>& a,
                      const std::set<std::string>& b) -> std::optional<double> {
        if (a.empty() || b.empty()) return std::nullopt;
        return jaccard_overlap(a, b);
    };

    double po_sum = 0.0;
    std::size_t po_subjects = 0;
    for (std::size_t i = 0; i < I; ++i) {
        double subject_sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < sets[i].size(); ++a)
            for (std::size_t b = a + 1; b < sets[i].size(); ++b)
                if (auto v = overlap(sets[i][a], sets[i][b])) {
                    subject_sum += *v;
                    ++pairs;
                }
        if (pairs > 0) {
            po_sum += subject_sum / static_cast<double>(pairs);
            ++po_subjects;
        }
    }
    if (po_subjects == 0)
        fail(ErrorCode::NoValidPairs, "no subject offers a calculable rater pair");

    double pe_sum = 0.0;
    std::size_t pe_pairs = 0;
    if (complete_grid(tensor)) {
        // Complete grid: walk all index pairs of the numbered I x J grid.
        const long total = static_cast<long>(I) * static_cast<long>(J);
        for (long n = 1; n <= total; ++n) {
            auto [si, ri] = cell_to_subject_rater(n, static_cast<int>(J));
            const auto& first = sets[si - 1][ri - 1];
            for (long m = n + 1; m <= total; ++m) {
                auto [sj, rj] = cell_to_subject_rater(m, static_cast<int>(J));
                if (auto v = overlap(first, sets[sj - 1][rj - 1])) {
                    pe_sum += *v;
                    ++pe_pairs;
                }
            }
        }
    } else {
        std::vector<const std::set<std::string>*> cells;
        for (const auto& row : sets)
            for (const auto& s : row) cells.push_back(&s);
        for (std::size_t a = 0; a < cells.size(); ++a)
            for (std::size_t b = a + 1; b < cells.size(); ++b)
                if (auto v = overlap(*cells[a], *cells[b])) {
                    pe_sum += *v;
                    ++pe_pairs;
                }
    }
    if (pe_pairs == 0) fail(ErrorCode::NoValidPairs, "no calculable cell pair for Pe");

    PairwiseKappa result;
    result.po = po_sum / static_cast<double>(po_subjects);
    result.pe = pe_sum / static_cast<double>(pe_pairs);
    result.kappa =
        result.pe == 1.0 ? kNaN : (result.po - result.pe) / (1.0 - result.pe);
    return result;
}

double icc_subject(const std::vector<std::vector<double>>& vectors) {
    const std::size_t J = vectors.size();
    if (J < 2) fail(ErrorCode::InvalidCounts, "intraclass correlation needs at least 2 vectors");
    const std::size_t C = vectors.front().size();
    for (const auto& v : vectors)
        if (v.size() != C) fail(ErrorCode::InvalidCounts, "vectors differ in length");
    if (C < 2) fail(ErrorCode::InvalidCounts, "vectors need at least 2 categories");

    bool identical = true;
    for (std::size_t j = 1; j < J && identical; ++j) identical = vectors[j] == vectors[0];
    if (identical) return 1.0;

    double grand = 0.0;
    for (const auto& v : vectors)
        for (double value : v) grand += value;
    grand /= static_cast<double>(J * C);

    double ssb = 0.0, ssw = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        double mean = 0.0;
        for (const auto& v : vectors) mean += v[c];
        mean /= static_cast<double>(J);
        ssb += (mean - grand) * (mean - grand);
        for (const auto& v : vectors) ssw += (v[c] - mean) * (v[c] - mean);
    }
    ssb *= static_cast<double>(J);
    const double msb = ssb / static_cast<double>(C - 1);
    const double msw = ssw / static_cast<double>(C * (J - 1));
    const double den = msb + static_cast<double>(J - 1) * msw;
    if (den == 0.0) return 1.0;
    return (msb - msw) / den;
}

PairwiseKappa icc_kappa(const ClassificationTensor& tensor) {
    const std::size_t I = tensor.subject_count();
    const std::size_t J = tensor.rater_count();

    double po_sum = 0.0;
    std::size_t po_subjects = 0;
    std::vector<std::vector<double>> all;
    for (std::size_t i = 0; i < I; ++i) {
        std::vector<std::vector<double>> vectors;
        for (std::size_t j = 0; j < J; ++j)
            if (tensor.participates(i, j)) vectors.push_back(selection_vector(tensor, i, j));
        for (const auto& v : vectors) all.push_back(v);
        if (vectors.size() >= 2) {
            po_sum += icc_subject(vectors);
            ++po_subjects;
        }
    }
    if (po_subjects == 0)
        fail(ErrorCode::NoValidPairs, "no subject was rated by at least two raters");

    double pe_sum = 0.0;
    std::size_t pe_pairs = 0;
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (auto r = correlation(all[a], all[b])) {
                pe_sum += *r;
                ++pe_pairs;
            }

    PairwiseKappa result;
    result.po = po_sum / static_cast<double>(po_subjects);
    result.pe = pe_pairs > 0 ? pe_sum / static_cast<double>(pe_pairs) : kNaN;
    result.kappa = (std::isnan(result.pe) || result.pe == 1.0)
                       ? kNaN
                       : (result.po - result.pe) / (1.0 - result.pe);
    return result;
}

RankVector rank_vector(const std::vector<std::vector<std::string>>& ordered_groups,
                       const std::vector<std::string>& categories) {
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < categories.size(); ++c) index[categories[c]] = c;

    std::size_t k = 0;
    for (const auto& group : ordered_groups) k += group.size();
    if (k > categories.size())
        fail(ErrorCode::DuplicateCategory, "more ranked entries than categories");

    const double unchosen =
        (static_cast<double>(categories.size()) + static_cast<double>(k) + 1.0) / 2.0;
    RankVector out;
    out.ranks.assign(categories.size(), unchosen);

    std::set<std::string> seen;
    std::size_t position = 1;
    for (const auto& group : ordered_groups) {
        if (group.empty()) continue;
        // Tie group occupying positions p .. p+g-1 shares their average.
        const double rank =
            static_cast<double>(position) + (static_cast<double>(group.size()) - 1.0) / 2.0;
        for (const auto& id : group) {
            auto it = index.find(id);
            if (it == index.end())
                fail(ErrorCode::UnknownCategory, "ranked category '" + id + "' is not declared");
            if (!seen.insert(id).second)
                fail(ErrorCode::DuplicateCategory, "category '" + id + "' ranked twice");
            out.ranks[it->second] = rank;
        }
        position += group.size();
    }
    return out;
}

std::optional<double> spearman_tied(const RankVector& a, const RankVector& b) {
    return correlation(a.ranks, b.ranks);
}

std::vector<RankingRecord> parse_rankings(std::string_view text) {
    // Reuse the ratings grammar for the shared columns, then parse the group.
    // (kept separate from parse_ratings: four columns, integer last field)
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::EmptyFile, "rankings file has no content");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "\xef\xbb\xbfsubject,rater,category,rank_group") line = "subject,rater,category,rank_group";
    if (line != "subject,rater,category,rank_group")
        fail(ErrorCode::MalformedRow, "expected header 'subject,rater,category,rank_group'");

    std::vector<RankingRecord> records;
    std::set<std::array<std::string, 3>> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 4)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(lineno) + ": expected 4 fields");
        if (fields[0].empty() || fields[1].empty() || fields[2].empty())
            fail(ErrorCode::MalformedRow, "line " + std::to_string(lineno) + ": empty id");
        int group = 0;
        try {
            std::size_t used = 0;
            group = std::stoi(fields[3], &used);
            if (used != fields[3].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(lineno) + ": rank_group '" + fields[3] +
                     "' is not an integer");
        }
        if (group < 1)
            fail(ErrorCode::MalformedRow,
                 "line " + std::to_string(lineno) + ": rank_group must be 1-based");
        if (!seen.insert({fields[0], fields[1], fields[2]}).second)
            fail(ErrorCode::DuplicateRecord,
                 "line " + std::to_string(lineno) + ": (" + fields[0] + ", " + fields[1] + ", " +
                     fields[2] + ") ranked twice");
        records.push_back({fields[0], fields[1], fields[2], group});
    }
    if (records.empty()) fail(ErrorCode::EmptyFile, "rankings file has no data rows");
    return records;
}

PairwiseKappa rank_kappa(const std::vector<RankingRecord>& rankings,
                         const std::vector<std::string>& categories) {
    // (subject, rater) -> rank_group -> categories in record order
    std::map<std::string, std::map<std::string, std::map<int, std::vector<std::string>>>> cells;
    for (const auto& r : rankings) cells[r.subject][r.rater][r.rank_group].push_back(r.category);

    std::vector<std::vector<RankVector>> by_subject;
    std::vector<const RankVector*> grid;
    for (const auto& [subject, raters] : cells) {
        std::vector<RankVector> vectors;
        for (const auto& [rater, groups] : raters) {
            std::vector<std::vector<std::string>> ordered;
            for (const auto& [group, ids] : groups) ordered.push_back(ids);
            vectors.push_back(rank_vector(ordered, categories));
        }
        by_subject.push_back(std::move(vectors));
    }
    for (const auto& vectors : by_subject)
        for (const auto& v : vectors) grid.push_back(&v);

    double po_sum = 0.0;
    std::size_t po_subjects = 0;
    for (const auto& vectors : by_subject) {
        double subject_sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < vectors.size(); ++a)
            for (std::size_t b = a + 1; b < vectors.size(); ++b)
                if (auto r = spearman_tied(vectors[a], vectors[b])) {
                    subject_sum += *r;
                    ++pairs;
                }
        if (pairs > 0) {
            po_sum += subject_sum / static_cast<double>(pairs);
            ++po_subjects;
        }
    }
    if (po_subjects == 0)
        fail(ErrorCode::NoValidPairs, "no subject offers a calculable ranking pair");

    double pe_sum = 0.0;
    std::size_t pe_pairs = 0;
    for (std::size_t a = 0; a < grid.size(); ++a)
        for (std::size_t b = a + 1; b < grid.size(); ++b)
            if (auto r = spearman_tied(*grid[a], *grid[b])) {
                pe_sum += *r;
                ++pe_pairs;
            }
    if (pe_pairs == 0) fail(ErrorCode::NoValidPairs, "no calculable cell pair for Pe");

    PairwiseKappa result;
    result.po = po_sum / static_cast<double>(po_subjects);
    result.pe = pe_sum / static_cast<double>(pe_pairs);
    result.kappa =
        result.pe == 1.0 ? kNaN : (result.po - result.pe) / (1.0 - result.pe);
    return result;
}

std::vector<RankingRecord> rankings_from_tensor(const ClassificationTensor& tensor) {
    std::vector<RankingRecord> records;
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        for (std::size_t j = 0; j < tensor.rater_count(); ++j) {
            if (!tensor.participates(i, j)) continue;
            for (std::size_t c = 0; c < tensor.category_count(); ++c)
                if (tensor.selected(i, j, c))
                    records.push_back(
                        {tensor.subjects()[i], tensor.raters()[j], tensor.categories()[c], 1});
        }
    return records;
}

} // namespace kappax
