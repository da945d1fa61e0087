#include "kappax/kappa.hpp"

#include <cmath>
#include <limits>

namespace kappax {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_counts(std::span<const int> x, std::span<const int> s) {
    if (x.size() != s.size())
        fail(ErrorCode::InvalidCounts, "count and availability columns differ in length");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || s[i] < 0)
            fail(ErrorCode::InvalidCounts, "negative count at row " + std::to_string(i));
        if (x[i] > s[i])
            fail(ErrorCode::InvalidCounts,
                 "row " + std::to_string(i) + ": " + std::to_string(x[i]) +
                     " selections exceed " + std::to_string(s[i]) + " opportunities");
    }
}

} // namespace

std::optional<double> po_per_category(std::span<const int> x, std::span<const int> s) {
    check_counts(x, s);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i], si = s[i];
        num += xi * (xi - 1.0) + (si - xi) * (si - xi - 1.0);
        den += si * (si - 1.0);
    }
    if (den <= 0.0) return std::nullopt;
    return num / den;
}

std::optional<double> pe_per_category(std::span<const int> x, std::span<const int> s) {
    check_counts(x, s);
    double sum_x = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum_x += x[i];
        sum_s += s[i];
    }
    if (sum_s <= 0.0) return std::nullopt;
    const double p = sum_x / sum_s;
    return 2.0 * p * p - 2.0 * p + 1.0;
}

std::vector<double> scale_factors(const PossibleMatrix& possible) {
    std::vector<double> phi(possible.categories, 0.0);
    for (std::size_t c = 0; c < possible.categories; ++c) {
        double sum_s = 0.0, sum_j = 0.0;
        for (std::size_t i = 0; i < possible.subjects; ++i) {
            sum_s += possible.possible(i, c);
            sum_j += possible.opportunity(i, c);
        }
        if (sum_j <= 0.0)
            fail(ErrorCode::ZeroOpportunity,
                 "category index " + std::to_string(c) + " has no rater opportunities");
        // Rule-free categories have sum_s == sum_j; keep phi exactly 1 then.
        phi[c] = sum_s == sum_j ? 1.0 : sum_s / sum_j;
    }
    return phi;
}

double kappa_per_category(std::optional<double> po, std::optional<double> pe) {
    if (!po || !pe || *pe == 1.0) return kNaN;
    return (*po - *pe) / (1.0 - *pe);
}

KappaReport aggregate_kappa(std::vector<CategoryAgreement> categories) {
    KappaReport report;
    double num = 0.0, den = 0.0;
    for (auto& cat : categories) {
        cat.kappa = kappa_per_category(cat.po, cat.pe);
        if (cat.po && cat.pe && *cat.pe != 1.0) {
            cat.num_contrib = cat.weight * cat.phi * (*cat.po - *cat.pe);
            cat.den_contrib = cat.weight * cat.phi * (1.0 - *cat.pe);
        } else {
            cat.num_contrib = 0.0;
            cat.den_contrib = 0.0;
        }
        num += cat.num_contrib;
        den += cat.den_contrib;
    }
    if (den <= 0.0)
        fail(ErrorCode::UndefinedKappa,
             "no category contributes chance-corrected agreement (denominator is 0)");
    report.per_category = std::move(categories);
    report.numerator = num;
    report.denominator = den;
    report.overall = num / den;
    report.interpretation = interpret_kappa(*report.overall);
    return report;
}

FleissAgreement fleiss_agreement(const AgreementTable& table) {
    if (table.rater_counts.kind != RaterCounts::Kind::Fixed)
        fail(ErrorCode::NotMutuallyExclusive,
             "a fixed number of raters is required for every subject");
    const int J = table.rater_counts.fixed;
    if (J < 2) fail(ErrorCode::InvalidCounts, "need at least two raters");
    const std::size_t I = table.subjects, C = table.categories;
    for (std::size_t i = 0; i < I; ++i) {
        int row = 0;
        for (std::size_t c = 0; c < C; ++c) row += table.count(i, c);
        if (row != J)
            fail(ErrorCode::NotMutuallyExclusive,
                 "subject row " + std::to_string(i) + " has " + std::to_string(row) +
                     " selections for " + std::to_string(J) + " raters");
    }

    double sum_sq = 0.0;
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t c = 0; c < C; ++c) {
            const double x = table.count(i, c);
            sum_sq += x * x;
        }
    const double ij = static_cast<double>(I) * J;

    FleissAgreement out;
    out.po = (sum_sq - ij) / (ij * (J - 1));
    for (std::size_t c = 0; c < C; ++c) {
        double col = 0.0;
        for (std::size_t i = 0; i < I; ++i) col += table.count(i, c);
        const double p = col / ij;
        out.pe += p * p;
    }
    return out;
}

double fleiss_kappa(const AgreementTable& table) {
    const FleissAgreement agreement = fleiss_agreement(table);
    if (agreement.pe == 1.0) return kNaN;
    return (agreement.po - agreement.pe) / (1.0 - agreement.pe);
}

std::vector<double> score_weights(std::span<const double> scores) {
    double max_abs = 0.0;
    for (double s : scores) max_abs = std::max(max_abs, std::abs(s));
    if (max_abs == 0.0)
        fail(ErrorCode::AllZeroScores, "weights need at least one non-zero score");
    std::vector<double> weights(scores.size());
    for (std::size_t c = 0; c < scores.size(); ++c)
        weights[c] = (std::abs(scores[c]) + max_abs) / (2.0 * max_abs);
    return weights;
}

std::string interpret_kappa(double value) {
    if (std::isnan(value)) return "Undefined";
    if (value < 0.0) return "Poor";
    if (value <= 0.20) return "Slight";
    if (value <= 0.40) return "Fair";
    if (value <= 0.60) return "Moderate";
    if (value <= 0.80) return "Substantial";
    return "Almost Perfect";
}

} // namespace kappax
