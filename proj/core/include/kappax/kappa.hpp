#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kappax/agreement.hpp"
#include "kappax/hierarchy.hpp"

namespace kappax {

/// Observed agreement for one category: pooled proportion of agreeing rater
/// pairs over all available pairs,
///   Po = sum_i [x_i(x_i-1) + (s_i-x_i)(s_i-x_i-1)] / sum_i s_i(s_i-1).
/// Empty optional when no subject offers a rater pair.
std::optional<double> po_per_category(std::span<const int> x, std::span<const int> s);

/// Chance agreement for one category: with p = sum x / sum s,
///   Pe = 2p^2 - 2p + 1.
/// Empty optional when sum s is zero.
std::optional<double> pe_per_category(std::span<const int> x, std::span<const int> s);

/// phi_c = sum_i s_ic / sum_i j_ic for every category.
std::vector<double> scale_factors(const PossibleMatrix& possible);

/// (po - pe) / (1 - pe); NaN when pe == 1 or either input is undefined.
double kappa_per_category(std::optional<double> po, std::optional<double> pe);

struct CategoryAgreement {
    std::string id;
    std::optional<double> po;
    std::optional<double> pe;
    double kappa = 0.0; // NaN when undefined
    double phi = 1.0;
    double weight = 1.0;
    double num_contrib = 0.0; // w * phi * (po - pe)
    double den_contrib = 0.0; // w * phi * (1 - pe)
};

struct KappaReport {
    std::vector<CategoryAgreement> per_category;
    double numerator = 0.0;
    double denominator = 0.0;
    std::optional<double> overall;
    // Whole-method observed/chance agreement, for methods built on a single
    // (Po, Pe) pair rather than per-category pooling.
    std::optional<double> po;
    std::optional<double> pe;
    std::optional<std::string> interpretation;
};

/// Pools per-category agreement into one statistic:
///   kappa = sum_c w_c phi_c (Po_c - Pe_c) / sum_c w_c phi_c (1 - Pe_c).
/// Categories with undefined Po/Pe (or Pe = 1) contribute zero to both sums.
/// Expects `po`, `pe`, `phi` and `weight` filled in; computes the rest.
KappaReport aggregate_kappa(std::vector<CategoryAgreement> categories);

/// Classic fixed-rater kappa for mutually exclusive categories; requires
/// sum_c x_ic == J on every row. NaN when chance agreement is 1.
double fleiss_kappa(const AgreementTable& table);

struct FleissAgreement {
    double po = 0.0;
    double pe = 0.0;
};

/// The observed/chance pair behind fleiss_kappa.
FleissAgreement fleiss_agreement(const AgreementTable& table);

/// w_c = (|score_c| + max|score|) / (2 max|score|), range (0.5, 1].
std::vector<double> score_weights(std::span<const double> scores);

/// Landis-Koch verbal band for a kappa value.
std::string interpret_kappa(double value);

} // namespace kappax
