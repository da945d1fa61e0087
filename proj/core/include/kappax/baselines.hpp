#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kappax/agreement.hpp"

namespace kappax {

/// Po, Pe and kappa of a method built on one observed/chance pair.
struct PairwiseKappa {
    double po = 0.0;
    double pe = 0.0;
    double kappa = 0.0; // NaN when pe == 1
};

/// Two-rater Cohen's kappa for a single category's select/not decisions.
/// `a` and `b` are the per-subject selections of the two raters.
PairwiseKappa cohen_kappa(std::span<const int> a, std::span<const int> b);

/// Mean of per-category Cohen's kappas; empty when any category's kappa is
/// undefined. Requires exactly two raters with full participation.
std::optional<double> averaged_cohen(const ClassificationTensor& tensor);

/// Pooled Cohen: per-category Po and Pe averaged first, then corrected once.
PairwiseKappa pooled_cohen(const ClassificationTensor& tensor);

/// |a n b| / |a u b|; empty when both sets are empty.
std::optional<double> jaccard_overlap(const std::set<std::string>& a,
                                      const std::set<std::string>& b);

/// Maps a 1-based cell index of a row-major I x J grid to 1-based
/// (subject, rater): subject = ceil(n / J), rater = (n - 1) mod J + 1.
std::pair<int, int> cell_to_subject_rater(long n, int raters);

/// Proportional-overlap kappa: Po averages the mean pairwise overlap within
/// each subject, Pe averages the overlap over all cross-grid cell pairs.
/// Pairs involving an empty selection set are incalculable and excluded
/// everywhere; subjects with no calculable pair drop out of Po.
PairwiseKappa mezzich_kappa(const ClassificationTensor& tensor);

/// One-way ANOVA intraclass correlation among a subject's classification
/// vectors (categories as groups, raters as replicates):
///   rho = (MSB - MSW) / (MSB + (J-1) MSW).
/// Identical vectors give 1 by definition, degenerate constant case included.
double icc_subject(const std::vector<std::vector<double>>& vectors);

/// Chance-corrected intraclass correlation kappa. Po is the mean per-subject
/// icc_subject; Pe is the mean correlation between all pairs of
/// classification vectors across the whole grid (constant vectors make a
/// pair incalculable and excluded).
PairwiseKappa icc_kappa(const ClassificationTensor& tensor);

struct RankVector {
    std::vector<double> ranks; // one per category, in category order
};

/// Builds a tie-averaged rank vector from ordered tie groups of selected
/// categories; the C-k unchosen categories share rank (C+k+1)/2.
RankVector rank_vector(const std::vector<std::vector<std::string>>& ordered_groups,
                       const std::vector<std::string>& categories);

/// Spearman correlation of two rank vectors in its tie-robust form
/// (product-moment correlation of the rank values). Empty when either
/// vector is constant.
std::optional<double> spearman_tied(const RankVector& a, const RankVector& b);

/// One row of `rankings.csv`: rank_group is the 1-based position of the
/// category in the rater's ordered list; ties share a group.
struct RankingRecord {
    std::string subject;
    std::string rater;
    std::string category;
    int rank_group = 0;
};

std::vector<RankingRecord> parse_rankings(std::string_view text);

/// Chance-corrected rank-correlation kappa over per-(subject, rater)
/// rankings. Po averages the mean pairwise Spearman within each subject,
/// Pe the Spearman over all cross-grid cell pairs; incalculable pairs
/// (constant vectors) are excluded from both.
PairwiseKappa rank_kappa(const std::vector<RankingRecord>& rankings,
                         const std::vector<std::string>& categories);

/// Tied reading of plain selection data: every selected category shares rank
/// group 1. This is how unordered multi-label data enters rank_kappa.
std::vector<RankingRecord> rankings_from_tensor(const ClassificationTensor& tensor);

} // namespace kappax
