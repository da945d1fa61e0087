#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kappax/kappa.hpp"

namespace kappax {

struct BootstrapConfig {
    int replicates = 1000;
    std::uint64_t seed = 0;
    double confidence = 0.95;
    int threads = 1;
};

struct BootstrapResult {
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int replicates_used = 0;
    int replicates_degenerate = 0;
    std::vector<double> replicate_values; // defined replicates, index order
};

/// Per-subject rows of everything the pooled kappa needs, so a resample is
/// just a sum over drawn rows.
struct SubjectRows {
    std::size_t subjects = 0;
    std::size_t categories = 0;
    std::vector<std::string> category_ids;
    std::vector<int> x;       // I x C
    std::vector<int> s;       // I x C
    std::vector<int> j_prime; // I x C
    std::vector<double> weights; // per category
};

/// Kappa of one subject multiset (identity draw gives the point estimate).
std::optional<double> kappa_of_draw(const SubjectRows& rows, std::span<const std::size_t> draw);

/// Cluster bootstrap over subjects: raters and categories stay fixed, whole
/// subject rows are resampled with replacement and the availability counts
/// travel with them. Percentile interval at the requested confidence.
/// Deterministic for a given seed; replicate k draws from a substream
/// derived from seed + k, so thread count never changes the result.
BootstrapResult bootstrap_ci(const SubjectRows& rows, const BootstrapConfig& config);

} // namespace kappax
