#pragma once

#include <map>
#include <optional>
#include <string>

#include "kappax/bootstrap.hpp"
#include "kappax/kappa.hpp"

namespace kappax {

enum class Method {
    Generalized,
    Fleiss,
    CohenAveraged,
    CohenPooled,
    Mezzich,
    Icc,
    Rank,
};

const char* method_name(Method method);
std::optional<Method> method_from_name(std::string_view name);

enum class OutputFormat { Table, Json };

struct RunConfig {
    Method method = Method::Generalized;
    std::string ratings_path;
    std::optional<std::string> roster_path;
    std::optional<std::string> hierarchy_path;
    std::optional<std::string> weights_path;
    std::optional<std::string> categories_path;
    std::optional<std::string> rankings_path;
    std::optional<BootstrapConfig> bootstrap;
    OutputFormat format = OutputFormat::Table;
};

struct RunResult {
    KappaReport report;
    std::optional<BootstrapResult> bootstrap;
    std::string rendered; // table or JSON text, per config.format
};

/// Loads the configured files, enforces method preconditions, computes the
/// selected statistic and renders it.
RunResult run(const RunConfig& config);

/// Re-runs the computation recorded in a JSON report and checks the stored
/// inputs (by digest) and every reported value still match. Returns the
/// mismatch description, or nothing when the report verifies.
std::optional<std::string> verify_report(const std::string& report_path);

/// Weight lookup parsed from weights.json: either direct weights or
/// {"scores": {...}} run through score_weights. Unlisted categories get 1.
std::map<std::string, double> parse_weights(std::string_view json_text);

/// Assembles the per-subject rows the pooled statistic and the bootstrap
/// consume: counts, availability, opportunity and weights per category.
SubjectRows build_subject_rows(const ClassificationTensor& tensor,
                               const std::vector<AvailabilityRule>& rules,
                               const std::map<std::string, double>& weight_map);

/// The per-category table and pooled kappa for prepared rows.
KappaReport generalized_kappa(const SubjectRows& rows);

} // namespace kappax
