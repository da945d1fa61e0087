#include "kappax/run.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kappax/baselines.hpp"
#include "kappax/hierarchy.hpp"
#include "kappax/report.hpp"

namespace kappax {

const char* method_name(Method method) {
    switch (method) {
        case Method::Generalized: return "generalized";
        case Method::Fleiss: return "fleiss";
        case Method::CohenAveraged: return "cohen-averaged";
        case Method::CohenPooled: return "cohen-pooled";
        case Method::Mezzich: return "mezzich";
        case Method::Icc: return "icc";
        case Method::Rank: return "rank";
    }
    return "generalized";
}

std::optional<Method> method_from_name(std::string_view name) {
    for (Method m : {Method::Generalized, Method::Fleiss, Method::CohenAveraged,
                     Method::CohenPooled, Method::Mezzich, Method::Icc, Method::Rank})
        if (name == method_name(m)) return m;
    return std::nullopt;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

KappaReport from_pairwise(const PairwiseKappa& pair) {
    KappaReport report;
    report.po = pair.po;
    report.pe = pair.pe;
    report.numerator = pair.po - pair.pe;
    report.denominator = 1.0 - pair.pe;
    if (!std::isnan(pair.kappa)) {
        report.overall = pair.kappa;
        report.interpretation = interpret_kappa(pair.kappa);
    }
    return report;
}

struct LoadedInputs {
    ClassificationTensor tensor;
    std::vector<AvailabilityRule> rules;
    std::map<std::string, double> weight_map;
    std::optional<std::vector<RankingRecord>> rankings;
    std::map<std::string, InputDigest> digests;
};

LoadedInputs load_inputs(const RunConfig& config) {
    std::map<std::string, InputDigest> digests;
    auto slurp = [&](const std::string& role, const std::string& path) {
        std::string bytes = read_file(path);
        digests[role] = {path, fnv1a64_hex(bytes)};
        return bytes;
    };

    auto records = parse_ratings(slurp("ratings", config.ratings_path));
    std::optional<std::vector<std::pair<std::string, std::string>>> roster;
    if (config.roster_path) roster = parse_roster(slurp("roster", *config.roster_path));
    std::optional<std::vector<std::string>> categories;
    if (config.categories_path)
        categories = parse_categories(slurp("categories", *config.categories_path));

    auto tensor = build_tensor(records, roster, categories);

    std::vector<AvailabilityRule> rules;
    if (config.hierarchy_path) {
        if (config.method != Method::Generalized)
            fail(ErrorCode::MalformedConfig,
                 "a hierarchy file is only valid with the generalized method");
        rules = parse_hierarchy(slurp("hierarchy", *config.hierarchy_path));
        validate_rules(rules, tensor.categories());
    }

    std::map<std::string, double> weight_map;
    if (config.weights_path) {
        if (config.method != Method::Generalized)
            fail(ErrorCode::MalformedConfig,
                 "a weights file is only valid with the generalized method");
        weight_map = parse_weights(slurp("weights", *config.weights_path));
        for (const auto& [id, w] : weight_map)
            if (!tensor.category_index(id))
                fail(ErrorCode::UnknownCategory, "weight for unknown category '" + id + "'");
    }

    std::optional<std::vector<RankingRecord>> rankings;
    if (config.rankings_path) {
        if (config.method != Method::Rank)
            fail(ErrorCode::MalformedConfig,
                 "a rankings file is only valid with the rank method");
        rankings = parse_rankings(slurp("rankings", *config.rankings_path));
        for (const auto& r : *rankings)
            if (!tensor.category_index(r.category))
                fail(ErrorCode::UnknownCategory,
                     "ranked category '" + r.category + "' is not declared");
    }

    return {std::move(tensor), std::move(rules), std::move(weight_map), std::move(rankings),
            std::move(digests)};
}

} // namespace

SubjectRows build_subject_rows(const ClassificationTensor& tensor,
                               const std::vector<AvailabilityRule>& rules,
                               const std::map<std::string, double>& weight_map) {
    const auto possible = compute_possible(tensor, rules);
    const auto table = tally(tensor);

    SubjectRows rows;
    rows.subjects = tensor.subject_count();
    rows.categories = tensor.category_count();
    rows.category_ids = tensor.categories();
    rows.x = table.counts;
    rows.s = possible.s;
    rows.j_prime = possible.j_prime;
    rows.weights.assign(rows.categories, 1.0);
    bool any_positive = weight_map.empty();
    for (std::size_t c = 0; c < rows.categories; ++c) {
        auto it = weight_map.find(rows.category_ids[c]);
        if (it != weight_map.end()) rows.weights[c] = it->second;
        if (rows.weights[c] > 0.0) any_positive = true;
    }
    if (!any_positive) fail(ErrorCode::MalformedConfig, "all category weights are zero");
    return rows;
}

KappaReport generalized_kappa(const SubjectRows& rows) {
    const std::size_t C = rows.categories;
    const std::size_t I = rows.subjects;
    std::vector<CategoryAgreement> cats(C);
    for (std::size_t c = 0; c < C; ++c) {
        std::vector<int> x(I), s(I);
        double sum_s = 0.0, sum_j = 0.0;
        for (std::size_t i = 0; i < I; ++i) {
            x[i] = rows.x[i * C + c];
            s[i] = rows.s[i * C + c];
            sum_s += rows.s[i * C + c];
            sum_j += rows.j_prime[i * C + c];
        }
        if (sum_j <= 0.0)
            fail(ErrorCode::ZeroOpportunity,
                 "category '" + rows.category_ids[c] + "' has no rater opportunities");
        cats[c].id = rows.category_ids[c];
        cats[c].po = po_per_category(x, s);
        cats[c].pe = pe_per_category(x, s);
        cats[c].phi = sum_s == sum_j ? 1.0 : sum_s / sum_j;
        cats[c].weight = rows.weights[c];
    }
    return aggregate_kappa(std::move(cats));
}

std::map<std::string, double> parse_weights(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::MalformedConfig, std::string("invalid weights JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(ErrorCode::MalformedConfig, "weights file must be a JSON object");

    std::map<std::string, double> out;
    if (doc.contains("scores")) {
        if (doc.size() != 1 || !doc["scores"].is_object())
            fail(ErrorCode::MalformedConfig,
                 "a scores-based weights file holds exactly {\"scores\": {id: number}}");
        std::vector<std::string> ids;
        std::vector<double> scores;
        for (const auto& [id, value] : doc["scores"].items()) {
            if (!value.is_number())
                fail(ErrorCode::MalformedConfig, "score for '" + id + "' must be a number");
            ids.push_back(id);
            scores.push_back(value.get<double>());
        }
        const auto weights = score_weights(scores);
        for (std::size_t c = 0; c < ids.size(); ++c) out[ids[c]] = weights[c];
        return out;
    }
    for (const auto& [id, value] : doc.items()) {
        if (!value.is_number())
            fail(ErrorCode::MalformedConfig, "weight for '" + id + "' must be a number");
        const double w = value.get<double>();
        if (w < 0.0)
            fail(ErrorCode::MalformedConfig, "weight for '" + id + "' must be non-negative");
        out[id] = w;
    }
    return out;
}

RunResult run(const RunConfig& config) {
    if (config.bootstrap && config.method != Method::Generalized)
        fail(ErrorCode::MalformedConfig,
             "bootstrap intervals are only available for the generalized method");

    LoadedInputs inputs = load_inputs(config);
    const ClassificationTensor& tensor = inputs.tensor;

    RunResult result;
    std::optional<BootstrapConfig> boot_config = config.bootstrap;

    switch (config.method) {
        case Method::Generalized: {
            const SubjectRows rows = build_subject_rows(tensor, inputs.rules, inputs.weight_map);
            result.report = generalized_kappa(rows);
            if (boot_config) result.bootstrap = bootstrap_ci(rows, *boot_config);
            break;
        }
        case Method::Fleiss: {
            const auto table = tally(tensor);
            const double kappa = fleiss_kappa(table);
            const auto agreement = fleiss_agreement(table);
            result.report.po = agreement.po;
            result.report.pe = agreement.pe;
            result.report.numerator = agreement.po - agreement.pe;
            result.report.denominator = 1.0 - agreement.pe;
            if (!std::isnan(kappa)) {
                result.report.overall = kappa;
                result.report.interpretation = interpret_kappa(kappa);
            }
            break;
        }
        case Method::CohenAveraged: {
            if (tensor.rater_count() != 2)
                fail(ErrorCode::NotTwoRaters, "cohen-averaged needs exactly 2 raters");
            KappaReport report;
            double sum = 0.0;
            bool defined = true;
            for (std::size_t c = 0; c < tensor.category_count(); ++c) {
                std::vector<int> a, b;
                for (std::size_t i = 0; i < tensor.subject_count(); ++i) {
                    if (!tensor.participates(i, 0) || !tensor.participates(i, 1)) continue;
                    a.push_back(tensor.selected(i, 0, c) ? 1 : 0);
                    b.push_back(tensor.selected(i, 1, c) ? 1 : 0);
                }
                const PairwiseKappa cat = cohen_kappa(a, b);
                CategoryAgreement row;
                row.id = tensor.categories()[c];
                row.po = cat.po;
                row.pe = cat.pe;
                row.kappa = cat.kappa;
                report.per_category.push_back(row);
                if (std::isnan(cat.kappa)) defined = false;
                else sum += cat.kappa;
            }
            report.numerator = sum;
            report.denominator = static_cast<double>(tensor.category_count());
            if (defined) {
                report.overall = sum / report.denominator;
                report.interpretation = interpret_kappa(*report.overall);
            }
            result.report = std::move(report);
            break;
        }
        case Method::CohenPooled: {
            const PairwiseKappa pooled = pooled_cohen(tensor);
            result.report = from_pairwise(pooled);
            for (std::size_t c = 0; c < tensor.category_count(); ++c) {
                std::vector<int> a, b;
                for (std::size_t i = 0; i < tensor.subject_count(); ++i) {
                    if (!tensor.participates(i, 0) || !tensor.participates(i, 1)) continue;
                    a.push_back(tensor.selected(i, 0, c) ? 1 : 0);
                    b.push_back(tensor.selected(i, 1, c) ? 1 : 0);
                }
                const PairwiseKappa cat = cohen_kappa(a, b);
                CategoryAgreement row;
                row.id = tensor.categories()[c];
                row.po = cat.po;
                row.pe = cat.pe;
                row.kappa = cat.kappa;
                result.report.per_category.push_back(row);
            }
            break;
        }
        case Method::Mezzich:
            result.report = from_pairwise(mezzich_kappa(tensor));
            break;
        case Method::Icc:
            result.report = from_pairwise(icc_kappa(tensor));
            break;
        case Method::Rank: {
            const auto records =
                inputs.rankings ? *inputs.rankings : rankings_from_tensor(tensor);
            result.report = from_pairwise(rank_kappa(records, tensor.categories()));
            break;
        }
    }

    const std::string name = method_name(config.method);
    if (config.format == OutputFormat::Json) {
        result.rendered =
            render_json(name, result.report, result.bootstrap, boot_config, inputs.digests);
    } else {
        result.rendered = render_table(name, result.report, result.bootstrap);
    }
    return result;
}

std::optional<std::string> verify_report(const std::string& report_path) {
    const std::string original = read_file(report_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(original);
    } catch (const nlohmann::json::parse_error& e) {
        return std::string("report is not valid JSON: ") + e.what();
    }
    if (!doc.contains("schema") || doc["schema"] != 1) return "unsupported report schema";
    if (!doc.contains("method") || !doc["method"].is_string()) return "missing method";
    const auto method = method_from_name(doc["method"].get<std::string>());
    if (!method) return "unknown method '" + doc["method"].get<std::string>() + "'";

    RunConfig config;
    config.method = *method;
    config.format = OutputFormat::Json;
    const auto& inputs = doc["inputs"];
    auto take = [&](const char* role) -> std::optional<std::string> {
        if (!inputs.contains(role)) return std::nullopt;
        return inputs[role]["path"].get<std::string>();
    };
    if (auto p = take("ratings")) config.ratings_path = *p;
    else return "report records no ratings input";
    config.roster_path = take("roster");
    config.hierarchy_path = take("hierarchy");
    config.weights_path = take("weights");
    config.categories_path = take("categories");
    config.rankings_path = take("rankings");

    for (const auto& [role, entry] : inputs.items()) {
        std::string bytes;
        try {
            bytes = read_file(entry["path"].get<std::string>());
        } catch (const Error& e) {
            return std::string("input no longer readable: ") + e.what();
        }
        if (fnv1a64_hex(bytes) != entry["digest"].get<std::string>())
            return "input '" + role + "' changed since the report was written";
    }

    if (!doc["bootstrap"].is_null()) {
        BootstrapConfig boot;
        boot.replicates = doc["bootstrap"]["replicates"].get<int>();
        boot.seed = doc["bootstrap"]["seed"].get<std::uint64_t>();
        boot.confidence = doc["bootstrap"]["confidence"].get<double>();
        config.bootstrap = boot;
    }

    RunResult rerun;
    try {
        rerun = run(config);
    } catch (const Error& e) {
        return std::string("recomputation failed: ") + e.what();
    }
    if (rerun.rendered != original)
        return "recomputed report differs from the stored one";
    return std::nullopt;
}

} // namespace kappax
