#include "kappax/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace kappax {

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::string fixed3(double value) {
    if (std::isnan(value)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

std::string fixed3(const std::optional<double>& value) {
    return value ? fixed3(*value) : "NaN";
}

nlohmann::ordered_json json_number(double value) {
    if (std::isnan(value)) return nullptr;
    return value;
}

nlohmann::ordered_json json_number(const std::optional<double>& value) {
    if (!value) return nullptr;
    return json_number(*value);
}

} // namespace

std::string render_table(const std::string& method, const KappaReport& report,
                         const std::optional<BootstrapResult>& bootstrap) {
    std::ostringstream out;
    out << "method: " << method << "\n";
    if (!report.per_category.empty()) {
        std::size_t width = 8;
        for (const auto& cat : report.per_category) width = std::max(width, cat.id.size());
        out << "\n";
        char head[160];
        std::snprintf(head, sizeof head, "%-*s %8s %8s %8s %8s %8s %8s %8s\n",
                      static_cast<int>(width), "category", "Po", "Pe", "Po-Pe", "1-Pe", "phi",
                      "w", "kappa");
        out << head;
        for (const auto& cat : report.per_category) {
            const std::string po_pe =
                (cat.po && cat.pe) ? fixed3(*cat.po - *cat.pe) : "NaN";
            const std::string one_pe = cat.pe ? fixed3(1.0 - *cat.pe) : "NaN";
            char line[200];
            std::snprintf(line, sizeof line, "%-*s %8s %8s %8s %8s %8s %8s %8s\n",
                          static_cast<int>(width), cat.id.c_str(), fixed3(cat.po).c_str(),
                          fixed3(cat.pe).c_str(), po_pe.c_str(), one_pe.c_str(),
                          fixed3(cat.phi).c_str(), fixed3(cat.weight).c_str(),
                          fixed3(cat.kappa).c_str());
            out << line;
        }
    }
    out << "\n";
    if (report.po) out << "Po:          " << fixed3(report.po) << "\n";
    if (report.pe) out << "Pe:          " << fixed3(report.pe) << "\n";
    if (!report.per_category.empty()) {
        out << "numerator:   " << fixed3(report.numerator) << "\n";
        out << "denominator: " << fixed3(report.denominator) << "\n";
    }
    out << "overall kappa: "
        << (report.overall ? fixed3(*report.overall) : std::string("NaN")) << "\n";
    if (report.interpretation) out << "interpretation: " << *report.interpretation << "\n";
    if (bootstrap) {
        out << "bootstrap: point " << fixed3(bootstrap->point) << ", interval ["
            << fixed3(bootstrap->lower) << ", " << fixed3(bootstrap->upper) << "], replicates "
            << bootstrap->replicates_used;
        if (bootstrap->replicates_degenerate > 0)
            out << " (+" << bootstrap->replicates_degenerate << " degenerate)";
        out << "\n";
    }
    return std::move(out).str();
}

std::string render_json(const std::string& method, const KappaReport& report,
                        const std::optional<BootstrapResult>& bootstrap,
                        const std::optional<BootstrapConfig>& bootstrap_config,
                        const std::map<std::string, InputDigest>& inputs) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["method"] = method;

    nlohmann::ordered_json in = nlohmann::ordered_json::object();
    for (const auto& [role, digest] : inputs)
        in[role] = {{"path", digest.path}, {"digest", digest.digest}};
    doc["inputs"] = in;

    nlohmann::ordered_json cats = nlohmann::ordered_json::array();
    for (const auto& cat : report.per_category) {
        cats.push_back({{"id", cat.id},
                        {"po", json_number(cat.po)},
                        {"pe", json_number(cat.pe)},
                        {"kappa", json_number(cat.kappa)},
                        {"phi", cat.phi},
                        {"weight", cat.weight},
                        {"num_contrib", cat.num_contrib},
                        {"den_contrib", cat.den_contrib}});
    }
    doc["categories"] = cats;

    doc["po"] = json_number(report.po);
    doc["pe"] = json_number(report.pe);
    doc["numerator"] = report.numerator;
    doc["denominator"] = report.denominator;
    doc["overall"] = json_number(report.overall);
    doc["interpretation"] =
        report.interpretation ? nlohmann::ordered_json(*report.interpretation) : nullptr;

    if (bootstrap && bootstrap_config) {
        doc["bootstrap"] = {{"replicates", bootstrap_config->replicates},
                            {"seed", bootstrap_config->seed},
                            {"confidence", bootstrap_config->confidence},
                            {"point", json_number(bootstrap->point)},
                            {"lower", json_number(bootstrap->lower)},
                            {"upper", json_number(bootstrap->upper)},
                            {"replicates_used", bootstrap->replicates_used},
                            {"replicates_degenerate", bootstrap->replicates_degenerate}};
    } else {
        doc["bootstrap"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

} // namespace kappax
