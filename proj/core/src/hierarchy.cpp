#include "kappax/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace kappax {

Predicate Predicate::selected(std::string id) {
    Predicate p;
    p.kind = Kind::Selected;
    p.category = std::move(id);
    return p;
}

Predicate Predicate::all_of(std::vector<Predicate> parts) {
    Predicate p;
    p.kind = Kind::All;
    p.children = std::move(parts);
    return p;
}

Predicate Predicate::any_of(std::vector<Predicate> parts) {
    Predicate p;
    p.kind = Kind::Any;
    p.children = std::move(parts);
    return p;
}

Predicate Predicate::negate(Predicate inner) {
    Predicate p;
    p.kind = Kind::Not;
    p.children.push_back(std::move(inner));
    return p;
}

void Predicate::referenced(std::vector<std::string>& out) const {
    if (kind == Kind::Selected) out.push_back(category);
    for (const auto& child : children) child.referenced(out);
}

namespace {

Predicate parse_predicate(const nlohmann::json& node) {
    if (node.is_boolean()) {
        if (!node.get<bool>())
            fail(ErrorCode::MalformedPredicate, "'false' is not a valid availability condition");
        return Predicate::always();
    }
    if (!node.is_object() || node.size() != 1)
        fail(ErrorCode::MalformedPredicate,
             "predicate must be true, {\"selected\": id}, {\"all\": [...]}, {\"any\": [...]} or "
             "{\"not\": ...}");
    const auto& key = node.items().begin().key();
    const auto& value = node.items().begin().value();
    if (key == "selected") {
        if (!value.is_string() || value.get<std::string>().empty())
            fail(ErrorCode::MalformedPredicate, "'selected' takes a category id");
        return Predicate::selected(value.get<std::string>());
    }
    if (key == "all" || key == "any") {
        if (!value.is_array())
            fail(ErrorCode::MalformedPredicate, "'" + key + "' takes an array of predicates");
        std::vector<Predicate> parts;
        parts.reserve(value.size());
        for (const auto& item : value) parts.push_back(parse_predicate(item));
        return key == "all" ? Predicate::all_of(std::move(parts))
                            : Predicate::any_of(std::move(parts));
    }
    if (key == "not") return Predicate::negate(parse_predicate(value));
    fail(ErrorCode::MalformedPredicate, "unknown predicate key '" + key + "'");
}

} // namespace

std::vector<AvailabilityRule> parse_hierarchy(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::MalformedPredicate, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array())
        fail(ErrorCode::MalformedPredicate, "hierarchy file must be a JSON array of rules");

    std::vector<AvailabilityRule> rules;
    std::set<std::string> seen;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("category") || !entry.contains("requires"))
            fail(ErrorCode::MalformedPredicate,
                 "each rule needs a \"category\" and a \"requires\" entry");
        if (!entry["category"].is_string() || entry["category"].get<std::string>().empty())
            fail(ErrorCode::MalformedPredicate, "\"category\" must be a non-empty string");
        std::string id = entry["category"].get<std::string>();
        if (!seen.insert(id).second)
            fail(ErrorCode::MalformedPredicate, "category '" + id + "' has two rules");
        rules.push_back({std::move(id), parse_predicate(entry["requires"])});
    }
    return rules;
}

void validate_rules(const std::vector<AvailabilityRule>& rules,
                    const std::vector<std::string>& categories) {
    std::set<std::string> known(categories.begin(), categories.end());
    std::map<std::string, std::vector<std::string>> edges; // category -> dependencies
    for (const auto& rule : rules) {
        if (!known.count(rule.category))
            fail(ErrorCode::UnknownCategoryReference,
                 "rule for unknown category '" + rule.category + "'");
        std::vector<std::string> refs;
        rule.condition.referenced(refs);
        for (const auto& ref : refs)
            if (!known.count(ref))
                fail(ErrorCode::UnknownCategoryReference,
                     "rule for '" + rule.category + "' references unknown category '" + ref + "'");
        edges[rule.category] = std::move(refs);
    }

    // Kahn's algorithm over the reference graph; leftovers form a cycle.
    std::map<std::string, int> indegree;
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& [cat, deps] : edges) {
        indegree.try_emplace(cat, 0);
        for (const auto& dep : deps) {
            if (dep == cat)
                fail(ErrorCode::CyclicDependency, "category '" + cat + "' references itself");
            if (!edges.count(dep)) continue; // ALWAYS categories never cycle
            ++indegree[cat];
            dependents[dep].push_back(cat);
        }
    }
    std::vector<std::string> ready;
    for (const auto& [cat, deg] : indegree)
        if (deg == 0) ready.push_back(cat);
    std::size_t resolved = 0;
    while (!ready.empty()) {
        std::string cat = std::move(ready.back());
        ready.pop_back();
        ++resolved;
        for (const auto& next : dependents[cat])
            if (--indegree[next] == 0) ready.push_back(next);
    }
    if (resolved != indegree.size()) {
        std::string cycle;
        for (const auto& [cat, deg] : indegree)
            if (deg > 0) cycle += (cycle.empty() ? "" : ", ") + cat;
        fail(ErrorCode::CyclicDependency, "rules form a cycle among {" + cycle + "}");
    }
}

bool eval_availability(const Predicate& predicate,
                       const std::function<bool(const std::string&)>& selected) {
    switch (predicate.kind) {
        case Predicate::Kind::Always: return true;
        case Predicate::Kind::Selected: return selected(predicate.category);
        case Predicate::Kind::All:
            return std::all_of(predicate.children.begin(), predicate.children.end(),
                               [&](const Predicate& p) { return eval_availability(p, selected); });
        case Predicate::Kind::Any:
            return std::any_of(predicate.children.begin(), predicate.children.end(),
                               [&](const Predicate& p) { return eval_availability(p, selected); });
        case Predicate::Kind::Not: return !eval_availability(predicate.children.front(), selected);
    }
    return true;
}

std::vector<int> PossibleMatrix::s_column(std::size_t c) const {
    std::vector<int> col(subjects);
    for (std::size_t i = 0; i < subjects; ++i) col[i] = s[i * categories + c];
    return col;
}

std::vector<int> PossibleMatrix::j_column(std::size_t c) const {
    std::vector<int> col(subjects);
    for (std::size_t i = 0; i < subjects; ++i) col[i] = j_prime[i * categories + c];
    return col;
}

PossibleMatrix compute_possible(const ClassificationTensor& tensor,
                                const std::vector<AvailabilityRule>& rules) {
    validate_rules(rules, tensor.categories());

    const std::size_t I = tensor.subject_count();
    const std::size_t J = tensor.rater_count();
    const std::size_t C = tensor.category_count();

    std::vector<const Predicate*> condition(C, nullptr);
    for (const auto& rule : rules) {
        auto c = tensor.category_index(rule.category);
        condition[*c] = &rule.condition;
    }

    PossibleMatrix matrix;
    matrix.subjects = I;
    matrix.categories = C;
    matrix.s.assign(I * C, 0);
    matrix.j_prime.assign(I * C, 0);

    for (std::size_t i = 0; i < I; ++i) {
        for (std::size_t j = 0; j < J; ++j) {
            if (!tensor.participates(i, j)) continue;
            auto selected = [&](const std::string& id) {
                auto c = tensor.category_index(id);
                return c && tensor.selected(i, j, *c);
            };
            for (std::size_t c = 0; c < C; ++c) {
                ++matrix.j_prime[i * C + c];
                bool available = !condition[c] || eval_availability(*condition[c], selected);
                if (available) {
                    ++matrix.s[i * C + c];
                } else if (tensor.selected(i, j, c)) {
                    fail(ErrorCode::HierarchyViolation,
                         "rater '" + tensor.raters()[j] + "' selected '" +
                             tensor.categories()[c] + "' for subject '" + tensor.subjects()[i] +
                             "' although the category was not available");
                }
            }
        }
    }
    return matrix;
}

} // namespace kappax
