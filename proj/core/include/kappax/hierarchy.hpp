#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kappax/agreement.hpp"

namespace kappax {

/// Boolean availability condition over one rater's own selections.
struct Predicate {
    enum class Kind { Always, Selected, All, Any, Not };

    Kind kind = Kind::Always;
    std::string category;             // Kind::Selected
    std::vector<Predicate> children;  // All / Any / Not

    static Predicate always() { return {}; }
    static Predicate selected(std::string id);
    static Predicate all_of(std::vector<Predicate> parts);
    static Predicate any_of(std::vector<Predicate> parts);
    static Predicate negate(Predicate inner);

    /// Category ids this predicate mentions (with repeats).
    void referenced(std::vector<std::string>& out) const;
};

struct AvailabilityRule {
    std::string category;
    Predicate condition;
};

/// Parses the hierarchy JSON: an array of {"category": id, "requires": pred}
/// where pred is `true`, {"selected": id}, {"all": [...]}, {"any": [...]} or
/// {"not": pred}. Categories without an entry default to ALWAYS.
std::vector<AvailabilityRule> parse_hierarchy(std::string_view json_text);

/// Checks every referenced category exists and the reference graph is
/// acyclic (self-references included). Throws on violation.
void validate_rules(const std::vector<AvailabilityRule>& rules,
                    const std::vector<std::string>& categories);

/// Evaluates a predicate against one rater's selection vector, exposed as
/// a lookup from category id to selected/not.
bool eval_availability(const Predicate& predicate,
                       const std::function<bool(const std::string&)>& selected);

/// s_ic (hierarchy-aware availability) and j_ic (participation only).
struct PossibleMatrix {
    std::size_t subjects = 0;
    std::size_t categories = 0;
    std::vector<int> s;       // I x C
    std::vector<int> j_prime; // I x C

    int possible(std::size_t i, std::size_t c) const { return s[i * categories + c]; }
    int opportunity(std::size_t i, std::size_t c) const { return j_prime[i * categories + c]; }

    std::vector<int> s_column(std::size_t c) const;
    std::vector<int> j_column(std::size_t c) const;
};

/// Counts, for every (subject, category), the participating raters whose own
/// selections satisfy the category's availability condition. Fails when the
/// data contradicts the declared hierarchy (a selection whose condition is
/// false for that rater).
PossibleMatrix compute_possible(const ClassificationTensor& tensor,
                                const std::vector<AvailabilityRule>& rules);

} // namespace kappax
