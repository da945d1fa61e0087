#include <set>

#include <doctest.h>

#include "kappax/hierarchy.hpp"
#include "support/fixtures.hpp"

using namespace kappax;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

bool eval_on(const Predicate& p, std::initializer_list<const char*> selected_ids) {
    std::set<std::string> sel;
    for (const char* id : selected_ids) sel.insert(id);
    return eval_availability(p, [&](const std::string& id) { return sel.count(id) > 0; });
}

} // namespace

TEST_CASE("exam hierarchy parses into the two availability rules") {
    auto rules = kappax::test::exam_rules();
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].category == "item4");
    CHECK(rules[0].condition.kind == Predicate::Kind::All);
    REQUIRE(rules[0].condition.children.size() == 2);
    CHECK(rules[0].condition.children[0].category == "item1");
    CHECK(rules[0].condition.children[1].category == "item3");
    CHECK(rules[1].category == "item5");
    CHECK(rules[1].condition.kind == Predicate::Kind::Selected);
    CHECK(rules[1].condition.category == "item4");
}

TEST_CASE("always-available categories simply have no rule") {
    auto rules = parse_hierarchy(R"([{"category":"b","requires":true}])");
    REQUIRE(rules.size() == 1);
    CHECK(rules[0].condition.kind == Predicate::Kind::Always);
}

TEST_CASE("malformed predicates are rejected") {
    CHECK(code_of([] { parse_hierarchy("{}"); }) == ErrorCode::MalformedPredicate);
    CHECK(code_of([] { parse_hierarchy(R"([{"category":"a"}])"); }) ==
          ErrorCode::MalformedPredicate);
    CHECK(code_of([] { parse_hierarchy(R"([{"category":"a","requires":false}])"); }) ==
          ErrorCode::MalformedPredicate);
    CHECK(code_of([] { parse_hierarchy(R"([{"category":"a","requires":{"xor":[]}}])"); }) ==
          ErrorCode::MalformedPredicate);
    CHECK(code_of([] { parse_hierarchy(R"([{"category":"a","requires":{"selected":1}}])"); }) ==
          ErrorCode::MalformedPredicate);
    CHECK(code_of([] { parse_hierarchy("not json"); }) == ErrorCode::MalformedPredicate);
}

TEST_CASE("validate_rules accepts the exam structure") {
    auto rules = kappax::test::exam_rules();
    std::vector<std::string> cats{"item1", "item2", "item3", "item4", "item5"};
    CHECK_NOTHROW(validate_rules(rules, cats));
}

TEST_CASE("validate_rules rejects cycles") {
    std::vector<std::string> cats{"a", "b"};
    auto two_cycle = parse_hierarchy(
        R"([{"category":"a","requires":{"selected":"b"}},
            {"category":"b","requires":{"selected":"a"}}])");
    CHECK(code_of([&] { validate_rules(two_cycle, cats); }) == ErrorCode::CyclicDependency);

    auto self_loop = parse_hierarchy(R"([{"category":"a","requires":{"selected":"a"}}])");
    CHECK(code_of([&] { validate_rules(self_loop, cats); }) == ErrorCode::CyclicDependency);
}

TEST_CASE("validate_rules rejects unknown references") {
    std::vector<std::string> cats{"a"};
    auto rules = parse_hierarchy(R"([{"category":"a","requires":{"selected":"ghost"}}])");
    CHECK(code_of([&] { validate_rules(rules, cats); }) == ErrorCode::UnknownCategoryReference);
    auto stray = parse_hierarchy(R"([{"category":"ghost","requires":true}])");
    CHECK(code_of([&] { validate_rules(stray, cats); }) == ErrorCode::UnknownCategoryReference);
}

TEST_CASE("predicate evaluation") {
    auto all13 = Predicate::all_of({Predicate::selected("1"), Predicate::selected("3")});
    CHECK_FALSE(eval_on(all13, {"1", "2"}));
    CHECK(eval_on(all13, {"1", "2", "3", "4"}));

    CHECK(eval_on(Predicate::negate(Predicate::selected("a")), {}));
    CHECK_FALSE(eval_on(Predicate::negate(Predicate::selected("a")), {"a"}));

    CHECK(eval_on(Predicate::always(), {}));
    CHECK(eval_on(Predicate::always(), {"x", "y"}));

    auto any = Predicate::any_of({Predicate::selected("a"), Predicate::selected("b")});
    CHECK(eval_on(any, {"b"}));
    CHECK_FALSE(eval_on(any, {"c"}));

    // only one of two, via ALL/NOT composition
    auto one_of_two = Predicate::any_of(
        {Predicate::all_of({Predicate::selected("a"), Predicate::negate(Predicate::selected("b"))}),
         Predicate::all_of({Predicate::selected("b"), Predicate::negate(Predicate::selected("a"))})});
    CHECK(eval_on(one_of_two, {"a"}));
    CHECK(eval_on(one_of_two, {"b"}));
    CHECK_FALSE(eval_on(one_of_two, {"a", "b"}));
    CHECK_FALSE(eval_on(one_of_two, {}));
}

TEST_CASE("exam possible matrix matches the worked values") {
    auto tensor = kappax::test::exam_tensor();
    auto possible = compute_possible(tensor, kappax::test::exam_rules());

    std::vector<int> sums(5, 0);
    for (std::size_t c = 0; c < 5; ++c)
        for (std::size_t i = 0; i < 6; ++i) sums[c] += possible.possible(i, c);
    CHECK(sums == std::vector<int>{18, 18, 18, 10, 9});

    auto s6 = tensor.subject_index("S6");
    auto item4 = tensor.category_index("item4");
    REQUIRE((s6 && item4));
    CHECK(possible.possible(*s6, *item4) == 1);

    auto s1 = tensor.subject_index("S1");
    auto item5 = tensor.category_index("item5");
    CHECK(possible.possible(*s1, *item5) == 2);
}

TEST_CASE("item5 availability equals the item4 count everywhere") {
    auto tensor = kappax::test::exam_tensor();
    auto possible = compute_possible(tensor, kappax::test::exam_rules());
    auto table = tally(tensor);
    auto item4 = tensor.category_index("item4");
    auto item5 = tensor.category_index("item5");
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        CHECK(possible.possible(i, *item5) == table.count(i, *item4));
}

TEST_CASE("no rules and full participation gives s = J everywhere") {
    auto tensor = kappax::test::exam_tensor();
    auto possible = compute_possible(tensor, {});
    for (std::size_t i = 0; i < tensor.subject_count(); ++i)
        for (std::size_t c = 0; c < tensor.category_count(); ++c) {
            CHECK(possible.possible(i, c) == 3);
            CHECK(possible.opportunity(i, c) == 3);
        }
}

TEST_CASE("data violating the declared hierarchy is fatal") {
    auto records = parse_ratings("subject,rater,category\nS1,T1,child\nS1,T2,parent\n");
    std::vector<std::string> cats{"parent", "child"};
    auto tensor = build_tensor(records, std::nullopt, cats);
    auto rules = parse_hierarchy(R"([{"category":"child","requires":{"selected":"parent"}}])");
    CHECK(code_of([&] { compute_possible(tensor, rules); }) == ErrorCode::HierarchyViolation);
}
