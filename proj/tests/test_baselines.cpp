#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "kappax/baselines.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace kappax;

namespace {

ClassificationTensor two_rater_tensor(const std::string& csv) {
    return build_tensor(parse_ratings(csv));
}

// 4 subjects, 2 categories; raters agree on 3 of 4 subjects per category.
const char* kMixedCsv =
    "subject,rater,category\n"
    "s1,A,a\ns1,B,a\n"
    "s2,A,b\ns2,B,b\n"
    "s3,A,a\ns3,B,a\n"
    "s4,A,a\ns4,B,b\n";

} // namespace

TEST_CASE("cohen: identical raters give 1") {
    std::vector<int> a{1, 0, 1, 0}, b{1, 0, 1, 0};
    auto result = cohen_kappa(a, b);
    CHECK(result.po == 1.0);
    CHECK(result.kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cohen: never-selected category is undefined") {
    std::vector<int> a{0, 0, 0}, b{0, 0, 0};
    auto result = cohen_kappa(a, b);
    CHECK(result.pe == 1.0);
    CHECK(std::isnan(result.kappa));
}

TEST_CASE("cohen: independence at the observed margins gives 0") {
    // diagonal mass equals the product of the margins
    std::vector<int> a{1, 1, 0, 0}, b{1, 0, 1, 0};
    auto result = cohen_kappa(a, b);
    CHECK(result.po == 0.5);
    CHECK(result.pe == 0.5);
    CHECK(result.kappa == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("averaged cohen on the mixed fixture") {
    auto tensor = two_rater_tensor(kMixedCsv);
    auto avg = averaged_cohen(tensor);
    REQUIRE(avg.has_value());
    // per-category kappas are 1/2 and 1/2 by hand
    CHECK(*avg == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("averaged cohen: identical raters give 1") {
    auto tensor = two_rater_tensor(
        "subject,rater,category\ns1,A,a\ns1,B,a\ns2,A,b\ns2,B,b\n");
    CHECK(*averaged_cohen(tensor) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("averaged cohen is undefined with a never-selected category") {
    auto records = parse_ratings(kMixedCsv);
    std::vector<std::string> cats{"a", "b", "c"};
    auto tensor = build_tensor(records, std::nullopt, cats);
    CHECK_FALSE(averaged_cohen(tensor).has_value());
}

TEST_CASE("averaged cohen requires two raters") {
    CHECK_THROWS_AS((void)averaged_cohen(kappax::test::exam_tensor()), Error);
}

TEST_CASE("pooled cohen stays defined with a never-selected category") {
    auto records = parse_ratings(kMixedCsv);
    std::vector<std::string> cats{"a", "b", "c"};
    auto tensor = build_tensor(records, std::nullopt, cats);
    auto pooled = pooled_cohen(tensor);
    // mean Po = (3/4 + 3/4 + 1)/3, mean Pe = (1/2 + 1/2 + 1)/3
    CHECK(pooled.po == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(pooled.pe == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(pooled.kappa == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pooled cohen on the mixed fixture") {
    auto pooled = pooled_cohen(two_rater_tensor(kMixedCsv));
    CHECK(pooled.kappa == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("jaccard overlap") {
    std::set<std::string> a{"blue", "yellow", "brown"}, b{"blue", "green"};
    CHECK(*jaccard_overlap(a, b) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(*jaccard_overlap(a, a) == 1.0);
    CHECK_FALSE(jaccard_overlap({}, {}).has_value());
    CHECK(*jaccard_overlap(a, {}) == 0.0);
}

TEST_CASE("cell index mapping") {
    CHECK(cell_to_subject_rater(10, 4) == std::pair<int, int>{3, 2});
    CHECK(cell_to_subject_rater(12, 4) == std::pair<int, int>{3, 4});
    CHECK(cell_to_subject_rater(1, 7) == std::pair<int, int>{1, 1});
    CHECK_THROWS_AS((void)cell_to_subject_rater(0, 4), Error);
}

TEST_CASE("mezzich on the exam fixture") {
    auto result = mezzich_kappa(kappax::test::exam_tensor());
    // student 2 drops out of Po (both empty-set pairs are incalculable)
    CHECK(result.po == doctest::Approx(37.0 / 45.0).epsilon(1e-12));
    CHECK(result.pe == doctest::Approx(83.0 / 150.0).epsilon(1e-12));
    CHECK(result.kappa == doctest::Approx(121.0 / 201.0).epsilon(1e-12));
}

TEST_CASE("mezzich on the psychiatric fixture") {
    auto result = mezzich_kappa(kappax::test::dsm_tensor());
    CHECK(result.po == doctest::Approx(0.3616255144032921).epsilon(1e-9));
    CHECK(result.pe == doctest::Approx(0.1179359134415309).epsilon(1e-9));
    CHECK(result.kappa == doctest::Approx(0.2762719905223211).epsilon(1e-9));
}

TEST_CASE("mezzich: identical raters with nonempty sets give 1") {
    auto tensor = two_rater_tensor(
        "subject,rater,category\ns1,A,a\ns1,B,a\ns2,A,b\ns2,B,b\n");
    CHECK(mezzich_kappa(tensor).po == 1.0);
    CHECK(mezzich_kappa(tensor).kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mezzich with no calculable pair is an error") {
    // two raters who never select anything
    auto records = parse_ratings("subject,rater,category\ns1,A,a\n");
    auto roster = parse_roster("subject,rater\ns1,A\ns1,B\ns2,A\ns2,B\n");
    std::vector<std::string> cats{"a"};
    // only s1/A has a nonempty set: every pair involves an empty set
    auto tensor = build_tensor(records, roster, cats);
    CHECK_THROWS_AS((void)mezzich_kappa(tensor), Error);
}

TEST_CASE("icc_subject") {
    std::vector<std::vector<double>> identical{{1, 0, 1}, {1, 0, 1}, {1, 0, 1}};
    CHECK(icc_subject(identical) == 1.0);

    std::vector<std::vector<double>> constant{{0, 0, 0}, {0, 0, 0}};
    CHECK(icc_subject(constant) == 1.0);

    // exam student 2
    std::vector<std::vector<double>> student2{
        {1, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}};
    CHECK(icc_subject(student2) == doctest::Approx(0.0).epsilon(1e-12));

    // orthogonal one-hot pair, C = 5: MSB = 0.15, MSW = 0.2 by hand
    std::vector<std::vector<double>> orthogonal{{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}};
    CHECK(icc_subject(orthogonal) == doctest::Approx(-1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("icc kappa on the worked examples") {
    auto exam = icc_kappa(kappax::test::exam_tensor());
    CHECK(exam.po == doctest::Approx(0.6777065527065527).epsilon(1e-9));
    CHECK(exam.pe == doctest::Approx(0.4806067882).epsilon(1e-6));
    CHECK(exam.kappa == doctest::Approx(0.3794808250).epsilon(1e-6));

    auto dsm = icc_kappa(kappax::test::dsm_tensor());
    CHECK(dsm.kappa == doctest::Approx(0.3567521232).epsilon(1e-6));
}

TEST_CASE("icc kappa: identical non-constant vectors give 1") {
    auto tensor = two_rater_tensor(
        "subject,rater,category\ns1,A,a\ns1,B,a\ns2,A,b\ns2,B,b\n");
    auto result = icc_kappa(tensor);
    CHECK(result.po == 1.0);
    CHECK(result.pe < 1.0);
    CHECK(result.kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank vector of the eight-colour example") {
    std::vector<std::string> cats{"blue", "brown", "green", "pink",
                                  "purple", "orange", "red", "yellow"};
    auto v = rank_vector({{"green"}, {"brown", "orange", "red"}, {"yellow"}}, cats);
    CHECK(v.ranks == std::vector<double>{7, 3, 1, 7, 7, 3, 3, 5});
}

TEST_CASE("rank vector edge shapes") {
    std::vector<std::string> cats{"a", "b", "c"};
    auto strict = rank_vector({{"b"}, {"c"}, {"a"}}, cats);
    CHECK(strict.ranks == std::vector<double>{3, 1, 2});

    auto none = rank_vector({}, cats);
    CHECK(none.ranks == std::vector<double>{2, 2, 2});

    CHECK_THROWS_AS((void)rank_vector({{"a"}, {"a"}}, cats), Error);
    CHECK_THROWS_AS((void)rank_vector({{"ghost"}}, cats), Error);
}

TEST_CASE("spearman with ties") {
    RankVector a{{7, 3, 1, 7, 7, 3, 3, 5}};
    CHECK(*spearman_tied(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    RankVector up{{1, 2, 3, 4}};
    RankVector down{{4, 3, 2, 1}};
    CHECK(*spearman_tied(up, down) == doctest::Approx(-1.0).epsilon(1e-12));

    RankVector flat{{2, 2, 2, 2}};
    CHECK_FALSE(spearman_tied(up, flat).has_value());

    RankVector b{{1, 5, 3, 7, 7, 3, 3, 7}};
    auto expected = kappax::test::pearson(a.ranks, b.ranks);
    CHECK(*spearman_tied(a, b) == doctest::Approx(*expected).epsilon(1e-12));
}

TEST_CASE("rank kappa on a fully worked two-subject case") {
    std::vector<RankingRecord> records{
        {"X", "R1", "a", 1}, {"X", "R1", "b", 2},
        {"X", "R2", "b", 1}, {"X", "R2", "a", 2},
        {"Y", "R1", "a", 1},
        {"Y", "R2", "c", 1},
    };
    auto result = rank_kappa(records, {"a", "b", "c"});
    const double pe = -std::sqrt(3.0) / 12.0;
    CHECK(result.po == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.pe == doctest::Approx(pe).epsilon(1e-12));
    CHECK(result.kappa == doctest::Approx((0.0 - pe) / (1.0 - pe)).epsilon(1e-12));
}

TEST_CASE("rank kappa on the psychiatric fixture, tied reading") {
    auto records = parse_rankings(kappax::test::read_file(kappax::test::data_path("dsm_rankings.csv")));
    auto cats = parse_categories(kappax::test::read_file(kappax::test::data_path("dsm_categories")));
    auto result = rank_kappa(records, cats);
    CHECK(result.kappa == doctest::Approx(0.3488441771).epsilon(1e-6));

    // the tied reading and the derived-from-selections reading coincide
    auto derived = rank_kappa(rankings_from_tensor(kappax::test::dsm_tensor()), cats);
    CHECK(derived.kappa == doctest::Approx(result.kappa).epsilon(1e-12));
}

TEST_CASE("rank kappa: identical rankings give 1") {
    std::vector<RankingRecord> records{
        {"X", "R1", "a", 1}, {"X", "R1", "b", 2},
        {"X", "R2", "a", 1}, {"X", "R2", "b", 2},
        {"Y", "R1", "b", 1},
        {"Y", "R2", "b", 1},
    };
    auto result = rank_kappa(records, {"a", "b", "c"});
    CHECK(result.po == 1.0);
    CHECK(result.kappa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rankings parser") {
    auto records = parse_rankings("subject,rater,category,rank_group\ns,r,a,1\ns,r,b,2\n");
    REQUIRE(records.size() == 2);
    CHECK(records[1].rank_group == 2);
    CHECK_THROWS_AS((void)parse_rankings("subject,rater,category,rank_group\ns,r,a,zero\n"),
                    Error);
    CHECK_THROWS_AS((void)parse_rankings("subject,rater,category,rank_group\ns,r,a,0\n"), Error);
    CHECK_THROWS_AS((void)parse_rankings("subject,rater,category,rank_group\n"), Error);
    CHECK_THROWS_AS(
        (void)parse_rankings("subject,rater,category,rank_group\ns,r,a,1\ns,r,a,2\n"), Error);
}
