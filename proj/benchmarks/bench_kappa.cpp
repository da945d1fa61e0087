#include <benchmark/benchmark.h>

#include "kappax/baselines.hpp"
#include "kappax/run.hpp"
#include "support/fixtures.hpp"

namespace {

kappax::SubjectRows exam_rows() {
    auto tensor = kappax::test::exam_tensor();
    auto weights = kappax::parse_weights(
        kappax::test::read_file(kappax::test::data_path("exam_weights.json")));
    return kappax::build_subject_rows(tensor, kappax::test::exam_rules(), weights);
}

void BM_GeneralizedExam(benchmark::State& state) {
    auto rows = exam_rows();
    for (auto _ : state) benchmark::DoNotOptimize(kappax::generalized_kappa(rows));
}
BENCHMARK(BM_GeneralizedExam);

void BM_GeneralizedPsychiatric(benchmark::State& state) {
    auto tensor = kappax::test::dsm_tensor();
    auto rows = kappax::build_subject_rows(tensor, {}, {});
    for (auto _ : state) benchmark::DoNotOptimize(kappax::generalized_kappa(rows));
}
BENCHMARK(BM_GeneralizedPsychiatric);

void BM_MezzichPsychiatric(benchmark::State& state) {
    auto tensor = kappax::test::dsm_tensor();
    for (auto _ : state) benchmark::DoNotOptimize(kappax::mezzich_kappa(tensor));
}
BENCHMARK(BM_MezzichPsychiatric);

void BM_IccPsychiatric(benchmark::State& state) {
    auto tensor = kappax::test::dsm_tensor();
    for (auto _ : state) benchmark::DoNotOptimize(kappax::icc_kappa(tensor));
}
BENCHMARK(BM_IccPsychiatric);

void BM_BootstrapExam(benchmark::State& state) {
    auto rows = exam_rows();
    kappax::BootstrapConfig config;
    config.replicates = static_cast<int>(state.range(0));
    config.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(kappax::bootstrap_ci(rows, config));
}
BENCHMARK(BM_BootstrapExam)->Arg(1000)->Arg(10000);

void BM_TallyRandom(benchmark::State& state) {
    std::mt19937_64 rng(42);
    kappax::test::RandomTensorParams params;
    params.max_subjects = static_cast<std::size_t>(state.range(0));
    auto tensor = kappax::test::random_tensor(rng, params);
    for (auto _ : state) benchmark::DoNotOptimize(kappax::tally(tensor));
}
BENCHMARK(BM_TallyRandom)->Arg(20)->Arg(100);

} // namespace

BENCHMARK_MAIN();
