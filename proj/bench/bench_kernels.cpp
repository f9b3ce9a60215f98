#include <benchmark/benchmark.h>

#include "polyuniv/coverage.hpp"
#include "polyuniv/escalate.hpp"
#include "polyuniv/polyform.hpp"

using namespace polyuniv;

namespace {

const auto kForm = polyform::MGonalForm::make(8, {1, 1, 2, 3, 5, 7});
constexpr i64 kCap = 2'000'000;

void BM_bitmap_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(polyform::represented_bitmap_serial(kForm, kCap));
}
void BM_bitmap_parallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(polyform::represented_bitmap(kForm, kCap));
}

void BM_scan_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(escalate::scan_prefixes_serial(static_cast<int>(st.range(0))));
}
void BM_scan_parallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(escalate::scan_prefixes(static_cast<int>(st.range(0))));
}

const std::vector<i64> kA2{1, 2, 3, 7, 13, 13, 13, 13, 26, 39};
const std::vector<std::vector<i64>> kBetas{{1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {-1, 1, 0, 0, 0, 0, 0, 0, 0, 0}};

void coverage(benchmark::State& st, bool parallel) {
    coverage::CoverageOptions opt;
    opt.max_box = 3;
    opt.parallel = parallel;
    for (auto _ : st) benchmark::DoNotOptimize(coverage::residue_coverage(st.range(0), 12, kA2, kBetas, opt));
}
void BM_coverage_serial(benchmark::State& st) { coverage(st, false); }
void BM_coverage_parallel(benchmark::State& st) { coverage(st, true); }

}  // namespace

BENCHMARK(BM_bitmap_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bitmap_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_scan_serial)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_coverage_serial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coverage_parallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
