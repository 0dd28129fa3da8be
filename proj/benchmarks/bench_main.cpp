#include "lagsurg/examples.hpp"
#include "lagsurg/floer.hpp"
#include "lagsurg/surgery.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lagsurg;
using novikov::Element;
using novikov::Rational;

static Element sample(std::mt19937& rng, int terms) {
    std::uniform_int_distribution<int> num(-4, 24);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<novikov::Term> ts;
    for (int i = 0; i < terms; ++i) ts.push_back({Rational(num(rng), 4), {coef(rng), coef(rng)}});
    return Element::from_terms(std::move(ts), novikov::Ext(Rational(6)));
}

static void BM_NovikovMultiply(benchmark::State& state) {
    std::mt19937 rng(1);
    auto a = sample(rng, static_cast<int>(state.range(0)));
    auto b = sample(rng, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_NovikovMultiply)->Arg(4)->Arg(16)->Arg(64);

static void BM_DeformedM1(benchmark::State& state) {
    auto ex = examples::immersed_circle();
    for (auto _ : state)
        for (const char* g : {"x", "x'", "x''", "1g"})
            benchmark::DoNotOptimize(ainfty::m_deformed(ex.algebra, ex.b0, {g}));
}
BENCHMARK(BM_DeformedM1);

static void BM_TransformAtlas(benchmark::State& state) {
    std::mt19937 rng(2);
    auto ex = examples::random_surgery_example(rng, 4);
    surgery::Caps caps;
    caps.R = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(surgery::transform_atlas(ex.algebra, ex.data, ex.b0, caps));
}
BENCHMARK(BM_TransformAtlas)->Arg(4)->Arg(12)->Arg(30);

static void BM_FloerRank(benchmark::State& state) {
    std::mt19937 rng(3);
    auto ex = examples::random_gauge_example(rng);
    auto D = floer::floer_differential(ex.algebra, ex.b0);
    for (auto _ : state) benchmark::DoNotOptimize(floer::rank(D));
}
BENCHMARK(BM_FloerRank);

BENCHMARK_MAIN();
