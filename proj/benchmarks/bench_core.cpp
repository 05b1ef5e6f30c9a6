#include <benchmark/benchmark.h>

#include "samgp/eval.hpp"
#include "samgp/evolve.hpp"
#include "samgp/gpm.hpp"
#include "samgp/sharpness.hpp"

using namespace samgp;

namespace {

SplitPair levy_split(std::size_t points)
{
    Rng rng{1};
    const auto d = sample_synthetic(SyntheticFn::Levy, points, rng);
    return monte_carlo_split(d, 0.5, rng);
}

// A full tree of the given depth over two features.
ExprTree fixed_tree(int depth)
{
    Rng rng{7};
    return full_tree(depth, 2, VariationConfig{}, rng);
}

// Finite everywhere, so sharpness scoring runs in full instead of returning WORST early.
const ExprTree& smooth_tree()
{
    static const auto t = ExprTree::parse("(add (mul (sin x0) (cos x1)) (sub (mul x0 x0) (tanh (mul 0.5 x1))))");
    return t;
}

void BM_Evaluate(benchmark::State& state)
{
    const auto split = levy_split(static_cast<std::size_t>(state.range(1)));
    const auto tree = fixed_tree(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(tree, split.train.features));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tree.size() * split.train.rows()));
}
BENCHMARK(BM_Evaluate)->Args({4, 100})->Args({8, 100})->Args({8, 1000});

void BM_SamIn(benchmark::State& state)
{
    const auto split = levy_split(200);
    const auto& tree = smooth_tree();
    const SamConfig cfg{SamMode::In, 10, 0.1};
    Rng rng{3};
    const auto noise = draw_sam_in_noise(split.train, cfg, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sam_in_sharpness(tree, noise, cfg, rng));
    }
}
BENCHMARK(BM_SamIn);

void BM_SamOut(benchmark::State& state)
{
    const auto split = levy_split(200);
    const auto s = evaluate(smooth_tree(), split.train.features);
    const SamConfig cfg{SamMode::Out, static_cast<std::size_t>(state.range(0)), 0.1};
    Rng rng{4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sam_out_sharpness(s, split.train.target, cfg, rng));
    }
}
BENCHMARK(BM_SamOut)->Arg(10)->Arg(20)->Arg(50);

void BM_Phenotype(benchmark::State& state)
{
    const auto split = levy_split(200);
    const auto tree = fixed_tree(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_phenotype(tree, split.train.features));
    }
}
BENCHMARK(BM_Phenotype)->Arg(4)->Arg(8);

void BM_Generation(benchmark::State& state)
{
    const auto split = levy_split(100);
    RunConfig cfg;
    cfg.sam.mode = static_cast<SamMode>(state.range(0));
    cfg.sam.n = cfg.sam.mode == SamMode::Out ? 20 : 10;
    for (auto _ : state) {
        state.PauseTiming();
        Evolution evo(cfg, split);
        state.ResumeTiming();
        evo.step();
    }
}
BENCHMARK(BM_Generation)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
