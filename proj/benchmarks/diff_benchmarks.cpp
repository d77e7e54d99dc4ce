#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <string>

#include "cdimpact/builtin.hpp"
#include "cdimpact/checklist.hpp"
#include "cdimpact/diff.hpp"
#include "cdimpact/matching.hpp"
#include "cdimpact/similarity.hpp"
#include "cdimpact/synthetic.hpp"

using namespace cdimpact;

namespace {

struct BenchPair {
    std::shared_ptr<const Model> old_model;
    std::shared_ptr<const Model> new_model;
};

// Model pairs are expensive to generate, so they are built once per size
// and shared across benchmark repetitions.
const BenchPair& pair_for(int classes) {
    static std::map<int, BenchPair> cache;
    auto it = cache.find(classes);
    if (it == cache.end()) {
        SyntheticResult r = generate_synthetic(classes, classes / 8, 42);
        BenchPair pair{std::make_shared<Model>(std::move(r.old_model)),
                       std::make_shared<Model>(std::move(r.new_model))};
        it = cache.emplace(classes, std::move(pair)).first;
    }
    return it->second;
}

}  // namespace

static void BM_Levenshtein(benchmark::State& state) {
    const std::string a = "ChangeImpactAnalysisChecklist";
    const std::string b = "ChangeImpactAnalyzerChecklists";
    for (auto _ : state) {
        benchmark::DoNotOptimize(levenshtein_distance(a, b));
    }
}
BENCHMARK(BM_Levenshtein);

static void BM_MatchAndDiff(benchmark::State& state) {
    const BenchPair& pair = pair_for(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Matching match = match_models(*pair.old_model, *pair.new_model);
        DiffModel dm = compute_diff(pair.old_model, pair.new_model, match);
        benchmark::DoNotOptimize(dm.entries().size());
    }
}
BENCHMARK(BM_MatchAndDiff)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_RuleEvaluation(benchmark::State& state) {
    const BenchPair& pair = pair_for(1000);
    Matching match = match_models(*pair.old_model, *pair.new_model);
    DiffModel dm = compute_diff(pair.old_model, pair.new_model, match);
    RuleSet rules = parse_builtin_rules();
    ExtensionRegistry registry;
    register_builtin_providers(registry);
    registry.add_extensions(parse_builtin_extensions());
    EngineConfig config;
    for (auto _ : state) {
        std::vector<ChecklistHint> hints =
            evaluate_all(rules, dm, registry, config, UnresolvedPolicy::Flag);
        Checklist cl = build_checklist(rules, hints);
        std::string text = render_text(cl, ChecklistMode::Short);
        benchmark::DoNotOptimize(text.size());
    }
}
BENCHMARK(BM_RuleEvaluation)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
