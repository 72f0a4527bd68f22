#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "seedscope/metrics.hpp"

namespace {

seedscope::EmbeddingModel random_model(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> normal;
  std::vector<std::string> words;
  std::vector<float> rows;
  for (std::size_t i = 0; i < n; ++i) {
    words.push_back("w" + std::to_string(i));
    for (std::size_t d = 0; d < dim; ++d) rows.push_back(normal(rng));
  }
  return seedscope::EmbeddingModel(std::move(words), std::move(rows), dim);
}

seedscope::Vector direction(std::size_t dim) {
  seedscope::Vector v(dim);
  for (std::size_t d = 0; d < dim; ++d) v[d] = static_cast<double>(d % 7) - 3.0;
  return v.normalized();
}

void BM_RankVocabulary(benchmark::State& state) {
  const auto model = random_model(static_cast<std::size_t>(state.range(0)), 100);
  const auto dir = direction(100);
  for (auto _ : state) benchmark::DoNotOptimize(seedscope::rank_vocabulary(model, dir));
}
BENCHMARK(BM_RankVocabulary)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Extremes(benchmark::State& state) {
  const auto model = random_model(static_cast<std::size_t>(state.range(0)), 100);
  const auto dir = direction(100);
  for (auto _ : state) benchmark::DoNotOptimize(seedscope::extremes(model, dir, 10));
}
BENCHMARK(BM_Extremes)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PcaSubspace(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = random_model(2 * n, 300);
  seedscope::SeedSet a{"a", "", {}, "", ""};
  seedscope::SeedSet b{"b", "", {}, "", ""};
  for (std::size_t i = 0; i < n; ++i) {
    a.seeds.push_back(model.word(i));
    b.seeds.push_back(model.word(n + i));
  }
  const auto pair = seedscope::make_pair("p", a, b);
  for (auto _ : state) benchmark::DoNotOptimize(seedscope::pca_subspace(pair, model, 10));
}
BENCHMARK(BM_PcaSubspace)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

}  // namespace
