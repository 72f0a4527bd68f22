#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>

#include "seedscope/trainer.hpp"

namespace {

seedscope::Corpus synthetic_corpus(std::size_t documents, std::size_t vocabulary) {
  std::mt19937_64 rng(7);
  // Zipf-like draws: index ~ vocabulary^u.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  seedscope::Corpus corpus{"bench", {}};
  for (std::size_t d = 0; d < documents; ++d) {
    seedscope::Document doc;
    doc.id = "d" + std::to_string(d);
    for (int s = 0; s < 5; ++s) {
      seedscope::Sentence sentence;
      for (int t = 0; t < 20; ++t) {
        const auto index = static_cast<std::size_t>(std::pow(static_cast<double>(vocabulary), u(rng))) - 1;
        sentence.push_back("w" + std::to_string(index));
      }
      doc.sentences.push_back(std::move(sentence));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void BM_TrainDeterministic(benchmark::State& state) {
  const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 2000);
  seedscope::TrainConfig config;
  config.dimension = 50;
  config.epochs = 1;
  std::size_t tokens = 0;
  for (const auto& d : corpus.documents) tokens += d.token_count();
  for (auto _ : state) benchmark::DoNotOptimize(seedscope::train(corpus, config));
  state.counters["tokens/s"] = benchmark::Counter(static_cast<double>(tokens * state.iterations()), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_TrainDeterministic)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TrainThroughput(benchmark::State& state) {
  const auto corpus = synthetic_corpus(1000, 2000);
  seedscope::TrainConfig config;
  config.dimension = 50;
  config.epochs = 1;
  config.mode = seedscope::TrainingMode::throughput;
  config.threads = static_cast<unsigned>(state.range(0));
  std::size_t tokens = 0;
  for (const auto& d : corpus.documents) tokens += d.token_count();
  for (auto _ : state) benchmark::DoNotOptimize(seedscope::train(corpus, config));
  state.counters["tokens/s"] = benchmark::Counter(static_cast<double>(tokens * state.iterations()), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_TrainThroughput)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
