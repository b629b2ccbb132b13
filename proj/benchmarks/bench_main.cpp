#include <benchmark/benchmark.h>

#include "por/consensus.hpp"
#include "por/ecc.hpp"
#include "por/netsim.hpp"
#include "por/randomness.hpp"
#include "por/sha256.hpp"

namespace {

void BM_Sha256(benchmark::State& state) {
  por::Bytes data(static_cast<std::size_t>(state.range(0)), 0x5a);
  for (auto _ : state) benchmark::DoNotOptimize(por::sha256(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(64)->Arg(1024)->Arg(1 << 17);

void BM_ScalarMulGenerator(benchmark::State& state) {
  const auto& curve = state.range(0) == 0 ? por::Curve::test64() : por::Curve::secp256k1();
  auto src = por::EntropySource::seeded(1);
  const por::UInt256 k = por::random_scalar(curve, src);
  for (auto _ : state) benchmark::DoNotOptimize(curve.mul(k, curve.generator()));
  state.SetLabel(curve.name());
}
BENCHMARK(BM_ScalarMulGenerator)->Arg(0)->Arg(1);

void BM_Verify(benchmark::State& state) {
  const auto& curve = state.range(0) == 0 ? por::Curve::test64() : por::Curve::secp256k1();
  auto src = por::EntropySource::seeded(2);
  auto keys = por::keygen(curve, src);
  const por::Bytes msg = por::to_bytes("benchmark message");
  auto sig = por::sign(curve, keys, msg, src);
  for (auto _ : state) benchmark::DoNotOptimize(por::verify(curve, keys.K, msg, sig));
  state.SetLabel(curve.name());
}
BENCHMARK(BM_Verify)->Arg(0)->Arg(1);

void BM_RandomnessSuite(benchmark::State& state) {
  auto src = por::EntropySource::seeded(3);
  auto pool = por::fill_pool(src, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(por::run_suite(pool));
}
BENCHMARK(BM_RandomnessSuite)->Arg(1 << 20);

void BM_RunRound(benchmark::State& state) {
  const auto& curve = por::Curve::test64();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  auto src = por::EntropySource::seeded(4);
  por::KeyDirectory dir;
  std::vector<por::Contribution> cs;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto keys = por::keygen(curve, src);
    dir.keys[por::NodeId{i}] = keys.K;
    por::RandomBlob blob{src.draw(1024), 0};
    cs.push_back(por::make_contribution(curve, por::NodeId{i}, 1, blob, 0, 150, keys, src));
  }
  const por::Hash256 prev = por::sha256("prev");
  const por::RoundConfig cfg{por::RoundMode::TimeWeighted, por::SelectionRule::Min, 100};
  for (auto _ : state) benchmark::DoNotOptimize(por::run_round(1, cs, prev, cfg, dir));
}
BENCHMARK(BM_RunRound)->Arg(16)->Arg(64);

void BM_SimulateRounds(benchmark::State& state) {
  por::SimConfig cfg;
  cfg.n_nodes = 16;
  cfg.rounds = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(por::run(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateRounds)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
