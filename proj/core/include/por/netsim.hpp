#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "por/consensus.hpp"
#include "por/entropy.hpp"
#include "por/ledger.hpp"
#include "por/randomness.hpp"

namespace por {

/// A node that draws `samples` candidate blobs per round and keeps the one
/// closest to the target (the grinding attack).
struct AdversarySpec {
  NodeId node;
  std::uint64_t samples = 1;

  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

struct SimConfig {
  std::uint64_t n_nodes = 16;
  std::vector<AdversarySpec> adversaries;
  RoundMode mode = RoundMode::LargePrevhash;
  SelectionRule selection_rule = SelectionRule::Min;
  std::uint64_t rounds = 100;
  std::uint64_t seed = 1;
  std::uint64_t blob_bytes = 1024;
  std::uint64_t min_dt_ms = 100;
  std::uint64_t base_dt_ms = 100;
  std::uint64_t dt_jitter_ms = 20;
  std::uint64_t dt_per_sample_ms = 100;
  std::uint64_t latency_min_ms = 5;
  std::uint64_t latency_max_ms = 50;
  bool gate_randomness = false;
  // Randomness gate parameters, used only when gate_randomness is set.
  std::uint64_t pool_pieces = 256;
  double alpha = kDefaultAlpha;
  std::uint64_t block_len = kDefaultBlockLen;
  std::uint64_t txs_per_block = 2;
  std::string network_id = "por-sim";
  std::string curve = "test64";

  RoundConfig round_config() const { return RoundConfig{mode, selection_rule, min_dt_ms}; }
  std::optional<std::uint64_t> adversary_samples(NodeId node) const;

  /// Throws ConfigInvalid with the first violated constraint.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct Metrics {
  std::vector<std::uint64_t> win_counts;
  std::map<NodeId, double> adversary_win_rate;
  double chi_square = 0.0;
  double chi_square_p = 1.0;
  std::uint64_t rounds_completed = 0;
  std::uint64_t rounds_skipped = 0;
  std::map<std::string, std::uint64_t> rejected_contributions;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct SimNode {
  NodeId id;
  EntropySource source;
  KeyPair keys;
  std::optional<std::uint64_t> adversary_samples;
};

/// A contribution plus the blob behind it, kept so the winner can reveal.
struct NodeStep {
  Contribution contribution;
  RandomBlob blob;
};

struct SimResult {
  Chain chain;
  Metrics metrics;
  KeyDirectory keys;
};

class Simulation;
SimResult run(Simulation& sim);

class Simulation {
 public:
  const SimConfig& config() const noexcept { return cfg_; }
  const Curve& curve() const noexcept { return *curve_; }
  const KeyDirectory& keys() const noexcept { return keys_; }
  const Chain& chain() const noexcept { return chain_; }
  std::vector<SimNode>& nodes() noexcept { return nodes_; }
  const std::vector<SimNode>& nodes() const noexcept { return nodes_; }

  /// Digest of the public state (keys, genesis); equal configs give equal digests.
  Hash256 state_digest() const;

 private:
  friend Simulation build_sim(const SimConfig& cfg);
  friend SimResult run(Simulation& sim);

  SimConfig cfg_;
  const Curve* curve_ = nullptr;
  std::vector<SimNode> nodes_;
  KeyDirectory keys_;
  Chain chain_;
  std::optional<EntropySource> network_;
  std::uint64_t clock_ms_ = 0;
};

/// Per-node sources are seeded from (cfg.seed, node id); keys come from them.
Simulation build_sim(const SimConfig& cfg);

/// Seed of node `node`'s entropy source for simulation seed `seed`.
std::uint64_t derive_node_seed(std::uint64_t seed, NodeId node);

/// Draws one blob (through the randomness gate when enabled), stamps t1 =
/// clock and t2 = t1 + base_dt + jitter. Throws GateFailed when the pool
/// fails the suite.
NodeStep honest_step(const SimConfig& cfg, const Curve& curve, SimNode& node, std::uint64_t round,
                     std::uint64_t clock_ms);

/// Draws `samples` candidate blobs and keeps the extremal score_large one.
/// Δt = base_dt + samples · dt_per_sample (no jitter).
NodeStep adversary_step(const SimConfig& cfg, const Curve& curve, SimNode& node, std::uint64_t samples,
                        std::uint64_t round, const Hash256& prevhash, std::uint64_t clock_ms);

SimResult run(Simulation& sim);
SimResult run(const SimConfig& cfg);

/// Runs one simulation per seed on up to `jobs` threads; results are in seed order.
std::vector<SimResult> run_seeds(const SimConfig& base, std::span<const std::uint64_t> seeds, unsigned jobs);

/// Pearson χ² against the uniform distribution, with N-1 degrees of freedom.
/// Throws DegenerateInput for fewer than 2 nodes or zero total.
std::pair<double, double> chi_square_uniformity(std::span<const std::uint64_t> win_counts);

struct AdvantageRow {
  NodeId node;
  std::uint64_t samples = 1;
  double win_rate = 0.0;
  double fair_share = 0.0;
  double ratio = 0.0;
};

std::vector<AdvantageRow> advantage_report(const Metrics& metrics, const SimConfig& cfg);

/// Sums counts over runs of the same network size and recomputes rates and χ².
Metrics merge_metrics(std::span<const Metrics> runs);

std::string metrics_json(const Metrics& metrics, int indent = 2);
/// id,wins,win_rate rows, then a summary row carrying χ² and p.
std::string metrics_csv(const Metrics& metrics);

}  // namespace por
