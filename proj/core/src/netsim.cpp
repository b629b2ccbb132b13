#include "por/netsim.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <queue>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "por/error.hpp"
#include "por/sha256.hpp"
#include "por/special_functions.hpp"

namespace por {
namespace {

std::uint64_t seed_from(std::string_view domain, std::uint64_t seed, std::uint64_t index) {
  ByteWriter w;
  w.raw(to_bytes(domain)).u64(seed).u64(index);
  return sha256(w.bytes()).limb(3);
}

RandomBlob draw_blob(const SimConfig& cfg, SimNode& node) {
  if (!cfg.gate_randomness) return RandomBlob{node.source.draw(cfg.blob_bytes), 0};
  BitPool pool = fill_pool(node.source, cfg.pool_pieces * cfg.blob_bytes * 8);
  SuiteReport report = run_suite(pool, cfg.alpha, cfg.block_len);
  if (!report.all_passed) {
    throw Error(ErrorCode::GateFailed, "node " + std::to_string(node.id.value) + " pool failed the randomness suite");
  }
  auto pieces = split_pool(pool, cfg.pool_pieces);
  return select_piece(pieces, node.source);
}

std::uint64_t draw_jitter(const SimConfig& cfg, SimNode& node) {
  return cfg.dt_jitter_ms == 0 ? 0 : node.source.uniform_below(cfg.dt_jitter_ms + 1);
}

struct Delivery {
  std::uint64_t time_ms;
  std::uint64_t sequence;
  std::size_t index;

  bool operator>(const Delivery& o) const {
    return std::tie(time_ms, sequence) > std::tie(o.time_ms, o.sequence);
  }
};

void fill_rates(Metrics& m, std::span<const NodeId> adversaries) {
  m.adversary_win_rate.clear();
  for (NodeId id : adversaries) {
    double wins = id.value < m.win_counts.size() ? static_cast<double>(m.win_counts[id.value]) : 0.0;
    m.adversary_win_rate[id] = m.rounds_completed == 0 ? 0.0 : wins / static_cast<double>(m.rounds_completed);
  }
  if (m.win_counts.size() >= 2 && m.rounds_completed > 0) {
    std::tie(m.chi_square, m.chi_square_p) = chi_square_uniformity(m.win_counts);
  } else {
    m.chi_square = 0.0;
    m.chi_square_p = 1.0;
  }
}

}  // namespace

std::optional<std::uint64_t> SimConfig::adversary_samples(NodeId node) const {
  for (const auto& a : adversaries) {
    if (a.node == node) return a.samples;
  }
  return std::nullopt;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigInvalid, why); };
  if (n_nodes < 1) fail("n_nodes must be at least 1");
  if (rounds < 1) fail("rounds must be at least 1");
  if (blob_bytes < 1) fail("blob_bytes must be at least 1");
  if (base_dt_ms < 1) fail("base_dt_ms must be at least 1 so that t2 > t1");
  if (mode == RoundMode::TimeWeighted && min_dt_ms == 0) fail("min_dt_ms must be positive in time-weighted mode");
  if (latency_min_ms > latency_max_ms) fail("latency_min_ms exceeds latency_max_ms");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (gate_randomness && pool_pieces < 1) fail("pool_pieces must be at least 1");
  std::vector<NodeId> seen;
  for (const auto& a : adversaries) {
    if (a.node.value >= n_nodes) fail("adversary id " + std::to_string(a.node.value) + " is not below n_nodes");
    if (a.samples < 1) fail("adversary samples must be at least 1");
    seen.push_back(a.node);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) fail("adversary listed twice");
  try {
    Curve::by_name(curve);
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::uint64_t derive_node_seed(std::uint64_t seed, NodeId node) { return seed_from("por-node", seed, node.value); }

Hash256 Simulation::state_digest() const {
  Sha256 h;
  h.update(chain_.blocks.front().block_hash.to_bytes());
  for (const auto& [id, point] : keys_.keys) {
    ByteWriter w;
    w.u64(id.value).raw(curve_->encode_point(point));
    h.update(w.bytes());
  }
  return Hash256::from_bytes(h.finalize());
}

Simulation build_sim(const SimConfig& cfg) {
  cfg.validate();
  Simulation sim;
  sim.cfg_ = cfg;
  sim.curve_ = &Curve::by_name(cfg.curve);
  sim.keys_.curve = sim.curve_;
  sim.nodes_.reserve(cfg.n_nodes);
  for (std::uint64_t i = 0; i < cfg.n_nodes; ++i) {
    NodeId id{i};
    EntropySource source = EntropySource::seeded(derive_node_seed(cfg.seed, id));
    KeyPair keys = keygen(*sim.curve_, source);
    sim.keys_.keys.emplace(id, keys.K);
    sim.nodes_.push_back(SimNode{id, std::move(source), keys, cfg.adversary_samples(id)});
  }
  sim.chain_ = new_chain(cfg.network_id, cfg.round_config());
  sim.network_.emplace(EntropySource::seeded(seed_from("por-network", cfg.seed, 0)));
  return sim;
}

NodeStep honest_step(const SimConfig& cfg, const Curve& curve, SimNode& node, std::uint64_t round,
                     std::uint64_t clock_ms) {
  RandomBlob blob = draw_blob(cfg, node);
  const std::uint64_t t1 = clock_ms;
  const std::uint64_t t2 = t1 + cfg.base_dt_ms + draw_jitter(cfg, node);
  Contribution c = make_contribution(curve, node.id, round, blob, t1, t2, node.keys, node.source);
  return NodeStep{std::move(c), std::move(blob)};
}

NodeStep adversary_step(const SimConfig& cfg, const Curve& curve, SimNode& node, std::uint64_t samples,
                        std::uint64_t round, const Hash256& prevhash, std::uint64_t clock_ms) {
  std::optional<RandomBlob> best;
  Hash256 best_d;
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(samples, 1); ++i) {
    RandomBlob candidate = draw_blob(cfg, node);
    Contribution probe;
    probe.first_hash = sha256(candidate.bytes);
    Hash256 d = score_large(probe, prevhash);
    bool better = !best || (cfg.selection_rule == SelectionRule::Min ? d < best_d : d > best_d);
    if (better) {
      best = std::move(candidate);
      best_d = d;
    }
  }
  const std::uint64_t t1 = clock_ms;
  const std::uint64_t t2 = t1 + cfg.base_dt_ms + samples * cfg.dt_per_sample_ms;
  Contribution c = make_contribution(curve, node.id, round, *best, t1, t2, node.keys, node.source);
  return NodeStep{std::move(c), std::move(*best)};
}

SimResult run(Simulation& sim) {
  const SimConfig& cfg = sim.cfg_;
  const RoundConfig round_cfg = cfg.round_config();
  EntropySource& net = *sim.network_;

  Metrics metrics;
  metrics.win_counts.assign(cfg.n_nodes, 0);
  std::vector<NodeId> adversary_ids;
  for (const auto& a : cfg.adversaries) adversary_ids.push_back(a.node);

  for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
    const Block& tip = sim.chain_.tip();
    const std::uint64_t height = tip.height + 1;
    const std::uint64_t start = sim.clock_ms_;

    std::vector<NodeStep> steps;
    steps.reserve(sim.nodes_.size());
    for (auto& node : sim.nodes_) {
      try {
        // Without a shared target the grinding adversary has nothing to aim at.
        if (node.adversary_samples && cfg.mode != RoundMode::SmallSync) {
          steps.push_back(adversary_step(cfg, *sim.curve_, node, *node.adversary_samples, height, tip.block_hash, start));
        } else {
          steps.push_back(honest_step(cfg, *sim.curve_, node, height, start));
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::GateFailed) throw;
        ++metrics.rejected_contributions["GateFailed"];
      }
    }

    // Deliveries are ordered by arrival time; run_round is order-invariant,
    // so this only shapes the recorded timestamps.
    std::priority_queue<Delivery, std::vector<Delivery>, std::greater<>> queue;
    const std::uint64_t latency_span = cfg.latency_max_ms - cfg.latency_min_ms + 1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      std::uint64_t latency = cfg.latency_min_ms + net.uniform_below(latency_span);
      queue.push(Delivery{steps[i].contribution.t2 + latency, i, i});
    }
    std::vector<Contribution> arrived;
    arrived.reserve(steps.size());
    std::uint64_t close_ms = start + 1;
    while (!queue.empty()) {
      Delivery d = queue.top();
      queue.pop();
      arrived.push_back(steps[d.index].contribution);
      close_ms = std::max(close_ms, d.time_ms);
    }

    RoundResult result;
    try {
      result = run_round(height, arrived, tip.block_hash, round_cfg, sim.keys_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoValidContributions) throw;
      ++metrics.rounds_skipped;
      sim.clock_ms_ = close_ms;
      continue;
    }
    for (const auto& [node, reason] : result.rejected) ++metrics.rejected_contributions[std::string(to_string(reason))];

    auto winner_step = std::find_if(steps.begin(), steps.end(),
                                    [&](const NodeStep& s) { return s.contribution.node == result.winner; });
    std::vector<Bytes> txs;
    txs.reserve(cfg.txs_per_block);
    for (std::uint64_t t = 0; t < cfg.txs_per_block; ++t) txs.push_back(net.draw(32));
    Block block = build_block(result, cfg.mode, winner_step->blob.bytes, std::move(txs), tip, close_ms);
    sim.chain_.blocks.push_back(std::move(block));

    ++metrics.win_counts[result.winner.value];
    ++metrics.rounds_completed;
    sim.clock_ms_ = close_ms;
  }

  fill_rates(metrics, adversary_ids);
  return SimResult{sim.chain_, std::move(metrics), sim.keys_};
}

SimResult run(const SimConfig& cfg) {
  Simulation sim = build_sim(cfg);
  return run(sim);
}

std::vector<SimResult> run_seeds(const SimConfig& base, std::span<const std::uint64_t> seeds, unsigned jobs) {
  std::vector<SimResult> results(seeds.size());
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(seeds.size(), 1)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      SimConfig cfg = base;
      cfg.seed = seeds[i];
      results[i] = run(cfg);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(seeds.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        SimConfig cfg = base;
        cfg.seed = seeds[i];
        results[i] = run(cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::pair<double, double> chi_square_uniformity(std::span<const std::uint64_t> win_counts) {
  if (win_counts.size() < 2) throw Error(ErrorCode::DegenerateInput, "chi-square needs at least 2 nodes");
  std::uint64_t total = 0;
  for (auto c : win_counts) total += c;
  if (total == 0) throw Error(ErrorCode::DegenerateInput, "chi-square needs at least one round");
  const double expected = static_cast<double>(total) / static_cast<double>(win_counts.size());
  double chi = 0.0;
  for (auto c : win_counts) {
    double dev = static_cast<double>(c) - expected;
    chi += dev * dev / expected;
  }
  return {chi, chi_square_sf(chi, static_cast<double>(win_counts.size() - 1))};
}

std::vector<AdvantageRow> advantage_report(const Metrics& metrics, const SimConfig& cfg) {
  std::vector<AdvantageRow> rows;
  const double fair = 1.0 / static_cast<double>(cfg.n_nodes);
  for (const auto& a : cfg.adversaries) {
    auto it = metrics.adversary_win_rate.find(a.node);
    double rate = it == metrics.adversary_win_rate.end() ? 0.0 : it->second;
    rows.push_back(AdvantageRow{a.node, a.samples, rate, fair, rate / fair});
  }
  return rows;
}

Metrics merge_metrics(std::span<const Metrics> runs) {
  Metrics merged;
  if (runs.empty()) return merged;
  merged.win_counts.assign(runs.front().win_counts.size(), 0);
  std::vector<NodeId> adversaries;
  for (const auto& [id, rate] : runs.front().adversary_win_rate) adversaries.push_back(id);
  for (const auto& m : runs) {
    if (m.win_counts.size() != merged.win_counts.size()) {
      throw Error(ErrorCode::InvalidArgument, "cannot merge metrics of different network sizes");
    }
    for (std::size_t i = 0; i < m.win_counts.size(); ++i) merged.win_counts[i] += m.win_counts[i];
    merged.rounds_completed += m.rounds_completed;
    merged.rounds_skipped += m.rounds_skipped;
    for (const auto& [reason, n] : m.rejected_contributions) merged.rejected_contributions[reason] += n;
  }
  fill_rates(merged, adversaries);
  return merged;
}

std::string metrics_json(const Metrics& metrics, int indent) {
  nlohmann::ordered_json j;
  j["rounds_completed"] = metrics.rounds_completed;
  j["rounds_skipped"] = metrics.rounds_skipped;
  j["win_counts"] = metrics.win_counts;
  j["chi_square"] = metrics.chi_square;
  j["chi_square_p"] = metrics.chi_square_p;
  j["adversary_win_rate"] = nlohmann::ordered_json::object();
  for (const auto& [id, rate] : metrics.adversary_win_rate) j["adversary_win_rate"][std::to_string(id.value)] = rate;
  j["rejected_contributions"] = nlohmann::ordered_json::object();
  for (const auto& [reason, n] : metrics.rejected_contributions) j["rejected_contributions"][reason] = n;
  return j.dump(indent);
}

std::string metrics_csv(const Metrics& metrics) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "id,wins,win_rate\n";
  for (std::size_t i = 0; i < metrics.win_counts.size(); ++i) {
    double rate = metrics.rounds_completed == 0
                      ? 0.0
                      : static_cast<double>(metrics.win_counts[i]) / static_cast<double>(metrics.rounds_completed);
    os << i << ',' << metrics.win_counts[i] << ',' << rate << '\n';
  }
  os << "summary,chi_square=" << metrics.chi_square << ",p=" << metrics.chi_square_p << '\n';
  return os.str();
}

}  // namespace por
