#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

#include "por/ecc.hpp"
#include "por/error.hpp"
#include "por/ledger.hpp"
#include "por/randomness.hpp"

namespace por::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

Error config_error(const std::string& what) { return Error(ErrorCode::ConfigInvalid, what); }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidArgument:
    case ErrorCode::KeyLengthMismatch:
    case ErrorCode::MessageTooLong:
    case ErrorCode::PoolTooShort:
    case ErrorCode::BlockLenInvalid:
    case ErrorCode::IndivisiblePool:
    case ErrorCode::DegenerateInput:
      return 1;
    default:
      return 2;
  }
}

OutputFormat parse_format(const std::string& text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  throw config_error("unknown format '" + text + "' (expected text, json or csv)");
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (text.empty() || text.front() == '-') throw std::invalid_argument(text);
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    throw config_error("bad " + what + " '" + text + "'");
  }
  if (used != text.size()) throw config_error("bad " + what + " '" + text + "'");
  return v;
}

AdversarySpec parse_adversary(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw config_error("adversary must look like id:samples, got '" + text + "'");
  return AdversarySpec{NodeId{parse_u64(text.substr(0, colon), "adversary id")},
                       parse_u64(text.substr(colon + 1), "adversary samples")};
}

std::pair<std::uint64_t, std::uint64_t> parse_latency(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw config_error("latency must look like min:max, got '" + text + "'");
  return {parse_u64(text.substr(0, colon), "latency"), parse_u64(text.substr(colon + 1), "latency")};
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> content) {
  write_file(path, std::string_view(reinterpret_cast<const char*>(content.data()), content.size()));
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path.string() + ": " + e.what());
  }
}

// Flags shared by simulate and attack. Unset flags leave the config file
// (or the built-in default) in place.
struct SimFlags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> nodes, rounds, seed, blob_bytes, min_dt, base_dt, jitter, dt_per_sample, txs,
      pool_pieces, block_len;
  std::optional<std::string> seeds, mode, rule, latency, curve, network_id, chain, metrics, keys_out, format;
  std::optional<unsigned> jobs;
  std::optional<double> alpha;
  std::vector<std::string> adversaries;
  bool gate = false;
  bool no_gate = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config, "JSON config file (flags override its values)");
    cmd.add_option("--nodes", nodes, "number of nodes");
    cmd.add_option("--rounds", rounds, "rounds to simulate");
    cmd.add_option("--seed", seed, "simulation seed");
    cmd.add_option("--seeds", seeds, "inclusive seed range a..b");
    cmd.add_option("--jobs", jobs, "parallel workers for --seeds");
    cmd.add_option("--mode", mode, "small | large | weighted");
    cmd.add_option("--rule", rule, "min | max");
    cmd.add_option("--adversary", adversaries, "grinding node as id:samples (repeatable)");
    cmd.add_option("--blob-bytes", blob_bytes, "bytes per random blob");
    cmd.add_option("--min-dt", min_dt, "minimum t2 - t1 in ms (time-weighted mode)");
    cmd.add_option("--base-dt", base_dt, "honest generation time in ms");
    cmd.add_option("--jitter", jitter, "honest jitter bound in ms");
    cmd.add_option("--dt-per-sample", dt_per_sample, "extra ms per adversary sample");
    cmd.add_option("--latency", latency, "delivery latency range min:max in ms");
    cmd.add_flag("--gate", gate, "test each node's pool before use");
    cmd.add_flag("--no-gate", no_gate, "skip pool testing");
    cmd.add_option("--pool-pieces", pool_pieces, "pieces per gated pool");
    cmd.add_option("--alpha", alpha, "significance level of the gate");
    cmd.add_option("--block-len", block_len, "block length of the block frequency test");
    cmd.add_option("--txs", txs, "transactions per block");
    cmd.add_option("--network-id", network_id, "network id recorded in genesis");
    cmd.add_option("--curve", curve, "toy | test64 | secp256k1");
    cmd.add_option("--chain", chain, "chain output (JSON lines)");
    cmd.add_option("--metrics", metrics, "metrics output");
    cmd.add_option("--keys-out", keys_out, "public key directory output");
    cmd.add_option("--format", format, "text | json | csv");
  }

  CliConfig resolve() const {
    CliConfig cfg = config ? load_config_file(*config) : CliConfig{};
    SimConfig& s = cfg.sim;
    if (nodes) s.n_nodes = *nodes;
    if (rounds) s.rounds = *rounds;
    if (seed) {
      s.seed = *seed;
      cfg.seeds.clear();
    }
    if (seeds) cfg.seeds = parse_seed_range(*seeds);
    if (jobs) cfg.jobs = *jobs;
    if (mode) s.mode = parse_round_mode(*mode);
    if (rule) s.selection_rule = parse_selection_rule(*rule);
    if (!adversaries.empty()) {
      s.adversaries.clear();
      for (const auto& a : adversaries) s.adversaries.push_back(parse_adversary(a));
    }
    if (blob_bytes) s.blob_bytes = *blob_bytes;
    if (min_dt) s.min_dt_ms = *min_dt;
    if (base_dt) s.base_dt_ms = *base_dt;
    if (jitter) s.dt_jitter_ms = *jitter;
    if (dt_per_sample) s.dt_per_sample_ms = *dt_per_sample;
    if (latency) std::tie(s.latency_min_ms, s.latency_max_ms) = parse_latency(*latency);
    if (gate && no_gate) throw config_error("--gate and --no-gate are exclusive");
    if (gate) s.gate_randomness = true;
    if (no_gate) s.gate_randomness = false;
    if (pool_pieces) s.pool_pieces = *pool_pieces;
    if (alpha) s.alpha = *alpha;
    if (block_len) s.block_len = *block_len;
    if (txs) s.txs_per_block = *txs;
    if (network_id) s.network_id = *network_id;
    if (curve) s.curve = *curve;
    if (chain) cfg.chain_path = *chain;
    if (metrics) cfg.metrics_path = *metrics;
    if (keys_out) cfg.keys_path = *keys_out;
    if (format) cfg.format = parse_format(*format);
    if (cfg.jobs == 0) throw config_error("jobs must be at least 1");
    s.validate();
    return cfg;
  }
};

std::vector<std::uint64_t> seed_list(const CliConfig& cfg) {
  return cfg.seeds.empty() ? std::vector<std::uint64_t>{cfg.sim.seed} : cfg.seeds;
}

ordered_json metrics_object(const Metrics& m) { return ordered_json::parse(metrics_json(m, -1)); }

std::string metrics_text(const Metrics& m, const SimConfig& cfg) {
  std::ostringstream os;
  os << "rounds completed: " << m.rounds_completed << ", skipped: " << m.rounds_skipped << '\n';
  os << "chi-square: " << m.chi_square << " (p = " << m.chi_square_p << ", df = " << m.win_counts.size() - 1 << ")\n";
  os << "wins:";
  for (std::size_t i = 0; i < m.win_counts.size(); ++i) os << ' ' << i << '=' << m.win_counts[i];
  os << '\n';
  for (const auto& row : advantage_report(m, cfg)) {
    os << "adversary " << row.node.value << " (k=" << row.samples << "): win rate " << row.win_rate << ", ratio "
       << row.ratio << '\n';
  }
  if (!m.rejected_contributions.empty()) {
    os << "rejected:";
    for (const auto& [reason, n] : m.rejected_contributions) os << ' ' << reason << '=' << n;
    os << '\n';
  }
  return os.str();
}

int cmd_simulate(const SimFlags& flags, std::ostream& out) {
  CliConfig cfg = flags.resolve();
  const auto seeds = seed_list(cfg);
  std::vector<SimResult> results = run_seeds(cfg.sim, seeds, cfg.jobs);
  const bool multi = seeds.size() > 1;

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (cfg.chain_path) save_chain(results[i].chain, multi ? seed_path(*cfg.chain_path, seeds[i]) : *cfg.chain_path);
    if (cfg.keys_path) {
      save_key_directory(results[i].keys, multi ? seed_path(*cfg.keys_path, seeds[i]) : *cfg.keys_path);
    }
  }

  std::vector<Metrics> all;
  for (const auto& r : results) all.push_back(r.metrics);
  const Metrics merged = multi ? merge_metrics(all) : all.front();

  std::string json_text;
  if (multi) {
    ordered_json j;
    j["seeds"] = seeds;
    j["merged"] = metrics_object(merged);
    j["per_seed"] = ordered_json::array();
    for (const auto& m : all) j["per_seed"].push_back(metrics_object(m));
    json_text = j.dump(2) + "\n";
  } else {
    json_text = metrics_json(merged) + "\n";
  }
  if (cfg.metrics_path) {
    write_file(*cfg.metrics_path, cfg.format == OutputFormat::Csv ? metrics_csv(merged) : json_text);
  }

  switch (cfg.format) {
    case OutputFormat::Json: out << json_text; break;
    case OutputFormat::Csv: out << metrics_csv(merged); break;
    case OutputFormat::Text:
      if (multi) out << "seeds " << seeds.front() << ".." << seeds.back() << " (merged)\n";
      out << metrics_text(merged, cfg.sim);
      break;
  }
  return 0;
}

int cmd_attack(const SimFlags& flags, std::ostream& out) {
  CliConfig cfg = flags.resolve();
  if (cfg.sim.adversaries.empty()) throw config_error("attack needs at least one --adversary");
  const auto seeds = seed_list(cfg);

  auto ensemble = [&](RoundMode mode) {
    SimConfig sim = cfg.sim;
    sim.mode = mode;
    std::vector<Metrics> all;
    for (auto& r : run_seeds(sim, seeds, cfg.jobs)) all.push_back(std::move(r.metrics));
    return advantage_report(merge_metrics(all), sim);
  };
  const auto unweighted = ensemble(RoundMode::LargePrevhash);
  const auto weighted = ensemble(RoundMode::TimeWeighted);

  auto rows_json = [](const std::vector<AdvantageRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"node", r.node.value}, {"samples", r.samples}, {"win_rate", r.win_rate},
                     {"fair_share", r.fair_share}, {"ratio", r.ratio}});
    }
    return arr;
  };

  switch (cfg.format) {
    case OutputFormat::Json: {
      ordered_json j;
      j["seeds"] = seeds;
      j["rounds"] = cfg.sim.rounds;
      j["n_nodes"] = cfg.sim.n_nodes;
      j["unweighted"] = rows_json(unweighted);
      j["weighted"] = rows_json(weighted);
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << std::setprecision(17) << "node,samples,unweighted_win_rate,unweighted_ratio,weighted_win_rate,weighted_ratio\n";
      for (std::size_t i = 0; i < unweighted.size(); ++i) {
        out << unweighted[i].node.value << ',' << unweighted[i].samples << ',' << unweighted[i].win_rate << ','
            << unweighted[i].ratio << ',' << weighted[i].win_rate << ',' << weighted[i].ratio << '\n';
      }
      break;
    case OutputFormat::Text:
      out << "seeds: " << seeds.size() << ", rounds: " << cfg.sim.rounds << ", nodes: " << cfg.sim.n_nodes
          << ", fair share: " << 1.0 / static_cast<double>(cfg.sim.n_nodes) << '\n';
      out << std::left << std::setw(6) << "node" << std::setw(8) << "k" << std::setw(24) << "unweighted rate/ratio"
          << "weighted rate/ratio\n";
      for (std::size_t i = 0; i < unweighted.size(); ++i) {
        std::ostringstream u, w;
        u << std::fixed << std::setprecision(4) << unweighted[i].win_rate << " / " << std::setprecision(2)
          << unweighted[i].ratio;
        w << std::fixed << std::setprecision(4) << weighted[i].win_rate << " / " << std::setprecision(2)
          << weighted[i].ratio;
        out << std::setw(6) << unweighted[i].node.value << std::setw(8) << unweighted[i].samples << std::setw(24)
            << u.str() << w.str() << '\n';
      }
      break;
  }
  return 0;
}

struct RngFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> file;
  bool os = false;
  std::uint64_t bits = 1u << 20;
  double alpha = kDefaultAlpha;
  std::uint64_t block_len = kDefaultBlockLen;
  std::string format = "text";
};

int cmd_rngtest(const RngFlags& flags, std::ostream& out) {
  const OutputFormat format = parse_format(flags.format);
  const int chosen = (flags.seed ? 1 : 0) + (flags.file ? 1 : 0) + (flags.os ? 1 : 0);
  if (chosen != 1) throw config_error("choose exactly one of --seed, --file, --os");
  if (!(flags.alpha > 0.0 && flags.alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
  EntropySource source = flags.seed ? EntropySource::seeded(*flags.seed)
                         : flags.file ? EntropySource::file(*flags.file)
                                      : EntropySource::os();
  BitPool pool = fill_pool(source, flags.bits);
  SuiteReport report = run_suite(pool, flags.alpha, flags.block_len);
  switch (format) {
    case OutputFormat::Json: out << suite_report_json(report) << '\n'; break;
    case OutputFormat::Csv:
      out << std::setprecision(17) << "test,statistic,p_value,passed\n";
      for (const auto& r : report.results) {
        out << r.test_name << ',' << r.statistic << ',' << r.p_value << ',' << (r.passed ? "true" : "false") << '\n';
      }
      break;
    case OutputFormat::Text: out << "source: " << source.describe() << '\n' << suite_report_text(report); break;
  }
  return report.all_passed ? 0 : 1;
}

int cmd_verify(const std::string& chain_path, const std::string& keys_path, const std::string& format_text,
               std::ostream& out) {
  const OutputFormat format = parse_format(format_text);
  KeyDirectory keys = load_key_directory(keys_path);
  Chain chain = load_chain(chain_path);
  auto failure = validate_chain(chain, keys);
  if (format == OutputFormat::Json) {
    ordered_json j;
    j["valid"] = !failure.has_value();
    j["blocks"] = chain.blocks.size();
    if (failure) {
      j["height"] = failure->height;
      j["reason"] = std::string(to_string(failure->reason));
    }
    out << j.dump(2) << '\n';
  } else if (format == OutputFormat::Csv) {
    out << "valid,blocks,height,reason\n"
        << (failure ? "false" : "true") << ',' << chain.blocks.size() << ','
        << (failure ? std::to_string(failure->height) : "") << ','
        << (failure ? std::string(to_string(failure->reason)) : "") << '\n';
  } else if (failure) {
    out << "invalid at height " << failure->height << ": " << to_string(failure->reason) << '\n';
  } else {
    out << "ok (" << chain.blocks.size() << " blocks)\n";
  }
  return failure ? 1 : 0;
}

// Key subcommands.

EntropySource key_source(const std::optional<std::uint64_t>& seed) {
  return seed ? EntropySource::seeded(*seed) : EntropySource::os();
}

int cmd_keys_gen(const std::string& curve_name, const std::string& out_path, const std::optional<std::uint64_t>& seed,
                 std::ostream& out) {
  const Curve& curve = Curve::by_name(curve_name);
  EntropySource source = key_source(seed);
  KeyPair keys = keygen(curve, source);
  save_keypair(out_path, curve, keys);
  out << "wrote " << curve.name() << " key pair to " << out_path << '\n';
  return 0;
}

// Ciphertext file: {"curve", "length", "blocks": [{"e1", "e2"}]}. Messages
// longer than one point's capacity are split into consecutive chunks.
int cmd_keys_encrypt(const std::string& key_path, const std::string& in_path, const std::string& out_path,
                     const std::optional<std::uint64_t>& seed, std::ostream& out) {
  KeyFile key = load_keypair(key_path);
  const Curve& curve = *key.curve;
  const long capacity = message_capacity(curve);
  if (capacity < 1) throw Error(ErrorCode::MessageTooLong, "curve " + curve.name() + " cannot carry messages");
  const Bytes msg = read_file(in_path);
  EntropySource source = key_source(seed);

  ordered_json j;
  j["curve"] = curve.name();
  j["length"] = msg.size();
  j["blocks"] = ordered_json::array();
  const auto chunk = static_cast<std::size_t>(capacity);
  for (std::size_t pos = 0; pos == 0 || pos < msg.size(); pos += chunk) {
    std::span<const std::uint8_t> piece(msg.data() + pos, std::min(chunk, msg.size() - pos));
    Ciphertext ct = ec_encrypt(curve, key.keys.K, source, encode_message(curve, piece));
    j["blocks"].push_back({{"e1", to_hex(curve.encode_point(ct.e1))}, {"e2", to_hex(curve.encode_point(ct.e2))}});
    if (msg.empty()) break;
  }
  write_file(out_path, j.dump(2) + "\n");
  out << "encrypted " << msg.size() << " bytes into " << j["blocks"].size() << " block(s)\n";
  return 0;
}

int cmd_keys_decrypt(const std::string& key_path, const std::string& in_path, const std::string& out_path,
                     std::ostream& out) {
  KeyFile key = load_keypair(key_path);
  const Curve& curve = *key.curve;
  nlohmann::json j = read_json(in_path);
  Bytes msg;
  try {
    if (j.at("curve").get<std::string>() != curve.name()) {
      throw Error(ErrorCode::InvalidArgument, "ciphertext is for curve " + j.at("curve").get<std::string>());
    }
    for (const auto& block : j.at("blocks")) {
      Ciphertext ct{curve.decode_point(from_hex(block.at("e1").get<std::string>())),
                    curve.decode_point(from_hex(block.at("e2").get<std::string>()))};
      Bytes piece = decode_message(curve, ec_decrypt(curve, ct, key.keys.k));
      msg.insert(msg.end(), piece.begin(), piece.end());
    }
    if (msg.size() != j.at("length").get<std::size_t>()) {
      throw Error(ErrorCode::ParseFailure, "decrypted length differs from the recorded length");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, in_path + ": " + e.what());
  }
  write_file(out_path, msg);
  out << "decrypted " << msg.size() << " bytes\n";
  return 0;
}

// Backup file: {"curve", "K", "backup"}; restore re-derives K from k and
// checks it against the recorded one.
int cmd_keys_backup(const std::string& key_path, const std::string& pad_path, const std::string& out_path,
                    std::ostream& out) {
  KeyFile key = load_keypair(key_path);
  const Bytes pad = read_file(pad_path);
  Bytes sealed = backup_key(*key.curve, key.keys.k, pad);
  ordered_json j;
  j["curve"] = key.curve->name();
  j["K"] = to_hex(key.curve->encode_point(key.keys.K));
  j["backup"] = to_hex(sealed);
  write_file(out_path, j.dump(2) + "\n");
  out << "wrote one-time-pad backup to " << out_path << '\n';
  return 0;
}

int cmd_keys_restore(const std::string& backup_path, const std::string& pad_path, const std::string& out_path,
                     std::ostream& out) {
  nlohmann::json j = read_json(backup_path);
  const Bytes pad = read_file(pad_path);
  const Curve* curve = nullptr;
  Bytes sealed;
  Point recorded;
  try {
    curve = &Curve::by_name(j.at("curve").get<std::string>());
    sealed = from_hex(j.at("backup").get<std::string>());
    recorded = curve->decode_point(from_hex(j.at("K").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, backup_path + ": " + e.what());
  }
  UInt256 k = restore_key(*curve, sealed, pad);
  KeyPair keys{k, curve->mul(k, curve->generator())};
  if (!(keys.K == recorded)) throw Error(ErrorCode::InvalidArgument, "pad does not restore the recorded key");
  save_keypair(out_path, *curve, keys);
  out << "restored key pair to " << out_path << '\n';
  return 0;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_u64(text, "seed")};
  std::uint64_t first = parse_u64(text.substr(0, dots), "seed range start");
  std::uint64_t last = parse_u64(text.substr(dots + 2), "seed range end");
  if (last < first) throw config_error("seed range " + text + " is empty");
  if (last - first >= 100000) throw config_error("seed range " + text + " is too large");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = first;; ++s) {
    seeds.push_back(s);
    if (s == last) break;
  }
  return seeds;
}

std::filesystem::path seed_path(const std::filesystem::path& path, std::uint64_t seed) {
  std::filesystem::path out = path.parent_path();
  out /= path.stem().string() + ".seed-" + std::to_string(seed) + path.extension().string();
  return out;
}

CliConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw config_error(path.string() + ": expected a JSON object");
  if (!j.contains("config_version")) throw config_error(path.string() + ": missing config_version");

  CliConfig cfg;
  SimConfig& s = cfg.sim;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "config_version") {
        if (value.get<int>() != kConfigVersion) {
          throw config_error("unsupported config_version " + value.dump() + " (expected " +
                             std::to_string(kConfigVersion) + ")");
        }
      } else if (key == "n_nodes") {
        s.n_nodes = value.get<std::uint64_t>();
      } else if (key == "rounds") {
        s.rounds = value.get<std::uint64_t>();
      } else if (key == "seed") {
        s.seed = value.get<std::uint64_t>();
      } else if (key == "seeds") {
        cfg.seeds = parse_seed_range(value.get<std::string>());
      } else if (key == "jobs") {
        cfg.jobs = value.get<unsigned>();
      } else if (key == "mode") {
        s.mode = parse_round_mode(value.get<std::string>());
      } else if (key == "selection_rule") {
        s.selection_rule = parse_selection_rule(value.get<std::string>());
      } else if (key == "adversaries") {
        s.adversaries.clear();
        for (const auto& a : value) {
          if (!a.is_object() || a.size() != 2 || !a.contains("node") || !a.contains("samples")) {
            throw config_error("adversaries entries need exactly 'node' and 'samples'");
          }
          s.adversaries.push_back(
              AdversarySpec{NodeId{a.at("node").get<std::uint64_t>()}, a.at("samples").get<std::uint64_t>()});
        }
      } else if (key == "blob_bytes") {
        s.blob_bytes = value.get<std::uint64_t>();
      } else if (key == "min_dt_ms") {
        s.min_dt_ms = value.get<std::uint64_t>();
      } else if (key == "base_dt_ms") {
        s.base_dt_ms = value.get<std::uint64_t>();
      } else if (key == "dt_jitter_ms") {
        s.dt_jitter_ms = value.get<std::uint64_t>();
      } else if (key == "dt_per_sample_ms") {
        s.dt_per_sample_ms = value.get<std::uint64_t>();
      } else if (key == "latency_ms") {
        if (!value.is_array() || value.size() != 2) throw config_error("latency_ms must be [min, max]");
        s.latency_min_ms = value[0].get<std::uint64_t>();
        s.latency_max_ms = value[1].get<std::uint64_t>();
      } else if (key == "gate_randomness") {
        s.gate_randomness = value.get<bool>();
      } else if (key == "pool_pieces") {
        s.pool_pieces = value.get<std::uint64_t>();
      } else if (key == "alpha") {
        s.alpha = value.get<double>();
      } else if (key == "block_len") {
        s.block_len = value.get<std::uint64_t>();
      } else if (key == "txs_per_block") {
        s.txs_per_block = value.get<std::uint64_t>();
      } else if (key == "network_id") {
        s.network_id = value.get<std::string>();
      } else if (key == "curve") {
        s.curve = value.get<std::string>();
      } else if (key == "chain") {
        cfg.chain_path = value.get<std::string>();
      } else if (key == "metrics") {
        cfg.metrics_path = value.get<std::string>();
      } else if (key == "keys_out") {
        cfg.keys_path = value.get<std::string>();
      } else if (key == "format") {
        cfg.format = parse_format(value.get<std::string>());
      } else {
        throw config_error(path.string() + ": unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    throw config_error(path.string() + ": " + e.what());
  }
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof-of-randomness consensus simulator and tools", "por"};
  app.require_subcommand(1);

  SimFlags sim_flags;
  CLI::App* simulate = app.add_subcommand("simulate", "run a network simulation and write the chain and metrics");
  sim_flags.attach(*simulate);

  SimFlags attack_flags;
  CLI::App* attack = app.add_subcommand("attack", "compare grinding adversaries with and without time weighting");
  attack_flags.attach(*attack);

  RngFlags rng;
  CLI::App* rngtest = app.add_subcommand("rngtest", "run the randomness test suite on a source");
  rngtest->add_option("--seed", rng.seed, "seeded deterministic source");
  rngtest->add_option("--file", rng.file, "file-backed source");
  rngtest->add_flag("--os", rng.os, "operating system entropy");
  rngtest->add_option("--bits", rng.bits, "pool length in bits")->capture_default_str();
  rngtest->add_option("--alpha", rng.alpha, "significance level")->capture_default_str();
  rngtest->add_option("--block-len", rng.block_len, "block frequency block length")->capture_default_str();
  rngtest->add_option("--format", rng.format, "text | json | csv")->capture_default_str();

  std::string chain_path, keys_path, verify_format = "text";
  CLI::App* verify_cmd = app.add_subcommand("verify", "validate a chain file against a key directory");
  verify_cmd->add_option("--chain", chain_path, "chain file (JSON lines)")->required();
  verify_cmd->add_option("--keys", keys_path, "key directory file written by simulate --keys-out")->required();
  verify_cmd->add_option("--format", verify_format, "text | json | csv")->capture_default_str();

  CLI::App* keys = app.add_subcommand("keys", "key generation, ElGamal and one-time-pad backup");
  keys->require_subcommand(1);
  std::string curve_name = "test64", key_path, in_path, out_path, pad_path, backup_path;
  std::optional<std::uint64_t> key_seed;
  CLI::App* gen = keys->add_subcommand("gen", "generate a key pair");
  gen->add_option("--curve", curve_name, "toy | test64 | secp256k1")->capture_default_str();
  gen->add_option("--out", out_path, "key file to write")->required();
  gen->add_option("--seed", key_seed, "deterministic seed (default: OS entropy)");
  CLI::App* encrypt = keys->add_subcommand("encrypt", "encrypt a file to a public key");
  encrypt->add_option("--key", key_path, "key file")->required();
  encrypt->add_option("--in", in_path, "plaintext file")->required();
  encrypt->add_option("--out", out_path, "ciphertext file")->required();
  encrypt->add_option("--seed", key_seed, "deterministic seed (default: OS entropy)");
  CLI::App* decrypt = keys->add_subcommand("decrypt", "decrypt a ciphertext file");
  decrypt->add_option("--key", key_path, "key file")->required();
  decrypt->add_option("--in", in_path, "ciphertext file")->required();
  decrypt->add_option("--out", out_path, "plaintext file")->required();
  CLI::App* backup = keys->add_subcommand("backup", "XOR the private key with a pad");
  backup->add_option("--key", key_path, "key file")->required();
  backup->add_option("--pad", pad_path, "pad file, exactly as long as the scalar encoding")->required();
  backup->add_option("--out", out_path, "backup file")->required();
  CLI::App* restore = keys->add_subcommand("restore", "recover a key file from a backup and its pad");
  restore->add_option("--backup", backup_path, "backup file")->required();
  restore->add_option("--pad", pad_path, "pad file")->required();
  restore->add_option("--out", out_path, "key file to write")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*simulate) return cmd_simulate(sim_flags, out);
    if (*attack) return cmd_attack(attack_flags, out);
    if (*rngtest) return cmd_rngtest(rng, out);
    if (*verify_cmd) return cmd_verify(chain_path, keys_path, verify_format, out);
    if (*gen) return cmd_keys_gen(curve_name, out_path, key_seed, out);
    if (*encrypt) return cmd_keys_encrypt(key_path, in_path, out_path, key_seed, out);
    if (*decrypt) return cmd_keys_decrypt(key_path, in_path, out_path, out);
    if (*backup) return cmd_keys_backup(key_path, pad_path, out_path, out);
    if (*restore) return cmd_keys_restore(backup_path, pad_path, out_path, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace por::cli
