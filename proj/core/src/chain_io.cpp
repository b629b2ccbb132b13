#include <fstream>
#include <sstream>

#include <json.hpp>

#include "por/error.hpp"
#include "por/ledger.hpp"

namespace por {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string signature_hex(const Signature& sig) {
  return sig.challenge.to_hex() + sig.response.to_hex();
}

Signature signature_from_hex(const std::string& hex) {
  if (hex.size() != 128) throw Error(ErrorCode::InvalidArgument, "signature must be 128 hex digits");
  return Signature{UInt256::from_hex(std::string_view(hex).substr(0, 64)),
                   UInt256::from_hex(std::string_view(hex).substr(64))};
}

ordered_json contribution_json(const Contribution& c) {
  ordered_json j;
  j["node"] = c.node.value;
  j["round"] = c.round;
  j["first_hash"] = c.first_hash.to_hex();
  j["t1"] = c.t1;
  j["t2"] = c.t2;
  j["signature"] = signature_hex(c.signature);
  return j;
}

template <typename Json>
void require_keys(const Json& j, std::initializer_list<std::string_view> names) {
  if (!j.is_object()) throw Error(ErrorCode::ParseFailure, "expected a JSON object");
  for (auto name : names) {
    if (!j.contains(std::string(name))) throw Error(ErrorCode::ParseFailure, "missing field '" + std::string(name) + "'");
  }
  if (j.size() != names.size()) throw Error(ErrorCode::ParseFailure, "unexpected extra fields");
}

Contribution contribution_from_json(const nlohmann::json& j) {
  require_keys(j, {"node", "round", "first_hash", "t1", "t2", "signature"});
  Contribution c;
  c.node = NodeId{j.at("node").get<std::uint64_t>()};
  c.round = j.at("round").get<std::uint64_t>();
  c.first_hash = Hash256::from_hex(j.at("first_hash").get<std::string>());
  c.t1 = j.at("t1").get<std::uint64_t>();
  c.t2 = j.at("t2").get<std::uint64_t>();
  c.signature = signature_from_hex(j.at("signature").get<std::string>());
  return c;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace

std::string block_to_json_line(const Block& b) {
  ordered_json j;
  j["height"] = b.height;
  j["timestamp_ms"] = b.timestamp_ms;
  j["prevhash"] = b.prevhash.to_hex();
  j["owner"] = b.owner.value;
  j["mode"] = std::string(to_string(b.mode));
  j["owner_blob"] = to_hex(b.owner_blob);
  j["contributions"] = ordered_json::array();
  for (const auto& c : b.contributions) j["contributions"].push_back(contribution_json(c));
  j["transactions"] = ordered_json::array();
  for (const auto& tx : b.transactions) j["transactions"].push_back(to_hex(tx));
  j["block_hash"] = b.block_hash.to_hex();
  return j.dump();
}

Block block_from_json_line(std::string_view line, std::size_t line_number) {
  const std::string where = "line " + std::to_string(line_number) + ": ";
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    require_keys(j, {"height", "timestamp_ms", "prevhash", "owner", "mode", "owner_blob", "contributions",
                     "transactions", "block_hash"});
    Block b;
    b.height = j.at("height").get<std::uint64_t>();
    b.timestamp_ms = j.at("timestamp_ms").get<std::uint64_t>();
    b.prevhash = Hash256::from_hex(j.at("prevhash").get<std::string>());
    b.owner = NodeId{j.at("owner").get<std::uint64_t>()};
    b.mode = parse_round_mode(j.at("mode").get<std::string>());
    b.owner_blob = from_hex(j.at("owner_blob").get<std::string>());
    for (const auto& c : j.at("contributions")) b.contributions.push_back(contribution_from_json(c));
    for (const auto& tx : j.at("transactions")) b.transactions.push_back(from_hex(tx.get<std::string>()));
    b.block_hash = Hash256::from_hex(j.at("block_hash").get<std::string>());
    // Only the canonical spelling is accepted, so a file round-trips byte for byte.
    if (block_to_json_line(b) != line) throw Error(ErrorCode::ParseFailure, "block is not in canonical form");
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, where + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseFailure, where + e.what());
  }
}

void save_chain(const Chain& chain, const std::filesystem::path& path) {
  std::string content;
  for (const auto& b : chain.blocks) {
    content += block_to_json_line(b);
    content += '\n';
  }
  write_atomically(path, content);
}

Chain load_chain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read chain file " + path.string());
  Chain chain;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) throw Error(ErrorCode::ParseFailure, "line " + std::to_string(line_number) + ": empty line");
    chain.blocks.push_back(block_from_json_line(line, line_number));
  }
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed on " + path.string());
  if (!chain.blocks.empty()) {
    const Block& first = chain.blocks.front();
    if (first.height != 0 || first.transactions.size() != 1) {
      throw Error(ErrorCode::ParseFailure, "line 1: first block is not a genesis block");
    }
    try {
      chain.params = decode_chain_params(first.transactions.front());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseFailure, std::string("line 1: ") + e.what());
    }
  }
  return chain;
}

void save_key_directory(const KeyDirectory& keys, const std::filesystem::path& path) {
  ordered_json j;
  j["curve"] = keys.curve->name();
  j["keys"] = ordered_json::array();
  for (const auto& [node, point] : keys.keys) {
    j["keys"].push_back({{"node", node.value}, {"K", to_hex(keys.curve->encode_point(point))}});
  }
  write_atomically(path, j.dump(2) + "\n");
}

KeyDirectory load_key_directory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read key directory " + path.string());
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    KeyDirectory dir;
    dir.curve = &Curve::by_name(j.at("curve").get<std::string>());
    for (const auto& entry : j.at("keys")) {
      NodeId node{entry.at("node").get<std::uint64_t>()};
      Point point = dir.curve->decode_point(from_hex(entry.at("K").get<std::string>()));
      if (!dir.keys.emplace(node, point).second) {
        throw Error(ErrorCode::ParseFailure, "duplicate key for node " + std::to_string(node.value));
      }
    }
    return dir;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseFailure, path.string() + ": " + e.what());
  }
}

}  // namespace por
