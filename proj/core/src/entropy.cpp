#include "por/entropy.hpp"

#include "por/error.hpp"

namespace por {
namespace {

void read_exact(std::ifstream& in, std::span<std::uint8_t> out, const std::string& what) {
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
  auto got = static_cast<std::size_t>(in.gcount());
  if (got == out.size()) return;
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed on " + what);
  throw Error(ErrorCode::SourceExhausted,
              what + " exhausted: needed " + std::to_string(out.size()) + " bytes, got " + std::to_string(got));
}

}  // namespace

EntropySource EntropySource::seeded(std::uint64_t seed) {
  return EntropySource(Seeded{seed, std::mt19937_64(seed)});
}

EntropySource EntropySource::os() {
  auto in = std::make_unique<std::ifstream>("/dev/urandom", std::ios::binary);
  if (!*in) throw Error(ErrorCode::IoFailure, "cannot open /dev/urandom");
  return EntropySource(Os{std::move(in)});
}

EntropySource EntropySource::file(const std::filesystem::path& path) {
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw Error(ErrorCode::IoFailure, "cannot open entropy file " + path.string());
  return EntropySource(File{path, std::move(in)});
}

EntropySource::Kind EntropySource::kind() const noexcept {
  switch (impl_.index()) {
    case 0: return Kind::SeededDeterministic;
    case 1: return Kind::OsEntropy;
    default: return Kind::FileBacked;
  }
}

std::string EntropySource::describe() const {
  if (auto* s = std::get_if<Seeded>(&impl_)) return "seeded(" + std::to_string(s->seed) + ")";
  if (std::holds_alternative<Os>(impl_)) return "os";
  return "file(" + std::get<File>(impl_).path.string() + ")";
}

void EntropySource::fill(std::span<std::uint8_t> out) {
  if (auto* s = std::get_if<Seeded>(&impl_)) {
    for (auto& byte : out) {
      if (s->used == 8) {
        std::uint64_t w = s->engine();
        for (int i = 0; i < 8; ++i) s->buffer[i] = static_cast<std::uint8_t>(w >> (56 - 8 * i));
        s->used = 0;
      }
      byte = s->buffer[s->used++];
    }
    return;
  }
  if (auto* o = std::get_if<Os>(&impl_)) {
    read_exact(*o->stream, out, "os entropy");
    return;
  }
  auto& f = std::get<File>(impl_);
  read_exact(*f.stream, out, "entropy file " + f.path.string());
}

Bytes EntropySource::draw(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

std::uint8_t EntropySource::next_byte() {
  std::uint8_t b;
  fill(std::span(&b, 1));
  return b;
}

std::uint64_t EntropySource::next_u64() {
  std::array<std::uint8_t, 8> b;
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t EntropySource::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "uniform_below bound must be positive");
  // Largest multiple of bound that fits in 2^64.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

}  // namespace por
