#include "por/macau.hpp"

#include "por/sha256.hpp"

namespace por {

Hash256 add_mod(const Hash256& a, const Hash256& b) { return a + b; }

Hash256 mul_mod(const Hash256& a, const Hash256& b) { return a * b; }

Hash256 abs_diff(const Hash256& a, const Hash256& b) { return a >= b ? a - b : b - a; }

Hash256 rehash(const Hash256& h) { return sha256(h.to_bytes()); }

Hash256 macau_aggregate(std::span<const Hash256> inputs, MacauCombiner combiner, const Finalizer& finalize) {
  if (inputs.empty()) throw Error(ErrorCode::EmptyInput, "macau_aggregate needs at least one input");
  Hash256 acc = inputs.front();
  for (const Hash256& x : inputs.subspan(1)) {
    acc = combiner == MacauCombiner::Sum ? add_mod(acc, x) : mul_mod(acc, x);
  }
  return finalize ? finalize(acc) : acc;
}

}  // namespace por
