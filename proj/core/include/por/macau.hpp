#pragma once

#include <functional>
#include <span>

#include "por/uint.hpp"

namespace por {

/// Commutative, associative fold used to merge independent random inputs.
enum class MacauCombiner { Sum, Product };

Hash256 add_mod(const Hash256& a, const Hash256& b);
Hash256 mul_mod(const Hash256& a, const Hash256& b);

/// |a - b| over the unsigned interpretations; never wraps.
Hash256 abs_diff(const Hash256& a, const Hash256& b);

/// sha256 of the 32-byte big-endian form of `h`.
Hash256 rehash(const Hash256& h);

using Finalizer = std::function<Hash256(const Hash256&)>;

/// finalize(fold of `inputs` under `combiner`). The result does not depend on
/// input order. Throws EmptyInput on an empty list.
Hash256 macau_aggregate(std::span<const Hash256> inputs, MacauCombiner combiner, const Finalizer& finalize);

}  // namespace por
