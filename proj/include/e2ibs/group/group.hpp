#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "e2ibs/rng.hpp"

namespace e2ibs {

using Encoded32 = std::array<std::uint8_t, 32>;

// A prime-order group together with its scalar field Z_p. Scalars and
// elements are immutable values; all arithmetic goes through the group
// instance so wrappers (the counting backend) can observe every operation.
//
// Encodings are exactly 32 bytes and canonical: decode() rejects anything
// that does not re-encode to the identical bytes.
template <typename G>
concept PrimeOrderGroup = requires(
    const G g,
    const typename G::Scalar s,
    const typename G::Element e,
    std::span<const typename G::Element> elems,
    std::span<const std::uint8_t> bytes,
    std::uint64_t n) {
    { g.id() } -> std::convertible_to<std::string>;

    { g.identity() } -> std::same_as<typename G::Element>;
    { g.generator() } -> std::same_as<typename G::Element>;
    { g.mul(s, e) } -> std::same_as<typename G::Element>;
    { g.mul_base(s) } -> std::same_as<typename G::Element>;
    { g.add(e, e) } -> std::same_as<typename G::Element>;
    { g.sum(elems) } -> std::same_as<typename G::Element>;
    { g.encode(e) } -> std::same_as<Encoded32>;
    { g.decode(bytes) } -> std::same_as<std::optional<typename G::Element>>;

    { g.scalar_zero() } -> std::same_as<typename G::Scalar>;
    { g.scalar_from_u64(n) } -> std::same_as<typename G::Scalar>;
    { g.scalar_from_wide_bytes(bytes) } -> std::same_as<typename G::Scalar>;
    { g.scalar_add(s, s) } -> std::same_as<typename G::Scalar>;
    { g.scalar_sub(s, s) } -> std::same_as<typename G::Scalar>;
    { g.scalar_mul(s, s) } -> std::same_as<typename G::Scalar>;
    { g.encode_scalar(s) } -> std::same_as<Encoded32>;
    { g.decode_scalar(bytes) } -> std::same_as<std::optional<typename G::Scalar>>;

    { s == s } -> std::convertible_to<bool>;
    { e == e } -> std::convertible_to<bool>;
};

// Uniform scalar via 64-byte wide reduction; bias is negligible for any
// group order below 2^256.
template <PrimeOrderGroup G, RandomSource R>
typename G::Scalar random_scalar(const G& g, R& rng) {
    std::array<std::uint8_t, 64> wide{};
    rng.fill(wide);
    return g.scalar_from_wide_bytes(wide);
}

} // namespace e2ibs
