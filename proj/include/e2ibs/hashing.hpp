#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <sodium.h>

#include "e2ibs/bytes.hpp"
#include "e2ibs/errors.hpp"
#include "e2ibs/group/group.hpp"

namespace e2ibs {

// The three hash roles are all BLAKE2b-512 under distinct ASCII domain tags.
// The tags are part of the stable format contract: changing any of them
// changes every derived key and signature.
inline constexpr std::string_view kPrfTag = "E2IBS-PRF";
inline constexpr std::string_view kH1Tag = "E2IBS-H1";
inline constexpr std::string_view kH2Tag = "E2IBS-H2";

using WideDigest = std::array<std::uint8_t, 64>;

// k indices into [0, t), duplicates permitted (multiset semantics).
using IndexVector = std::vector<std::uint32_t>;

inline WideDigest tagged_digest(std::string_view tag, BytesView data,
                                const std::uint8_t* key32 = nullptr) {
    ensure_sodium_init();
    WideDigest out{};
    crypto_generichash_state st;
    crypto_generichash_init(&st, key32, key32 ? 32 : 0, out.size());
    crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(tag.data()), tag.size());
    crypto_generichash_update(&st, data.data(), data.size());
    crypto_generichash_final(&st, out.data(), out.size());
    return out;
}

// PRF_key(label) -> Z_p, keyed BLAKE2b wide-reduced into the scalar field.
template <PrimeOrderGroup G>
typename G::Scalar prf(const G& g, const typename G::Scalar& key, BytesView label) {
    if (label.empty()) throw MalformedInputError("prf label must be non-empty");
    const Encoded32 key_bytes = g.encode_scalar(key);
    const WideDigest d = tagged_digest(kPrfTag, label, key_bytes.data());
    return g.scalar_from_wide_bytes(d);
}

// H_1(U [, seq], C_U) -> [0,t)^k. The digest is consumed as k consecutive
// log2(t)-bit big-endian chunks; duplicates are kept. seq, when present, is
// appended to the identity bytes as an 8-byte big-endian integer.
template <PrimeOrderGroup G>
IndexVector h1_indices(const G& g, BytesView identity, const typename G::Element& commitment,
                       std::optional<std::uint64_t> seq, std::uint32_t t, std::uint32_t k) {
    if (t < 2 || !std::has_single_bit(t))
        throw ConfigError("index space t must be a power of two >= 2");
    const std::uint32_t bits_per_index = static_cast<std::uint32_t>(std::countr_zero(t));
    if (std::uint64_t(k) * bits_per_index > 512)
        throw ConfigError("k*log2(t) exceeds the 512-bit digest budget");

    Bytes preimage(identity.begin(), identity.end());
    if (seq) append_be64(preimage, *seq);
    const Encoded32 c = g.encode(commitment);
    append(preimage, c);

    const WideDigest d = tagged_digest(kH1Tag, preimage);

    IndexVector out;
    out.reserve(k);
    std::uint64_t bit_pos = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t idx = 0;
        for (std::uint32_t b = 0; b < bits_per_index; ++b, ++bit_pos) {
            const std::uint8_t bit = (d[bit_pos / 8] >> (7 - bit_pos % 8)) & 1;
            idx = (idx << 1) | bit;
        }
        out.push_back(idx);
    }
    return out;
}

// H_2(m, R) -> Z_p, the Schnorr challenge hash.
template <PrimeOrderGroup G>
typename G::Scalar h2_challenge(const G& g, BytesView message, const typename G::Element& r_point) {
    Bytes preimage(message.begin(), message.end());
    const Encoded32 r = g.encode(r_point);
    append(preimage, r);
    const WideDigest d = tagged_digest(kH2Tag, preimage);
    return g.scalar_from_wide_bytes(d);
}

// Hash-policy object used by the scheme; tests substitute scripted stand-ins
// to drive the worked examples.
struct DefaultHashes {
    template <PrimeOrderGroup G>
    typename G::Scalar prf(const G& g, const typename G::Scalar& key, BytesView label) const {
        return e2ibs::prf(g, key, label);
    }

    template <PrimeOrderGroup G>
    IndexVector h1_indices(const G& g, BytesView identity, const typename G::Element& commitment,
                           std::optional<std::uint64_t> seq, std::uint32_t t,
                           std::uint32_t k) const {
        return e2ibs::h1_indices(g, identity, commitment, seq, t, k);
    }

    template <PrimeOrderGroup G>
    typename G::Scalar h2_challenge(const G& g, BytesView message,
                                    const typename G::Element& r_point) const {
        return e2ibs::h2_challenge(g, message, r_point);
    }
};

} // namespace e2ibs
