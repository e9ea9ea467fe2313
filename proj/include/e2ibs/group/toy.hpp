#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "e2ibs/errors.hpp"
#include "e2ibs/group/group.hpp"

namespace e2ibs {

// The additive group Z_p with generator 1, for a small prime p (default 23).
// Every identity of the scheme is checkable by hand here, and discrete logs
// are recoverable by brute force, which is what the oracle tests rely on.
class ToyGroup {
public:
    struct Scalar {
        std::uint64_t v = 0;
        friend bool operator==(const Scalar&, const Scalar&) = default;
    };
    struct Element {
        std::uint64_t v = 0;
        friend bool operator==(const Element&, const Element&) = default;
    };

    explicit ToyGroup(std::uint64_t p = 23) : p_(p) {
        if (p < 2 || !is_prime(p)) throw ConfigError("toy group modulus must be a small prime");
    }

    std::string id() const { return "toy"; }
    std::uint64_t order() const { return p_; }

    Element identity() const { return {0}; }
    Element generator() const { return {1 % p_}; }

    Element mul(const Scalar& k, const Element& x) const {
        return {mulmod(k.v, x.v)};
    }
    Element mul_base(const Scalar& k) const { return mul(k, generator()); }

    Element add(const Element& a, const Element& b) const { return {(a.v + b.v) % p_}; }

    Element sum(std::span<const Element> xs) const {
        if (xs.empty()) return identity();
        Element acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
        return acc;
    }

    Encoded32 encode(const Element& x) const { return encode_u64(x.v); }

    std::optional<Element> decode(std::span<const std::uint8_t> bytes) const {
        auto v = decode_u64(bytes);
        if (!v || *v >= p_) return std::nullopt;
        return Element{*v};
    }

    Scalar scalar_zero() const { return {0}; }
    Scalar scalar_from_u64(std::uint64_t v) const { return {v % p_}; }

    Scalar scalar_from_wide_bytes(std::span<const std::uint8_t> wide) const {
        if (wide.size() != 64) throw MalformedInputError("wide scalar input must be 64 bytes");
        // Little-endian 512-bit integer reduced mod p (Horner from the top).
        std::uint64_t acc = 0;
        for (std::size_t i = wide.size(); i-- > 0;) acc = (acc * 256 + wide[i]) % p_;
        return {acc};
    }

    Scalar scalar_add(const Scalar& a, const Scalar& b) const { return {(a.v + b.v) % p_}; }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const { return {(a.v + p_ - b.v) % p_}; }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const { return {mulmod(a.v, b.v)}; }

    Encoded32 encode_scalar(const Scalar& s) const { return encode_u64(s.v); }

    std::optional<Scalar> decode_scalar(std::span<const std::uint8_t> bytes) const {
        auto v = decode_u64(bytes);
        if (!v || *v >= p_) return std::nullopt;
        return Scalar{*v};
    }

private:
    std::uint64_t p_;

    std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
    }

    static Encoded32 encode_u64(std::uint64_t v) {
        Encoded32 out{};
        for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
        return out;
    }

    // Canonical form: little-endian value in the first 8 bytes, rest zero.
    static std::optional<std::uint64_t> decode_u64(std::span<const std::uint8_t> bytes) {
        if (bytes.size() != 32) return std::nullopt;
        for (std::size_t i = 8; i < 32; ++i)
            if (bytes[i] != 0) return std::nullopt;
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
        return v;
    }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

static_assert(PrimeOrderGroup<ToyGroup>);

} // namespace e2ibs
