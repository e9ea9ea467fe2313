#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>

#include <sodium.h>

#include "e2ibs/errors.hpp"
#include "e2ibs/group/group.hpp"
#include "e2ibs/rng.hpp"

// ristretto255: the prime-order quotient group over edwards25519, with
// canonical 32-byte element encodings (draft-irtf-cfrg-ristretto255 /
// RFC 9496). Point arithmetic runs on extended twisted-Edwards coordinates
// so additions cost a handful of field multiplications; libsodium is used
// for the scalar field mod L, whose elements are plain 32-byte integers.
//
// The twisted Edwards addition law with a = -1 (a square mod 2^255-19) and
// non-square d is complete, so the add/double formulas below have no
// exceptional cases, including the identity.

namespace e2ibs::detail25519 {

// Field F_p, p = 2^255 - 19, as five 51-bit limbs.
struct Fe {
    std::uint64_t v[5] = {0, 0, 0, 0, 0};
};

inline constexpr std::uint64_t kMask51 = (std::uint64_t{1} << 51) - 1;

inline Fe fe_from_u64(std::uint64_t x) {
    Fe f;
    f.v[0] = x & kMask51;
    f.v[1] = x >> 51;
    return f;
}

inline Fe fe_zero() { return {}; }
inline Fe fe_one() { return fe_from_u64(1); }

inline Fe fe_add(const Fe& a, const Fe& b) {
    Fe r;
    for (int i = 0; i < 5; ++i) r.v[i] = a.v[i] + b.v[i];
    return r;
}

inline void fe_carry(Fe& f) {
    std::uint64_t c;
    c = f.v[0] >> 51; f.v[0] &= kMask51; f.v[1] += c;
    c = f.v[1] >> 51; f.v[1] &= kMask51; f.v[2] += c;
    c = f.v[2] >> 51; f.v[2] &= kMask51; f.v[3] += c;
    c = f.v[3] >> 51; f.v[3] &= kMask51; f.v[4] += c;
    c = f.v[4] >> 51; f.v[4] &= kMask51; f.v[0] += 19 * c;
    c = f.v[0] >> 51; f.v[0] &= kMask51; f.v[1] += c;
}

// a + 8p - b limbwise; the 8p offset keeps limbs nonnegative even when b is
// an unreduced add result. The output is carry-normalized so products in
// fe_mul never overflow their 128-bit accumulators.
inline Fe fe_sub(const Fe& a, const Fe& b) {
    Fe r;
    r.v[0] = a.v[0] + ((kMask51 + 1 - 19) << 3) - b.v[0]; // 8*(2^51-19)
    for (int i = 1; i < 5; ++i) r.v[i] = a.v[i] + (kMask51 << 3) - b.v[i];
    fe_carry(r);
    return r;
}

inline Fe fe_mul(const Fe& a, const Fe& b) {
    using u128 = unsigned __int128;
    const std::uint64_t a0 = a.v[0], a1 = a.v[1], a2 = a.v[2], a3 = a.v[3], a4 = a.v[4];
    const std::uint64_t b0 = b.v[0], b1 = b.v[1], b2 = b.v[2], b3 = b.v[3], b4 = b.v[4];

    u128 r0 = (u128)a0 * b0 + (u128)19 * ((u128)a1 * b4 + (u128)a2 * b3 + (u128)a3 * b2 + (u128)a4 * b1);
    u128 r1 = (u128)a0 * b1 + (u128)a1 * b0 + (u128)19 * ((u128)a2 * b4 + (u128)a3 * b3 + (u128)a4 * b2);
    u128 r2 = (u128)a0 * b2 + (u128)a1 * b1 + (u128)a2 * b0 + (u128)19 * ((u128)a3 * b4 + (u128)a4 * b3);
    u128 r3 = (u128)a0 * b3 + (u128)a1 * b2 + (u128)a2 * b1 + (u128)a3 * b0 + (u128)19 * ((u128)a4 * b4);
    u128 r4 = (u128)a0 * b4 + (u128)a1 * b3 + (u128)a2 * b2 + (u128)a3 * b1 + (u128)a4 * b0;

    Fe out;
    std::uint64_t c;
    c = (std::uint64_t)(r0 >> 51); out.v[0] = (std::uint64_t)r0 & kMask51; r1 += c;
    c = (std::uint64_t)(r1 >> 51); out.v[1] = (std::uint64_t)r1 & kMask51; r2 += c;
    c = (std::uint64_t)(r2 >> 51); out.v[2] = (std::uint64_t)r2 & kMask51; r3 += c;
    c = (std::uint64_t)(r3 >> 51); out.v[3] = (std::uint64_t)r3 & kMask51; r4 += c;
    c = (std::uint64_t)(r4 >> 51); out.v[4] = (std::uint64_t)r4 & kMask51;
    out.v[0] += c * 19;
    c = out.v[0] >> 51; out.v[0] &= kMask51; out.v[1] += c;
    return out;
}

inline Fe fe_sq(const Fe& a) { return fe_mul(a, a); }

inline Fe fe_neg(const Fe& a) { return fe_sub(fe_zero(), a); }

inline void fe_cmov(Fe& f, const Fe& g, bool cond) {
    const std::uint64_t mask = cond ? ~std::uint64_t{0} : 0;
    for (int i = 0; i < 5; ++i) f.v[i] ^= mask & (f.v[i] ^ g.v[i]);
}

// Canonical little-endian serialization (fully reduced mod p).
inline void fe_tobytes(std::uint8_t out[32], const Fe& f) {
    std::uint64_t t[5];
    std::memcpy(t, f.v, sizeof t);

    for (int pass = 0; pass < 2; ++pass) {
        t[1] += t[0] >> 51; t[0] &= kMask51;
        t[2] += t[1] >> 51; t[1] &= kMask51;
        t[3] += t[2] >> 51; t[2] &= kMask51;
        t[4] += t[3] >> 51; t[3] &= kMask51;
        t[0] += 19 * (t[4] >> 51); t[4] &= kMask51;
    }

    // q = 1 iff t >= p, then subtract q*p by adding 19q and dropping bit 255.
    std::uint64_t q = (t[0] + 19) >> 51;
    q = (t[1] + q) >> 51;
    q = (t[2] + q) >> 51;
    q = (t[3] + q) >> 51;
    q = (t[4] + q) >> 51;

    t[0] += 19 * q;
    t[1] += t[0] >> 51; t[0] &= kMask51;
    t[2] += t[1] >> 51; t[1] &= kMask51;
    t[3] += t[2] >> 51; t[2] &= kMask51;
    t[4] += t[3] >> 51; t[3] &= kMask51;
    t[4] &= kMask51;

    const std::uint64_t w0 = t[0] | (t[1] << 51);
    const std::uint64_t w1 = (t[1] >> 13) | (t[2] << 38);
    const std::uint64_t w2 = (t[2] >> 26) | (t[3] << 25);
    const std::uint64_t w3 = (t[3] >> 39) | (t[4] << 12);
    std::memcpy(out + 0, &w0, 8);
    std::memcpy(out + 8, &w1, 8);
    std::memcpy(out + 16, &w2, 8);
    std::memcpy(out + 24, &w3, 8);
}

// True iff the 32 bytes are the canonical encoding of a field element,
// i.e. the little-endian value is < p.
inline bool fe_bytes_canonical(const std::uint8_t in[32]) {
    if (in[31] & 0x80) return false;
    // Compare against p = 2^255 - 19 from the most significant byte down.
    for (int i = 31; i >= 1; --i) {
        const std::uint8_t limit = (i == 31) ? 0x7F : 0xFF;
        if (in[i] < limit) return true;
        if (in[i] > limit) return false;
    }
    return in[0] < 0xED;
}

inline Fe fe_frombytes(const std::uint8_t in[32]) {
    std::uint64_t w0, w1, w2, w3;
    std::memcpy(&w0, in + 0, 8);
    std::memcpy(&w1, in + 8, 8);
    std::memcpy(&w2, in + 16, 8);
    std::memcpy(&w3, in + 24, 8);
    Fe f;
    f.v[0] = w0 & kMask51;
    f.v[1] = ((w0 >> 51) | (w1 << 13)) & kMask51;
    f.v[2] = ((w1 >> 38) | (w2 << 26)) & kMask51;
    f.v[3] = ((w2 >> 25) | (w3 << 39)) & kMask51;
    f.v[4] = (w3 >> 12) & kMask51;
    return f;
}

inline bool fe_is_negative(const Fe& f) {
    std::uint8_t b[32];
    fe_tobytes(b, f);
    return b[0] & 1;
}

inline bool fe_is_zero(const Fe& f) {
    std::uint8_t b[32];
    fe_tobytes(b, f);
    for (int i = 0; i < 32; ++i)
        if (b[i]) return false;
    return true;
}

inline bool fe_equal(const Fe& a, const Fe& b) {
    std::uint8_t ab[32], bb[32];
    fe_tobytes(ab, a);
    fe_tobytes(bb, b);
    return std::memcmp(ab, bb, 32) == 0;
}

inline Fe fe_abs(const Fe& a) {
    Fe r = a;
    fe_cmov(r, fe_neg(a), fe_is_negative(a));
    return r;
}

// z^(2^252 - 3) = z^((p-5)/8), the core exponentiation for square roots.
inline Fe fe_pow22523(const Fe& z) {
    Fe t0 = fe_sq(z);
    Fe t1 = fe_sq(fe_sq(t0));
    t1 = fe_mul(z, t1);            // z^9
    t0 = fe_mul(t0, t1);           // z^11
    t0 = fe_sq(t0);                // z^22
    t0 = fe_mul(t1, t0);           // z^31 = z^(2^5-1)
    t1 = fe_sq(t0);
    for (int i = 1; i < 5; ++i) t1 = fe_sq(t1);
    t0 = fe_mul(t1, t0);           // 2^10-1
    t1 = fe_sq(t0);
    for (int i = 1; i < 10; ++i) t1 = fe_sq(t1);
    t1 = fe_mul(t1, t0);           // 2^20-1
    Fe t2 = fe_sq(t1);
    for (int i = 1; i < 20; ++i) t2 = fe_sq(t2);
    t1 = fe_mul(t2, t1);           // 2^40-1
    t1 = fe_sq(t1);
    for (int i = 1; i < 10; ++i) t1 = fe_sq(t1);
    t0 = fe_mul(t1, t0);           // 2^50-1
    t1 = fe_sq(t0);
    for (int i = 1; i < 50; ++i) t1 = fe_sq(t1);
    t1 = fe_mul(t1, t0);           // 2^100-1
    t2 = fe_sq(t1);
    for (int i = 1; i < 100; ++i) t2 = fe_sq(t2);
    t1 = fe_mul(t2, t1);           // 2^200-1
    t1 = fe_sq(t1);
    for (int i = 1; i < 50; ++i) t1 = fe_sq(t1);
    t0 = fe_mul(t1, t0);           // 2^250-1
    t0 = fe_sq(fe_sq(t0));         // 2^252-4
    return fe_mul(t0, z);          // 2^252-3
}

inline Fe fe_invert(const Fe& z) {
    // z^(p-2) = z^(2^255-21): reuse z^(2^250-1) structure.
    Fe t0 = fe_sq(z);
    Fe t1 = fe_sq(fe_sq(t0));
    t1 = fe_mul(z, t1);            // z^9
    t0 = fe_mul(t0, t1);           // z^11
    Fe t2 = fe_sq(t0);             // z^22
    t1 = fe_mul(t1, t2);           // z^31
    t2 = fe_sq(t1);
    for (int i = 1; i < 5; ++i) t2 = fe_sq(t2);
    t1 = fe_mul(t2, t1);           // 2^10-1
    t2 = fe_sq(t1);
    for (int i = 1; i < 10; ++i) t2 = fe_sq(t2);
    t2 = fe_mul(t2, t1);           // 2^20-1
    Fe t3 = fe_sq(t2);
    for (int i = 1; i < 20; ++i) t3 = fe_sq(t3);
    t2 = fe_mul(t3, t2);           // 2^40-1
    t2 = fe_sq(t2);
    for (int i = 1; i < 10; ++i) t2 = fe_sq(t2);
    t1 = fe_mul(t2, t1);           // 2^50-1
    t2 = fe_sq(t1);
    for (int i = 1; i < 50; ++i) t2 = fe_sq(t2);
    t2 = fe_mul(t2, t1);           // 2^100-1
    t3 = fe_sq(t2);
    for (int i = 1; i < 100; ++i) t3 = fe_sq(t3);
    t2 = fe_mul(t3, t2);           // 2^200-1
    t2 = fe_sq(t2);
    for (int i = 1; i < 50; ++i) t2 = fe_sq(t2);
    t1 = fe_mul(t2, t1);           // 2^250-1
    for (int i = 0; i < 5; ++i) t1 = fe_sq(t1); // 2^255-2^5
    return fe_mul(t1, t0);         // 2^255-21
}

// Extended coordinates: x = X/Z, y = Y/Z, T = XY/Z.
struct Ge {
    Fe X, Y, Z, T;
};

inline Ge ge_identity() {
    return Ge{fe_zero(), fe_one(), fe_one(), fe_zero()};
}

struct Curve {
    Fe d, d2, sqrt_m1, invsqrt_a_minus_d;
    Ge base;
};

struct SqrtRatioResult {
    bool was_square;
    Fe root;
};

// (was_square, sqrt(u/v)) per RFC 9496, returning the non-negative root of
// u/v when it exists, else of (sqrt(-1)*u)/v.
inline SqrtRatioResult fe_sqrt_ratio_m1(const Fe& u, const Fe& v, const Fe& sqrt_m1) {
    const Fe v3 = fe_mul(fe_sq(v), v);
    const Fe v7 = fe_mul(fe_sq(v3), v);
    Fe r = fe_mul(fe_mul(u, v3), fe_pow22523(fe_mul(u, v7)));
    const Fe check = fe_mul(v, fe_sq(r));

    const bool correct_sign = fe_equal(check, u);
    const bool flipped_sign = fe_equal(check, fe_neg(u));
    const bool flipped_sign_i = fe_equal(check, fe_mul(fe_neg(u), sqrt_m1));

    fe_cmov(r, fe_mul(sqrt_m1, r), flipped_sign || flipped_sign_i);
    return {correct_sign || flipped_sign, fe_abs(r)};
}

inline const Curve& curve() {
    static const Curve c = [] {
        Curve k;
        // d = -121665/121666
        k.d = fe_mul(fe_neg(fe_from_u64(121665)), fe_invert(fe_from_u64(121666)));
        k.d2 = fe_add(k.d, k.d);
        // sqrt(-1) = 2^((p-1)/4) = (2^((p-5)/8))^2 * 2
        const Fe two = fe_from_u64(2);
        k.sqrt_m1 = fe_mul(fe_sq(fe_pow22523(two)), two);
        // 1/sqrt(a-d) with a = -1
        const Fe a_minus_d = fe_sub(fe_neg(fe_one()), k.d);
        k.invsqrt_a_minus_d = fe_sqrt_ratio_m1(fe_one(), a_minus_d, k.sqrt_m1).root;
        // Basepoint: y = 4/5, x the even root of (y^2-1)/(d y^2+1).
        const Fe by = fe_mul(fe_from_u64(4), fe_invert(fe_from_u64(5)));
        const Fe y2 = fe_sq(by);
        const Fe bx = fe_sqrt_ratio_m1(fe_sub(y2, fe_one()),
                                       fe_add(fe_mul(k.d, y2), fe_one()), k.sqrt_m1)
                          .root;
        k.base = Ge{bx, by, fe_one(), fe_mul(bx, by)};
        return k;
    }();
    return c;
}

// Unified addition (complete for a=-1, d non-square).
inline Ge ge_add(const Ge& p, const Ge& q) {
    const Curve& k = curve();
    const Fe a = fe_mul(fe_sub(p.Y, p.X), fe_sub(q.Y, q.X));
    const Fe b = fe_mul(fe_add(p.Y, p.X), fe_add(q.Y, q.X));
    const Fe c = fe_mul(fe_mul(p.T, k.d2), q.T);
    const Fe zz = fe_mul(p.Z, q.Z);
    const Fe d = fe_add(zz, zz);
    const Fe e = fe_sub(b, a);
    const Fe f = fe_sub(d, c);
    const Fe g = fe_add(d, c);
    const Fe h = fe_add(b, a);
    return Ge{fe_mul(e, f), fe_mul(g, h), fe_mul(f, g), fe_mul(e, h)};
}

inline Ge ge_dbl(const Ge& p) {
    const Fe a = fe_sq(p.X);
    const Fe b = fe_sq(p.Y);
    const Fe zz = fe_sq(p.Z);
    const Fe c = fe_add(zz, zz);
    const Fe h = fe_add(a, b);
    const Fe e = fe_sub(h, fe_sq(fe_add(p.X, p.Y)));
    const Fe g = fe_sub(a, b);
    const Fe f = fe_add(c, g);
    return Ge{fe_mul(e, f), fe_mul(g, h), fe_mul(f, g), fe_mul(e, h)};
}

// 4-bit fixed-window double-and-add; the scalar is a 32-byte little-endian
// integer. Not constant time (side channels are out of scope).
inline Ge ge_scalarmult(const std::uint8_t scalar[32], const Ge& p) {
    Ge table[16];
    table[0] = ge_identity();
    table[1] = p;
    for (int i = 2; i < 16; ++i)
        table[i] = (i % 2 == 0) ? ge_dbl(table[i / 2]) : ge_add(table[i - 1], p);

    Ge acc = ge_identity();
    bool started = false;
    for (int i = 63; i >= 0; --i) {
        if (started) acc = ge_dbl(ge_dbl(ge_dbl(ge_dbl(acc))));
        const std::uint8_t byte = scalar[i / 2];
        const std::uint8_t nibble = (i % 2 == 1) ? (byte >> 4) : (byte & 0x0F);
        if (nibble != 0) {
            acc = ge_add(acc, table[nibble]);
            started = true;
        }
    }
    return acc;
}

// Ristretto equality: P == Q in the quotient group iff
// X1*Y2 == Y1*X2 or Y1*Y2 == X1*X2.
inline bool ge_ristretto_equal(const Ge& p, const Ge& q) {
    return fe_equal(fe_mul(p.X, q.Y), fe_mul(p.Y, q.X)) ||
           fe_equal(fe_mul(p.Y, q.Y), fe_mul(p.X, q.X));
}

inline void ristretto_encode(std::uint8_t out[32], const Ge& p) {
    const Curve& k = curve();

    const Fe u1 = fe_mul(fe_add(p.Z, p.Y), fe_sub(p.Z, p.Y));
    const Fe u2 = fe_mul(p.X, p.Y);
    const Fe invsqrt = fe_sqrt_ratio_m1(fe_one(), fe_mul(u1, fe_sq(u2)), k.sqrt_m1).root;
    const Fe den1 = fe_mul(invsqrt, u1);
    const Fe den2 = fe_mul(invsqrt, u2);
    const Fe z_inv = fe_mul(fe_mul(den1, den2), p.T);

    const bool rotate = fe_is_negative(fe_mul(p.T, z_inv));
    Fe x = p.X;
    Fe y = p.Y;
    Fe den_inv = den2;
    fe_cmov(x, fe_mul(p.Y, k.sqrt_m1), rotate);
    fe_cmov(y, fe_mul(p.X, k.sqrt_m1), rotate);
    fe_cmov(den_inv, fe_mul(den1, k.invsqrt_a_minus_d), rotate);

    fe_cmov(y, fe_neg(y), fe_is_negative(fe_mul(x, z_inv)));
    const Fe s = fe_abs(fe_mul(den_inv, fe_sub(p.Z, y)));
    fe_tobytes(out, s);
}

inline bool ristretto_decode(Ge& out, const std::uint8_t in[32]) {
    const Curve& k = curve();

    if (!fe_bytes_canonical(in)) return false;
    const Fe s = fe_frombytes(in);
    if (fe_is_negative(s)) return false;

    const Fe ss = fe_sq(s);
    const Fe u1 = fe_sub(fe_one(), ss);
    const Fe u2 = fe_add(fe_one(), ss);
    const Fe u2_sqr = fe_sq(u2);
    const Fe v = fe_sub(fe_neg(fe_mul(k.d, fe_sq(u1))), u2_sqr);

    const auto [was_square, invsqrt] = fe_sqrt_ratio_m1(fe_one(), fe_mul(v, u2_sqr), k.sqrt_m1);
    const Fe den_x = fe_mul(invsqrt, u2);
    const Fe den_y = fe_mul(fe_mul(invsqrt, den_x), v);

    const Fe two_s = fe_add(s, s);
    const Fe x = fe_abs(fe_mul(two_s, den_x));
    const Fe y = fe_mul(u1, den_y);
    const Fe t = fe_mul(x, y);

    if (!was_square || fe_is_negative(t) || fe_is_zero(y)) return false;
    out = Ge{x, y, fe_one(), t};
    return true;
}

} // namespace e2ibs::detail25519

namespace e2ibs {

class RistrettoGroup {
public:
    struct Scalar {
        std::array<std::uint8_t, 32> bytes{}; // canonical little-endian mod L
        friend bool operator==(const Scalar&, const Scalar&) = default;
    };

    struct Element {
        detail25519::Ge point = detail25519::ge_identity();
        friend bool operator==(const Element& a, const Element& b) {
            return detail25519::ge_ristretto_equal(a.point, b.point);
        }
    };

    RistrettoGroup() { ensure_sodium_init(); }

    std::string id() const { return "ristretto255"; }

    Element identity() const { return Element{}; }
    Element generator() const { return Element{detail25519::curve().base}; }

    Element mul(const Scalar& k, const Element& x) const {
        return Element{detail25519::ge_scalarmult(k.bytes.data(), x.point)};
    }
    Element mul_base(const Scalar& k) const {
        return Element{detail25519::ge_scalarmult(k.bytes.data(), detail25519::curve().base)};
    }

    Element add(const Element& a, const Element& b) const {
        return Element{detail25519::ge_add(a.point, b.point)};
    }

    Element sum(std::span<const Element> xs) const {
        if (xs.empty()) return identity();
        Element acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
        return acc;
    }

    Encoded32 encode(const Element& x) const {
        Encoded32 out{};
        detail25519::ristretto_encode(out.data(), x.point);
        return out;
    }

    std::optional<Element> decode(std::span<const std::uint8_t> bytes) const {
        if (bytes.size() != 32) return std::nullopt;
        Element e;
        if (!detail25519::ristretto_decode(e.point, bytes.data())) return std::nullopt;
        return e;
    }

    Scalar scalar_zero() const { return {}; }

    Scalar scalar_from_u64(std::uint64_t v) const {
        Scalar s;
        for (int i = 0; i < 8; ++i) s.bytes[i] = static_cast<std::uint8_t>(v >> (8 * i));
        return s;
    }

    Scalar scalar_from_wide_bytes(std::span<const std::uint8_t> wide) const {
        if (wide.size() != 64) throw MalformedInputError("wide scalar input must be 64 bytes");
        Scalar s;
        crypto_core_ristretto255_scalar_reduce(s.bytes.data(), wide.data());
        return s;
    }

    Scalar scalar_add(const Scalar& a, const Scalar& b) const {
        Scalar r;
        crypto_core_ristretto255_scalar_add(r.bytes.data(), a.bytes.data(), b.bytes.data());
        return r;
    }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const {
        Scalar r;
        crypto_core_ristretto255_scalar_sub(r.bytes.data(), a.bytes.data(), b.bytes.data());
        return r;
    }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const {
        Scalar r;
        crypto_core_ristretto255_scalar_mul(r.bytes.data(), a.bytes.data(), b.bytes.data());
        return r;
    }

    Encoded32 encode_scalar(const Scalar& s) const {
        Encoded32 out{};
        std::memcpy(out.data(), s.bytes.data(), 32);
        return out;
    }

    std::optional<Scalar> decode_scalar(std::span<const std::uint8_t> bytes) const {
        if (bytes.size() != 32) return std::nullopt;
        std::uint8_t wide[64] = {};
        std::memcpy(wide, bytes.data(), 32);
        Scalar reduced;
        crypto_core_ristretto255_scalar_reduce(reduced.bytes.data(), wide);
        if (std::memcmp(reduced.bytes.data(), bytes.data(), 32) != 0) return std::nullopt;
        return reduced;
    }
};

static_assert(PrimeOrderGroup<RistrettoGroup>);

} // namespace e2ibs
