#include <catch2/catch_amalgamated.hpp>

#include <sodium.h>

#include <cstring>
#include <set>
#include <vector>

#include "e2ibs/group/counting.hpp"
#include "e2ibs/group/ristretto.hpp"
#include "e2ibs/group/toy.hpp"
#include "e2ibs/rng.hpp"

using namespace e2ibs;

namespace {

Bytes wide_from_u64(std::uint64_t v) {
    Bytes w(64, 0);
    for (int i = 0; i < 8; ++i) w[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return w;
}

// Brute-force discrete log in the toy group; the oracle the acceptance
// criteria lean on.
std::uint64_t toy_dlog(const ToyGroup& g, const ToyGroup::Element& x) {
    ToyGroup::Element acc = g.identity();
    for (std::uint64_t n = 0; n < g.order(); ++n) {
        if (acc == x) return n;
        acc = g.add(acc, g.generator());
    }
    FAIL("dlog not found");
    return 0;
}

} // namespace

TEST_CASE("toy scalar_from_wide_bytes reduces mod p") {
    ToyGroup g(23);
    CHECK(g.scalar_from_wide_bytes(wide_from_u64(0)).v == 0);
    CHECK(g.scalar_from_wide_bytes(wide_from_u64(23)).v == 0);
    CHECK(g.scalar_from_wide_bytes(wide_from_u64(50)).v == 4);

    Bytes wrong(63, 0);
    CHECK_THROWS_AS(g.scalar_from_wide_bytes(wrong), MalformedInputError);
}

TEST_CASE("toy group arithmetic matches direct modular arithmetic") {
    ToyGroup g(23);
    CHECK(g.mul(ToyGroup::Scalar{5}, g.generator()).v == 5);
    CHECK(g.mul(ToyGroup::Scalar{0}, g.generator()) == g.identity());
    CHECK(g.add(ToyGroup::Element{8}, ToyGroup::Element{7}).v == 15);

    std::vector<ToyGroup::Element> xs{{3}, {5}};
    CHECK(g.sum(xs).v == 8);
    CHECK(g.sum({}) == g.identity());
    std::vector<ToyGroup::Element> one{{11}};
    CHECK(g.sum(one).v == 11);

    SeededRng rng(7);
    for (int i = 0; i < 1000; ++i) {
        std::uint8_t raw[16];
        rng.fill(raw);
        const std::uint64_t a = load_be64(raw) % 23;
        const std::uint64_t b = load_be64(raw + 8) % 23;
        CHECK(g.add(ToyGroup::Element{a}, ToyGroup::Element{b}).v == (a + b) % 23);
        CHECK(g.mul(ToyGroup::Scalar{a}, ToyGroup::Element{b}).v == (a * b) % 23);
        CHECK(g.mul(ToyGroup::Scalar{1}, ToyGroup::Element{a}).v == a);
        CHECK(g.add(ToyGroup::Element{a}, g.identity()).v == a);
        CHECK(g.add(ToyGroup::Element{a}, ToyGroup::Element{b}) ==
              g.add(ToyGroup::Element{b}, ToyGroup::Element{a}));
    }
}

TEST_CASE("toy brute-force dlog recovers exponents") {
    ToyGroup g(9973);
    SeededRng rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto k = random_scalar(g, rng);
        CHECK(toy_dlog(g, g.mul_base(k)) == k.v);
    }
}

TEST_CASE("toy encodings are canonical and 32 bytes") {
    ToyGroup g(23);
    const auto id_enc = g.encode(g.identity());
    CHECK(id_enc == Encoded32{});
    REQUIRE(g.decode(id_enc));
    CHECK(*g.decode(id_enc) == g.identity());

    // value >= p rejected, nonzero padding rejected
    Encoded32 bad{};
    bad[0] = 23;
    CHECK_FALSE(g.decode(bad));
    bad[0] = 5;
    bad[20] = 1;
    CHECK_FALSE(g.decode(bad));
}

TEST_CASE("group homomorphism: (a+b)X = aX + bX") {
    SECTION("toy") {
        ToyGroup g(23);
        SeededRng rng(3);
        for (int i = 0; i < 1000; ++i) {
            const auto a = random_scalar(g, rng);
            const auto b = random_scalar(g, rng);
            const auto x = g.mul_base(random_scalar(g, rng));
            CHECK(g.mul(g.scalar_add(a, b), x) == g.add(g.mul(a, x), g.mul(b, x)));
        }
    }
    SECTION("ristretto255") {
        RistrettoGroup g;
        SeededRng rng(4);
        for (int i = 0; i < 64; ++i) {
            const auto a = random_scalar(g, rng);
            const auto b = random_scalar(g, rng);
            const auto x = g.mul_base(random_scalar(g, rng));
            CHECK(g.mul(g.scalar_add(a, b), x) == g.add(g.mul(a, x), g.mul(b, x)));
        }
    }
}

TEST_CASE("ristretto255 agrees with libsodium") {
    RistrettoGroup g;
    SeededRng rng(5);

    SECTION("generator encoding") {
        const auto one = g.scalar_from_u64(1);
        std::uint8_t sodium_base[32];
        REQUIRE(crypto_scalarmult_ristretto255_base(sodium_base, one.bytes.data()) == 0);
        CHECK(std::memcmp(g.encode(g.generator()).data(), sodium_base, 32) == 0);
    }

    SECTION("scalar multiplication, base and variable point") {
        for (int i = 0; i < 48; ++i) {
            const auto k = random_scalar(g, rng);

            std::uint8_t expected[32];
            REQUIRE(crypto_scalarmult_ristretto255_base(expected, k.bytes.data()) == 0);
            CHECK(std::memcmp(g.encode(g.mul_base(k)).data(), expected, 32) == 0);

            std::uint8_t point[32];
            crypto_core_ristretto255_random(point);
            const auto decoded = g.decode(std::span<const std::uint8_t>(point, 32));
            REQUIRE(decoded);
            REQUIRE(crypto_scalarmult_ristretto255(expected, k.bytes.data(), point) == 0);
            CHECK(std::memcmp(g.encode(g.mul(k, *decoded)).data(), expected, 32) == 0);
        }
    }

    SECTION("point addition") {
        for (int i = 0; i < 64; ++i) {
            std::uint8_t pa[32], pb[32], expected[32];
            crypto_core_ristretto255_random(pa);
            crypto_core_ristretto255_random(pb);
            REQUIRE(crypto_core_ristretto255_add(expected, pa, pb) == 0);
            const auto a = g.decode(std::span<const std::uint8_t>(pa, 32));
            const auto b = g.decode(std::span<const std::uint8_t>(pb, 32));
            REQUIRE(a);
            REQUIRE(b);
            CHECK(std::memcmp(g.encode(g.add(*a, *b)).data(), expected, 32) == 0);
        }
    }

    SECTION("decode accepts exactly what libsodium accepts") {
        std::uint8_t raw[32];
        int accepted = 0;
        for (int i = 0; i < 2000; ++i) {
            rng.fill(raw);
            const bool sodium_ok = crypto_core_ristretto255_is_valid_point(raw) == 1;
            const bool ours = g.decode(std::span<const std::uint8_t>(raw, 32)).has_value();
            CHECK(ours == sodium_ok);
            accepted += ours;
        }
        // roughly 1 in 16 random strings decode; make sure both sides saw some
        CHECK(accepted > 0);
    }
}

TEST_CASE("ristretto255 encode/decode basics") {
    RistrettoGroup g;
    SeededRng rng(6);

    const auto id_enc = g.encode(g.identity());
    CHECK(id_enc == Encoded32{});
    REQUIRE(g.decode(id_enc));
    CHECK(*g.decode(id_enc) == g.identity());

    for (int i = 0; i < 32; ++i) {
        const auto x = g.mul_base(random_scalar(g, rng));
        REQUIRE(g.decode(g.encode(x)));
        CHECK(*g.decode(g.encode(x)) == x);
    }

    const auto k = random_scalar(g, rng);
    const auto x = g.mul_base(k);
    CHECK(g.mul(g.scalar_from_u64(0), x) == g.identity());
    CHECK(g.mul(g.scalar_from_u64(1), x) == x);
    CHECK(g.add(x, g.identity()) == x);

    // 32 bytes of 0xFF: whatever the verdict is, it must be stable.
    Encoded32 ff;
    ff.fill(0xFF);
    const bool first = g.decode(ff).has_value();
    const bool second = g.decode(ff).has_value();
    CHECK(first == second);
    CHECK_FALSE(first); // 0xFF... is a non-canonical field encoding
}

TEST_CASE("ristretto255 scalar decode enforces canonical form") {
    RistrettoGroup g;
    // L-1 is canonical, L is not.
    // L = 2^252 + 27742317777372353535851937790883648493
    Encoded32 ell{};
    static const std::uint8_t ell_le[32] = {
        0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7,
        0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10};
    std::memcpy(ell.data(), ell_le, 32);
    CHECK_FALSE(g.decode_scalar(ell));

    Encoded32 ell_minus_one = ell;
    ell_minus_one[0] -= 1;
    const auto s = g.decode_scalar(ell_minus_one);
    REQUIRE(s);
    CHECK(g.encode_scalar(*s) == ell_minus_one);

    // sanity: L-1 + 1 == 0 in the scalar field
    CHECK(g.scalar_add(*s, g.scalar_from_u64(1)) == g.scalar_zero());
}

TEST_CASE("counting backend changes counts, not outputs") {
    ToyGroup toy(23);
    OpCounter counter;
    CountingGroup<ToyGroup> counted(toy, counter);
    SeededRng rng(8);

    const auto a = random_scalar(toy, rng);
    const auto b = random_scalar(toy, rng);
    const auto x = toy.mul_base(a);
    const auto y = toy.mul_base(b);

    CHECK(counted.mul(a, x) == toy.mul(a, x));
    CHECK(counted.add(x, y) == toy.add(x, y));
    CHECK(counted.scalar_add(a, b) == toy.scalar_add(a, b));
    CHECK(counter.scalar_mults == 1);
    CHECK(counter.point_adds == 1);
    CHECK(counter.scalar_field_ops == 1);

    std::vector<ToyGroup::Element> xs{x, y, x};
    CHECK(counted.sum(xs) == toy.sum(xs));
    CHECK(counter.point_adds == 3); // n-1 additions for n=3

    CHECK(counted.sum({}) == toy.identity());
    CHECK(counter.point_adds == 3);

    // monotone within a session
    const OpCounter snapshot = counter;
    counted.mul_base(a);
    CHECK(counter.scalar_mults == snapshot.scalar_mults + 1);
}
