#pragma once

#include <concepts>
#include <cstdint>
#include <cstring>
#include <span>

#include <sodium.h>

#include "e2ibs/bytes.hpp"

namespace e2ibs {

inline void ensure_sodium_init() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("sodium_init failed");
}

// Anything that can fill a buffer with bytes. SystemRng is the production
// source; SeededRng gives reproducible streams for tests and the simulator.
template <typename R>
concept RandomSource = requires(R r, std::span<std::uint8_t> out) {
    { r.fill(out) };
};

struct SystemRng {
    SystemRng() { ensure_sodium_init(); }
    void fill(std::span<std::uint8_t> out) { randombytes_buf(out.data(), out.size()); }
};

// Deterministic ChaCha20 stream keyed from a 64-bit seed. Each fill() call
// consumes one nonce, so interleaved consumers of a shared SeededRng stay
// reproducible as long as the call order is fixed.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) {
        ensure_sodium_init();
        const Bytes tag = to_bytes("E2IBS-RNG");
        Bytes preimage = tag;
        append_be64(preimage, seed);
        crypto_generichash(key_, sizeof key_, preimage.data(), preimage.size(), nullptr, 0);
    }

    void fill(std::span<std::uint8_t> out) {
        std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {};
        std::memcpy(nonce, &counter_, sizeof counter_);
        ++counter_;
        crypto_stream_chacha20(out.data(), out.size(), nonce, key_);
    }

private:
    std::uint8_t key_[crypto_stream_chacha20_KEYBYTES] = {};
    std::uint64_t counter_ = 0;
};

} // namespace e2ibs
