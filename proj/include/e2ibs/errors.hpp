#pragma once

#include <stdexcept>
#include <string>

namespace e2ibs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input bytes violate a documented format (wrong length, bad padding, ...).
struct MalformedInputError : Error {
    using Error::Error;
};

// Caller-supplied configuration is unusable (t not a power of two, expiry
// before issuance, unknown actor in a scenario script, ...).
struct ConfigError : Error {
    using Error::Error;
};

// (t, k) does not reach the required security level.
struct ParameterError : Error {
    using Error::Error;
};

// A nonce packet was consumed twice. Schnorr-family nonce reuse reveals the
// signing key, so this is a hard failure rather than a recoverable one.
struct NonceReuseError : Error {
    using Error::Error;
};

// PKG extraction response failed the user-side verification check.
struct ExtractionRejectedError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

} // namespace e2ibs
