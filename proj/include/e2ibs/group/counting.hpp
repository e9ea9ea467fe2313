#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "e2ibs/group/group.hpp"

namespace e2ibs {

// Operation tally for one single-threaded counting session.
struct OpCounter {
    std::uint64_t scalar_mults = 0;
    std::uint64_t point_adds = 0;
    std::uint64_t scalar_field_ops = 0;

    void reset() { *this = OpCounter{}; }
};

// Wraps another backend and tallies group operations into an external
// OpCounter. Outputs are bit-identical to the inner backend's; only the
// counts change. sum() is deliberately spelled out as n-1 adds so cost
// assertions see through it.
template <PrimeOrderGroup G>
class CountingGroup {
public:
    using Scalar = typename G::Scalar;
    using Element = typename G::Element;

    CountingGroup(const G& inner, OpCounter& counter) : inner_(&inner), counter_(&counter) {}

    std::string id() const { return inner_->id() + "+count"; }

    Element identity() const { return inner_->identity(); }
    Element generator() const { return inner_->generator(); }

    Element mul(const Scalar& k, const Element& x) const {
        ++counter_->scalar_mults;
        return inner_->mul(k, x);
    }
    Element mul_base(const Scalar& k) const {
        ++counter_->scalar_mults;
        return inner_->mul_base(k);
    }

    Element add(const Element& a, const Element& b) const {
        ++counter_->point_adds;
        return inner_->add(a, b);
    }

    Element sum(std::span<const Element> xs) const {
        if (xs.empty()) return identity();
        Element acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
        return acc;
    }

    Encoded32 encode(const Element& x) const { return inner_->encode(x); }
    std::optional<Element> decode(std::span<const std::uint8_t> bytes) const {
        return inner_->decode(bytes);
    }

    Scalar scalar_zero() const { return inner_->scalar_zero(); }
    Scalar scalar_from_u64(std::uint64_t v) const { return inner_->scalar_from_u64(v); }
    Scalar scalar_from_wide_bytes(std::span<const std::uint8_t> wide) const {
        return inner_->scalar_from_wide_bytes(wide);
    }

    Scalar scalar_add(const Scalar& a, const Scalar& b) const {
        ++counter_->scalar_field_ops;
        return inner_->scalar_add(a, b);
    }
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const {
        ++counter_->scalar_field_ops;
        return inner_->scalar_sub(a, b);
    }
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const {
        ++counter_->scalar_field_ops;
        return inner_->scalar_mul(a, b);
    }

    Encoded32 encode_scalar(const Scalar& s) const { return inner_->encode_scalar(s); }
    std::optional<Scalar> decode_scalar(std::span<const std::uint8_t> bytes) const {
        return inner_->decode_scalar(bytes);
    }

    const OpCounter& counts() const { return *counter_; }

private:
    const G* inner_;
    OpCounter* counter_;
};

} // namespace e2ibs
