#pragma once

#include <cstdint>
#include <iosfwd>

#include "bilform/error.hpp"

namespace bilform {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// GF(p) for a prime p < 2^32. Elements are plain u32 values in [0, p).
class PrimeField {
public:
    explicit PrimeField(u64 p);

    u32 p() const noexcept { return p_; }
    u32 char_() const noexcept { return p_; }

    u32 reduce(i64 v) const noexcept {
        i64 r = v % static_cast<i64>(p_);
        return static_cast<u32>(r < 0 ? r + p_ : r);
    }
    u32 add(u32 a, u32 b) const noexcept {
        u64 s = u64(a) + b;
        return static_cast<u32>(s >= p_ ? s - p_ : s);
    }
    u32 sub(u32 a, u32 b) const noexcept { return a >= b ? a - b : static_cast<u32>(u64(a) + p_ - b); }
    u32 neg(u32 a) const noexcept { return a == 0 ? 0 : p_ - a; }
    u32 mul(u32 a, u32 b) const noexcept { return static_cast<u32>(u64(a) * b % p_); }
    u32 pow(u32 a, u64 e) const noexcept;
    u32 inv(u32 a) const;
    u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }

    // Smallest generator of the multiplicative group.
    u32 primitive_root() const;

    friend bool operator==(const PrimeField& a, const PrimeField& b) noexcept { return a.p_ == b.p_; }
    friend bool operator!=(const PrimeField& a, const PrimeField& b) noexcept { return a.p_ != b.p_; }

private:
    u32 p_;
};

bool is_prime(u64 n) noexcept;

class FieldElement {
public:
    FieldElement(const PrimeField& f, i64 v) : f_(f), v_(f.reduce(v)) {}

    const PrimeField& field() const noexcept { return f_; }
    u32 value() const noexcept { return v_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const { return FieldElement(f_, f_.neg(v_)); }
    FieldElement inverse() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
        return a.f_ == b.f_ && a.v_ == b.v_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) noexcept { return !(a == b); }

private:
    PrimeField f_;
    u32 v_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

enum class ArithOp { add, sub, mul, div, inv, neg };

// For unary ops the second operand is ignored.
FieldElement ff_arith(const FieldElement& a, const FieldElement& b, ArithOp op);

}  // namespace bilform
