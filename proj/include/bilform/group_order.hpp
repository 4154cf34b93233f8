#pragma once

#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "bilform/field.hpp"

namespace bilform {

using BigInt = boost::multiprecision::cpp_int;

BigInt big_pow(u64 base, u64 e);

// q^a * prod_k (q^k - 1)^(b_k) * cofactor, kept factored for reporting.
class GroupOrder {
public:
    explicit GroupOrder(u64 q) : q_(q) {}
    static GroupOrder gl(u64 q, u64 m);  // |GL_m(q)|
    static GroupOrder power(u64 q, u64 a);

    u64 q() const noexcept { return q_; }
    u64 q_exponent() const noexcept { return qexp_; }
    const std::map<u64, u64>& gl_terms() const noexcept { return terms_; }
    const BigInt& cofactor() const noexcept { return cof_; }

    GroupOrder& mul_q_power(u64 a) {
        qexp_ += a;
        return *this;
    }
    GroupOrder& mul_term(u64 k, u64 mult = 1);  // (q^k - 1)^mult
    GroupOrder& mul_cofactor(const BigInt& c);
    GroupOrder& operator*=(const GroupOrder& o);

    BigInt value() const;
    std::string factored() const;

private:
    u64 q_;
    u64 qexp_ = 0;
    std::map<u64, u64> terms_;
    BigInt cof_ = 1;
};

std::string to_string(const BigInt& v);

}  // namespace bilform
