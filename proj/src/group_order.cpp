#include "bilform/group_order.hpp"

#include <sstream>

#include "bilform/error.hpp"

namespace bilform {

BigInt big_pow(u64 base, u64 e) {
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

GroupOrder GroupOrder::gl(u64 q, u64 m) {
    GroupOrder g(q);
    g.qexp_ = m * (m - (m ? 1 : 0)) / 2;
    for (u64 k = 1; k <= m; ++k) g.mul_term(k);
    return g;
}

GroupOrder GroupOrder::power(u64 q, u64 a) {
    GroupOrder g(q);
    g.qexp_ = a;
    return g;
}

GroupOrder& GroupOrder::mul_term(u64 k, u64 mult) {
    if (k == 0) fail(Errc::BadParams, "q^0 - 1 is zero");
    // q = 2, k = 1 contributes 1
    if (mult == 0 || (q_ == 2 && k == 1)) return *this;
    terms_[k] += mult;
    return *this;
}

GroupOrder& GroupOrder::mul_cofactor(const BigInt& c) {
    cof_ *= c;
    return *this;
}

GroupOrder& GroupOrder::operator*=(const GroupOrder& o) {
    if (o.q_ != q_) fail(Errc::FieldMismatch, "group orders over different q");
    qexp_ += o.qexp_;
    for (auto& [k, m] : o.terms_) terms_[k] += m;
    cof_ *= o.cof_;
    return *this;
}

BigInt GroupOrder::value() const {
    BigInt v = big_pow(q_, qexp_);
    for (auto& [k, m] : terms_) {
        BigInt t = big_pow(q_, k) - 1;
        for (u64 i = 0; i < m; ++i) v *= t;
    }
    return v * cof_;
}

std::string GroupOrder::factored() const {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << " * ";
        first = false;
    };
    if (qexp_) {
        sep();
        os << q_ << '^' << qexp_;
    }
    for (auto& [k, m] : terms_) {
        sep();
        os << '(' << q_ << '^' << k << "-1)";
        if (m > 1) os << '^' << m;
    }
    if (cof_ != 1) {
        sep();
        os << cof_.str();
    }
    if (first) os << '1';
    return os.str();
}

std::string to_string(const BigInt& v) { return v.str(); }

}  // namespace bilform
