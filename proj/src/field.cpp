#include "bilform/field.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace bilform {

bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(u64 p) : p_(0) {
    if (p >= (u64(1) << 32) || !is_prime(p)) fail(Errc::BadPrime, "not a machine-word prime: " + std::to_string(p));
    p_ = static_cast<u32>(p);
}

u32 PrimeField::pow(u32 a, u64 e) const noexcept {
    u64 r = 1 % p_, b = a % p_;
    while (e) {
        if (e & 1) r = r * b % p_;
        b = b * b % p_;
        e >>= 1;
    }
    return static_cast<u32>(r);
}

u32 PrimeField::inv(u32 a) const {
    if (a % p_ == 0) fail(Errc::DivisionByZero, "inverse of 0 in GF(" + std::to_string(p_) + ")");
    // extended Euclid
    i64 t = 0, nt = 1, r = p_, nr = a % p_;
    while (nr != 0) {
        i64 q = r / nr;
        i64 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    return reduce(t);
}

u32 PrimeField::primitive_root() const {
    if (p_ == 2) return 1;
    std::vector<u64> primes;
    u64 m = p_ - 1;
    for (u64 d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            primes.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) primes.push_back(m);
    for (u32 g = 2; g < p_; ++g) {
        bool ok = true;
        for (u64 q : primes)
            if (pow(g, (p_ - 1) / q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    fail(Errc::InternalInconsistency, "no primitive root");
}

static void check_same(const FieldElement& a, const FieldElement& b) {
    if (a.field() != b.field())
        fail(Errc::FieldMismatch, "GF(" + std::to_string(a.field().p()) + ") vs GF(" + std::to_string(b.field().p()) + ")");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same(*this, o);
    return FieldElement(f_, f_.add(v_, o.v_));
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same(*this, o);
    return FieldElement(f_, f_.sub(v_, o.v_));
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same(*this, o);
    return FieldElement(f_, f_.mul(v_, o.v_));
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
    check_same(*this, o);
    return FieldElement(f_, f_.div(v_, o.v_));
}
FieldElement FieldElement::inverse() const { return FieldElement(f_, f_.inv(v_)); }

std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.value(); }

FieldElement ff_arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
    switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
    case ArithOp::inv: return a.inverse();
    case ArithOp::neg: return -a;
    }
    fail(Errc::BadParams, "unknown op");
}

}  // namespace bilform
