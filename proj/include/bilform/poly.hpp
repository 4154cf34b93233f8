#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bilform/field.hpp"

namespace bilform {

inline constexpr u64 kDefaultSeed = 0x5eedf00dULL;

// Univariate polynomial over GF(p), coefficients lowest degree first, no trailing zeros.
class Poly {
public:
    explicit Poly(const PrimeField& f) : f_(f) {}
    Poly(const PrimeField& f, std::vector<u32> coeffs);
    Poly(const PrimeField& f, std::initializer_list<i64> coeffs);

    static Poly monomial(const PrimeField& f, std::size_t deg, u32 c = 1);
    static Poly constant(const PrimeField& f, u32 c) { return Poly(f, std::vector<u32>{c}); }

    const PrimeField& field() const noexcept { return f_; }
    const std::vector<u32>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    // -1 for the zero polynomial
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    u32 lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    u32 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

    Poly monic() const;
    Poly derivative() const;
    u32 eval(u32 x) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(u32 s) const;

    // quotient and remainder; throws DivisionByZero on a zero divisor
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    friend bool operator==(const Poly& a, const Poly& b) noexcept { return a.f_ == b.f_ && a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) noexcept { return !(a == b); }
    // lexicographic by coefficient sequence
    friend bool operator<(const Poly& a, const Poly& b) noexcept { return a.c_ < b.c_; }

    std::string to_string(char var = 't') const;

private:
    void trim();
    PrimeField f_;
    std::vector<u32> c_;
};

Poly poly_gcd(Poly a, Poly b);  // monic, or zero if both are zero
Poly poly_lcm(const Poly& a, const Poly& b);
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly poly_powmod(Poly base, u64 e, const Poly& m);
// t^(p^k) mod m
Poly poly_frobenius_power(const Poly& m, unsigned k);

std::vector<std::pair<Poly, int>> poly_factor(const Poly& f, u64 seed = kDefaultSeed);

// gcd(g, t^(p^k) - t) = 1 for k < deg g and g | t^(p^deg g) - t
bool is_irreducible(const Poly& g);

Poly poly_adjoint(const Poly& f);

// p* is p or monic(-p)
bool is_self_adjoint(const Poly& p);

}  // namespace bilform
