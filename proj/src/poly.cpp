#include "bilform/poly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace bilform {

Poly::Poly(const PrimeField& f, std::vector<u32> coeffs) : f_(f), c_(std::move(coeffs)) {
    for (auto& c : c_) c %= f_.p();
    trim();
}

Poly::Poly(const PrimeField& f, std::initializer_list<i64> coeffs) : f_(f) {
    for (i64 c : coeffs) c_.push_back(f_.reduce(c));
    trim();
}

Poly Poly::monomial(const PrimeField& f, std::size_t deg, u32 c) {
    std::vector<u32> v(deg + 1, 0);
    v[deg] = c;
    return Poly(f, std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monic() const {
    if (c_.empty()) return *this;
    return scaled(f_.inv(lead()));
}

Poly Poly::scaled(u32 s) const {
    std::vector<u32> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_.mul(c_[i], s);
    return Poly(f_, std::move(v));
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<u32> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = f_.mul(c_[i], static_cast<u32>(i % f_.p()));
    return Poly(f_, std::move(v));
}

u32 Poly::eval(u32 x) const {
    u32 r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = f_.add(f_.mul(r, x), c_[i]);
    return r;
}

static void same_field(const Poly& a, const Poly& b) {
    if (a.field() != b.field()) fail(Errc::FieldMismatch, "polynomials over different fields");
}

Poly Poly::operator+(const Poly& o) const {
    same_field(*this, o);
    std::vector<u32> v(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f_.add(coeff(i), o.coeff(i));
    return Poly(f_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const {
    same_field(*this, o);
    std::vector<u32> v(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f_.sub(coeff(i), o.coeff(i));
    return Poly(f_, std::move(v));
}

Poly Poly::operator-() const { return scaled(f_.neg(1)); }

Poly Poly::operator*(const Poly& o) const {
    same_field(*this, o);
    if (c_.empty() || o.c_.empty()) return Poly(f_);
    std::vector<u32> v(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] = f_.add(v[i + j], f_.mul(c_[i], o.c_[j]));
    }
    return Poly(f_, std::move(v));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    same_field(*this, d);
    if (d.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    if (degree() < d.degree()) return {Poly(f_), *this};
    std::vector<u32> r = c_;
    std::vector<u32> q(c_.size() - d.c_.size() + 1, 0);
    u32 li = f_.inv(d.lead());
    for (std::size_t k = q.size(); k-- > 0;) {
        u32 c = f_.mul(r[k + d.c_.size() - 1], li);
        q[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] = f_.sub(r[k + j], f_.mul(c, d.c_[j]));
    }
    return {Poly(f_, std::move(q)), Poly(f_, std::move(r))};
}

std::string Poly::to_string(char var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i >= 1) os << var;
        if (i >= 2) os << '^' << i;
    }
    return os.str();
}

Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly poly_lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    return (a * b / poly_gcd(a, b)).monic();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly poly_powmod(Poly base, u64 e, const Poly& m) {
    Poly r = Poly::constant(m.field(), 1) % m;
    base = base % m;
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, m);
        base = poly_mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

Poly poly_frobenius_power(const Poly& m, unsigned k) {
    Poly h = Poly::monomial(m.field(), 1) % m;
    for (unsigned i = 0; i < k; ++i) h = poly_powmod(h, m.field().p(), m);
    return h;
}

namespace {

// g(t) with f(t) = g(t^p); valid when f' = 0
Poly pth_root(const Poly& f) {
    const u32 p = f.field().p();
    std::vector<u32> v;
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) v.push_back(f.coeffs()[i]);
    return Poly(f.field(), std::move(v));
}

void squarefree(const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) {
    if (f.degree() <= 0) return;
    const int p = static_cast<int>(f.field().p());
    Poly c = poly_gcd(f, f.derivative());
    Poly w = f / c;
    int i = 1;
    while (w.degree() > 0) {
        Poly y = poly_gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) out.emplace_back(z.monic(), i * mult);
        ++i;
        w = y;
        c = c / y;
    }
    if (c.degree() > 0) squarefree(pth_root(c.monic()), mult * p, out);
}

Poly random_poly(const PrimeField& F, int deg_below, std::mt19937_64& rng) {
    std::uniform_int_distribution<u32> d(0, F.p() - 1);
    std::vector<u32> v(static_cast<std::size_t>(deg_below));
    for (auto& x : v) x = d(rng);
    return Poly(F, std::move(v));
}

// f squarefree monic, all irreducible factors of degree d
void equal_degree(const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (f.degree() == d) {
        out.push_back(f.monic());
        return;
    }
    const PrimeField& F = f.field();
    const u32 p = F.p();
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Poly a = random_poly(F, f.degree(), rng);
        if (a.degree() <= 0) continue;
        Poly g = poly_gcd(f, a);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f / g, d, rng, out);
            return;
        }
        Poly b(F);
        if (p == 2) {
            // trace: a + a^2 + ... + a^(2^(d-1))
            Poly term = a % f;
            b = term;
            for (int i = 1; i < d; ++i) {
                term = poly_mulmod(term, term, f);
                b = b + term;
            }
        } else {
            // norm-like product a * a^p * ... * a^(p^(d-1)), then ^((p-1)/2)
            Poly term = a % f;
            Poly prod = term;
            for (int i = 1; i < d; ++i) {
                term = poly_powmod(term, p, f);
                prod = poly_mulmod(prod, term, f);
            }
            b = poly_powmod(prod, (p - 1) / 2, f) - Poly::constant(F, 1);
        }
        g = poly_gcd(f, b);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f / g, d, rng, out);
            return;
        }
    }
    fail(Errc::InternalInconsistency, "equal-degree splitting did not converge");
}

}  // namespace

std::vector<std::pair<Poly, int>> poly_factor(const Poly& f, u64 seed) {
    if (f.is_zero()) fail(Errc::ZeroPolynomial, "cannot factor 0");
    const PrimeField& F = f.field();
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Poly, int>> sqf;
    squarefree(f.monic(), 1, sqf);

    std::vector<std::pair<Poly, int>> result;
    for (auto& [g0, mult] : sqf) {
        Poly g = g0;
        Poly h = Poly::monomial(F, 1) % g;
        const Poly t = Poly::monomial(F, 1);
        for (int d = 1; g.degree() >= 2 * d; ++d) {
            h = poly_powmod(h, F.p(), g);
            Poly dd = poly_gcd(g, h - t);
            if (dd.degree() > 0) {
                std::vector<Poly> parts;
                equal_degree(dd, d, rng, parts);
                for (auto& q : parts) result.emplace_back(q, mult);
                g = g / dd;
                h = h % g;
            }
        }
        if (g.degree() > 0) result.emplace_back(g.monic(), mult);
    }
    // merge equal factors (the squarefree pass can split one factor across p-power levels)
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Poly, int>> merged;
    for (auto& e : result) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(e);
    }
    return merged;
}

bool is_irreducible(const Poly& g) {
    if (g.degree() <= 0) return false;
    const PrimeField& F = g.field();
    Poly m = g.monic();
    const Poly t = Poly::monomial(F, 1);
    Poly h = t % m;
    for (int k = 1; k < m.degree(); ++k) {
        h = poly_powmod(h, F.p(), m);
        if (poly_gcd(m, h - t).degree() > 0) return false;
    }
    h = poly_powmod(h, F.p(), m);
    return (h - t % m).is_zero() || ((h - t) % m).is_zero();
}

Poly poly_adjoint(const Poly& f) {
    if (f.is_zero()) fail(Errc::ZeroPolynomial, "adjoint of 0");
    if (f.coeff(0) == 0) fail(Errc::ZeroConstantTerm, "adjoint needs a nonzero constant term");
    std::vector<u32> v(f.coeffs().rbegin(), f.coeffs().rend());
    return Poly(f.field(), std::move(v)).monic();
}

bool is_self_adjoint(const Poly& p) {
    Poly m = p.monic();
    Poly a = poly_adjoint(m);
    return a == m || a == (-m).monic();
}

}  // namespace bilform
