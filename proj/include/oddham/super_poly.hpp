#pragma once

#include <map>
#include <optional>

#include "oddham/fp.hpp"
#include "oddham/multi_index.hpp"

// The divided power superalgebra O(m, N | n): F_p-linear combinations of
// monomials x^(r) with the supercommutative product
//
//   x^(r) x^(s) = (odd collision factor) * (-1)^{inversions} * C(r+s, r) * x^(r+s),
//
// where the inversion count pairs the odd slots of the left factor against
// strictly smaller odd slots of the right factor, and C(r+s, r) is the
// slotwise product of binomials mod p.  Out-of-range even exponents die
// through the binomial (a base-p carry forces a factor of p).

namespace oddham {

struct MonomialTerm {
    MultiIndex idx;
    Scalar coef = 0;  // zero encodes the vanished product
};

inline MonomialTerm multiply_monomials(const MultiIndex& a, const MultiIndex& b, const Shape& s) {
    const PrimeField F(s.p);
    // Odd collisions kill the product.
    for (std::size_t i = s.m; i < s.slots(); ++i)
        if (a[i] + b[i] > 1) return {};
    // Sign: odd slot i of the left factor passing odd slot j < i of the right.
    std::uint32_t inv = 0;
    for (std::size_t i = s.m; i < s.slots(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = s.m; j < i; ++j) inv += b[j];
    }
    Scalar c = (inv & 1) ? F.neg(1) : 1;
    MultiIndex sum;
    for (std::size_t i = 0; i < s.slots(); ++i) {
        std::uint32_t t = a[i] + b[i];
        if (i < s.m) {
            c = F.mul(c, F.binom(t, a[i]));
            if (!c) return {};
            if (t >= s.slot_size(i)) return {};  // unreachable: the binomial vanished first
        }
        sum[i] = static_cast<std::uint8_t>(t);
    }
    return {sum, c};
}

class SuperPolynomial {
public:
    SuperPolynomial() = default;
    explicit SuperPolynomial(Shape shape) : shape_(shape) {}

    static SuperPolynomial monomial(const MultiIndex& mi, Scalar c, const Shape& s) {
        SuperPolynomial f(s);
        if (c % s.p) f.terms_[mi] = c % s.p;
        return f;
    }

    static SuperPolynomial generator(std::size_t slot, const Shape& s) {
        return monomial(MultiIndex::unit(slot), 1, s);
    }

    static SuperPolynomial one(const Shape& s) { return monomial(MultiIndex{}, 1, s); }

    const Shape& shape() const { return shape_; }
    const std::map<MultiIndex, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Scalar coeff(const MultiIndex& mi) const {
        auto it = terms_.find(mi);
        return it == terms_.end() ? 0 : it->second;
    }

    void add_term(const MultiIndex& mi, Scalar c) {
        const PrimeField F(shape_.p);
        Scalar& slot = terms_[mi];
        slot = F.add(slot, c % shape_.p);
        if (!slot) terms_.erase(mi);
    }

    SuperPolynomial& operator+=(const SuperPolynomial& o) {
        check_shape(o);
        for (const auto& [mi, c] : o.terms_) add_term(mi, c);
        return *this;
    }

    SuperPolynomial operator+(const SuperPolynomial& o) const {
        SuperPolynomial r = *this;
        r += o;
        return r;
    }

    SuperPolynomial scaled(Scalar c) const {
        const PrimeField F(shape_.p);
        SuperPolynomial r(shape_);
        for (const auto& [mi, x] : terms_) {
            Scalar v = F.mul(x, c);
            if (v) r.terms_[mi] = v;
        }
        return r;
    }

    SuperPolynomial operator-(const SuperPolynomial& o) const {
        const PrimeField F(shape_.p);
        return *this + o.scaled(F.neg(1));
    }

    // Z_2-homogeneous parity when defined; nullopt for mixed sums.
    std::optional<std::uint8_t> parity() const {
        std::optional<std::uint8_t> par;
        for (const auto& [mi, c] : terms_) {
            std::uint8_t q = mi.parity(shape_);
            if (!par)
                par = q;
            else if (*par != q)
                return std::nullopt;
        }
        return terms_.empty() ? std::optional<std::uint8_t>(0) : par;
    }

    SuperPolynomial parity_part(std::uint8_t want) const {
        SuperPolynomial r(shape_);
        for (const auto& [mi, c] : terms_)
            if (mi.parity(shape_) == want) r.terms_[mi] = c;
        return r;
    }

    SuperPolynomial drop_constant() const {
        SuperPolynomial r = *this;
        r.terms_.erase(MultiIndex{});
        return r;
    }

    bool operator==(const SuperPolynomial& o) const {
        return shape_ == o.shape_ && terms_ == o.terms_;
    }

    void check_shape(const SuperPolynomial& o) const {
        if (!(shape_ == o.shape_)) throw ShapeError("shape mismatch");
    }

private:
    Shape shape_;
    std::map<MultiIndex, Scalar> terms_;
};

inline SuperPolynomial multiply(const SuperPolynomial& f, const SuperPolynomial& g) {
    f.check_shape(g);
    const Shape& s = f.shape();
    const PrimeField F(s.p);
    SuperPolynomial out(s);
    for (const auto& [a, ca] : f.terms())
        for (const auto& [b, cb] : g.terms()) {
            MonomialTerm t = multiply_monomials(a, b, s);
            if (t.coef) out.add_term(t.idx, F.mul(t.coef, F.mul(ca, cb)));
        }
    return out;
}

// The distinguished partial derivative on a monomial: d_i x^(r) is
// x^(r - e_i) with sign +1 on even slots and (-1)^{#occupied odd slots
// before i} on odd slots (the superderivation extension of the
// one-variable rule d_i x^(k e_j) = delta_ij x^((k-1) e_j)).
inline SuperPolynomial partial(std::size_t slot, const SuperPolynomial& f) {
    const Shape& s = f.shape();
    if (slot >= s.slots()) throw ShapeError("derivative slot out of range");
    const PrimeField F(s.p);
    SuperPolynomial out(s);
    for (const auto& [mi, c] : f.terms()) {
        if (!mi[slot]) continue;
        MultiIndex down = mi;
        down[slot] -= 1;
        Scalar v = c;
        if (s.odd_slot(slot)) {
            std::uint32_t before = 0;
            for (std::size_t j = s.m; j < slot; ++j) before += mi[j];
            if (before & 1) v = F.neg(v);
        }
        out.add_term(down, v);
    }
    return out;
}

inline std::uint8_t monomial_parity(const MultiIndex& mi, const Shape& s) { return mi.parity(s); }
inline std::uint32_t monomial_degree(const MultiIndex& mi, const Shape& s) { return mi.degree(s); }

}  // namespace oddham
