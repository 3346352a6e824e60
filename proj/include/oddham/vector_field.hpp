#pragma once

#include <map>

#include "oddham/linalg.hpp"
#include "oddham/super_poly.hpp"

// Distinguished superderivations of O(m, N | n): finite sums sum_k f_k d_k.
// Includes the odd Hamiltonian machinery: the map f -> De_f pairing each
// slot with its conjugate, the Buttin bracket, and supercommutators of
// fields computed through their operator matrices on O.

namespace oddham {

class VectorField {
public:
    VectorField() = default;
    explicit VectorField(Shape shape) : shape_(shape) {}

    const Shape& shape() const { return shape_; }
    const std::map<std::size_t, SuperPolynomial>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    SuperPolynomial component(std::size_t k) const {
        auto it = comps_.find(k);
        return it == comps_.end() ? SuperPolynomial(shape_) : it->second;
    }

    void add_component(std::size_t k, const SuperPolynomial& f) {
        if (f.is_zero()) return;
        auto it = comps_.find(k);
        if (it == comps_.end()) {
            comps_.emplace(k, f);
        } else {
            it->second += f;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    VectorField& operator+=(const VectorField& o) {
        for (const auto& [k, f] : o.comps_) add_component(k, f);
        return *this;
    }

    VectorField scaled(Scalar c) const {
        VectorField r(shape_);
        for (const auto& [k, f] : comps_) r.add_component(k, f.scaled(c));
        return r;
    }

    VectorField operator-(const VectorField& o) const {
        const PrimeField F(shape_.p);
        VectorField r = *this;
        r += o.scaled(F.neg(1));
        return r;
    }

    // Parity of a homogeneous field f_k d_k is |f_k| + |x_k|.
    std::optional<std::uint8_t> parity() const {
        std::optional<std::uint8_t> par;
        for (const auto& [k, f] : comps_) {
            auto pf = f.parity();
            if (!pf) return std::nullopt;
            std::uint8_t q = (*pf + (shape_.odd_slot(k) ? 1 : 0)) & 1;
            if (!par)
                par = q;
            else if (*par != q)
                return std::nullopt;
        }
        return comps_.empty() ? std::optional<std::uint8_t>(0) : par;
    }

    VectorField parity_part(std::uint8_t want) const {
        VectorField r(shape_);
        for (const auto& [k, f] : comps_) {
            std::uint8_t flip = shape_.odd_slot(k) ? 1 : 0;
            r.add_component(k, f.parity_part((want + flip) & 1));
        }
        return r;
    }

    bool operator==(const VectorField& o) const {
        return shape_ == o.shape_ && comps_ == o.comps_;
    }

private:
    Shape shape_;
    std::map<std::size_t, SuperPolynomial> comps_;
};

// Evaluation D(g) = sum_k f_k * d_k(g).
inline SuperPolynomial apply(const VectorField& D, const SuperPolynomial& g) {
    if (!(D.shape() == g.shape())) throw ShapeError("shape mismatch");
    SuperPolynomial out(g.shape());
    for (const auto& [k, f] : D.components()) out += multiply(f, partial(k, g));
    return out;
}

// The Euler field sum_i x_i d_i grading O by total degree.
inline VectorField euler_field(const Shape& s) {
    VectorField E(s);
    for (std::size_t i = 0; i < s.slots(); ++i)
        E.add_component(i, SuperPolynomial::generator(i, s));
    return E;
}

// De_f = sum_i (-1)^{|d_i| |f|} d_i(f) d_{i'} with i' the conjugate slot.
// Non-homogeneous f is split by parity and mapped linearly.
inline VectorField de(const SuperPolynomial& f) {
    const Shape& s = f.shape();
    if (s.m != s.n) throw ShapeError("De needs an (n, N | n) shape");
    const PrimeField F(s.p);
    VectorField out(s);
    for (std::uint8_t par = 0; par < 2; ++par) {
        SuperPolynomial part = f.parity_part(par);
        if (part.is_zero()) continue;
        for (std::size_t i = 0; i < s.slots(); ++i) {
            SuperPolynomial df = partial(i, part);
            if (df.is_zero()) continue;
            if (s.odd_slot(i) && par) df = df.scaled(F.neg(1));
            out.add_component(s.conj(i), df);
        }
    }
    return out;
}

// Buttin bracket {f,g}_B = De_f(g).
inline SuperPolynomial buttin_bracket(const SuperPolynomial& f, const SuperPolynomial& g) {
    return apply(de(f), g);
}

// Matrix of the field on the monomial basis of O (column j = image of the
// j-th monomial in rank order).
inline SparseMat operator_matrix(const VectorField& D) {
    const Shape& s = D.shape();
    const PrimeField F(s.p);
    std::size_t dim = s.monomial_count();
    SparseMat M(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        SuperPolynomial img = apply(D, SuperPolynomial::monomial(MultiIndex::from_rank(j, s), 1, s));
        for (const auto& [mi, c] : img.terms()) M.add(mi.rank(s), j, c, F);
    }
    return M;
}

// Reads a vector field off an operator matrix via the images of the
// degree-one generators; returns nullopt when the operator is not of the
// form sum f_k d_k (checked by rebuilding the matrix).
inline std::optional<VectorField> field_from_matrix(const SparseMat& M, const Shape& s) {
    VectorField out(s);
    for (std::size_t k = 0; k < s.slots(); ++k) {
        std::size_t col = MultiIndex::unit(k).rank(s);
        SuperPolynomial fk(s);
        for (const auto& [row, c] : M.col(col)) fk.add_term(MultiIndex::from_rank(row, s), c);
        out.add_component(k, fk);
    }
    SparseMat check = operator_matrix(out);
    const PrimeField F(s.p);
    for (std::size_t j = 0; j < M.dim(); ++j) {
        Vec e(M.dim(), 0);
        e[j] = 1;
        if (M.apply(e, F) != check.apply(e, F)) return std::nullopt;
    }
    return out;
}

// [D, E] = D o E - (-1)^{|D||E|} E o D, computed on operator matrices and
// re-expressed as a field (inputs split into parity-homogeneous parts).
inline VectorField super_commutator(const VectorField& D, const VectorField& E) {
    const Shape& s = D.shape();
    if (!(s == E.shape())) throw ShapeError("shape mismatch");
    const PrimeField F(s.p);
    VectorField out(s);
    for (std::uint8_t pd = 0; pd < 2; ++pd)
        for (std::uint8_t pe = 0; pe < 2; ++pe) {
            VectorField A = D.parity_part(pd), B = E.parity_part(pe);
            if (A.is_zero() || B.is_zero()) continue;
            SparseMat ma = operator_matrix(A), mb = operator_matrix(B);
            SparseMat ab = ma.mul(mb, F), ba = mb.mul(ma, F);
            SparseMat comm(ma.dim());
            Scalar sgn = (pd & pe) ? F.neg(1) : 1;
            for (std::size_t j = 0; j < ab.dim(); ++j) {
                for (const auto& [r, c] : ab.col(j)) comm.add(r, j, c, F);
                for (const auto& [r, c] : ba.col(j)) comm.add(r, j, F.mul(sgn, F.neg(c)), F);
            }
            comm.prune();
            auto field = field_from_matrix(comm, s);
            if (!field) throw ConsistencyError("supercommutator is not a distinguished field");
            out += *field;
        }
    return out;
}

}  // namespace oddham
