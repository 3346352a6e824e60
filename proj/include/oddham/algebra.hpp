#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "oddham/vector_field.hpp"

// The odd Hamiltonian Lie superalgebras le(n) = { De_f } and
// le'(n) = le(n) + F * (Euler field), over F_p with height-one divided
// powers.  Elements are canonically represented by their potentials (the
// constant term is the kernel of De), so the basis is indexed by the
// nonzero exponent tuples in rank order, with the Euler element appended
// for the extended algebra.

namespace oddham {

// A weight in the span of eps_1..eps_n (and delta for the extended
// algebra): eps_i is dual to De_{x_i x_i'}, delta to the Euler element.
struct Weight {
    std::array<std::uint8_t, 3> eps{};
    std::uint8_t delta = 0;
    std::uint8_t n = 0;
    bool barred = true;  // false: le(n) weights, no delta coordinate

    static Weight zero(std::uint8_t n, bool barred) {
        Weight w;
        w.n = n;
        w.barred = barred;
        return w;
    }

    bool is_zero() const {
        for (std::uint8_t i = 0; i < n; ++i)
            if (eps[i]) return false;
        return !barred || delta == 0;
    }

    Weight add(const Weight& o, const PrimeField& F) const {
        Weight w = *this;
        for (std::uint8_t i = 0; i < n; ++i) w.eps[i] = F.add(w.eps[i], o.eps[i]);
        if (barred) w.delta = F.add(w.delta, o.delta);
        return w;
    }

    Weight sub(const Weight& o, const PrimeField& F) const {
        Weight w = *this;
        for (std::uint8_t i = 0; i < n; ++i) w.eps[i] = F.sub(w.eps[i], o.eps[i]);
        if (barred) w.delta = F.sub(w.delta, o.delta);
        return w;
    }

    Weight scaled(Scalar c, const PrimeField& F) const {
        Weight w = *this;
        for (std::uint8_t i = 0; i < n; ++i) w.eps[i] = F.mul(w.eps[i], c);
        if (barred) w.delta = F.mul(w.delta, c);
        return w;
    }

    // Restriction to le(n): forget the delta coordinate.
    Weight restricted() const {
        Weight w = *this;
        w.barred = false;
        w.delta = 0;
        return w;
    }

    Weight extended(std::uint8_t b) const {
        Weight w = *this;
        w.barred = true;
        w.delta = b;
        return w;
    }

    std::uint32_t key() const {
        std::uint32_t k = barred ? 1 : 0;
        for (std::uint8_t i = 0; i < n; ++i) k = (k << 4) | eps[i];
        k = (k << 4) | (barred ? delta : 0);
        return k;
    }

    bool operator==(const Weight& o) const {
        return n == o.n && barred == o.barred && key() == o.key();
    }
    bool operator<(const Weight& o) const { return key() < o.key(); }

    std::string to_string() const {
        std::string s;
        for (std::uint8_t i = 0; i < n; ++i) {
            if (i) s += ',';
            s += std::to_string(static_cast<int>(eps[i]));
        }
        if (barred) {
            s += '|';
            s += std::to_string(static_cast<int>(delta));
        }
        return s;
    }

    static Weight parse(const std::string& text, std::uint8_t n, bool barred, const PrimeField& F) {
        Weight w = zero(n, barred);
        std::size_t pos = 0;
        auto read_int = [&]() -> Scalar {
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw ShapeError("bad weight: " + text);
            long v = std::stol(text.substr(start, pos - start));
            if (v < 0 || static_cast<Scalar>(v) >= F.p())
                throw ShapeError("weight coordinate out of range: " + text);
            return static_cast<Scalar>(v);
        };
        for (std::uint8_t i = 0; i < n; ++i) {
            w.eps[i] = static_cast<std::uint8_t>(read_int());
            if (i + 1 < n) {
                if (pos >= text.size() || text[pos] != ',') throw ShapeError("bad weight: " + text);
                ++pos;
            }
        }
        if (barred) {
            if (pos >= text.size() || text[pos] != '|')
                throw ShapeError("weight needs a |b part: " + text);
            ++pos;
            w.delta = static_cast<std::uint8_t>(read_int());
        }
        if (pos != text.size()) throw ShapeError("trailing weight text: " + text);
        return w;
    }
};

// Integral character: coefficients over the torus character lattice,
// one slot per eps plus the scaling slot.  Reduces mod p to a Weight.
struct CharVec {
    std::array<std::int32_t, 4> c{};  // c[0..n-1] eps lifts, c[3] scaling part
    std::uint8_t n = 0;

    CharVec add(const CharVec& o) const {
        CharVec r = *this;
        for (int i = 0; i < 4; ++i) r.c[i] += o.c[i];
        return r;
    }

    Weight reduced(const PrimeField& F, bool barred) const {
        Weight w = Weight::zero(n, barred);
        for (std::uint8_t i = 0; i < n; ++i) w.eps[i] = F.reduce(c[i]);
        if (barred) w.delta = F.reduce(c[3]);
        return w;
    }

    bool operator==(const CharVec& o) const { return n == o.n && c == o.c; }
};

using SparseVec = std::vector<std::pair<std::uint32_t, Scalar>>;

inline void sparse_add(SparseVec& acc, std::uint32_t idx, Scalar c, const PrimeField& F) {
    if (!c) return;
    for (auto& [i, x] : acc)
        if (i == idx) {
            x = F.add(x, c);
            return;
        }
    acc.emplace_back(idx, c);
}

inline void sparse_prune(SparseVec& v) {
    std::erase_if(v, [](const auto& e) { return e.second == 0; });
    std::sort(v.begin(), v.end());
}

enum class Which { le, lebar };

class AlgebraTable {
public:
    static std::shared_ptr<const AlgebraTable> build(Which which, std::uint32_t n, std::uint32_t p) {
        return std::shared_ptr<const AlgebraTable>(new AlgebraTable(which, n, p));
    }

    const Shape& shape() const { return shape_; }
    const PrimeField& field() const { return F_; }
    bool barred() const { return which_ == Which::lebar; }
    Which which() const { return which_; }
    std::uint32_t n() const { return shape_.n; }
    std::uint32_t p() const { return shape_.p; }

    std::uint32_t dim() const { return static_cast<std::uint32_t>(potentials_.size()) + (barred() ? 1 : 0); }
    bool is_euler(std::uint32_t i) const { return barred() && i == potentials_.size(); }

    const MultiIndex& potential(std::uint32_t i) const { return potentials_[i]; }
    std::uint8_t parity(std::uint32_t i) const { return is_euler(i) ? 0 : parity_[i]; }
    int jdeg(std::uint32_t i) const { return is_euler(i) ? 0 : jdeg_[i]; }
    const Weight& weight(std::uint32_t i) const { return weight_[i]; }
    const CharVec& character(std::uint32_t i) const { return char_[i]; }

    std::optional<std::uint32_t> index_of(const MultiIndex& r) const {
        auto it = index_of_.find(r.rank(shape_));
        return it == index_of_.end() ? std::nullopt : std::optional<std::uint32_t>(it->second);
    }

    std::uint32_t euler_index() const {
        if (!barred()) throw ShapeError("le(n) has no grading element");
        return static_cast<std::uint32_t>(potentials_.size());
    }

    // Cartan data: h_i = De_{x_i x_i'} for i < n, plus the Euler element.
    const std::vector<std::uint32_t>& cartan() const { return cartan_; }
    bool is_cartan(std::uint32_t i) const { return cartan_set_[i]; }

    // lambda evaluated on the cartan basis element with table index i.
    Scalar eval(const Weight& lambda, std::uint32_t i) const {
        if (is_euler(i)) return lambda.barred ? lambda.delta : 0;
        for (std::uint8_t k = 0; k < shape_.n; ++k)
            if (potentials_[i] == h_potential(k)) return lambda.eps[k];
        throw ShapeError("eval on a non-cartan element");
    }

    VectorField field_of(std::uint32_t i) const {
        if (is_euler(i)) return euler_field(shape_);
        return de(SuperPolynomial::monomial(potentials_[i], 1, shape_));
    }

    SparseMat op_matrix(std::uint32_t i) const { return operator_matrix(field_of(i)); }

    // Structure constants [x_i, x_j], a view into the flat bracket table.
    std::span<const std::pair<std::uint32_t, Scalar>> bracket(std::uint32_t i,
                                                              std::uint32_t j) const {
        std::size_t cell = static_cast<std::size_t>(i) * dim() + j;
        return {bracket_entries_.data() + bracket_offsets_[cell],
                bracket_entries_.data() + bracket_offsets_[cell + 1]};
    }

    // p-th power of an even basis element, as an element of the algebra.
    SparseVec ppower(std::uint32_t i) const {
        if (parity(i) != 0) throw ShapeError("p-power of an odd element");
        {
            std::lock_guard<std::mutex> lock(ppower_mutex_);
            auto it = ppower_cache_.find(i);
            if (it != ppower_cache_.end()) return it->second;
        }
        SparseVec v = compute_ppower(i);
        std::lock_guard<std::mutex> lock(ppower_mutex_);
        ppower_cache_[i] = v;
        return v;
    }

    // Decomposes a distinguished field as c_E * Euler + De_g; exact, with
    // full verification of the reconstruction.
    std::optional<std::pair<Scalar, SuperPolynomial>> de_decompose(const VectorField& D) const;

    MultiIndex h_potential(std::uint8_t k) const {
        MultiIndex r;
        r[k] = 1;
        r[shape_.conj(k)] = 1;
        return r;
    }

private:
    AlgebraTable(Which which, std::uint32_t n, std::uint32_t p)
        : shape_(Shape::hamiltonian(n, p)), F_(p), which_(which) {
        const std::uint64_t count = shape_.monomial_count();
        potentials_.reserve(count - 1);
        for (std::uint64_t rank = 1; rank < count; ++rank) {
            MultiIndex r = MultiIndex::from_rank(rank, shape_);
            index_of_[rank] = static_cast<std::uint32_t>(potentials_.size());
            potentials_.push_back(r);
        }
        const bool bar = barred();
        for (const MultiIndex& r : potentials_) {
            parity_.push_back(static_cast<std::uint8_t>((r.parity(shape_) + 1) & 1));
            int deg = static_cast<int>(r.degree(shape_));
            jdeg_.push_back(deg - 2);
            Weight w = Weight::zero(shape_.n, bar);
            CharVec cv;
            cv.n = shape_.n;
            for (std::uint8_t k = 0; k < shape_.n; ++k) {
                int diff = static_cast<int>(r[shape_.conj(k)]) - static_cast<int>(r[k]);
                w.eps[k] = F_.reduce(diff);
                cv.c[k] = diff;
            }
            if (bar) w.delta = F_.reduce(deg - 2);
            cv.c[3] = deg - 2;
            weight_.push_back(w);
            char_.push_back(cv);
        }
        if (bar) {
            weight_.push_back(Weight::zero(shape_.n, true));
            char_.push_back(CharVec{{}, static_cast<std::uint8_t>(shape_.n)});
        }
        for (std::uint8_t k = 0; k < shape_.n; ++k)
            cartan_.push_back(*index_of(h_potential(k)));
        if (bar) cartan_.push_back(euler_index());
        cartan_set_.assign(dim(), false);
        for (std::uint32_t i : cartan_) cartan_set_[i] = true;

        verify_de_injective();

        bracket_offsets_.reserve(static_cast<std::size_t>(dim()) * dim() + 1);
        bracket_offsets_.push_back(0);
        for (std::uint32_t i = 0; i < dim(); ++i)
            for (std::uint32_t j = 0; j < dim(); ++j) {
                SparseVec v = compute_bracket(i, j);
                bracket_entries_.insert(bracket_entries_.end(), v.begin(), v.end());
                bracket_offsets_.push_back(static_cast<std::uint64_t>(bracket_entries_.size()));
            }
    }

    // Each De image owns a coordinate no other De image touches, so the
    // images are independent iff each is nonzero there; the Euler field is
    // excluded by its sign pattern on the slot/generator positions.
    void verify_de_injective() const {
        for (std::uint32_t i = 0; i < potentials_.size(); ++i) {
            const MultiIndex& r = potentials_[i];
            std::size_t slot = 0;
            while (!r[slot]) ++slot;
            MultiIndex down = r;
            down[slot] -= 1;
            VectorField D = field_of(i);
            if (!D.component(shape_.conj(slot)).coeff(down))
                throw ConsistencyError("De image degenerated at potential " +
                                       monomial_to_string(r, shape_));
        }
    }

    SparseVec compute_bracket(std::uint32_t i, std::uint32_t j) const {
        SparseVec out;
        if (is_euler(i) && is_euler(j)) return out;
        if (is_euler(i)) {
            sparse_add(out, j, F_.reduce(jdeg_[j]), F_);
            sparse_prune(out);
            return out;
        }
        if (is_euler(j)) {
            sparse_add(out, i, F_.reduce(-jdeg_[i]), F_);
            sparse_prune(out);
            return out;
        }
        // [De_f, De_g] = De_{{f,g}_B} on monomial potentials.
        const MultiIndex& a = potentials_[i];
        const MultiIndex& b = potentials_[j];
        std::uint8_t pa = a.parity(shape_);
        for (std::size_t k = 0; k < shape_.slots(); ++k) {
            if (!a[k] || !b[shape_.conj(k)]) continue;
            SuperPolynomial da = partial(k, SuperPolynomial::monomial(a, 1, shape_));
            SuperPolynomial db = partial(shape_.conj(k), SuperPolynomial::monomial(b, 1, shape_));
            SuperPolynomial prod = multiply(da, db);
            if (shape_.odd_slot(k) && pa) prod = prod.scaled(F_.neg(1));
            for (const auto& [mi, c] : prod.terms()) {
                if (mi.is_zero(shape_)) continue;  // De kills constants
                sparse_add(out, *index_of(mi), c, F_);
            }
        }
        sparse_prune(out);
        return out;
    }

    SparseVec compute_ppower(std::uint32_t i) const;

    Shape shape_;
    PrimeField F_;
    Which which_;
    std::vector<MultiIndex> potentials_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_of_;
    std::vector<std::uint8_t> parity_;
    std::vector<int> jdeg_;
    std::vector<Weight> weight_;
    std::vector<CharVec> char_;
    std::vector<std::uint32_t> cartan_;
    std::vector<bool> cartan_set_;
    std::vector<std::uint64_t> bracket_offsets_;
    std::vector<std::pair<std::uint32_t, Scalar>> bracket_entries_;
    mutable std::mutex ppower_mutex_;
    mutable std::unordered_map<std::uint32_t, SparseVec> ppower_cache_;
};

inline std::optional<std::pair<Scalar, SuperPolynomial>> AlgebraTable::de_decompose(
    const VectorField& D) const {
    SuperPolynomial g(shape_);
    // Sign of the x^(r - e_slot) coefficient in component conj(slot) of De_{x^(r)}.
    auto de_coeff = [&](const MultiIndex& r, std::size_t slot) -> Scalar {
        SuperPolynomial down = partial(slot, SuperPolynomial::monomial(r, 1, shape_));
        MultiIndex dmi = r;
        dmi[slot] -= 1;
        Scalar c = down.coeff(dmi);
        if (shape_.odd_slot(slot) && r.parity(shape_)) c = F_.neg(c);
        return c;
    };
    // Recover every potential coefficient from a position only it reaches.
    for (const auto& [k, fk] : D.components()) {
        std::size_t slot = shape_.conj(k);
        for (const auto& [u, c] : fk.terms()) {
            MultiIndex r = u;
            if (static_cast<std::uint64_t>(r[slot]) + 1 >= shape_.slot_size(slot)) continue;
            r[slot] += 1;
            if (u == MultiIndex::unit(k)) continue;  // shared with Euler and Cartan images
            Scalar coef = F_.mul(c, F_.inv(de_coeff(r, slot)));
            if (!g.coeff(r)) g.add_term(r, coef);
        }
    }
    // Cartan potentials and the Euler coefficient from the shared positions:
    // f_i(x_i) = cE - c_{h_i} and f_{i'}(x_{i'}) = cE + c_{h_i}.
    Scalar cE = 0;
    bool cE_set = false;
    const Scalar half = F_.inv(2);
    for (std::uint8_t k = 0; k < shape_.n; ++k) {
        std::size_t kc = shape_.conj(k);
        Scalar fi = D.component(k).coeff(MultiIndex::unit(k));
        Scalar fic = D.component(kc).coeff(MultiIndex::unit(kc));
        Scalar e = F_.mul(half, F_.add(fi, fic));
        Scalar h = F_.mul(half, F_.sub(fic, fi));
        if (!cE_set) {
            cE = e;
            cE_set = true;
        } else if (cE != e) {
            return std::nullopt;
        }
        if (h) g.add_term(h_potential(k), h);
    }
    if (cE && !barred()) return std::nullopt;
    VectorField rebuilt = de(g);
    if (cE) rebuilt += euler_field(shape_).scaled(cE);
    if (!(rebuilt == D)) return std::nullopt;
    return std::make_pair(cE, g.drop_constant());
}

inline SparseVec AlgebraTable::compute_ppower(std::uint32_t i) const {
    SparseVec out;
    SparseMat M = op_matrix(i);
    SparseMat P = M;
    for (std::uint32_t k = 1; k < F_.p(); ++k) {
        if (P.is_zero()) return out;
        P = P.mul(M, F_);
    }
    P.prune();
    if (P.is_zero()) return out;
    auto field = field_from_matrix(P, shape_);
    if (!field) throw ConsistencyError("p-power is not a distinguished field");
    auto dec = de_decompose(*field);
    if (!dec) throw ConsistencyError("p-power left the algebra span");
    auto [cE, g] = *dec;
    if (cE) sparse_add(out, euler_index(), cE, F_);
    for (const auto& [mi, c] : g.terms()) sparse_add(out, *index_of(mi), c, F_);
    sparse_prune(out);
    return out;
}

}  // namespace oddham
