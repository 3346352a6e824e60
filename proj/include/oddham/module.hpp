#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "oddham/borel.hpp"

// Finite-dimensional restricted modules, built by inducing a base module
// over an ordered lowering set.  The basis is the set of ordered monomials
// in the lowering elements (odd exponents 0/1, even exponents 0..p-1)
// applied to the base; action matrices are computed by straightening:
// generators commute leftwards through the word, brackets recurse on
// shorter words, odd squares contract through [f,f]/2 and even p-th powers
// through the p-power table.  Basis vectors are grouped into weight
// components, and every action matrix is stored blockwise between
// components (the Cartan acts diagonally through the labels and is checked
// rather than stored).

namespace oddham {

inline std::size_t module_dim_cap() {
    if (const char* v = std::getenv("ODDHAM_MAX_MODULE_DIM")) {
        char* end = nullptr;
        unsigned long parsed = std::strtoul(v, &end, 10);
        if (end && *end == '\0' && parsed > 0) return parsed;
    }
    return 200000;
}

using SmallVec = std::vector<std::pair<std::uint32_t, Scalar>>;  // sorted sparse module vector

namespace detail {

inline void small_add(SmallVec& acc, std::uint32_t idx, Scalar c, const PrimeField& F) {
    if (!c) return;
    auto it = std::lower_bound(acc.begin(), acc.end(), idx, [](const auto& e, std::uint32_t i) {
        return e.first < i;
    });
    if (it != acc.end() && it->first == idx) {
        it->second = F.add(it->second, c);
        if (!it->second) acc.erase(it);
    } else {
        acc.insert(it, {idx, c});
    }
}

inline void small_axpy(SmallVec& acc, const SmallVec& v, Scalar c, const PrimeField& F) {
    for (const auto& [i, x] : v) small_add(acc, i, F.mul(x, c), F);
}

}  // namespace detail

// The module a lowering word acts on: either the one-dimensional span of a
// highest weight vector or a previously built simple head.
struct BaseModule {
    std::uint32_t dim = 1;
    std::vector<std::uint8_t> parity;
    std::vector<int> jdeg;
    std::vector<Weight> weight;
    std::vector<CharVec> character;
    std::uint32_t top = 0;
    // Action of the algebra basis element with table index i; nullopt means zero.
    std::function<std::optional<DenseMat>(std::uint32_t)> act;
};

struct Block {
    std::uint32_t dst = 0;
    DenseMat m;
};

class ModuleRep {
public:
    std::shared_ptr<const AlgebraTable> alg;
    std::string provenance;
    Weight lambda;
    std::uint32_t dim = 0;

    std::vector<std::uint8_t> parity;
    std::vector<int> jdeg;
    std::vector<Weight> weight;
    std::vector<CharVec> character;

    std::vector<std::vector<std::uint32_t>> comps;  // component -> basis indices
    std::vector<std::uint32_t> comp_of;             // basis -> component
    std::map<std::uint32_t, std::uint32_t> comp_index;  // weight key -> component

    std::vector<std::uint32_t> ops;         // algebra indices with stored blocks
    std::vector<std::int32_t> op_slot;      // algebra index -> slot in ops, or -1
    std::vector<std::vector<std::optional<Block>>> act;  // [slot][src comp]

    std::vector<std::uint32_t> pos_ops;     // defining positive part
    std::vector<std::uint32_t> cartan_ops;  // acts diagonally via labels

    std::uint32_t top_comp = 0;
    Vec top_vec;  // local coordinates inside top_comp

    const Weight& comp_weight(std::uint32_t c) const { return weight[comps[c][0]]; }

    bool is_op(std::uint32_t alg_idx) const { return op_slot[alg_idx] >= 0; }

    // Applies the algebra basis element to local coordinates of one
    // component; returns the destination component, or nullopt on zero.
    std::optional<std::pair<std::uint32_t, Vec>> apply(std::uint32_t alg_idx, std::uint32_t comp,
                                                       const Vec& v) const {
        const PrimeField& F = alg->field();
        if (alg->is_cartan(alg_idx)) {
            Scalar c = alg->eval(comp_weight(comp), alg_idx);
            if (!c) return std::nullopt;
            Vec out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = F.mul(v[i], c);
            return std::make_pair(comp, std::move(out));
        }
        const auto& blk = act[op_slot[alg_idx]][comp];
        if (!blk) return std::nullopt;
        Vec out = blk->m.apply(v, F);
        for (Scalar x : out)
            if (x) return std::make_pair(blk->dst, std::move(out));
        return std::nullopt;
    }

    // Dense action matrix on the whole module (small modules only).
    DenseMat dense_op(std::uint32_t alg_idx) const {
        const PrimeField& F = alg->field();
        DenseMat m(dim, dim);
        if (alg->is_cartan(alg_idx)) {
            for (std::uint32_t b = 0; b < dim; ++b)
                m.at(b, b) = alg->eval(weight[b], alg_idx);
            return m;
        }
        for (std::uint32_t c = 0; c < comps.size(); ++c) {
            const auto& blk = act[op_slot[alg_idx]][c];
            if (!blk) continue;
            for (std::size_t col = 0; col < comps[c].size(); ++col)
                for (std::size_t row = 0; row < comps[blk->dst].size(); ++row)
                    m.at(comps[blk->dst][row], comps[c][col]) = blk->m.at(row, col);
        }
        (void)F;
        return m;
    }
};

namespace detail {

// Straightening state for one induced module.
class Induction {
public:
    Induction(std::shared_ptr<const AlgebraTable> alg, std::vector<std::uint32_t> lowering,
              const BaseModule& base, std::vector<std::uint32_t> module_ops)
        : A_(std::move(alg)), F_(A_->field()), base_(base), low_(std::move(lowering)),
          ops_(std::move(module_ops)) {
        caps_.resize(low_.size());
        std::size_t count = base_.dim;
        for (std::size_t l = 0; l < low_.size(); ++l) {
            caps_[l] = A_->parity(low_[l]) ? 1 : F_.p() - 1;
            count *= caps_[l] + 1;
            if (count > module_dim_cap())
                throw CapacityError("induced module exceeds the dimension cap");
        }
        dim_ = static_cast<std::uint32_t>(count);
        pos_in_low_.assign(A_->dim(), -1);
        for (std::size_t l = 0; l < low_.size(); ++l)
            pos_in_low_[low_[l]] = static_cast<std::int32_t>(l);
        memo_.assign(A_->dim(), {});
        done_.assign(A_->dim(), {});
    }

    std::uint32_t dim() const { return dim_; }

    std::uint32_t flatten(const std::vector<std::uint8_t>& beta, std::uint32_t j) const {
        std::uint32_t x = 0;
        for (std::size_t l = 0; l < low_.size(); ++l) x = x * (caps_[l] + 1) + beta[l];
        return x * base_.dim + j;
    }

    void unflatten(std::uint32_t m, std::vector<std::uint8_t>& beta, std::uint32_t& j) const {
        j = m % base_.dim;
        m /= base_.dim;
        beta.assign(low_.size(), 0);
        for (std::size_t l = low_.size(); l-- > 0;) {
            beta[l] = static_cast<std::uint8_t>(m % (caps_[l] + 1));
            m /= (caps_[l] + 1);
        }
    }

    const SmallVec& apply_elt(std::uint32_t X, std::uint32_t m) {
        if (done_[X].empty()) {
            done_[X].assign(dim_, 0);
            memo_[X].assign(dim_, {});
        }
        if (done_[X][m] == 2) return memo_[X][m];
        if (done_[X][m] == 1)
            throw ConsistencyError("straightening recursion cycled");  // impossible: the
        done_[X][m] = 1;  // (word length, inversion count) measure strictly decreases

        std::vector<std::uint8_t> beta;
        std::uint32_t j;
        unflatten(m, beta, j);
        std::size_t l = 0;
        while (l < low_.size() && !beta[l]) ++l;

        SmallVec out;
        if (l == low_.size()) {
            // bare base vector
            if (pos_in_low_[X] >= 0) {
                beta[pos_in_low_[X]] = 1;
                out.push_back({flatten(beta, j), 1});
            } else if (auto mat = base_.act(X)) {
                for (std::uint32_t r = 0; r < base_.dim; ++r)
                    if (Scalar c = mat->at(r, j)) small_add(out, flatten(beta, r), c, F_);
            }
        } else if (pos_in_low_[X] >= 0 && pos_in_low_[X] < static_cast<std::int32_t>(l)) {
            beta[pos_in_low_[X]] = 1;
            out.push_back({flatten(beta, j), 1});
        } else if (X == low_[l]) {
            if (A_->parity(X)) {
                // odd square: X X w = [X,X]/2 w
                std::vector<std::uint8_t> bprime = beta;
                bprime[l] -= 1;
                std::uint32_t mprime = flatten(bprime, j);
                Scalar half = F_.inv(2);
                for (const auto& [g, c] : A_->bracket(X, X))
                    small_axpy(out, apply_elt(g, mprime), F_.mul(half, c), F_);
            } else if (beta[l] + 1u <= caps_[l]) {
                beta[l] += 1;
                out.push_back({flatten(beta, j), 1});
            } else {
                // exponent overflow: X^p acts as the p-power table entry
                std::vector<std::uint8_t> bprime = beta;
                bprime[l] = 0;
                std::uint32_t mprime = flatten(bprime, j);
                for (const auto& [g, c] : A_->ppower(X))
                    small_axpy(out, apply_elt(g, mprime), c, F_);
            }
        } else {
            // commute X through the leading factor f
            std::uint32_t f = low_[l];
            std::vector<std::uint8_t> bprime = beta;
            bprime[l] -= 1;
            std::uint32_t mprime = flatten(bprime, j);
            Scalar sign = (A_->parity(X) & A_->parity(f)) ? F_.neg(1) : 1;
            const SmallVec& inner = apply_elt(X, mprime);
            for (const auto& [idx, c] : inner)
                small_axpy(out, apply_elt(f, idx), F_.mul(sign, c), F_);
            for (const auto& [g, c] : A_->bracket(X, f))
                small_axpy(out, apply_elt(g, mprime), c, F_);
        }
        memo_[X][m] = std::move(out);
        done_[X][m] = 2;
        return memo_[X][m];
    }

    const std::vector<std::uint32_t>& lowering() const { return low_; }
    const std::vector<std::uint8_t>& caps() const { return caps_; }
    const std::vector<std::uint32_t>& ops() const { return ops_; }

private:
    std::shared_ptr<const AlgebraTable> A_;
    const PrimeField& F_;
    const BaseModule& base_;
    std::vector<std::uint32_t> low_;
    std::vector<std::uint32_t> ops_;
    std::vector<std::uint8_t> caps_;
    std::vector<std::int32_t> pos_in_low_;
    std::uint32_t dim_ = 0;
    std::vector<std::vector<SmallVec>> memo_;
    std::vector<std::vector<std::uint8_t>> done_;
};

// Lowering order: odd elements first, then even, each in table order.
inline std::vector<std::uint32_t> straighten_order(const AlgebraTable& A,
                                                   std::vector<std::uint32_t> set) {
    std::sort(set.begin(), set.end());
    std::vector<std::uint32_t> out;
    for (std::uint32_t i : set)
        if (A.parity(i)) out.push_back(i);
    for (std::uint32_t i : set)
        if (!A.parity(i)) out.push_back(i);
    return out;
}

}  // namespace detail

// Builds the induced module and all action blocks; verifies that the
// Cartan acts diagonally through the labels and that every action matrix
// is weight-block aligned.
inline ModuleRep induce(std::shared_ptr<const AlgebraTable> alg,
                        const std::vector<std::uint32_t>& lowering_set, const BaseModule& base,
                        const std::vector<std::uint32_t>& module_ops,
                        const std::vector<std::uint32_t>& pos_ops, const Weight& lambda,
                        std::string provenance) {
    const PrimeField& F = alg->field();
    std::vector<std::uint32_t> low = detail::straighten_order(*alg, lowering_set);
    detail::Induction ind(alg, low, base, module_ops);

    ModuleRep M;
    M.alg = alg;
    M.provenance = std::move(provenance);
    M.lambda = lambda;
    M.dim = ind.dim();
    M.parity.resize(M.dim);
    M.jdeg.resize(M.dim);
    M.weight.resize(M.dim);
    M.character.resize(M.dim);
    M.comp_of.resize(M.dim);

    std::vector<std::uint8_t> beta;
    std::uint32_t j;
    for (std::uint32_t m = 0; m < M.dim; ++m) {
        ind.unflatten(m, beta, j);
        std::uint8_t par = base.parity[j];
        int deg = base.jdeg[j];
        Weight w = base.weight[j];
        CharVec cv = base.character[j];
        for (std::size_t l = 0; l < low.size(); ++l)
            for (std::uint8_t e = 0; e < beta[l]; ++e) {
                par = (par + alg->parity(low[l])) & 1;
                deg += alg->jdeg(low[l]);
                w = w.add(alg->weight(low[l]), F);
                cv = cv.add(alg->character(low[l]));
            }
        M.parity[m] = par;
        M.jdeg[m] = deg;
        M.weight[m] = w;
        M.character[m] = cv;
        auto [it, fresh] = M.comp_index.try_emplace(w.key(), static_cast<std::uint32_t>(M.comps.size()));
        if (fresh) M.comps.emplace_back();
        M.comp_of[m] = it->second;
        M.comps[it->second].push_back(m);
    }
    std::vector<std::uint32_t> local_of(M.dim);
    for (const auto& comp : M.comps)
        for (std::size_t i = 0; i < comp.size(); ++i) local_of[comp[i]] = static_cast<std::uint32_t>(i);

    M.pos_ops = pos_ops;
    M.cartan_ops = alg->cartan();
    M.op_slot.assign(alg->dim(), -1);
    for (std::uint32_t X : module_ops) {
        if (alg->is_cartan(X)) continue;
        M.op_slot[X] = static_cast<std::int32_t>(M.ops.size());
        M.ops.push_back(X);
    }
    M.act.resize(M.ops.size());
    for (auto& row : M.act) row.resize(M.comps.size());

    for (std::uint32_t X : module_ops) {
        bool cartan = alg->is_cartan(X);
        for (std::uint32_t m = 0; m < M.dim; ++m) {
            const SmallVec& col = ind.apply_elt(X, m);
            if (cartan) {
                Scalar expect = alg->eval(M.weight[m], X);
                bool ok = expect ? (col.size() == 1 && col[0].first == m && col[0].second == expect)
                                 : col.empty();
                if (!ok) throw ConsistencyError("Cartan action disagrees with weight labels");
                continue;
            }
            if (col.empty()) continue;
            std::uint32_t src = M.comp_of[m];
            std::uint32_t dst = M.comp_of[col[0].first];
            auto& blk = M.act[M.op_slot[X]][src];
            if (!blk) {
                blk.emplace();
                blk->dst = dst;
                blk->m = DenseMat(M.comps[dst].size(), M.comps[src].size());
            }
            for (const auto& [idx, c] : col) {
                if (M.comp_of[idx] != dst)
                    throw ConsistencyError("action is not weight-block aligned");
                blk->m.at(local_of[idx], local_of[m]) = c;
            }
        }
    }

    std::uint32_t top = base.top;  // flat index of (empty word, base top)
    M.top_comp = M.comp_of[top];
    M.top_vec.assign(M.comps[M.top_comp].size(), 0);
    M.top_vec[local_of[top]] = 1;
    return M;
}

// The restricted Verma module over the Borel with the given negative part.
inline ModuleRep restricted_verma(std::shared_ptr<const AlgebraTable> alg, const BorelDatum& borel,
                                  const Weight& lambda, std::uint8_t parity0 = 0,
                                  bool zero_graded_only = false) {
    if (lambda.barred != alg->barred() || lambda.n != alg->shape().n)
        throw ShapeError("weight does not live on this algebra");
    BaseModule base;
    base.dim = 1;
    base.parity = {parity0};
    base.jdeg = {0};
    base.weight = {lambda};
    CharVec cv;
    cv.n = alg->shape().n;
    for (std::uint8_t i = 0; i < lambda.n; ++i) cv.c[i] = lambda.eps[i];
    cv.c[3] = lambda.barred ? lambda.delta : 0;
    base.character = {cv};
    base.top = 0;
    base.act = [alg, lambda](std::uint32_t X) -> std::optional<DenseMat> {
        if (!alg->is_cartan(X)) return std::nullopt;  // positive part kills the top
        Scalar c = alg->eval(lambda, X);
        if (!c) return std::nullopt;
        DenseMat m(1, 1);
        m.at(0, 0) = c;
        return m;
    };
    std::vector<std::uint32_t> module_ops;
    if (zero_graded_only) {
        for (std::uint32_t i = 0; i < alg->dim(); ++i)
            if (alg->jdeg(i) == 0 || alg->is_euler(i)) module_ops.push_back(i);
    } else {
        for (std::uint32_t i = 0; i < alg->dim(); ++i) module_ops.push_back(i);
    }
    std::string prov = "verma(b" + std::to_string(borel.k) + "," + lambda.to_string() + ")";
    if (zero_graded_only) prov = "verma(g0," + lambda.to_string() + ")";
    return induce(alg, borel.n_minus, base, module_ops, borel.n_plus, lambda, prov);
}

}  // namespace oddham
