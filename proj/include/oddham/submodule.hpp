#pragma once

#include <random>
#include <set>

#include "oddham/module.hpp"

// Submodule computations on weight-blocked modules: closures, primitive
// (joint positive-kernel) subspaces, maximal submodules and simple heads,
// irreducibility, highest weight extraction along a chain of Borels, and
// the grading length.
//
// A submodule is held as one echelon subspace per weight component; since
// non-Cartan operators map components to components and Cartan elements act
// by component scalars, closure under the stored blocks is closure under
// the whole algebra action.

namespace oddham {

class SubmoduleBasis {
public:
    explicit SubmoduleBasis(const ModuleRep& M) : M_(&M), spaces_(M.comps.size()) {
        for (std::size_t c = 0; c < M.comps.size(); ++c)
            spaces_[c] = Subspace(M.comps[c].size(), M.alg->field());
    }

    const Subspace& at(std::uint32_t comp) const { return spaces_[comp]; }
    Subspace& at(std::uint32_t comp) { return spaces_[comp]; }

    std::size_t dim() const {
        std::size_t d = 0;
        for (const auto& s : spaces_) d += s.dim();
        return d;
    }

    bool contains(std::uint32_t comp, const Vec& v) const { return spaces_[comp].contains(v); }

    bool insert(std::uint32_t comp, Vec v) { return spaces_[comp].insert(std::move(v)); }

    // Worklist saturation under every stored operator block.
    void close_under_action() {
        std::vector<std::pair<std::uint32_t, Vec>> work;
        for (std::uint32_t c = 0; c < spaces_.size(); ++c)
            for (const Vec& row : spaces_[c].basis()) work.emplace_back(c, row);
        while (!work.empty()) {
            auto [c, v] = std::move(work.back());
            work.pop_back();
            for (std::uint32_t X : M_->ops) {
                auto img = M_->apply(X, c, v);
                if (!img) continue;
                Vec res = spaces_[img->first].reduce(std::move(img->second));
                if (spaces_[img->first].insert(res)) work.emplace_back(img->first, std::move(res));
            }
        }
    }

    bool is_full() const {
        for (std::size_t c = 0; c < spaces_.size(); ++c)
            if (spaces_[c].dim() != M_->comps[c].size()) return false;
        return true;
    }

private:
    const ModuleRep* M_;
    std::vector<Subspace> spaces_;
};

inline SubmoduleBasis closure_of(const ModuleRep& M, std::uint32_t comp, const Vec& seed) {
    SubmoduleBasis S(M);
    S.insert(comp, seed);
    S.close_under_action();
    return S;
}

// Joint kernel of the defining positive part, one subspace per component.
inline std::vector<Subspace> primitive_subspaces(const ModuleRep& M) {
    const PrimeField& F = M.alg->field();
    std::vector<Subspace> out;
    out.reserve(M.comps.size());
    for (std::uint32_t c = 0; c < M.comps.size(); ++c) {
        std::size_t cols = M.comps[c].size();
        std::size_t rows = 0;
        for (std::uint32_t X : M.pos_ops)
            if (const auto& blk = M.act[M.op_slot[X]][c]) rows += blk->m.rows();
        DenseMat stacked(rows ? rows : 1, cols);
        std::size_t at = 0;
        for (std::uint32_t X : M.pos_ops) {
            const auto& blk = M.act[M.op_slot[X]][c];
            if (!blk) continue;
            for (std::size_t r = 0; r < blk->m.rows(); ++r, ++at)
                for (std::size_t j = 0; j < cols; ++j) stacked.at(at, j) = blk->m.at(r, j);
        }
        out.push_back(kernel_of(stacked, F));
    }
    return out;
}

namespace detail {

// Enumerates the lines of a subspace: every vector with leading coefficient
// one in the row basis.
template <class Fn>
void for_each_line(const Subspace& S, const PrimeField& F, Fn&& fn) {
    std::size_t d = S.dim();
    if (!d) return;
    if (d > 6) throw CapacityError("primitive weight component of dimension > 6");
    std::vector<Scalar> coef(d, 0);
    for (std::size_t lead = 0; lead < d; ++lead) {
        // coefficients: coef[lead] = 1, free below
        std::size_t free = d - lead - 1;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < free; ++i) total *= F.p();
        for (std::uint64_t x = 0; x < total; ++x) {
            std::uint64_t v = x;
            coef.assign(d, 0);
            coef[lead] = 1;
            for (std::size_t i = lead + 1; i < d; ++i) {
                coef[i] = static_cast<Scalar>(v % F.p());
                v /= F.p();
            }
            Vec line(S.ambient_dim(), 0);
            for (std::size_t i = 0; i < d; ++i) {
                if (!coef[i]) continue;
                const Vec& row = S.basis()[i];
                for (std::size_t j = 0; j < row.size(); ++j)
                    line[j] = F.add(line[j], F.mul(coef[i], row[j]));
            }
            fn(line);
        }
    }
}

inline bool vec_parallel(const Vec& a, const Vec& b, const PrimeField& F) {
    Scalar ratio = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i] && !b[i]) continue;
        if (!a[i] || !b[i]) return false;
        Scalar r = F.mul(b[i], F.inv(a[i]));
        if (!ratio)
            ratio = r;
        else if (ratio != r)
            return false;
    }
    return true;
}

}  // namespace detail

// True iff the module has no proper nonzero submodule: every line of every
// weight component of the primitive subspace must generate everything.
inline bool is_irreducible(const ModuleRep& M) {
    if (M.dim <= 1) return true;
    const PrimeField& F = M.alg->field();
    auto prim = primitive_subspaces(M);
    for (std::uint32_t c = 0; c < prim.size(); ++c) {
        bool proper = false;
        detail::for_each_line(prim[c], F, [&](const Vec& line) {
            if (proper) return;
            if (!closure_of(M, c, line).is_full()) proper = true;
        });
        if (proper) return false;
    }
    return true;
}

struct QuotientResult {
    ModuleRep head;
    std::size_t removed_dim = 0;
};

// V / M for an action-closed M, with labels inherited by the surviving
// (non-pivot) coordinates.  M must be grading-homogeneous; this is checked
// and re-echeloned layer by layer so that quotient labels stay exact.
inline ModuleRep quotient(const ModuleRep& V, const SubmoduleBasis& Msub) {
    const PrimeField& F = V.alg->field();

    // grading-homogenize: every degree layer projection must already be inside
    std::vector<Subspace> layered(V.comps.size());
    for (std::uint32_t c = 0; c < V.comps.size(); ++c) {
        layered[c] = Subspace(V.comps[c].size(), F);
        std::set<int> degs;
        for (std::uint32_t b : V.comps[c]) degs.insert(V.jdeg[b]);
        for (const Vec& row : Msub.at(c).basis()) {
            for (int d : degs) {
                Vec proj(row.size(), 0);
                bool nz = false;
                for (std::size_t i = 0; i < row.size(); ++i)
                    if (V.jdeg[V.comps[c][i]] == d && row[i]) {
                        proj[i] = row[i];
                        nz = true;
                    }
                if (!nz) continue;
                if (!Msub.at(c).contains(proj))
                    throw ConsistencyError("maximal submodule is not grading-homogeneous");
                layered[c].insert(std::move(proj));
            }
        }
        if (layered[c].dim() != Msub.at(c).dim())
            throw ConsistencyError("grading layering changed the submodule");
    }

    ModuleRep Q;
    Q.alg = V.alg;
    Q.provenance = "quotient(" + V.provenance + ")";
    Q.lambda = V.lambda;
    Q.pos_ops = V.pos_ops;
    Q.cartan_ops = V.cartan_ops;
    Q.ops = V.ops;
    Q.op_slot = V.op_slot;

    // surviving coordinates per component
    std::vector<std::vector<std::uint32_t>> keep(V.comps.size());
    for (std::uint32_t c = 0; c < V.comps.size(); ++c) {
        std::vector<bool> pivot(V.comps[c].size(), false);
        for (std::uint32_t p : layered[c].pivots()) pivot[p] = true;
        for (std::uint32_t i = 0; i < V.comps[c].size(); ++i)
            if (!pivot[i]) keep[c].push_back(i);
    }

    std::vector<std::uint32_t> comp_map(V.comps.size(), UINT32_MAX);
    for (std::uint32_t c = 0; c < V.comps.size(); ++c) {
        if (keep[c].empty()) continue;
        comp_map[c] = static_cast<std::uint32_t>(Q.comps.size());
        Q.comp_index[V.comp_weight(c).key()] = comp_map[c];
        std::vector<std::uint32_t> ids;
        for (std::uint32_t i : keep[c]) {
            std::uint32_t b = V.comps[c][i];
            ids.push_back(Q.dim);
            Q.parity.push_back(V.parity[b]);
            Q.jdeg.push_back(V.jdeg[b]);
            Q.weight.push_back(V.weight[b]);
            Q.character.push_back(V.character[b]);
            Q.comp_of.push_back(comp_map[c]);
            ++Q.dim;
        }
        Q.comps.push_back(std::move(ids));
    }

    Q.act.resize(Q.ops.size());
    for (auto& row : Q.act) row.resize(Q.comps.size());
    for (std::size_t slot = 0; slot < V.ops.size(); ++slot) {
        for (std::uint32_t c = 0; c < V.comps.size(); ++c) {
            if (comp_map[c] == UINT32_MAX) continue;
            const auto& blk = V.act[slot][c];
            if (!blk || comp_map[blk->dst] == UINT32_MAX) continue;
            DenseMat m(keep[blk->dst].size(), keep[c].size());
            bool nonzero = false;
            for (std::size_t col = 0; col < keep[c].size(); ++col) {
                Vec lifted(V.comps[c].size(), 0);
                lifted[keep[c][col]] = 1;
                Vec img = blk->m.apply(lifted, F);
                img = layered[blk->dst].reduce(std::move(img));
                for (std::size_t row = 0; row < keep[blk->dst].size(); ++row) {
                    Scalar x = img[keep[blk->dst][row]];
                    m.at(row, col) = x;
                    nonzero |= x != 0;
                }
            }
            if (nonzero) {
                auto& q = Q.act[slot][comp_map[c]];
                q.emplace();
                q->dst = comp_map[blk->dst];
                q->m = std::move(m);
            }
        }
    }

    // image of the top vector
    Vec top = layered[V.top_comp].reduce(V.top_vec);
    bool nz = false;
    for (Scalar x : top) nz |= x != 0;
    if (!nz || comp_map[V.top_comp] == UINT32_MAX)
        throw ConsistencyError("top vector died in the quotient");
    Q.top_comp = comp_map[V.top_comp];
    Q.top_vec.assign(keep[V.top_comp].size(), 0);
    for (std::size_t i = 0; i < keep[V.top_comp].size(); ++i)
        Q.top_vec[i] = top[keep[V.top_comp][i]];
    return Q;
}

// The unique irreducible quotient of a cyclic module: sweeps primitive
// lines whose closure misses the top vector, accumulates them into the
// maximal submodule, and restarts on the quotient until no line is left.
// If two candidate enlargements ever join to swallow the top, the unique
// maximal submodule would not exist; this is detected and reported.
inline ModuleRep irreducible_quotient(const ModuleRep& V) {
    ModuleRep cur = V;
    // M lives in the original module; quotient maps are tracked by lifting
    // each round's kernel back through coordinates kept so far.
    std::vector<const ModuleRep*> chain;
    for (int round = 0;; ++round) {
        if (round > 1024) throw ConsistencyError("irreducible quotient failed to stabilize");
        const PrimeField& F = cur.alg->field();
        auto prim = primitive_subspaces(cur);
        SubmoduleBasis M(cur);
        bool grew = false;
        for (std::uint32_t c = 0; c < prim.size(); ++c) {
            detail::for_each_line(prim[c], F, [&](const Vec& line) {
                if (c == cur.top_comp && detail::vec_parallel(line, cur.top_vec, F)) return;
                if (M.contains(c, line)) return;
                SubmoduleBasis S = closure_of(cur, c, line);
                if (S.contains(cur.top_comp, cur.top_vec)) return;  // generates everything
                for (std::uint32_t d = 0; d < cur.comps.size(); ++d)
                    for (const Vec& row : S.at(d).basis())
                        if (M.insert(d, row)) grew = true;
            });
        }
        if (!grew) return cur;
        M.close_under_action();
        if (M.contains(cur.top_comp, cur.top_vec))
            throw ConsistencyError(
                "maximal submodule is not unique: avoiding closures join onto the top");
        cur = quotient(cur, M);
    }
}

struct HighestWeightVector {
    Weight weight;
    std::uint32_t comp = 0;
    Vec coords;
    int jdeg = 0;
    std::size_t kernel_dim = 1;
};

// The joint kernel of a Borel's positive part on an irreducible module;
// reports the kernel dimension (expected one).
inline HighestWeightVector highest_weight_wrt(const ModuleRep& V, const BorelDatum& borel) {
    const PrimeField& F = V.alg->field();
    HighestWeightVector out;
    out.kernel_dim = 0;
    for (std::uint32_t c = 0; c < V.comps.size(); ++c) {
        std::size_t cols = V.comps[c].size();
        std::vector<DenseMat> blocks;
        std::size_t rows = 0;
        for (std::uint32_t X : borel.n_plus) {
            if (V.alg->is_cartan(X)) continue;
            const auto& blk = V.act[V.op_slot[X]][c];
            if (blk) {
                blocks.push_back(blk->m);
                rows += blk->m.rows();
            }
        }
        DenseMat stacked(rows ? rows : 1, cols);
        std::size_t at = 0;
        for (const DenseMat& b : blocks)
            for (std::size_t r = 0; r < b.rows(); ++r, ++at)
                for (std::size_t j = 0; j < cols; ++j) stacked.at(at, j) = b.at(r, j);
        Subspace ker = kernel_of(stacked, F);
        if (ker.dim() && !out.kernel_dim) {
            out.comp = c;
            out.coords = ker.basis()[0];
            out.weight = V.comp_weight(c);
            // grading degree of the vector (reported only if pure)
            std::set<int> degs;
            for (std::size_t i = 0; i < out.coords.size(); ++i)
                if (out.coords[i]) degs.insert(V.jdeg[V.comps[c][i]]);
            out.jdeg = degs.empty() ? 0 : *degs.begin();
            if (degs.size() > 1)
                throw ConsistencyError("highest weight vector mixes grading layers");
        }
        out.kernel_dim += ker.dim();
    }
    return out;
}

// Occupied grading degrees.
inline std::set<int> j_weights(const ModuleRep& V) {
    std::set<int> degs;
    for (std::uint32_t b = 0; b < V.dim; ++b) degs.insert(V.jdeg[b]);
    return degs;
}

inline std::size_t j_length(const ModuleRep& V) {
    if (V.dim == 0) return 0;
    return j_weights(V).size() - 1;
}

// rho([a,b]) = rho(a) rho(b) - (-1)^{|a||b|} rho(b) rho(a) over operator
// pairs; exhaustive for small modules, sampled above.
inline bool check_representation(const ModuleRep& M, std::uint64_t seed = 0) {
    const PrimeField& F = M.alg->field();
    const AlgebraTable& A = *M.alg;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<std::uint32_t> all = M.ops;
    for (std::uint32_t h : M.cartan_ops)
        if (std::find(M.ops.begin(), M.ops.end(), h) == M.ops.end()) all.push_back(h);
    if (M.dim <= 200) {
        for (std::uint32_t a : all)
            for (std::uint32_t b : all) pairs.emplace_back(a, b);
    } else {
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 400; ++t)
            pairs.emplace_back(all[rng() % all.size()], all[rng() % all.size()]);
    }
    for (auto [a, b] : pairs) {
        Scalar sgn = (A.parity(a) & A.parity(b)) ? F.neg(1) : 1;
        for (std::uint32_t c = 0; c < M.comps.size(); ++c) {
            for (std::size_t loc = 0; loc < M.comps[c].size(); ++loc) {
                Vec e(M.comps[c].size(), 0);
                e[loc] = 1;
                // rho(a) rho(b) e
                std::map<std::pair<std::uint32_t, std::size_t>, Scalar> lhs;
                auto accumulate = [&](std::uint32_t X, std::uint32_t Y, Scalar outer_sign) {
                    auto first = M.apply(Y, c, e);
                    if (!first) return;
                    auto second = M.apply(X, first->first, first->second);
                    if (!second) return;
                    for (std::size_t i = 0; i < second->second.size(); ++i)
                        if (second->second[i]) {
                            auto key = std::make_pair(second->first, i);
                            lhs[key] = F.add(lhs[key], F.mul(outer_sign, second->second[i]));
                        }
                };
                accumulate(a, b, 1);
                accumulate(b, a, F.neg(sgn));
                // rho([a,b]) e
                for (const auto& [g, coef] : A.bracket(a, b)) {
                    auto img = M.apply(g, c, e);
                    if (!img) continue;
                    for (std::size_t i = 0; i < img->second.size(); ++i)
                        if (img->second[i]) {
                            auto key = std::make_pair(img->first, i);
                            lhs[key] = F.sub(lhs[key], F.mul(coef, img->second[i]));
                        }
                }
                for (const auto& [key, v] : lhs)
                    if (v) return false;
            }
        }
    }
    return true;
}

// rho(x)^p = rho(x^{[p]}) for even operators; full below 200 dimensions,
// at least twenty basis vectors per module above.
inline bool check_restricted(const ModuleRep& M, std::uint64_t seed = 1) {
    const PrimeField& F = M.alg->field();
    const AlgebraTable& A = *M.alg;
    std::vector<std::uint32_t> vectors;
    if (M.dim <= 200) {
        for (std::uint32_t b = 0; b < M.dim; ++b) vectors.push_back(b);
    } else {
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 20; ++t) vectors.push_back(rng() % M.dim);
    }
    std::vector<std::uint32_t> evens = M.ops;
    for (std::uint32_t h : M.cartan_ops)
        if (std::find(evens.begin(), evens.end(), h) == evens.end()) evens.push_back(h);
    for (std::uint32_t x : evens) {
        if (A.parity(x)) continue;
        SparseVec table = A.ppower(x);
        for (std::uint32_t b : vectors) {
            std::uint32_t c = M.comp_of[b];
            std::size_t loc = 0;
            while (M.comps[c][loc] != b) ++loc;
            Vec e(M.comps[c].size(), 0);
            e[loc] = 1;
            std::optional<std::pair<std::uint32_t, Vec>> cur = std::make_pair(c, e);
            for (std::uint32_t k = 0; k < F.p() && cur; ++k) cur = M.apply(x, cur->first, cur->second);
            std::map<std::pair<std::uint32_t, std::size_t>, Scalar> diff;
            if (cur)
                for (std::size_t i = 0; i < cur->second.size(); ++i)
                    if (cur->second[i]) diff[{cur->first, i}] = cur->second[i];
            for (const auto& [g, coef] : table) {
                auto img = M.apply(g, c, e);
                if (!img) continue;
                for (std::size_t i = 0; i < img->second.size(); ++i)
                    if (img->second[i]) {
                        auto key = std::make_pair(img->first, i);
                        diff[key] = F.sub(diff[key], F.mul(coef, img->second[i]));
                    }
            }
            for (const auto& [key, v] : diff)
                if (v) return false;
        }
    }
    return true;
}

}  // namespace oddham
