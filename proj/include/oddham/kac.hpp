#pragma once

#include "oddham/submodule.hpp"

// Restricted Kac modules I(lambda) and simple heads: the degree-zero part
// acts on the simple head of its Verma module, the degree-negative part
// (which is abelian, spanned by the De_{x_i}) induces freely, and the
// degree-positive part kills the base.

namespace oddham {

// Simple head of the degree-zero Verma module (the Kac base L0).
inline ModuleRep simple_head_zero(std::shared_ptr<const AlgebraTable> alg, const Weight& lambda,
                                  std::uint8_t parity0 = 0) {
    BorelDatum z = standard_zero_decomposition(*alg);
    ModuleRep verma = restricted_verma(alg, z, lambda, parity0, /*zero_graded_only=*/true);
    ModuleRep head = irreducible_quotient(verma);
    head.provenance = "simple_head(g0," + lambda.to_string() + ")";
    return head;
}

inline ModuleRep kac_module(std::shared_ptr<const AlgebraTable> alg, const Weight& lambda,
                            std::uint8_t parity0 = 0) {
    ModuleRep L0 = simple_head_zero(alg, lambda, parity0);

    BaseModule base;
    base.dim = L0.dim;
    base.parity = L0.parity;
    base.jdeg = L0.jdeg;
    base.weight = L0.weight;
    base.character = L0.character;
    // flatten the top of L0 to a basis coordinate (its head keeps the top
    // as a unit vector coordinate)
    std::uint32_t top = 0;
    {
        bool found = false;
        for (std::size_t i = 0; i < L0.top_vec.size(); ++i)
            if (L0.top_vec[i]) {
                if (found) throw ConsistencyError("Kac base top is not a coordinate line");
                top = L0.comps[L0.top_comp][i];
                found = true;
            }
        if (!found) throw ConsistencyError("Kac base has no top");
    }
    base.top = top;
    auto alg_ref = alg;
    auto L0_shared = std::make_shared<ModuleRep>(L0);
    base.act = [alg_ref, L0_shared](std::uint32_t X) -> std::optional<DenseMat> {
        if (alg_ref->is_euler(X) || alg_ref->jdeg(X) == 0) return L0_shared->dense_op(X);
        return std::nullopt;  // the degree-positive part kills the base
    };

    std::vector<std::uint32_t> lowering;
    for (std::uint32_t i = 0; i < alg->dim(); ++i)
        if (!alg->is_euler(i) && alg->jdeg(i) < 0) lowering.push_back(i);
    std::vector<std::uint32_t> module_ops;
    for (std::uint32_t i = 0; i < alg->dim(); ++i) module_ops.push_back(i);
    BorelDatum b0 = standard_decomposition(*alg);

    ModuleRep M = induce(alg, lowering, base, module_ops, b0.n_plus, lambda,
                         "kac(" + lambda.to_string() + ")");
    return M;
}

// The simple head L^{b_0}(lambda), computed as the head of the Kac module.
inline ModuleRep simple_head(std::shared_ptr<const AlgebraTable> alg, const Weight& lambda,
                             std::uint8_t parity0 = 0) {
    ModuleRep head = irreducible_quotient(kac_module(alg, lambda, parity0));
    head.provenance = "simple_head(b0," + lambda.to_string() + ")";
    return head;
}

}  // namespace oddham
