#include <catch2/catch_amalgamated.hpp>

#include "oddham/borel.hpp"

using namespace oddham;

TEST_CASE("standard decomposition of the extended algebra at n=2") {
    auto A = AlgebraTable::build(Which::lebar, 2, 5);
    BorelDatum d = standard_decomposition(*A);

    std::size_t even_minus = 0, odd_minus = 0;
    for (std::uint32_t i : d.n_minus) (A->parity(i) ? odd_minus : even_minus) += 1;
    CHECK(even_minus == 3);  // De_{x2 x3}, De_{x3}, De_{x4}
    CHECK(odd_minus == 3);   // De_{x3 x4}, De_{x1}, De_{x2}

    CHECK(d.n_plus.size() + d.n_minus.size() + d.cartan.size() == A->dim());
    std::vector<bool> seen(A->dim(), false);
    for (auto part : {&d.n_plus, &d.n_minus, &d.cartan})
        for (std::uint32_t i : *part) {
            CHECK(!seen[i]);
            seen[i] = true;
        }

    // every degree-zero positive element has zero delta-component
    for (std::uint32_t i : d.n_plus)
        if (A->jdeg(i) == 0) CHECK(A->weight(i).delta == 0);
}

TEST_CASE("degree-zero decomposition drives the base Verma size") {
    auto A = AlgebraTable::build(Which::lebar, 2, 5);
    BorelDatum z = standard_zero_decomposition(*A);
    CHECK(z.n_minus.size() == 2);
    CHECK(z.n_plus.size() == 4);
    CHECK(z.cartan.size() == 3);
    auto A1 = AlgebraTable::build(Which::lebar, 1, 5);
    BorelDatum z1 = standard_zero_decomposition(*A1);
    CHECK(z1.n_minus.empty());  // the n=1 degree-zero negative part vanishes
    CHECK(z1.n_plus.size() == 1);
}

TEST_CASE("reflection chain at n=1") {
    auto A = AlgebraTable::build(Which::lebar, 1, 5);
    ChainReport rep = reflection_chain(*A);
    CHECK(rep.issues.empty());
    REQUIRE(rep.data.size() == 3);
    CHECK(rep.closed_form_match);  // only the k=0 late display occurs here

    // step 1 removes nothing (all candidate monomials vanish) and moves De_{x1}
    CHECK(rep.steps[0].removed.empty());
    CHECK(rep.steps[0].added == *A->index_of(MultiIndex::unit(0)));

    // step 2 sweeps the whole positive-degree tail
    CHECK(rep.steps[1].removed.size() == 5);
    CHECK(rep.steps[1].added == *A->index_of(MultiIndex::unit(1)));

    // final state: n^+_{2n} = n^+_{[0]} + g_{[-1]}
    BorelDatum z = standard_zero_decomposition(*A);
    std::vector<std::uint32_t> expect = z.n_plus;
    for (std::uint32_t i = 0; i < A->dim(); ++i)
        if (!A->is_euler(i) && A->jdeg(i) == -1) expect.push_back(i);
    std::sort(expect.begin(), expect.end());
    CHECK(rep.data.back().n_plus == expect);
}

TEST_CASE("reflection chain at n=2") {
    auto A = AlgebraTable::build(Which::lebar, 2, 5);
    ChainReport rep = reflection_chain(*A);
    CHECK(rep.issues.empty());
    REQUIRE(rep.data.size() == 5);
    CHECK_FALSE(rep.closed_form_match);  // the general displayed bounds are off

    // after step 1, De_{x1} is positive and W_1 = {De_{x2 x3 x4}} is negative
    MultiIndex w1;
    w1[1] = w1[2] = w1[3] = 1;
    REQUIRE(rep.steps[0].removed.size() == 1);
    CHECK(rep.steps[0].removed[0] == *A->index_of(w1));
    std::uint32_t dex1 = *A->index_of(MultiIndex::unit(0));
    const auto& np1 = rep.data[1].n_plus;
    CHECK(std::find(np1.begin(), np1.end(), dex1) != np1.end());
    const auto& nm1 = rep.data[1].n_minus;
    CHECK(std::find(nm1.begin(), nm1.end(), *A->index_of(w1)) != nm1.end());

    // conservation: dim n^+ + dim n^- = dim - (n+1) at every k
    for (const BorelDatum& d : rep.data)
        CHECK(d.n_plus.size() + d.n_minus.size() == A->dim() - 3);

    // the reflection labels match the weights of the crossing lines
    const PrimeField& F = A->field();
    for (const ReflectionStep& st : rep.steps) {
        Weight w = A->weight(st.added);
        Weight expect = Weight::zero(2, true);
        if (st.k <= 2) {
            expect.eps[st.k - 1] = F.neg(1);  // -eps_k - delta
        } else {
            expect.eps[2 * 2 - st.k] = 1;  // eps_{n-j+1} - delta at step n+j
        }
        expect.delta = F.neg(1);
        CHECK(w == expect);
    }

    // every removed monomial lands in the weight line of minus the label
    for (const ReflectionStep& st : rep.steps) {
        if (st.k > 2) continue;
        Weight label = A->weight(st.added);
        for (std::uint32_t r : st.removed) {
            Weight w = A->weight(r);
            CHECK(w == Weight::zero(2, true).sub(label, F));
        }
    }
}

TEST_CASE("reflection chain at n=3 stays consistent") {
    auto A = AlgebraTable::build(Which::lebar, 3, 5);
    ChainReport rep = reflection_chain(*A);
    CHECK(rep.issues.empty());
    REQUIRE(rep.data.size() == 7);
    for (const BorelDatum& d : rep.data)
        CHECK(d.n_plus.size() + d.n_minus.size() == A->dim() - 4);
    // removals tile the positive-degree part
    std::size_t removed_total = 0;
    for (const ReflectionStep& st : rep.steps) removed_total += st.removed.size();
    std::size_t positive_degree = 0;
    for (std::uint32_t i = 0; i < A->dim(); ++i)
        if (!A->is_euler(i) && A->jdeg(i) > 0) ++positive_degree;
    CHECK(removed_total == positive_degree);
}
