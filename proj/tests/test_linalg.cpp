#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oddham/linalg.hpp"

using namespace oddham;

namespace {

Subspace span_of(const std::vector<Vec>& gens, std::size_t ambient, const PrimeField& F) {
    Subspace s(ambient, F);
    for (const Vec& v : gens) s.insert(v);
    return s;
}

SparseMat from_rows(const std::vector<Vec>& rows, const PrimeField& F) {
    SparseMat m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            if (rows[r][c]) m.add(r, c, rows[r][c], F);
    return m;
}

}  // namespace

TEST_CASE("closure of trivial seeds") {
    PrimeField F(5);
    SparseMat op(3);
    op.add(0, 1, 1, F);
    std::vector<SparseMat> ops{op};

    Subspace zero(3, F);
    CHECK(closure(zero, ops, F).dim() == 0);

    Subspace full = span_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3, F);
    CHECK(closure(full, ops, F).dim() == 3);
}

TEST_CASE("closure of a permutation orbit") {
    PrimeField F(5);
    // 3-cycle on coordinates: e0 -> e1 -> e2 -> e0.
    SparseMat cyc(3);
    cyc.add(1, 0, 1, F);
    cyc.add(2, 1, 1, F);
    cyc.add(0, 2, 1, F);
    std::vector<SparseMat> ops{cyc};
    Subspace seed = span_of({{1, 0, 0}}, 3, F);
    CHECK(closure(seed, ops, F).dim() == 3);
}

TEST_CASE("closure is idempotent and monotone") {
    PrimeField F(5);
    std::mt19937_64 rng(271828);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t dim = 6;
        std::vector<Vec> rows(dim, Vec(dim, 0));
        for (auto& row : rows)
            for (auto& x : row) x = rng() % 3 ? 0 : rng() % 5;
        SparseMat op = from_rows(rows, F);
        std::vector<SparseMat> ops{op};

        Vec v(dim, 0), w(dim, 0);
        for (auto& x : v) x = rng() % 5;
        for (auto& x : w) x = rng() % 5;

        Subspace small = span_of({v}, dim, F);
        Subspace big = span_of({v, w}, dim, F);
        Subspace c1 = closure(small, ops, F);
        Subspace c2 = closure(c1, ops, F);
        CHECK(c1 == c2);
        Subspace cbig = closure(big, ops, F);
        for (const Vec& row : c1.basis()) CHECK(cbig.contains(row));
    }
}

TEST_CASE("membership is stable under generator permutation") {
    PrimeField F(7);
    std::mt19937_64 rng(314159);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t dim = 5;
        std::vector<Vec> gens;
        for (int g = 0; g < 4; ++g) {
            Vec v(dim, 0);
            for (auto& x : v) x = rng() % 7;
            gens.push_back(v);
        }
        Subspace a = span_of(gens, dim, F);
        std::shuffle(gens.begin(), gens.end(), rng);
        Subspace b = span_of(gens, dim, F);
        CHECK(a == b);
        Vec probe(dim, 0);
        for (auto& x : probe) x = rng() % 7;
        CHECK(a.contains(probe) == b.contains(probe));
    }
}

TEST_CASE("simultaneous kernel base cases") {
    PrimeField F(5);
    CHECK(simultaneous_kernel({}, 4, F).dim() == 4);

    SparseMat inv(3);  // an invertible operator
    inv.add(0, 0, 2, F);
    inv.add(1, 1, 1, F);
    inv.add(2, 2, 3, F);
    std::vector<SparseMat> ops{inv};
    CHECK(simultaneous_kernel(ops, 3, F).dim() == 0);
}

TEST_CASE("joint kernel of two commuting nilpotent blocks") {
    PrimeField F(5);
    // A kills the first J_2 block, B the second; both nilpotent, commuting.
    SparseMat A(4), B(4);
    A.add(0, 1, 1, F);  // e1 -> e0
    B.add(2, 3, 1, F);  // e3 -> e2
    std::vector<SparseMat> ops{A, B};
    Subspace ker = simultaneous_kernel(ops, 4, F);
    REQUIRE(ker.dim() == 2);
    CHECK(ker.contains({1, 0, 0, 0}));
    CHECK(ker.contains({0, 0, 1, 0}));
    for (const auto& op : ops)
        for (const Vec& v : ker.basis()) {
            Vec img = op.apply(v, F);
            CHECK(std::all_of(img.begin(), img.end(), [](Scalar x) { return x == 0; }));
        }
}

TEST_CASE("kernel_of computes exact null spaces") {
    PrimeField F(7);
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t rows = 4 + rng() % 3, cols = 5;
        DenseMat m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rng() % 7;
        Subspace ker = kernel_of(m, F);
        for (const Vec& v : ker.basis()) {
            Vec img = m.apply(v, F);
            CHECK(std::all_of(img.begin(), img.end(), [](Scalar x) { return x == 0; }));
        }
        // rank-nullity against an independent rank computation
        Subspace rowspan(cols, F);
        std::size_t rank = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            Vec row(cols);
            for (std::size_t c = 0; c < cols; ++c) row[c] = m.at(r, c);
            if (rowspan.insert(row)) ++rank;
        }
        CHECK(ker.dim() + rank == cols);
    }
}
