#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "oddham/fp.hpp"

// Exact linear algebra kernels over F_p: dense matrices for small blocks,
// column-sparse matrices for operators on graded spaces, reduced row echelon
// subspaces, closure under operator sets and simultaneous kernels.

namespace oddham {

using Vec = std::vector<Scalar>;

class DenseMat {
public:
    DenseMat() : rows_(0), cols_(0) {}
    DenseMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Scalar at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    static DenseMat identity(std::size_t n) {
        DenseMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    Vec apply(const Vec& v, const PrimeField& F) const {
        Vec out(rows_, 0);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::uint64_t acc = 0;
            const Scalar* row = &data_[r * cols_];
            for (std::size_t c = 0; c < cols_; ++c) acc += static_cast<std::uint64_t>(row[c]) * v[c];
            out[r] = static_cast<Scalar>(acc % F.p());
        }
        return out;
    }

    DenseMat mul(const DenseMat& o, const PrimeField& F) const {
        DenseMat out(rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                Scalar a = at(r, k);
                if (!a) continue;
                for (std::size_t c = 0; c < o.cols_; ++c)
                    out.at(r, c) = F.add(out.at(r, c), F.mul(a, o.at(k, c)));
            }
        return out;
    }

    DenseMat add_scaled(const DenseMat& o, Scalar s, const PrimeField& F) const {
        DenseMat out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data_[i] = F.add(out.data_[i], F.mul(s, o.data_[i]));
        return out;
    }

    bool is_zero() const {
        for (Scalar x : data_)
            if (x) return false;
        return true;
    }

    bool operator==(const DenseMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Scalar> data_;
};

// Column-sparse square matrix: column j holds the image of basis vector j.
class SparseMat {
public:
    SparseMat() : dim_(0) {}
    explicit SparseMat(std::size_t dim) : dim_(dim), cols_(dim) {}

    std::size_t dim() const { return dim_; }

    void add(std::size_t row, std::size_t col, Scalar v, const PrimeField& F) {
        if (!v) return;
        auto& c = cols_[col];
        for (auto& [r, x] : c) {
            if (r == row) {
                x = F.add(x, v);
                return;
            }
        }
        c.emplace_back(row, v);
    }

    const std::vector<std::pair<std::uint32_t, Scalar>>& col(std::size_t j) const { return cols_[j]; }

    void prune() {
        for (auto& c : cols_) std::erase_if(c, [](const auto& e) { return e.second == 0; });
    }

    Vec apply(const Vec& v, const PrimeField& F) const {
        Vec out(dim_, 0);
        for (std::size_t j = 0; j < dim_; ++j) {
            if (!v[j]) continue;
            for (const auto& [r, x] : cols_[j]) out[r] = F.add(out[r], F.mul(x, v[j]));
        }
        return out;
    }

    SparseMat mul(const SparseMat& o, const PrimeField& F) const {
        SparseMat out(dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            std::map<std::uint32_t, Scalar> acc;
            for (const auto& [k, x] : o.cols_[j])
                for (const auto& [r, y] : cols_[k]) {
                    Scalar& slot = acc[r];
                    slot = F.add(slot, F.mul(x, y));
                }
            for (const auto& [r, x] : acc)
                if (x) out.cols_[j].emplace_back(r, x);
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& c : cols_)
            for (const auto& [r, x] : c)
                if (x) return false;
        return true;
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& c : cols_) n += c.size();
        return n;
    }

    // True iff some power up to max_power vanishes.
    bool is_nilpotent(const PrimeField& F, std::size_t max_power) const {
        SparseMat m = *this;
        std::size_t e = 1;
        while (e <= max_power) {
            if (m.is_zero()) return true;
            m = m.mul(m, F);
            e *= 2;
        }
        return m.is_zero();
    }

private:
    std::size_t dim_;
    std::vector<std::vector<std::pair<std::uint32_t, Scalar>>> cols_;
};

// A subspace of F_p^n kept in reduced row echelon form.  Insertion reduces
// the candidate against current rows and, when independent, back-eliminates
// the new pivot everywhere, so membership tests are deterministic.
class Subspace {
public:
    Subspace() : ambient_(0) {}
    explicit Subspace(std::size_t ambient_dim, const PrimeField& F) : ambient_(ambient_dim), p_(F.p()) {}

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }
    bool full() const { return dim() == ambient_; }

    const std::vector<Vec>& basis() const { return rows_; }
    const std::vector<std::uint32_t>& pivots() const { return pivots_; }

    // Reduces v in place against the stored rows; returns the residue.
    Vec reduce(Vec v) const {
        PrimeField F(p_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Scalar c = v[pivots_[i]];
            if (!c) continue;
            const Vec& row = rows_[i];
            for (std::size_t j = 0; j < ambient_; ++j)
                if (row[j]) v[j] = F.sub(v[j], F.mul(c, row[j]));
        }
        return v;
    }

    bool contains(const Vec& v) const {
        Vec r = reduce(v);
        for (Scalar x : r)
            if (x) return false;
        return true;
    }

    // Returns true when v enlarged the space.
    bool insert(Vec v) {
        PrimeField F(p_);
        v = reduce(std::move(v));
        std::size_t piv = ambient_;
        for (std::size_t j = 0; j < ambient_; ++j)
            if (v[j]) {
                piv = j;
                break;
            }
        if (piv == ambient_) return false;
        Scalar s = F.inv(v[piv]);
        for (auto& x : v) x = F.mul(x, s);
        // Back-eliminate the new pivot from existing rows.
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Scalar c = rows_[i][piv];
            if (!c) continue;
            for (std::size_t j = 0; j < ambient_; ++j)
                if (v[j]) rows_[i][j] = F.sub(rows_[i][j], F.mul(c, v[j]));
        }
        // Keep rows sorted by pivot.
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(v));
        pivots_.insert(pivots_.begin() + pos, static_cast<std::uint32_t>(piv));
        return true;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && rows_ == o.rows_;
    }

private:
    std::size_t ambient_;
    std::uint32_t p_ = 5;
    std::vector<Vec> rows_;
    std::vector<std::uint32_t> pivots_;
};

using ApplyFn = std::function<Vec(std::size_t op, const Vec&)>;

// Smallest subspace containing `seed` and stable under every operator,
// by worklist saturation.
inline Subspace closure(const Subspace& seed, std::size_t n_ops, const ApplyFn& apply,
                        const PrimeField& F) {
    Subspace span(seed.ambient_dim(), F);
    std::vector<Vec> work;
    for (const Vec& v : seed.basis())
        if (span.insert(v)) work.push_back(v);
    while (!work.empty()) {
        Vec v = std::move(work.back());
        work.pop_back();
        for (std::size_t op = 0; op < n_ops; ++op) {
            Vec w = apply(op, v);
            Vec r = span.reduce(w);
            if (span.insert(r)) {
                if (span.full()) return span;
                work.push_back(std::move(r));
            }
        }
    }
    return span;
}

inline Subspace closure(const Subspace& seed, std::span<const SparseMat> ops, const PrimeField& F) {
    return closure(
        seed, ops.size(), [&](std::size_t i, const Vec& v) { return ops[i].apply(v, F); }, F);
}

// Null space of a dense matrix, as a Subspace of F_p^cols.
inline Subspace kernel_of(const DenseMat& m, const PrimeField& F) {
    std::size_t rows = m.rows(), cols = m.cols();
    // Row-reduce a working copy.
    std::vector<Vec> a(rows, Vec(cols, 0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = m.at(r, c);
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t sel = rank;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[rank], a[sel]);
        Scalar s = F.inv(a[rank][c]);
        for (auto& x : a[rank]) x = F.mul(x, s);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Scalar f = a[r][c];
            for (std::size_t j = 0; j < cols; ++j) a[r][j] = F.sub(a[r][j], F.mul(f, a[rank][j]));
        }
        pivot_col.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    Subspace ker(cols, F);
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        Vec v(cols, 0);
        v[c] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = F.neg(a[i][c]);
        ker.insert(std::move(v));
    }
    return ker;
}

// Intersection of the kernels of a family of square operators.
inline Subspace simultaneous_kernel(std::span<const SparseMat> ops, std::size_t ambient,
                                    const PrimeField& F) {
    if (ops.empty()) {
        Subspace all(ambient, F);
        for (std::size_t i = 0; i < ambient; ++i) {
            Vec e(ambient, 0);
            e[i] = 1;
            all.insert(std::move(e));
        }
        return all;
    }
    DenseMat stacked(ops.size() * ambient, ambient);
    for (std::size_t k = 0; k < ops.size(); ++k)
        for (std::size_t j = 0; j < ambient; ++j)
            for (const auto& [r, x] : ops[k].col(j)) stacked.at(k * ambient + r, j) = x;
    return kernel_of(stacked, F);
}

}  // namespace oddham
