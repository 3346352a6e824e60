#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oddham/fp.hpp"

// Exponent tuples of the divided power superalgebra O(m, N | n): slots
// 1..m are even with r_i < p^{N_i}, slots m+1..m+n are odd with r_i in {0,1}.

namespace oddham {

constexpr std::size_t kMaxSlots = 8;

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Shape {
    std::uint8_t m = 0;
    std::uint8_t n = 0;
    std::uint32_t p = 5;
    std::array<std::uint8_t, kMaxSlots> N{};  // heights of the even slots

    static Shape make(std::uint32_t m, std::uint32_t n, std::uint32_t p, std::uint32_t height = 1) {
        if (m + n > kMaxSlots) throw CapacityError("too many slots");
        Shape s;
        s.m = static_cast<std::uint8_t>(m);
        s.n = static_cast<std::uint8_t>(n);
        s.p = p;
        for (std::uint32_t i = 0; i < m; ++i) s.N[i] = static_cast<std::uint8_t>(height);
        return s;
    }

    // The shape of O(n, 1 | n) housing le(n); n is checked against the
    // supported range (override with ODDHAM_UNLOCK_NP).
    static Shape hamiltonian(std::uint32_t n, std::uint32_t p) {
        if ((n < 1 || n > 3) && !env_flag("ODDHAM_UNLOCK_NP"))
            throw CapacityError("n outside supported range {1,2,3}: " + std::to_string(n));
        return make(n, n, p, 1);
    }

    std::size_t slots() const { return m + n; }
    bool odd_slot(std::size_t i) const { return i >= m; }  // 0-based

    std::uint64_t slot_size(std::size_t i) const {
        if (odd_slot(i)) return 2;
        std::uint64_t s = 1;
        for (std::uint8_t k = 0; k < N[i]; ++k) s *= p;
        return s;
    }

    std::uint64_t monomial_count() const {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < slots(); ++i) c *= slot_size(i);
        return c;
    }

    // Conjugate slot index for m == n shapes: i <-> i+n (0-based).
    std::size_t conj(std::size_t i) const {
        if (m != n) throw ShapeError("conjugate slot needs m == n");
        return i < n ? i + n : i - n;
    }

    bool operator==(const Shape& o) const {
        return m == o.m && n == o.n && p == o.p && N == o.N;
    }
};

struct MultiIndex {
    std::array<std::uint8_t, kMaxSlots> r{};

    std::uint8_t operator[](std::size_t i) const { return r[i]; }
    std::uint8_t& operator[](std::size_t i) { return r[i]; }

    static MultiIndex unit(std::size_t i) {
        MultiIndex e;
        e.r[i] = 1;
        return e;
    }

    bool is_zero(const Shape& s) const {
        for (std::size_t i = 0; i < s.slots(); ++i)
            if (r[i]) return false;
        return true;
    }

    bool in_range(const Shape& s) const {
        for (std::size_t i = 0; i < s.slots(); ++i)
            if (r[i] >= s.slot_size(i)) return false;
        return true;
    }

    std::uint32_t degree(const Shape& s) const {
        std::uint32_t d = 0;
        for (std::size_t i = 0; i < s.slots(); ++i) d += r[i];
        return d;
    }

    std::uint8_t parity(const Shape& s) const {
        std::uint32_t c = 0;
        for (std::size_t i = s.m; i < s.slots(); ++i) c += r[i];
        return static_cast<std::uint8_t>(c & 1);
    }

    // Rank in lexicographic order with slot 0 most significant.
    std::uint64_t rank(const Shape& s) const {
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < s.slots(); ++i) x = x * s.slot_size(i) + r[i];
        return x;
    }

    static MultiIndex from_rank(std::uint64_t x, const Shape& s) {
        MultiIndex mi;
        for (std::size_t i = s.slots(); i-- > 0;) {
            std::uint64_t sz = s.slot_size(i);
            mi.r[i] = static_cast<std::uint8_t>(x % sz);
            x /= sz;
        }
        return mi;
    }

    bool operator==(const MultiIndex& o) const { return r == o.r; }
    bool operator<(const MultiIndex& o) const { return r < o.r; }
};

inline std::vector<MultiIndex> enumerate_monomials(const Shape& s) {
    std::vector<MultiIndex> out;
    out.reserve(s.monomial_count());
    for (std::uint64_t x = 0; x < s.monomial_count(); ++x) out.push_back(MultiIndex::from_rank(x, s));
    return out;
}

// Monomial text syntax: x1^(3)*x4 denotes x^(3e_1 + e_4).  Slots are
// 1-based in the text form, factors appear in ascending slot order, unit
// exponents are written without the ^() part, and the empty product is "1".
inline std::string monomial_to_string(const MultiIndex& mi, const Shape& s) {
    std::string out;
    for (std::size_t i = 0; i < s.slots(); ++i) {
        if (!mi[i]) continue;
        if (!out.empty()) out += '*';
        out += 'x';
        out += std::to_string(i + 1);
        if (mi[i] != 1) {
            out += "^(";
            out += std::to_string(static_cast<int>(mi[i]));
            out += ')';
        }
    }
    return out.empty() ? "1" : out;
}

inline MultiIndex monomial_from_string(const std::string& text, const Shape& s) {
    MultiIndex mi;
    if (text == "1") return mi;
    std::size_t pos = 0;
    long last_slot = -1;
    while (pos < text.size()) {
        if (text[pos] != 'x') throw ShapeError("bad monomial: " + text);
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw ShapeError("bad monomial: " + text);
        long slot = std::stol(text.substr(start, pos - start)) - 1;
        long exp = 1;
        bool explicit_exp = false;
        if (pos + 1 < text.size() && text[pos] == '^' && text[pos + 1] == '(') {
            pos += 2;
            std::size_t estart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos >= text.size() || text[pos] != ')') throw ShapeError("bad monomial: " + text);
            exp = std::stol(text.substr(estart, pos - estart));
            explicit_exp = true;
            ++pos;
        }
        if (pos < text.size()) {
            if (text[pos] != '*') throw ShapeError("bad monomial: " + text);
            ++pos;
            if (pos == text.size()) throw ShapeError("bad monomial: " + text);
        }
        if (slot <= last_slot) throw ShapeError("monomial factors out of order: " + text);
        if (slot < 0 || static_cast<std::size_t>(slot) >= s.slots())
            throw ShapeError("slot out of range: " + text);
        if (exp < 1 || static_cast<std::uint64_t>(exp) >= s.slot_size(slot))
            throw ShapeError("exponent out of range: " + text);
        if (exp == 1 && explicit_exp) throw ShapeError("non-canonical exponent: " + text);
        mi[slot] = static_cast<std::uint8_t>(exp);
        last_slot = slot;
    }
    return mi;
}

}  // namespace oddham
