#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

// Arithmetic over the prime field F_p.  Everything downstream is exact; there
// is no floating point anywhere in this library.

namespace oddham {

using Scalar = std::uint32_t;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool env_flag(const char* name) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

inline bool is_prime_u32(std::uint32_t x) {
    if (x < 2) return false;
    for (std::uint32_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

// Configuration object for F_p.  Values are plain uint32 residues in [0, p);
// all operations keep that invariant.  The supported primes are 5, 7 and 11
// (set ODDHAM_UNLOCK_NP to accept any prime > 3).
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (!is_prime_u32(p) || p <= 3)
            throw CapacityError("p must be a prime > 3, got " + std::to_string(p));
        if (p != 5 && p != 7 && p != 11 && !env_flag("ODDHAM_UNLOCK_NP"))
            throw CapacityError("p outside supported range {5,7,11}: " + std::to_string(p));
    }

    std::uint32_t p() const { return p_; }

    Scalar reduce(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Scalar>(r);
    }

    Scalar add(Scalar a, Scalar b) const { return (a + b) % p_; }
    Scalar sub(Scalar a, Scalar b) const { return (a + p_ - b) % p_; }
    Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }

    Scalar pow(Scalar a, std::uint64_t e) const {
        Scalar r = 1, base = a % p_;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Scalar inv(Scalar a) const {
        if (a % p_ == 0) throw std::domain_error("inverse of 0 in F_p");
        return pow(a, p_ - 2);
    }

    // C(a,b) mod p by Lucas' theorem, digit by digit in base p.
    Scalar binom(std::uint64_t a, std::uint64_t b) const {
        if (b > a) return 0;
        Scalar result = 1;
        while (a || b) {
            std::uint32_t ad = a % p_, bd = b % p_;
            if (bd > ad) return 0;
            result = mul(result, binom_small(ad, bd));
            a /= p_;
            b /= p_;
        }
        return result;
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    // C(a,b) for 0 <= b <= a < p, via the factorial formula (all units).
    Scalar binom_small(std::uint32_t a, std::uint32_t b) const {
        Scalar num = 1, den = 1;
        for (std::uint32_t i = 0; i < b; ++i) {
            num = mul(num, (a - i) % p_);
            den = mul(den, (i + 1) % p_);
        }
        return mul(num, inv(den));
    }

    std::uint32_t p_;
};

inline Scalar binom_mod_p(std::uint64_t a, std::uint64_t b, const PrimeField& F) {
    return F.binom(a, b);
}

}  // namespace oddham
