#pragma once

// Exact scalars of a discretely valued field: K = Q equipped with the p-adic
// valuation, R = Z_(p) its valuation ring, uniformiser p. Completeness is not
// modelled; every value is an exact rational.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace btkit {

using Int = mpz_class;
using Rat = mpq_class; ///< canonical lowest terms, positive denominator

/// Additive valuation value: an integer, or infinity (the valuation of 0).
/// Infinity compares greater than every finite value.
class Valuation {
public:
    static Valuation infinity() { return Valuation(true, 0); }
    static Valuation finite(long v) { return Valuation(false, v); }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    long value() const {
        if (infinite_) throw std::logic_error("valuation is infinite");
        return value_;
    }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend bool operator!=(const Valuation& a, const Valuation& b) { return !(a == b); }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }

    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return finite(a.value_ + b.value_);
    }

    friend Valuation min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

private:
    Valuation(bool inf, long v) : infinite_(inf), value_(v) {}

    bool infinite_;
    long value_;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the fixed witness set decides primality for all
// n < 3.3e24, in particular for every 64-bit n.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Exponent of p in x (x nonzero).
inline long int_valuation(const Int& x, const Int& p) {
    Int reduced;
    return static_cast<long>(mpz_remove(reduced.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

} // namespace detail

/// Configuration of the valued field: the prime p is the uniformiser of
/// R = Z_(p). Restricted to machine-word primes so that the residue field
/// F_p is enumerable.
class PrimeConfig {
public:
    explicit PrimeConfig(unsigned long p) : p_(p), pz_(static_cast<unsigned long>(p)) {
        if (!detail::is_prime_u64(p)) throw std::domain_error("p is not prime");
    }

    unsigned long p() const { return p_; }
    const Int& uniformiser() const { return pz_; }

    /// p^e as an element of K; e may be negative.
    Rat uniformiser_pow(long e) const {
        Int power;
        mpz_pow_ui(power.get_mpz_t(), pz_.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
        if (e >= 0) return Rat(power);
        return Rat(Int(1), power);
    }

private:
    unsigned long p_;
    Int pz_;
};

/// v_p(x): the exponent of p in x; infinity for x = 0.
inline Valuation valuation(const Rat& x, const PrimeConfig& cfg) {
    if (x == 0) return Valuation::infinity();
    long vnum = detail::int_valuation(x.get_num(), cfg.uniformiser());
    long vden = detail::int_valuation(x.get_den(), cfg.uniformiser());
    return Valuation::finite(vnum - vden);
}

/// x ∈ R, i.e. v_p(x) >= 0 (0 included).
inline bool is_integral(const Rat& x, const PrimeConfig& cfg) {
    if (x == 0) return true;
    return mpz_divisible_p(x.get_den().get_mpz_t(), cfg.uniformiser().get_mpz_t()) == 0;
}

/// The unit u with x = u * p^{v_p(x)}.
inline Rat unit_part(const Rat& x, const PrimeConfig& cfg) {
    if (x == 0) throw std::domain_error("zero has no unit part");
    long v = valuation(x, cfg).value();
    return Rat(x / cfg.uniformiser_pow(v));
}

/// Serialization: "num/den", den omitted when 1, sign on the numerator.
inline std::string format_rat(const Rat& x) { return x.get_str(); }

inline Rat parse_rat(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("invalid rational: '" + s + "'"); };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto digits = [](const std::string& t, bool sign_allowed) {
        if (t.empty()) return false;
        std::size_t i = sign_allowed && t[0] == '-' ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (!digits(num, true) || !digits(den, false)) bad();
    Int n(num), d(den);
    if (d == 0) bad();
    Rat q(n, d);
    q.canonicalize();
    return q;
}

} // namespace btkit
