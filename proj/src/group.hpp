// Prime-order subgroup arithmetic used by every commitment and proof here.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bitstring.hpp"
#include "rng.hpp"

namespace bpkcnm {

using bigint = boost::multiprecision::cpp_int;

// Modular exponentiation with a 64-bit fast path (the small parameter set is
// hot: stream expansion alone costs thousands of exponentiations per run).
bigint powm(const bigint& base, const bigint& exp, const bigint& mod);

size_t bitlen(const bigint& v);
bigint bits_to_bigint(const BitString& bits);
// MSB-first, fixed width; throws if the value needs more than len bits.
BitString bigint_to_bits(const bigint& v, size_t len);
std::string bigint_to_dec(const bigint& v);
bigint mod_inverse(const bigint& a, const bigint& m);

// Order-q subgroup of Z_p^* generated by g, with p = 2q + 1.
struct GroupParams {
    std::string name;
    bigint p;
    bigint q;
    bigint g;
    // Small groups keep the full sorted subgroup for rank/unrank; the large
    // group leaves it empty.
    std::vector<bigint> subgroup_sorted;

    static GroupParams toy();
    static GroupParams large();
    static GroupParams by_name(const std::string& name);

    bool enumerable() const { return !subgroup_sorted.empty(); }

    bigint pow_g(const bigint& exp) const { return powm(g, exp, p); }
    bool is_member(const bigint& y) const;

    // One-way function f(x) = g^x with domain [0, q).
    bigint owf_eval(const bigint& x) const;

    // Position of y in the sorted subgroup listing; member check included.
    size_t rank(const bigint& y) const;

    // Uniform exponent in [0, q).
    bigint random_exponent(Rng& rng) const;
    // Uniform subgroup element (as g^x for uniform x).
    bigint random_element(Rng& rng) const;

    // Challenge length: bitlen(q - 1).
    size_t challenge_bits() const;
};

}  // namespace bpkcnm
