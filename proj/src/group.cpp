#include "group.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/integer/mod_inverse.hpp>

namespace bpkcnm {

namespace {

// Schoolbook square-and-multiply over unsigned 64-bit words; products go
// through __uint128_t so any modulus below 2^63 is safe.
uint64_t powm_u64(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t acc = 1 % mod;
    base %= mod;
    while (exp != 0) {
        if (exp & 1) acc = static_cast<uint64_t>((static_cast<unsigned __int128>(acc) * base) % mod);
        base = static_cast<uint64_t>((static_cast<unsigned __int128>(base) * base) % mod);
        exp >>= 1;
    }
    return acc;
}

const uint64_t kU64FastLimit = 1ULL << 62;

}  // namespace

bigint powm(const bigint& base, const bigint& exp, const bigint& mod) {
    if (mod <= 0) throw std::domain_error("powm: modulus must be positive");
    if (exp < 0) throw std::domain_error("powm: negative exponent");
    if (mod < kU64FastLimit && exp < kU64FastLimit && base >= 0 && base < kU64FastLimit) {
        return bigint(powm_u64(static_cast<uint64_t>(base), static_cast<uint64_t>(exp),
                               static_cast<uint64_t>(mod)));
    }
    bigint b = base % mod;
    if (b < 0) b += mod;
    return boost::multiprecision::powm(b, exp, mod);
}

size_t bitlen(const bigint& v) {
    if (v < 0) throw std::domain_error("bitlen: negative value");
    if (v == 0) return 0;
    return static_cast<size_t>(boost::multiprecision::msb(v)) + 1;
}

bigint bits_to_bigint(const BitString& bits) {
    bigint v = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
        v <<= 1;
        if (bits.bit(i)) v |= 1;
    }
    return v;
}

BitString bigint_to_bits(const bigint& v, size_t len) {
    if (v < 0) throw std::domain_error("bigint_to_bits: negative value");
    if (bitlen(v) > len) throw std::domain_error("bigint_to_bits: value does not fit");
    BitString out = BitString::zeros(len);
    bigint rest = v;
    for (size_t i = 0; i < len && rest != 0; ++i) {
        out.set_bit(len - 1 - i, static_cast<uint8_t>(static_cast<unsigned>(rest & 1)));
        rest >>= 1;
    }
    return out;
}

std::string bigint_to_dec(const bigint& v) { return v.str(); }

bigint mod_inverse(const bigint& a, const bigint& m) {
    bigint r = a % m;
    if (r < 0) r += m;
    bigint inv = boost::integer::mod_inverse(r, m);
    if (inv == 0) throw std::domain_error("mod_inverse: not invertible");
    return inv;
}

GroupParams GroupParams::toy() {
    GroupParams gp;
    gp.name = "toy";
    gp.p = 23;
    gp.q = 11;
    gp.g = 2;
    // Quadratic residues mod 23, i.e. the order-11 subgroup generated by 2.
    for (bigint x = 0; x < gp.q; ++x) gp.subgroup_sorted.push_back(gp.pow_g(x));
    std::sort(gp.subgroup_sorted.begin(), gp.subgroup_sorted.end());
    return gp;
}

GroupParams GroupParams::large() {
    GroupParams gp;
    gp.name = "large";
    // Smallest safe prime >= 2^255; see tests/oracles/gen_large_group.py.
    gp.p = bigint(
        "57896044618658097711785492504343953926634992332820282019728792003956565016447");
    gp.q = (gp.p - 1) / 2;
    gp.g = 4;  // squares generate the order-q subgroup of a safe prime
    return gp;
}

GroupParams GroupParams::by_name(const std::string& name) {
    if (name == "toy") return toy();
    if (name == "large") return large();
    throw std::domain_error("unknown group: " + name);
}

bool GroupParams::is_member(const bigint& y) const {
    if (y <= 0 || y >= p) return false;
    return powm(y, q, p) == 1;
}

bigint GroupParams::owf_eval(const bigint& x) const {
    if (x < 0 || x >= q) throw std::domain_error("owf_eval: exponent out of [0, q)");
    return pow_g(x);
}

size_t GroupParams::rank(const bigint& y) const {
    if (!enumerable()) throw std::domain_error("rank: group is not enumerable");
    auto it = std::lower_bound(subgroup_sorted.begin(), subgroup_sorted.end(), y);
    if (it == subgroup_sorted.end() || *it != y)
        throw std::domain_error("rank: not a subgroup member");
    return static_cast<size_t>(it - subgroup_sorted.begin());
}

bigint GroupParams::random_exponent(Rng& rng) const {
    const size_t len = bitlen(q);
    for (;;) {
        bigint v = bits_to_bigint(rng.bits(len));
        if (v < q) return v;
    }
}

bigint GroupParams::random_element(Rng& rng) const {
    bigint x = random_exponent(rng);
    return pow_g(x);
}

size_t GroupParams::challenge_bits() const { return bitlen(q - 1); }

}  // namespace bpkcnm
