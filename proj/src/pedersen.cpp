#include "pedersen.hpp"

#include <stdexcept>

namespace bpkcnm {

bigint pedersen_gen_h(const GroupParams& group, Rng& rng) {
    for (;;) {
        bigint t = group.random_exponent(rng);
        bigint h = group.pow_g(t);
        if (h != 1) return h;  // h = 1 would collapse the r term
    }
}

bigint pedersen_commit(const GroupParams& group, const bigint& h, const bigint& m,
                       const bigint& r) {
    if (m < 0 || m >= group.q) throw std::domain_error("pedersen_commit: m out of [0, q)");
    if (r < 0 || r >= group.q) throw std::domain_error("pedersen_commit: r out of [0, q)");
    return (group.pow_g(m) * powm(h, r, group.p)) % group.p;
}

bool pedersen_verify(const GroupParams& group, const bigint& h, const bigint& com,
                     const bigint& m, const bigint& r) {
    if (m < 0 || m >= group.q || r < 0 || r >= group.q) return false;
    return pedersen_commit(group, h, m, r) == com;
}

}  // namespace bpkcnm
