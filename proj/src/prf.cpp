#include "prf.hpp"

#include <stdexcept>

namespace bpkcnm {

BitString prf_eval(const GroupParams& group, PrgBackendKind kind, const BitString& sigma,
                   const BitString& x, size_t expected_input_len) {
    if (sigma.size() == 0) throw std::domain_error("prf_eval: empty key");
    if (x.size() != expected_input_len) throw std::domain_error("prf_eval: wrong input length");
    const size_t n = sigma.size();
    BitString cur = sigma;
    for (size_t level = 0; level < x.size(); ++level) {
        BitString ex = prg_expand(group, kind, cur, 2 * n);
        cur = x.bit(level) == 0 ? ex.slice(0, n) : ex.slice(n, n);
    }
    return cur;
}

}  // namespace bpkcnm
