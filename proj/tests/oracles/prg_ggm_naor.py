#!/usr/bin/env python3
"""Independent oracle for the default PRG backend and everything built on it.

Models the Blum–Micali iteration over f(x) = g^x mod p with the
least-significant-exponent-bit output and the rank-bijection state step
(next state = index of f(state) in the sorted order-q subgroup), then derives:

  * the 12-bit expansion of every 4-bit seed on the toy group,
  * the per-seed collision structure backing the ">= 14 of 16 differ" claim,
  * the exact equivocating-R count for the Naor binding bound at n=4,
  * the GGM d=2 unrolled evaluation for one fixed seed.

The printed values are frozen into the C++ tests; the implementation must
reproduce them bit for bit.
"""

P, Q, G = 23, 11, 2

SUBGROUP = sorted({pow(G, i, P) for i in range(Q)})
RANK = {v: i for i, v in enumerate(SUBGROUP)}


def prg(seed_bits: tuple, out_len: int) -> tuple:
    """seed_bits: MSB-first tuple of n bits."""
    x = 0
    for b in seed_bits:
        x = (x << 1) | b
    x %= Q
    out = []
    for _ in range(out_len):
        out.append(x & 1)
        x = RANK[pow(G, x, P)]
    return tuple(out)


def int_to_bits(v: int, n: int) -> tuple:
    return tuple((v >> (n - 1 - i)) & 1 for i in range(n))


def bits_to_hexstr(bits: tuple) -> str:
    # big-endian, length-prefixed: "<len>:<hex>", bits packed MSB-first
    by = bytearray()
    for i, b in enumerate(bits):
        if i % 8 == 0:
            by.append(0)
        by[-1] |= b << (7 - (i % 8))
    return f"{len(bits)}:" + by.hex()


def main() -> None:
    n = 4
    streams = {s: prg(int_to_bits(s, n), 3 * n) for s in range(16)}
    print("== 12-bit expansions of all 16 seeds (n=4) ==")
    for s, bits in streams.items():
        print(f"seed {s:2d} -> {''.join(map(str, bits))}   {bits_to_hexstr(bits)}")

    print("== per-seed distinctness (claim: every seed differs from >= 14 others) ==")
    worst = 16
    for s0 in range(16):
        differs = sum(1 for s1 in range(16) if s1 != s0 and streams[s1] != streams[s0])
        worst = min(worst, differs)
        collid = [s1 for s1 in range(16) if s1 != s0 and streams[s1] == streams[s0]]
        if collid:
            print(f"seed {s0:2d}: differs from {differs}, collides with {collid}")
    print("minimum differ-count over all seeds:", worst)

    print("== naor binding brute force at n=4 ==")
    # R equivocates iff exists s0, s1 with PRG(s0) = PRG(s1) xor R.
    xors = set()
    for s0 in range(16):
        for s1 in range(16):
            a, b = streams[s0], streams[s1]
            xors.add(tuple(x ^ y for x, y in zip(a, b)))
    print("distinct equivocating R values:", len(xors), "of", 2 ** (3 * n))
    print("fraction:", len(xors) / 2 ** (3 * n), " bound 2^-4 =", 2 ** -4)

    print("== ggm d=2 unroll at n=4, seed 0b0110 ==")
    sigma = int_to_bits(0b0110, n)
    # level 1 on input bit 0: first half of prg(sigma, 2n)
    l1 = prg(sigma, 2 * n)[:n]
    l2 = prg(l1, 2 * n)[:n]
    print("prf(sigma, 00) =", "".join(map(str, l2)), bits_to_hexstr(l2))

    print("== prg determinism spot values (seed 0b0110) ==")
    print("expand(0110, 8)  =", "".join(map(str, prg(sigma, 8))))
    print("expand(0110, 12) =", "".join(map(str, prg(sigma, 12))))


if __name__ == "__main__":
    main()
