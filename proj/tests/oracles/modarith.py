#!/usr/bin/env python3
"""Independent modular-arithmetic oracle for the toy group (p=23, q=11, g=2).

Computes the expected constants frozen into the C++ unit tests.  Run it and
paste the printed values; the C++ code must reproduce them exactly.
"""

P, Q, G = 23, 11, 2
H = 8  # second generator for the commitment tests (8 = 2^3 mod 23)


def main() -> None:
    print("== one-way function ==")
    print("g^0  mod p =", pow(G, 0, P))
    print("g^3  mod p =", pow(G, 3, P))

    print("== pedersen commit ==")
    print("g^3 * h^4 mod p =", (pow(G, 3, P) * pow(H, 4, P)) % P)

    print("== schnorr-style dlog proof (y = g^3 = 8) ==")
    x, k = 3, 4
    a = pow(G, k, P)
    print("a = g^4 mod p =", a)
    e = 5
    z = (k + e * x) % Q
    print("z = k + e*x mod q =", z)
    lhs = pow(G, z, P)
    rhs = (a * pow(pow(G, x, P), e, P)) % P
    print("g^z mod p =", lhs, " a*y^e mod p =", rhs, " equal:", lhs == rhs)

    print("== special-soundness extraction ==")
    e1, z1 = 5, 8
    e2 = 2
    z2 = (k + e2 * x) % Q
    print("second transcript: e2=2, z2 =", z2)
    inv = pow((e1 - e2) % Q, -1, Q)
    xrec = ((z1 - z2) * inv) % Q
    print("recovered x =", xrec)

    print("== subgroup of order q, sorted ==")
    sub = sorted({pow(G, i, P) for i in range(Q)})
    print("subgroup:", sub)
    print("== non-member used by the strawman attack statement ==")
    print("5^q mod p =", pow(5, Q, P), "(1 would mean subgroup member)")

    print("== challenge width ==")
    print("bitlen(q-1) =", (Q - 1).bit_length())


if __name__ == "__main__":
    main()
