#!/usr/bin/env python3
"""Build the starter catalog (starter.jsonl) from first principles.

BCH and quadratic-residue generator polynomials are products of minimal
polynomials over GF(2^m); Reed-Muller generators are monomial evaluation
tables. Weight distributions are produced afterwards by build_wd.py.
"""
import json
import os
import sys

PRIMITIVE = {3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011,
             7: 0b10001001, 8: 0b100011101, 9: 0b1000010001}


def gf_tables(m):
    poly, size = PRIMITIVE[m], 1 << m
    exp, log = [0] * (2 * size), [0] * size
    v = 1
    for i in range(size - 1):
        exp[i] = v
        log[v] = i
        v <<= 1
        if v & size:
            v ^= poly
    for i in range(size - 1, 2 * size):
        exp[i] = exp[i - (size - 1)]
    return exp, log


def gf_mul(a, b, exp, log, order):
    if a == 0 or b == 0:
        return 0
    return exp[(log[a] + log[b]) % order]


def coset(i, n):
    c, j = [], i % n
    while j not in c:
        c.append(j)
        j = (2 * j) % n
    return c


def minimal_poly(exps, m, n):
    """Product of (x - beta^e) for e in exps, beta a primitive n-th root.
    Returns binary coefficients, low degree first."""
    exp, log = gf_tables(m)
    order = (1 << m) - 1
    step = order // n
    poly = [1]
    for e in exps:
        root = exp[(e * step) % order]
        nxt = [0] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d + 1] ^= c
            nxt[d] ^= gf_mul(c, root, exp, log, order)
        poly = nxt
    assert all(c in (0, 1) for c in poly), "not a binary polynomial"
    return poly


def pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] ^= y
    return out


def divides_xn1(g, n):
    r = [0] * (n + 1)
    r[0] = r[n] = 1
    dg = len(g) - 1
    for i in range(n, dg - 1, -1):
        if r[i]:
            for j, c in enumerate(g):
                r[i - dg + j] ^= c
    return not any(r[:dg])


def poly_from_cosets(leaders, m, n):
    g, seen = [1], set()
    for l in leaders:
        c = coset(l, n)
        if c[0] in seen or min(c) in seen:
            continue
        seen.update(c)
        g = pmul(g, minimal_poly(c, m, n))
    assert divides_xn1(g, n)
    return g


def bch_poly(m, n, delta):
    covered, g = set(), [1]
    for i in range(1, delta):
        if i % n in covered:
            continue
        c = coset(i, n)
        covered.update(c)
        g = pmul(g, minimal_poly(c, m, n))
    assert divides_xn1(g, n)
    return g


def bits_hex(bits):
    bits = list(bits) + [0] * (-len(bits) % 4)
    return "".join("%x" % int("".join(map(str, bits[i:i + 4])), 2) for i in range(0, len(bits), 4))


def rm_rows(r, m):
    from itertools import combinations
    points = [[(p >> (m - 1 - j)) & 1 for j in range(m)] for p in range(1 << m)]
    rows = []
    for deg in range(r + 1):
        for mono in combinations(range(m), deg):
            rows.append([int(all(pt[j] for j in mono)) for pt in points])
    return rows


def cyclic_rows(g, n):
    k = n - (len(g) - 1)
    return [[0] * s + g + [0] * (n - len(g) - s) for s in range(k)]


def cyclic_entry(name, family, n, g, d, prov, wd=True):
    e = {"name": name, "family": family, "n": n, "k": n - (len(g) - 1), "d": d,
         "cyclic": True, "construction": {"gen_poly": bits_hex(g)}}
    if wd:
        e["wd_ref"] = "wd/%s.wd" % name
    e["provenance"] = prov
    return e


def matrix_entry(name, family, rows, d, prov, wd=True, cyclic=False):
    e = {"name": name, "family": family, "n": len(rows[0]), "k": len(rows), "d": d,
         "cyclic": cyclic, "construction": {"generator": [bits_hex(r) for r in rows]}}
    if wd:
        e["wd_ref"] = "wd/%s.wd" % name
    e["provenance"] = prov
    return e


def main(out):
    entries = []
    entries.append(cyclic_entry("rep3", "repetition", 3, [1, 1, 1], 3, "g = 1+x+x^2"))
    entries.append(cyclic_entry("parity3", "parity", 3, [1, 1], 2, "g = 1+x"))
    entries.append(cyclic_entry("rep5", "repetition", 5, [1] * 5, 5, "g = 1+x+...+x^4"))
    entries.append(cyclic_entry("parity9", "parity", 9, [1, 1], 2, "g = 1+x"))
    entries.append(cyclic_entry("simplex7", "simplex", 7, pmul([1, 1], [1, 0, 1, 1]), 4,
                                "g = (1+x)(1+x^2+x^3), dual of the cyclic Hamming code"))

    # narrow-sense primitive BCH codes; one entry per distinct dimension
    designed = {3: [3], 4: [3, 5, 7], 5: [3, 5, 7, 11, 15], 6: [3, 5, 7, 9, 11, 13, 15, 21, 23, 27, 31],
                7: [3, 5, 7, 9, 11, 43], 8: [3, 5, 7, 95, 111], 9: [219]}
    wd_ok = lambda n, k: min(k, n - k) <= 31
    for m, deltas in designed.items():
        n = (1 << m) - 1
        for delta in deltas:
            g = bch_poly(m, n, delta)
            k = n - (len(g) - 1)
            fam = "hamming" if delta == 3 else "bch"
            name = "hamming%d_%d" % (n, k) if delta == 3 else "bch%d_%d" % (n, k)
            entries.append(cyclic_entry(
                name, fam, n, g, delta,
                "narrow-sense primitive BCH, designed distance %d, GF(2^%d) modulus %s"
                % (delta, m, bin(PRIMITIVE[m])), wd=wd_ok(n, k)))
    # BCH codes beyond enumeration range, ingested distributions optional
    for m, delta in [(7, 27), (8, 85)]:
        n = (1 << m) - 1
        g = bch_poly(m, n, delta)
        k = n - (len(g) - 1)
        entries.append(cyclic_entry(
            "bch%d_%d" % (n, k), "bch", n, g, delta,
            "narrow-sense primitive BCH, designed distance %d, GF(2^%d) modulus %s"
            % (delta, m, bin(PRIMITIVE[m]))))

    golay = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]
    entries.append(cyclic_entry("golay23", "golay", 23, golay, 7, "g = 1+x^2+x^4+x^5+x^6+x^10+x^11"))
    entries.append(cyclic_entry("golay23_even", "golay", 23, pmul([1, 1], golay), 8,
                                "even-weight subcode of golay23, g = (1+x) g_golay"))
    ext = [r + [sum(r) % 2] for r in cyclic_rows(golay, 23)]
    entries.append(matrix_entry("golay24", "golay", ext, 8, "golay23 rows extended by overall parity"))

    qr17 = poly_from_cosets([1], 8, 17)
    entries.append(cyclic_entry("qr17", "qr", 17, qr17, 5,
                                "quadratic residues mod 17 (coset of 1), roots in GF(2^8)"))
    qr127 = [q for q in range(1, 127) if pow(q, 63, 127) == 1]
    entries.append(cyclic_entry("qr127", "qr", 127, poly_from_cosets(sorted(qr127), 7, 127), 19,
                                "quadratic residues mod 127, roots in GF(2^7)"))

    for r, m, d in [(1, 3, 4), (1, 4, 8), (2, 4, 4), (1, 5, 16), (2, 5, 8), (1, 6, 32),
                    (1, 9, 256), (3, 8, 32), (3, 9, 64)]:
        rows = rm_rows(r, m)
        name = "rm%d_%d" % (r, m)
        entries.append(matrix_entry(name, "reed-muller", rows, d,
                                    "RM(%d,%d), monomials up to degree %d evaluated on F_2^%d in binary order"
                                    % (r, m, r, m)))

    with open(out, "w") as f:
        for e in entries:
            f.write(json.dumps(e, separators=(",", ":")) + "\n")
    for e in entries:
        print("%-16s [%d,%d,%s]" % (e["name"], e["n"], e["k"], e["d"]))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "starter.jsonl"))
