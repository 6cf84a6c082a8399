#!/usr/bin/env python3
"""Regenerate data/modular_polynomials.txt.

Computes the classical modular polynomial Phi_l(X, Y) for small primes l
from the q-expansion of j.  The roots of Phi_l(X, j(tau)) are j(l*tau) and
j((tau + k)/l) for 0 <= k < l; their power sums have integral q-expansions,
Newton's identities give the elementary symmetric functions, and each of
those is rewritten as a polynomial in j by cancelling principal parts.

Output format: one coefficient per line, "l i k c" meaning c * X^i * Y^k,
listed for i >= k only (the polynomial is symmetric).
"""
import argparse
import sys
from fractions import Fraction


class Laurent:
    """Truncated Laurent series sum c[n] q^(val + n), exact below `prec`."""

    def __init__(self, val, coeffs, prec):
        self.val = val
        self.prec = prec
        self.c = list(coeffs[: max(0, prec - val)])

    def coeff(self, n):
        k = n - self.val
        if 0 <= k < len(self.c):
            return self.c[k]
        return 0

    def __add__(self, other):
        val = min(self.val, other.val)
        prec = min(self.prec, other.prec)
        return Laurent(val, [self.coeff(n) + other.coeff(n) for n in range(val, prec)], prec)

    def scale(self, s):
        return Laurent(self.val, [s * x for x in self.c], self.prec)

    def __mul__(self, other):
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        out = [0] * max(0, prec - val)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for k, b in enumerate(other.c):
                if i + k >= len(out):
                    break
                out[i + k] += a * b
        return Laurent(val, out, prec)


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def j_series(terms):
    """q*j(q) = E4^3 / prod (1 - q^n)^24, returned as a Laurent series."""
    e4 = [1] + [240 * sigma3(n) for n in range(1, terms)]
    e4cube = [0] * terms
    sq = [0] * terms
    for i in range(terms):
        for k in range(terms - i):
            sq[i + k] += e4[i] * e4[k]
    for i in range(terms):
        if sq[i]:
            for k in range(terms - i):
                e4cube[i + k] += sq[i] * e4[k]
    # 1 / prod(1 - q^n)^24 via the recurrence for the power of eta
    prod = [0] * terms
    prod[0] = 1
    for n in range(1, terms):
        for _ in range(24):
            for k in range(terms - 1, n - 1, -1):
                prod[k] -= prod[k - n]
    inv = [0] * terms
    inv[0] = 1
    for n in range(1, terms):
        inv[n] = -sum(prod[k] * inv[n - k] for k in range(1, n + 1))
    qj = [0] * terms
    for i in range(terms):
        if e4cube[i]:
            for k in range(terms - i):
                qj[i + k] += e4cube[i] * inv[k]
    return Laurent(-1, qj, terms - 1)


def power_sums(j, ell, count, prec):
    out = []
    jm = Laurent(0, [1], j.prec + 10 ** 6)
    for m in range(1, count + 1):
        jm = jm * j
        # j(l tau)^m
        stretched = Laurent(jm.val * ell, [], prec)
        vals = {}
        for n in range(jm.val, jm.prec):
            if ell * n < prec:
                vals[ell * n] = jm.coeff(n)
        lo = min(vals)
        stretched = Laurent(lo, [vals.get(n, 0) for n in range(lo, prec)], prec)
        # sum over k of j((tau + k)/l)^m
        dec_lo = -((-jm.val) // ell)
        dec_prec = min(prec, -(-jm.prec // ell))
        dec = Laurent(dec_lo, [ell * jm.coeff(ell * n) for n in range(dec_lo, dec_prec)], dec_prec)
        out.append(stretched + dec)
    return out


def to_polynomial_in_j(series, j, degree_bound):
    """Rewrite a q-series as a polynomial in j; checks the remainder vanishes."""
    poly = {}
    jp = [Laurent(0, [1], 10 ** 9)]
    for _ in range(degree_bound):
        jp.append(jp[-1] * j)
    rest = series
    for d in range(degree_bound, 0, -1):
        c = rest.coeff(-d)
        if c:
            poly[d] = c
            rest = rest + jp[d].scale(-c)
    for n in range(rest.val, -degree_bound - 1):
        if rest.coeff(n) != 0:
            raise RuntimeError("pole beyond degree bound")
    poly[0] = rest.coeff(0)
    check_to = min(rest.prec, 6)
    for n in range(1, check_to):
        if rest.coeff(n) != 0:
            raise RuntimeError("non-vanishing remainder; raise precision")
    if check_to < 2:
        raise RuntimeError("insufficient precision to verify remainder")
    return {d: c for d, c in poly.items() if c}


def modular_polynomial(ell):
    deg = ell + 1
    prec = ell * deg + 12
    j = j_series(ell * prec + deg + 20)
    sums = power_sums(j, ell, deg, prec)
    e = [Laurent(0, [1], 10 ** 9)]
    for m in range(1, deg + 1):
        acc = None
        for i in range(1, m + 1):
            term = e[m - i] * sums[i - 1]
            if i % 2 == 0:
                term = term.scale(-1)
            acc = term if acc is None else acc + term
        assert all(Fraction(x, m).denominator == 1 for x in acc.c)
        e.append(Laurent(acc.val, [x // m for x in acc.c], acc.prec))
    coeffs = {}
    for m in range(0, deg + 1):
        sign = -1 if m % 2 else 1
        for d, c in to_polynomial_in_j(e[m], j, deg).items():
            coeffs[(deg - m, d)] = sign * c
    for (i, k), c in coeffs.items():
        if coeffs.get((k, i)) != c:
            raise RuntimeError(f"Phi_{ell} not symmetric at {(i, k)}")
    return coeffs


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ell", type=int, nargs="+", default=[2, 3, 5, 7])
    parser.add_argument("--out", default="-")
    args = parser.parse_args()
    lines = ["# classical modular polynomials: l i k c  (c * X^i * Y^k, i >= k)"]
    for ell in args.ell:
        coeffs = modular_polynomial(ell)
        for (i, k) in sorted(coeffs, reverse=True):
            if i >= k:
                lines.append(f"{ell} {i} {k} {coeffs[(i, k)]}")
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
