"""Regenerate the weight-4 newform coefficient files in src/doubleoctic/data/forms.

  6/1   (eta(t) eta(2t) eta(3t) eta(6t))^2
  8/1   eta(2t)^4 eta(4t)^4
  32/1  Hecke character of Q(i): a_p = pi^3 + conj(pi)^3, pi = 1 mod (2 + 2i)
  12/1, 32/2
        eigenvector of T_3, T_5, T_7 inside the span of holomorphic eta
        quotients of that level, pinned down by the printed eigenvalues

Run with ``python tools/make_forms.py [outdir]``.  Needs sympy (exact
linear algebra); the package itself does not.
"""
from __future__ import annotations

import itertools
import math
import sys
from fractions import Fraction
from pathlib import Path

import sympy

PMAX = 257
TERMS = PMAX + 1

# level, T_p eigenvalues and the printed a_1..a_11 for the forms found by linear algebra
SEARCHED = {
    "12/1": (12, {5: -18, 7: 8}, [1, 0, 3, 0, -18, 0, 8, 0, 9, 0, 36]),
    "32/2": (32, {3: 8, 5: -10, 7: 16}, [1, 0, 8, 0, -10, 0, 16, 0, 37, 0, -40]),
}


def primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if sympy.isprime(p)]


def mul(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def euler(n: int) -> list[int]:
    """prod (1 - q^k) via the pentagonal number theorem."""
    out = [0] * n
    k = 0
    while True:
        hit = False
        for m in (k, -k) if k else (0,):
            e = m * (3 * m - 1) // 2
            if e < n:
                out[e] += -1 if m % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def inverse(a: list[int], n: int) -> list[int]:
    out = [0] * n
    out[0] = 1
    for i in range(1, n):
        out[i] = -sum(a[j] * out[i - j] for j in range(1, i + 1) if a[j])
    return out


def power(a: list[int], e: int, n: int) -> list[int]:
    if e < 0:
        a, e = inverse(a, n), -e
    out = [1] + [0] * (n - 1)
    for _ in range(e):
        out = mul(out, a, n)
    return out


def dilate(a: list[int], d: int, n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a):
        if i * d >= n:
            break
        out[i * d] = x
    return out


def eta_quotient(r: dict[int, int], n: int) -> list[int] | None:
    """Coefficients of q^1..q^n of prod eta(d t)^r_d, None unless the q-order is a positive integer."""
    order24 = sum(d * e for d, e in r.items())
    if order24 % 24 or order24 <= 0:
        return None
    shift = order24 // 24
    e = euler(n)
    out = [1] + [0] * (n - 1)
    for d, k in r.items():
        if k:
            out = mul(out, dilate(power(e, k, n), d, n), n)
    series = [0] * shift + out
    return series[1 : n + 1]


def holomorphic(r: dict[int, int], level: int) -> bool:
    for c in sympy.divisors(level):
        v = sum(math.gcd(c, d) ** 2 * e / d for d, e in r.items())
        if v < 0:
            return False
    return True


def eta_span(level: int, weight: int, n: int, bound: int, limit: int = 40) -> list[dict[int, int]]:
    """Linearly independent holomorphic eta quotients (as exponent maps) of the given level."""
    divs = sympy.divisors(level)
    chosen: list[dict[int, int]] = []
    rows: list[list[int]] = []
    for exps in itertools.product(range(-bound, bound + 1), repeat=len(divs) - 1):
        last = 2 * weight - sum(exps)
        r = dict(zip(divs, exps + (last,)))
        if sum((level // d) * e for d, e in r.items()) % 24:
            continue
        if sum(d * e for d, e in r.items()) % 24:
            continue
        prod = Fraction(1)
        for d, e in r.items():
            prod *= Fraction(d) ** e
        if not sympy.sqrt(sympy.Rational(prod.numerator, prod.denominator)).is_rational:
            continue
        if not holomorphic(r, level):
            continue
        s = eta_quotient(r, n)
        if s is None:
            continue
        if sympy.Matrix(rows + [s]).rank() > len(rows):
            rows.append(s)
            chosen.append(r)
            if len(rows) >= limit:
                break
    return chosen


def combine(quotients: list[dict[int, int]], weights: list, n: int) -> list[int]:
    total = [Fraction(0)] * n
    for r, w in zip(quotients, weights):
        for i, c in enumerate(eta_quotient(r, n)):
            total[i] += Fraction(int(w.p), int(w.q)) * c
    if any(c.denominator != 1 for c in total):
        raise RuntimeError("non-integral eigenform")
    return [int(c) for c in total]


def hecke_eigenform(level: int, eigen: dict[int, int], printed: list[int], n: int) -> list[int]:
    """Coefficients a_1..a_n of the eigenform with the given T_p eigenvalues and leading terms."""
    small = 30 * max(eigen)
    quotients = eta_span(level, 4, small, 6, limit=60)
    span = [eta_quotient(r, small) for r in quotients]
    mat = sympy.Matrix(span).T  # row i = coefficient of q^(i+1), column j = quotient j
    rows, rhs = [], []
    usable = small // max(eigen)
    for p, ap in eigen.items():
        for m in range(1, usable + 1):
            # (T_p f)_m = a_{pm} + p^3 a_{m/p} (trivial character, p not dividing level)
            row = mat.row(p * m - 1) - ap * mat.row(m - 1)
            if m % p == 0:
                row = row + p ** 3 * mat.row(m // p - 1)
            rows.append(row)
            rhs.append(0)
    for m, a in enumerate(printed, start=1):
        rows.append(mat.row(m - 1))
        rhs.append(a)
    sol, params = sympy.Matrix.vstack(*rows).gauss_jordan_solve(sympy.Matrix(rhs))
    if params.shape[0]:
        raise RuntimeError(f"level {level}: eigenvector not unique ({params.shape[0]} free)")
    return combine(quotients, list(sol), n)


def cm_gaussian(n: int) -> dict[int, int]:
    aps = {}
    for p in primes_upto(n):
        if p == 2:
            aps[p] = 0
        elif p % 4 == 3:
            aps[p] = 0
        else:
            a = next(a for a in range(1, p) if math.isqrt(p - a * a) ** 2 == p - a * a)
            b = math.isqrt(p - a * a)
            for x, y in ((a, b), (-a, b), (a, -b), (-a, -b), (b, a), (-b, a), (b, -a), (-b, -a)):
                # x + iy = 1 mod (2 + 2i)  <=>  (x - 1 + iy)(2 - 2i)/8 in Z[i]
                re, im = 2 * (x - 1) + 2 * y, 2 * y - 2 * (x - 1)
                if re % 8 == 0 and im % 8 == 0:
                    z = complex(x, y) ** 3
                    aps[p] = int(round(2 * z.real))
                    break
    return aps


def series_to_primes(series: list[int], n: int) -> dict[int, int]:
    return {p: series[p - 1] for p in primes_upto(n)}


def write(path: Path, name: str, level: int, aps: dict[int, int]) -> None:
    lines = [f"{name} {level} 4 1"]
    lines += [f"{p} {a}" for p, a in sorted(aps.items())]
    path.write_text("\n".join(lines) + "\n")


def main(outdir: str) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    n = TERMS

    def eta_prod(r):
        return eta_quotient(r, n)

    forms = {
        "6/1": (6, series_to_primes(eta_prod({1: 2, 2: 2, 3: 2, 6: 2}), PMAX)),
        "8/1": (8, series_to_primes(eta_prod({2: 4, 4: 4}), PMAX)),
        "32/1": (32, cm_gaussian(PMAX)),
    }
    for name, (level, eigen, printed) in SEARCHED.items():
        forms[name] = (level, series_to_primes(hecke_eigenform(level, eigen, printed, n), PMAX))
    for name, (level, aps) in forms.items():
        write(out / (name.replace("/", "_") + ".txt"), name, level, aps)
        print(name, level, [aps[p] for p in primes_upto(13)])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/doubleoctic/data/forms")
