"""Weight-4 Hecke eigenforms and their critical L-values.

Coefficient files hold a header ``name level weight sign`` followed by one
``p a_p`` line per prime; ``#`` starts a comment.  All a_n are rebuilt from
the prime data by the Hecke recursions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import mpmath

__all__ = [
    "FormError",
    "ModularForm",
    "LValues",
    "load_form",
    "load_forms",
    "parse_form",
    "extend_coefficients",
    "l_value",
    "l_values",
    "truncation_point",
    "default_form_dir",
    "q_expansion",
]

WEIGHT = 4


class FormError(ValueError):
    pass


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(n + 1) if sieve[p]]


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class ModularForm:
    name: str
    level: int
    weight: int
    sign: int
    primes: dict[int, int] = field(repr=False)

    @property
    def p_max(self) -> int:
        return max(self.primes) if self.primes else 1

    def a(self, n: int) -> int:
        return extend_coefficients(self, n)[n]

    @property
    def coeffs(self) -> list[int]:
        """a_0 = 0, a_1 .. a_{p_max}."""
        return extend_coefficients(self, self.p_max)


def extend_coefficients(form: ModularForm, n_max: int) -> list[int]:
    """[0, a_1, ..., a_{n_max}] from the prime coefficients."""
    missing = [p for p in _primes_upto(n_max) if p not in form.primes]
    if missing:
        raise FormError(f"{form.name}: no coefficient for prime {missing[0]}")
    k1 = form.weight - 1
    cache: dict[tuple[int, int], int] = {}

    def prime_power(p: int, r: int) -> int:
        if (p, r) in cache:
            return cache[(p, r)]
        ap = form.primes[p]
        if r == 0:
            v = 1
        elif r == 1:
            v = ap
        elif form.level % p == 0:
            v = ap ** r
        else:
            v = ap * prime_power(p, r - 1) - p ** k1 * prime_power(p, r - 2)
        cache[(p, r)] = v
        return v

    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        v = 1
        for p, r in _factor(n):
            v *= prime_power(p, r)
        out[n] = v
    return out


def q_expansion(form: ModularForm, terms: int) -> str:
    """Printed expansion ``q - 4q^3 + ... + O(q^terms)``."""
    coeffs = extend_coefficients(form, terms - 1)
    parts = []
    for n, a in enumerate(coeffs):
        if n == 0 or a == 0:
            continue
        mag = "" if abs(a) == 1 else str(abs(a))
        mono = "q" if n == 1 else f"q^{n}"
        parts.append(("- " if a < 0 else "+ ") + mag + mono)
    text = " ".join(parts)
    text = text[2:] if text.startswith("+ ") else "-" + text[2:]
    return f"{text} + O(q^{terms})"


def _validate(form: ModularForm) -> None:
    if form.weight != WEIGHT:
        raise FormError(f"{form.name}: weight {form.weight}, expected {WEIGHT}")
    if form.sign not in (1, -1):
        raise FormError(f"{form.name}: Atkin-Lehner sign must be +-1")
    if form.level < 1:
        raise FormError(f"{form.name}: bad level {form.level}")
    bound_exp = (form.weight - 1) / 2
    for p, ap in form.primes.items():
        if form.level % p and abs(ap) > 2 * p ** bound_exp:
            raise FormError(f"{form.name}: a_{p} = {ap} violates the Deligne bound")
    extend_coefficients(form, form.p_max)


def parse_form(text: str, source: str = "<string>") -> ModularForm:
    header = None
    primes: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4:
                raise FormError(f"{source}:{lineno}: header must be 'name level weight sign'")
            header = (parts[0], int(parts[1]), int(parts[2]), int(parts[3]))
            continue
        if len(parts) != 2:
            raise FormError(f"{source}:{lineno}: expected 'p a_p'")
        p, ap = int(parts[0]), int(parts[1])
        if p == 1:
            if ap != 1:
                raise FormError(f"{source}:{lineno}: a_1 must be 1")
            continue
        if _factor(p) != [(p, 1)]:
            raise FormError(f"{source}:{lineno}: {p} is not prime")
        if primes and p <= max(primes):
            raise FormError(f"{source}:{lineno}: primes must increase")
        primes[p] = ap
    if header is None:
        raise FormError(f"{source}: empty coefficient file")
    form = ModularForm(header[0], header[1], header[2], header[3], primes)
    _validate(form)
    return form


def load_form(path: str | Path) -> ModularForm:
    path = Path(path)
    return parse_form(path.read_text(), str(path))


def default_form_dir() -> Path:
    return Path(__file__).parent / "data" / "forms"


def load_forms(directory: str | Path | None = None) -> dict[str, ModularForm]:
    directory = Path(directory) if directory else default_form_dir()
    forms = {}
    for path in sorted(directory.glob("*.txt")):
        f = load_form(path)
        forms[f.name] = f
    return forms


# ---------------------------------------------------------------------------
# L-values

@dataclass(frozen=True)
class LValues:
    form: str
    L1: mpmath.mpf
    L2: mpmath.mpf
    L3: mpmath.mpf
    lambda_vals: tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]


def truncation_point(level: int, precision: int) -> int:
    """Smallest M with sum_{n>M} 3 n^(5/2) exp(-2 pi n / sqrt(N)) < 10^-precision."""
    c = 2 * math.pi / math.sqrt(level)
    target = 10.0 ** -precision
    m = 1
    while True:
        # the tail is dominated by a geometric series from m + 1 on
        first = 3 * (m + 1) ** 2.5 * math.exp(-c * (m + 1))
        ratio = ((m + 2) / (m + 1)) ** 2.5 * math.exp(-c)
        if ratio < 1 and first / (1 - ratio) < target:
            return m
        m += 1


def _upper_gamma(k: int, x):
    e = mpmath.exp(-x)
    if k == 1:
        return e
    if k == 2:
        return (1 + x) * e
    if k == 3:
        return (2 + 2 * x + x * x) * e
    raise ValueError("closed form only for k = 1, 2, 3")


def l_value(form: ModularForm, s: int, precision: int = 30, completed: bool = False):
    """L(f, s) (or Lambda(f, s)) for s in {1, 2, 3} from the symmetric incomplete-gamma series."""
    if s not in (1, 2, 3):
        raise ValueError("s must be 1, 2 or 3")
    m = truncation_point(form.level, precision)
    if m > form.p_max:
        raise FormError(f"{form.name}: need a_n up to {m}, have primes up to {form.p_max}")
    coeffs = extend_coefficients(form, m)
    with mpmath.workdps(precision + 15):
        k = form.weight
        root = mpmath.sqrt(form.level)
        two_pi = 2 * mpmath.pi
        total = mpmath.mpf(0)
        for n in range(1, m + 1):
            an = coeffs[n]
            if not an:
                continue
            x = two_pi * n / root
            r = root / (two_pi * n)
            total += an * (r ** s * _upper_gamma(s, x)
                           + form.sign * r ** (k - s) * _upper_gamma(k - s, x))
        if completed:
            return +total
        return +(total / ((root / two_pi) ** s * mpmath.gamma(s)))


def l_values(form: ModularForm, precision: int = 30) -> LValues:
    lam = tuple(l_value(form, s, precision, completed=True) for s in (1, 2, 3))
    with mpmath.workdps(precision + 15):
        root = mpmath.sqrt(form.level)
        two_pi = 2 * mpmath.pi
        ls = [lam[s - 1] / ((root / two_pi) ** s * mpmath.gamma(s)) for s in (1, 2, 3)]
    return LValues(form.name, ls[0], ls[1], ls[2], lam)
