"""Rectangular period lattices and the invariants of their elliptic curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "LatticeError",
    "PeriodLattice",
    "EllipticInvariants",
    "recognize_rational",
    "rational_gcd",
    "lattice_generators",
    "eisenstein",
    "elliptic_invariants",
    "j_invariant",
]

WORKING_DPS = 40


class LatticeError(ValueError):
    pass


def recognize_rational(x, y, max_den: int = 64, tol: float = 1e-9) -> Fraction | None:
    """p/q with q <= max_den and |x/y - p/q| < tol, from the continued fraction of x/y."""
    if y == 0:
        raise ZeroDivisionError("y must be nonzero")
    ratio = mpmath.mpf(x) / mpmath.mpf(y)
    # limit_denominator walks the continued fraction convergents and semiconvergents
    approx = Fraction(float(ratio)).limit_denominator(max_den)
    if abs(ratio - mpmath.mpf(approx.numerator) / approx.denominator) < tol:
        return approx
    return None


def rational_gcd(ratios: Iterable[Fraction]) -> Fraction:
    """Largest positive rational g with every ratio an integer multiple of g."""
    ratios = [abs(Fraction(r)) for r in ratios if r != 0]
    if not ratios:
        raise LatticeError("no nonzero ratios")
    den = math.lcm(*(r.denominator for r in ratios))
    num = math.gcd(*(int(r * den) for r in ratios))
    return Fraction(num, den)


@dataclass(frozen=True)
class PeriodLattice:
    omega_re: float
    omega_im: float
    multipliers: dict = field(default_factory=dict, compare=False)

    @property
    def tau_over_i(self) -> float:
        return self.omega_im / self.omega_re


def _axis_of(p) -> str:
    axis = getattr(p, "axis", None)
    if axis is None:
        raise LatticeError("period without an axis tag")
    return axis


def _axis_generator(values: Sequence[float], max_den: int, tol: float) -> tuple[float, list[Fraction]]:
    base = values[0]
    ratios = []
    for v in values:
        r = recognize_rational(v, base, max_den, tol)
        if r is None:
            raise LatticeError(f"ratio {v!r} / {base!r} is not recognized as a rational "
                               f"with denominator <= {max_den}")
        ratios.append(r)
    g = rational_gcd(ratios)
    return base * g.numerator / g.denominator, [r / g for r in ratios]


def lattice_generators(periods: Sequence, max_den: int = 64, tol: float = 1e-7) -> PeriodLattice:
    """Rational gcd of the real and of the imaginary period magnitudes.

    ``periods`` are objects with ``value`` and ``axis`` ("real" or "imaginary").
    """
    by_axis: dict[str, list] = {"real": [], "imaginary": []}
    for p in periods:
        by_axis.setdefault(_axis_of(p), []).append(p)
    for axis in ("real", "imaginary"):
        if not by_axis[axis]:
            raise LatticeError(f"no {axis} period supplied")
    gens = {}
    mult = {}
    for axis in ("real", "imaginary"):
        values = [abs(float(p.value)) for p in by_axis[axis]]
        g, ks = _axis_generator(values, max_den, tol)
        gens[axis] = g
        for p, k in zip(by_axis[axis], ks):
            mult[(axis, abs(float(p.value)))] = k
    return PeriodLattice(gens["real"], gens["imaginary"], mult)


# ---------------------------------------------------------------------------
# Eisenstein series and invariants

def _q_of(tau) -> mpmath.mpc:
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise LatticeError("tau must lie in the upper half-plane")
    return mpmath.exp(2j * mpmath.pi * tau)


def _terms_needed(absq: float, k: int, eps: float) -> int:
    """Terms n <= M with sum_{n>M} n^(k+1) |q|^n < eps."""
    m = 1
    while True:
        first = (m + 1) ** (k + 1) * absq ** (m + 1)
        ratio = ((m + 2) / (m + 1)) ** (k + 1) * absq
        if ratio < 1 and first / (1 - ratio) < eps:
            return m
        m += 1


def _sigma(n: int, k: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            e = n // d
            if e != d:
                s += e ** k
        d += 1
    return s


def eisenstein(tau, terms: int | None = None, eps: float = 1e-30):
    """(E4, E6) at tau from the q-series; terms default to a tail below eps."""
    with mpmath.workdps(WORKING_DPS):
        q = _q_of(tau)
        if terms is None:
            terms = _terms_needed(float(abs(q)), 5, eps)
        e4 = mpmath.mpf(1)
        e6 = mpmath.mpf(1)
        qn = mpmath.mpf(1)
        for n in range(1, terms + 1):
            qn *= q
            e4 += 240 * _sigma(n, 3) * qn
            e6 -= 504 * _sigma(n, 5) * qn
        if mpmath.re(tau) == 0:
            e4, e6 = mpmath.re(e4), mpmath.re(e6)
        return +e4, +e6


def j_invariant(tau):
    with mpmath.workdps(WORKING_DPS):
        e4, e6 = eisenstein(tau)
        d = e4 ** 3 - e6 ** 2
        if d == 0:
            raise LatticeError("j has a pole here")
        return 1728 * e4 ** 3 / d


@dataclass(frozen=True)
class EllipticInvariants:
    tau_over_i: mpmath.mpf
    g2: mpmath.mpf
    g3: mpmath.mpf
    j: mpmath.mpf

    def as_floats(self) -> dict[str, float]:
        return {k: float(getattr(self, k)) for k in ("tau_over_i", "j", "g2", "g3")}


def elliptic_invariants(lat: PeriodLattice | float) -> EllipticInvariants:
    """Invariants of the normalized lattice Z + tau Z with tau = i omega_im / omega_re.

    A bare number is taken as tau / i.
    """
    if isinstance(lat, PeriodLattice):
        if lat.omega_re <= 0 or lat.omega_im <= 0:
            raise LatticeError("generators must be positive")
        t = mpmath.mpf(lat.omega_im) / mpmath.mpf(lat.omega_re)
    else:
        t = mpmath.mpf(lat)
        if t <= 0:
            raise LatticeError("tau / i must be positive")
    with mpmath.workdps(WORKING_DPS):
        e4, e6 = eisenstein(mpmath.mpc(0, t))
        pi = mpmath.pi
        g2 = 4 * pi ** 4 / 3 * e4
        g3 = 8 * pi ** 6 / 27 * e6
        d = e4 ** 3 - e6 ** 2
        if d == 0:
            raise LatticeError("j has a pole here")
        j = 1728 * e4 ** 3 / d
        return EllipticInvariants(+t, +g2, +g3, +j)
