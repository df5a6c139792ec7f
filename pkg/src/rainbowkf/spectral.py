"""Certified spectral radii, Perron vectors and equitable quotient matrices."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .graph import LabeledGraph, hnk, hnk_parts
from .poly import (
    CharPoly,
    RootInterval,
    SturmCounter,
    char_poly,
    compare_largest_roots,
    isolate_largest_root,
)

DEFAULT_TOL = 1e-10
POWER_MAX_ITER = 20000


class SpectralError(ValueError):
    pass


class Comparison(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    @classmethod
    def from_sign(cls, s: int) -> Comparison:
        return cls.LESS if s < 0 else cls.GREATER if s > 0 else cls.EQUAL


@dataclass(frozen=True)
class SpectralCertificate:
    """Rigorous enclosure lo <= rho <= hi with the evidence that proves it.

    For ``collatz-wielandt`` the witness maps each component (a tuple of labels)
    to the positive rational vector used on it; for ``sturm-isolated`` it is the
    integer polynomial whose largest root was isolated.
    """

    lo: Fraction
    hi: Fraction
    method: str
    witness: Any = field(default=None, compare=False)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: float | Fraction) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "lo": _frac_str(self.lo),
            "hi": _frac_str(self.hi),
            "method": self.method,
            "lo_float": float(self.lo),
            "hi_float": float(self.hi),
        }
        if self.method == "sturm-isolated" and self.witness is not None:
            out["polynomial"] = list(self.witness)
        return out


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


# -- Collatz-Wielandt -----------------------------------------------------------


def collatz_wielandt(g: LabeledGraph, vertices: Sequence[int], x: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of (Ax)_i / x_i over the subgraph induced on ``vertices``."""
    pos = {v: i for i, v in enumerate(vertices)}
    ratios = []
    for i, v in enumerate(vertices):
        s = sum((x[pos[w]] for w in g.neighbors(v) if w in pos), Fraction(0))
        ratios.append(s / x[i])
    return min(ratios), max(ratios)


def _power_iteration(a: np.ndarray, tol: float) -> tuple[np.ndarray, float, bool]:
    """Shifted power iteration on A + nI from the all-ones vector."""
    n = a.shape[0]
    shifted = a + n * np.eye(n)
    x = np.ones(n) / np.sqrt(n)
    rho = 0.0
    for _ in range(POWER_MAX_ITER):
        y = shifted @ x
        y /= np.linalg.norm(y)
        ax = a @ y
        ratios = ax / y
        if ratios.max() - ratios.min() <= tol * 0.25:
            return y, float(y @ ax), True
        x = y
        rho = float(y @ ax)
    return x, rho, False


def _component_certificate(g: LabeledGraph, comp: list[int], tol: float) -> SpectralCertificate:
    if len(comp) == 1:
        return SpectralCertificate(Fraction(0), Fraction(0), "collatz-wielandt", {tuple(comp): (Fraction(1),)})
    sub = g.induced(comp)
    a = sub.adjacency_matrix(dtype=float)
    vec, est, ok = _power_iteration(a, tol)
    if ok and (vec > 0).all():
        x = tuple(Fraction(float(v)) for v in vec)
        lo, hi = collatz_wielandt(g, comp, x)
        if hi - lo <= Fraction(tol):
            return SpectralCertificate(lo, hi, "collatz-wielandt", {tuple(comp): x})
    p = char_poly(sub.int_matrix())
    iv = isolate_largest_root(p, Fraction(tol), hint=est)
    return SpectralCertificate(iv.lo, iv.hi, "sturm-isolated", p.coeffs)


def spectral_radius(g: LabeledGraph, tol: float = DEFAULT_TOL) -> SpectralCertificate:
    """Certified enclosure of rho(g) with width at most ``tol``.

    Disconnected graphs are handled per component and the maximal enclosure is
    returned. A component where the Collatz-Wielandt bounds cannot be pushed
    below ``tol`` in double precision falls back to Sturm isolation.
    """
    certs = [_component_certificate(g, comp, tol) for comp in g.components()]
    lo = max(c.lo for c in certs)
    hi = max(c.hi for c in certs)
    if all(c.method == "collatz-wielandt" for c in certs):
        witness: dict = {}
        for c in certs:
            witness.update(c.witness)
        return SpectralCertificate(lo, hi, "collatz-wielandt", witness)
    if len(certs) == 1:
        return certs[0]
    p = char_poly(g.int_matrix())
    iv = isolate_largest_root(p, Fraction(tol), hint=float(hi))
    return SpectralCertificate(iv.lo, iv.hi, "sturm-isolated", p.coeffs)


def recheck_certificate(g: LabeledGraph, cert: SpectralCertificate) -> bool:
    """Re-derive lo/hi from the stored witness."""
    if cert.method == "collatz-wielandt":
        comps = g.components()
        if sorted(cert.witness) != sorted(tuple(c) for c in comps):
            return False
        bounds = [
            collatz_wielandt(g, comp, cert.witness[comp]) if len(comp) > 1 else (Fraction(0), Fraction(0))
            for comp in cert.witness
        ]
        if any(min(x) <= 0 for x in cert.witness.values()):
            return False
        return max(b[0] for b in bounds) == cert.lo and max(b[1] for b in bounds) == cert.hi
    if cert.method == "sturm-isolated":
        iv = RootInterval(cert.lo, cert.hi)
        counter = SturmCounter(cert.witness)
        if iv.exact:
            return counter.is_root(iv.lo) and counter.above(iv.lo) == 0
        return counter.above(iv.lo) == 1 and counter.above(iv.hi) == 0
    return False


def perron_vector(g: LabeledGraph, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Positive unit Perron vector of a connected graph (index i is vertex i+1)."""
    if not g.is_connected():
        raise SpectralError("Perron vector requested for a disconnected graph")
    a = g.adjacency_matrix(dtype=float)
    if g.n == 1:
        return np.ones(1)
    vec, rho, ok = _power_iteration(a, tol)
    if not ok:
        # slow power convergence; polish the eigensolver's vector instead
        w, v = np.linalg.eigh(a)
        vec = np.abs(v[:, -1])
        rho = float(w[-1])
    vec = vec / np.linalg.norm(vec)
    resid = np.abs(a @ vec - rho * vec).max()
    if resid > tol * max(rho, 1.0) or not (vec > 0).all():
        raise SpectralError(f"Perron residual {resid:.3e} exceeds tolerance")
    return vec


# -- quotient matrices ------------------------------------------------------------


@dataclass(frozen=True)
class QuotientMatrix:
    b: tuple[tuple[int, ...], ...]
    parts: tuple[tuple[int, ...], ...]

    def char_poly(self) -> CharPoly:
        return char_poly(self.b)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.b]


def quotient_matrix(g: LabeledGraph, parts: Sequence[Sequence[int]]) -> QuotientMatrix:
    """Quotient of an equitable partition; every vertex is checked."""
    flat = [v for p in parts for v in p]
    if sorted(flat) != list(g.vertices) or any(len(p) == 0 for p in parts):
        raise SpectralError("parts must partition 1..n into non-empty blocks")
    owner = {v: i for i, p in enumerate(parts) for v in p}
    s = len(parts)
    b = [[0] * s for _ in range(s)]
    for i, part in enumerate(parts):
        for idx, v in enumerate(part):
            counts = [0] * s
            for w in g.neighbors(v):
                counts[owner[w]] += 1
            if idx == 0:
                b[i] = counts
            elif counts != b[i]:
                j = next(j for j in range(s) if counts[j] != b[i][j])
                raise SpectralError(
                    f"partition not equitable: vertex {v} of part {i} has {counts[j]} "
                    f"neighbours in part {j}, vertex {part[0]} has {b[i][j]}"
                )
    return QuotientMatrix(tuple(tuple(r) for r in b), tuple(tuple(p) for p in parts))


# -- comparison -------------------------------------------------------------------


def compare_radius(
    g: LabeledGraph,
    h: LabeledGraph,
    *,
    force_exact: bool = False,
    tol: float = DEFAULT_TOL,
) -> Comparison:
    """Certified trichotomy for rho(g) versus rho(h)."""
    return compare_radius_detailed(g, h, force_exact=force_exact, tol=tol)[0]


def compare_radius_detailed(
    g: LabeledGraph,
    h: LabeledGraph,
    *,
    force_exact: bool = False,
    tol: float = DEFAULT_TOL,
) -> tuple[Comparison, str]:
    """As :func:`compare_radius`, also naming the path that decided (``fast``/``exact``)."""
    cg = spectral_radius(g, tol)
    ch = spectral_radius(h, tol)
    if not force_exact:
        if cg.hi < ch.lo:
            return Comparison.LESS, "fast"
        if ch.hi < cg.lo:
            return Comparison.GREATER, "fast"
    if g.edge_count == 0 or h.edge_count == 0:
        # rho = 0 exactly for an edgeless graph, > 0 otherwise
        return Comparison.from_sign((g.edge_count > 0) - (h.edge_count > 0)), "exact"
    pg = char_poly(g.int_matrix()).coeffs
    ph = char_poly(h.int_matrix()).coeffs
    s = compare_largest_roots(pg, ph, float(cg.hi), float(ch.hi))
    return Comparison.from_sign(s), "exact"


def hnk_quotient(n: int, k: int) -> QuotientMatrix:
    return quotient_matrix(hnk(n, k), hnk_parts(n, k))


def hnk_radius(n: int, k: int, precision: float | Fraction = DEFAULT_TOL) -> RootInterval:
    """Enclosure of rho(H_{n,k}) from its three-part quotient (exact n-2 when k = 1)."""
    if not 1 <= k < n:
        raise SpectralError(f"need 1 <= k < n, got n={n}, k={k}")
    if k == 1:
        return RootInterval(Fraction(n - 2), Fraction(n - 2))
    p = hnk_quotient(n, k).char_poly()
    est = max(r.real for r in np.roots(p.descending()) if abs(r.imag) < 1e-9)
    return isolate_largest_root(p, Fraction(precision), hint=float(est))
