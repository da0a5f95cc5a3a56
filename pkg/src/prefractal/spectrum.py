"""Spectra of the interval Dirac operators attached to curve systems.

A curve of length L contributes eigenvalues pi*(k+1/2)/L for integer k,
so everything here reduces to half-integer lattice counts. Counting never
materializes eigenvalues: N is a sum of closed-form floors, evaluated
with two-sided rational bounds on pi so that no floor can flip through
float noise. Enumeration materializes values only under a size guard.

The log-log slope of N over a cutoff grid estimates the dimension; the
gasket curve system targets log(3)/log(2), a single interval targets 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

ENUMERATION_GUARD = 10**7


def _arctan_inv_bounds(x: int, terms: int):
    """Bracketing partial sums of arctan(1/x); alternating and decreasing."""
    lo = hi = None
    s = Fraction(0)
    for k in range(terms):
        term = Fraction((-1) ** k, (2 * k + 1) * x ** (2 * k + 1))
        s += term
        if k % 2 == 0:
            hi = s
        else:
            lo = s
    if lo is None or hi is None or hi - lo > Fraction(1, 10**41):
        raise RuntimeError("arctan bracket too loose; raise term count")
    return lo, hi


def _pi_bounds():
    # 16*arctan(1/5) - 4*arctan(1/239), tight two-sided rational bracket
    a_lo, a_hi = _arctan_inv_bounds(5, 34)
    b_lo, b_hi = _arctan_inv_bounds(239, 12)
    lo = 16 * a_lo - 4 * b_hi
    hi = 16 * a_hi - 4 * b_lo
    if not lo < hi or hi - lo > Fraction(1, 10**40):
        raise RuntimeError("pi bracket failed its width check")
    if not (float(lo) <= math.pi <= float(hi) or abs(float(lo) - math.pi) < 1e-15):
        raise RuntimeError("pi bracket disagrees with float pi")
    return lo, hi


PI_LOWER, PI_UPPER = _pi_bounds()


def mode_count(length, cutoff) -> int:
    """Number of eigenvalues of the length-L interval operator in [-c, c].

    Equals 2*floor(c*L/pi + 1/2); the floor is decided with both pi
    bounds and rejected in the (practically unreachable) case where the
    argument sits inside the pi bracket of a half-integer.
    """
    lam = Fraction(length)
    cut = Fraction(cutoff)
    if lam <= 0:
        raise ValueError("curve length must be positive, got %s" % length)
    if cut < 0:
        raise ValueError("cutoff must be nonnegative, got %s" % cutoff)
    x2 = 2 * cut * lam
    n_lo = (x2 + PI_LOWER) / (2 * PI_UPPER)
    n_hi = (x2 + PI_UPPER) / (2 * PI_LOWER)
    f_lo = n_lo.numerator // n_lo.denominator
    f_hi = n_hi.numerator // n_hi.denominator
    if f_lo != f_hi:
        raise ValueError(
            "cutoff*length/pi is within the pi bracket of a half-integer; "
            "the mode count is not decidable at this precision"
        )
    return 2 * f_lo


def interval_spectrum(length, cutoff, guard: int = ENUMERATION_GUARD) -> np.ndarray:
    """Sorted eigenvalues pi*(k+1/2)/length in [-cutoff, cutoff]."""
    count = mode_count(length, cutoff)
    if count > guard:
        raise ValueError("enumeration of %d eigenvalues exceeds guard %d"
                         % (count, guard))
    half = count // 2
    if half == 0:
        return np.empty(0)
    pos = math.pi * (np.arange(half) + 0.5) / float(length)
    return np.concatenate([-pos[::-1], pos])


class SpectrumSpec:
    """Curve-length multiset defining a direct-sum Dirac operator.

    entries: list of (length, multiplicity). A spec may instead be the
    full gasket limit: levels are then generated on demand, stopping at
    the level whose per-curve count at the working cutoff is zero
    (lengths below pi/(2*cutoff) contribute nothing).
    """

    def __init__(self, entries=None, infinite_gasket: bool = False, label: str = ""):
        self.infinite_gasket = infinite_gasket
        self.label = label
        if infinite_gasket:
            self.entries = None
            return
        self.entries = []
        for length, mult in entries:
            if Fraction(length) <= 0:
                raise ValueError("curve length must be positive, got %s" % length)
            if mult < 1 or mult != int(mult):
                raise ValueError("multiplicity must be a positive integer, got %s"
                                 % mult)
            self.entries.append((length, int(mult)))
        if not self.entries:
            raise ValueError("spectrum spec needs at least one curve")

    @classmethod
    def single(cls, length=1) -> "SpectrumSpec":
        return cls([(length, 1)], label="single interval")

    @classmethod
    def gasket(cls, level: int) -> "SpectrumSpec":
        entries = [(Fraction(1, 2**m), 3 ** (m + 1)) for m in range(level + 1)]
        return cls(entries, label="gasket level %d" % level)

    @classmethod
    def gasket_limit(cls) -> "SpectrumSpec":
        return cls(infinite_gasket=True, label="gasket limit")

    @classmethod
    def from_lengths(cls, lengths, label: str = "") -> "SpectrumSpec":
        seen = {}
        for lam in lengths:
            seen[lam] = seen.get(lam, 0) + 1
        return cls(sorted(seen.items(), reverse=True), label=label)

    def entries_for(self, cutoff):
        """Concrete (length, multiplicity) list at a working cutoff."""
        if not self.infinite_gasket:
            return list(self.entries)
        out = []
        m = 0
        while True:
            lam = Fraction(1, 2**m)
            if mode_count(lam, cutoff) == 0:
                break
            out.append((lam, 3 ** (m + 1)))
            m += 1
        return out

    def curve_count(self, cutoff=None):
        entries = self.entries_for(cutoff) if self.infinite_gasket else self.entries
        return sum(mult for _, mult in entries)


def counting_function(spec: SpectrumSpec, grid) -> list[tuple[float, int]]:
    """Exact (cutoff, eigenvalue count) pairs over an increasing grid."""
    grid = list(grid)
    if any(g <= 0 for g in grid):
        raise ValueError("cutoff grid must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("cutoff grid must be strictly increasing")
    out = []
    for cut in grid:
        total = sum(mult * mode_count(lam, cut)
                    for lam, mult in spec.entries_for(cut))
        out.append((float(cut), total))
    return out


@dataclass
class EigenvalueEnumeration:
    """Distinct absolute eigenvalues <= cutoff with multiplicities."""

    cutoff: float
    values: np.ndarray  # distinct positive magnitudes, ascending
    multiplicities: np.ndarray  # combined weight of +v and -v

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum())

    def signed(self) -> np.ndarray:
        """Full symmetric spectrum, one entry per eigenvalue with multiplicity."""
        reps = self.multiplicities // 2
        pos = np.repeat(self.values, reps)
        return np.concatenate([-pos[::-1], pos])

    def count_leq(self, cutoff: float) -> int:
        return int(self.multiplicities[self.values <= cutoff].sum())


def enumerate_eigenvalues(spec: SpectrumSpec, cutoff,
                          guard: int = ENUMERATION_GUARD) -> EigenvalueEnumeration:
    """Materialize the spectrum up to a cutoff (guarded; zero never occurs)."""
    entries = spec.entries_for(cutoff)
    total = sum(mult * mode_count(lam, cutoff) for lam, mult in entries)
    if total > guard:
        raise ValueError("enumeration of %d eigenvalues exceeds guard %d"
                         % (total, guard))
    buckets = {}
    for lam, mult in entries:
        half = mode_count(lam, cutoff) // 2
        for k in range(half):
            v = math.pi * (k + 0.5) / float(lam)
            buckets[v] = buckets.get(v, 0) + 2 * mult
    values = np.array(sorted(buckets))
    mults = np.array([buckets[v] for v in values], dtype=int)
    if values.size and values[0] <= 0:
        raise AssertionError("zero or negative magnitude in enumeration")
    return EigenvalueEnumeration(float(cutoff), values, mults)


@dataclass
class DimensionFit:
    slope: float
    intercept: float
    stderr: float
    grid: np.ndarray
    counts: np.ndarray
    residuals: np.ndarray
    spec_label: str

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "stderr": self.stderr,
            "grid": self.grid.tolist(),
            "counts": self.counts.tolist(),
            "residuals": self.residuals.tolist(),
            "spec": self.spec_label,
        }


def dimension_fit(spec: SpectrumSpec, lam_min, lam_max,
                  grid_size: int = 40) -> DimensionFit:
    """Least-squares slope of log N against log cutoff on a log-uniform grid.

    The slope estimates the growth exponent of the counting function; the
    gasket limit targets log(3)/log(2), one interval targets 1.
    """
    if grid_size < 2:
        raise ValueError("grid must have at least two points")
    if not float(lam_min) >= float(PI_LOWER):
        raise ValueError("lower cutoff %s is below pi; counts can vanish"
                         % lam_min)
    if not float(lam_max) > float(lam_min):
        raise ValueError("degenerate cutoff range")
    grid = np.exp(np.linspace(math.log(float(lam_min)),
                              math.log(float(lam_max)), grid_size))
    table = counting_function(spec, grid.tolist())
    counts = np.array([n for _, n in table], dtype=float)
    if (counts <= 0).any():
        raise ValueError("counting function vanished inside the fit window")
    x = np.log(grid)
    y = np.log(counts)
    a = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = y - a.dot(coef)
    dof = max(len(x) - 2, 1)
    var = float(resid.dot(resid)) / dof
    sxx = float(((x - x.mean()) ** 2).sum())
    stderr = math.sqrt(var / sxx) if sxx > 0 else float("inf")
    return DimensionFit(slope, intercept, stderr, grid, counts.astype(int),
                        resid, spec.label)


def _half_integer_zeta(s: float, tol: float = 1e-12) -> float:
    """Sum of (k+1/2)^(-s) for k >= 0, to absolute tolerance tol.

    Partial sum plus integral tail K^(1-s)/(s-1); the tail is a midpoint
    rule for the integral, so its error is bounded by s*K^(-s-1)/24,
    and K doubles until that bound is below tol.
    """
    k_tail = 64
    while s * k_tail ** (-s - 1) / 24 > tol:
        k_tail *= 2
        if k_tail > 2**26:
            raise ValueError("mode-sum tolerance unreachable for s=%s" % s)
    ks = np.arange(k_tail) + 0.5
    partial = math.fsum((ks ** (-s)).tolist())
    tail = k_tail ** (1 - s) / (s - 1)
    return partial + tail


@dataclass
class ZetaPartial:
    value: float
    s: float
    curves_included: int
    mode_tol: float
    spec_label: str


def zeta_partial(spec: SpectrumSpec, s: float, max_curves: int | None = None,
                 mode_tol: float = 1e-12) -> ZetaPartial:
    """Partial sum of |eigenvalue|^(-s) over the first curves of the spec.

    Per curve the mode sum is closed-form-accelerated; curves are taken in
    spec order until max_curves is reached. For the gasket limit a cap is
    required, since level contributions grow like (3*2^(-s))^level.
    """
    if not s > 1:
        raise ValueError("mode sums diverge for s <= 1, got s=%s" % s)
    if spec.infinite_gasket:
        if max_curves is None:
            raise ValueError("the gasket limit needs an explicit curve cap")
        entries = []
        m = 0
        while sum(mult for _, mult in entries) < max_curves:
            entries.append((Fraction(1, 2**m), 3 ** (m + 1)))
            m += 1
    else:
        entries = list(spec.entries)
    base = _half_integer_zeta(s, mode_tol)
    total = 0.0
    included = 0
    terms = []
    for lam, mult in entries:
        take = mult
        if max_curves is not None:
            take = min(mult, max_curves - included)
            if take <= 0:
                break
        terms.append(take * 2 * (float(lam) / math.pi) ** s * base)
        included += take
    total = math.fsum(terms)
    return ZetaPartial(total, s, included, mode_tol, spec.label)
