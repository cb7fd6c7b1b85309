"""Concrete prime systems realized as norm spectra.

Two built-in systems:

  * rational primes, norm N(p) = p, every multiplicity 1;
  * the primitive geodesic length spectrum of the modular group, where the
    norm attached to an integer trace t >= 3 is N_t = ((t + sqrt(t^2-4))/2)^2
    and the primitive multiplicity comes from class numbers h+(t^2 - 4) with
    proper powers peeled off.

A spectrum stores float64 norms for arithmetic plus an exact integer (or
Fraction) key per entry, so that coincidences between prime-power values are
decided exactly: the k-th power of the trace-t norm corresponds to the trace
t_k given by t_1 = t, t_2 = t^2 - 2, t_{k+1} = t * t_k - t_{k-1}, and power
equality is integer equality of traces, never a float comparison.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy.integrate import quad

from . import _quadforms
from .errors import (
    DomainError,
    EmptySpectrumError,
    IncompleteSpectrumError,
    InvalidDiscriminantError,
)

SPECTRUM_FORMAT_VERSION = 1

# exact-key kinds
KIND_RATIONAL = "rational"  # key is an int or Fraction equal to the norm
KIND_TRACE = "trace"        # key is the integer trace t, norm = ((t+sqrt(t^2-4))/2)^2

MODULAR_NHAT = (7.0 + 3.0 * math.sqrt(5.0)) / 2.0


def trace_power(t: int, k: int) -> int:
    """Trace of the k-th power of a matrix with trace t (|t| > 2)."""
    if k == 1:
        return t
    prev, cur = 2, t
    for _ in range(k - 1):
        prev, cur = cur, t * cur - prev
    return cur


def norm_from_trace(t: int) -> float:
    eps = (t + math.sqrt(t * t - 4.0)) / 2.0
    return eps * eps


def log_norm_from_trace(t: int) -> float:
    # log N_t = 2 arcosh(t/2)
    return 2.0 * math.acosh(t / 2.0)


@dataclass(frozen=True)
class PrimePowerTerm:
    base_norm: float
    k: int
    value: float
    multiplicity: int
    log_base: float
    key: tuple = field(default=(), compare=False)


class NormSpectrum:
    """Sorted multiset of (norm, multiplicity) pairs, complete below `bound`."""

    def __init__(self, norms, mults, keys, kind: str, bound: float, label: str):
        norms = np.asarray(norms, dtype=float)
        mults = np.asarray(mults, dtype=np.int64)
        if norms.size == 0:
            raise EmptySpectrumError(f"{label}: no entries below bound {bound}")
        if norms.size != mults.size or len(keys) != norms.size:
            raise ValueError("norms, mults and keys must have equal length")
        if not np.all(norms > 1.0):
            raise ValueError("all norms must exceed 1")
        if not np.all(np.diff(norms) > 0):
            raise ValueError("norms must be strictly increasing")
        if not np.all(mults >= 1):
            raise ValueError("multiplicities must be >= 1")
        self.norms = norms
        self.mults = mults
        self.keys = list(keys)
        self.kind = kind
        self.bound = float(bound)
        self.label = label
        self._cum_m = np.concatenate(([0], np.cumsum(mults)))
        self._cum_m2 = np.concatenate(([0], np.cumsum(mults * mults)))

    @property
    def nhat(self) -> float:
        return float(self.norms[0])

    @property
    def entries(self):
        return list(zip(self.norms.tolist(), self.mults.tolist()))

    def __len__(self) -> int:
        return int(self.norms.size)

    def __repr__(self) -> str:
        return (f"NormSpectrum({self.label!r}, {len(self)} norms < "
                f"{self.bound!r}, nhat={self.nhat:.6f})")

    def power_key(self, index: int, k: int):
        """Exact identity of norms[index]**k, comparable across entries."""
        if self.kind == KIND_TRACE:
            return (KIND_TRACE, trace_power(self.keys[index], k))
        return (KIND_RATIONAL, self.keys[index] ** k)

    def power_value(self, index: int, k: int) -> float:
        """norms[index]**k recomputed from the exact key at full precision."""
        if self.kind == KIND_TRACE:
            return norm_from_trace(trace_power(self.keys[index], k))
        return float(self.keys[index] ** k)

    def log_norm(self, index: int) -> float:
        if self.kind == KIND_TRACE:
            return log_norm_from_trace(self.keys[index])
        return math.log(self.norms[index])

    def exact_log(self, key, dps: int = 50):
        """High-precision log of the norm identified by a power key."""
        kind, payload = key
        with mpmath.workdps(dps):
            if kind == KIND_TRACE:
                t = mpmath.mpf(payload)
                return 2 * mpmath.acosh(t / 2)
            frac = Fraction(payload)
            return mpmath.log(mpmath.mpf(frac.numerator) / mpmath.mpf(frac.denominator))


# ----------------------------------------------------------------- sieving

def _sieve(n: int) -> np.ndarray:
    """Primes <= n via a boolean Eratosthenes sieve."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def rational_primes(limit: float) -> NormSpectrum:
    """Spectrum of rational primes below `limit`, every multiplicity 1."""
    if limit <= 2:
        raise EmptySpectrumError(f"no primes below {limit}")
    top = math.ceil(limit) - 1  # largest integer strictly below limit
    primes = _sieve(top)
    return NormSpectrum(
        norms=primes.astype(float),
        mults=np.ones(primes.size, dtype=np.int64),
        keys=[int(p) for p in primes],
        kind=KIND_RATIONAL,
        bound=float(limit),
        label="rational_primes",
    )


# ------------------------------------------------------------ class numbers

class ClassNumberCache:
    """Disk-backed memo of D -> h+(D), one `D<TAB>h` line per entry."""

    def __init__(self, path: str | None = None):
        self.path = path
        self.table: dict[int, int] = {}
        if path and os.path.exists(path):
            with open(path, "r", encoding="ascii") as fh:
                for line in fh:
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    d_str, h_str = line.split("\t")
                    self.table[int(d_str)] = int(h_str)

    def flush(self) -> None:
        if not self.path:
            return
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            for d in sorted(self.table):
                fh.write(f"{d}\t{self.table[d]}\n")
        os.replace(tmp, self.path)


def class_number(D: int, cache: ClassNumberCache | None = None) -> int:
    """Form class number h+(D) of primitive indefinite binary quadratic
    forms of discriminant D, counted as reduction cycles."""
    if D != int(D) or D <= 0:
        raise InvalidDiscriminantError(f"discriminant must be a positive integer, got {D}")
    D = int(D)
    if D % 4 not in (0, 1):
        raise InvalidDiscriminantError(f"D={D} is not 0 or 1 mod 4")
    r = math.isqrt(D)
    if r * r == D:
        raise InvalidDiscriminantError(f"D={D} is a perfect square")
    if cache is not None and D in cache.table:
        return cache.table[D]
    h = _quadforms.class_number_raw(D)
    if cache is not None:
        cache.table[D] = h
    return h


def _trace_class_total(t: int, cache: ClassNumberCache | None) -> int:
    """Number of conjugacy classes (primitive or not) with trace t.

    A class of trace t and invariant discriminant D satisfies t^2 - D v^2 = 4
    for some v >= 1, so D runs over the quotients (t^2 - 4) / v^2 that are
    congruent to 0 or 1 mod 4, each contributing h+(D) classes.
    """
    d_full = t * t - 4
    total = 0
    v = 1
    while v * v <= d_full // 5:
        if d_full % (v * v) == 0:
            d = d_full // (v * v)
            if d % 4 in (0, 1):
                total += class_number(d, cache)
        v += 1
    return total


def modular_group_spectrum(limit: float, cache: ClassNumberCache | None = None) -> NormSpectrum:
    """Primitive geodesic length spectrum of the modular group, as norms.

    Traces t >= 3 contribute the norm N_t < limit with the total class count
    of trace t; the primitive multiplicity removes proper powers via
    m_prim(N) = m_all(N) - sum of m_prim(M) over exact power roots M of N.
    """
    if limit <= 7:
        raise EmptySpectrumError(
            f"limit {limit} does not admit the spectrum head (need limit > 7)")
    traces = []
    t = 3
    while norm_from_trace(t) < limit:
        traces.append(t)
        t += 1
    t_max = traces[-1]
    m_prim = {}
    for t0 in traces:
        m_prim[t0] = _trace_class_total(t0, cache)
    for t0 in traces:
        k = 2
        while True:
            tk = trace_power(t0, k)
            if tk > t_max:
                break
            m_prim[tk] -= m_prim[t0]
            k += 1
    if cache is not None:
        cache.flush()
    mults = np.array([m_prim[t] for t in traces], dtype=np.int64)
    if np.any(mults < 1):
        bad = traces[int(np.argmin(mults))]
        raise AssertionError(f"power peeling produced multiplicity < 1 at trace {bad}")
    return NormSpectrum(
        norms=np.array([norm_from_trace(t) for t in traces]),
        mults=mults,
        keys=traces,
        kind=KIND_TRACE,
        bound=float(limit),
        label="modular_geodesics",
    )


def synthetic_spectrum(norms, mults, bound: float, label: str = "synthetic") -> NormSpectrum:
    """Spectrum from explicit (norm, multiplicity) data; norms are taken as
    exact rationals via Fraction, so power coincidences stay decidable."""
    keys = []
    for n in norms:
        f = Fraction(n)  # exact, also for floats (binary expansion)
        keys.append(f.numerator if f.denominator == 1 else f)
    return NormSpectrum(
        norms=np.asarray(norms, dtype=float),
        mults=mults,
        keys=keys,
        kind=KIND_RATIONAL,
        bound=bound,
        label=label,
    )


# ------------------------------------------------------------- operations

def prime_powers(spec: NormSpectrum, cutoff: float) -> list[PrimePowerTerm]:
    """All prime-power terms (N, k) with N in the spectrum and N^k < cutoff,
    sorted by value."""
    if cutoff > spec.bound:
        raise IncompleteSpectrumError(
            f"cutoff {cutoff} exceeds certified bound {spec.bound} of {spec.label}")
    terms = []
    for i in range(len(spec)):
        base = float(spec.norms[i])
        if base >= cutoff:
            break
        mult = int(spec.mults[i])
        logb = spec.log_norm(i)
        k = 1
        while True:
            value = spec.power_value(i, k)
            if value >= cutoff:
                break
            terms.append(PrimePowerTerm(
                base_norm=base, k=k, value=value, multiplicity=mult,
                log_base=logb, key=spec.power_key(i, k)))
            k += 1
    terms.sort(key=lambda t: (t.value, t.k, t.base_norm))
    return terms


def second_moment(spec: NormSpectrum, x: float) -> int:
    """Sum of m(N)^2 over distinct norms N < x."""
    if x > spec.bound:
        raise IncompleteSpectrumError(
            f"x={x} exceeds certified bound {spec.bound} of {spec.label}")
    idx = int(np.searchsorted(spec.norms, x, side="left"))
    return int(spec._cum_m2[idx])


def prime_count(spec: NormSpectrum, x: float) -> int:
    """Sum of m(N) over distinct norms N < x."""
    if x > spec.bound:
        raise IncompleteSpectrumError(
            f"x={x} exceeds certified bound {spec.bound} of {spec.label}")
    idx = int(np.searchsorted(spec.norms, x, side="left"))
    return int(spec._cum_m[idx])


def li(x: float, rel_tol: float = 1e-12) -> float:
    """Logarithmic integral from 2 to x by adaptive quadrature."""
    if x < 2:
        raise DomainError(f"li is defined from 2, got x={x}")
    if x == 2:
        return 0.0
    value, _ = quad(lambda t: 1.0 / math.log(t), 2.0, x,
                    epsabs=0.0, epsrel=rel_tol, limit=400)
    return value


def prime_count_vs_li(spec: NormSpectrum, x: float) -> tuple[int, float]:
    """Counting function against its principal term."""
    if x < 2:
        raise DomainError(f"need x >= 2, got {x}")
    return prime_count(spec, x), li(x)


# ------------------------------------------------------------- cache files

def write_spectrum(spec: NormSpectrum, path: str) -> None:
    """Serialize a spectrum: header, then `norm<TAB>mult<TAB>key` records.

    Norms use repr (shortest exact round trip), so reading the file back
    reproduces the in-memory float64 values bit for bit.
    """
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write(f"#zetalab-spectrum\tv{SPECTRUM_FORMAT_VERSION}\t{spec.label}\t"
                 f"{spec.bound!r}\t{spec.kind}\n")
        for norm, mult, key in zip(spec.norms, spec.mults, spec.keys):
            fh.write(f"{float(norm)!r}\t{int(mult)}\t{key}\n")
    os.replace(tmp, path)


def read_spectrum(path: str) -> NormSpectrum:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split("\t")
        if len(parts) != 5 or parts[0] != "#zetalab-spectrum":
            raise ValueError(f"{path}: not a spectrum cache file")
        _, version, label, bound_str, kind = parts
        if version != f"v{SPECTRUM_FORMAT_VERSION}":
            raise ValueError(f"{path}: unsupported format {version}")
        norms, mults, keys = [], [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            norm_str, mult_str, key_str = line.split("\t")
            norms.append(float(norm_str))
            mults.append(int(mult_str))
            if kind == KIND_TRACE:
                keys.append(int(key_str))
            else:
                keys.append(int(key_str) if "/" not in key_str else Fraction(key_str))
        return NormSpectrum(norms, mults, keys, kind, float(bound_str), label)
