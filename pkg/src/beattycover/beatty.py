"""Beatty sequences as multisets, representation counts and window scans.

A sequence S(alpha, beta) = {floor(n*alpha + beta) : n >= 1} with
modulus alpha > 0 is scanned through its dual parameters theta = 1/alpha
and gamma = -beta/alpha: the number of hits on an integer N is the count
of integers n in [N*theta + gamma, (N+1)*theta + gamma), clipped to
n >= 1.  That count is exact for every N, including the finitely many
indices where n*alpha + beta lands on an integer, because both interval
endpoints are resolved by certified ceilings rather than the open-
interval floor difference.

The window scanner cross-checks each count against the fractional-sum
identity r(N) = m + eps(N) - eps(N+1), where eps(N) is the sum of
fractional parts {N*theta_i + gamma_i}.  Scans over rational or
quadratic data run on pure integers (one integer square root per floor);
anchored or mixed-field data fall back to the generic certified path.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import (
    CertifiedReal,
    LinearExpr,
    PrecisionExhausted,
    QuadraticIrrational,
    RealLike,
    add,
    as_real,
    ceil_certified,
    ceil_scaled_quadratic,
    collapse,
    compare,
    div,
    floor_certified,
    floor_scaled_quadratic,
    frac_certified,
    mul,
    neg,
    real_from_json,
    real_to_json,
    sign,
    sub,
)


@dataclass(frozen=True)
class BeattySequence:
    """S(alpha, beta) with certified alpha > 0."""

    alpha: CertifiedReal
    beta: CertifiedReal = Fraction(0)

    def __post_init__(self) -> None:
        alpha = as_real(self.alpha)
        beta = as_real(self.beta)
        if sign(alpha) <= 0:
            raise ValueError("modulus alpha must be positive")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def homogeneous(self) -> bool:
        b = self.beta
        return isinstance(b, Fraction) and b == 0

    def to_json(self) -> dict:
        return {"alpha": real_to_json(self.alpha), "beta": real_to_json(self.beta)}

    @classmethod
    def from_json(cls, obj) -> "BeattySequence":
        if not isinstance(obj, dict) or set(obj) - {"alpha", "beta"}:
            raise ValueError("sequence objects carry exactly alpha and beta")
        if "alpha" not in obj:
            raise ValueError("sequence needs a modulus alpha")
        beta = real_from_json(obj["beta"]) if "beta" in obj else Fraction(0)
        return cls(real_from_json(obj["alpha"]), beta)


@dataclass(frozen=True)
class DualParameters:
    """theta = 1/alpha, gamma = -beta/alpha."""

    theta: CertifiedReal
    gamma: CertifiedReal


def dualize_sequence(seq: BeattySequence) -> DualParameters:
    theta = div(1, seq.alpha)
    beta = seq.beta
    if isinstance(beta, Fraction) and beta == 0:
        gamma: CertifiedReal = Fraction(0)
    else:
        gamma = neg(div(beta, seq.alpha))
    return DualParameters(theta, gamma)


@dataclass(frozen=True)
class CoverFamily:
    """A finite family of Beatty sequences with a target multiplicity m."""

    sequences: tuple[BeattySequence, ...]
    m: int

    def __post_init__(self) -> None:
        seqs = tuple(self.sequences)
        if not seqs:
            raise ValueError("a family needs at least one sequence")
        if self.m < 1:
            raise ValueError("target multiplicity m must be a positive integer")
        object.__setattr__(self, "sequences", seqs)

    @property
    def k(self) -> int:
        return len(self.sequences)

    def density_defect(self) -> CertifiedReal:
        total: CertifiedReal = Fraction(0)
        for s in self.sequences:
            total = add(total, div(1, s.alpha))
        return sub(total, self.m)

    def to_json(self) -> dict:
        return {"m": self.m, "sequences": [s.to_json() for s in self.sequences]}

    @classmethod
    def from_json(cls, obj) -> "CoverFamily":
        if not isinstance(obj, dict) or set(obj) != {"m", "sequences"}:
            raise ValueError("family objects carry exactly m and sequences")
        return cls(tuple(BeattySequence.from_json(s) for s in obj["sequences"]),
                   int(obj["m"]))


def dualize(family: CoverFamily) -> list[DualParameters]:
    return [dualize_sequence(s) for s in family.sequences]


# ---------------------------------------------------------------------------
# per-sequence evaluators
# ---------------------------------------------------------------------------


def _decompose_simple(x: CertifiedReal):
    """(a, b, d, r) integers with x = (a + b*sqrt(d))/r, or None."""
    x = collapse(x) if isinstance(x, LinearExpr) else x
    if isinstance(x, Fraction):
        return x.numerator, 0, 0, x.denominator
    if isinstance(x, QuadraticIrrational):
        return x.a, x.b, x.d, x.r
    return None


class _FastEval:
    """Integer-only evaluator of N*theta + gamma = (A(N) + B(N)*sqrt(d))/R."""

    __slots__ = ("At", "Bt", "Ag", "Bg", "d", "R")

    def __init__(self, theta, gamma):
        st = _decompose_simple(theta)
        sg = _decompose_simple(gamma)
        if st is None or sg is None:
            raise TypeError("not reducible to one quadratic field")
        at, bt, dt, rt = st
        ag, bg, dg, rg = sg
        if bt and bg and dt != dg:
            raise TypeError("theta and gamma live in different fields")
        self.d = dt if bt else dg
        self.R = rt * rg
        self.At, self.Bt = at * rg, bt * rg
        self.Ag, self.Bg = ag * rt, bg * rt

    def floor(self, n: int) -> int:
        return floor_scaled_quadratic(self.At * n + self.Ag,
                                      self.Bt * n + self.Bg, self.d, self.R)

    def ceil(self, n: int) -> int:
        return ceil_scaled_quadratic(self.At * n + self.Ag,
                                     self.Bt * n + self.Bg, self.d, self.R)

    def frac_scaled(self, n: int, fl: int) -> tuple[int, int]:
        """(P, B) with {n*theta + gamma} = (P + B*sqrt(d))/R, given the floor."""
        return self.At * n + self.Ag - fl * self.R, self.Bt * n + self.Bg

    def frac_value(self, n: int) -> CertifiedReal:
        fl = self.floor(n)
        p, b = self.frac_scaled(n, fl)
        if b == 0:
            return Fraction(p, self.R)
        return QuadraticIrrational(p, b, self.d, self.R)


class _GenericEval:
    """Certified evaluator for anchored or mixed-field dual parameters."""

    __slots__ = ("theta", "gamma", "max_bits")

    def __init__(self, theta, gamma, max_bits=None):
        self.theta = theta
        self.gamma = gamma
        self.max_bits = max_bits

    def _value(self, n: int) -> CertifiedReal:
        return add(mul(n, self.theta), self.gamma)

    def floor(self, n: int) -> int:
        return floor_certified(self._value(n), self.max_bits)

    def ceil(self, n: int) -> int:
        return ceil_certified(self._value(n), self.max_bits)

    def frac_value(self, n: int) -> CertifiedReal:
        return frac_certified(self._value(n), self.max_bits)


def _make_eval(dual: DualParameters, max_bits=None):
    try:
        return _FastEval(dual.theta, dual.gamma)
    except TypeError:
        return _GenericEval(dual.theta, dual.gamma, max_bits)


def _hits(ev, N: int) -> int:
    """Number of n >= 1 with floor(n*alpha + beta) == N."""
    lo = ev.ceil(N)
    hi = ev.ceil(N + 1)
    return max(0, hi - max(lo, 1))


def r_single(seq: BeattySequence, N: int, max_bits=None) -> int:
    """Multiplicity of N in S(alpha, beta); exact for every N >= 1."""
    return _hits(_make_eval(dualize_sequence(seq), max_bits), N)


def r_total(family: CoverFamily, N: int, max_bits=None) -> int:
    evs = [_make_eval(d, max_bits) for d in dualize(family)]
    return sum(_hits(ev, N) for ev in evs)


def epsilon(family: CoverFamily, N: int, max_bits=None) -> CertifiedReal:
    """Exact sum of fractional parts {N*theta_i + gamma_i}."""
    total: CertifiedReal = Fraction(0)
    for d in dualize(family):
        total = add(total, frac_certified(add(mul(N, d.theta), d.gamma), max_bits))
    return total


# ---------------------------------------------------------------------------
# window verification
# ---------------------------------------------------------------------------


@dataclass
class RepresentationProfile:
    """Scan results over an integer window.

    ``violations`` lists every N with r(N) != m.  ``identity_failures``
    lists every N where r(N) = m + eps(N) - eps(N+1) fails exactly; that
    can only happen at lattice boundary hits or when the reciprocal sum
    is not m, so acceptance scans expect it empty."""

    window: tuple[int, int]
    m: int
    values: dict[int, int] = field(default_factory=dict)
    epsilon_values: dict[int, CertifiedReal] = field(default_factory=dict)
    violations: list[int] = field(default_factory=list)
    identity_failures: list[int] = field(default_factory=list)

    @property
    def r_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.values.values()).items()))

    def first_violation(self) -> Optional[int]:
        return self.violations[0] if self.violations else None

    def to_json(self) -> dict:
        return {
            "window": [self.window[0], self.window[1]],
            "m": self.m,
            "violations": list(self.violations),
            "identity_failures": list(self.identity_failures),
            "r_histogram": {str(k): v for k, v in self.r_histogram.items()},
        }


def _scan_fast(family: CoverFamily, lo: int, hi: int, keep_epsilon: bool):
    """Integer-only scan; requires every dual pair in one quadratic field."""
    duals = dualize(family)
    evs = [_FastEval(d.theta, d.gamma) for d in duals]
    m = family.m
    R_star = 1
    for ev in evs:
        R_star = R_star * ev.R // math.gcd(R_star, ev.R)
    scale = [R_star // ev.R for ev in evs]

    values: dict[int, int] = {}
    eps_parts: dict[int, tuple[int, tuple[tuple[int, int], ...]]] = {}
    violations: list[int] = []
    identity_failures: list[int] = []

    fields = sorted({ev.d for ev in evs if ev.Bt or ev.Bg})

    def eps_repr(n: int, floors: list[int]):
        p_sum = 0
        b_sums = dict.fromkeys(fields, 0)
        for ev, s, fl in zip(evs, scale, floors):
            p, b = ev.frac_scaled(n, fl)
            p_sum += p * s
            if b:
                b_sums[ev.d] += b * s
        return p_sum, tuple(b_sums.items())

    floors_now = [ev.floor(lo) for ev in evs]
    eps_now = eps_repr(lo, floors_now)
    for N in range(lo, hi + 1):
        floors_next = [ev.floor(N + 1) for ev in evs]
        eps_next = eps_repr(N + 1, floors_next)
        r = 0
        for ev, fl_now, fl_next in zip(evs, floors_now, floors_next):
            b_now = ev.Bt * N + ev.Bg
            lo_c = fl_now + 1 if b_now else -((-(ev.At * N + ev.Ag)) // ev.R)
            b_next = ev.Bt * (N + 1) + ev.Bg
            hi_c = fl_next + 1 if b_next else -((-(ev.At * (N + 1) + ev.Ag)) // ev.R)
            r += max(0, hi_c - max(lo_c, 1))
        values[N] = r
        if keep_epsilon:
            eps_parts[N] = eps_now
        if r != m:
            violations.append(N)
        # identity: eps(N) - eps(N+1) == (r - m) exactly
        p_now, b_now_t = eps_now
        p_next, b_next_t = eps_next
        if b_now_t != b_next_t or p_now - p_next != (r - m) * R_star:
            identity_failures.append(N)
        floors_now, eps_now = floors_next, eps_next

    eps_values: dict[int, CertifiedReal] = {}
    if keep_epsilon:
        for N, (p, bs) in eps_parts.items():
            val: CertifiedReal = Fraction(p, R_star)
            for d, b in bs:
                if b:
                    val = add(val, QuadraticIrrational(0, b, d, R_star))
            eps_values[N] = val
    return values, eps_values, violations, identity_failures


def _scan_generic(family: CoverFamily, lo: int, hi: int, keep_epsilon: bool,
                  max_bits=None):
    duals = dualize(family)
    evs = [_GenericEval(d.theta, d.gamma, max_bits) for d in duals]
    m = family.m
    values: dict[int, int] = {}
    eps_values: dict[int, CertifiedReal] = {}
    violations: list[int] = []
    identity_failures: list[int] = []

    def eps_at(n: int) -> CertifiedReal:
        total: CertifiedReal = Fraction(0)
        for ev in evs:
            total = add(total, ev.frac_value(n))
        return total

    eps_now = eps_at(lo)
    for N in range(lo, hi + 1):
        try:
            r = sum(_hits(ev, N) for ev in evs)
            eps_next = eps_at(N + 1)
        except PrecisionExhausted as e:
            raise PrecisionExhausted(f"at N = {N}: {e}") from e
        values[N] = r
        if keep_epsilon:
            eps_values[N] = eps_now
        if r != m:
            violations.append(N)
        diff = sub(eps_now, eps_next)
        if compare(diff, Fraction(r - m)) != 0:
            identity_failures.append(N)
        eps_now = eps_next
    return values, eps_values, violations, identity_failures


def _scan_range(family: CoverFamily, lo: int, hi: int, keep_epsilon: bool,
                max_bits=None):
    try:
        return _scan_fast(family, lo, hi, keep_epsilon)
    except TypeError:
        return _scan_generic(family, lo, hi, keep_epsilon, max_bits)


def _scan_chunk(args):
    family, lo, hi, keep_epsilon, max_bits = args
    return _scan_range(family, lo, hi, keep_epsilon, max_bits)


def verify_window(family: CoverFamily, n_lo: int, n_hi: int, *,
                  jobs: int = 1, keep_epsilon: bool = True,
                  max_bits: Optional[int] = None) -> RepresentationProfile:
    """Scan r(N) over [n_lo, n_hi], reporting every N with r(N) != m and
    cross-checking the fractional-sum identity at each N.

    The window may be partitioned across processes; chunk results merge
    in window order, so the profile is independent of ``jobs``."""
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError("window must satisfy 1 <= n_lo <= n_hi")
    profile = RepresentationProfile((n_lo, n_hi), family.m)
    if jobs <= 1 or (n_hi - n_lo) < 4 * jobs:
        chunks = [(family, n_lo, n_hi, keep_epsilon, max_bits)]
        results = [_scan_chunk(chunks[0])]
    else:
        bounds = []
        step = (n_hi - n_lo + 1 + jobs - 1) // jobs
        start = n_lo
        while start <= n_hi:
            end = min(start + step - 1, n_hi)
            bounds.append((family, start, end, keep_epsilon, max_bits))
            start = end + 1
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_chunk, bounds))
    for values, eps_values, violations, identity_failures in results:
        profile.values.update(values)
        profile.epsilon_values.update(eps_values)
        profile.violations.extend(violations)
        profile.identity_failures.extend(identity_failures)
    profile.violations.sort()
    profile.identity_failures.sort()
    return profile


# ---------------------------------------------------------------------------
# equidistribution diagnostic
# ---------------------------------------------------------------------------


def discrepancy_diagnostic(theta: RealLike, N: int,
                           max_bits: Optional[int] = None) -> Fraction:
    """Star discrepancy estimate of the points {n*theta}, n = 1..N.

    Rational theta is handled with exact fractions.  Irrational theta is
    keyed by floor(2^64 * {n*theta}), an exactly computed integer, which
    bounds the reported value within 2^-64 of the true discrepancy; no
    sampling or floating point is involved."""
    if N < 1:
        raise ValueError("N must be positive")
    theta = as_real(theta)
    if isinstance(theta, Fraction):
        pts = sorted(Fraction((n * theta.numerator) % theta.denominator,
                              theta.denominator) for n in range(1, N + 1))
        best = Fraction(0)
        for i, x in enumerate(pts, start=1):
            best = max(best, Fraction(i, N) - x, x - Fraction(i - 1, N))
        return best
    scale = 1 << 64
    dec = _decompose_simple(theta)
    keys = []
    if dec is not None:
        a, b, d, r = dec
        for n in range(1, N + 1):
            fl = floor_scaled_quadratic(a * n, b * n, d, r)
            keys.append(floor_scaled_quadratic((a * n - fl * r) * scale,
                                               b * n * scale, d, r))
    else:
        for n in range(1, N + 1):
            f = frac_certified(mul(n, theta), max_bits)
            keys.append(floor_certified(mul(f, Fraction(scale)), max_bits))
    keys.sort()
    # maximise i/N - k/scale and k/scale - (i-1)/N over integers
    best_num = 0  # numerator over N*scale
    for i, k in enumerate(keys, start=1):
        best_num = max(best_num, i * scale - k * N, k * N - (i - 1) * scale)
    return Fraction(best_num, N * scale)
