"""Boundedness, compactness and nuclearity criteria.

Two layers: sums evaluated on a truncated kernel (Schur-type column sums,
the sup entry, the mixed row/column sum, the nuclear sum), and an
arithmetic decision engine on the symbol order (mu, delta) alone.  Sum
values at a finite truncation are partial sums; divergence is only ever
reported operationally, by growth between a radius and its double (ratio
threshold 1.5), never claimed as a proof.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .symbols import SymbolOrder
from .fourier import DecayReport

DIVERGENCE_RATIO = 1.5


def _entries(K) -> np.ndarray:
    return np.asarray(getattr(K, "entries", K), dtype=complex)


def schur_l1_lp(K, p: float) -> float:
    """max over columns m of sum_k |A(k, m)|^p (the l1 -> lp column test)."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(_entries(K))
    return float(np.max(np.sum(a ** p, axis=0)))


def sup_entry(K) -> float:
    """max |A(k, m)| (the l1 -> linf test)."""
    a = np.abs(_entries(K))
    return float(np.max(a)) if a.size else 0.0


def mixed_lp_sum(K, p: float) -> float:
    """sum_k (sum_m |A(k, m)|^q)^(p/q) with q the conjugate exponent of p."""
    if not (1 < p < math.inf):
        raise ValueError(f"mixed sum requires 1 < p < inf, got {p}")
    q = p / (p - 1)
    a = np.abs(_entries(K))
    return float(np.sum(np.sum(a ** q, axis=1) ** (p / q)))


def nuclear_sum(K, r: float, p2: float) -> float:
    """sum_k (sum_m |K(k, m)|^p2)^(r/p2), the nuclearity partial sum."""
    if not (0 < r <= 1):
        raise ValueError(f"r must lie in (0, 1], got {r}")
    if p2 < 1:
        raise ValueError(f"p2 must be >= 1, got {p2}")
    a = np.abs(_entries(K))
    return float(np.sum(np.sum(a ** p2, axis=1) ** (r / p2)))


def nuclear_row_terms(K, r: float, p2: float) -> np.ndarray:
    """Individual row contributions to nuclear_sum, in box order."""
    a = np.abs(_entries(K))
    return np.sum(a ** p2, axis=1) ** (r / p2)


@dataclass(frozen=True)
class CriterionQuery:
    """Exponent bundle for the decision engine.

    p and q must be conjugate (1/p + 1/q = 1, q = inf allowed for p = 1);
    r in (0, 1] is the nuclearity order; p1, p2 are the domain/codomain
    exponents, defaulting to p.
    """

    p: float = 2.0
    q: Optional[float] = None
    r: float = 1.0
    p1: Optional[float] = None
    p2: Optional[float] = None
    n: int = 1

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        q = self.q
        if q is None:
            q = math.inf if self.p == 1 else self.p / (self.p - 1)
            object.__setattr__(self, "q", q)
        inv_q = 0.0 if math.isinf(q) else 1.0 / q
        if abs(1.0 / self.p + inv_q - 1.0) > 1e-12:
            raise ValueError(f"p={self.p} and q={q} are not conjugate exponents")
        if not (0 < self.r <= 1):
            raise ValueError(f"r must lie in (0, 1], got {self.r}")
        if self.p1 is None:
            object.__setattr__(self, "p1", self.p)
        if self.p2 is None:
            object.__setattr__(self, "p2", self.p)
        if self.p1 < 1 or self.p2 < 1:
            raise ValueError("p1 and p2 must be >= 1")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"dimension n must be a positive integer, got {self.n}")


@dataclass
class CriterionReport:
    """Verdicts of the order-condition corollaries, with their justifications.

    verdicts map criterion name -> 'holds' | 'fails' | 'not-applicable';
    details record the inequality instance behind each verdict (lhs, rhs,
    strict or not, and sharpness scope).  decay_exponent_t is the eigenvalue
    decay exponent t from 1/r = 1/t + |1/p - 1/2| when nuclearity holds with
    p1 = p2.
    """

    sums: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    decay_exponent_t: Optional[float] = None
    details: dict = field(default_factory=dict)
    truncation: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {
            "sums": self.sums,
            "verdicts": self.verdicts,
            "t": self.decay_exponent_t,
            "details": self.details,
            "truncation": self.truncation,
        }


def order_conditions(order: SymbolOrder, query: CriterionQuery) -> CriterionReport:
    """Arithmetic verdicts on (mu, delta) for the sufficiency corollaries.

    Criteria: l1 -> lp bounded (mu < -n/p), l1 -> linf bounded (mu <= 0,
    sharp), lp bounded for every p (mu <= -(n+2) delta, sharp at delta = 0),
    compact (mu < -(n+2) delta, sharp at delta = 0), r-nuclear
    (mu < -n/r - (n/p2 + 2) delta).  Equality cases with delta > 0 hold as
    sufficient conditions only; the details entry says so.
    """
    mu, delta = order.mu, order.delta
    n = query.n
    rep = CriterionReport()

    def record(name, lhs, rhs, strict, sharp, note=None):
        holds = lhs < rhs if strict else lhs <= rhs
        rep.verdicts[name] = "holds" if holds else "fails"
        det = {"lhs": lhs, "rhs": rhs, "strict": strict, "holds": holds, "sharp": sharp}
        if note:
            det["note"] = note
        rep.details[name] = det
        return holds

    record("l1_to_lp_bounded", mu, -n / query.p, True, False)
    record("l1_to_linf_bounded", mu, 0.0, False, True)
    boundary_note = None
    if delta > 0 and mu == -(n + 2) * delta:
        boundary_note = "boundary case with delta > 0: sufficient only, sharpness shown for delta = 0"
    record("lp_bounded_all_p", mu, -(n + 2) * delta, False, delta == 0, boundary_note)
    record("compact", mu, -(n + 2) * delta, True, delta == 0)
    nuclear_holds = record("r_nuclear", mu, -n / query.r - (n / query.p2 + 2) * delta,
                           True, False)

    if nuclear_holds and query.p1 == query.p2:
        p = query.p1
        rep.decay_exponent_t = 1.0 / (1.0 / query.r - abs(1.0 / p - 0.5))
        rep.details["eigenvalue_decay"] = {
            "t": rep.decay_exponent_t,
            "statement": "lambda_j = O(j^(-1/t))",
        }
    return rep


# ---------------------------------------------------------------------------
# tail bound for the mass neglected by a box truncation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailBound:
    """Bound on the coefficient mass outside a box of radius R.

    value = constant * (k_tail * m_full + k_full * m_tail) when both the
    row tail (needs mu + 2 q_tilde delta < -n) and the frequency tail
    (needs 2 q_tilde > n, or finitely supported coefficients) are
    controllable; components that cannot be bounded are None and
    applicable is False.
    """

    applicable: bool
    value: Optional[float]
    k_tail: Optional[float]
    m_tail: Optional[float]
    constant: float
    radius: int


def _shell_count(s: int, n: int) -> int:
    if s == 0:
        return 1
    return (2 * s + 1) ** n - (2 * s - 1) ** n


def _power_shell_sum(exponent: float, scale: float, n: int, from_shell: int) -> float:
    """Upper bound on sum over |z|_inf > from_shell of (1 + scale |z|)^exponent.

    Exact shell terms with the sup-norm radius as a lower bound on |z|, plus
    an integral-comparison remainder once terms are negligible.  Requires
    exponent + n < 0.
    """
    if exponent + n >= 0:
        raise ValueError("shell sum diverges: need exponent < -n")
    acc = 0.0
    s = from_shell + 1
    cap = from_shell + 200000
    while s <= cap:
        term = _shell_count(s, n) * (1.0 + scale * s) ** exponent
        acc += term
        if term <= 1e-16 * max(acc, 1e-300) and s > from_shell + 10:
            break
        s += 1
    # remainder: count(s) <= 2n(3s)^(n-1), (1 + scale s)^a <= (scale s)^a
    remainder = (2 * n * 3 ** (n - 1) * scale ** exponent
                 * s ** (n + exponent) / (-(n + exponent)))
    return acc + remainder


def _power_ball_sum(exponent: float, scale: float, n: int, up_to_shell: int) -> float:
    """Upper bound on sum over |z|_inf <= up_to_shell of (1 + scale |z|)^exponent."""
    acc = 0.0
    for s in range(0, up_to_shell + 1):
        # |z| >= |z|_inf = s and exponent < 0, so this bounds each shell
        acc += _shell_count(s, n) * (1.0 + scale * s) ** min(exponent, 0.0)
    return acc


def truncation_tail_bound(order: SymbolOrder, decay: DecayReport, R: int,
                          q_tilde: Optional[int] = None) -> TailBound:
    """Bound the coefficient mass left out by truncating to box radius R.

    Combines the empirical decay constant with integral-comparison tails of
    (1+|k|)^(mu + 2 q_tilde delta) over rows outside the box and
    (1+|m|/hbar)^(-2 q_tilde) over frequencies beyond the box reach.
    """
    if q_tilde is None:
        q_tilde = decay.q_tilde
    if q_tilde != decay.q_tilde:
        raise ValueError(f"q_tilde={q_tilde} does not match the decay report ({decay.q_tilde})")
    n = decay.dim
    a = order.mu + 2 * q_tilde * order.delta
    b = -2.0 * q_tilde
    k_ok = a < -n
    finite_support = decay.support_radius is not None
    m_summable = b + n < 0  # 2 q_tilde > n

    k_tail = _power_shell_sum(a, decay.hbar, n, int(R)) if k_ok else None

    if finite_support:
        m_tail = 0.0 if decay.support_radius <= R else None
        m_full = _power_ball_sum(b, 1.0, n, decay.support_radius)
    elif m_summable:
        m_tail = _power_shell_sum(b, 1.0, n, int(R))
        m_full = 1.0 + _power_shell_sum(b, 1.0, n, 0)
    else:
        m_tail = None
        m_full = None

    applicable = k_ok and m_tail is not None
    value = None
    if applicable:
        k_full = _power_ball_sum(a, decay.hbar, n, int(R)) + k_tail
        value = decay.constant * (k_tail * m_full + k_full * m_tail)
    return TailBound(applicable, value, k_tail, m_tail, decay.constant, int(R))
