"""Exact Shannon measures on finite-alphabet distributions.

All quantities are in bits; zero-probability terms contribute 0 by
convention. Includes a three-variable worked family (composites of
independent parts) contrasting naive pairwise redundancy with the
sufficient-statistic notion, and the averaged-minimum specific-information
redundancy for a (X, Y, Z) joint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import InvalidPmfError

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FinitePmf:
    """A probability mass function over a finite set of hashable outcomes."""

    outcomes: tuple
    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        p = np.asarray(self.probs, dtype=np.float64).copy()
        if p.ndim != 1 or len(p) != len(self.outcomes):
            raise InvalidPmfError("need one probability per outcome")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise InvalidPmfError("outcomes must be unique")
        if np.any(p < 0):
            raise InvalidPmfError("probabilities must be nonnegative")
        if abs(float(p.sum()) - 1.0) > _SUM_TOL:
            raise InvalidPmfError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_dict(cls, d: dict) -> "FinitePmf":
        items = list(d.items())
        return cls(tuple(k for k, _ in items), np.array([v for _, v in items]))

    @classmethod
    def uniform(cls, outcomes) -> "FinitePmf":
        outcomes = tuple(outcomes)
        return cls(outcomes, np.full(len(outcomes), 1.0 / len(outcomes)))

    def as_dict(self) -> dict:
        return dict(zip(self.outcomes, self.probs.tolist()))


def entropy(p: FinitePmf) -> float:
    """Shannon entropy H(p) = -sum p log2 p, in bits."""
    probs = p.probs[p.probs > 0]
    return float(-(probs * np.log2(probs)).sum()) if probs.size else 0.0


def _component_marginal(joint: FinitePmf, pos: int) -> dict:
    marg: dict = {}
    for outcome, prob in zip(joint.outcomes, joint.probs):
        marg[outcome[pos]] = marg.get(outcome[pos], 0.0) + float(prob)
    return marg


def _marginal_pmf(joint: FinitePmf, pos: int) -> FinitePmf:
    return FinitePmf.from_dict(_component_marginal(joint, pos))


def mutual_information(joint: FinitePmf) -> float:
    """I(X;Y) in bits for a joint pmf whose outcomes are (x, y) pairs.

    Computed as H(X) + H(Y) - H(X,Y); clamped at 0 against rounding.
    """
    for outcome in joint.outcomes:
        if not (isinstance(outcome, tuple) and len(outcome) == 2):
            raise InvalidPmfError("joint outcomes must be (x, y) pairs")
    mi = entropy(_marginal_pmf(joint, 0)) + entropy(_marginal_pmf(joint, 1)) - entropy(joint)
    return max(mi, 0.0)


@dataclass(frozen=True)
class TripleExample:
    """Composites X=(A,B), Y=(A,C), Z=(B,C) of independent parts A, B, C.

    For this family the minimal sufficient statistic of one composite for
    another is the shared part: A for (X,Y), B for (X,Z), C for (Y,Z).
    """

    pmf_a: FinitePmf
    pmf_b: FinitePmf
    pmf_c: FinitePmf

    def _pair_joint(self, first: str, second: str) -> FinitePmf:
        comp = {"x": ("a", "b"), "y": ("a", "c"), "z": ("b", "c")}
        acc: dict = {}
        for (a, pa), (b, pb), (c, pc) in product(
            zip(self.pmf_a.outcomes, self.pmf_a.probs),
            zip(self.pmf_b.outcomes, self.pmf_b.probs),
            zip(self.pmf_c.outcomes, self.pmf_c.probs),
        ):
            vals = {"a": a, "b": b, "c": c}
            key = (
                tuple(vals[s] for s in comp[first]),
                tuple(vals[s] for s in comp[second]),
            )
            acc[key] = acc.get(key, 0.0) + float(pa) * float(pb) * float(pc)
        return FinitePmf.from_dict(acc)


def _product_joint(first: FinitePmf, second: FinitePmf) -> FinitePmf:
    acc: dict = {}
    for (u, pu), (v, pv) in product(
        zip(first.outcomes, first.probs), zip(second.outcomes, second.probs)
    ):
        acc[(u, v)] = acc.get((u, v), 0.0) + float(pu) * float(pv)
    return FinitePmf.from_dict(acc)


def pairwise_min_mi(t: TripleExample) -> float:
    """min(I(X;Y), I(X;Z), I(Y;Z)): the naive pairwise redundancy in bits.

    Equals min(H(A), H(B), H(C)) for this family.
    """
    return min(
        mutual_information(t._pair_joint("x", "y")),
        mutual_information(t._pair_joint("x", "z")),
        mutual_information(t._pair_joint("y", "z")),
    )


def mss_redundancy(t: TripleExample) -> float:
    """Redundancy via minimal sufficient statistics, in bits.

    Returns min over the pairwise mutual informations of the statistics
    (A, B, C); exactly 0 for this independent family, in contrast with
    pairwise_min_mi.
    """
    return min(
        mutual_information(_product_joint(t.pmf_a, t.pmf_b)),
        mutual_information(_product_joint(t.pmf_b, t.pmf_c)),
        mutual_information(_product_joint(t.pmf_a, t.pmf_c)),
    )


def specific_info_redundancy(joint: FinitePmf) -> float:
    """Averaged minimum specific information of X and Y about Z, in bits.

    ``joint`` is over (x, y, z) triples. For each z, the specific
    information I(X; Z=z) = sum_x p(x|z) log2[p(x|z) / p(x)] (a KL
    divergence, hence >= 0), and the result is
    sum_z p(z) min(I(X; Z=z), I(Y; Z=z)).

    The denominator is the marginal p(x); see module docs for the rationale
    of this form.
    """
    for outcome in joint.outcomes:
        if not (isinstance(outcome, tuple) and len(outcome) == 3):
            raise InvalidPmfError("joint outcomes must be (x, y, z) triples")
    p_x = _component_marginal(joint, 0)
    p_y = _component_marginal(joint, 1)

    by_z: dict = {}
    for (x, y, z), p in zip(joint.outcomes, joint.probs):
        by_z.setdefault(z, []).append((x, y, float(p)))

    total = 0.0
    for z, cell in by_z.items():
        p_z = sum(p for _, _, p in cell)
        if p_z <= 0:
            continue
        px_given_z: dict = {}
        py_given_z: dict = {}
        for x, y, p in cell:
            px_given_z[x] = px_given_z.get(x, 0.0) + p / p_z
            py_given_z[y] = py_given_z.get(y, 0.0) + p / p_z
        spec_x = sum(
            q * math.log2(q / p_x[x]) for x, q in px_given_z.items() if q > 0
        )
        spec_y = sum(
            q * math.log2(q / p_y[y]) for y, q in py_given_z.items() if q > 0
        )
        total += p_z * min(spec_x, spec_y)
    return max(total, 0.0)


def fair_bit_triple() -> TripleExample:
    """The worked example with A, B, C independent fair bits."""
    bit = FinitePmf.uniform((0, 1))
    return TripleExample(bit, bit, bit)
