"""Hilbert transform and Hardy projections on coefficient maps.

The Hilbert transform is defined by its Fourier multiplier −i·sgn, where sgn is the
cone sign of the order; the projection-based formulas below are independent
computations of the same operators and are checked against it.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from ordered_harmonics.exceptions import DimensionMismatchError
from ordered_harmonics.ordered_group import zero_index
from ordered_harmonics.trigpoly import TrigPoly

if TYPE_CHECKING:  # pragma: no cover
    from ordered_harmonics.ordered_group import OrderSpec


def _check_dimension(order: OrderSpec, f: TrigPoly) -> None:
    if f.n != order.n:
        raise DimensionMismatchError(expected=order.n, actual=f.n)


def hilbert(order: OrderSpec, f: TrigPoly) -> TrigPoly:
    """Conjugate function f̃ with (f̃)̂(k) = −i·sgn(k)·f̂(k)."""
    _check_dimension(order, f)
    return TrigPoly(
        f.n,
        {k: -1j * order.cone_sign(k) * value for k, value in f.items()},
        f.drop_tolerance,
    )


def p_plus(order: OrderSpec, f: TrigPoly) -> TrigPoly:
    """Orthogonal projection onto H², keeping X₊ (unit character included)."""
    _check_dimension(order, f)
    return f.restrict(lambda k: order.cone_sign(k) >= 0)


def p_minus(order: OrderSpec, f: TrigPoly) -> TrigPoly:
    """Orthogonal projection onto H²₋, keeping X₋."""
    _check_dimension(order, f)
    return f.restrict(lambda k: order.cone_sign(k) < 0)


def mean_value(f: TrigPoly) -> complex:
    """The coefficient at the unit character, ψ̂(𝟏)."""
    return f.coefficient(zero_index(f.n))


def conjugate_from_projections(order: OrderSpec, psi: TrigPoly) -> TrigPoly:
    """Conjugate function assembled as −i(P₊ψ − P₋ψ − ψ̂(𝟏)·𝟏)."""
    constant = TrigPoly.constant(psi.n, mean_value(psi))
    return (p_plus(order, psi) - p_minus(order, psi) - constant).scale(-1j)


def projections_from_hilbert(order: OrderSpec, h: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    """Return (P₋h, P₊h) computed from h and its conjugate function.

    P₋h = ½(h − i·h̃ − ĥ(𝟏)) and P₊h = ½(h + i·h̃ + ĥ(𝟏)).
    """
    conjugate = hilbert(order, h)
    constant = TrigPoly.constant(h.n, mean_value(h))
    minus = (h - conjugate.scale(1j) - constant).scale(0.5)
    plus = (h + conjugate.scale(1j) + constant).scale(0.5)
    return minus, plus


def is_real(f: TrigPoly, rel: float = 1e-12) -> bool:
    """Whether f is real-valued, encoded as f̂(−k) = conj f̂(k)."""
    return f.is_real(rel=rel)


def analytic_completion(order: OrderSpec, u: TrigPoly) -> TrigPoly:
    """Return u + i·ũ; for real u this lies in H² and has real part u."""
    return u + hilbert(order, u).scale(1j)
