"""Formal Laurent polynomials in named gain symbols.

A :class:`HyperScalar` over the context ``("G", "G'")`` is a finite sum of
terms ``c * G**i * G'**j`` with integer exponents. Positive-degree terms are
infinite, negative-degree terms infinitesimal, and the degree-zero term is the
standard (finite) part. Degree means the total degree, the sum of the
exponent vector, so a mixed term such as ``G * G'**-1`` counts as finite.

:class:`HyperOperator` is a dense matrix of hyperscalars sharing one context.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

from .errors import (ContextMismatch, DimensionError, InfiniteValueError,
                     NotMonomialError)

PRUNE = 1e-15

Context = tuple[str, ...]
Exponents = tuple[int, ...]


@dataclass(frozen=True)
class GainSymbol:
    """A named positive infinite c-number such as ``G``."""

    name: str

    def __post_init__(self):
        if not self.name or not isinstance(self.name, str):
            raise ValueError("gain symbol needs a non-empty name")


def make_context(*symbols: GainSymbol | str) -> Context:
    names = tuple(s.name if isinstance(s, GainSymbol) else str(s) for s in symbols)
    if len(set(names)) != len(names):
        raise ContextMismatch(f"duplicate gain symbol in context {names}")
    return names


def _prune(terms: Mapping[Exponents, complex]) -> dict[Exponents, complex]:
    return {e: complex(c) for e, c in terms.items() if abs(c) >= PRUNE}


class HyperScalar:
    """Immutable finite Laurent sum over a fixed gain-symbol context."""

    __slots__ = ("_context", "_terms")

    def __init__(self, context: Context, terms: Mapping[Exponents, complex] | None = None):
        context = tuple(context)
        terms = _prune(terms or {})
        for e in terms:
            if len(e) != len(context):
                raise ContextMismatch(
                    f"exponent vector {e} does not match context {context}")
        object.__setattr__(self, "_context", context)
        object.__setattr__(self, "_terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("HyperScalar is immutable")

    @classmethod
    def constant(cls, value: complex, context: Context) -> "HyperScalar":
        return cls(context, {(0,) * len(context): value})

    @classmethod
    def monomial(cls, coeff: complex, context: Context, **powers: int) -> "HyperScalar":
        """``coeff * prod(symbol**power)``; unknown symbol names are rejected."""
        exps = [0] * len(context)
        for name, p in powers.items():
            if name not in context:
                raise ContextMismatch(f"symbol {name!r} not in context {context}")
            exps[context.index(name)] = int(p)
        return cls(context, {tuple(exps): coeff})

    @classmethod
    def symbol(cls, name: str | GainSymbol, context: Context, power: int = 1) -> "HyperScalar":
        name = name.name if isinstance(name, GainSymbol) else name
        return cls.monomial(1.0, context, **{name: power})

    @property
    def context(self) -> Context:
        return self._context

    @property
    def terms(self) -> dict[Exponents, complex]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> list[int]:
        return [sum(e) for e in self._terms]

    def _coerce(self, other) -> "HyperScalar":
        if isinstance(other, HyperScalar):
            if other._context != self._context:
                raise ContextMismatch(f"contexts {self._context} and {other._context} differ")
            return other
        if isinstance(other, Number):
            return HyperScalar.constant(complex(other), self._context)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return hs_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return hs_neg(self)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return hs_add(self, hs_neg(other))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return hs_add(other, hs_neg(self))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return hs_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except ContextMismatch:
            return False
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash((self._context, frozenset(self._terms.items())))

    def __repr__(self):
        return f"HyperScalar({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=lambda e: (-sum(e), e)):
            c = self._terms[e]
            cs = f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}j)"
            factors = [n if p == 1 else f"{n}^{p}"
                       for n, p in zip(self._context, e) if p != 0]
            parts.append("*".join([cs] + factors) if factors else cs)
        return " + ".join(parts)


def _check_context(x: HyperScalar, y: HyperScalar) -> None:
    if x.context != y.context:
        raise ContextMismatch(f"contexts {x.context} and {y.context} differ")


def hs_add(x: HyperScalar, y: HyperScalar) -> HyperScalar:
    _check_context(x, y)
    out = dict(x._terms)
    for e, c in y._terms.items():
        out[e] = out.get(e, 0) + c
    return HyperScalar(x.context, out)


def hs_neg(x: HyperScalar) -> HyperScalar:
    return HyperScalar(x.context, {e: -c for e, c in x._terms.items()})


def hs_mul(x: HyperScalar, y: HyperScalar) -> HyperScalar:
    _check_context(x, y)
    out: dict[Exponents, complex] = {}
    for ex, cx in x._terms.items():
        for ey, cy in y._terms.items():
            e = tuple(i + j for i, j in zip(ex, ey))
            out[e] = out.get(e, 0) + cx * cy
    return HyperScalar(x.context, out)


def hs_invert(x: HyperScalar) -> HyperScalar:
    """Reciprocal of a monomial; general Laurent inversion is not supported."""
    if len(x._terms) != 1:
        raise NotMonomialError(f"can only invert a single nonzero monomial, got {x}")
    (e, c), = x._terms.items()
    return HyperScalar(x.context, {tuple(-i for i in e): 1 / c})


def standard_part(x: HyperScalar) -> complex:
    if is_infinite(x):
        raise InfiniteValueError(f"{x} is infinite and has no standard part")
    return x._terms.get((0,) * len(x.context), 0j)


def is_infinitesimal(x: HyperScalar) -> bool:
    return all(d < 0 for d in x.degrees())


def is_infinite(x: HyperScalar) -> bool:
    return any(d > 0 for d in x.degrees())


def is_finite(x: HyperScalar) -> bool:
    return not is_infinite(x)


class HyperOperator:
    """Rectangular matrix of hyperscalars over one context."""

    __slots__ = ("_context", "_entries")

    def __init__(self, context: Context, entries: Iterable[Iterable[HyperScalar]]):
        context = tuple(context)
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise DimensionError("HyperOperator needs at least one entry")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise DimensionError("HyperOperator rows have unequal lengths")
            for h in row:
                if h.context != context:
                    raise ContextMismatch(f"entry context {h.context} != {context}")
        object.__setattr__(self, "_context", context)
        object.__setattr__(self, "_entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("HyperOperator is immutable")

    @classmethod
    def lift(cls, m, context: Context, scale: HyperScalar | None = None) -> "HyperOperator":
        """Entrywise ``scale * m[i, j]`` for a numeric matrix ``m``."""
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2:
            raise DimensionError(f"expected a matrix, got shape {m.shape}")
        unit = HyperScalar.constant(1.0, context) if scale is None else scale
        return cls(context, [[hs_mul(unit, HyperScalar.constant(v, context)) for v in row]
                             for row in m])

    @property
    def context(self) -> Context:
        return self._context

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._entries), len(self._entries[0])

    @property
    def entries(self) -> tuple[tuple[HyperScalar, ...], ...]:
        return self._entries

    def __getitem__(self, ij: tuple[int, int]) -> HyperScalar:
        i, j = ij
        return self._entries[i][j]

    def _check(self, other: "HyperOperator") -> None:
        if other.context != self.context:
            raise ContextMismatch(f"contexts {self.context} and {other.context} differ")

    def scale(self, s: HyperScalar) -> "HyperOperator":
        return HyperOperator(self.context, [[hs_mul(s, h) for h in row]
                                            for row in self._entries])

    def __add__(self, other: "HyperOperator") -> "HyperOperator":
        self._check(other)
        if other.shape != self.shape:
            raise DimensionError(f"cannot add shapes {self.shape} and {other.shape}")
        return HyperOperator(self.context, [[hs_add(a, b) for a, b in zip(r, s)]
                                            for r, s in zip(self._entries, other._entries)])

    def __neg__(self) -> "HyperOperator":
        return HyperOperator(self.context, [[hs_neg(a) for a in r] for r in self._entries])

    def __sub__(self, other: "HyperOperator") -> "HyperOperator":
        return self + (-other)

    def __matmul__(self, other: "HyperOperator") -> "HyperOperator":
        self._check(other)
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise DimensionError(f"cannot multiply shapes {self.shape} and {other.shape}")
        zero = HyperScalar(self.context)
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = zero
                for t in range(k):
                    acc = hs_add(acc, hs_mul(self._entries[i][t], other._entries[t][j]))
                row.append(acc)
            out.append(row)
        return HyperOperator(self.context, out)

    def __eq__(self, other):
        if not isinstance(other, HyperOperator):
            return NotImplemented
        return self.context == other.context and self._entries == other._entries

    __hash__ = None

    def is_zero(self) -> bool:
        return all(h.is_zero() for row in self._entries for h in row)

    def all_entries(self, predicate) -> bool:
        return all(predicate(h) for row in self._entries for h in row)

    def standard_part(self) -> np.ndarray:
        return np.array([[standard_part(h) for h in row] for row in self._entries],
                        dtype=complex)

    def __repr__(self):
        body = "; ".join(", ".join(str(h) for h in row) for row in self._entries)
        return f"HyperOperator[{body}]"


def hyper_commutator(x: HyperOperator, y: HyperOperator) -> HyperOperator:
    if x.shape != y.shape or x.shape[0] != x.shape[1]:
        raise DimensionError(f"commutator needs equal square shapes, got {x.shape}, {y.shape}")
    return x @ y - y @ x
