"""Countable ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents, where every exponent is itself an :class:`Ordinal`.
The empty tuple is 0.

Limit ordinals are given a fixed fundamental sequence (the Wainer rule, see
:func:`fundamental_sequence`).  Everything downstream that depends on
fundamental sequences, most visibly membership in the Schreier families at
limit levels, is reproducible only relative to that rule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Tuple, Union

__all__ = [
    "Ordinal",
    "ZERO",
    "ONE",
    "OMEGA",
    "compare",
    "add",
    "omega_pow",
    "classify",
    "fundamental_sequence",
    "parse_ordinal",
]


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: Tuple[Tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        prev = None
        for exp, coeff in terms:
            if not isinstance(exp, Ordinal):
                raise TypeError(f"exponent must be an Ordinal, got {exp!r}")
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"coefficient must be a positive integer, got {coeff!r}")
            if prev is not None and compare(prev, exp) != "greater":
                raise ValueError("exponents must be strictly decreasing")
            prev = exp

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        """The finite ordinal ``n``."""
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return all(exp.is_zero for exp, _ in self.terms)

    def __lt__(self, other):
        if not isinstance(other, Ordinal):
            return NotImplemented
        return compare(self, other) == "less"

    def __add__(self, other):
        if isinstance(other, int):
            other = Ordinal.of(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return add(Ordinal.of(other), self)
        return NotImplemented

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(_format_term(e, c) for e, c in self.terms)

    def __repr__(self):
        return f"Ordinal({str(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))

OrdinalLike = Union[Ordinal, int]


def _coerce(a: OrdinalLike) -> Ordinal:
    return Ordinal.of(a) if isinstance(a, int) else a


def compare(a: OrdinalLike, b: OrdinalLike) -> str:
    """Return ``"less"``, ``"equal"`` or ``"greater"``."""
    a, b = _coerce(a), _coerce(b)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != "equal":
            return c
        if ca != cb:
            return "less" if ca < cb else "greater"
    if len(a.terms) == len(b.terms):
        return "equal"
    return "less" if len(a.terms) < len(b.terms) else "greater"


def add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Ordinal sum ``a + b``; terms of ``a`` below the leading exponent of ``b`` are absorbed."""
    a, b = _coerce(a), _coerce(b)
    if b.is_zero:
        return a
    lead_exp, lead_coeff = b.terms[0]
    kept = []
    for exp, coeff in a.terms:
        c = compare(exp, lead_exp)
        if c == "greater":
            kept.append((exp, coeff))
        elif c == "equal":
            lead_coeff += coeff
            break
        else:
            break
    return Ordinal(tuple(kept) + ((lead_exp, lead_coeff),) + b.terms[1:])


def omega_pow(a: OrdinalLike) -> Ordinal:
    return Ordinal(((_coerce(a), 1),))


def classify(a: OrdinalLike) -> tuple[str, Ordinal | None]:
    """Return ``("zero", None)``, ``("successor", predecessor)`` or ``("limit", None)``."""
    a = _coerce(a)
    if a.is_zero:
        return "zero", None
    exp, coeff = a.terms[-1]
    if not exp.is_zero:
        return "limit", None
    head = a.terms[:-1]
    if coeff > 1:
        return "successor", Ordinal(head + ((ZERO, coeff - 1),))
    return "successor", Ordinal(head)


def fundamental_sequence(lam: OrdinalLike, n: int) -> Ordinal:
    """The ``n``-th element (``n >= 1``) of the fixed fundamental sequence of a limit.

    Write ``lam = gamma + w^beta``, splitting one copy off the last term.  If
    ``beta = delta + 1`` the answer is ``gamma + w^delta * n``; if ``beta`` is a
    limit it is ``gamma + w^(beta[n])``.
    """
    lam = _coerce(lam)
    if classify(lam)[0] != "limit":
        raise ValueError(f"{lam} is not a limit ordinal")
    if n < 1:
        raise ValueError("fundamental sequences are indexed from 1")
    beta, coeff = lam.terms[-1]
    gamma = lam.terms[:-1]
    if coeff > 1:
        gamma = gamma + ((beta, coeff - 1),)
    kind, delta = classify(beta)
    if kind == "successor":
        tail = ((delta, n),)
    else:
        tail = ((fundamental_sequence(beta, n), 1),)
    # the new tail exponent is below beta, so no merge with gamma is possible
    return Ordinal(gamma + tail)


def _format_term(exp: Ordinal, coeff: int) -> str:
    if exp.is_zero:
        return str(coeff)
    if exp == ONE:
        base = "w"
    elif exp.is_finite or exp == OMEGA:
        base = f"w^{exp}"
    else:
        base = f"w^({exp})"
    return base if coeff == 1 else f"{base}*{coeff}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``0``, ``w``, ``w^2*3 + w + 5``, ``w^(w+1)``.

    Terms must already be in canonical (strictly decreasing) order.
    """
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1) is not None:
            tokens.append(int(m.group(1)))
        elif m.group(2) and not m.group(2).isspace():
            tokens.append(m.group(2))
    parser = _Parser(tokens, text)
    result = parser.ordinal()
    if parser.pos != len(tokens):
        raise ValueError(f"unexpected trailing input in ordinal {text!r}")
    return result


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"malformed ordinal {self.text!r}")
        self.pos += 1
        return tok

    def ordinal(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.term())
        if len(terms) == 1 and terms[0] is None:
            return ZERO
        if any(t is None for t in terms):
            raise ValueError(f"zero term inside a sum in {self.text!r}")
        try:
            return Ordinal(tuple(terms))
        except ValueError as exc:
            raise ValueError(f"non-canonical ordinal {self.text!r}: {exc}") from None

    def term(self):
        tok = self.peek()
        if isinstance(tok, int):
            self.take()
            return (ZERO, tok) if tok else None
        self.take("w")
        exp = ONE
        if self.peek() == "^":
            self.take("^")
            exp = self.exponent()
            if exp.is_zero:
                raise ValueError(f"w^0 should be written 1 in {self.text!r}")
        coeff = 1
        if self.peek() == "*":
            self.take("*")
            coeff = self.take()
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError(f"bad coefficient in {self.text!r}")
        return exp, coeff

    def exponent(self) -> Ordinal:
        tok = self.peek()
        if isinstance(tok, int):
            self.take()
            return Ordinal.of(tok)
        if tok == "(":
            self.take("(")
            inner = self.ordinal()
            self.take(")")
            return inner
        self.take("w")
        if self.peek() == "^":
            self.take("^")
            return omega_pow(self.exponent())
        return OMEGA
