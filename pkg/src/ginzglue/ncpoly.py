"""
Noncommutative polynomials in path algebras.

A path is a tuple of generator names written in function order: the
rightmost generator acts first, so ``("c", "b")`` is ``c∘b``.  The empty
tuple is the lazy path at the polynomial's source (which then equals its
target).  Coefficients are exact ``Fraction``s.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Path = tuple[str, ...]


class CompositionError(ValueError):
    pass


def path_key(path: Path) -> tuple:
    return (len(path), path)


class NcPoly:
    __slots__ = ("terms", "src", "tgt")

    def __init__(self, terms: Mapping[Path, object] | Iterable = (),
                 src: str | None = None, tgt: str | None = None):
        acc: dict[Path, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for path, c in items:
            c = Fraction(c)
            if c:
                path = tuple(path)
                v = acc.get(path, 0) + c
                if v:
                    acc[path] = v
                else:
                    del acc[path]
        self.terms = dict(sorted(acc.items(), key=lambda kv: path_key(kv[0])))
        self.src = src
        self.tgt = tgt

    @classmethod
    def gen(cls, name: str, src: str, tgt: str, coeff=1) -> "NcPoly":
        return cls({(name,): coeff}, src, tgt)

    @classmethod
    def lazy(cls, obj: str, coeff=1) -> "NcPoly":
        return cls({(): coeff}, obj, obj)

    @classmethod
    def zero(cls, src: str | None = None, tgt: str | None = None) -> "NcPoly":
        return cls({}, src, tgt)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return (self.terms == other.terms and self.src == other.src
                and self.tgt == other.tgt)

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def _ends(self, other: "NcPoly") -> tuple:
        src = self.src if self.src is not None else other.src
        tgt = self.tgt if self.tgt is not None else other.tgt
        if self.terms and other.terms and (self.src, self.tgt) != (other.src, other.tgt):
            raise CompositionError(
                f"adding paths {self.src}->{self.tgt} and {other.src}->{other.tgt}")
        return src, tgt

    def __add__(self, other: "NcPoly") -> "NcPoly":
        src, tgt = self._ends(other)
        return NcPoly(list(self.terms.items()) + list(other.terms.items()), src, tgt)

    def __neg__(self) -> "NcPoly":
        return NcPoly({p: -c for p, c in self.terms.items()}, self.src, self.tgt)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def scale(self, c) -> "NcPoly":
        c = Fraction(c)
        return NcPoly({p: c * v for p, v in self.terms.items()}, self.src, self.tgt)

    def __rmul__(self, c) -> "NcPoly":
        return self.scale(c)

    def __matmul__(self, other: "NcPoly") -> "NcPoly":
        return multiply(self, other)

    def __repr__(self) -> str:
        return f"NcPoly({format_poly(self)!r}, {self.src!r}->{self.tgt!r})"

    def __str__(self) -> str:
        return format_poly(self)


def multiply(p: NcPoly, q: NcPoly) -> NcPoly:
    """``p∘q``: first ``q``, then ``p``."""
    if p.src is not None and q.tgt is not None and p.src != q.tgt:
        raise CompositionError(f"cannot compose {p.src}->{p.tgt} after {q.src}->{q.tgt}")
    out: dict[Path, Fraction] = {}
    for a, x in p.terms.items():
        for b, y in q.terms.items():
            k = a + b
            out[k] = out.get(k, 0) + x * y
    return NcPoly(out, q.src, p.tgt)


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: NcPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for path, c in p.terms.items():
        word = " ".join(path) if path else f"p_{p.src}"
        mag = abs(c)
        body = word if mag == 1 else f"{format_coeff(mag)} {word}"
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def parse_poly(text: str, src: str | None = None, tgt: str | None = None) -> NcPoly:
    """Inverse of :func:`format_poly`; generator names are whitespace-separated
    and never contain ``+`` or ``-``."""
    tokens = text.replace("+", " + ").replace("-", " - ").split()
    if tokens == ["0"]:
        return NcPoly.zero(src, tgt)
    terms = []
    sign, coeff, word, lazy = 1, Fraction(1), [], False
    for tok in tokens + ["+"]:
        if tok in ("+", "-"):
            if word or lazy:
                terms.append((tuple(word), sign * coeff))
            elif coeff != 1 or terms:
                raise ValueError(f"dangling coefficient in {text!r}")
            sign = 1 if tok == "+" else -1
            coeff, word, lazy = Fraction(1), [], False
        elif not word and not lazy and _is_number(tok):
            coeff = Fraction(tok)
        elif tok.startswith("p_") and not word:
            lazy = True
            src = tok[2:] if src is None else src
            tgt = tok[2:] if tgt is None else tgt
        else:
            word.append(tok)
    return NcPoly(terms, src, tgt)


def _is_number(tok: str) -> bool:
    try:
        Fraction(tok)
    except (ValueError, ZeroDivisionError):
        return False
    return True
