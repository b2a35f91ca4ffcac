"""
eisenlat - Codes over F4
Linear codes with the Hermitian inner product sum(u_i * v_i^2).
"""

from __future__ import annotations

from collections import Counter
from functools import cached_property
from itertools import product
from typing import Any, Iterator, Sequence

from eisenlat.core.exceptions import ValidationError
from eisenlat.models.eisenstein import F4_ELEMENTS, F4_ZERO, F4Elem
from eisenlat.models.schemas import CodeFile, parse_model

Word = tuple[F4Elem, ...]


def hermitian_inner(u: Sequence[F4Elem], v: Sequence[F4Elem]) -> F4Elem:
    acc = F4_ZERO
    for x, y in zip(u, v):
        acc = acc + x * y.frobenius()
    return acc


def weight(word: Sequence[F4Elem]) -> int:
    return sum(1 for x in word if x)


class F4Code:
    """A linear code of length `length` spanned by `generators`."""

    def __init__(self, length: int, generators: Sequence[Sequence[F4Elem]], name: str | None = None) -> None:
        rows = [tuple(row) for row in generators]
        for row in rows:
            if len(row) != length:
                raise ValidationError(f"code row of length {len(row)}, expected {length}")
        self.length = length
        self.generators: list[Word] = rows
        self.name = name

    def __repr__(self) -> str:
        return f"<F4Code {self.name or ''} n={self.length} k={self.dimension}>"

    @cached_property
    def basis(self) -> list[Word]:
        """Reduced row echelon basis."""
        work = [list(r) for r in self.generators]
        out: list[list[F4Elem]] = []
        for c in range(self.length):
            piv = next((i for i, r in enumerate(work) if r[c]), None)
            if piv is None:
                continue
            p = work.pop(piv)
            inv = p[c].inverse()
            p = [x * inv for x in p]
            work = [[x + r[c] * y for x, y in zip(r, p)] if r[c] else r for r in work]
            out = [[x + r[c] * y for x, y in zip(r, p)] if r[c] else r for r in out]
            out.append(p)
        return [tuple(r) for r in out]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def codewords(self) -> Iterator[Word]:
        for coefs in product(F4_ELEMENTS, repeat=self.dimension):
            word = [F4_ZERO] * self.length
            for c, row in zip(coefs, self.basis):
                if c:
                    word = [x + c * y for x, y in zip(word, row)]
            yield tuple(word)

    def is_self_orthogonal(self) -> bool:
        rows = self.basis
        return all(not hermitian_inner(g, h) for g in rows for h in rows)

    def is_self_dual(self) -> bool:
        return self.length % 2 == 0 and self.dimension * 2 == self.length and self.is_self_orthogonal()

    def weight_distribution(self) -> dict[int, int]:
        counts = Counter(weight(w) for w in self.codewords())
        return dict(sorted(counts.items()))

    def minimum_weight(self) -> int:
        return min((weight(w) for w in self.codewords() if any(w)), default=0)

    # ---------- file codec ----------

    def to_file(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "length": self.length,
            "generators": [[str(x) for x in row] for row in self.generators],
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_file(cls, data: Any) -> F4Code:
        model = parse_model(CodeFile, data, "code file")
        rows = [[F4Elem.parse(x) for x in row] for row in model.generators]
        return cls(model.length, rows, name=model.name)
