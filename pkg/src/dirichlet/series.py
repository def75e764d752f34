"""Cardinality series of a bundle.

``|D(X)| = sum_n |B_n| n^|X|`` and ``|P(X)| = sum_n |B_n| |X|^n`` where
``B_n`` is the set of base points whose fiber has ``n`` elements.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .bundle import Bundle
from .errors import ValidationError

KINDS = ("dirichlet", "polynomial")


@dataclass(frozen=True)
class CardinalitySeries:
    kind: str
    coefficients: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown series kind {self.kind!r}", "kind in dirichlet|polynomial")
        for n, c in self.coefficients.items():
            if not isinstance(n, int) or n < 0:
                raise ValidationError(f"exponent {n!r} must be a nonnegative int",
                                      "exponents >= 0")
            if not isinstance(c, int) or c <= 0:
                raise ValidationError(f"coefficient of {n} is {c!r}, must be a positive int",
                                      "coefficients > 0")
        object.__setattr__(self, "coefficients", dict(sorted(self.coefficients.items())))

    def __hash__(self):
        return hash((self.kind, tuple(self.coefficients.items())))

    @property
    def base_size(self) -> int:
        return sum(self.coefficients.values())

    def render(self) -> str:
        if not self.coefficients:
            return "0"
        if self.kind == "dirichlet":
            terms = [(c, f"{n}^X") for n, c in sorted(self.coefficients.items())]
        else:
            terms = [(c, f"X^{n}") for n, c in sorted(self.coefficients.items(), reverse=True)]
        return " + ".join(body if c == 1 else f"{c}·{body}" for c, body in terms)

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "coefficients": {str(n): c for n, c in self.coefficients.items()}}

    @classmethod
    def from_json(cls, data: dict) -> CardinalitySeries:
        try:
            kind = data["kind"]
            coeffs = {int(n): c for n, c in data["coefficients"].items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ValidationError(f"malformed series: {exc}", "series schema")
        return cls(kind, coeffs)

    def __str__(self) -> str:
        return self.render()


def series_of(pi: Bundle, kind: str = "dirichlet") -> CardinalitySeries:
    return CardinalitySeries(kind, dict(Counter(pi.fiber_sizes)))


def eval_series(s: CardinalitySeries, x: int) -> int:
    if x < 0:
        raise ValidationError(f"x = {x} must be nonnegative", "x >= 0")
    if s.kind == "dirichlet":
        return sum(c * n ** x for n, c in s.coefficients.items())
    return sum(c * x ** n for n, c in s.coefficients.items())
