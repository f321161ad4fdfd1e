"""Ingredient bases, simplex composition vectors, and the mixing primitive.

A composition is a point on the probability simplex over a fixed, ordered
list of ingredient names: every weight is a mass fraction in [0, 1] and the
weights sum to 1.  Mixing food A into food B at fraction f produces the
convex combination (1-f)*B + f*A, which is the single operation everything
else in this package is built from.

Values are immutable after construction and all functions here are pure, so
they can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BasisError, DomainError

#: tolerance on "weights sum to 1"
SUM_TOL = 1e-9

#: rounding slack allowed on the [0, 1] bounds of individual weights
_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class IngredientBasis:
    """An ordered collection of distinct, non-empty ingredient names."""

    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) < 1:
            raise DomainError("an ingredient basis needs at least one ingredient")
        seen = set()
        for name in self.names:
            if not isinstance(name, str) or not name:
                raise DomainError(f"ingredient names must be non-empty strings, got {name!r}")
            if name in seen:
                raise DomainError(f"duplicate ingredient name {name!r}")
            seen.add(name)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise BasisError(f"unknown ingredient {name!r} (basis: {', '.join(self.names)})") from None


@dataclass(frozen=True)
class Composition:
    """A mass-fraction vector over an ingredient basis.

    Inputs are validated, never renormalized: a weight vector that does not
    sum to 1 within ``SUM_TOL`` is rejected so that data-entry errors in
    quiver files surface instead of being silently patched over.
    """

    basis: IngredientBasis
    weights: tuple[float, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) != len(self.basis):
            raise DomainError(
                f"weight vector has {len(weights)} entries for a basis of size {len(self.basis)}"
            )
        for name, w in zip(self.basis.names, weights):
            if not (-_BOUND_SLACK <= w <= 1.0 + _BOUND_SLACK):
                raise DomainError(f"weight of {name!r} is {w!r}, outside [0, 1]")
        total = sum(weights)
        if abs(total - 1.0) > SUM_TOL:
            raise DomainError(f"weights sum to {total!r}, expected 1 within {SUM_TOL}")

    @classmethod
    def pure(cls, basis: IngredientBasis, name: str) -> "Composition":
        """The unit vector putting all mass on one ingredient."""
        i = basis.index(name)
        return cls(basis, tuple(1.0 if j == i else 0.0 for j in range(len(basis))))

    @classmethod
    def from_mapping(cls, basis: IngredientBasis, fractions: dict[str, float]) -> "Composition":
        """Build from a name -> fraction mapping; omitted ingredients are 0."""
        weights = [0.0] * len(basis)
        for name, value in fractions.items():
            weights[basis.index(name)] = float(value)
        return cls(basis, tuple(weights))

    def __getitem__(self, name: str) -> float:
        return self.weights[self.basis.index(name)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.basis.names, self.weights))


@dataclass(frozen=True)
class Food:
    """A vertex of a mixing graph: a named product with a base composition.

    ``kind`` is the food's category ("cookie", "candy", ...).  Mixing A into
    B yields a product of B's kind, which is why mixing is not commutative:
    candy-into-cookie is a cookie while cookie-into-candy is a candy.
    """

    name: str
    kind: str
    base: Composition

    def __post_init__(self):
        if not self.name:
            raise DomainError("food name must be non-empty")
        if not self.kind:
            raise DomainError("food kind must be non-empty")


def _require_same_basis(a: Composition, b: Composition) -> None:
    # bases compare by name list, not identity: compositions parsed from
    # different files must interoperate
    if a.basis.names != b.basis.names:
        raise BasisError(
            f"basis mismatch: ({', '.join(a.basis.names)}) vs ({', '.join(b.basis.names)})"
        )


def mix(base: Composition, mixin: Composition, f: float) -> Composition:
    """Incorporate ``mixin`` into ``base`` at mass fraction ``f``.

    Returns (1-f)*base + f*mixin componentwise.  Requires both compositions
    to share a basis and f in [0, 1].
    """
    _require_same_basis(base, mixin)
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise DomainError(f"mix fraction must lie in [0, 1], got {f!r}")
    weights = tuple((1.0 - f) * x + f * y for x, y in zip(base.weights, mixin.weights))
    return Composition(base.basis, weights)


def carrier_expand(state: Composition, alpha: float, filler: str) -> Composition:
    """Expand a filling state into a whole-product composition.

    The whole product is alpha parts the given state and (1-alpha) parts the
    pure filler ingredient: alpha*state + (1-alpha)*e_filler.  Self-loop
    edges use this to model "the thing mixed back in is the whole product,
    not just its filling".
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"carrier fraction must lie in [0, 1], got {alpha!r}")
    return mix(Composition.pure(state.basis, filler), state, alpha)


def product_kind(a: Food, b: Food) -> str:
    """Kind of the product obtained by mixing ``a`` into ``b``.

    The receiving food decides the category: mixing anything into a cookie
    gives a cookie.
    """
    return b.kind
