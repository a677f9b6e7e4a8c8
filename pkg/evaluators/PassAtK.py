from fractions import Fraction
from math import comb

from pydantic import BaseModel, ConfigDict, model_validator


class AttemptRow(BaseModel):
    """Attempts made on one problem; an attempt succeeds when its mutated-problem proof verifies."""

    model_config = ConfigDict(frozen=True)

    problem_id: str
    n: int
    c: int
    outcomes: tuple = ()
    errors: tuple = ()

    @model_validator(mode="after")
    def _counts(self):
        if not 0 <= self.c <= self.n:
            raise ValueError("need 0 <= c <= n")
        return self


def _check(n: int, c: int, k: int):
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of attempts n={n}")
    if not 0 <= c <= n:
        raise ValueError("need 0 <= c <= n")


def pass_at_k_exact(n: int, c: int, k: int) -> Fraction:
    """1 − C(n−c, k) / C(n, k) as an exact rational."""
    _check(n, c, k)
    return 1 - Fraction(comb(n - c, k), comb(n, k))


def pass_at_k(n: int, c: int, k: int) -> float:
    """
    Unbiased pass@k estimate from n attempts of which c succeeded.

    Raises:
        ValueError: if k > n or k < 1.
    """
    return float(pass_at_k_exact(n, c, k))


def pass_at_k_usable(n: int, c: int, k: int) -> Fraction:
    """Like pass_at_k_exact, but a problem left with fewer than k attempts scores 1 if any succeeded."""
    if n < k:
        return Fraction(1) if c > 0 else Fraction(0)
    return pass_at_k_exact(n, c, k)
