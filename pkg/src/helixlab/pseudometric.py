"""Constant diagonal pseudo-Euclidean metrics on R^n."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

DEFAULT_NULL_TOL = 1e-9


class CausalCharacter(enum.Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    NULL = "Null"


@dataclass(frozen=True)
class SignatureMetric:
    """Diagonal metric ``diag(signs)`` with every entry in {-1, +1}.

    Signs are kept as Python ints so that products of causal characters
    stay exact.
    """

    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"metric signs must be -1 or +1, got {self.signs!r}")
        signs = tuple(int(s) for s in self.signs)
        if len(signs) < 2:
            raise DimensionError("metric needs at least two dimensions")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def euclidean(cls, dim: int) -> SignatureMetric:
        return cls((1,) * dim)

    @classmethod
    def lorentzian(cls, dim: int) -> SignatureMetric:
        """Minkowski metric with the first coordinate timelike."""
        return cls((-1,) + (1,) * (dim - 1))

    @property
    def dim(self) -> int:
        return len(self.signs)

    @property
    def index(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def diag(self) -> np.ndarray:
        return np.array(self.signs, dtype=float)

    def to_json(self) -> dict:
        return {"signs": list(self.signs)}

    @classmethod
    def from_json(cls, data: dict) -> SignatureMetric:
        return cls(tuple(data["signs"]))

    def _check(self, *vectors) -> list[np.ndarray]:
        out = []
        for v in vectors:
            a = np.asarray(v, dtype=float)
            if a.shape[-1] != self.dim:
                raise DimensionError(
                    f"expected vectors of length {self.dim}, got shape {a.shape}"
                )
            out.append(a)
        return out


def inner(m: SignatureMetric, X, Y) -> float:
    """g(X, Y) = sum_j signs[j] X_j Y_j.

    Accepts stacks of vectors along the leading axes, in which case the
    result is an array.
    """
    x, y = m._check(X, Y)
    # fixed left-to-right accumulation keeps g(X,Y) == g(Y,X) bit for bit
    acc = m.signs[0] * (x[..., 0] * y[..., 0])
    for j in range(1, m.dim):
        acc = acc + m.signs[j] * (x[..., j] * y[..., j])
    if np.ndim(acc) == 0:
        return float(acc)
    return acc


def norm(m: SignatureMetric, X) -> float:
    """||X|| = sqrt(|g(X, X)|); zero for null vectors."""
    return np.sqrt(np.abs(inner(m, X, X)))


def causal_character(m: SignatureMetric, X, null_tol: float = DEFAULT_NULL_TOL) -> CausalCharacter:
    if null_tol < 0:
        raise ValueError("null_tol must be non-negative")
    (x,) = m._check(X)
    q = inner(m, x, x)
    if abs(q) <= null_tol * (1.0 + float(np.dot(x, x))):
        return CausalCharacter.NULL
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def null_margin(m: SignatureMetric, X) -> float:
    """|g(X,X)| relative to 1 + |X|^2, the quantity compared with null_tol."""
    (x,) = m._check(X)
    return abs(inner(m, x, x)) / (1.0 + float(np.dot(x, x)))


def raise_covector(m: SignatureMetric, df) -> np.ndarray:
    """Index raising: the vector G with g(G, X) = df(X) for every X."""
    (d,) = m._check(df)
    return m.diag * d
