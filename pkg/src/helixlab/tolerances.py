"""Numeric tolerances shared by every verdict in the library."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import SpecParseError

ENV_RTOL = "HELIXLAB_TOL_RTOL"


@dataclass(frozen=True)
class Tolerances:
    atol: float = 1e-9
    rtol: float = 1e-7
    atol_zero: float = 1e-6
    null_tol: float = 1e-9
    # relative threshold on |g(E,E)| / |E|^2 during Gram-Schmidt
    gs_tol: float = 1e-10
    quad_tol: float = 1e-12

    @classmethod
    def for_mode(cls, mode: str = "analytic", env: bool = True) -> Tolerances:
        """Defaults for a jet mode; ``HELIXLAB_TOL_RTOL`` overrides rtol."""
        tol = cls() if mode == "analytic" else cls(rtol=1e-4)
        raw = os.environ.get(ENV_RTOL) if env else None
        if raw:
            try:
                rtol = float(raw)
            except ValueError:
                raise SpecParseError(f"{ENV_RTOL}={raw!r} is not a number") from None
            if not rtol >= 0:
                raise SpecParseError(f"{ENV_RTOL} must be non-negative, got {raw!r}")
            tol = replace(tol, rtol=rtol)
        return tol

    def with_overrides(self, **kw) -> Tolerances:
        return replace(self, **{k: float(v) for k, v in kw.items() if v is not None})
