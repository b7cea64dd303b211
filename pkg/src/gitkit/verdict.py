"""Classification result shared by the flow-based and the exact torus routes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

KLASSES = ("unstable", "semistable", "polystable", "stable", "semistable_polystability_undetermined")


@dataclass(eq=False)
class StabilityVerdict:
    """Stability class of a point with its certificate.

    ``certificate`` holds ``xi_unit`` (an ``AlgebraVector``) for unstable
    points and ``x_zero`` (a ``ProjectivePoint`` with vanishing moment map)
    otherwise.  ``extras`` keeps non-serialized artifacts such as the flow
    trajectory.
    """

    klass: str
    m_estimate: float
    certificate: dict
    sigma_min_isotropy: float | None = None
    diagnostics: list = field(default_factory=list)
    method: str = "flow"
    extras: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.klass not in KLASSES:
            raise ValueError(f"unknown class {self.klass!r}")

    @property
    def xi_unit(self):
        return self.certificate.get("xi_unit")

    @property
    def x_zero(self):
        return self.certificate.get("x_zero")

    def to_json(self) -> dict:
        cert: dict = {}
        for key, val in self.certificate.items():
            if hasattr(val, "coords"):
                cert[key] = [float(c) for c in val.coords]
            elif hasattr(val, "v"):
                cert[key] = [[float(z.real), float(z.imag)] for z in np.asarray(val.v)]
            elif isinstance(val, (int, float, str, bool)) or val is None:
                cert[key] = val
            else:
                cert[key] = np.asarray(val, dtype=float).tolist()
        return {
            "class": self.klass,
            "m": float(self.m_estimate),
            "certificate": cert,
            "diagnostics": list(self.diagnostics),
            "method": self.method,
            "sigma_min_isotropy": None if self.sigma_min_isotropy is None else float(self.sigma_min_isotropy),
        }
