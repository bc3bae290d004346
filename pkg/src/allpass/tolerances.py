"""Numerical thresholds shared across the package.

Exact-zero comparisons are never used for decisions; every such decision
goes through one of the thresholds below so that it can be overridden from
the command line.
"""
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # relative margin: a root is "on" the unit circle if ||a| - 1| <= unit_circle
    unit_circle: float = 1e-6
    # |imag| below this makes a root real; also the conjugate pairing distance
    real: float = 1e-8
    pair: float = 1e-8
    # two roots closer than this are treated as a multiple root
    multiplicity: float = 1e-7
    # smallest/largest singular value below this means "singular"
    rank: float = 1e-10
    # relative remainder allowed when dividing out a root
    division: float = 1e-7
    # max_imag allowed on outputs that must be real
    realness: float = 1e-8

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"tolerance {name!r} must be positive, got {value!r}")

    def with_overrides(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


DEFAULT = Tolerances()
