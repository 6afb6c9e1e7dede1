from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-8
    abs_floor: float = 1e-12
    degeneracy: float = 1e-8
    # frame pairing and involutivity
    frame: float = 1e-7
    # sigma_min / sigma_max below this is a singular verdict
    singular: float = 1e-6
    builder: float = 1e-10
    det_split: float = 1e-9
    bianchi: float = 1e-7
    # marginal band factor for classification reports
    marginal_factor: float = 10.0

    def with_overrides(self, **kw) -> "Tolerances":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class CorpusConfig:
    """Parameters for random metric draws."""

    dims: tuple[int, ...] = (5, 6, 7)
    degree: int = 3
    amplitude: float = 0.3
    size: int = 100
    seed: int = 0
