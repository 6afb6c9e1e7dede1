"""Bundled metrics, frames and synthetic tensors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chart import ChartMetric, flat_metric, jet_at, random_metric
from .config import CorpusConfig
from .errors import DegenerateMetric
from .frame import FrameField, RationalFrame, adapted_frame_jet
from .poly import Poly


@dataclass(frozen=True)
class Fixture:
    name: str
    chart: ChartMetric
    frame: FrameField
    points: tuple


def sample_points(n: int, count: int, rng: np.random.Generator, radius: float = 0.5) -> list[np.ndarray]:
    """Points in the complex polydisc of the given radius."""
    return [radius * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)) / np.sqrt(2) for _ in range(count)]


def coordinate_frame(n: int) -> RationalFrame:
    """``xi_mu = d/dv^mu``, ``xi~_mu = d/du^mu`` (and ``xi_0 = d/dz``) on the flat chart."""
    num = [[Poly.const(n, 1.0 if i == j else 0.0) for i in range(n)] for j in _frame_coords(n)]
    return RationalFrame(num)


def _frame_coords(n: int) -> list[int]:
    m = n // 2
    order = [m + mu for mu in range(m)] + list(range(m))
    return order + ([n - 1] if n % 2 else [])


def flat(n: int, count: int = 3, seed: int = 0) -> Fixture:
    rng = np.random.default_rng(seed)
    return Fixture(f"flat{n}", flat_metric(n), coordinate_frame(n), tuple(sample_points(n, count, rng)))


def default_wave_profile(n: int) -> Poly:
    """``(u2)^2 + (u3)^2`` (``(u2)^2`` when only two null pairs exist)."""
    u2 = Poly.var(n, 1)
    H = u2 * u2
    if n // 2 >= 3:
        u3 = Poly.var(n, 2)
        H = H + u3 * u3
    return H


def pp_wave_metric(n: int, H: Poly | None = None) -> ChartMetric:
    """``2 sum du^mu dv^mu + H (du^1)^2 (+ dz^2)``."""
    H = default_wave_profile(n) if H is None else H
    base = flat_metric(n)
    rows = [list(r) for r in base.g]
    rows[0][0] = rows[0][0] + H
    return ChartMetric.from_rows(rows, base.coords)


def pp_wave_frame(n: int, H: Poly | None = None) -> RationalFrame:
    """``xi_mu = d/dv^mu``, ``xi~_1 = d/du^1 - H/2 d/dv^1``, other ``xi~_mu = d/du^mu``."""
    H = default_wave_profile(n) if H is None else H
    m = n // 2
    num = []
    for j in _frame_coords(n):
        num.append([Poly.const(n, 1.0 if i == j else 0.0) for i in range(n)])
    # tilde vector for mu = 1 sits at frame position m
    num[m][m] = H * (-0.5)
    return RationalFrame(num)


def pp_wave(n: int = 6, H: Poly | None = None, count: int = 3, seed: int = 0) -> Fixture:
    rng = np.random.default_rng(seed)
    return Fixture(f"ppwave{n}", pp_wave_metric(n, H), pp_wave_frame(n, H), tuple(sample_points(n, count, rng)))


def random_fixture(n: int, degree: int, rng: np.random.Generator, amplitude: float = 0.3,
                   twist: float = 0.5) -> Fixture:
    """Random polynomial metric with a frame normalized to first order at one point."""
    for _ in range(20):
        chart = random_metric(n, degree, rng, amplitude)
        x = sample_points(n, 1, rng)[0]
        try:
            jet = jet_at(chart, x)
        except DegenerateMetric:
            continue
        return Fixture(f"random{n}", chart, adapted_frame_jet(jet, rng, twist), (x,))
    raise DegenerateMetric("could not draw a nondegenerate random metric")


def corpus(cfg: CorpusConfig = CorpusConfig(), dims=None, degree=None) -> list[Fixture]:
    """Seeded corpus of random fixtures cycling through the configured dimensions."""
    rng = np.random.default_rng(cfg.seed)
    dims = dims or cfg.dims
    degree = cfg.degree if degree is None else degree
    return [random_fixture(dims[i % len(dims)], degree, rng, cfg.amplitude) for i in range(cfg.size)]


def conformal_factors(n: int) -> dict[str, Poly]:
    """The three bundled conformal factors ``1+u1``, ``1+v1/2``, ``1+u2/3``."""
    m = n // 2
    one = Poly.const(n, 1.0)
    return {
        "1+u1": one + Poly.var(n, 0),
        "1+v1/2": one + Poly.var(n, m) * 0.5,
        "1+u2/3": one + Poly.var(n, 1) * (1.0 / 3.0),
    }
