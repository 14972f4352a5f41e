"""Seeded parameter draws with degeneration guards and bounded redraws."""
from __future__ import annotations

import math
from collections.abc import Callable
from typing import Any

import numpy as np

from ..errors import QoplabError
from ..intertwine import BaxterParams
from ..laurent import is_root_of_unity
from ..repmod import BorelParams

MAX_REDRAWS = 100


class DrawError(QoplabError):
    """No acceptable draw within the redraw budget."""


class Sampler:
    """One 64-bit seeded generator shared by a whole run.

    Every accepted draw is appended to :attr:`log` together with the number
    of rejected attempts.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.rng = np.random.default_rng(np.random.SeedSequence(self.seed))
        self.log: list[dict[str, Any]] = []

    # primitives
    def scalar(self) -> complex:
        r = self.rng.uniform(0.5, 2.0)
        return complex(r * np.exp(2j * math.pi * self.rng.uniform()))

    def angle(self, lo: float = 0.05, hi: float = math.pi - 0.05) -> float:
        return float(self.rng.uniform(lo, hi))

    def _accept(self, label: str, make: Callable[[], dict], ok: Callable[[dict], bool]) -> dict:
        for attempt in range(MAX_REDRAWS + 1):
            d = make()
            if ok(d):
                self.log.append({"label": label, "rejected": attempt, "values": _loggable(d)})
                return d
        raise DrawError(f"{label}: no admissible draw after {MAX_REDRAWS} redraws")

    # composite draws
    def generic_q(self, N: int, label: str = "q", unit_circle: bool = False) -> complex:
        def make():
            return {"q": complex(np.exp(2j * math.pi * self.rng.uniform())) if unit_circle else self.scalar()}

        return self._accept(label, make, lambda d: is_root_of_unity(d["q"], max(2 * N, 4)) is None)["q"]

    def borel(self, q: complex, generic_s: bool = True, label: str = "borel") -> BorelParams:
        def make():
            return {"z": self.scalar(), "s0": self.scalar(), "s1": self.scalar() if generic_s else 0j, "s2": self.scalar() if generic_s else 0j}

        d = self._accept(label, make, lambda d: True)
        return BorelParams(d["z"], d["s0"], d["s1"], d["s2"])

    def borel_chain(self, N: int, generic_s: bool = True, label: str = "borel_chain", q: complex | None = None):
        """``(q, params, w)`` with ``w != z`` and ``w != q**2 z`` (also for the shifted ``z``)."""

        def make():
            return {
                "q": q if q is not None else self.scalar(),
                "z": self.scalar(),
                "w": self.scalar(),
                "s0": self.scalar(),
                "s1": self.scalar() if generic_s else 0j,
                "s2": self.scalar() if generic_s else 0j,
            }

        def ok(d):
            qq, z, w = d["q"], d["z"], d["w"]
            if q is None and is_root_of_unity(qq, max(2 * N, 4)) is not None:
                return False
            for zz in (z, z * qq**2, z / qq**2):
                if abs(w - qq * qq * zz) < 1e-3 * abs(w) or abs(w - zz) < 1e-3 * abs(w):
                    return False
            return True

        d = self._accept(label, make, ok)
        return d["q"], BorelParams(d["z"], d["s0"], d["s1"], d["s2"]), d["w"]

    def baxter(self, N: int, eta: float | None = None, label: str = "baxter", allow_root_of_unity: bool = False) -> BaxterParams:
        """``(eta, v, s0)``; ``q = e^{2i eta}`` is kept away from low-order roots of unity unless ``eta`` is given."""

        def make():
            return {"eta": eta if eta is not None else self.angle(), "v": self.angle(-1.5, 1.5), "s0": self.scalar()}

        def ok(d):
            bp = BaxterParams(d["eta"], d["v"], d["s0"])
            if not allow_root_of_unity and is_root_of_unity(bp.q, 2 * N) is not None:
                return False
            # R-matrix pole and phi pole: q**2 z / w = q exp(-2iv) must stay away from 1, also after shifts
            for sh in (0, 1, -1):
                b = bp if sh == 0 else bp.shifted(sh)
                if abs(1 - b.q**2 * b.z_over_w) < 1e-3:
                    return False
            return True

        d = self._accept(label, make, ok)
        return BaxterParams(d["eta"], d["v"], d["s0"])

    def root_of_unity_eta(self, order: int, label: str = "eta_root") -> float:
        """``eta = pi m / order`` with ``gcd(m, order) = 1``: ``q`` is a primitive ``order``-th root."""
        ms = [m for m in range(1, order) if math.gcd(m, order) == 1]
        m = ms[int(self.rng.integers(0, len(ms)))]
        self.log.append({"label": label, "rejected": 0, "values": {"order": order, "m": m}})
        return math.pi * m / order


def _loggable(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        else:
            out[k] = v
    return out
