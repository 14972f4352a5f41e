"""Chains, spin configurations and charge-sector block operators."""
from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import ParameterError, RootOfUnityError
from ..laurent import DeltaSeries, is_root_of_unity
from ..repmod import _check_q


@dataclass(frozen=True)
class ChainSpec:
    """Quantum space ``V(1)_{w_1} x ... x V(1)_{w_N}``."""

    N: int
    w: tuple[complex, ...]
    q: complex

    def __post_init__(self):
        if self.N < 1:
            raise ParameterError("N must be positive")
        w = tuple(complex(x) for x in self.w)
        if len(w) != self.N:
            raise ParameterError(f"need {self.N} inhomogeneities, got {len(w)}")
        if any(x == 0 for x in w):
            raise ParameterError("inhomogeneities must be nonzero")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "q", _check_q(self.q))

    @classmethod
    def homogeneous(cls, N: int, w: complex, q: complex) -> "ChainSpec":
        return cls(N, (complex(w),) * N, q)

    @property
    def is_homogeneous(self) -> bool:
        return all(x == self.w[0] for x in self.w)


@dataclass(frozen=True)
class SpinConfig:
    spins: tuple[int, ...]

    def __post_init__(self):
        spins = tuple(int(s) for s in self.spins)
        if any(s not in (1, -1) for s in spins):
            raise ParameterError("spins must be +1 or -1")
        object.__setattr__(self, "spins", spins)

    @property
    def charge(self) -> int:
        return sum(self.spins)

    def __str__(self) -> str:
        return "".join("+" if s == 1 else "-" for s in self.spins)

    @classmethod
    def parse(cls, text: str) -> "SpinConfig":
        if any(c not in "+-" for c in text):
            raise ParameterError(f"bad spin string {text!r}")
        return cls(tuple(1 if c == "+" else -1 for c in text))


def sector_charges(N: int) -> tuple[int, ...]:
    return tuple(range(-N, N + 1, 2))


def check_charge(N: int, n: int) -> None:
    if abs(n) > N or (N - n) % 2:
        raise ParameterError(f"charge {n} impossible for N = {N}")


@lru_cache(maxsize=None)
def _sector_spins(N: int, n: int) -> np.ndarray:
    check_charge(N, n)
    rows = [c for c in itertools.product((1, -1), repeat=N) if sum(c) == n]
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), N)
    arr.setflags(write=False)
    return arr


def sector_spins(N: int, n: int) -> np.ndarray:
    """Spin configurations of sector ``n`` in lexicographic order (``+`` before ``-``), shape ``(D, N)``."""
    return _sector_spins(N, n)


def sector_indices(N: int, n: int) -> np.ndarray:
    """Same as :func:`sector_spins` with ``+ -> 0``, ``- -> 1``."""
    return ((1 - sector_spins(N, n)) // 2).astype(np.intp)


def sector_basis(N: int, n: int) -> list[SpinConfig]:
    return [SpinConfig(tuple(r)) for r in sector_spins(N, n)]


def guard_q(q: complex, N: int, allow_root_of_unity: bool = False) -> None:
    """Reject ``q`` within 1e-3 of a root of unity of order ``<= 2N`` unless allowed."""
    if allow_root_of_unity:
        return
    k = is_root_of_unity(q, 2 * N)
    if k is not None:
        raise RootOfUnityError(f"|q**{k} - 1| < 1e-3; enable root-of-unity mode to proceed")


# --------------------------------------------------------------------------
# delta-valued blocks


@dataclass(frozen=True)
class DeltaBlock:
    """Dense ``(K, D, D)`` coefficients of ``delta(q**(kmin + i))``."""

    coeffs: np.ndarray
    kmin: int

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def kmax(self) -> int:
        return self.kmin + self.coeffs.shape[0] - 1

    def exponents(self) -> range:
        return range(self.kmin, self.kmax + 1)

    def entry(self, a: int, b: int) -> DeltaSeries:
        return DeltaSeries((k, c) for k, c in zip(self.exponents(), self.coeffs[:, a, b]) if c != 0)

    def coefficient(self, k: int) -> np.ndarray:
        if self.kmin <= k <= self.kmax:
            return self.coeffs[k - self.kmin]
        return np.zeros(self.coeffs.shape[1:], complex)

    def support(self, rtol: float = 1e-12) -> tuple[int, ...]:
        mags = np.abs(self.coeffs).reshape(self.coeffs.shape[0], -1).max(axis=1)
        top = mags.max(initial=0.0)
        return tuple(k for k, m in zip(self.exponents(), mags) if m > rtol * top and m > 0)

    def reduce(self, q: complex, atol: float = 1e-9) -> "DeltaBlock":
        """Keep only symbols with ``q**k == 1`` (the shift identity kills the rest)."""
        keep = np.array([abs(complex(q) ** k - 1) <= atol for k in self.exponents()])
        return DeltaBlock(np.where(keep[:, None, None], self.coeffs, 0), self.kmin)

    def regularize(self, q: complex, delta0: complex = 1.0, atol: float = 1e-9) -> np.ndarray:
        return complex(delta0) * self.reduce(q, atol).coeffs.sum(axis=0)

    def left(self, M: np.ndarray) -> "DeltaBlock":
        return DeltaBlock(np.einsum("ab,kbc->kac", M, self.coeffs), self.kmin)

    def right(self, M: np.ndarray) -> "DeltaBlock":
        return DeltaBlock(np.einsum("kab,bc->kac", self.coeffs, M), self.kmin)

    @staticmethod
    def combine(*terms: tuple[complex, "DeltaBlock"]) -> "DeltaBlock":
        lo = min(t.kmin for _, t in terms)
        hi = max(t.kmax for _, t in terms)
        D = terms[0][1].dim
        out = np.zeros((hi - lo + 1, D, D), complex)
        for c, t in terms:
            out[t.kmin - lo : t.kmax - lo + 1] += c * t.coeffs
        return DeltaBlock(out, lo)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorOperator:
    """Block-diagonal operator; ``blocks[n]`` is an ndarray (scalar) or a :class:`DeltaBlock`."""

    N: int
    kind: str
    blocks: dict = field(repr=False)

    def __post_init__(self):
        if self.kind not in ("scalar", "delta"):
            raise ValueError(f"unknown entry kind {self.kind!r}")
        for n, blk in self.blocks.items():
            check_charge(self.N, n)
            D = math.comb(self.N, (self.N + n) // 2)
            shape = blk.shape if self.kind == "scalar" else blk.coeffs.shape[1:]
            if tuple(shape) != (D, D):
                raise ParameterError(f"sector {n} block has shape {shape}, expected {(D, D)}")

    @property
    def sectors(self) -> tuple[int, ...]:
        return tuple(sorted(self.blocks))

    def block(self, n: int):
        return self.blocks[n]

    def restrict(self, sectors: Iterable[int]) -> "SectorOperator":
        return SectorOperator(self.N, self.kind, {n: self.blocks[n] for n in sectors})

    def to_full(self) -> np.ndarray:
        """Dense ``2**N`` matrix in lexicographic order (tests only)."""
        if self.kind != "scalar":
            raise TypeError("only scalar operators have a dense form")
        all_cfg = list(itertools.product((1, -1), repeat=self.N))
        pos = {c: i for i, c in enumerate(all_cfg)}
        M = np.zeros((2**self.N, 2**self.N), complex)
        for n, blk in self.blocks.items():
            idx = [pos[tuple(r)] for r in sector_spins(self.N, n)]
            M[np.ix_(idx, idx)] = blk
        return M

    def strip(self, q: complex | None = None) -> "SectorOperator":
        """Coefficient of ``delta(q**n)`` in each sector ``n``, as a scalar operator."""
        if self.kind != "delta":
            raise TypeError("strip applies to delta-valued operators")
        return SectorOperator(self.N, "scalar", {n: b.coefficient(n) for n, b in self.blocks.items()})

    def regularize(self, q: complex, delta0: complex = 1.0) -> "SectorOperator":
        if self.kind != "delta":
            raise TypeError("regularize applies to delta-valued operators")
        return SectorOperator(self.N, "scalar", {n: b.regularize(q, delta0) for n, b in self.blocks.items()})

    def __matmul__(self, other: "SectorOperator") -> "SectorOperator":
        if not isinstance(other, SectorOperator):
            return NotImplemented
        if other.N != self.N:
            raise ParameterError("operators act on chains of different length")
        common = sorted(set(self.blocks) & set(other.blocks))
        if self.kind == "scalar" and other.kind == "scalar":
            return SectorOperator(self.N, "scalar", {n: self.blocks[n] @ other.blocks[n] for n in common})
        if self.kind == "delta" and other.kind == "scalar":
            return SectorOperator(self.N, "delta", {n: self.blocks[n].right(other.blocks[n]) for n in common})
        if self.kind == "scalar" and other.kind == "delta":
            return SectorOperator(self.N, "delta", {n: other.blocks[n].left(self.blocks[n]) for n in common})
        raise TypeError("product of two delta-valued operators needs commutator_norms")

    def to_json(self) -> dict:
        sectors = []
        for n in self.sectors:
            basis = [str(c) for c in sector_basis(self.N, n)]
            blk = self.blocks[n]
            if self.kind == "scalar":
                entries = [[[complex(x).real, complex(x).imag] for x in row] for row in np.asarray(blk)]
            else:
                D = blk.dim
                entries = [[blk.entry(a, b).to_json() for b in range(D)] for a in range(D)]
            sectors.append({"n": n, "basis": basis, "kind": self.kind, "entries": entries})
        return {"N": self.N, "sectors": sectors}

    @classmethod
    def from_json(cls, obj: dict) -> "SectorOperator":
        N = int(obj["N"])
        blocks = {}
        kinds = set()
        for sec in obj["sectors"]:
            n = int(sec["n"])
            kinds.add(sec["kind"])
            expected = [str(c) for c in sector_basis(N, n)]
            if list(sec["basis"]) != expected:
                raise ValueError(f"sector {n}: basis does not match lexicographic order")
            D = len(expected)
            if sec["kind"] == "scalar":
                vals = np.array([[complex(re, im) for re, im in row] for row in sec["entries"]], complex)
                if vals.shape != (D, D):
                    raise ValueError(f"sector {n}: expected a {D}x{D} block")
                blocks[n] = vals
            else:
                rows = sec["entries"]
                if len(rows) != D or any(len(r) != D for r in rows):
                    raise ValueError(f"sector {n}: expected a {D}x{D} block")
                series = [DeltaSeries.from_json(e) for r in rows for e in r]
                ks = sorted({k for s in series for k in s.support}) or [n]
                kmin, kmax = ks[0], ks[-1]
                arr = np.zeros((kmax - kmin + 1, D, D), complex)
                for idx, s in enumerate(series):
                    for k, c in s.items():
                        arr[k - kmin, idx // D, idx % D] = c
                blocks[n] = DeltaBlock(arr, kmin)
        if len(kinds) > 1:
            raise ValueError("mixed entry kinds")
        return cls(N, kinds.pop() if kinds else "scalar", blocks)


def cross_sector_mass(op: SectorOperator) -> float:
    """Mass of the dense matrix outside the diagonal charge blocks (0 by construction)."""
    M = op.to_full()
    charges = np.array([sum(c) for c in itertools.product((1, -1), repeat=op.N)])
    mask = charges[:, None] != charges[None, :]
    return float(np.abs(M[mask]).max(initial=0.0))


def all_sectors(N: int, sectors: Sequence[int] | None = None) -> tuple[int, ...]:
    if sectors is None:
        return sector_charges(N)
    for n in sectors:
        check_charge(N, n)
    return tuple(sectors)
