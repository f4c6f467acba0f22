"""Exact-rational models of filtered nilmanifolds.

A model is a unitriangular rational matrix group with a fixed adapted
basis X_1..X_m of its Lie algebra and level dimensions m_0 >= m_1 >= ...
Coordinates of the second kind (peel off exp(t_1 X_1), then exp(t_2 X_2),
...) identify the lattice with the integer-coordinate elements and each
level subgroup with a coordinate tail.  All arithmetic is Fractions; no
floating point ever touches a group element.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrices import (
    Matrix,
    RationalSpan,
    frac,
    is_strictly_upper,
    is_unitriangular,
    mat,
    mat_commutator,
    mat_identity,
    mat_mul,
    mat_scale,
    nilpotent_exp,
    nilpotent_log,
    unitriangular_inverse,
    upper_entries,
)


class OutsideGroupError(ValueError):
    """Element is not in the modeled group."""


@dataclass(frozen=True)
class UnitriangularElement:
    """A unitriangular rational matrix, immutable and exact."""

    entries: Matrix

    def __post_init__(self) -> None:
        rows = mat(self.entries)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        if not is_unitriangular(rows):
            raise ValueError("matrix must be unitriangular")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, dim: int) -> "UnitriangularElement":
        return cls(mat_identity(dim))

    @classmethod
    def exp(cls, x: Matrix) -> "UnitriangularElement":
        if not is_strictly_upper(x):
            raise ValueError("exp needs a strictly upper-triangular matrix")
        return cls(nilpotent_exp(x))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "UnitriangularElement") -> "UnitriangularElement":
        return UnitriangularElement(mat_mul(self.entries, other.entries))

    def inverse(self) -> "UnitriangularElement":
        return UnitriangularElement(unitriangular_inverse(self.entries))

    def __pow__(self, k: int) -> "UnitriangularElement":
        if k == 0:
            return UnitriangularElement.identity(self.dim)
        # exp(k log g) equals g^k and costs one exp regardless of k
        return UnitriangularElement(nilpotent_exp(mat_scale(k, self.log())))

    def log(self) -> Matrix:
        cached = self.__dict__.get("_log")
        if cached is None:
            cached = nilpotent_log(self.entries)
            object.__setattr__(self, "_log", cached)
        return cached

    def root(self, q: int) -> "UnitriangularElement":
        """The exact q-th root exp(log(g)/q)."""
        if q == 0:
            raise ValueError("zeroth root")
        return UnitriangularElement(nilpotent_exp(mat_scale(Fraction(1, q), self.log())))

    def is_identity(self) -> bool:
        return self.entries == mat_identity(self.dim)

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(str(x) for x in r) + "]" for r in self.entries]
        return "UnitriangularElement(" + "; ".join(rows) + ")"


def _validate_level_dims(level_dims: Sequence[int], m: int, prefiltration: bool) -> tuple[int, ...]:
    dims = tuple(int(x) for x in level_dims)
    if len(dims) < 2:
        raise ValueError("need level dimensions m_0, m_1, ..., m_s")
    if dims[0] != m:
        raise ValueError("m_0 must equal the basis size")
    if not prefiltration and dims[1] != m:
        raise ValueError("a filtration has G_0 = G_1 = G; pass prefiltration=True otherwise")
    if any(a < b for a, b in zip(dims, dims[1:])):
        raise ValueError("level dimensions must be non-increasing")
    if dims[-1] <= 0:
        raise ValueError("G_s must be nontrivial (drop empty levels)")
    return dims


@dataclass(frozen=True)
class FilteredNilmanifoldModel:
    """(G/Gamma, G_bullet, X) realized by unitriangular rational matrices.

    ``basis`` lists the adapted basis X_1..X_m as strictly upper-triangular
    matrices; ``level_dims`` is (m_0, m_1, ..., m_s) with m_{s+1} = 0
    implicit, so G_i is spanned by the last m_i basis vectors.
    """

    kappa: int
    basis: tuple[Matrix, ...]
    level_dims: tuple[int, ...]
    prefiltration: bool = False
    name: str | None = None

    def __post_init__(self) -> None:
        basis = tuple(mat(b) for b in self.basis)
        for b in basis:
            if len(b) != self.kappa or any(len(r) != self.kappa for r in b):
                raise ValueError("basis matrices must be kappa x kappa")
            if not is_strictly_upper(b):
                raise ValueError("basis matrices must be strictly upper-triangular")
        object.__setattr__(self, "basis", basis)
        dims = _validate_level_dims(self.level_dims, len(basis), self.prefiltration)
        object.__setattr__(self, "level_dims", dims)
        self._validate_structure()

    # -- shape helpers ------------------------------------------------------

    @property
    def dim(self) -> int:
        """m, the dimension of the group."""
        return len(self.basis)

    @property
    def degree(self) -> int:
        return len(self.level_dims) - 1

    def level_dim(self, i: int) -> int:
        """m_i, with m_i = 0 beyond the degree."""
        if i < 0:
            raise ValueError("levels start at 0")
        return self.level_dims[i] if i <= self.degree else 0

    def block(self, i: int) -> range:
        """0-based basis indices of the level-i block: [m - m_i, m - m_{i+1})."""
        return range(self.dim - self.level_dim(i), self.dim - self.level_dim(i + 1))

    def block_rank(self, i: int) -> int:
        """r_i = m_i - m_{i+1}."""
        return self.level_dim(i) - self.level_dim(i + 1)

    def level_of_index(self, a: int) -> int:
        """Deepest level i with basis index a (0-based) inside G_i."""
        lvl = 0
        for i in range(len(self.level_dims)):
            if a >= self.dim - self.level_dims[i]:
                lvl = i
        return lvl

    # -- validation ---------------------------------------------------------

    def _span(self) -> RationalSpan:
        return RationalSpan([upper_entries(b) for b in self.basis])

    def _validate_structure(self) -> None:
        span = self._span()
        if span.rank != self.dim:
            raise ValueError("basis matrices must be linearly independent")
        object.__setattr__(self, "_coord_span", span)
        m = self.dim
        # each tail span(X_{j+1}..X_m) must be an ideal
        brackets: dict[tuple[int, int], list[Fraction]] = {}
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                w = mat_commutator(self.basis[a], self.basis[b])
                coords = span.coordinates(upper_entries(w))
                if coords is None:
                    raise ValueError("basis is not bracket-closed")
                brackets[(a, b)] = coords
        for j in range(m):
            # [anything, X_b] for b > j must stay in span(X_{j+1}..)
            for a in range(m):
                for b in range(j + 1, m):
                    if a == b:
                        continue
                    coords = brackets[(a, b)]
                    if any(coords[c] != 0 for c in range(j + 1)):
                        raise ValueError(f"span(X_{j + 2}..X_{m}) is not an ideal")
        # filtration property on basis generators: [g_i, g_j] in g_{i+j}
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                la, lb = self.level_of_index(a), self.level_of_index(b)
                target = la + lb
                coords = brackets[(a, b)]
                cutoff = self.dim - self.level_dim(target)
                if any(coords[c] != 0 for c in range(cutoff)):
                    raise ValueError(
                        f"[G_{la}, G_{lb}] escapes G_{target}: bracket of X_{a+1}, X_{b+1}"
                    )
                if target > self.degree and any(c != 0 for c in coords):
                    raise ValueError(
                        f"[G_{la}, G_{lb}] must vanish beyond degree {self.degree}"
                    )
        object.__setattr__(self, "_bracket_coords", brackets)
        # lattice closure spot check on generators
        gens = [self.basis_element(a, 1) for a in range(m)]
        for x in gens:
            if not self.in_lattice(x.inverse()):
                raise ValueError("lattice is not closed under inverses")
        for x in gens:
            for y in gens:
                if not self.in_lattice(x * y):
                    raise ValueError("lattice is not closed under products")

    # -- elements and coordinates -------------------------------------------

    def identity(self) -> UnitriangularElement:
        return UnitriangularElement.identity(self.kappa)

    def basis_element(self, index: int, t) -> UnitriangularElement:
        """exp(t X_{index+1})."""
        return UnitriangularElement(nilpotent_exp(mat_scale(frac(t), self.basis[index])))

    def from_coords(self, coords: Sequence) -> UnitriangularElement:
        """exp(t_1 X_1) exp(t_2 X_2) ... exp(t_m X_m)."""
        if len(coords) != self.dim:
            raise ValueError(f"need {self.dim} coordinates")
        out = self.identity()
        for a, t in enumerate(coords):
            out = out * self.basis_element(a, t)
        return out

    def _peel(self, g: UnitriangularElement, count: int) -> tuple[list[Fraction], UnitriangularElement]:
        if g.dim != self.kappa:
            raise OutsideGroupError("wrong matrix dimension")
        span: RationalSpan = self._coord_span  # type: ignore[attr-defined]
        residual = g
        coords: list[Fraction] = []
        for j in range(count):
            lg = nilpotent_log(residual.entries)
            c = span.coordinates(upper_entries(lg))
            if c is None:
                raise OutsideGroupError("element leaves the basis span")
            if any(c[a] != 0 for a in range(j)):
                raise OutsideGroupError("residual has support below the peel index")
            t = c[j]
            coords.append(t)
            if t != 0:
                residual = self.basis_element(j, -t) * residual
        return coords, residual

    def malcev_coords(self, g: UnitriangularElement) -> tuple[Fraction, ...]:
        """psi(g): peel exp(t_j X_j) from the left, one index at a time."""
        coords, residual = self._peel(g, self.dim)
        if not residual.is_identity():
            raise OutsideGroupError("peeling left a nontrivial residual")
        return tuple(coords)

    def head_coords(self, g: UnitriangularElement, count: int) -> tuple[Fraction, ...]:
        """The first ``count`` Mal'cev coordinates, without peeling the rest.

        Exact for any g in the modeled group; cheaper than the full map
        when only a leading block is needed.
        """
        coords, _residual = self._peel(g, count)
        return tuple(coords)

    def in_group(self, g: UnitriangularElement) -> bool:
        try:
            self.malcev_coords(g)
            return True
        except OutsideGroupError:
            return False

    def in_lattice(self, g: UnitriangularElement) -> bool:
        try:
            coords = self.malcev_coords(g)
        except OutsideGroupError:
            return False
        return all(c.denominator == 1 for c in coords)

    def in_level(self, g: UnitriangularElement, i: int) -> bool:
        """g in G_i: the first m - m_i coordinates vanish."""
        coords = self.malcev_coords(g)
        cutoff = self.dim - self.level_dim(i)
        return all(coords[a] == 0 for a in range(cutoff))

    def in_lattice_level(self, g: UnitriangularElement, i: int) -> bool:
        coords = self.malcev_coords(g)
        cutoff = self.dim - self.level_dim(i)
        return all(coords[a] == 0 for a in range(cutoff)) and all(
            c.denominator == 1 for c in coords
        )

    def psi_level(self, i: int, g: UnitriangularElement) -> tuple[Fraction, ...]:
        """psi_i(g): the level-i coordinate block, for g in G_i."""
        coords = self.malcev_coords(g)
        cutoff = self.dim - self.level_dim(i)
        if any(coords[a] != 0 for a in range(cutoff)):
            raise ValueError(f"element is not in G_{i}")
        blk = self.block(i)
        return tuple(coords[a] for a in blk)

    def from_level_coords(self, i: int, block_coords: Sequence) -> UnitriangularElement:
        """psi_i^{-1}: the element of G_i with the given block and zero tail."""
        blk = self.block(i)
        if len(block_coords) != len(blk):
            raise ValueError(f"level {i} block has rank {len(blk)}")
        out = self.identity()
        for a, t in zip(blk, block_coords):
            out = out * self.basis_element(a, t)
        return out

    def frac_int_parts(
        self, g: UnitriangularElement
    ) -> tuple[UnitriangularElement, UnitriangularElement]:
        """({g}, [g]) with g = {g}[g], psi({g}) in [0,1)^m, [g] in Gamma.

        Right-multiplying by exp(-a X_j) fixes coordinates before j, so one
        sweep j = 1..m lands every coordinate in [0, 1).
        """
        residual = g
        int_parts: list[int] = []
        for j in range(self.dim):
            t = self.head_coords(residual, j + 1)[j]
            a = math.floor(t)
            int_parts.append(a)
            if a != 0:
                residual = residual * self.basis_element(j, -a)
        lattice = self.identity()
        for j in reversed(range(self.dim)):
            if int_parts[j] != 0:
                lattice = lattice * self.basis_element(j, int_parts[j])
        if (residual * lattice).entries != g.entries:
            raise AssertionError("fractional/integral split failed to reconstruct")
        return residual, lattice

    def bracket_coords(self, a: int, b: int) -> list[Fraction]:
        """Coordinates of [X_{a+1}, X_{b+1}] in the basis."""
        if a == b:
            return [Fraction(0)] * self.dim
        return self._bracket_coords[(a, b)]  # type: ignore[attr-defined]

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        obj = {
            "kappa": self.kappa,
            "basis": [[[str(x) for x in row] for row in b] for b in self.basis],
            "levelDims": list(self.level_dims),
            "degree": self.degree,
            "prefiltration": self.prefiltration,
        }
        if self.name:
            obj["name"] = self.name
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FilteredNilmanifoldModel":
        obj = json.loads(text)
        dims = obj["levelDims"]
        if "degree" in obj and obj["degree"] != len(dims) - 1:
            raise ValueError("degree must match levelDims length minus one")
        return cls(
            kappa=int(obj["kappa"]),
            basis=tuple(mat(b) for b in obj["basis"]),
            level_dims=tuple(int(x) for x in dims),
            prefiltration=bool(obj.get("prefiltration", False)),
            name=obj.get("name"),
        )

    @classmethod
    def load(cls, path) -> "FilteredNilmanifoldModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


# ---------------------------------------------------------------------------
# built-in models


def _entry_matrix(kappa: int, i: int, j: int) -> Matrix:
    rows = [[Fraction(0)] * kappa for _ in range(kappa)]
    rows[i][j] = Fraction(1)
    return tuple(tuple(r) for r in rows)


def heisenberg_lcs() -> FilteredNilmanifoldModel:
    """3x3 Heisenberg group with its lower central series; degree 2."""
    x = _entry_matrix(3, 0, 1)
    y = _entry_matrix(3, 1, 2)
    z = _entry_matrix(3, 0, 2)
    return FilteredNilmanifoldModel(
        kappa=3,
        basis=(x, y, z),
        level_dims=(3, 3, 1),
        name="heisenberg-lcs",
    )


def heisenberg_deg3() -> FilteredNilmanifoldModel:
    """Heisenberg group refiltered to degree 3 with G_2 = G_3 = center."""
    x = _entry_matrix(3, 0, 1)
    y = _entry_matrix(3, 1, 2)
    z = _entry_matrix(3, 0, 2)
    return FilteredNilmanifoldModel(
        kappa=3,
        basis=(x, y, z),
        level_dims=(3, 3, 1, 1),
        name="heisenberg-deg3",
    )


def torus(
    m: int,
    s: int,
    level_dims: Sequence[int] | None = None,
    prefiltration: bool = False,
) -> FilteredNilmanifoldModel:
    """Abelian R^m/Z^m with a coordinate filtration of degree s.

    Default level dimensions taper one coordinate per level and stay at
    least 1: m_i = max(m - i + 1, 1) for i >= 1, so torus(2, 2) has
    G_1 = R^2 and G_2 the last coordinate line.
    """
    if m < 1 or s < 1:
        raise ValueError("need m >= 1 and s >= 1")
    basis = tuple(_entry_matrix(m + 1, 0, j + 1) for j in range(m))
    if level_dims is None:
        dims = (m,) + tuple(max(m - i + 1, 1) for i in range(1, s + 1))
    else:
        dims = tuple(int(x) for x in level_dims)
        if len(dims) != s + 1:
            raise ValueError("level_dims must list m_0..m_s")
    return FilteredNilmanifoldModel(
        kappa=m + 1,
        basis=basis,
        level_dims=dims,
        prefiltration=prefiltration,
        name=f"torus:m={m},s={s}",
    )


_TORUS_RE = re.compile(r"^torus:m=(\d+),s=(\d+)$")


def model_by_name(name: str) -> FilteredNilmanifoldModel:
    """Resolve built-in model names: heisenberg-lcs, heisenberg-deg3, torus:m=..,s=.."""
    if name == "heisenberg-lcs":
        return heisenberg_lcs()
    if name == "heisenberg-deg3":
        return heisenberg_deg3()
    match = _TORUS_RE.match(name)
    if match:
        return torus(int(match.group(1)), int(match.group(2)))
    raise ValueError(
        f"unknown model {name!r}; use heisenberg-lcs, heisenberg-deg3, "
        "torus:m=<m>,s=<s>, or load a JSON model file"
    )
