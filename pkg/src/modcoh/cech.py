"""Cech cohomology of monomial line bundles on toric chart covers.

Every space here is covered by charts whose coordinate rings are spanned by
Laurent monomials.  A chart is a set of rays v; a monomial t^m is a section of
a line bundle over the chart when <m, v> >= bound(v) for each of its rays.  On
an intersection of charts only the rays common to all of them constrain m, so
for a fixed multidegree m the charts subsets T with t^m in F(U_T) form an
up-closed family.  The Cech complex splits into one finite complex of
QQ-vector spaces per multidegree, spanned by those subsets.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .poly import PolyRing, RingMap, format_fraction
from .verdict import Box, DefectError

__all__ = [
    "Constraint",
    "SectionLattice",
    "Ray",
    "CoveredSpace",
    "LineBundleDatum",
    "SliceCohomology",
    "CechComplex",
    "CohomologyReport",
    "projective_cover",
    "blowup_cover",
    "coordinate_blowup",
    "product_with_line",
    "point",
    "affine_space",
    "projective_bundle",
    "blowup_bundle",
    "modulus_bundle",
    "divisor_multiplicities",
    "projective_box",
    "cech_cohomology",
]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Constraint:
    """<coeffs, m> >= const (or == const), optionally tagged with a ray name."""

    coeffs: tuple[int, ...]
    const: int
    equality: bool = False
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if any(c not in (-1, 0, 1) for c in self.coeffs):
            raise ValueError(f"constraint coefficients must lie in {{-1, 0, 1}}: {self.coeffs}")

    def holds(self, m: Sequence[int]) -> bool:
        v = _dot(self.coeffs, m)
        return v == self.const if self.equality else v >= self.const

    def render(self, variables: Sequence[str]) -> str:
        parts = []
        for c, v in zip(self.coeffs, variables):
            if c:
                parts.append(("- " if c < 0 else "+ ") + v)
        lhs = " ".join(parts).lstrip("+ ") or "0"
        if lhs.startswith("- "):
            lhs = "-" + lhs[2:]
        return f"{lhs} {'==' if self.equality else '>='} {self.const}"


@dataclass(frozen=True)
class SectionLattice:
    """Laurent monomials t^m cut out by finitely many constraints."""

    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if len(c.coeffs) != len(self.variables):
                raise ValueError("constraint length does not match the variables")

    def __contains__(self, m) -> bool:
        return all(c.holds(m) for c in self.constraints)

    contains = __contains__

    def labels(self) -> frozenset[str]:
        return frozenset(c.label for c in self.constraints if c.label is not None)

    def constraint(self, label: str) -> Constraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(label)

    def restrict(self, labels: Iterable[str]) -> "SectionLattice":
        """Keep unlabeled constraints and those whose label is in ``labels``."""
        keep = frozenset(labels)
        return SectionLattice(self.variables, tuple(c for c in self.constraints
                                                    if c.label is None or c.label in keep))

    def shifted(self, exp: Sequence[int]) -> "SectionLattice":
        """t^exp times this lattice."""
        return SectionLattice(self.variables, tuple(
            Constraint(c.coeffs, c.const + _dot(c.coeffs, exp), c.equality, c.label)
            for c in self.constraints))

    def points(self, box: Box) -> list[tuple[int, ...]]:
        return [m for m in box if m in self]

    def __str__(self):
        return " and ".join(c.render(self.variables) for c in self.constraints) or "all monomials"


@dataclass(frozen=True)
class Ray:
    name: str
    vector: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))


@dataclass(frozen=True)
class CoveredSpace:
    """Ambient Laurent variables, rays, and charts given as sets of ray names.

    ``grading`` (for projective space) adds the equality <grading, m> = degree
    to every section lattice.
    """

    variables: tuple[str, ...]
    rays: tuple[Ray, ...]
    charts: tuple[tuple[str, frozenset[str]], ...]
    grading: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "rays", tuple(self.rays))
        object.__setattr__(self, "charts", tuple((c, frozenset(rs)) for c, rs in self.charts))
        n = len(self.variables)
        names = [r.name for r in self.rays]
        if len(set(names)) != len(names):
            raise ValueError("repeated ray names")
        for r in self.rays:
            if len(r.vector) != n or any(x not in (-1, 0, 1) for x in r.vector):
                raise ValueError(f"ray {r.name} must have {n} entries in {{-1, 0, 1}}")
        if not self.charts:
            raise ValueError("a cover needs at least one chart")
        cnames = [c for c, _ in self.charts]
        if len(set(cnames)) != len(cnames):
            raise ValueError("repeated chart names")
        for c, rs in self.charts:
            unknown = rs - set(names)
            if unknown:
                raise ValueError(f"chart {c} uses unknown rays {sorted(unknown)}")
        if self.grading is not None and len(self.grading) != n:
            raise ValueError("grading vector has the wrong length")

    @property
    def chart_names(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.charts)

    def ray(self, name: str) -> Ray:
        for r in self.rays:
            if r.name == name:
                return r
        raise KeyError(name)

    def chart_rays(self, chart: str) -> frozenset[str]:
        for c, rs in self.charts:
            if c == chart:
                return rs
        raise KeyError(chart)

    def used_rays(self) -> frozenset[str]:
        return frozenset().union(*(rs for _, rs in self.charts))

    def shared_rays(self, charts: Iterable[str]) -> frozenset[str]:
        sets = [self.chart_rays(c) for c in charts]
        return frozenset.intersection(*sets) if sets else frozenset(r.name for r in self.rays)

    def reordered(self, order: Sequence[str]) -> "CoveredSpace":
        if sorted(order) != sorted(self.chart_names):
            raise ValueError("order must be a permutation of the chart names")
        return CoveredSpace(self.variables, self.rays, tuple((c, self.chart_rays(c)) for c in order),
                            self.grading, self.name)

    def coordinate_lattice(self, chart: str) -> SectionLattice:
        """Monomials of the chart's coordinate ring (degree 0 when graded)."""
        return LineBundleDatum(self, degree=0 if self.grading else None).chart_lattice(chart)

    def chart_coordinates(self, chart: str) -> tuple[str, ...]:
        return tuple(f"u_{r}" for r in sorted(self.chart_rays(chart)))

    def chart_map(self, chart: str) -> RingMap:
        """QQ[ambient] -> QQ[u_rho], t_j -> prod u_rho^{v_rho[j]}.

        Needs the chart's rays to form a lattice basis with nonnegative entries.
        """
        rays = sorted(self.chart_rays(chart))
        n = len(self.variables)
        if len(rays) != n or self.grading is not None:
            raise ValueError(f"chart {chart} is not a smooth affine chart of the ambient space")
        mat = [self.ray(r).vector for r in rays]
        if abs(_det(mat)) != 1:
            raise ValueError(f"rays of chart {chart} are not a lattice basis")
        if any(x < 0 for row in mat for x in row):
            raise ValueError(f"ambient coordinates are not regular on chart {chart}")
        source = PolyRing(self.variables)
        target = PolyRing(self.chart_coordinates(chart))
        images = tuple(target.monomial([mat[i][j] for i in range(n)]) for j in range(n))
        return RingMap(source, target, images)


def _det(rows: Sequence[Sequence[int]]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class LineBundleDatum:
    """Per-ray bounds (missing rays have bound 0) and, if graded, a degree."""

    space: CoveredSpace
    bounds: tuple[tuple[str, int], ...] = ()
    degree: int | None = None
    label: str = ""

    def __post_init__(self):
        b = dict(self.bounds) if not isinstance(self.bounds, Mapping) else dict(self.bounds)
        names = {r.name for r in self.space.rays}
        if set(b) - names:
            raise ValueError(f"bounds for unknown rays {sorted(set(b) - names)}")
        object.__setattr__(self, "bounds", tuple(sorted((k, int(v)) for k, v in b.items() if v)))
        if (self.space.grading is None) != (self.degree is None):
            raise ValueError("a degree is required exactly when the space is graded")

    def bound(self, ray: str) -> int:
        return dict(self.bounds).get(ray, 0)

    def effective_bounds(self) -> dict[str, int]:
        """Bounds along rays that some chart uses; the others never matter."""
        used = self.space.used_rays()
        return {k: v for k, v in self.bounds if k in used}

    def _constraint(self, ray: Ray) -> Constraint:
        return Constraint(ray.vector, self.bound(ray.name), label=ray.name)

    def _grading(self) -> tuple[Constraint, ...]:
        if self.space.grading is None:
            return ()
        return (Constraint(self.space.grading, self.degree, equality=True),)

    def chart_lattice(self, chart: str) -> SectionLattice:
        rays = sorted(self.space.chart_rays(chart))
        return SectionLattice(self.space.variables,
                              tuple(self._constraint(self.space.ray(r)) for r in rays) + self._grading())

    def lattice(self, charts: Iterable[str]) -> SectionLattice:
        """Sections over the intersection of ``charts``."""
        rays = sorted(self.space.shared_rays(charts))
        return SectionLattice(self.space.variables,
                              tuple(self._constraint(self.space.ray(r)) for r in rays) + self._grading())

    def global_lattice(self) -> SectionLattice:
        rays = self.space.used_rays()
        return SectionLattice(self.space.variables,
                              tuple(self._constraint(self.space.ray(r)) for r in sorted(rays)) + self._grading())

    def tensor(self, other: "LineBundleDatum") -> "LineBundleDatum":
        if other.space != self.space:
            raise ValueError("bundles live on different spaces")
        b = dict(self.bounds)
        for k, v in other.bounds:
            b[k] = b.get(k, 0) + v
        deg = None if self.degree is None else self.degree + other.degree
        return LineBundleDatum(self.space, tuple(b.items()), deg)

    @classmethod
    def from_chart_lattices(cls, space: CoveredSpace, lattices: Mapping[str, SectionLattice],
                            degree: int | None = None, label: str = "") -> "LineBundleDatum":
        """Glue chart lattices; each must constrain exactly its chart's rays and
        charts sharing a ray must agree on its bound (Cartier compatibility)."""
        bounds: dict[str, int] = {}
        for chart in space.chart_names:
            lat = lattices[chart]
            if lat.labels() != space.chart_rays(chart):
                raise ValueError(f"lattice of chart {chart} constrains {sorted(lat.labels())}, "
                                 f"expected {sorted(space.chart_rays(chart))}")
            for r in space.chart_rays(chart):
                c = lat.constraint(r)
                if c.coeffs != space.ray(r).vector or c.equality:
                    raise ValueError(f"constraint {r} on chart {chart} is not of ray form")
                if bounds.setdefault(r, c.const) != c.const:
                    raise ValueError(f"charts disagree on the bound along {r}")
        return cls(space, tuple(bounds.items()), degree, label)

    def describe(self) -> str:
        if self.label:
            return self.label
        parts = [f"{k}:{v}" for k, v in self.bounds]
        if self.degree is not None:
            parts.insert(0, f"degree {self.degree}")
        return "bounds(" + ", ".join(parts) + ")"


# ---------------------------------------------------------------- spaces


def _unit(n: int, j: int) -> tuple[int, ...]:
    return tuple(int(i == j) for i in range(n))


def projective_cover(n: int) -> CoveredSpace:
    if n < 1:
        raise ValueError("projective space needs n >= 1")
    variables = tuple(f"t{j}" for j in range(n + 1))
    rays = tuple(Ray(v, _unit(n + 1, j)) for j, v in enumerate(variables))
    charts = tuple((f"U{k}", frozenset(v for j, v in enumerate(variables) if j != k)) for k in range(n + 1))
    return CoveredSpace(variables, rays, charts, grading=(1,) * (n + 1), name=f"P^{n}")


def coordinate_blowup(variables: Sequence[str], center: Sequence[str],
                      chart_names: Sequence[str] | None = None) -> CoveredSpace:
    """Blowup of affine space along {t_b = 0 : b in center}."""
    variables = tuple(variables)
    center = tuple(center)
    if not center or len(set(center)) != len(center) or not set(center) <= set(variables):
        raise ValueError("center must be a nonempty set of distinct ambient variables")
    n = len(variables)
    rays = [Ray(v, _unit(n, j)) for j, v in enumerate(variables)]
    rays.append(Ray("E", tuple(int(v in center) for v in variables)))
    names = chart_names or [f"U_{b}" for b in center]
    charts = tuple((nm, frozenset([v for v in variables if v != b] + ["E"])) for nm, b in zip(names, center))
    return CoveredSpace(variables, tuple(rays), charts,
                        name=f"Bl_{{{','.join(center)}}} A^{n}")


def blowup_cover(n: int) -> CoveredSpace:
    """Blowup of A^{n+1} at the origin, charts U_k = Spec k[t_j/t_k (j != k), t_k]."""
    if n < 1:
        raise ValueError("blowup needs n >= 1")
    variables = tuple(f"t{j}" for j in range(n + 1))
    space = coordinate_blowup(variables, variables, [f"U{k}" for k in range(n + 1)])
    return CoveredSpace(space.variables, space.rays, space.charts, name=f"Bl_0 A^{n + 1}")


def point() -> CoveredSpace:
    return CoveredSpace((), (), (("pt", frozenset()),), name="pt")


def affine_space(variables: Sequence[str], invertible: Iterable[str] = ()) -> CoveredSpace:
    """Spec of QQ[variables] with ``invertible`` inverted (those carry no ray)."""
    variables = tuple(variables)
    inv = frozenset(invertible)
    n = len(variables)
    rays = tuple(Ray(v, _unit(n, j)) for j, v in enumerate(variables) if v not in inv)
    return CoveredSpace(variables, rays, (("A", frozenset(r.name for r in rays)),), name=f"A^{n}")


def product_with_line(space: CoveredSpace, var: str = "t") -> CoveredSpace:
    """space x P^1 with P^1 = Spec k[t] u Spec k[1/t]."""
    taken = set(space.variables) | {r.name for r in space.rays}
    while var in taken or f"{var}_inf" in taken:
        var += "_"
    n = len(space.variables)
    rays = tuple(Ray(r.name, r.vector + (0,)) for r in space.rays)
    rays += (Ray(var, _unit(n + 1, n)), Ray(f"{var}_inf", tuple(-x for x in _unit(n + 1, n))))
    charts = []
    for c, rs in space.charts:
        charts.append((f"{c}*{var}", rs | {var}))
        charts.append((f"{c}*{var}_inf", rs | {f"{var}_inf"}))
    grading = None if space.grading is None else space.grading + (0,)
    return CoveredSpace(space.variables + (var,), rays, tuple(charts), grading, f"{space.name} x P^1")


# ---------------------------------------------------------------- bundles


def projective_bundle(n: int, d: int) -> LineBundleDatum:
    return LineBundleDatum(projective_cover(n), (), d, label=f"O({d})")


def blowup_bundle(n: int, i: int, space: CoveredSpace | None = None) -> LineBundleDatum:
    """O(i) = I^i O: sections need <m, E> >= i along the exceptional ray."""
    space = space or blowup_cover(n)
    return LineBundleDatum(space, (("E", i),), label=f"O({i})")


def divisor_multiplicities(space: CoveredSpace, exps: Mapping[str, int]) -> dict[str, int]:
    """Order of vanishing of the monomial prod t_v^{e_v} along every ray."""
    vec = [exps.get(v, 0) for v in space.variables]
    return {r.name: _dot(vec, r.vector) for r in space.rays}


def modulus_bundle(space: CoveredSpace, multiplicities: Mapping[str, int],
                   degree: int | None = None) -> LineBundleDatum:
    """O(D - |D|) for the divisor D = sum mult_rho D_rho."""
    bounds = {r: -(m - 1) for r, m in multiplicities.items() if m > 0}
    return LineBundleDatum(space, tuple(bounds.items()), degree, label="MO")


def projective_box(n: int, d: int) -> Box:
    """Every class of H^*(P^n, O(d)) has multidegree inside this box."""
    return Box.cube(n + 1, min(0, d + n), max(0, d))


# ---------------------------------------------------------------- complexes


@dataclass
class SliceCohomology:
    """Cohomology of the cochain complex at one multidegree pattern."""

    cells: list[list[tuple[int, ...]]]
    dims: list[int]
    representatives: list[list[list[Fraction]]]
    boundaries: list[list[list[Fraction]]] = field(repr=False)

    def coordinates(self, q: int, cochain: Sequence) -> list[Fraction]:
        """Class of a q-cocycle in the basis of representatives."""
        if q >= len(self.cells) or not self.cells[q]:
            return []
        cols = self.representatives[q] + self.boundaries[q]
        x = linalg.solve(cols, cochain) if cols else ([] if not any(cochain) else None)
        if x is None:
            raise ValueError("cochain is not a cocycle")
        return x[:self.dims[q]]


def _differential(cells_p, cells_q) -> list[list[Fraction]]:
    """Matrix of d: C^p -> C^{p+1}; rows indexed by cells_q."""
    index = {c: i for i, c in enumerate(cells_p)}
    rows = []
    for big in cells_q:
        row = [Fraction(0)] * len(cells_p)
        for j in range(len(big)):
            small = big[:j] + big[j + 1:]
            i = index.get(small)
            if i is not None:
                row[i] += (-1) ** j
        rows.append(row)
    return rows


def _cohomology_of_cells(cells: list[list[tuple[int, ...]]]) -> SliceCohomology:
    diffs = [_differential(cells[p], cells[p + 1]) for p in range(len(cells) - 1)]
    for p in range(len(diffs) - 1):
        if diffs[p] and diffs[p + 1]:
            prod = linalg.matmul(diffs[p + 1], diffs[p], inner=len(cells[p + 1]))
            if any(x for row in prod for x in row):
                raise DefectError(f"d o d != 0 in degree {p}")
    dims, reps, bounds = [], [], []
    for p, cp in enumerate(cells):
        n = len(cp)
        if n == 0:
            dims.append(0)
            reps.append([])
            bounds.append([])
            continue
        if p < len(diffs) and diffs[p]:
            z = linalg.nullspace(diffs[p], n)
        else:
            z = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
        if p > 0 and diffs[p - 1] and cells[p - 1]:
            image = linalg.transpose(diffs[p - 1])
            b = [row for row in linalg.rref(image)[0] if any(row)]
        else:
            b = []
        r = linalg.extend_to_complement(b, z)
        dims.append(len(r))
        reps.append(r)
        bounds.append(b)
    return SliceCohomology(cells, dims, reps, bounds)


def _pattern_job(args):
    return _cells_cohomology(*args)


def _cells_cohomology(nchart: int, chart_rays: Sequence[frozenset[str]], failed: frozenset[str]) -> SliceCohomology:
    cells: list[list[tuple[int, ...]]] = []
    for size in range(1, nchart + 1):
        layer = []
        for T in itertools.combinations(range(nchart), size):
            shared = frozenset.intersection(*(chart_rays[i] for i in T))
            if not (shared & failed):
                layer.append(T)
        cells.append(layer)
    return _cohomology_of_cells(cells)


class CechComplex:
    """Cech complex of a line bundle, one finite complex per multidegree.

    Charts are ordered by ``order`` (default: sorted chart names); the order
    fixes the signs of the differential but not the cohomology.
    """

    def __init__(self, bundle: LineBundleDatum, box: Box, order: Sequence[str] | None = None):
        space = bundle.space
        if box.dim != len(space.variables):
            raise ValueError(f"box has dimension {box.dim}, space has {len(space.variables)} variables")
        self.bundle = bundle
        self.box = box
        self.order = tuple(order) if order is not None else tuple(sorted(space.chart_names))
        if sorted(self.order) != sorted(space.chart_names):
            raise ValueError("order must be a permutation of the chart names")
        self._chart_rays = [space.chart_rays(c) for c in self.order]
        self._rays = [(r.name, r.vector, bundle.bound(r.name)) for r in space.rays]
        self._grading = space.grading
        self._cache: dict[frozenset[str], SliceCohomology] = {}

    def pattern(self, m: Sequence[int]) -> frozenset[str] | None:
        """Rays whose constraint fails at m; None when the grading excludes m."""
        if self._grading is not None and _dot(self._grading, m) != self.bundle.degree:
            return None
        return frozenset(name for name, vec, b in self._rays if _dot(vec, m) < b)

    def cells(self, m: Sequence[int]) -> list[list[tuple[int, ...]]]:
        failed = self.pattern(m)
        if failed is None:
            return [[] for _ in self.order]
        return self._slice(failed).cells

    def _slice(self, failed: frozenset[str]) -> SliceCohomology:
        s = self._cache.get(failed)
        if s is None:
            s = _cells_cohomology(len(self.order), self._chart_rays, failed)
            self._cache[failed] = s
        return s

    def slice(self, m: Sequence[int]) -> SliceCohomology | None:
        failed = self.pattern(m)
        return None if failed is None else self._slice(failed)

    def differential(self, m: Sequence[int], p: int) -> list[list[Fraction]]:
        cells = self.cells(m)
        return _differential(cells[p], cells[p + 1]) if p + 1 < len(cells) else []

    def check_d_squared(self) -> bool:
        """d o d = 0 at every multidegree of the box (raises DefectError otherwise)."""
        for m in self.box:
            cells = self.cells(m)
            for p in range(len(cells) - 2):
                d0 = _differential(cells[p], cells[p + 1])
                d1 = _differential(cells[p + 1], cells[p + 2])
                if d0 and d1:
                    prod = linalg.matmul(d1, d0, inner=len(cells[p + 1]))
                    if any(x for row in prod for x in row):
                        raise DefectError(f"d o d != 0 at multidegree {m}, degree {p}")
        return True

    def precompute(self, workers: int = 1) -> None:
        patterns = sorted({p for p in map(self.pattern, self.box) if p is not None} - set(self._cache),
                          key=sorted)
        if workers > 1 and len(patterns) > 1:
            jobs = [(len(self.order), self._chart_rays, p) for p in patterns]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for p, s in zip(patterns, pool.map(_pattern_job, jobs)):
                    self._cache[p] = s
        else:
            for p in patterns:
                self._slice(p)

    def report(self, workers: int = 1) -> "CohomologyReport":
        self.precompute(workers)
        space = self.bundle.space
        classes: dict[int, list[dict]] = {}
        for m in self.box:
            s = self.slice(m)
            if s is None:
                continue
            for q, dim in enumerate(s.dims):
                if dim:
                    reps = [{_cell_name(self.order, T): str(c) for T, c in zip(s.cells[q], v) if c}
                            for v in s.representatives[q]]
                    classes.setdefault(q, []).append(
                        {"multidegree": list(m), "dim": dim, "monomial": _monomial(space.variables, m),
                         "representatives": reps})
        return CohomologyReport(space.name, self.bundle.describe(), space.variables, self.box,
                                self.order, classes)


def _cell_name(order, T) -> str:
    return "&".join(order[i] for i in T)


def _monomial(variables: Sequence[str], m: Sequence[int]) -> str:
    if not variables:
        return "1"
    ring = PolyRing(tuple(variables), frozenset(variables))
    return format_fraction(ring.monomial(m))


@dataclass
class CohomologyReport:
    space: str
    bundle: str
    variables: tuple[str, ...]
    box: Box
    chart_order: tuple[str, ...]
    classes: dict[int, list[dict]]

    def dim(self, q: int) -> int:
        return sum(c["dim"] for c in self.classes.get(q, []))

    @property
    def top_degree(self) -> int:
        return len(self.chart_order) - 1

    def totals(self) -> dict[int, int]:
        return {q: self.dim(q) for q in range(self.top_degree + 1)}

    def multidegrees(self, q: int) -> list[tuple[int, ...]]:
        return [tuple(c["multidegree"]) for c in self.classes.get(q, [])]

    def basis(self, q: int) -> list[str]:
        out = []
        for c in self.classes.get(q, []):
            out.extend([c["monomial"]] * c["dim"])
        return out

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "bundle": self.bundle,
            "variables": list(self.variables),
            "box": self.box.to_list(),
            "chart_order": list(self.chart_order),
            "totals": {str(q): d for q, d in self.totals().items()},
            "classes": {str(q): self.classes.get(q, []) for q in range(self.top_degree + 1)},
        }

    def to_text(self, max_basis: int = 12) -> str:
        lines = [f"space: {self.space}", f"bundle: {self.bundle}", f"box: {self.box}",
                 f"charts: {', '.join(self.chart_order)}"]
        for q, d in self.totals().items():
            line = f"H^{q}: dim {d}"
            basis = self.basis(q)
            if basis:
                shown = ", ".join(basis[:max_basis])
                if len(basis) > max_basis:
                    shown += f", ... ({len(basis) - max_basis} more)"
                line += f"  basis: {shown}"
            lines.append(line)
        return "\n".join(lines)


def cech_cohomology(bundle: LineBundleDatum, box: Box, workers: int = 1,
                    order: Sequence[str] | None = None) -> CohomologyReport:
    if workers < 1:
        workers = os.cpu_count() or 1
    return CechComplex(bundle, box, order).report(workers)
