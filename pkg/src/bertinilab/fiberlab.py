"""Mod-p^2 section spaces and the three-way point classification:
off the divisor, regular, or singular in the arithmetic sense.

A section sigma over Z/p^2 is singular at a closed point x of the fiber
exactly when its local equation falls into the square of the maximal
ideal at x.  Concretely, with the point scaled so the chart coordinate
is 1 and lifted to the Galois ring GR(p^2, deg x):

* the value of sigma at the lift must vanish mod p^2, and
* every tangential derivative along the fiber must vanish mod p.

The classification therefore refines the residue-field smoothness test:
a point where the fiber divisor is singular can still be arithmetically
regular when the lifted value is p times a unit (the "rescue" case),
which is what separates the mod-p^2 theory from the finite-field one.

Densities of sections avoiding singular points are measured exactly (by
exhaustive enumeration) or by seeded Monte Carlo, against truncated
inverse zeta references, and the exact product formula is asserted only
under a computed jet-surjectivity certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .ffield import GF, GaloisRing, matrix_rank, kernel_size_mod_p2
from .projgeom import (BudgetExceeded, ClosedPoint, HomogeneousForm,
                       SchemeFiber, monomial_basis)
from .zetas import PointCountTable, local_zeta_inverse, projective_counts
from . import sampling

NOT_ON_DIVISOR = "NotOnDivisor"
REGULAR = "RegularPoint"
SINGULAR = "SingularPoint"
SMOOTH = "SmoothPoint"

EXHAUSTIVE_BUDGET = 1 << 26
_CHUNK = 1 << 14


@dataclass(frozen=True)
class SectionModP2:
    """A degree-d form with coefficients in Z/p^2."""

    form: HomogeneousForm
    p: int

    def __post_init__(self):
        if self.form.modulus != self.p ** 2:
            object.__setattr__(self, "form", self.form.reduce(self.p ** 2)
                               if self.form.modulus is None else _rering(self.form, self.p))

    @property
    def d(self):
        return self.form.d

    def reduction(self) -> HomogeneousForm:
        return HomogeneousForm(self.form.n, self.form.d, self.form.coeffs, self.p)


def _rering(form, p):
    if form.modulus % (p * p) != 0:
        raise ValueError(f"coefficients mod {form.modulus} do not determine "
                         f"a section mod {p * p}")
    return HomogeneousForm(form.n, form.d, form.coeffs, p * p)


def _solve_linear(rows, rhs, fld: GF):
    """One solution of rows * x = rhs over a finite field (must exist)."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = fld.inv(aug[rank][col])
        aug[rank] = [fld.mul(inv, c) for c in aug[rank]]
        for i in range(len(aug)):
            if i != rank and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [fld.sub(c, fld.mul(f, d)) for c, d in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    if any(all(c == 0 for c in row[:-1]) and row[-1] != 0 for row in aug):
        raise ValueError("inconsistent linear system")
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return x


def lifted_point(fiber: SchemeFiber, x: ClosedPoint, chart: int | None = None,
                 conjugate: int = 0, perturbation=None):
    """Chart-normalized lift of x into GR(p^2, deg x), landed on the scheme.

    The coordinates are scaled so the chart coordinate is exactly 1,
    lifted digit-wise, then (when the scheme has defining forms) moved by
    one Newton step so every defining form vanishes mod p^2.  An optional
    perturbation (a field vector, applied as + p * delta) exercises the
    lift-independence of downstream classifications.
    """
    fld = x.field
    ring = GaloisRing(fiber.p, x.degree, fld)
    chart = x.chart() if chart is None else chart
    coords = x.orbit[conjugate]
    scaled = fiber._scaled_coords(fld, coords, chart)
    lift = [ring.lift(c) for c in scaled]
    if fiber.forms:
        tangent_cols = [j for j in range(fiber.n + 1) if j != chart]
        jac = fiber.jacobian_rows(fiber.forms, fld, scaled, chart)
        rhs = []
        for g in fiber.scheme.defining_forms:
            v = g.reduce(ring.p2).eval_gr(ring, lift)
            rhs.append(fld.neg(ring.divide_by_p(v)))
        delta = _solve_linear(jac, rhs, fld)
        for j, col in enumerate(tangent_cols):
            lift[col] = ring.add(lift[col], ring.mul_int(ring.lift(delta[j]), fiber.p))
    if perturbation is not None:
        for j in range(fiber.n + 1):
            if perturbation[j]:
                lift[j] = ring.add(lift[j],
                                   ring.mul_int(ring.lift(perturbation[j]), fiber.p))
    return ring, tuple(lift)


def classify_point_detail(section: SectionModP2, x: ClosedPoint, fiber: SchemeFiber,
                          chart: int | None = None, conjugate: int = 0,
                          perturbation=None):
    """(arithmetic classification, residue-field classification) at x."""
    if section.form.n != fiber.n:
        raise ValueError("section and scheme live on different projective spaces")
    fld = x.field
    coords = x.orbit[conjugate]
    sigma_p = section.reduction()
    if sigma_p.eval_gf(fld, coords) != 0:
        return NOT_ON_DIVISOR, NOT_ON_DIVISOR
    fiber_status = fiber.divisor_smooth_at(sigma_p, x, chart=chart, conjugate=conjugate)
    if fiber_status == SMOOTH:
        return REGULAR, SMOOTH
    ring, lift = lifted_point(fiber, x, chart=chart, conjugate=conjugate,
                              perturbation=perturbation)
    value = section.form.eval_gr(ring, lift)
    unit_over_p = ring.divide_by_p(value)   # sigma on the divisor: p | value
    arith = REGULAR if unit_over_p != 0 else SINGULAR
    return arith, fiber_status


def classify_point(section: SectionModP2, x: ClosedPoint, fiber: SchemeFiber,
                   **kwargs) -> str:
    """Arithmetic classification of x on div(section): off / regular / singular."""
    return classify_point_detail(section, x, fiber, **kwargs)[0]


def is_rescued(section: SectionModP2, x: ClosedPoint, fiber: SchemeFiber) -> bool:
    """True when the fiber divisor is singular at x but the section is regular."""
    arith, fib = classify_point_detail(section, x, fiber)
    return fib == SINGULAR and arith == REGULAR


# ----------------------------------------------------------------------
# Truncated products, tail bounds.


def fiber_point_table(fiber: SchemeFiber, e_max: int) -> PointCountTable:
    """Point counts of the fiber; closed form for P^n, scans otherwise."""
    if not fiber.forms:
        return projective_counts(fiber.p, fiber.n, e_max)
    return PointCountTable(fiber.p, tuple(fiber.point_counts(e_max)))


def small_degree_product(fiber: SchemeFiber, r: int, mode: str = "arithmetic",
                         s: int | None = None) -> Fraction:
    """prod over closed points of degree <= r of (1 - p^{-s deg x}).

    The exponent is s = m + 2 in arithmetic mode (sections mod p^2 on a
    model of absolute dimension m + 2 - 1) and s = m + 1 in finite-field
    mode (sections over F_p); an explicit s overrides the mode.
    """
    if s is None:
        if mode == "arithmetic":
            s = fiber.m + 2
        elif mode == "finite-field":
            s = fiber.m + 1
        else:
            raise ValueError(f"unknown mode {mode!r}")
    if r == 0:
        return Fraction(1)
    table = fiber_point_table(fiber, r)
    return local_zeta_inverse(table, s, r, fiber.m).value


def medium_degree_tail_bound(c0: Fraction, p: int, r: int,
                             mode: str = "arithmetic") -> Fraction:
    """Tolerance band for points of degree beyond the truncation.

    Arithmetic mode: 2 c0 p^{-2(r+1)}; finite-field mode: 2 c0 p^{-r}.
    """
    if c0 < 0:
        raise ValueError("c0 must be nonnegative")
    if mode == "arithmetic":
        return 2 * c0 * Fraction(1, p ** (2 * (r + 1)))
    if mode == "finite-field":
        return 2 * c0 * Fraction(1, p ** r)
    raise ValueError(f"unknown mode {mode!r}")


# ----------------------------------------------------------------------
# Jet matrices and the surjectivity certificate.


@dataclass(frozen=True)
class SurjectivityCertificate:
    mode: str               # "fiber" or "arithmetic"
    surjective: bool
    source_dim: int         # number of form coefficients
    target_dim: int         # F_p-dimension (fiber) / log_p of target size
    rank: int | None = None         # fiber mode
    image_size: int | None = None   # arithmetic mode
    target_size: int | None = None

    def as_report(self):
        return {k: v for k, v in self.__dict__.items() if v is not None}


class _PointJet:
    """Per-point evaluation data for all degree-d monomials.

    value_p: h x e digits of the monomial values over the residue field;
    value_p2: h x e digits of the values at the scheme lift, mod p^2;
    tangent: h x (m*e) digits of the tangential derivatives mod p.
    """

    def __init__(self, fiber: SchemeFiber, x: ClosedPoint, d: int):
        fld = x.field
        e = x.degree
        p = fiber.p
        chart = x.chart()
        basis = monomial_basis(fiber.n, d)
        tangent = fiber.tangent_basis(x)             # rejects singular fiber points
        ring, lift = lifted_point(fiber, x, chart=chart)
        cols = [j for j in range(fiber.n + 1) if j != chart]
        # powers of the coordinates, in the field and in the ring
        fpow = [[1] for _ in range(fiber.n + 1)]
        rpow = [[ring.one()] for _ in range(fiber.n + 1)]
        for i in range(fiber.n + 1):
            for _ in range(d):
                fpow[i].append(fld.mul(fpow[i][-1], x.rep[i]))
                rpow[i].append(ring.mul(rpow[i][-1], lift[i]))
        vp = np.zeros((len(basis), e), dtype=np.int64)
        v2 = np.zeros((len(basis), e), dtype=np.int64)
        tg = np.zeros((len(basis), len(tangent) * e), dtype=np.int64)
        for k, exps in enumerate(basis):
            val = 1
            for i, ex in enumerate(exps):
                val = fld.mul(val, fpow[i][ex])
            vp[k] = fld.decode(val)
            rv = ring.one()
            for i, ex in enumerate(exps):
                rv = ring.mul(rv, rpow[i][ex])
            v2[k] = rv
            # gradient of the monomial at the point, chart coordinates
            grad = []
            for j in cols:
                if exps[j] == 0:
                    grad.append(0)
                    continue
                dv = fld.embed_prime(exps[j])
                if dv == 0:
                    grad.append(0)
                    continue
                dv = fld.mul(dv, fpow[j][exps[j] - 1])
                for i, ex in enumerate(exps):
                    if i != j:
                        dv = fld.mul(dv, fpow[i][ex])
                grad.append(dv)
            for t, vec in enumerate(tangent):
                acc = 0
                for j, vj in enumerate(vec):
                    acc = fld.add(acc, fld.mul(vj, grad[j]))
                tg[k, t * e:(t + 1) * e] = fld.decode(acc)
        self.x = x
        self.e = e
        self.m = len(tangent)
        self.value_p = vp
        self.value_p2 = v2
        self.tangent = tg


def _check_distinct(points):
    reps = [(x.degree, x.rep) for x in points]
    if len(set(reps)) != len(reps):
        raise ValueError("points must be pairwise distinct closed points")


def restriction_surjectivity(fiber: SchemeFiber, points, d: int,
                             mode: str = "arithmetic") -> SurjectivityCertificate:
    """Certificate that degree-d forms surject onto the first-order jets.

    Fiber mode restricts sections over F_p to the infinitesimal
    neighborhoods inside the fiber ((m+1) deg x target length per point);
    arithmetic mode restricts sections over Z/p^2 ((m+2) deg x, counted
    as p-length, per point).  Surjectivity is what turns the singularity
    events at the listed points into exact independent probabilities.
    """
    _check_distinct(points)
    p = fiber.p
    h = comb(fiber.n + d, fiber.n)
    jets = [_PointJet(fiber, x, d) for x in points]
    if mode == "fiber":
        rows = []
        for j in jets:
            for k in range(j.e):
                rows.append([int(c) for c in j.value_p[:, k]])
            for k in range(j.tangent.shape[1]):
                rows.append([int(c) for c in j.tangent[:, k]])
        target_dim = sum((j.m + 1) * j.e for j in jets)
        fld = GF(p)
        rank = matrix_rank(rows, fld)
        return SurjectivityCertificate("fiber", rank == target_dim, h,
                                       target_dim, rank=rank)
    if mode == "arithmetic":
        rows = []
        for j in jets:
            for k in range(j.e):
                rows.append([int(c) for c in j.value_p2[:, k]])
            for k in range(j.tangent.shape[1]):
                rows.append([int(c) * p for c in j.tangent[:, k]])
        target_size = 1
        for j in jets:
            target_size *= p ** ((j.m + 2) * j.e)
        kernel = kernel_size_mod_p2(rows, h, p)
        image = (p * p) ** h // kernel
        return SurjectivityCertificate("arithmetic", image == target_size, h,
                                       sum((j.m + 2) * j.e for j in jets),
                                       image_size=image, target_size=target_size)
    raise ValueError(f"unknown mode {mode!r}")


# ----------------------------------------------------------------------
# Density estimates.


@dataclass
class DensityEstimate:
    """An exact or Monte Carlo density with its reference value."""

    mode: str                     # "exact" or "montecarlo"
    value: Fraction | float
    hits: int | None = None
    total: int | None = None
    mean: float | None = None
    samples: int | None = None
    seed: int | None = None
    ci_halfwidth: float | None = None
    reference_value: Fraction | None = None
    reference_error: Fraction | None = None
    extras: dict = field(default_factory=dict)

    def as_report(self):
        doc = {"mode": self.mode}
        if self.mode == "exact":
            doc.update(hits=self.hits, total=self.total,
                       value_num=self.value.numerator,
                       value_den=self.value.denominator)
        else:
            doc.update(mean=self.mean, samples=self.samples, seed=self.seed,
                       ci_halfwidth=self.ci_halfwidth)
        if self.reference_value is not None:
            doc.update(reference_num=self.reference_value.numerator,
                       reference_den=self.reference_value.denominator)
        if self.reference_error is not None:
            doc.update(reference_error_num=self.reference_error.numerator,
                       reference_error_den=self.reference_error.denominator)
        doc.update({k: (v.as_report() if hasattr(v, "as_report") else v)
                    for k, v in self.extras.items()})
        return doc


class FiberClassifier:
    """Vectorized classification of many sections at all points of degree <= r."""

    def __init__(self, fiber: SchemeFiber, d: int, r: int):
        self.fiber = fiber
        self.d = d
        self.r = r
        self.p = fiber.p
        self.p2 = fiber.p ** 2
        self.h = comb(fiber.n + d, fiber.n)
        self.points = fiber.closed_points_up_to(r)
        self.jets = [_PointJet(fiber, x, d) for x in self.points]

    def census(self, rows: np.ndarray):
        """Classify each coefficient row (mod p^2) at every point.

        Returns per-section boolean arrays (any arithmetic singular
        point, any fiber-singular point) and the total point-level
        rescue count across the batch.
        """
        n = rows.shape[0]
        any_arith = np.zeros(n, dtype=bool)
        any_fiber = np.zeros(n, dtype=bool)
        rescued_points = 0
        rows_p = rows % self.p
        for jet in self.jets:
            vals_p = rows_p @ (jet.value_p % self.p) % self.p
            on_div = ~vals_p.any(axis=1)
            idx = np.nonzero(on_div)[0]
            if idx.size == 0:
                continue
            sub = rows[idx]
            tangential = sub @ jet.tangent % self.p
            fiber_sing = ~tangential.any(axis=1)
            vals_p2 = sub @ jet.value_p2 % self.p2
            arith_sing = fiber_sing & ~vals_p2.any(axis=1)
            any_fiber[idx[fiber_sing]] = True
            any_arith[idx[arith_sing]] = True
            rescued_points += int(fiber_sing.sum()) - int(arith_sing.sum())
        return any_arith, any_fiber, rescued_points


def _enumerate_rows(total, h, p2, start, stop):
    idx = np.arange(start, stop, dtype=np.int64)
    rows = np.empty((stop - start, h), dtype=np.int64)
    for k in range(h):
        rows[:, k] = idx // (p2 ** k) % p2
    return rows


def fiber_density_exhaustive(scheme, p: int, d: int, r: int,
                             count: str = "arithmetic") -> DensityEstimate:
    """Exact census of sections mod p^2 with no singular point of degree <= r.

    The reference is the truncated product with arithmetic exponent
    m + 2; equality with the census is asserted (flag ``certified_equal``)
    exactly when the computed jet map is surjective.  ``count="fiber"``
    censuses the residue-field singularity of the reductions instead.
    """
    fiber = scheme.fiber(p)
    cls = FiberClassifier(fiber, d, r)
    total = cls.p2 ** cls.h
    if total > EXHAUSTIVE_BUDGET:
        raise BudgetExceeded(f"{total} sections exceed the exhaustive budget")
    hits_arith = 0
    hits_fiber = 0
    rescued = 0
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        rows = _enumerate_rows(total, cls.h, cls.p2, start, stop)
        any_arith, any_fiber, resc = cls.census(rows)
        hits_arith += int((~any_arith).sum())
        hits_fiber += int((~any_fiber).sum())
        rescued += resc
    cert_mode = "arithmetic" if count == "arithmetic" else "fiber"
    certificate = restriction_surjectivity(fiber, cls.points, d, mode=cert_mode)
    if count == "arithmetic":
        hits, reference = hits_arith, small_degree_product(fiber, r, "arithmetic")
    else:
        hits, reference = hits_fiber, small_degree_product(fiber, r, "finite-field")
    value = Fraction(hits, total)
    return DensityEstimate(
        mode="exact", value=value, hits=hits, total=total,
        reference_value=reference, reference_error=Fraction(0),
        extras={
            "certificate": certificate,
            "certified_equal": certificate.surjective and value == reference,
            "rescued_points": rescued,
            "count": count,
            "no_fiber_singular_hits": hits_fiber,
            "no_arith_singular_hits": hits_arith,
        })


def fiber_density_mc(scheme, p: int, d: int, r: int, samples: int, seed: int,
                     count: str = "arithmetic") -> DensityEstimate:
    """Monte Carlo density of sections mod p^2 with no singular point of degree <= r.

    Coefficients are i.i.d. uniform over Z/p^2; the reference is the
    truncated local inverse zeta value with its tail bound.  Identical
    seed and configuration give bit-identical results.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    fiber = scheme.fiber(p)
    cls = FiberClassifier(fiber, d, r)
    hits = 0
    rescued = 0
    for i, size in enumerate(sampling.chunk_sizes(samples)):
        if size == 0:
            continue
        rng = sampling.substream(seed, i)
        rows = sampling.uniform_residues(rng, size, cls.h, cls.p2)
        any_arith, any_fiber, resc = cls.census(rows)
        hits += int((~(any_arith if count == "arithmetic" else any_fiber)).sum())
        rescued += resc
    mean = hits / samples
    table = fiber_point_table(fiber, r)
    s = fiber.m + 2 if count == "arithmetic" else fiber.m + 1
    trunc = local_zeta_inverse(table, s, r, fiber.m)
    return DensityEstimate(
        mode="montecarlo", value=mean, mean=mean, samples=samples, seed=seed,
        ci_halfwidth=sampling.confidence_halfwidth(mean, samples),
        reference_value=trunc.value, reference_error=trunc.error_bound,
        extras={"rescued_points": rescued, "count": count, "p": p, "d": d, "r": r})


def singular_at_point_proportion(fiber: SchemeFiber, x: ClosedPoint,
                                 d: int) -> DensityEstimate:
    """Exact proportion of degree-d forms over F_p whose divisor is singular at x.

    Exhaustive over all p^h coefficient vectors; under a single-point
    fiber-mode surjectivity certificate this equals p^{-(m+1) deg x}.
    """
    p = fiber.p
    h = comb(fiber.n + d, fiber.n)
    total = p ** h
    if total > EXHAUSTIVE_BUDGET:
        raise BudgetExceeded(f"{total} forms exceed the exhaustive budget")
    jet = _PointJet(fiber, x, d)
    cols = np.concatenate([jet.value_p, jet.tangent], axis=1) % p
    hits = 0
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        rows = _enumerate_rows(total, h, p, start, stop)
        prods = rows @ cols % p
        hits += int((~prods.any(axis=1)).sum())
    certificate = restriction_surjectivity(fiber, [x], d, mode="fiber")
    expected = Fraction(1, p ** ((fiber.m + 1) * x.degree))
    return DensityEstimate(
        mode="exact", value=Fraction(hits, total), hits=hits, total=total,
        reference_value=expected, reference_error=Fraction(0),
        extras={"certificate": certificate,
                "certified_equal": certificate.surjective
                and Fraction(hits, total) == expected})
