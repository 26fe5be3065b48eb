"""Spectral set computation, branch tracking and asymptotic fits.

For a deformation parameter xi the spectral set Sigma_xi is the zero set of
det(theta - (xi/2) dz).  Clearing denominators against the punctures turns
this into a polynomial of degree r*n whose roots at the punctures are
deflated away, leaving the r_hat genuine spectral points.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .fields import ExplicitHiggsField, extract_data
from .numkernel import (
    cokernel_basis,
    det_polymatrix,
    poly_from_roots,
    poly_roots,
)


class SpectralError(RuntimeError):
    pass


class NonGenericError(SpectralError):
    """Deflation mismatch: the sampled xi sits over the branch locus."""


@dataclass(frozen=True)
class SpectralSample:
    xi: complex
    points: tuple[complex, ...]
    coker_dims: tuple[int, ...]

    @property
    def total_coker_dim(self) -> int:
        return sum(self.coker_dims)


@dataclass(frozen=True)
class BranchPath:
    label: tuple
    samples: tuple[tuple[complex, complex], ...]  # (xi, q)
    coker_dims: tuple[int, ...]


def _numerator_entries(field: ExplicitHiggsField, xi: complex) -> list[list[np.ndarray]]:
    """Polynomial matrix ((A - xi)/2) prod(z - p_j) + sum_j C_j prod_{i != j}(z - p_i)."""
    r = field.rank
    punctures = field.punctures
    full = poly_from_roots(punctures) if punctures.size else np.ones(1, dtype=complex)
    partials = [
        poly_from_roots(np.delete(punctures, j)) if punctures.size > 1 else np.ones(1, dtype=complex)
        for j in range(punctures.size)
    ]
    lead = (field.a_diag - xi) / 2
    deg = len(full)
    entries: list[list[np.ndarray]] = []
    for a in range(r):
        row = []
        for b in range(r):
            coeffs = np.zeros(deg, dtype=complex)
            if a == b:
                coeffs[: len(full)] += lead[a] * full
            for j in range(punctures.size):
                coeffs[: len(partials[j])] += field.residues[j, a, b] * partials[j]
            row.append(coeffs)
        entries.append(row)
    return entries


def undeflated_char_poly(field: ExplicitHiggsField, xi: complex) -> np.ndarray:
    """Numerator determinant before deflation, degree r*n for generic xi."""
    return det_polymatrix(_numerator_entries(field, xi))


def char_poly_at(
    field: ExplicitHiggsField,
    xi: complex,
    deflation_tol: float = 1e-6,
) -> np.ndarray:
    """Deflated characteristic polynomial of theta_xi in z (degree r_hat).

    The numerator determinant carries a forced root of multiplicity r_j at
    each p_j; it is removed by evaluating det(theta_xi(z)) times
    prod_j (z - p_j)^(r - r_j) at interpolation nodes, which is the same
    polynomial without ever extracting multiple roots numerically.

    Raises SpectralError when xi hits a leading eigenvalue (a puncture of
    the transform) and NonGenericError when the coefficient tail reveals a
    root count at some p_j differing from its regular dimension.
    """
    scale = field.scale()
    if any(abs(xi - a) <= 1e-12 * max(1.0, scale) for a in field.a_diag):
        raise SpectralError(f"xi={xi} is a puncture of the transform")
    if field.punctures.size == 0:
        raise SpectralError("field has no finite singularity; spectral set is empty")
    regs = _regular_dims(field)
    r = field.rank
    n = field.punctures.size
    full_deg = r * n
    r_hat = full_deg - sum(regs)
    n_nodes = full_deg + 1
    radius = 2.0 * (1.0 + float(np.max(np.abs(field.punctures))))
    nodes = radius * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    eye = np.eye(r)
    values = np.empty(n_nodes, dtype=complex)
    for i, z in enumerate(nodes):
        det = np.linalg.det(field.matrix_at(z) - (xi / 2) * eye)
        for p, rj in zip(field.punctures, regs):
            det *= (z - p) ** (r - rj)
        values[i] = det
    coeffs = (np.fft.fft(values) / n_nodes) / radius ** np.arange(n_nodes)
    mag = float(np.max(np.abs(coeffs)))
    tail = coeffs[r_hat + 1 :]
    if tail.size and float(np.max(np.abs(tail))) > deflation_tol * mag:
        raise NonGenericError(
            f"deflation mismatch at xi={xi}: residual high-order coefficient "
            f"{float(np.max(np.abs(tail))):.3e} (scale {mag:.3e})"
        )
    # the leading coefficient is det((A - xi)/2) exactly; near a group
    # eigenvalue of multiplicity m it is legitimately O(rho^m), so compare
    # against the closed form instead of flagging small values
    expected_lead = complex(np.prod((field.a_diag - xi) / 2))
    if abs(coeffs[r_hat] - expected_lead) > deflation_tol * max(mag, abs(expected_lead)):
        raise NonGenericError(
            f"leading coefficient {coeffs[r_hat]:.3e} deviates from "
            f"det((A - xi)/2) = {expected_lead:.3e} at xi={xi}"
        )
    return np.asarray(coeffs[: r_hat + 1])


def _deflated_roots(field, xi, deflation_tol=1e-6):
    poly = char_poly_at(field, xi, deflation_tol)
    roots = np.array([_polish_root(field, xi, q) for q in poly_roots(poly)])
    return roots, _regular_dims(field)


def _polish_root(field, xi, q, max_iter=8):
    """Newton refinement of a simple root of det(theta_xi) at the matrix level.

    The interpolated polynomial carries coefficient roundoff that the
    companion solver cannot undo; iterating q -= 1/tr(M^-1 M') on the
    rational matrix itself restores machine-precision roots.  Clustered
    (near-multiple) roots make the step unreliable, so it is rejected
    whenever it fails to shrink or jumps by more than the initial error
    estimate allows.
    """
    eye = np.eye(field.rank)
    scale = max(field.scale(), abs(xi) / 2, 1.0)
    best = complex(q)
    for _ in range(max_iter):
        m = field.matrix_at(best) - (xi / 2) * eye
        d_m = -sum(
            c / (best - p) ** 2 for c, p in zip(field.residues, field.punctures)
        )
        try:
            trace = np.trace(np.linalg.solve(m, d_m))
        except np.linalg.LinAlgError:
            break
        if trace == 0 or not np.isfinite(trace):
            break
        step = -1.0 / trace
        if abs(step) > 0.1 * max(1.0, abs(best)) * scale:
            break
        best += step
        if abs(step) <= 1e-16 * max(1.0, abs(best)):
            break
    if any(abs(best - p) < 1e-12 for p in field.punctures):
        return complex(q)
    return best


def _regular_dims(field, tol: float = 1e-8):
    from .numkernel import numerical_rank

    r = field.rank
    return [r - numerical_rank(c, tol) for c in field.residues]


def spectral_points(
    field: ExplicitHiggsField,
    xi: complex,
    tol: float = 1e-8,
    deflation_tol: float = 1e-6,
) -> SpectralSample:
    """Spectral points with cokernel dimensions of theta_xi at each point."""
    roots, _ = _deflated_roots(field, xi, deflation_tol)
    ref = max(field.scale(), abs(xi) / 2)
    dims = []
    for q in roots:
        m = field.matrix_at(q) - (xi / 2) * np.eye(field.rank)
        dims.append(cokernel_basis(m, tol, scale=ref).shape[1])
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    dims = [dims[i] for i in order]
    return SpectralSample(complex(xi), tuple(roots.tolist()), tuple(dims))


def _min_separation(points: np.ndarray) -> float:
    if points.size < 2:
        return np.inf
    d = np.abs(points[:, None] - points[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


class _StepRejected(Exception):
    pass


def _match_step(field, xi, pts, deflation_tol):
    """One continuation step: match the points at xi against pts.

    The assignment is accepted only when it is unambiguous: every matched
    distance must be smaller than half the distance to any competing point
    (in either multiset).  This lets fast-moving escaping branches advance
    as long as they stay far from everything else.
    """
    sample = spectral_points(field, xi, deflation_tol=deflation_tol)
    new = np.array(sample.points, dtype=complex)
    if new.size != pts.size:
        raise _StepRejected
    cost = np.abs(pts[:, None] - new[None, :])
    rows, cols = linear_sum_assignment(cost)
    for i, j in zip(rows, cols):
        rivals = np.concatenate([np.delete(cost[i, :], j), np.delete(cost[:, j], i)])
        if rivals.size and cost[i, j] > 0.5 * float(rivals.min()):
            raise _StepRejected
    order = np.argsort(rows)
    matched = new[cols[order]]
    dims_matched = [sample.coker_dims[c] for c in cols[order]]
    return matched, dims_matched


def _advance_segment(field, a, b, pts, deflation_tol, max_subdivision=2**12):
    """Continue pts from xi=a to xi=b, uniformly refining on ambiguity."""
    n_sub = 1
    while True:
        try:
            cur = pts
            dims = None
            for k in range(1, n_sub + 1):
                xi = a + (b - a) * (k / n_sub)
                cur, dims = _match_step(field, xi, cur, deflation_tol)
            return cur, dims
        except (_StepRejected, NonGenericError):
            n_sub *= 2
            if n_sub > max_subdivision:
                raise SpectralError(
                    f"unresolved branch collision between xi={a} and xi={b}"
                ) from None


def track_branches(
    field: ExplicitHiggsField,
    path,
    deflation_tol: float = 1e-6,
    max_subdivision: int = 2**12,
) -> list[BranchPath]:
    """Continue the spectral points along a xi-path.

    Consecutive samples are matched by minimal-cost assignment; a segment
    is subdivided (up to max_subdivision intermediate steps) whenever the
    matching is ambiguous.  Samples are recorded at the requested path
    nodes only.
    """
    path = [complex(x) for x in path]
    if len(path) < 1:
        raise ValueError("empty path")
    first = spectral_points(field, path[0], deflation_tol=deflation_tol)
    current = np.array(first.points, dtype=complex)
    n_branches = current.size
    samples = [[(path[0], complex(q))] for q in current]
    dims = [[d] for d in first.coker_dims]

    for a, b in zip(path[:-1], path[1:]):
        current, cur_dims = _advance_segment(field, a, b, current, deflation_tol, max_subdivision)
        for i in range(n_branches):
            samples[i].append((b, complex(current[i])))
            dims[i].append(cur_dims[i])

    return [
        BranchPath(("branch", i), tuple(samples[i]), tuple(dims[i]))
        for i in range(n_branches)
    ]


def _geometric_path(center: complex, r_outer: float, r_inner: float, direction: complex, per_decade: int = 8):
    """Radial approach path from r_outer down to r_inner around center."""
    n = max(2, int(np.ceil(per_decade * abs(np.log10(r_outer / r_inner)))) + 1)
    radii = np.geomspace(r_outer, r_inner, n)
    return [center + rho * direction for rho in radii], radii


@dataclass(frozen=True)
class PunctureBranchFit:
    """One escaping branch near a transform puncture xi_l.

    estimates[i] is q(xi) * (xi - xi_l) at radii[i]; the expected limit is
    2 * lambda^inf_k for the corresponding group entry.
    """

    radii: tuple[float, ...]
    estimates: tuple[complex, ...]

    @property
    def residue(self) -> complex:
        return self.estimates[-1]

    @property
    def drift(self) -> float:
        if len(self.estimates) < 2:
            return 0.0
        return abs(self.estimates[-1] - self.estimates[-2])


def fit_puncture_asymptotics(
    field: ExplicitHiggsField,
    xi_l: complex,
    radii=(1e-2, 1e-3, 1e-4),
    direction: complex = None,
) -> list[PunctureBranchFit]:
    """Fits of the escaping branches as xi approaches a leading eigenvalue.

    Escaping branches are classified at the innermost radius by magnitude:
    |q| must exceed scale/sqrt(radius), which separates the 1/radius growth
    from the bounded branches for the supported instance scales.  The
    estimate at a requested radius rho is the constant term of a quadratic
    fit of q(xi)*(xi - xi_l) over the samples in [rho, 10*rho], which kills
    the O(rho) contamination from the next expansion term.
    """
    xi_l = complex(xi_l)
    if direction is None:
        direction = np.exp(0.37j)
    radii = sorted(float(r) for r in radii)
    r_inner, r_outer = radii[0], radii[-1]
    # one extra decade above the outermost radius feeds its fit window
    path, _ = _geometric_path(xi_l, 10 * r_outer, r_inner, direction)
    extra = [xi_l + rho * direction for rho in radii]
    node_set = sorted(set(path) | set(extra), key=lambda x: -abs(x - xi_l))
    branches = track_branches(field, node_set)
    scale = field.scale()
    fits = []
    for br in branches:
        xi_in, q_in = br.samples[-1]
        if abs(q_in) <= scale / np.sqrt(r_inner):
            continue
        ests = []
        for rho in sorted(radii, reverse=True):
            window = [
                (xi - xi_l, q * (xi - xi_l))
                for xi, q in br.samples
                if rho * (1 - 1e-9) <= abs(xi - xi_l) <= 10 * rho * (1 + 1e-9)
            ]
            d = np.array([w[0] for w in window])
            e = np.array([w[1] for w in window])
            design = np.column_stack([np.ones_like(d), d, d * d])
            sol, *_ = np.linalg.lstsq(design, e, rcond=None)
            ests.append((rho, complex(sol[0])))
        fits.append(
            PunctureBranchFit(tuple(t[0] for t in ests), tuple(t[1] for t in ests))
        )
    return fits


@dataclass(frozen=True)
class InfinityBranchFit:
    """One branch as |xi| grows: q(xi) ~ p_hat + 2*lam_hat/xi."""

    p_hat: complex
    lam_hat: complex
    puncture_index: int
    residual: float


def fit_infinity_asymptotics(
    field: ExplicitHiggsField,
    radii=(1e2, 3e2, 1e3),
    direction: complex = None,
) -> list[InfinityBranchFit]:
    """Least-squares fit q = p + 2*lam/xi per branch along a radial escape path.

    Branches partition into groups of size r - r_j converging to each p_j;
    each fit is assigned to the nearest puncture.
    """
    if direction is None:
        direction = np.exp(0.37j)
    radii = sorted(float(r) for r in radii)
    r_inner, r_outer = radii[0], radii[-1]
    scale = field.scale()
    if r_inner < 10 * scale:
        raise ValueError("innermost radius must dominate the field scale")
    path, _ = _geometric_path(0.0, r_inner, r_outer, direction)  # outward
    extra = [rho * direction for rho in radii]
    node_set = sorted(set(path) | set(extra), key=abs)
    branches = track_branches(field, node_set)
    fits = []
    for br in branches:
        xs = np.array([xi for xi, _ in br.samples])
        qs = np.array([q for _, q in br.samples])
        # two correction orders beyond p + 2*lam/xi keep the 1/xi term clean;
        # column scaling tames the wildly different magnitudes of the powers
        design = np.column_stack([np.ones_like(xs), 1.0 / xs, xs**-2.0, xs**-3.0])
        norms = np.linalg.norm(design, axis=0)
        sol, *_ = np.linalg.lstsq(design / norms, qs, rcond=None)
        sol = sol / norms
        p_hat, two_lam = sol[0], sol[1]
        resid = float(np.max(np.abs(design @ sol - qs))) if xs.size else 0.0
        j = int(np.argmin(np.abs(field.punctures - p_hat)))
        fits.append(InfinityBranchFit(complex(p_hat), complex(two_lam / 2), j, resid))
    return fits


def transformed_eigenvalue_samples(
    field: ExplicitHiggsField, xi: complex, deflation_tol: float = 1e-6
) -> np.ndarray:
    """Eigenvalue multiset of the transformed Higgs field at xi: -Sigma_xi / 2."""
    roots, _ = _deflated_roots(field, xi, deflation_tol)
    return -roots / 2


def reducedness_probe(
    field: ExplicitHiggsField,
    n_samples: int = 1000,
    seed: int | None = None,
    sep_tol: float = 1e-6,
) -> float:
    """Fraction of sampled xi at which all spectral points are simple."""
    rng = np.random.default_rng(seed)
    scale = field.scale()
    good = 0
    done = 0
    while done < n_samples:
        xi = complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) * scale
        if any(abs(xi - a) < 0.1 * scale for a in field.a_diag):
            continue
        done += 1
        try:
            roots, _ = _deflated_roots(field, xi)
        except NonGenericError:
            continue
        if _min_separation(roots) > sep_tol * max(1.0, float(np.max(np.abs(roots)))):
            good += 1
    return good / n_samples
