"""The Nahm transform on singularity data, its inverse, and bookkeeping.

On data level the transform swaps puncture positions with leading-term
eigenvalues (up to sign) and negates residue eigenvalues, preserving
weights, degree and parabolic degree.  Applying it twice recovers the
pullback of the input under z -> -z.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .moduli import (
    ConnectionData,
    HiggsData,
    InfinityGroup,
    LogPoint,
    SingularityData,
    WeightedEigen,
    check_connection_hypothesis,
    check_hypothesis,
    connection_to_higgs,
    parabolic_degree,
    transformability_check,
)
from .numkernel import multiset_match


class TransformError(ValueError):
    """A transform precondition failed; the message names the clause."""


def _transform(data: SingularityData, out_cls) -> SingularityData:
    report = transformability_check(data)
    if not report.ok:
        raise TransformError(
            f"transformability failed: infinity groups {report.offending_groups} "
            f"have multiplicity exceeding transformed rank {report.r_hat}"
        )
    r_hat = report.r_hat
    log_points = []
    for g in data.inf_groups:
        entries = [WeightedEigen(-e.value, e.weight) for e in g.entries]
        entries += [WeightedEigen(0.0, 0.0)] * (r_hat - g.multiplicity)
        log_points.append(LogPoint(g.xi, tuple(entries)))
    inf_groups = []
    for lp in data.log_points:
        entries = tuple(WeightedEigen(-e.value, e.weight) for e in lp.singular_entries)
        inf_groups.append(InfinityGroup(-lp.position, entries))
    return out_cls(r_hat, data.degree, tuple(log_points), tuple(inf_groups))


def higgs_transform(hd: HiggsData) -> HiggsData:
    """Transform of a Higgs datum satisfying the genericity hypothesis.

    The output has rank r_hat, the same degree, one logarithmic point at
    each leading eigenvalue xi_l with entries (-lambda^inf_k, alpha^inf_k)
    padded by regular (0, 0) entries, and one infinity group per original
    puncture with leading eigenvalue -p_j and entries
    (-lambda^j_k, alpha^j_k) over the singular component.
    """
    hyp = check_hypothesis(hd)
    if not hyp.ok:
        raise TransformError("hypothesis failed: " + "; ".join(hyp.violations))
    return _transform(hd, HiggsData)


def connection_transform(cd: ConnectionData) -> ConnectionData:
    """Transform of a connection datum, same sign rules on (mu, beta)."""
    hyp = check_connection_hypothesis(cd)
    if not hyp.ok:
        raise TransformError("hypothesis failed: " + "; ".join(hyp.violations))
    return _transform(cd, ConnectionData)


def transform(data: SingularityData) -> SingularityData:
    if isinstance(data, HiggsData):
        return higgs_transform(data)
    if isinstance(data, ConnectionData):
        return connection_transform(data)
    raise TypeError(f"unsupported data type {type(data).__name__}")


def pullback_minus(data: SingularityData) -> SingularityData:
    """Pullback under z -> -z: negate positions and leading eigenvalues.

    A simple pole at p with residue lambda pulls back to a simple pole at
    -p with the same residue, and the leading coefficient at infinity
    changes sign; residues, weights, rank and degree are fixed.
    """
    log_points = tuple(LogPoint(-lp.position, lp.entries) for lp in data.log_points)
    inf_groups = tuple(InfinityGroup(-g.xi, g.entries) for g in data.inf_groups)
    return type(data)(data.rank, data.degree, log_points, inf_groups)


def inverse_transform(data: SingularityData) -> SingularityData:
    """Inverse of the transform: pullback_minus composed with the forward map."""
    return pullback_minus(transform(data))


def data_match(a: SingularityData, b: SingularityData, tol: float = 1e-12):
    """Multiset comparison of two data of the same kind.

    Returns (ok, residual): log points are matched by position, infinity
    groups by leading eigenvalue, entries within by value; the residual is
    the worst matched distance over all components (inf on failure of
    counts or weights).
    """
    if type(a) is not type(b) or a.rank != b.rank or a.degree != b.degree:
        return False, float("inf")
    if len(a.log_points) != len(b.log_points) or len(a.inf_groups) != len(b.inf_groups):
        return False, float("inf")
    worst = 0.0
    pos_match = multiset_match(
        [lp.position for lp in a.log_points], [lp.position for lp in b.log_points], tol
    )
    if not pos_match.ok:
        return False, pos_match.max_distance
    worst = max(worst, pos_match.max_distance)
    for i, j in pos_match.pairs:
        ok, res = _entries_match(a.log_points[i].entries, b.log_points[j].entries, tol)
        if not ok:
            return False, res
        worst = max(worst, res)
    xi_match = multiset_match(
        [g.xi for g in a.inf_groups], [g.xi for g in b.inf_groups], tol
    )
    if not xi_match.ok:
        return False, xi_match.max_distance
    worst = max(worst, xi_match.max_distance)
    for i, j in xi_match.pairs:
        ok, res = _entries_match(a.inf_groups[i].entries, b.inf_groups[j].entries, tol)
        if not ok:
            return False, res
        worst = max(worst, res)
    return True, worst


def _entries_match(ea, eb, tol):
    if len(ea) != len(eb):
        return False, float("inf")
    m = multiset_match([complex(e.value) for e in ea], [complex(e.value) for e in eb], tol)
    if not m.ok:
        return False, m.max_distance
    worst = m.max_distance
    for i, j in m.pairs:
        dw = abs(ea[i].weight - eb[j].weight)
        if dw > tol:
            return False, dw
        worst = max(worst, dw)
    return True, worst


@dataclass(frozen=True)
class InvolutionReport:
    ok: bool
    residual: float
    rank_recovered: bool
    precondition_failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def involution_check(data: SingularityData, tol: float = 1e-12) -> InvolutionReport:
    """Verify transform(transform(data)) == pullback_minus(data)."""
    try:
        once = transform(data)
        twice = transform(once)
    except TransformError as exc:
        return InvolutionReport(False, float("inf"), False, precondition_failure=str(exc))
    ok, residual = data_match(twice, pullback_minus(data), tol)
    rank_ok = twice.rank == data.rank
    return InvolutionReport(ok and rank_ok, residual, rank_ok)


@dataclass(frozen=True)
class BookkeepingRecord:
    """Topology of the induced vs transformed extension.

    induced_degree = r_hat + rank + degree; the transformed extension keeps
    the input degree while every nonzero parabolic weight is shifted from
    -1 + alpha (induced) to alpha (transformed); both extensions have the
    same parabolic degree.
    """

    r_hat: int
    induced_degree: int
    transformed_degree: int
    induced_weights: tuple[float, ...]
    transformed_weights: tuple[float, ...]

    @property
    def identity_residual(self) -> float:
        lhs = self.induced_degree + sum(self.induced_weights)
        rhs = self.transformed_degree + sum(self.transformed_weights)
        return abs(lhs - rhs)


def extension_bookkeeping(hd: HiggsData) -> BookkeepingRecord:
    transformed = transform(hd)
    nonzero = tuple(w for w in transformed.all_weights() if w != 0)
    return BookkeepingRecord(
        r_hat=hd.r_hat,
        induced_degree=hd.r_hat + hd.rank + hd.degree,
        transformed_degree=hd.degree,
        induced_weights=tuple(w - 1.0 for w in nonzero),
        transformed_weights=nonzero,
    )


@dataclass(frozen=True)
class TransformReport:
    input: SingularityData
    output: SingularityData
    r_hat: int
    induced_degree: int
    transformed_degree: int
    induced_weights: tuple[float, ...]
    hypothesis_preserved: bool


def transform_report(data: SingularityData) -> TransformReport:
    out = transform(data)
    book = BookkeepingRecord(
        r_hat=data.r_hat,
        induced_degree=data.r_hat + data.rank + data.degree,
        transformed_degree=data.degree,
        induced_weights=tuple(w - 1.0 for w in out.all_weights() if w != 0),
        transformed_weights=tuple(w for w in out.all_weights() if w != 0),
    )
    if isinstance(data, HiggsData):
        preserved = check_hypothesis(out).ok == check_hypothesis(data).ok
    else:
        preserved = check_connection_hypothesis(out).ok == check_connection_hypothesis(data).ok
    return TransformReport(
        input=data,
        output=out,
        r_hat=book.r_hat,
        induced_degree=book.induced_degree,
        transformed_degree=book.transformed_degree,
        induced_weights=book.induced_weights,
        hypothesis_preserved=preserved,
    )


@dataclass(frozen=True)
class EntryDiscrepancy:
    location: str
    value_delta: complex
    weight_delta: float


@dataclass(frozen=True)
class DictionaryConsistencyReport:
    """Per-entry differences between the two routes from connection data.

    Route A: dictionary after the connection transform; route B: Higgs
    transform after the dictionary.  The two published descriptions are not
    literally compatible for generic weights, so this reports and never
    asserts.
    """

    discrepancies: tuple[EntryDiscrepancy, ...]

    @property
    def max_value_delta(self) -> float:
        return max((abs(d.value_delta) for d in self.discrepancies), default=0.0)


def dictionary_consistency_report(cd: ConnectionData) -> DictionaryConsistencyReport:
    via_connection = connection_to_higgs(connection_transform(cd))
    via_higgs = higgs_transform(connection_to_higgs(cd))
    diffs: list[EntryDiscrepancy] = []

    def compare(entries_a, entries_b, location):
        m = multiset_match(
            [e.value for e in entries_a], [e.value for e in entries_b], float("inf")
        )
        for i, j in m.pairs:
            diffs.append(
                EntryDiscrepancy(
                    location,
                    entries_a[i].value - entries_b[j].value,
                    entries_a[i].weight - entries_b[j].weight,
                )
            )

    pos = multiset_match(
        [lp.position for lp in via_connection.log_points],
        [lp.position for lp in via_higgs.log_points],
        1e-9,
    )
    for i, j in pos.pairs:
        compare(
            via_connection.log_points[i].entries,
            via_higgs.log_points[j].entries,
            f"log point {via_connection.log_points[i].position}",
        )
    xi = multiset_match(
        [g.xi for g in via_connection.inf_groups],
        [g.xi for g in via_higgs.inf_groups],
        1e-9,
    )
    for i, j in xi.pairs:
        compare(
            via_connection.inf_groups[i].entries,
            via_higgs.inf_groups[j].entries,
            f"infinity group xi={via_connection.inf_groups[i].xi}",
        )
    return DictionaryConsistencyReport(tuple(diffs))
