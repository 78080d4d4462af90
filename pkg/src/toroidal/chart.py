"""Morphism germs as chart records, their classification, and center forms.

A chart describes one point of the source mapping to one point of the
target: the first `ell` target coordinates pull back to unit-times-
monomial expressions in the `n` divisor variables, slot rows (present
only on center-adapted charts) carry a translated extra variable, and
the remaining target coordinates pull back to plain variables.

Variable layout, 0-based and dense:

    [0..n)                         divisor variables
    [n..n+num_slots)               translated slot variables, one per
                                   translated slot row
    [.. + (m - ell - s))           identity-row variables
    [..d)                          tail variables (only units see these)
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

from .monomial import MonomialIdeal, minimal_generators
from .units import TRIVIAL_UNIT, ZERO_STRATUM, Stratum, UnitToken

TOROIDAL = "toroidal"
QTF1 = "qtf1"
QTF2 = "qtf2"
SMOOTH = "smooth"


@dataclass(frozen=True)
class ValidityReport:
    failures: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.ok:
            return "pass"
        return "; ".join(f"{code}: {detail}" for code, detail in self.failures)


@dataclass(frozen=True)
class CenterDescriptor:
    """A blowup center seen from one chart: it lies in `ell_bar` of the
    divisor components through the point and has codimension `c`."""

    ell_bar: int
    c: int
    divisor_rows: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.ell_bar <= self.c:
            raise ValueError("need 0 <= ell_bar <= c")
        if self.c < 1:
            raise ValueError("centers have codimension >= 1")
        if len(self.divisor_rows) != self.ell_bar:
            raise ValueError("divisor_rows must list exactly ell_bar rows")
        if len(set(self.divisor_rows)) != self.ell_bar:
            raise ValueError("divisor_rows must be distinct")

    @property
    def extra_slots(self) -> int:
        return self.c - self.ell_bar


@dataclass(frozen=True)
class ChartForm:
    d: int
    m: int
    n: int
    ell: int
    s: int
    tag: str
    matrix: tuple[tuple[int, ...], ...] = ()
    units: tuple[UnitToken, ...] = ()
    betas: tuple[Stratum | None, ...] = ()
    ell_bar: int = 0

    def __post_init__(self):
        problems = structural_problems(self)
        if problems:
            raise ValueError("malformed chart: " + "; ".join(problems))

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def num_slots(self) -> int:
        """Translated slot variables (QTF2 absorbed its first slot)."""
        if self.tag == QTF1:
            return self.s
        if self.tag == QTF2:
            return self.s - 1
        return 0

    @property
    def identity_rows(self) -> int:
        return self.m - self.ell - self.s

    @property
    def active_vars(self) -> int:
        return self.n + self.num_slots + self.identity_rows

    def slot_var(self, t: int) -> int | None:
        """Chart variable of slot row t (0-based among the s slot rows)."""
        if self.tag == QTF1:
            return self.n + t
        if self.tag == QTF2:
            return None if t == 0 else self.n + t - 1
        raise ValueError("chart has no slot rows")

    def row_sum(self, i: int) -> int:
        return sum(self.matrix[i])

    def col_sum(self, j: int, upto: int) -> int:
        return sum(self.matrix[i][j] for i in range(upto))


def structural_problems(cf: ChartForm) -> list[str]:
    p: list[str] = []
    if cf.tag not in (TOROIDAL, QTF1, QTF2, SMOOTH):
        p.append(f"unknown tag {cf.tag!r}")
        return p
    if not (0 <= cf.n <= cf.d and 0 <= cf.ell <= cf.m):
        p.append("dimension counts out of range")
    expected_rows = {TOROIDAL: cf.ell, QTF1: cf.ell + cf.s,
                     QTF2: cf.ell + cf.s, SMOOTH: 0}[cf.tag]
    if cf.tag == SMOOTH and (cf.n or cf.ell or cf.s):
        p.append("smooth charts have n = ell = s = 0")
    if cf.rows != expected_rows:
        p.append(f"expected {expected_rows} matrix rows, found {cf.rows}")
    if cf.tag in (TOROIDAL, SMOOTH) and cf.s:
        p.append("only center-adapted charts carry slot rows")
    if cf.tag == QTF2 and cf.s < 1:
        p.append("qtf2 needs at least one slot row")
    for i, row in enumerate(cf.matrix):
        if len(row) != cf.n:
            p.append(f"row {i} has length {len(row)} != n = {cf.n}")
        elif any(x < 0 for x in row):
            p.append(f"row {i} has a negative exponent")
    if len(cf.units) != cf.rows:
        p.append("one unit token per matrix row required")
    if len(cf.betas) != cf.s:
        p.append("one beta entry per slot row required")
    if cf.tag == QTF1 and any(b is None for b in cf.betas):
        p.append("qtf1 slot rows all carry strata")
    if cf.tag == QTF2 and cf.betas and (
            cf.betas[0] is not None or any(b is None for b in cf.betas[1:])):
        p.append("qtf2 carries strata on slot rows 2..s only")
    if not 0 <= cf.ell_bar <= min(cf.ell, cf.ell + cf.s):
        p.append("ell_bar out of range")
    if cf.tag in (TOROIDAL, SMOOTH) and cf.ell_bar:
        p.append("ell_bar only applies to center-adapted charts")
    if cf.identity_rows < 0:
        p.append("more slot rows than spare target coordinates")
    elif cf.active_vars > cf.d:
        p.append(f"active variables {cf.active_vars} exceed d = {cf.d}")
    else:
        for i, u in enumerate(cf.units):
            bad = [f.var for f in u.factors if f.var < cf.active_vars]
            if bad:
                p.append(f"unit of row {i} touches active variable {bad[0]}")
    return p


def _min_row_indices(cf: ChartForm) -> list[int]:
    """Rows of the permissible set I = [ell_bar] + slot rows."""
    return list(range(cf.ell_bar)) + list(range(cf.ell, cf.ell + cf.s))


def column_minima(cf: ChartForm) -> tuple[int, ...]:
    """Columnwise minimum over the permissible row set I."""
    rows = _min_row_indices(cf)
    if not rows:
        return (0,) * cf.n
    return tuple(min(cf.matrix[i][j] for i in rows) for j in range(cf.n))


def verify_toroidal_form(cf: ChartForm) -> ValidityReport:
    """Shape check for a toroidal chart: nonnegative matrix with
    positive column sums and positive row sums, units on tail variables."""
    failures: list[tuple[str, str]] = []
    if cf.tag != TOROIDAL:
        return ValidityReport((("tag", f"expected toroidal, found {cf.tag}"),))
    if cf.ell and cf.n == 0:
        failures.append(("shape", "divisor image needs divisor variables"))
    for j in range(cf.n):
        if cf.col_sum(j, cf.ell) <= 0:
            failures.append(("column", f"column {j} has zero sum"))
    for i in range(cf.ell):
        if cf.row_sum(i) <= 0:
            failures.append(("row", f"row {i} has zero sum"))
    return ValidityReport(tuple(failures))


def _positivity_failures(cf: ChartForm, row_range: int) -> list[tuple[str, str]]:
    failures = []
    for j in range(cf.n):
        if cf.col_sum(j, row_range) <= 0:
            failures.append(("column", f"column {j} has zero sum over rows [{row_range}]"))
    for i in range(row_range):
        if cf.row_sum(i) <= 0:
            failures.append(("row", f"row {i} has zero sum"))
    return failures


def _qtf_condition_failures(cf: ChartForm) -> list[tuple[str, str]]:
    if cf.s == 0:
        return []
    failures = []
    mins = column_minima(cf)
    for t in range(cf.s):
        row = cf.matrix[cf.ell + t]
        for j in range(cf.n):
            if row[j] != mins[j]:
                failures.append(("min-row",
                                 f"slot row {t} column {j}: {row[j]} != min {mins[j]}"))
    return failures


def classify_form(cf: ChartForm) -> tuple[str | None, dict[str, list[tuple[str, str]]]]:
    """Strongest tag whose invariants hold, with per-tag diagnostics."""
    diagnostics: dict[str, list[tuple[str, str]]] = {}
    if cf.tag == SMOOTH:
        return SMOOTH, diagnostics

    if cf.s == 0:
        toroidal_view = cf if cf.tag == TOROIDAL else replace(
            cf, tag=TOROIDAL, ell_bar=0)
        report = verify_toroidal_form(toroidal_view)
        if report.ok:
            return TOROIDAL, diagnostics
        diagnostics[TOROIDAL] = list(report.failures)

    if cf.tag != QTF2:
        failures = _positivity_failures(cf, cf.ell) + _qtf_condition_failures(cf)
        if cf.ell == 0 and cf.n > 0:
            failures.append(("shape", "an ell=0 chart cannot carry divisor columns"))
        if not failures:
            return QTF1, diagnostics
        diagnostics[QTF1] = failures

    if cf.tag == QTF2:
        failures = _positivity_failures(cf, cf.ell + 1) + _qtf_condition_failures(cf)
        if not failures:
            return QTF2, diagnostics
        diagnostics[QTF2] = failures

    return None, diagnostics


class AdaptedForm(NamedTuple):
    chart: ChartForm
    row_order: tuple[int, ...]  # new row index -> original row index


def center_row_order(ell: int, z: CenterDescriptor) -> tuple[int, ...]:
    """Stable permutation bringing the center's divisor rows first."""
    first = sorted(z.divisor_rows)
    rest = [i for i in range(ell) if i not in set(first)]
    return tuple(first + rest)


def derive_center_form(cf: ChartForm, z: CenterDescriptor) -> AdaptedForm:
    """Adapt a toroidal (or smooth) chart to a center: permute the center's
    divisor rows first and append one zero slot row per missing equation."""
    if cf.tag not in (TOROIDAL, SMOOTH):
        raise ValueError("only toroidal or smooth charts can be center-adapted")
    if z.ell_bar > cf.ell or z.c > cf.m:
        raise ValueError("descriptor inconsistent with chart dimensions")
    if any(i >= cf.ell for i in z.divisor_rows):
        raise ValueError("divisor row index out of range")
    s = z.extra_slots
    if s > cf.m - cf.ell:
        raise ValueError("center needs more spare target coordinates than exist")
    order = center_row_order(cf.ell, z)
    matrix = tuple(cf.matrix[i] for i in order) + ((0,) * cf.n,) * s
    units = tuple(cf.units[i] for i in order) + (TRIVIAL_UNIT,) * s
    chart = ChartForm(
        d=cf.d, m=cf.m, n=cf.n, ell=cf.ell, s=s, tag=QTF1,
        matrix=matrix, units=units, betas=(ZERO_STRATUM,) * s,
        ell_bar=z.ell_bar)
    tag, diag = classify_form(chart)
    if tag not in (QTF1, TOROIDAL):
        raise AssertionError(f"adapted chart failed classification: {diag}")
    return AdaptedForm(chart, order)


def pullback_center_ideal(cf: ChartForm, z: CenterDescriptor) -> MonomialIdeal:
    """Pullback of the center's ideal, as a monomial ideal in d variables.

    Unit factors never change a monomial ideal and are dropped; a slot
    row contributes its translated variable only on the zero stratum.
    """
    if cf.tag not in (QTF1, QTF2):
        raise ValueError("pullback needs a center-adapted chart")
    if cf.ell_bar != z.ell_bar or cf.s != z.extra_slots:
        raise ValueError("chart is not adapted to this descriptor")
    gens: list[tuple[int, ...]] = []
    for i in range(cf.ell_bar):
        gens.append(cf.matrix[i] + (0,) * (cf.d - cf.n))
    for t in range(cf.s):
        row = list(cf.matrix[cf.ell + t]) + [0] * (cf.d - cf.n)
        beta = cf.betas[t]
        if beta is not None and beta.is_zero:
            row[cf.slot_var(t)] += 1
        gens.append(tuple(row))
    return minimal_generators(gens, cf.d)


def extend_to_global_form(cf: ChartForm, ell_global: int) -> ChartForm:
    """Extend a chart toroidal for k local divisor components to one
    toroidal for ell_global >= k components, by an identity block on
    spare identity variables."""
    if cf.tag != TOROIDAL:
        raise ValueError("extension applies to toroidal charts")
    g = ell_global - cf.ell
    if g < 0:
        raise ValueError("global component count below the local one")
    if g == 0:
        return cf
    if g > cf.m - cf.ell:
        raise ValueError("not enough identity rows to extend")
    matrix = tuple(row + (0,) * g for row in cf.matrix)
    block = tuple(
        (0,) * cf.n + tuple(1 if j == k else 0 for j in range(g))
        for k in range(g))
    out = ChartForm(
        d=cf.d, m=cf.m, n=cf.n + g, ell=ell_global, s=0, tag=TOROIDAL,
        matrix=matrix + block, units=cf.units + (TRIVIAL_UNIT,) * g)
    report = verify_toroidal_form(out)
    if not report.ok:
        raise AssertionError(f"extension broke toroidal shape: {report}")
    return out


def smooth_chart(d: int, m: int) -> ChartForm:
    return ChartForm(d=d, m=m, n=0, ell=0, s=0, tag=SMOOTH)
