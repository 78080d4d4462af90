"""Chart-level blowup transforms and the permissible-center test.

A blowup center inside a center-adapted chart is cut out by some of the
divisor variables together with all slot variables.  Entering the chart
of the blowup means choosing which center coordinate becomes the
exceptional one (j0) and, for every other center coordinate, whether the
new translation constant is zero, a generic nonzero value, or a given
value.  A divisor j0 keeps the chart in translated (qtf1) shape; a slot
j0 turns its row into a plain monomial row (qtf2 shape).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .chart import QTF1, QTF2, TOROIDAL, ChartForm, ValidityReport, classify_form
from .units import Stratum, ZERO_STRATUM


@dataclass(frozen=True)
class BlowupCenterChart:
    """Center in chart coordinates: divisor variables plus every slot."""

    divisor_indices: tuple[int, ...]
    slot_count: int

    def __post_init__(self):
        object.__setattr__(self, "divisor_indices",
                           tuple(sorted(self.divisor_indices)))
        if len(set(self.divisor_indices)) != len(self.divisor_indices):
            raise ValueError("duplicate divisor indices")
        if self.slot_count < 0:
            raise ValueError("negative slot count")

    @property
    def codim(self) -> int:
        return len(self.divisor_indices) + self.slot_count


@dataclass(frozen=True)
class BlowupChartChoice:
    """Which center coordinate becomes exceptional, and the strata chosen
    for the remaining center coordinates (keyed by chart variable)."""

    j0: int
    betas: tuple[tuple[int, Stratum], ...]

    def beta_of(self, var: int) -> Stratum:
        for v, b in self.betas:
            if v == var:
                return b
        raise KeyError(var)


class BlowupResult(NamedTuple):
    chart: ChartForm
    var_map: tuple[int, ...]   # old chart variable -> new chart variable
    row_order: tuple[int, ...]  # new row index -> old row index


def center_coordinates(cf: ChartForm, center: BlowupCenterChart) -> list[int]:
    return list(center.divisor_indices) + [cf.n + t for t in range(center.slot_count)]


def check_center_snc(cf: ChartForm, center: BlowupCenterChart) -> ValidityReport:
    """Coordinate centers always cross the coordinate divisor normally;
    what can fail is the index bookkeeping or the codimension bound."""
    failures = []
    for j in center.divisor_indices:
        if not 0 <= j < cf.n:
            failures.append(("range", f"divisor index {j} outside [0,{cf.n})"))
    if center.slot_count not in (0, cf.s):
        failures.append(("slots", f"center must use all {cf.s} slots or none"))
    if cf.s > 0 and center.slot_count != cf.s:
        failures.append(("slots", "adapted charts blow up centers through every slot"))
    if center.codim < 2:
        failures.append(("codim", "blowup centers have codimension >= 2"))
    return ValidityReport(tuple(failures))


def _center_matrix(cf: ChartForm, center: BlowupCenterChart):
    """The permissibility matrix w: rows over [ell_bar] and the slot rows,
    columns over the center's divisor indices and an identity slot block."""
    div = center.divisor_indices
    k = center.slot_count
    rows = []
    for i in range(cf.ell_bar):
        rows.append([cf.matrix[i][j] for j in div] + [0] * k)
    for t in range(k):
        rows.append([cf.matrix[cf.ell + t][j] for j in div]
                    + [1 if u == t else 0 for u in range(k)])
    return rows


def check_permissible_center(cf: ChartForm, center: BlowupCenterChart):
    """Subtract column minima from the center matrix; the center is
    permissible when no row and no column of the result vanishes.
    Returns (ok, witness) with the offending row or column."""
    if cf.tag != QTF1:
        raise ValueError("permissibility is checked on adapted qtf1 charts")
    snc = check_center_snc(cf, center)
    if not snc.ok:
        raise ValueError(f"invalid center: {snc}")
    w = _center_matrix(cf, center)
    if not w:
        return False, ("row", "center has no defining rows on this chart")
    cols = len(w[0])
    mins = [min(row[g] for row in w) for g in range(cols)]
    wbar = [[row[g] - mins[g] for g in range(cols)] for row in w]
    for f, row in enumerate(wbar):
        if not any(row):
            return False, ("row", f)
    for g in range(cols):
        if not any(row[g] for row in wbar):
            return False, ("col", g)
    return True, None


def exceptional_column_data(cf: ChartForm, center: BlowupCenterChart):
    """Exceptional exponents a case-1 blowup will produce: the common slot
    value 1 + sum of column minima, and the sums over rows of [ell_bar]."""
    div = center.divisor_indices
    rows = list(range(cf.ell_bar)) + [cf.ell + t for t in range(cf.s)]
    mins = [min(cf.matrix[i][j] for i in rows) for j in div] if rows else []
    slot_value = 1 + sum(mins)
    row_sums = [sum(cf.matrix[i][j] for j in div) for i in range(cf.ell_bar)]
    return slot_value, row_sums


def _validate_choice(cf: ChartForm, center: BlowupCenterChart,
                     choice: BlowupChartChoice) -> list[int]:
    coords = center_coordinates(cf, center)
    if choice.j0 not in coords:
        raise ValueError(f"j0 = {choice.j0} is not a center coordinate")
    expected = sorted(set(coords) - {choice.j0})
    given = sorted(v for v, _ in choice.betas)
    if expected != given:
        raise ValueError("strata must cover exactly the center coordinates besides j0")
    return coords


def blowup_transform(cf: ChartForm, center: BlowupCenterChart,
                     choice: BlowupChartChoice) -> BlowupResult:
    if cf.tag != QTF1:
        raise ValueError("blowups apply to center-adapted qtf1 charts")
    if any(b is None or not b.is_zero for b in cf.betas):
        raise ValueError("only all-zero-strata charts lie on the center")
    snc = check_center_snc(cf, center)
    if not snc.ok:
        raise ValueError(f"invalid center: {snc}")
    _validate_choice(cf, center, choice)

    div = list(center.divisor_indices)
    if choice.j0 < cf.n:
        result = _case1(cf, center, choice, div)
    else:
        result = _case2(cf, center, choice, div)

    tag, diag = classify_form(result.chart)
    expected = QTF2 if choice.j0 >= cf.n else QTF1
    if tag not in (expected, TOROIDAL):
        raise AssertionError(f"transformed chart failed {expected} invariants: {diag}")
    return result


def _split_by_stratum(choice: BlowupChartChoice, div: list[int], j0: int):
    j1 = [j for j in div if j != j0 and choice.beta_of(j).is_zero]
    j2 = [j for j in div if j != j0 and not choice.beta_of(j).is_zero]
    return j1, j2


def _assemble(cf, new_divisor_old_vars, kept_slot_old_vars, absorbed_old_vars):
    """Dense new variable order: divisor, slots, identity, old tail, absorbed."""
    identity_old = [cf.n + cf.num_slots + r for r in range(cf.identity_rows)]
    tail_old = [v for v in range(cf.active_vars, cf.d)]
    order = (list(new_divisor_old_vars) + list(kept_slot_old_vars)
             + identity_old + tail_old + list(absorbed_old_vars))
    var_map = [0] * cf.d
    for new, old in enumerate(order):
        var_map[old] = new
    return tuple(var_map)


def _case1(cf: ChartForm, center: BlowupCenterChart,
           choice: BlowupChartChoice, div: list[int]) -> BlowupResult:
    j0 = choice.j0
    j1, j2 = _split_by_stratum(choice, div, j0)
    noncenter = [j for j in range(cf.n) if j not in set(div)]
    new_div = [j0] + j1 + noncenter
    kept_slots = [cf.n + t for t in range(cf.s)]
    var_map = _assemble(cf, new_div, kept_slots, j2)

    matrix = []
    for i in range(cf.rows):
        exc = sum(cf.matrix[i][j] for j in div) + (1 if i >= cf.ell else 0)
        matrix.append(tuple([exc] + [cf.matrix[i][j] for j in new_div[1:]]))

    units = []
    for i, unit in enumerate(cf.units):
        u = unit.remap_vars({old: var_map[old] for old in range(cf.d)})
        for j in j2:
            u = u.with_factor(var_map[j], choice.beta_of(j).unit_value(),
                              cf.matrix[i][j])
        units.append(u)

    betas = tuple(choice.beta_of(cf.n + t) for t in range(cf.s))
    chart = ChartForm(
        d=cf.d, m=cf.m, n=len(new_div), ell=cf.ell, s=cf.s, tag=QTF1,
        matrix=tuple(matrix), units=tuple(units), betas=betas,
        ell_bar=cf.ell_bar)
    return BlowupResult(chart, var_map, tuple(range(cf.rows)))


def _case2(cf: ChartForm, center: BlowupCenterChart,
           choice: BlowupChartChoice, div: list[int]) -> BlowupResult:
    t0 = choice.j0 - cf.n
    j1, j2 = _split_by_stratum(choice, div, choice.j0)
    noncenter = [j for j in range(cf.n) if j not in set(div)]
    new_div = j1 + noncenter + [choice.j0]
    kept_slots = [cf.n + t for t in range(cf.s) if t != t0]
    var_map = _assemble(cf, new_div, kept_slots, j2)

    row_order = (list(range(cf.ell)) + [cf.ell + t0]
                 + [cf.ell + t for t in range(cf.s) if t != t0])
    matrix = []
    units = []
    for new_i, i in enumerate(row_order):
        exc = sum(cf.matrix[i][j] for j in div) + (1 if i >= cf.ell else 0)
        matrix.append(tuple([cf.matrix[i][j] for j in new_div[:-1]] + [exc]))
        u = cf.units[i].remap_vars({old: var_map[old] for old in range(cf.d)})
        for j in j2:
            u = u.with_factor(var_map[j], choice.beta_of(j).unit_value(),
                              cf.matrix[i][j])
        units.append(u)

    betas = (None,) + tuple(choice.beta_of(cf.n + t)
                            for t in range(cf.s) if t != t0)
    chart = ChartForm(
        d=cf.d, m=cf.m, n=len(new_div), ell=cf.ell, s=cf.s, tag=QTF2,
        matrix=tuple(matrix), units=tuple(units), betas=betas,
        ell_bar=cf.ell_bar)
    return BlowupResult(chart, var_map, tuple(row_order))


def enumerate_blowup_strata(cf: ChartForm, center: BlowupCenterChart,
                            symbol_prefix: str = "b"):
    """All (choice, transform) pairs covering the exceptional fiber:
    every exceptional coordinate j0, every zero/generic split of the
    remaining center coordinates, in a fixed canonical order."""
    coords = center_coordinates(cf, center)
    out = []
    for j0 in coords:
        others = [v for v in coords if v != j0]
        for pattern in itertools.product((False, True), repeat=len(others)):
            betas = tuple(
                (v, Stratum.generic(f"{symbol_prefix}.{j0}.{v}") if generic
                 else ZERO_STRATUM)
                for v, generic in zip(others, pattern))
            choice = BlowupChartChoice(j0=j0, betas=betas)
            out.append((choice, blowup_transform(cf, center, choice)))
    return out
