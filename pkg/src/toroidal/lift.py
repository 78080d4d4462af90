"""Lifting the morphism through the target blowup once the pullback of the
center is principal.

The generating row of the principal pullback names the blowup chart of
the target that the lifted morphism enters.  Every other center
coordinate turns into a ratio against the generator: ratios that still
vanish give strict-transform rows of the new chart, ratios with a
nonzero constant become fresh translated parameters whose constants are
exact unit-value ratios.  When the center lies in no divisor component
through the point, the exceptional direction never joins the divisor
and is dropped back out of the chart instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chart import (
    QTF1,
    QTF2,
    TOROIDAL,
    CenterDescriptor,
    ChartForm,
    ValidityReport,
    column_minima,
    pullback_center_ideal,
    verify_toroidal_form,
)
from .errors import InternalCheckError
from .linalg import rank
from .units import UnitToken, UnitValue

CASE1, CASE2, CASE3, SMOOTH_CASE = "case1", "case2", "case3", "smooth"


@dataclass(frozen=True)
class FreshParam:
    """A center coordinate consumed into a fresh translated parameter.

    The target coordinate is scale * (original factor) - shift at the
    new point; `shift` is None when the subtracted value is zero.
    """

    source: tuple[str, int]  # ("row" | "slot", chart row index)
    scale: UnitValue
    shift: UnitValue | None


@dataclass(frozen=True)
class TargetPoint:
    """The stratum of the target blowup chart the lift lands on."""

    denominator_row: int
    ell1: int
    exceptional_in_divisor: bool
    values: tuple[tuple[int, UnitValue | None], ...]  # per center row != gen


@dataclass(frozen=True)
class LiftRecord:
    case: str
    gen_row: int
    drop_col: int | None
    row_sources: tuple[tuple[str, int], ...]
    fresh: tuple[FreshParam, ...]
    t_nonzero: int
    target: TargetPoint


@dataclass(frozen=True)
class LiftResult:
    lifted: ChartForm
    record: LiftRecord

    @property
    def target(self) -> TargetPoint:
        return self.record.target


def _require_adapted(cf: ChartForm, z: CenterDescriptor) -> None:
    if cf.tag not in (QTF1, QTF2):
        raise ValueError("lift needs a center-adapted chart")
    if cf.ell_bar != z.ell_bar or cf.s != z.extra_slots:
        raise ValueError("chart is not adapted to this descriptor")


def lift_case(cf: ChartForm, z: CenterDescriptor) -> str:
    """Which branch of the lift applies; requires a principal pullback."""
    _require_adapted(cf, z)
    ideal = pullback_center_ideal(cf, z)
    if len(ideal.gens) != 1:
        raise ValueError("pullback of the center is not principal")
    if cf.ell == 0:
        return SMOOTH_CASE
    if cf.tag == QTF2:
        return CASE3
    if any(b is not None and not b.is_zero for b in cf.betas):
        return CASE2
    mins = column_minima(cf)
    if any(cf.matrix[i] == mins for i in range(cf.ell_bar)):
        return CASE1
    raise InternalCheckError("principal qtf1 chart matches no lift case")


def lift_after_principalization(cf: ChartForm, z: CenterDescriptor) -> LiftResult:
    case = lift_case(cf, z)
    if cf.ell_bar == 0:
        return _lift_outside_divisor(cf, z, case)
    return _lift_inside_divisor(cf, z, case)


def _lift_inside_divisor(cf: ChartForm, z: CenterDescriptor, case: str) -> LiftResult:
    """Cases with ell_bar >= 1: the target exceptional joins the divisor."""
    mins = column_minima(cf)

    if case == CASE1:
        gen_row = next(i for i in range(cf.ell_bar) if cf.matrix[i] == mins)
        gen_const = cf.units[gen_row].constant()
    elif case == CASE2:
        t_w = next(t for t in range(cf.s)
                   if cf.betas[t] is not None and not cf.betas[t].is_zero)
        gen_row = cf.ell + t_w
        gen_const = cf.units[gen_row].constant() * cf.betas[t_w].unit_value()
    elif case == CASE3:
        gen_row = cf.ell
        gen_const = cf.units[gen_row].constant()
    else:
        raise InternalCheckError(f"unexpected case {case} with ell_bar >= 1")
    gen_vec = mins
    if cf.matrix[gen_row] != gen_vec:
        raise InternalCheckError("generator row is not the columnwise minimum")

    reduced = {i: tuple(x - y for x, y in zip(cf.matrix[i], mins))
               for i in range(cf.ell_bar) if i != gen_row}
    if any(x < 0 for row in reduced.values() for x in row):
        raise InternalCheckError("column minima exceeded a center row")
    strict = [i for i in sorted(reduced) if any(reduced[i])]
    zero = [i for i in sorted(reduced) if not any(reduced[i])]

    if case == CASE1:
        # Vanished-row bound of the divisor-generator construction: at most
        # min(ell - rank, ell_bar - 1) rows can collapse onto the generator.
        r = rank(cf.matrix[:cf.ell])
        if len(zero) > min(cf.ell - r, cf.ell_bar - 1):
            raise InternalCheckError("too many vanished center rows for the rank bound")

    matrix = [gen_vec]
    units = [UnitToken(gen_const)]
    row_sources: list[tuple[str, int]] = [("gen", gen_row)]
    for i in strict:
        matrix.append(reduced[i])
        units.append(UnitToken(cf.units[i].constant() * gen_const.inv()))
        row_sources.append(("strict", i))
    for i in range(cf.ell_bar, cf.ell):
        matrix.append(cf.matrix[i])
        units.append(UnitToken(cf.units[i].constant()))
        row_sources.append(("kept", i))

    for j in range(cf.n):
        if not any(row[j] for row in matrix):
            raise InternalCheckError(
                f"reduced matrix lost column {j}, contradicting column positivity")

    fresh: list[FreshParam] = []
    values: list[tuple[int, UnitValue | None]] = []
    for i in strict:
        values.append((i, None))
    for i in zero:
        val = cf.units[i].constant() * gen_const.inv()
        fresh.append(FreshParam(("row", i), scale=val, shift=val))
        values.append((i, val))
    for t in range(cf.s):
        row = cf.ell + t
        if row == gen_row:
            continue
        scale = cf.units[row].constant() * gen_const.inv()
        beta = cf.betas[t]
        shift = None
        if beta is not None and not beta.is_zero:
            shift = scale * beta.unit_value()
        fresh.append(FreshParam(("slot", row), scale=scale, shift=shift))
        values.append((row, shift))

    ell1 = len(matrix)
    if ell1 != cf.ell - cf.ell_bar + len(strict) + 1:
        raise InternalCheckError("lifted divisor count bookkeeping broke")
    lifted = ChartForm(
        d=cf.d, m=cf.m, n=cf.n, ell=ell1, s=0, tag=TOROIDAL,
        matrix=tuple(matrix), units=tuple(units))
    report = verify_toroidal_form(lifted)
    if not report.ok:
        raise InternalCheckError(f"lifted chart is not toroidal: {report}")

    target = TargetPoint(denominator_row=gen_row, ell1=ell1,
                         exceptional_in_divisor=True,
                         values=tuple(sorted(values)))
    record = LiftRecord(case=case, gen_row=gen_row, drop_col=None,
                        row_sources=tuple(row_sources), fresh=tuple(fresh),
                        t_nonzero=1 + len(strict), target=target)
    return LiftResult(lifted, record)


def _lift_outside_divisor(cf: ChartForm, z: CenterDescriptor, case: str) -> LiftResult:
    """ell_bar == 0: the center lies in no divisor component through the
    point, so neither exceptional joins a divisor; the exceptional chart
    variable is consumed back into an identity parameter."""
    if cf.tag != QTF2:
        raise ValueError("an ell_bar = 0 stratum lifts only from the qtf2 shape")
    gen_row = cf.ell
    exc_col = cf.n - 1
    expected = tuple(1 if j == exc_col else 0 for j in range(cf.n))
    if cf.matrix[gen_row] != expected:
        raise InternalCheckError("unexpected generator shape for an outside-divisor lift")
    for i in range(cf.ell):
        if cf.matrix[i][exc_col] != 0:
            raise InternalCheckError("divisor rows meet the exceptional column")

    gen_const = cf.units[gen_row].constant()
    matrix = tuple(row[:exc_col] for row in cf.matrix[:cf.ell])
    units = tuple(UnitToken(u.constant()) for u in cf.units[:cf.ell])
    row_sources = tuple(("kept", i) for i in range(cf.ell))

    fresh = [FreshParam(("slot", gen_row), scale=gen_const, shift=None)]
    values: list[tuple[int, UnitValue | None]] = []
    for t in range(1, cf.s):
        row = cf.ell + t
        scale = cf.units[row].constant() * gen_const.inv()
        beta = cf.betas[t]
        shift = None
        if beta is not None and not beta.is_zero:
            shift = scale * beta.unit_value()
        fresh.append(FreshParam(("slot", row), scale=scale, shift=shift))
        values.append((row, shift))

    lifted = ChartForm(
        d=cf.d, m=cf.m, n=cf.n - 1, ell=cf.ell, s=0, tag=TOROIDAL,
        matrix=matrix, units=units)
    report = verify_toroidal_form(lifted)
    if not report.ok:
        raise InternalCheckError(f"lifted chart is not toroidal: {report}")

    target = TargetPoint(denominator_row=gen_row, ell1=cf.ell,
                         exceptional_in_divisor=False,
                         values=tuple(sorted(values)))
    record = LiftRecord(case=case, gen_row=gen_row, drop_col=exc_col,
                        row_sources=row_sources, fresh=tuple(fresh),
                        t_nonzero=0, target=target)
    return LiftResult(lifted, record)


def _units_equal(a: UnitValue, b: UnitValue) -> bool:
    return a == b


def verify_commutes(cf: ChartForm, z: CenterDescriptor,
                    result: LiftResult) -> ValidityReport:
    """Substitute the target blowup equations into the lifted form and
    compare, row by row and constant by constant, with the original chart."""
    rec = result.record
    lifted = result.lifted
    failures: list[tuple[str, str]] = []

    def fail(code, msg):
        failures.append((code, msg))

    def pad(row: tuple[int, ...]) -> tuple[int, ...]:
        if rec.drop_col is None:
            return row
        return row[:rec.drop_col] + (0,) + row[rec.drop_col:]

    lifted_index = {src: k for k, src in enumerate(rec.row_sources)}
    fresh_index = {p.source[1]: p for p in rec.fresh}
    value_of = dict(rec.target.values)

    gen_vec = None
    gen_const = None
    if ("gen", rec.gen_row) in lifted_index:
        k = lifted_index[("gen", rec.gen_row)]
        gen_vec = pad(lifted.matrix[k])
        gen_const = lifted.units[k].constant()
    else:
        p = fresh_index.get(rec.gen_row)
        if p is None:
            return ValidityReport((("gen", "generator row is unaccounted for"),))
        gen_vec = tuple(1 if j == rec.drop_col else 0 for j in range(cf.n))
        gen_const = p.scale

    covered = set()
    for i in range(cf.rows):
        original_const = cf.units[i].constant()
        slot_t = i - cf.ell if i >= cf.ell else None
        beta = cf.betas[slot_t] if slot_t is not None else None

        if i == rec.gen_row:
            covered.add(i)
            if gen_vec != cf.matrix[i]:
                fail("exponent", f"generator row {i} exponents changed")
            expected = original_const
            if beta is not None and not beta.is_zero:
                expected = expected * beta.unit_value()
            if not _units_equal(gen_const, expected):
                fail("constant", f"generator row {i} constant mismatch")
            continue

        if ("strict", i) in lifted_index:
            covered.add(i)
            k = lifted_index[("strict", i)]
            recon = tuple(x + y for x, y in zip(gen_vec, pad(lifted.matrix[k])))
            if recon != cf.matrix[i]:
                fail("exponent", f"strict transform of row {i} does not recompose")
            if not _units_equal(gen_const * lifted.units[k].constant(),
                                original_const):
                fail("constant", f"strict transform of row {i} constant mismatch")
            if value_of.get(i, None) is not None:
                fail("target", f"strict row {i} should sit at ratio zero")
            continue

        if ("kept", i) in lifted_index:
            covered.add(i)
            k = lifted_index[("kept", i)]
            if pad(lifted.matrix[k]) != cf.matrix[i]:
                fail("exponent", f"kept row {i} exponents changed")
            if not _units_equal(lifted.units[k].constant(), original_const):
                fail("constant", f"kept row {i} constant mismatch")
            continue

        if i in fresh_index:
            covered.add(i)
            p = fresh_index[i]
            if gen_vec != cf.matrix[i]:
                fail("exponent",
                     f"fresh parameter row {i} does not share the generator exponents")
            if not _units_equal(gen_const * p.scale, original_const):
                fail("constant", f"fresh parameter row {i} scale mismatch")
            if beta is not None and not beta.is_zero:
                expected_shift = p.scale * beta.unit_value()
                if p.shift is None or not _units_equal(p.shift, expected_shift):
                    fail("constant", f"fresh parameter row {i} shift mismatch")
            elif p.source[0] == "slot" and p.shift is not None:
                fail("constant", f"fresh slot row {i} should have zero shift")
            elif p.source[0] == "row" and (
                    p.shift is None or not _units_equal(p.shift, p.scale)):
                fail("constant",
                     f"fresh parameter row {i} must shift by its unit ratio")
            if value_of.get(i, "missing") == "missing" and i != rec.gen_row:
                fail("target", f"no target coordinate recorded for row {i}")
            continue

        fail("coverage", f"row {i} of the input chart is unaccounted for")

    if len(covered) != cf.rows:
        fail("coverage", "some input rows were not reconstructed")
    if rec.target.ell1 != lifted.ell:
        fail("target", "target divisor count disagrees with the lifted chart")
    return ValidityReport(tuple(failures))
