"""Validation of dominant monomial morphism data between local models and
its reduction to toroidal shape.

The input is an integer exponent matrix describing how each target
coordinate pulls back as a Laurent monomial in the source coordinates.
Step 1 eliminates the torus-column part of the rank-basis rows by an
exact rational solve; step 2 repackages the remaining torus factors of
the other rows into translated parameters with nonzero constants.  Only
the constants of those parameters are retained.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chart import SMOOTH, TOROIDAL, ChartForm, ValidityReport, verify_toroidal_form
from .errors import InternalCheckError
from .linalg import greedy_pivot_cols, greedy_pivot_rows, mat_mul, rank, solve_square
from .units import TRIVIAL_UNIT, UnitToken, UnitValue


@dataclass(frozen=True)
class LocalModelDims:
    dim: int
    cone: int

    def __post_init__(self):
        if not 0 <= self.cone <= self.dim:
            raise ValueError("need 0 <= cone dimension <= ambient dimension")


@dataclass(frozen=True)
class ToricMorphismData:
    source: LocalModelDims  # (d, n)
    target: LocalModelDims  # (m, ell)
    matrix: tuple[tuple[int, ...], ...]  # m rows, d columns

    @property
    def d(self) -> int:
        return self.source.dim

    @property
    def n(self) -> int:
        return self.source.cone

    @property
    def m(self) -> int:
        return self.target.dim

    @property
    def ell(self) -> int:
        return self.target.cone


def validate_toric_morphism(data: ToricMorphismData) -> ValidityReport:
    """Shape, block-vanishing, dominance-rank, and divisor-coverage checks.

    Divisor rows must also be nonzero on the divisor columns: a target
    divisor coordinate pulling back to a unit would contradict the source
    point mapping to the target point.
    """
    failures: list[tuple[str, str]] = []
    d, n, m, ell = data.d, data.n, data.m, data.ell
    if len(data.matrix) != m or any(len(row) != d for row in data.matrix):
        return ValidityReport((("shape", f"matrix must be {m} x {d}"),))
    for i in range(ell):
        for j in range(n):
            if data.matrix[i][j] < 0:
                failures.append(("negative", f"divisor block entry ({i},{j}) < 0"))
    for i in range(ell, m):
        for j in range(n):
            if data.matrix[i][j] != 0:
                failures.append(("block", f"torus row {i} touches divisor column {j}"))
    got_rank = rank(data.matrix)
    if got_rank != m:
        failures.append(("rank", f"rank {got_rank} < m = {m}, morphism not dominant"))
    for j in range(n):
        if sum(data.matrix[i][j] for i in range(ell)) <= 0:
            failures.append(("column", f"divisor column {j} is not covered"))
    for i in range(ell):
        if not any(data.matrix[i][j] for j in range(n)):
            failures.append(("row", f"divisor row {i} has no divisor part"))
    return ValidityReport(tuple(failures))


@dataclass(frozen=True)
class ToroidalPresentation:
    r: int
    row_perm: tuple[int, ...]        # new row index -> input row index
    col_perm: tuple[int, ...]        # new column index -> input column index
    elimination: tuple[tuple[Fraction, ...], ...]  # r x (d - n)
    c_block: tuple[tuple[Fraction, ...], ...]      # (m - r) x (d - n)
    constants: tuple[UnitValue, ...]               # m - r translated constants
    chart: ChartForm

    @property
    def tf_matrix(self) -> tuple[tuple[int, ...], ...]:
        return self.chart.matrix


def default_alphas(data: ToricMorphismData) -> dict[int, UnitValue]:
    """Symbolic nonzero coordinates for the torus directions."""
    return {j: UnitValue.symbol(f"a{j}") for j in range(data.n, data.d)}


def normalize_toric_presentation(
        data: ToricMorphismData,
        alphas: dict[int, UnitValue] | None = None) -> ToroidalPresentation:
    report = validate_toric_morphism(data)
    if not report.ok:
        raise ValueError(f"invalid toric morphism data: {report}")
    d, n, m, ell = data.d, data.n, data.m, data.ell
    if alphas is None:
        alphas = default_alphas(data)
    else:
        alphas = {j: UnitValue.of(v) for j, v in alphas.items()}
        missing = [j for j in range(n, d) if j not in alphas]
        if missing:
            raise ValueError(f"missing torus coordinates {missing}")

    divisor_block = [[data.matrix[i][j] for j in range(n)] for i in range(ell)]
    basis_rows = greedy_pivot_rows(divisor_block)
    r = len(basis_rows)
    basis_cols = greedy_pivot_cols([divisor_block[i] for i in basis_rows])
    if len(basis_cols) != r:
        raise InternalCheckError("pivot column search disagrees with the rank")

    row_perm = tuple(basis_rows + [i for i in range(ell) if i not in basis_rows]
                     + list(range(ell, m)))
    col_perm = tuple(basis_cols + [j for j in range(n) if j not in basis_cols]
                     + list(range(n, d)))
    perm = [[data.matrix[row_perm[i]][col_perm[j]] for j in range(d)]
            for i in range(m)]

    tail = d - n
    if r:
        a_rr = [[perm[i][j] for j in range(r)] for i in range(r)]
        a_tail = [[perm[i][n + j] for j in range(tail)] for i in range(r)]
        elimination = solve_square(a_rr, a_tail)
    else:
        elimination = []
    for i in range(r):
        for j in range(tail):
            residual = perm[i][n + j] - sum(
                Fraction(perm[i][k]) * elimination[k][j] for k in range(r))
            if residual != 0:
                raise InternalCheckError(f"elimination residual nonzero at ({i},{j})")

    lower = [[Fraction(perm[i][k]) if i < ell else Fraction(0) for k in range(r)]
             for i in range(r, m)]
    correction = mat_mul(lower, elimination) if r else [
        [Fraction(0)] * tail for _ in range(m)]
    c_block = tuple(
        tuple(Fraction(perm[r + i][n + j]) - correction[i][j] for j in range(tail))
        for i in range(m - r))
    if rank(c_block) != m - r:
        raise InternalCheckError("torus block rank is not m - r")

    constants = tuple(
        _power_product(alphas, col_perm[n:], c_block[i]) for i in range(m - r))

    chart = _tf_chart(data, perm, r, constants)
    return ToroidalPresentation(
        r=r, row_perm=row_perm, col_perm=col_perm,
        elimination=tuple(tuple(row) for row in elimination),
        c_block=c_block, constants=constants, chart=chart)


def _power_product(alphas, cols, exponents) -> UnitValue:
    value = UnitValue()
    for j, e in zip(cols, exponents):
        if e:
            value = value * (alphas[j] ** e)
    return value


def _tf_chart(data: ToricMorphismData, perm, r: int,
              constants: tuple[UnitValue, ...]) -> ChartForm:
    """The absorbed toroidal chart: the permuted divisor block with the
    translated factors of rows r+1..ell carried as unit tokens."""
    d, n, m, ell = data.d, data.n, data.m, data.ell
    if ell == 0:
        return ChartForm(d=d, m=m, n=0, ell=0, s=0, tag=SMOOTH)
    matrix = tuple(tuple(perm[i][j] for j in range(n)) for i in range(ell))
    units: list[UnitToken] = []
    factor_base = n + (m - ell)
    for i in range(ell):
        if i < r:
            units.append(TRIVIAL_UNIT)
        else:
            units.append(UnitToken().with_factor(
                factor_base + (i - r), constants[i - r], 1))
    chart = ChartForm(d=d, m=m, n=n, ell=ell, s=0, tag=TOROIDAL,
                      matrix=matrix, units=tuple(units))
    report = verify_toroidal_form(chart)
    if not report.ok:
        raise InternalCheckError(f"normalized chart is not toroidal: {report}")
    return chart
