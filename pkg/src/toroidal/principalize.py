"""Driver that makes the pulled-back center ideal principal on every
tracked chart stratum by repeated permissible blowups.

Each round factors the pullback on every live stratum, picks the
stratum whose residual ideal has the largest order (ties broken by
family position, then creation order), selects a blowup center inside
the residual's maximum order locus, and replaces the stratum by the
finite list of chart strata covering the exceptional fiber.  A step cap
stands in for a termination proof; hitting it is a reported status.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .blowup import (
    BlowupCenterChart,
    BlowupChartChoice,
    check_permissible_center,
    enumerate_blowup_strata,
)
from .chart import CenterDescriptor, ChartForm, column_minima, pullback_center_ideal
from .monomial import (
    MonomialIdeal,
    irreducible_decomposition,
    max_order_components,
    order_at_origin,
    principal_part_factorization,
    radical,
)

PRINCIPAL = "principal"
EXCEEDED = "exceeded"


@dataclass(frozen=True)
class NonprincipalLocus:
    monomial_part: tuple[int, ...]
    residual: MonomialIdeal
    components: tuple[tuple[int, ...], ...]

    @property
    def is_principal(self) -> bool:
        return self.residual.is_unit


def nonprincipal_locus(cf: ChartForm, z: CenterDescriptor) -> NonprincipalLocus:
    """Factor the pullback I = x^F * N; the residual N cuts the locus where
    the pullback is not principal, and its radical's irreducible components
    name the candidate centers (each of codimension 2..m)."""
    ideal = pullback_center_ideal(cf, z)
    f, n = principal_part_factorization(ideal)
    if n.is_unit:
        return NonprincipalLocus(f, n, ())
    components = []
    for comp in irreducible_decomposition(radical(n)):
        support = tuple(sorted(next(j for j, x in enumerate(g) if x)
                               for g in comp.gens))
        components.append(support)
    components.sort()
    for support in components:
        if not 2 <= len(support) <= cf.m:
            raise AssertionError(
                f"component {support} violates the codimension bounds [2, {cf.m}]")
    return NonprincipalLocus(f, n, tuple(components))


class NoPermissibleCenter(ValueError):
    """No maximum-order component passes the permissibility test; the
    input is outside the guaranteed regime."""


@dataclass(frozen=True)
class MaxOrderLexPolicy:
    """Default center selection among the maximum-order components.

    Ties between components are broken by the order of the reduced
    divisor block along the candidate (deepest first), then by size,
    then lexicographically.  Raw component order alone admits a cycle:
    the residual shape <x*y^2, z^2, slot> reproduces itself forever when
    the lexicographically first component is blown up, while the
    component along which the reduced block is most singular makes
    strict progress.
    """

    name: str = "max-order-lex"

    def _reduced_depth(self, cf: ChartForm, subset) -> int:
        if cf.ell_bar == 0:
            return 0
        mins = column_minima(cf)
        divisor = [j for j in subset if j < cf.n]
        return min(sum(cf.matrix[i][j] - mins[j] for j in divisor)
                   for i in range(cf.ell_bar))

    def candidates(self, cf: ChartForm, residual: MonomialIdeal):
        comps = max_order_components(residual)
        return sorted(comps, key=lambda s: (-self._reduced_depth(cf, s),
                                            -len(s), s))

    def select(self, cf: ChartForm, z: CenterDescriptor,
               residual: MonomialIdeal) -> BlowupCenterChart:
        rejected = []
        for subset in self.candidates(cf, residual):
            divisor = tuple(j for j in subset if j < cf.n)
            slots = [j for j in subset if j >= cf.n]
            if slots != [cf.n + t for t in range(cf.s)]:
                rejected.append((subset, "component misses a slot variable"))
                continue
            center = BlowupCenterChart(divisor, cf.s)
            if center.codim < 2:
                rejected.append((subset, "codimension below 2"))
                continue
            ok, witness = check_permissible_center(cf, center)
            if ok:
                return center
            rejected.append((subset, f"not permissible: {witness}"))
        raise NoPermissibleCenter(f"no permissible candidate; tried {rejected}")


POLICIES = {"max-order-lex": MaxOrderLexPolicy()}


@dataclass(frozen=True)
class PrincipalizationStep:
    stratum_id: str
    center: BlowupCenterChart
    residual_order: int
    nonprincipal_count: int
    children: tuple[tuple[BlowupChartChoice, str], ...]


@dataclass(frozen=True)
class FinalStratum:
    stratum_id: str
    status: str
    chart: ChartForm
    descriptor: CenterDescriptor
    parent_path: tuple[str, ...]


@dataclass(frozen=True)
class PrincipalizationTrace:
    steps: tuple[PrincipalizationStep, ...]
    final: tuple[FinalStratum, ...]

    @property
    def exceeded(self) -> bool:
        return any(f.status == EXCEEDED for f in self.final)


@dataclass
class _Live:
    stratum_id: str
    chart: ChartForm
    z: CenterDescriptor
    family_pos: int
    created: int
    path: tuple[str, ...] = field(default_factory=tuple)


def _choice_tag(choice: BlowupChartChoice) -> str:
    flags = "".join("z" if b.is_zero else "g" for _, b in choice.betas)
    return f"e{choice.j0}{flags}"


def principalize_chart_family(
        strata: list[tuple[str, ChartForm, CenterDescriptor]],
        cap: int = 50,
        policy: MaxOrderLexPolicy = POLICIES["max-order-lex"],
) -> PrincipalizationTrace:
    live: list[_Live] = [
        _Live(sid, cf, z, pos, pos) for pos, (sid, cf, z) in enumerate(strata)]
    counter = len(live)
    steps: list[PrincipalizationStep] = []

    # The cap bounds the length of any single chain of blowups (the depth
    # of a stratum's history), mirroring the finite sequence it stands for;
    # strata at the cap stop expanding and finish with Exceeded status.
    while True:
        pending = [(s, nonprincipal_locus(s.chart, s.z)) for s in live]
        working = [(s, np) for s, np in pending
                   if not np.is_principal and len(s.path) < cap]
        if not working:
            break
        if len(steps) >= 100_000:
            raise RuntimeError("runaway principalization; raise the guard "
                               "only for genuinely larger instances")
        working.sort(key=lambda pair: (-order_at_origin(pair[1].residual),
                                       pair[0].family_pos, pair[0].created))
        target, np = working[0]
        center = policy.select(target.chart, target.z, np.residual)
        children = []
        records = []
        live.remove(target)
        for choice, result in enumerate_blowup_strata(
                target.chart, center, symbol_prefix=target.stratum_id):
            child_id = f"{target.stratum_id}.{_choice_tag(choice)}"
            child = _Live(child_id, result.chart, target.z,
                          target.family_pos, counter,
                          target.path + (target.stratum_id,))
            counter += 1
            live.append(child)
            children.append(child)
            records.append((choice, child_id))
        steps.append(PrincipalizationStep(
            stratum_id=target.stratum_id, center=center,
            residual_order=order_at_origin(np.residual),
            nonprincipal_count=len(working),
            children=tuple(records)))

    final = []
    for s in sorted(live, key=lambda s: (s.family_pos, s.created)):
        status = PRINCIPAL if nonprincipal_locus(s.chart, s.z).is_principal \
            else EXCEEDED
        final.append(FinalStratum(s.stratum_id, status, s.chart, s.z, s.path))
    return PrincipalizationTrace(tuple(steps), tuple(final))
