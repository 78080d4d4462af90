"""Top-level orchestration.

The input is a single document holding the chart atlas of a locally
toroidal morphism together with a target-side resolution script given
by labeled divisor incidences.  Each script step blows up one target
center; the engine adapts every source stratum above the center,
principalizes the pulled-back center ideal by permissible blowups,
lifts every resulting stratum through the target blowup, and records
everything in a replayable trace.  The final verdict certifies that
every stratum is toroidal for the global divisor label count.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import __version__
from .chart import (
    SMOOTH,
    TOROIDAL,
    CenterDescriptor,
    ChartForm,
    ValidityReport,
    derive_center_form,
    extend_to_global_form,
    verify_toroidal_form,
)
from .documents import (
    InvalidDocument,
    canonical_dumps,
    center_to_doc,
    chart_from_doc,
    chart_to_doc,
    choice_to_doc,
    descriptor_to_doc,
    lift_record_to_doc,
)
from .errors import InternalCheckError
from .lift import lift_after_principalization, verify_commutes
from .linalg import rank
from .principalize import (
    EXCEEDED,
    POLICIES,
    PrincipalizationTrace,
    principalize_chart_family,
)

ATLAS_SCHEMA = "toroidal-atlas/1"
TRACE_SCHEMA = "toroidal-trace/1"


# ---------------------------------------------------------------------------
# Atlas model


@dataclass(frozen=True)
class TrackedStratum:
    stratum_id: str
    chart: ChartForm
    row_labels: tuple[str, ...]
    extra_global_labels: int = 0


@dataclass(frozen=True)
class LabelInfo:
    name: str
    charts: tuple[str, ...]      # charts whose open set sees the component
    e_charts: tuple[str, ...]    # charts where it is a divisor component
    under_e0: bool = True


@dataclass
class MorphismAtlas:
    d: int
    m: int
    chart_order: list[str]
    strata: dict[str, list[TrackedStratum]]
    labels: dict[str, LabelInfo]

    def all_strata(self):
        for chart_id in self.chart_order:
            for stratum in self.strata[chart_id]:
                yield chart_id, stratum


@dataclass(frozen=True)
class CenterView:
    c: int
    contained: tuple[str, ...]
    strata: tuple[str, ...] | None = None


@dataclass(frozen=True)
class ScriptStep:
    step_id: str
    views: tuple[tuple[str, CenterView], ...]
    incidence: tuple[tuple[str, str], ...]

    def incidence_of(self, label: str) -> str:
        for name, kind in self.incidence:
            if name == label:
                return kind
        return "out"


@dataclass(frozen=True)
class ResolutionScript:
    steps: tuple[ScriptStep, ...]


# ---------------------------------------------------------------------------
# Parsing and validation


def parse_document(doc) -> tuple[MorphismAtlas, ResolutionScript]:
    if not isinstance(doc, dict) or doc.get("schema") != ATLAS_SCHEMA:
        raise InvalidDocument(f"expected schema {ATLAS_SCHEMA!r}")
    dims = doc.get("dims", {})
    try:
        d, m = int(dims["d"]), int(dims["m"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidDocument("dims must give integer d and m") from exc

    labels: dict[str, LabelInfo] = {}
    for entry in doc.get("labels", []):
        name = entry.get("name")
        if not name or name in labels:
            raise InvalidDocument(f"bad or duplicate label {name!r}")
        charts = tuple(entry.get("charts", []))
        e_charts = tuple(entry.get("e_charts", charts))
        labels[name] = LabelInfo(name=name, charts=charts, e_charts=e_charts,
                                 under_e0=bool(entry.get("under_e0", True)))

    chart_order: list[str] = []
    strata: dict[str, list[TrackedStratum]] = {}
    for chart_entry in doc.get("charts", []):
        chart_id = chart_entry.get("id")
        if not chart_id or chart_id in strata:
            raise InvalidDocument(f"bad or duplicate chart id {chart_id!r}")
        chart_order.append(chart_id)
        strata[chart_id] = []
        for stratum_doc in chart_entry.get("strata", []):
            sid = stratum_doc.get("id")
            if not sid:
                raise InvalidDocument(f"stratum in chart {chart_id} missing id")
            if any(s.stratum_id == f"{chart_id}/{sid}" for s in strata[chart_id]):
                raise InvalidDocument(f"duplicate stratum id {sid!r} in {chart_id}")
            chart = chart_from_doc(stratum_doc.get("chart", {}))
            row_labels = tuple(stratum_doc.get("row_labels", []))
            strata[chart_id].append(TrackedStratum(
                stratum_id=f"{chart_id}/{sid}",
                chart=chart,
                row_labels=row_labels,
                extra_global_labels=int(stratum_doc.get("extra_global_labels", 0))))

    steps = []
    for step_doc in doc.get("script", []):
        step_id = step_doc.get("id")
        if not step_id:
            raise InvalidDocument("script step missing id")
        views = []
        for chart_id, view_doc in sorted(step_doc.get("views", {}).items()):
            views.append((chart_id, CenterView(
                c=int(view_doc["c"]),
                contained=tuple(view_doc.get("contained", [])),
                strata=None if view_doc.get("strata") is None
                else tuple(view_doc["strata"]))))
        incidence = tuple(sorted(step_doc.get("incidence", {}).items()))
        steps.append(ScriptStep(step_id=step_id, views=tuple(views),
                                incidence=incidence))
    return (MorphismAtlas(d=d, m=m, chart_order=chart_order, strata=strata,
                          labels=labels),
            ResolutionScript(tuple(steps)))


def check_atlas(atlas: MorphismAtlas) -> ValidityReport:
    """Every stratum is a toroidal or smooth chart of the declared
    dimensions, labeled consistently, with room for its lifts."""
    failures = []
    for chart_id, stratum in atlas.all_strata():
        cf = stratum.chart
        where = stratum.stratum_id
        if (cf.d, cf.m) != (atlas.d, atlas.m):
            failures.append(("dims", f"{where}: chart dims differ from the atlas"))
        if cf.tag == SMOOTH:
            if stratum.row_labels:
                failures.append(("labels", f"{where}: smooth strata carry no labels"))
            continue
        if cf.tag != TOROIDAL:
            failures.append(("tag", f"{where}: input strata must be toroidal or smooth"))
            continue
        report = verify_toroidal_form(cf)
        for code, msg in report.failures:
            failures.append((code, f"{where}: {msg}"))
        if len(stratum.row_labels) != cf.ell:
            failures.append(("labels", f"{where}: one label per divisor row required"))
        if len(set(stratum.row_labels)) != len(stratum.row_labels):
            failures.append(("labels", f"{where}: duplicate row labels"))
        for label in stratum.row_labels:
            info = atlas.labels.get(label)
            if info is None:
                failures.append(("labels", f"{where}: unregistered label {label!r}"))
            elif chart_id not in info.e_charts:
                failures.append(("labels",
                                 f"{where}: label {label!r} not registered to chart"))
        if cf.ell and cf.d < cf.n + cf.m - rank(cf.matrix):
            failures.append(("capacity",
                             f"{where}: d too small for the chart's rank deficit"))
    return ValidityReport(tuple(failures))


# ---------------------------------------------------------------------------
# Target-side script verification


@dataclass
class YState:
    labels: dict[str, LabelInfo]
    chart_ids: tuple[str, ...]

    def copy(self) -> "YState":
        return YState(dict(self.labels), self.chart_ids)


def apply_script_step(state: YState, step: ScriptStep):
    """Check one step against the divisor rules and update the registry.

    Returns (failures, exceptional label name or None).
    """
    failures = []
    if not step.views:
        failures.append(("views", f"step {step.step_id}: no chart sees the center"))
        return failures, None
    for chart_id, _ in step.views:
        if chart_id not in state.chart_ids:
            failures.append(("views",
                             f"step {step.step_id}: unknown chart {chart_id!r}"))

    codims = {view.c for _, view in step.views}
    if len(codims) > 1:
        failures.append(("consistency",
                         f"step {step.step_id}: chart views disagree on codimension"))
    c = min(codims)
    if c < 2:
        failures.append(("codim", f"step {step.step_id}: centers need codimension >= 2"))

    for label, kind in step.incidence:
        if label not in state.labels:
            failures.append(("labels", f"step {step.step_id}: unknown label {label!r}"))
        elif kind == "meets":
            failures.append(("dichotomy",
                             f"step {step.step_id}: center meets but does not contain "
                             f"component {label!r}"))
        elif kind not in ("in", "out"):
            failures.append(("labels", f"step {step.step_id}: bad incidence {kind!r}"))

    contained_any = set()
    for chart_id, view in step.views:
        for label in view.contained:
            info = state.labels.get(label)
            if info is None:
                failures.append(("labels",
                                 f"step {step.step_id}: unknown label {label!r}"))
                continue
            contained_any.add(label)
            if step.incidence_of(label) != "in":
                failures.append(("consistency",
                                 f"step {step.step_id}: chart {chart_id} contains "
                                 f"{label!r} but incidence is not 'in'"))
    for label, kind in step.incidence:
        if kind != "in" or label not in state.labels:
            continue
        info = state.labels[label]
        for chart_id, view in step.views:
            if chart_id in info.charts and label not in view.contained:
                failures.append(("consistency",
                                 f"step {step.step_id}: chart {chart_id} sees "
                                 f"{label!r} but omits it from the center view"))

    under = any(state.labels[label].under_e0 for label in contained_any
                if label in state.labels)
    exc_name = f"exc.{step.step_id}"
    if exc_name in state.labels:
        failures.append(("labels", f"duplicate exceptional label {exc_name!r}"))
        return failures, None

    viewing = tuple(chart_id for chart_id, _ in step.views)
    e_charts = tuple(
        chart_id for chart_id, view in step.views
        if any(label in state.labels
               and chart_id in state.labels[label].e_charts
               for label in view.contained))
    if e_charts and not under:
        failures.append(("transform",
                         f"step {step.step_id}: new divisor component lies outside "
                         "the total transform of the initial union divisor"))
    state.labels[exc_name] = LabelInfo(
        name=exc_name, charts=viewing, e_charts=e_charts, under_e0=under)
    return failures, exc_name


def verify_resolution_script(atlas: MorphismAtlas,
                             script: ResolutionScript) -> ValidityReport:
    state = YState(dict(atlas.labels), tuple(atlas.chart_order))
    failures = []
    for step in script.steps:
        step_failures, _ = apply_script_step(state, step)
        failures.extend(step_failures)
    return ValidityReport(tuple(failures))


# ---------------------------------------------------------------------------
# The toroidalization loop


class ToroidalizeError(ValueError):
    pass


def _strata_above(chart_strata: list[TrackedStratum], view: CenterView,
                  chart_id: str):
    contained = set(view.contained)
    explicit = None if view.strata is None else {
        sid if "/" in sid else f"{chart_id}/{sid}" for sid in view.strata}
    above = []
    for stratum in chart_strata:
        if explicit is not None:
            if stratum.stratum_id not in explicit:
                continue
            if not contained <= set(stratum.row_labels):
                raise ToroidalizeError(
                    f"{stratum.stratum_id}: listed above the center but missing "
                    "one of its divisor components")
            above.append(stratum)
        elif contained and contained <= set(stratum.row_labels):
            above.append(stratum)
    return above


def _descriptor_for(stratum: TrackedStratum, view: CenterView) -> CenterDescriptor:
    rows = tuple(i for i, label in enumerate(stratum.row_labels)
                 if label in set(view.contained))
    return CenterDescriptor(ell_bar=len(rows), c=view.c, divisor_rows=rows)


@dataclass
class StepOutcome:
    doc: dict
    exceeded: bool
    commutes: bool


def _run_step(atlas: MorphismAtlas, state: YState, step: ScriptStep,
              cap: int, policy) -> StepOutcome:
    failures, exc_label = apply_script_step(state, step)
    if failures:
        raise ToroidalizeError(f"script step rejected: {failures}")

    step_doc = {"id": step.step_id, "exceptional_label": exc_label, "charts": {}}
    exceeded = False
    commutes_ok = True
    views = dict(step.views)

    for chart_id in atlas.chart_order:
        view = views.get(chart_id)
        if view is None:
            continue
        chart_strata = atlas.strata[chart_id]
        above = _strata_above(chart_strata, view, chart_id)
        if not above:
            step_doc["charts"][chart_id] = {"adapted": [], "lifts": []}
            continue

        family = []
        adapted_docs = []
        labels_of: dict[str, tuple[str, ...]] = {}
        extra_of: dict[str, int] = {}
        descriptors: dict[str, CenterDescriptor] = {}
        for stratum in above:
            z = _descriptor_for(stratum, view)
            adapted, row_order = derive_center_form(stratum.chart, z)
            permuted_labels = tuple(stratum.row_labels[i] for i in row_order)
            family.append((stratum.stratum_id, adapted, z))
            labels_of[stratum.stratum_id] = permuted_labels
            extra_of[stratum.stratum_id] = stratum.extra_global_labels
            descriptors[stratum.stratum_id] = z
            adapted_docs.append({
                "stratum": stratum.stratum_id,
                "descriptor": descriptor_to_doc(z),
                "row_order": list(row_order),
            })

        trace = principalize_chart_family(family, cap=cap, policy=policy)
        if trace.exceeded:
            exceeded = True

        lifts = []
        new_strata = []
        for final in trace.final:
            root = final.parent_path[0] if final.parent_path else final.stratum_id
            if final.status == EXCEEDED:
                new_strata.append(TrackedStratum(
                    stratum_id=final.stratum_id, chart=final.chart,
                    row_labels=labels_of[root],
                    extra_global_labels=extra_of[root]))
                continue
            result = lift_after_principalization(final.chart, final.descriptor)
            report = verify_commutes(final.chart, final.descriptor, result)
            if not report.ok:
                commutes_ok = False
            new_labels = _lifted_labels(result, labels_of[root], exc_label)
            lifted_id = f"{final.stratum_id}^"
            new_strata.append(TrackedStratum(
                stratum_id=lifted_id, chart=result.lifted,
                row_labels=new_labels, extra_global_labels=extra_of[root]))
            lifts.append({
                "stratum": final.stratum_id,
                "lifted_id": lifted_id,
                "record": lift_record_to_doc(result.record),
                "chart": chart_to_doc(result.lifted),
                "row_labels": list(new_labels),
                "commutes": report.ok,
            })

        untouched = [s for s in chart_strata
                     if s.stratum_id not in {a.stratum_id for a in above}]
        atlas.strata[chart_id] = untouched + new_strata
        step_doc["charts"][chart_id] = {
            "adapted": adapted_docs,
            "principalization": _principalization_doc(trace),
            "lifts": lifts,
        }
    return StepOutcome(step_doc, exceeded, commutes_ok)


def _lifted_labels(result, old_labels: tuple[str, ...],
                   exc_label: str | None) -> tuple[str, ...]:
    labels = []
    for kind, src in result.record.row_sources:
        if kind == "gen":
            if exc_label is None:
                raise InternalCheckError("generator row needs an exceptional label")
            labels.append(exc_label)
        else:
            labels.append(old_labels[src])
    if len(labels) != result.lifted.ell:
        raise InternalCheckError("label bookkeeping disagrees with the lifted chart")
    return tuple(labels)


def _principalization_doc(trace: PrincipalizationTrace) -> dict:
    return {
        "steps": [{
            "stratum": s.stratum_id,
            "center": center_to_doc(s.center),
            "residual_order": s.residual_order,
            "nonprincipal_count": s.nonprincipal_count,
            "children": [{"choice": choice_to_doc(choice), "id": cid}
                         for choice, cid in s.children],
        } for s in trace.steps],
        "final": [{
            "id": f.stratum_id,
            "status": f.status,
            "descriptor": descriptor_to_doc(f.descriptor),
            "chart": chart_to_doc(f.chart),
        } for f in trace.final],
    }


def verify_global_toroidal(atlas: MorphismAtlas) -> ValidityReport:
    """Per stratum: smooth strata must be 0-points; strata whose point
    meets extra global components must extend by an identity block and
    still satisfy the toroidal shape."""
    failures = []
    for chart_id, stratum in atlas.all_strata():
        cf = stratum.chart
        where = stratum.stratum_id
        k = cf.ell
        ell_global = k + stratum.extra_global_labels
        if cf.tag == SMOOTH:
            cf = replace(cf, tag=TOROIDAL)
        if cf.tag != TOROIDAL:
            failures.append(("tag", f"{where}: stratum is not toroidal"))
            continue
        report = verify_toroidal_form(cf)
        if report.ok and ell_global > k:
            try:
                report = verify_toroidal_form(extend_to_global_form(cf, ell_global))
            except (ValueError, AssertionError) as exc:
                failures.append(("extend", f"{where}: {exc}"))
                continue
        for code, msg in report.failures:
            failures.append((code, f"{where}: {msg}"))
    return ValidityReport(tuple(failures))


def atlas_to_doc(atlas: MorphismAtlas) -> dict:
    return {
        "schema": ATLAS_SCHEMA,
        "dims": {"d": atlas.d, "m": atlas.m},
        "labels": [{
            "name": info.name,
            "charts": list(info.charts),
            "e_charts": list(info.e_charts),
            "under_e0": info.under_e0,
        } for info in sorted(atlas.labels.values(), key=lambda i: i.name)],
        "charts": [{
            "id": chart_id,
            "strata": [{
                "id": s.stratum_id,
                "chart": chart_to_doc(s.chart),
                "row_labels": list(s.row_labels),
                "extra_global_labels": s.extra_global_labels,
            } for s in atlas.strata[chart_id]],
        } for chart_id in atlas.chart_order],
    }


def toroidalize(atlas: MorphismAtlas, script: ResolutionScript,
                cap: int = 50, policy_name: str = "max-order-lex") -> dict:
    """Run the full pipeline and return the trace document."""
    if policy_name not in POLICIES:
        raise ToroidalizeError(f"unknown policy {policy_name!r}")
    policy = POLICIES[policy_name]
    atlas_report = check_atlas(atlas)
    if not atlas_report.ok:
        raise ToroidalizeError(f"invalid atlas: {atlas_report}")
    script_report = verify_resolution_script(atlas, script)
    if not script_report.ok:
        raise ToroidalizeError(f"resolution script rejected: {script_report}")

    working = MorphismAtlas(
        d=atlas.d, m=atlas.m, chart_order=list(atlas.chart_order),
        strata={cid: list(ss) for cid, ss in atlas.strata.items()},
        labels=dict(atlas.labels))
    state = YState(working.labels, tuple(working.chart_order))

    steps = []
    exceeded = False
    commutes = True
    for step in script.steps:
        outcome = _run_step(working, state, step, cap, policy)
        steps.append(outcome.doc)
        exceeded = exceeded or outcome.exceeded
        commutes = commutes and outcome.commutes

    global_report = verify_global_toroidal(working)
    all_toroidal = all(
        s.chart.tag in (TOROIDAL, SMOOTH) for _, s in working.all_strata())
    verdicts = {
        "resolution_script": script_report.ok,
        "all_strata_toroidal": all_toroidal and not exceeded,
        "global_toroidal": global_report.ok,
        "global_failures": [list(f) for f in global_report.failures],
        "commutes": commutes,
        "cap_exceeded": exceeded,
    }
    verdicts["pass"] = (verdicts["resolution_script"]
                        and verdicts["all_strata_toroidal"]
                        and verdicts["global_toroidal"]
                        and verdicts["commutes"]
                        and not exceeded)
    return {
        "schema": TRACE_SCHEMA,
        "engine": __version__,
        "cap": cap,
        "policy": policy_name,
        "steps": steps,
        "final_atlas": atlas_to_doc(working),
        "verdicts": verdicts,
    }


class ReplayMismatch(ValueError):
    pass


def replay(trace_doc: dict, atlas: MorphismAtlas,
           script: ResolutionScript) -> dict:
    """Re-execute deterministically and compare against the given trace."""
    if not isinstance(trace_doc, dict) or trace_doc.get("schema") != TRACE_SCHEMA:
        raise InvalidDocument(f"expected schema {TRACE_SCHEMA!r}")
    if trace_doc.get("engine") != __version__:
        raise ReplayMismatch(
            f"trace produced by engine {trace_doc.get('engine')!r}, "
            f"this is {__version__}")
    fresh = toroidalize(atlas, script, cap=int(trace_doc.get("cap", 50)),
                        policy_name=trace_doc.get("policy", "max-order-lex"))
    old_steps = trace_doc.get("steps", [])
    if len(old_steps) != len(fresh["steps"]):
        raise ReplayMismatch("step count differs")
    for k, (old, new) in enumerate(zip(old_steps, fresh["steps"])):
        if canonical_dumps(old) != canonical_dumps(new):
            raise ReplayMismatch(f"step {k} differs from the recorded trace")
    if canonical_dumps(trace_doc) != canonical_dumps(fresh):
        raise ReplayMismatch("trace differs outside the step records")
    return fresh
