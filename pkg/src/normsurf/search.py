"""Search drivers for essential disks, annuli, planar surfaces and
punctured disks, built on enumeration, fillings and length bounds."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Protocol

from .bounds import AuditReport, SlopeConstraint, ale_constant, audit_zero_efficiency
from .coords import NormalVector, edge_weights, is_admissible
from .enumeration import (
    ConeBasis,
    EnumerationBudget,
    ResourceBudgetExceeded,
    enumerate_fundamental_solutions,
)
from .filling import NotCapped, cap_off, dehn_drill, dehn_fill, restrict
from .geometry import SurfaceGeometry, classify_component, reconstruct
from .slopes import (
    BoundaryFrame,
    Slope,
    Trivial,
    boundary_frame,
    enumerate_short_slopes,
    slope_from_curve,
    slope_of_multicurve,
)
from .triangulation import Triangulation, is_minimal_vertex


# ----------------------------------------------------------------------
# essentiality


class Verdict(str, Enum):
    Essential = "Essential"
    NotEssential = "NotEssential"
    Unknown = "Unknown"


@dataclass(frozen=True)
class EssentialityVerdict:
    verdict: Verdict
    rules_fired: tuple[str, ...]
    oracle_id: str

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "rules": list(self.rules_fired), "oracle": self.oracle_id}


class Oracle(Protocol):
    id: str
    serial: bool
    assumption: str

    def __call__(self, v: NormalVector, T: Triangulation, sg: SurfaceGeometry) -> Verdict: ...


class DefaultOracle:
    id = "default"
    serial = False
    assumption = "none: surfaces not settled by built-in rules are Unknown"

    def __call__(self, v, T, sg) -> Verdict:
        return Verdict.Unknown


class AssumeEssentialOracle:
    """Declares every surface that reaches it essential.  Only useful for
    exercising driver branches; reports carry the assumption."""

    id = "assume-essential"
    serial = False
    assumption = "every surface not rejected by built-in rules is taken to be essential"

    def __call__(self, v, T, sg) -> Verdict:
        return Verdict.Essential


ORACLES: dict[str, Oracle] = {"default": DefaultOracle(), "assume-essential": AssumeEssentialOracle()}


def register_oracle(oracle: Oracle) -> None:
    ORACLES[oracle.id] = oracle


def get_oracle(oracle) -> Oracle:
    if oracle is None:
        return ORACLES["default"]
    if isinstance(oracle, str):
        if oracle not in ORACLES:
            raise KeyError(f"unknown oracle {oracle!r}; registered: {', '.join(ORACLES)}")
        return ORACLES[oracle]
    return oracle


def _curves_essential_on_tori(sg: SurfaceGeometry, T: Triangulation) -> bool:
    for c in sg.curves:
        comp = T.boundary[c.boundary_id]
        if not comp.one_vertex_torus or c.trivial:
            return False
    return True


def decide_essential(
    v: NormalVector,
    T: Triangulation,
    oracle=None,
    sg: Optional[SurfaceGeometry] = None,
    boundary_irreducible: bool = False,
) -> EssentialityVerdict:
    """Built-in sound rules first, then the oracle.

    ``boundary_irreducible`` records that M is known to have no
    compressing disks (an empty 0-efficiency audit), which makes annuli
    between distinct torus boundary components essential.
    """
    oracle = get_oracle(oracle)
    sg = sg or reconstruct(v, T)
    rules = []
    if not sg.connected:
        rules.append("disconnected")
        return EssentialityVerdict(Verdict.Unknown, tuple(rules), oracle.id)
    comp = sg.components[0]
    if comp.vertex_linking:
        rules.append("vertex-linking")
        return EssentialityVerdict(Verdict.NotEssential, tuple(rules), oracle.id)
    cl = classify_component(comp)
    if cl.is_disk:
        curve = sg.curves[0]
        bcomp = T.boundary[curve.boundary_id]
        if bcomp.one_vertex_torus and not curve.trivial:
            rules.append("compressing-disk-on-torus-boundary")
            return EssentialityVerdict(Verdict.Essential, tuple(rules), oracle.id)
        rules.append("trivial-boundary-disk")
    elif cl.is_sphere:
        rules.append("nonlinking-sphere")
    elif cl.is_annulus_or_mobius and comp.orientable:
        bids = {c.boundary_id for c in sg.curves}
        if len(bids) == 2 and _curves_essential_on_tori(sg, T):
            rules.append("annulus-between-distinct-tori")
            if boundary_irreducible:
                rules.append("boundary-irreducible")
                return EssentialityVerdict(Verdict.Essential, tuple(rules), oracle.id)
        else:
            rules.append("annulus")
    elif cl.is_torus_or_klein:
        rules.append("torus-or-klein")
    if cl.is_planar and any(c.trivial for c in sg.curves):
        rules.append("trivial-boundary-planar")
    verdict = oracle(v, T, sg)
    rules.append(f"oracle:{oracle.id}")
    return EssentialityVerdict(Verdict(verdict), tuple(rules), oracle.id)


# ----------------------------------------------------------------------
# reports and budgets


@dataclass
class SearchBudget:
    max_rays: int = 200_000
    max_parallelepiped: int = 2_000_000
    max_seconds: Optional[float] = None
    max_fillings: int = 64
    max_slope_length: int = 40

    def enumeration(self) -> EnumerationBudget:
        return EnumerationBudget(self.max_rays, self.max_parallelepiped, self.max_seconds)

    def scaled(self, k: int) -> "SearchBudget":
        return replace(
            self,
            max_rays=self.max_rays * k,
            max_parallelepiped=self.max_parallelepiped * k,
            max_seconds=None if self.max_seconds is None else self.max_seconds * k,
            max_fillings=self.max_fillings * k,
            max_slope_length=self.max_slope_length * k,
        )

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class _Usage:
    enumerations: int = 0
    fillings: int = 0
    rays: int = 0
    seconds: float = 0.0

    def to_json(self) -> dict:
        return dict(self.__dict__)


FOUND, NOT_FOUND, INCONCLUSIVE = "Found", "NotFound", "Inconclusive"


@dataclass
class SearchReport:
    outcome: str
    query: dict
    certificate: Optional[dict] = None
    reasons: list[str] = field(default_factory=list)
    stages: list[dict] = field(default_factory=list)
    filling_tree: list[dict] = field(default_factory=list)
    constants: list[dict] = field(default_factory=list)
    verdicts: list[dict] = field(default_factory=list)
    budget: Optional[SearchBudget] = None
    usage: _Usage = field(default_factory=_Usage)
    oracle: Optional[dict] = None

    @property
    def found(self) -> bool:
        return self.outcome == FOUND

    @property
    def conclusive(self) -> bool:
        return self.outcome != INCONCLUSIVE

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "query": self.query,
            "certificate": self.certificate,
            "reasons": self.reasons,
            "stages": self.stages,
            "filling_tree": self.filling_tree,
            "constants": self.constants,
            "verdicts": self.verdicts,
            "budget": self.budget.to_json() if self.budget else None,
            "usage": self.usage.to_json(),
            "oracle": self.oracle,
        }


def _oracle_json(oracle: Oracle) -> dict:
    return {"id": oracle.id, "assumption": oracle.assumption, "serial": oracle.serial}


def _certificate(v: NormalVector, T: Triangulation, sg: SurfaceGeometry, verdict: EssentialityVerdict, **extra) -> dict:
    comp = sg.components[0]
    out = {
        "vector": list(v),
        "triangulation": T.digest(),
        "euler": sg.euler,
        "boundary_curves": len(sg.curves),
        "genus": comp.genus,
        "orientable": comp.orientable,
        "slopes": _curve_slopes(sg, T),
        "verdict": verdict.to_json(),
    }
    out.update(extra)
    return out


def _curve_slopes(sg: SurfaceGeometry, T: Triangulation) -> list[str]:
    out = []
    for c in sg.curves:
        if c.trivial:
            out.append(f"trivial@B{c.boundary_id}")
            continue
        try:
            out.append(str(slope_from_curve(c, T)))
        except Exception:
            out.append(f"?@B{c.boundary_id}")
    return out


def verify_certificate(cert: dict, T: Triangulation) -> bool:
    """Re-check a certificate independently: admissible, classified as
    claimed, and with the claimed boundary slopes."""
    v = tuple(cert["vector"])
    if not is_admissible(v, T):
        return False
    sg = reconstruct(v, T)
    if not sg.connected or sg.euler != cert["euler"] or len(sg.curves) != cert["boundary_curves"]:
        return False
    return _curve_slopes(sg, T) == cert["slopes"]


class _Ctx:
    def __init__(self, oracle, budget: Optional[SearchBudget]):
        self.oracle = get_oracle(oracle)
        self.budget = budget or SearchBudget()
        self.usage = _Usage()
        self.start = time.time()

    def fundamentals(self, T: Triangulation, constraint=None) -> ConeBasis:
        self.usage.enumerations += 1
        basis = enumerate_fundamental_solutions(T, constraint=constraint, budget=self.budget.enumeration())
        self.usage.rays += basis.stats.get("vertices", 0)
        return basis

    def report(self, outcome: str, query: dict, **kw) -> SearchReport:
        self.usage.seconds = round(time.time() - self.start, 3)
        return SearchReport(
            outcome, query, budget=self.budget, usage=self.usage, oracle=_oracle_json(self.oracle), **kw
        )


def _geometries(basis: ConeBasis, T: Triangulation) -> dict:
    return {v: reconstruct(v, T) for v in basis.admissible}


def _single(sg: SurfaceGeometry):
    return sg.components[0] if sg.connected else None


# ----------------------------------------------------------------------
# fundamental scans


def find_essential_disk(T: Triangulation, B: int, oracle=None, budget: Optional[SearchBudget] = None) -> SearchReport:
    ctx = _Ctx(oracle, budget)
    query = {"search": "essential-disk", "boundary": f"B{B}", "triangulation": T.digest()}
    if not (0 <= B < len(T.boundary)):
        raise ValueError(f"no boundary component B{B}")
    try:
        basis = ctx.fundamentals(T)
    except ResourceBudgetExceeded as exc:
        return ctx.report(INCONCLUSIVE, query, reasons=[f"ResourceBudgetExceeded: {exc}"])
    unknown = []
    verdicts = []
    for v, sg in _geometries(basis, T).items():
        comp = _single(sg)
        if comp is None or comp.euler != 1 or comp.boundary_count != 1:
            continue
        if sg.curves[0].boundary_id != B:
            continue
        ver = decide_essential(v, T, ctx.oracle, sg)
        verdicts.append({"vector": list(v), **ver.to_json()})
        if ver.verdict == Verdict.Essential:
            cert = _certificate(v, T, sg, ver)
            return ctx.report(FOUND, query, certificate=cert, verdicts=verdicts,
                              stages=[{"stage": 0, "size": len(basis.admissible)}])
        if ver.verdict == Verdict.Unknown:
            unknown.append(v)
    stages = [{"stage": 0, "size": len(basis.admissible)}]
    if unknown:
        return ctx.report(INCONCLUSIVE, query, reasons=["UnknownVerdict"], verdicts=verdicts, stages=stages)
    return ctx.report(NOT_FOUND, query, verdicts=verdicts, stages=stages)


def _is_cross_annulus(sg: SurfaceGeometry, T: Triangulation, B: int, B2: Optional[int]) -> bool:
    comp = _single(sg)
    if comp is None or comp.euler != 0 or not comp.orientable or comp.boundary_count != 2:
        return False
    bids = sorted(c.boundary_id for c in sg.curves)
    if bids[0] == bids[1]:
        return False
    if B2 is None:
        return B in bids
    return bids == sorted((B, B2))


def find_essential_annulus(
    T: Triangulation, B: int, B2: Optional[int] = None, oracle=None, budget: Optional[SearchBudget] = None,
    boundary_irreducible: Optional[bool] = None,
) -> SearchReport:
    """Fundamental annuli with one boundary curve in B and one in B2 (any
    other component when B2 is omitted)."""
    ctx = _Ctx(oracle, budget)
    query = {"search": "essential-annulus", "boundary": f"B{B}",
             "other": None if B2 is None else f"B{B2}", "triangulation": T.digest()}
    if B2 is not None and B2 == B:
        raise ValueError("the two boundary components must differ")
    if len(T.boundary) < 2:
        return ctx.report(NOT_FOUND, query, reasons=["single boundary component"])
    try:
        basis = ctx.fundamentals(T)
        if boundary_irreducible is None:
            boundary_irreducible = _audit(T, ctx).empty
    except ResourceBudgetExceeded as exc:
        return ctx.report(INCONCLUSIVE, query, reasons=[f"ResourceBudgetExceeded: {exc}"])
    verdicts = []
    unknown = False
    for v, sg in _geometries(basis, T).items():
        if not _is_cross_annulus(sg, T, B, B2):
            continue
        ver = decide_essential(v, T, ctx.oracle, sg, boundary_irreducible=boundary_irreducible)
        verdicts.append({"vector": list(v), **ver.to_json()})
        if ver.verdict == Verdict.Essential:
            return ctx.report(FOUND, query, certificate=_certificate(v, T, sg, ver), verdicts=verdicts)
        unknown |= ver.verdict == Verdict.Unknown
    if unknown:
        return ctx.report(INCONCLUSIVE, query, reasons=["UnknownVerdict"], verdicts=verdicts)
    return ctx.report(NOT_FOUND, query, verdicts=verdicts)


def _audit(T: Triangulation, ctx: _Ctx) -> AuditReport:
    ctx.usage.enumerations += 1
    return audit_zero_efficiency(T, budget=ctx.budget.enumeration())


# ----------------------------------------------------------------------
# helpers for fillings


def transport_slope(gamma: Slope, T_old: Triangulation, T_new: Triangulation, new_bid: Optional[int] = None) -> Slope:
    """The same slope on the same boundary torus after tetrahedra have been
    appended (old tetrahedra keep their indices)."""
    comp = T_old.boundary[gamma.boundary_id]
    if new_bid is None:
        a, f = comp.triangles[0]
        new_bid = T_new.component_of_face(a, f)
    new_comp = T_new.boundary[new_bid]
    w_old = dict(zip(comp.edges, gamma.weights))
    weights = []
    for cls in new_comp.edges:
        a, e = T_new.edge_classes[cls][0]
        match = [c for c in comp.edges if any(T_new.edge_class(x, y) == cls for x, y in T_old.edge_classes[c])]
        if not match:
            raise AssertionError("boundary edge not inherited from the base triangulation")
        weights.append(w_old[match[0]])
    return boundary_frame(T_new, new_bid).from_weights(weights)


def _short_slopes(T: Triangulation, bid: int, bound: Fraction, ctx: _Ctx) -> tuple[list[Slope], bool]:
    cap = ctx.budget.max_slope_length
    frame = boundary_frame(T, bid)
    if bound > cap:
        return enumerate_short_slopes(frame, cap), False
    return enumerate_short_slopes(frame, bound), True


# ----------------------------------------------------------------------
# planar surfaces


def _planar_candidate(sg: SurfaceGeometry) -> bool:
    comp = _single(sg)
    if comp is None or not comp.orientable or comp.boundary_count == 0:
        return False
    return comp.genus == 0


def search_planar(
    T: Triangulation,
    oracle=None,
    budget: Optional[SearchBudget] = None,
    stop_on_found: bool = True,
) -> SearchReport:
    """Staged search for an essential planar surface with boundary on the
    torus boundary components of T."""
    ctx = _Ctx(oracle, budget)
    query = {"search": "planar", "triangulation": T.digest(), "boundaries": len(T.boundary)}
    reasons: list[str] = []
    if not is_minimal_vertex(T):
        return ctx.report(INCONCLUSIVE, query, reasons=["NotMinimalVertex"])
    try:
        audit = _audit(T, ctx)
    except ResourceBudgetExceeded as exc:
        return ctx.report(INCONCLUSIVE, query, reasons=[f"ResourceBudgetExceeded: {exc}"])
    stages: list[dict] = []
    tree: list[dict] = []
    constants: list[dict] = []
    verdicts: list[dict] = []
    found = None
    for v in audit.nonlinking_disks:
        sg = reconstruct(v, T)
        ver = decide_essential(v, T, ctx.oracle, sg)
        verdicts.append({"stage": 0, "vector": list(v), **ver.to_json()})
        if ver.verdict == Verdict.Essential:
            found = _certificate(v, T, sg, ver, stage=0)
            break
    if found is None and not audit.empty:
        return ctx.report(INCONCLUSIVE, query, reasons=["PrimeDecompositionRequired"], verdicts=verdicts)
    if found is not None:
        stages.append({"stage": 0, "source": "audit", "size": audit.scanned})
        return ctx.report(FOUND, query, certificate=found, stages=stages, verdicts=verdicts)

    bdry_irred = True
    n = len(T.boundary)
    frontier = [(None, [])]  # (FilledManifold or None, fillings so far)
    unknown = False
    for depth in range(max(n, 1)):
        next_frontier = []
        seen_tables = set()
        for filled, path in frontier:
            amb = filled.triangulation if filled else T
            try:
                basis = ctx.fundamentals(amb)
            except ResourceBudgetExceeded as exc:
                reasons.append(f"ResourceBudgetExceeded at stage {depth}: {exc}")
                continue
            members = []
            for w in basis.admissible:
                if filled is None:
                    members.append(w)
                    continue
                try:
                    g, caps = restrict(w, filled)
                except NotCapped:
                    continue
                if any(k == 0 for k in caps):
                    continue
                assert cap_off(g, filled) == w, "capped member does not cap off to itself"
                members.append(g)
            members = sorted(set(members))
            stages.append({
                "stage": depth,
                "fillings": [str(s) for s in path],
                "triangulation": amb.digest(),
                "size": len(members),
            })
            geoms = {g: reconstruct(g, T) for g in members}
            for g, sg in geoms.items():
                if not _planar_candidate(sg):
                    continue
                ver = decide_essential(g, T, ctx.oracle, sg, boundary_irreducible=bdry_irred)
                verdicts.append({"stage": depth, "vector": list(g), **ver.to_json()})
                if ver.verdict == Verdict.Essential:
                    if found is None:
                        found = _certificate(g, T, sg, ver, stage=depth, fillings=[str(s) for s in path])
                    if stop_on_found:
                        return ctx.report(FOUND, query, certificate=found, stages=stages,
                                          filling_tree=tree, constants=constants, verdicts=verdicts)
                elif ver.verdict == Verdict.Unknown:
                    unknown = True
            if depth >= n - 1:
                continue
            variant = "Link1"
            C = ale_constant(list(geoms), T, variant, geoms)
            bound = 2 * C.value
            constants.append({"stage": depth, "fillings": [str(s) for s in path], "C": str(C.value),
                              "variant": variant, "slope_bound": str(bound), "witnesses": C.witnesses})
            filled_ids = {rec.boundary_id for rec in filled.fillings} if filled else set()
            for bid in range(n):
                if bid in filled_ids:
                    continue
                slopes, complete = _short_slopes(T, bid, bound, ctx)
                if not complete:
                    reasons.append(f"slope bound {bound} above budget on B{bid}")
                for s in slopes:
                    if ctx.usage.fillings >= ctx.budget.max_fillings:
                        reasons.append("fillings budget exhausted")
                        break
                    ctx.usage.fillings += 1
                    child = dehn_fill(filled or T, bid, s)
                    key = child.triangulation.digest()
                    tree.append({"depth": depth + 1, "parent": [str(x) for x in path], "slope": str(s),
                                 "tets": child.triangulation.tet_count, "duplicate": key in seen_tables})
                    if key in seen_tables:
                        continue
                    seen_tables.add(key)
                    next_frontier.append((child, path + [s]))
        frontier = next_frontier
        if not frontier:
            break
    kw = dict(stages=stages, filling_tree=tree, constants=constants, verdicts=verdicts)
    if found is not None:
        return ctx.report(FOUND, query, certificate=found, **kw)
    if unknown:
        reasons.append("UnknownVerdict")
    if reasons:
        return ctx.report(INCONCLUSIVE, query, reasons=reasons, **kw)
    return ctx.report(NOT_FOUND, query, **kw)


# ----------------------------------------------------------------------
# punctured disks


def search_punctured_disk(
    T: Triangulation,
    B: int,
    gamma: Slope,
    oracle=None,
    budget: Optional[SearchBudget] = None,
    _ctx: Optional[_Ctx] = None,
    _depth: int = 0,
) -> SearchReport:
    """Is there an essential planar surface with exactly one boundary curve
    on B, of slope gamma, and all other curves on the other components?"""
    ctx = _ctx or _Ctx(oracle, budget)
    query = {"search": "punctured-disk", "boundary": f"B{B}", "slope": str(gamma), "triangulation": T.digest()}
    if gamma.boundary_id != B:
        gamma = boundary_frame(T, B).slope(gamma.p, gamma.q)
    n = len(T.boundary)
    try:
        audit = _audit(T, ctx)
        basis = ctx.fundamentals(T, SlopeConstraint(B, gamma))
    except ResourceBudgetExceeded as exc:
        return ctx.report(INCONCLUSIVE, query, reasons=[f"ResourceBudgetExceeded: {exc}"])
    geoms = _geometries(basis, T)
    verdicts = []
    stages = [{"stage": _depth, "triangulation": T.digest(), "constrained_size": len(geoms)}]

    def is_gamma_disk(sg):
        comp = _single(sg)
        if comp is None or comp.euler != 1 or comp.boundary_count != 1:
            return False
        c = sg.curves[0]
        return c.boundary_id == B and not c.trivial and slope_from_curve(c, T) == gamma

    for v, sg in geoms.items():
        if is_gamma_disk(sg):
            ver = decide_essential(v, T, ctx.oracle, sg)
            verdicts.append({"vector": list(v), **ver.to_json()})
            if ver.verdict == Verdict.Essential:
                return ctx.report(FOUND, query, certificate=_certificate(v, T, sg, ver), verdicts=verdicts, stages=stages)
    bad = [v for v in audit.nonlinking_spheres] + [
        v for v in audit.nonlinking_disks if any(c.trivial for c in reconstruct(v, T).curves)
    ]
    if bad:
        return ctx.report(INCONCLUSIVE, query, reasons=["PrimeDecompositionRequired"], verdicts=verdicts, stages=stages)
    if n == 1:
        return ctx.report(NOT_FOUND, query, verdicts=verdicts, stages=stages)
    if not audit.empty:
        # a compressing disk with another slope: the search below assumes
        # boundary-irreducibility
        return ctx.report(INCONCLUSIVE, query, reasons=["BoundaryReducible"], verdicts=verdicts, stages=stages)

    reasons = []
    unknown = False
    for v, sg in geoms.items():
        if not _is_cross_annulus(sg, T, B, None) and not _is_cross_annulus_avoiding(sg, B):
            continue
        ver = decide_essential(v, T, ctx.oracle, sg, boundary_irreducible=True)
        verdicts.append({"vector": list(v), **ver.to_json()})
        if ver.verdict != Verdict.Essential:
            unknown |= ver.verdict == Verdict.Unknown
            continue
        if B in {c.boundary_id for c in sg.curves}:
            cert = _certificate(v, T, sg, ver, case="annulus-from-B")
            return ctx.report(FOUND, query, certificate=cert, verdicts=verdicts, stages=stages)
        reasons.append("AnnulusSplitUnsupported")
        return ctx.report(INCONCLUSIVE, query, reasons=reasons, verdicts=verdicts, stages=stages,
                          certificate={"annulus": list(v), "slopes": _curve_slopes(sg, T)})
    if unknown:
        return ctx.report(INCONCLUSIVE, query, reasons=["UnknownVerdict"], verdicts=verdicts, stages=stages)

    C = ale_constant(list(geoms), T, "BoundaryConditioned", geoms)
    bound = 3 * C.value
    constants = [{"depth": _depth, "C": str(C.value), "variant": C.variant, "slope_bound": str(bound),
                  "witnesses": C.witnesses, "annulus_terms": C.annulus_terms}]
    tree = []
    for bid in range(n):
        if bid == B:
            continue
        slopes, complete = _short_slopes(T, bid, bound, ctx)
        if not complete:
            reasons.append(f"slope bound {bound} above budget on B{bid}")
        for s in slopes:
            if ctx.usage.fillings >= ctx.budget.max_fillings:
                reasons.append("fillings budget exhausted")
                break
            ctx.usage.fillings += 1
            filled = dehn_fill(T, bid, s)
            F = filled.triangulation
            new_b = F.component_of_face(*T.boundary[B].triangles[0])
            g2 = transport_slope(gamma, T, F, new_b)
            sub = search_punctured_disk(F, new_b, g2, _ctx=ctx, _depth=_depth + 1)
            node = {"depth": _depth + 1, "slope": str(s), "tets": F.tet_count, "outcome": sub.outcome,
                    "reasons": sub.reasons}
            tree.append(node)
            tree.extend(sub.filling_tree)
            constants.extend(sub.constants)
            if sub.found:
                cert = dict(sub.certificate)
                w = tuple(cert["vector"])
                try:
                    g, caps = restrict(w, filled)
                    cert = {**cert, "filled_vector": list(w), "vector": list(g), "triangulation": T.digest(),
                            "caps": caps, "slopes": _curve_slopes(reconstruct(g, T), T),
                            "euler": reconstruct(g, T).euler, "boundary_curves": len(reconstruct(g, T).curves)}
                except NotCapped:
                    cert["note"] = "certificate lives in the filled manifold"
                cert["filling"] = str(s)
                return ctx.report(FOUND, query, certificate=cert, verdicts=verdicts, stages=stages,
                                  filling_tree=tree, constants=constants)
            if not sub.conclusive:
                reasons.extend(f"{s}: {r}" for r in sub.reasons)
    kw = dict(verdicts=verdicts, stages=stages, filling_tree=tree, constants=constants)
    if reasons:
        return ctx.report(INCONCLUSIVE, query, reasons=reasons, **kw)
    return ctx.report(NOT_FOUND, query, **kw)


def _is_cross_annulus_avoiding(sg: SurfaceGeometry, B: int) -> bool:
    comp = _single(sg)
    if comp is None or comp.euler != 0 or not comp.orientable or comp.boundary_count != 2:
        return False
    bids = [c.boundary_id for c in sg.curves]
    return bids[0] != bids[1] and B not in bids


def search_longitude(
    T: Triangulation, B: int, mu: Slope, oracle=None, budget: Optional[SearchBudget] = None
) -> SearchReport:
    """Drill a curve of slope mu out of a collar of B and look for a
    punctured disk bounded by a longitude of the new copy of B."""
    ctx = _Ctx(oracle, budget)
    D = dehn_drill(T, B, mu)
    sub = search_punctured_disk(D.triangulation, D.boundary, D.longitude, _ctx=ctx)
    sub.query = {"search": "longitude", "boundary": f"B{B}", "mu": str(mu), "triangulation": T.digest(),
                 "drilled": {k: v for k, v in D.to_json().items() if k != "triangulation"}}
    sub.filling_tree.insert(0, {"drill": str(mu), "tets": D.triangulation.tet_count, "layers": D.layers})
    if sub.found and sub.certificate:
        sub.certificate["ambient"] = "drilled"
        sub.certificate["drilled_triangulation"] = D.triangulation.digest()
        try:
            back = dehn_fill(D.triangulation, D.drilled_boundary, D.mu_star)
            sg = reconstruct(tuple(sub.certificate["vector"]), D.triangulation)
            if all(c.boundary_id != D.drilled_boundary or not c.trivial for c in sg.curves):
                capped = cap_off(tuple(sub.certificate["vector"]), back)
                sub.certificate["capped_in_refilled"] = {"vector": list(capped),
                                                         "triangulation": back.triangulation.digest()}
        except Exception as exc:  # the capped certificate is a convenience
            sub.certificate["capped_in_refilled"] = {"error": str(exc)}
    return sub


# ----------------------------------------------------------------------
# slope sets


@dataclass
class SlopeSet:
    slopes: list[Slope]
    complete: bool
    families: list[dict] = field(default_factory=list)
    reasons: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "slopes": [str(s) for s in self.slopes],
            "complete": self.complete,
            "families": self.families,
            "reasons": self.reasons,
        }


def slope_set(
    T: Triangulation, B: int, oracle=None, budget: Optional[SearchBudget] = None, _ctx: Optional[_Ctx] = None
) -> SlopeSet:
    """Slopes on B bounding essential punctured disks (with punctures on the
    other boundary components)."""
    ctx = _ctx or _Ctx(oracle, budget)
    n = len(T.boundary)
    if n == 1:
        rep = find_essential_disk(T, B, ctx.oracle, ctx.budget)
        if rep.found:
            text = next(s for s in rep.certificate["slopes"])
            p, q = text.split("@")[0].split("/")
            return SlopeSet([boundary_frame(T, B).slope(int(p), int(q))], True)
        if rep.conclusive:
            return SlopeSet([], True)
        return SlopeSet([], False, reasons=rep.reasons)
    try:
        basis = ctx.fundamentals(T)
        audit = _audit(T, ctx)
    except ResourceBudgetExceeded as exc:
        return SlopeSet([], False, reasons=[f"ResourceBudgetExceeded: {exc}"])
    if not audit.empty:
        return SlopeSet([], False, reasons=["PrimeDecompositionRequired"])
    geoms = _geometries(basis, T)
    families = []
    reasons = []
    for v, sg in geoms.items():
        if _is_cross_annulus(sg, T, B, None):
            ver = decide_essential(v, T, ctx.oracle, sg, boundary_irreducible=True)
            if ver.verdict == Verdict.Essential:
                c = next(c for c in sg.curves if c.boundary_id == B)
                base = slope_from_curve(c, T)
                families.append({"rule": "annulus-from-B", "base": str(base), "annulus": list(v),
                                 "family": "every slope in B (twist-generated)"})
        elif _is_cross_annulus_avoiding(sg, B):
            ver = decide_essential(v, T, ctx.oracle, sg, boundary_irreducible=True)
            if ver.verdict == Verdict.Essential:
                reasons.append("AnnulusSplitUnsupported")
    if families or reasons:
        return SlopeSet([], False, families=families, reasons=reasons)
    C = ale_constant(list(geoms), T, "BoundaryConditioned", geoms)
    bound = 3 * C.value
    out: dict[tuple, Slope] = {}
    complete = True
    for bid in range(n):
        if bid == B:
            continue
        slopes, ok = _short_slopes(T, bid, bound, ctx)
        if not ok:
            complete = False
            reasons.append(f"slope bound {bound} above budget on B{bid}")
        for s in slopes:
            if ctx.usage.fillings >= ctx.budget.max_fillings:
                complete = False
                reasons.append("fillings budget exhausted")
                break
            ctx.usage.fillings += 1
            filled = dehn_fill(T, bid, s)
            F = filled.triangulation
            new_b = F.component_of_face(*T.boundary[B].triangles[0])
            sub = slope_set(F, new_b, _ctx=ctx)
            complete &= sub.complete
            families.extend(sub.families)
            reasons.extend(sub.reasons)
            for g in sub.slopes:
                back = _slope_back(g, F, T, B)
                out[(back.p, back.q)] = back
    return SlopeSet(sorted(out.values(), key=lambda s: (s.p, s.q)), complete, families, reasons)


def _slope_back(g: Slope, F: Triangulation, T: Triangulation, B: int) -> Slope:
    """Express a slope on the filled manifold's copy of B in T's frame."""
    comp_f = F.boundary[g.boundary_id]
    wf = dict(zip(comp_f.edges, g.weights))
    weights = []
    for cls in T.boundary[B].edges:
        a, e = T.edge_classes[cls][0]
        weights.append(wf[F.edge_class(a, e)])
    return boundary_frame(T, B).from_weights(weights)
