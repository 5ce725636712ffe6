"""Contraction schedules and Dixmier averaging with certified residual bounds.

Elements met during a schedule have the form ``gamma_R(X)`` for a small
``X``; the engine keeps the pair ``(R, X)`` (a :class:`Reduced` state) and
never expands ``gamma_R``.  Norms and ``omega`` are unchanged by ``gamma_R``.

Applying ``alpha_p^{gamma_r(s)}`` to ``gamma_R(X)``:

* ``R >= r + p``: nothing changes (the unitaries commute with the range of
  ``gamma_{r+p}``);
* ``r <= R``: with ``t = R - r`` and ``c = t ^ p`` the result is
  ``gamma_{r+p}(beta_{p-c}(gamma_{t-c}(X)))``, where
  ``beta_t(Y) = m^{-t} sum_{mu in Lambda^t} s_mu* Y s_mu``;
* otherwise, with ``a = R ^ r``, it is
  ``gamma_a(alpha_p^{gamma_{r-a}(s)}(gamma_{R-a}(X)))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, adjoint, identity, multiply, omega, refine_terms
from .alignment import check_little_pullback
from .averaging import (
    AveragingUnitarySpec,
    CuntzTuple,
    alpha_terms,
    averaging_unitary,
    gamma_endo,
    gamma_terms,
)
from .errors import BudgetError, DegreeError, DomainError, KGraphError, UnsupportedError
from .graph import KGraph, dadd, dle, dsub, is_zero, join, meet, negative_part, positive_part
from .io import element_from_json, element_to_json, frac_str, graph_to_json, parse_frac
from .norms import certified_component_norm

FORMAT = "kgraph-schedule/1"


@dataclass(frozen=True)
class Reduced:
    """The element ``gamma_R(X)``."""

    R: tuple
    X: Element

    def materialize(self) -> Element:
        if is_zero(self.R):
            return self.X
        return gamma_endo(CuntzTuple.standard(self.X.graph), self.R, self.X)


def _map_terms(a: Element, fn) -> Element:
    raw = []
    for comp in a.components.values():
        for (u, v), c in fn(comp.terms).items():
            raw.append((u, v, c))
    return Element.from_terms(a.graph, raw)


def beta_terms(g: KGraph, t, terms: dict) -> dict:
    """``m^{-t} sum_{mu in Lambda^t} s_mu* (.) s_mu`` on a term map."""
    if is_zero(t):
        return terms
    scale = Fraction(1, g.size(t))
    need = {}
    for (x, y), c in terms.items():
        r = join(join(dsub(t, g.degree(x)), dsub(t, g.degree(y))), g.zero())
        need.setdefault(r, {})[(x, y)] = c
    out = {}
    for r, group in need.items():
        for (x, y), c in refine_terms(g, group, r).items():
            mu, x2 = g.factorize(x, t)
            mu2, y2 = g.factorize(y, t)
            if mu == mu2:
                out[(x2, y2)] = out.get((x2, y2), 0) + c * scale
    return out


def apply_alpha(state: Reduced, p, r) -> Reduced:
    """``alpha_p^{gamma_r(s)}`` on a reduced state."""
    g = state.X.graph
    R, X = state.R, state.X
    p, r = tuple(p), tuple(r)
    if dle(dadd(r, p), R):
        return state
    if dle(r, R):
        t = dsub(R, r)
        c = meet(t, p)
        Y = _map_terms(X, lambda terms: gamma_terms(g, dsub(t, c), terms, g.zero()))
        Y = _map_terms(Y, lambda terms: beta_terms(g, dsub(p, c), terms))
        return Reduced(dadd(r, p), Y)
    a = meet(R, r)
    Y = _map_terms(X, lambda terms: gamma_terms(g, dsub(R, a), terms, g.zero()))
    Y = _map_terms(Y, lambda terms: alpha_terms(g, p, terms, dsub(r, a)))
    return Reduced(a, Y)


def matrix_dixmier(g: KGraph, comp_terms: dict, Q) -> Fraction:
    """Exact Dixmier averaging inside the matrix algebra spanned by ``s_u s_v*``, ``d(u) = d(v) = Q``.

    Averaging over the sign unitaries ``1 - 2 s_u s_u*`` (one basis index at a
    time) removes every off-diagonal entry; averaging over the powers of a
    cyclic shift of the basis then replaces each diagonal entry by the mean.
    """
    dim = g.size(Q)
    entries = dict(comp_terms)
    for j in g.level(Q):
        entries = {(a, b): c for (a, b), c in entries.items() if a == b or (a != j and b != j)}
    diag = sum((c for (a, b), c in entries.items() if a == b), Fraction(0))
    return diag / dim


def _deg(x) -> list:
    return list(x)


@dataclass
class AveragingSchedule:
    graph: KGraph
    source: Element
    eps: Fraction
    mode: str  # "dixmier" | "shrink"
    steps: list = field(default_factory=list)
    residual_bound: Fraction = Fraction(0)
    scalar: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "mode": self.mode,
            "graph": graph_to_json(self.graph),
            "input": element_to_json(self.source, with_graph=False),
            "eps": frac_str(self.eps),
            "steps": [dict(s) for s in self.steps],
            "residual_bound": frac_str(self.residual_bound),
            "residual_bound_decimal": f"{float(self.residual_bound):.6e}",
            "scalar": None if self.scalar is None else frac_str(self.scalar),
        }


def _step_alpha_q(q) -> dict:
    return {"kind": "alpha_q", "p": _deg(q), "shift": _deg((0,) * len(q)), "family": "U_(f,sigma) over Lambda^p, E = s"}


def _step_level(n, i, p, r) -> dict:
    return {
        "kind": "alpha_p_level",
        "component": _deg(n),
        "level": i,
        "p": _deg(p),
        "shift": _deg(r),
        "family": "U_(f,sigma) over Lambda^p, E = gamma_shift(s)",
    }


def _step_matrix(Q, dim) -> dict:
    return {"kind": "matrix_dixmier", "level": _deg(Q), "dim": dim, "family": "diagonal_sign+cyclic_shift"}


def execute_step(state: Reduced, step: dict):
    """Apply one recorded step; returns ``(state, scalar_or_None)``."""
    g = state.X.graph
    kind = step.get("kind")
    try:
        if kind in ("alpha_q", "alpha_p_level"):
            p, r = tuple(step["p"]), tuple(step["shift"])
            if len(p) != g.k or len(r) != g.k or any(x < 0 for x in p + r):
                raise DegreeError("bad degree in schedule step")
            return apply_alpha(state, p, r), None
        if kind == "matrix_dixmier":
            Q = tuple(step["level"])
            comp = state.X.components.get(g.zero())
            if comp is None:
                return state, Fraction(0)
            if not dle(comp.Q, Q):
                raise DegreeError("core part lies deeper than the recorded matrix level")
            lam = matrix_dixmier(g, state.X.refined(g.zero(), Q), Q)
            rest = Element(g, {n: c for n, c in state.X.components.items() if n != g.zero()})
            return Reduced(state.R, rest + Element.scalar(g, lam)), lam
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed schedule step {step!r}") from exc
    raise DomainError(f"unknown schedule step kind {kind!r}")


def residual(state: Reduced) -> Fraction:
    """Certified upper bound for the norm of the non-scalar part of ``gamma_R(X)``."""
    g = state.X.graph
    return sum(
        (certified_component_norm(c) for n, c in state.X.components.items() if n != g.zero()),
        Fraction(0),
    )


def _require_lpb(g: KGraph):
    if not check_little_pullback(g).holds:
        raise UnsupportedError("averaging schedules need the little pull-back property")


def _levels_needed(g: KGraph, p, total: Fraction, target: Fraction) -> int:
    if total == 0:
        return 0
    base = g.size(p)
    n = 0
    while total / Fraction(base) ** n >= target:
        n += 1
    return n


def _shrink_component(state: Reduced, n, target: Fraction, steps: list, levels: int | None = None):
    """Append the steps that shrink the degree-``n`` component below ``target``."""
    g = state.X.graph
    comp = state.X.components.get(n)
    if comp is None:
        return state, Fraction(0)
    npos, nneg = positive_part(n), negative_part(n)
    p = dadd(npos, nneg)
    q = dadd(state.R, dsub(comp.Q, nneg))
    if not is_zero(q):
        steps.append(_step_alpha_q(q))
        state = apply_alpha(state, q, g.zero())
    comp = state.X.components.get(n)
    total = Fraction(0) if comp is None else sum((abs(c) for c in comp.terms.values()), Fraction(0))
    count = _levels_needed(g, p, total, target) if levels is None else levels
    for i in range(1, count + 1):
        if n not in state.X.components:
            break
        shift = dadd(q, tuple(x * (i - 1) for x in p))
        steps.append(_step_level(n, i, p, shift))
        state = apply_alpha(state, p, shift)
    return state, total


@dataclass
class ShrinkResult:
    schedule: AveragingSchedule
    state: Reduced
    coefficient_sum: Fraction  # of the component right after alpha_q

    @property
    def result(self) -> Element:
        return self.state.materialize()

    @property
    def bound(self) -> Fraction:
        return self.schedule.residual_bound


def shrink_offdiagonal(g: KGraph, a: Element, eps, levels: int | None = None) -> ShrinkResult:
    """Shrink a homogeneous element of nonzero degree below ``eps`` in norm.

    ``levels`` overrides the number of contraction levels (used to observe
    the decay law); by default the smallest sufficient number is taken.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    _require_lpb(g)
    sched = AveragingSchedule(g, a, eps, "shrink")
    if a.is_zero():
        return ShrinkResult(sched, Reduced(g.zero(), a), Fraction(0))
    n = a.degree()
    if is_zero(n):
        raise DegreeError("shrink_offdiagonal needs a nonzero degree")
    try:
        state, total = _shrink_component(Reduced(g.zero(), a), n, eps, sched.steps, levels)
    except BudgetError as exc:
        raise BudgetError(exc.needed, exc.budget, partial=sched) from exc
    sched.residual_bound = residual(state)
    if levels is None and sched.residual_bound >= eps:
        raise KGraphError("certified bound did not reach eps; this indicates an engine bug")
    return ShrinkResult(sched, state, total)


def dixmier_average(g: KGraph, a: Element, eps):
    """Return ``(scalar, schedule)``; the scalar is exact and equals ``omega(a)``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    _require_lpb(g)
    sched = AveragingSchedule(g, a, eps, "dixmier")
    state = Reduced(g.zero(), a)
    offdiag = [n for n in a.degrees() if not is_zero(n)]
    try:
        for n in offdiag:
            state, _ = _shrink_component(state, n, eps / len(offdiag), sched.steps)
        core = state.X.components.get(g.zero())
        if core is None:
            lam = Fraction(0)
        elif is_zero(core.Q):
            lam = core.terms[(g.empty(), g.empty())]
        else:
            step = _step_matrix(core.Q, g.size(core.Q))
            sched.steps.append(step)
            state, lam = execute_step(state, step)
    except BudgetError as exc:
        raise BudgetError(exc.needed, exc.budget, partial=sched) from exc
    sched.residual_bound = residual(state)
    sched.scalar = lam
    if sched.residual_bound >= eps:
        raise KGraphError("certified bound did not reach eps; this indicates an engine bug")
    return lam, sched


@dataclass
class ReplayReport:
    confirmed: bool
    recorded_bound: Fraction
    recomputed_bound: Fraction
    eps: Fraction
    recorded_scalar: Fraction | None
    recomputed_scalar: Fraction | None
    problems: list

    def to_json(self) -> dict:
        opt = lambda x: None if x is None else frac_str(x)  # noqa: E731
        return {
            "confirmed": self.confirmed,
            "recorded_bound": frac_str(self.recorded_bound),
            "recomputed_bound": frac_str(self.recomputed_bound),
            "eps": frac_str(self.eps),
            "recorded_scalar": opt(self.recorded_scalar),
            "recomputed_scalar": opt(self.recomputed_scalar),
            "problems": self.problems,
        }


def replay(spec: dict) -> ReplayReport:
    """Re-execute a schedule file and re-verify everything it claims."""
    from .io import graph_from_json

    if spec.get("format") != FORMAT:
        raise DomainError(f"not a schedule file (format {spec.get('format')!r})")
    try:
        g = graph_from_json(spec["graph"])
        a = element_from_json(spec["input"], g)
        eps = parse_frac(spec["eps"])
        recorded = parse_frac(spec["residual_bound"])
        rec_scalar = None if spec.get("scalar") is None else parse_frac(spec["scalar"])
        steps = list(spec["steps"])
    except KeyError as exc:
        raise DomainError(f"schedule file lacks field {exc}") from exc
    state = Reduced(g.zero(), a)
    scalar = None
    for step in steps:
        state, lam = execute_step(state, step)
        if lam is not None:
            scalar = lam
    if scalar is None and spec.get("mode") == "dixmier":
        core = state.X.components.get(g.zero())
        if core is None:
            scalar = Fraction(0)
        elif is_zero(core.Q):
            scalar = core.terms[(g.empty(), g.empty())]
    bound = residual(state)
    problems = []
    if bound != recorded:
        problems.append(f"recomputed bound {frac_str(bound)} differs from recorded {frac_str(recorded)}")
    if bound >= eps:
        problems.append(f"bound {frac_str(bound)} is not below eps {frac_str(eps)}")
    if spec.get("mode") == "dixmier":
        if scalar != rec_scalar:
            problems.append("recomputed scalar differs from the recorded one")
        if scalar != omega(a):
            problems.append("scalar differs from omega(input)")
    return ReplayReport(not problems, recorded, bound, eps, rec_scalar, scalar, problems)


def _sample_alpha_unitary(g: KGraph, p, shift) -> Element:
    E = CuntzTuple.shifted(g, shift)
    words = g.level(p)
    sigma = dict(zip(words, words[1:] + words[:1]))
    f = {w: i % 2 for i, w in enumerate(words)}
    return averaging_unitary(E, AveragingUnitarySpec(tuple(p), f, sigma))


def audit_schedule(sched: AveragingSchedule, size_cap: int = 256) -> list:
    """Build one representative unitary per step and confirm it is a degree-0 unitary.

    Steps whose unitaries would exceed ``size_cap`` words are reported as
    skipped rather than checked.
    """
    g = sched.graph
    one = identity(g)
    out = []
    for step in sched.steps:
        if step["kind"] == "matrix_dixmier":
            Q = tuple(step["level"])
            if g.size(Q) > size_cap:
                out.append({"step": step["kind"], "checked": False})
                continue
            basis = g.level(Q)
            sign = Element.from_terms(g, [(u, u, -1 if i == 0 else 1) for i, u in enumerate(basis)])
            shift = Element.from_terms(g, [(basis[(i + 1) % len(basis)], u, 1) for i, u in enumerate(basis)])
            units = [sign, shift]
        else:
            p, r = tuple(step["p"]), tuple(step["shift"])
            if g.size(dadd(p, r)) > size_cap:
                out.append({"step": step["kind"], "checked": False})
                continue
            units = [_sample_alpha_unitary(g, p, r)]
        ok = all(
            u.degrees() == [g.zero()] and multiply(u, adjoint(u)) == one and multiply(adjoint(u), u) == one
            for u in units
        )
        out.append({"step": step["kind"], "checked": True, "degree_zero_unitary": ok})
    return out


__all__ = [
    "AveragingSchedule",
    "Reduced",
    "ReplayReport",
    "ShrinkResult",
    "apply_alpha",
    "audit_schedule",
    "beta_terms",
    "dixmier_average",
    "execute_step",
    "matrix_dixmier",
    "replay",
    "residual",
    "shrink_offdiagonal",
]
