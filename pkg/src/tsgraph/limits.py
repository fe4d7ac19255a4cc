"""Comparing ts-DMAGs and ts-DPAGs across window lengths, and their limits.

The limiting objects are found by deepening the observed window while
watching its latest ``tau_max + 1`` steps. Convergence is known to happen but
no computable bound is known, so stabilization over ``W`` consecutive
depths is a heuristic; every result records the depth it was read at.
"""

from __future__ import annotations

from dataclasses import dataclass

from .equivalence import circle_set, mark_set, ts_dpag
from .errors import ConvergenceError, GraphError
from .graph import ObservationScheme, TsDagTemplate, WindowGraph, induced_window, is_subgraph, shift_times
from .marginal import ts_dmag


@dataclass(frozen=True)
class WindowReport:
    """Clauses comparing the ``tau_max`` and ``tau_tilde`` objects.

    ``latest_subgraph`` and ``earliest_equal`` concern the ts-DMAGs;
    ``marks_monotone`` and ``circles_contained`` the ts-DPAGs (None when
    DPAGs were not requested). ``strict`` flags a proper subgraph in the
    latest window.
    """

    latest_subgraph: bool
    earliest_equal: bool
    marks_monotone: bool = None
    circles_contained: bool = None
    strict: bool = False

    @property
    def holds(self) -> bool:
        return all(c is not False for c in (self.latest_subgraph, self.earliest_equal,
                                             self.marks_monotone, self.circles_contained))


def window_compare(template: TsDagTemplate, tau_max: int, tau_tilde: int, observed=None,
                   with_dpags: bool = True, budget=None) -> WindowReport:
    """Check the window comparison clauses for one ``(tau_max, tau_tilde)`` pair."""
    if not tau_tilde > tau_max >= 0:
        raise GraphError("need tau_tilde > tau_max >= 0")
    observed = tuple(range(template.n_vars)) if observed is None else tuple(observed)
    small = ts_dmag(template, ObservationScheme(observed, tau_max))
    big = ts_dmag(template, ObservationScheme(observed, tau_tilde))
    latest = induced_window(big, -tau_max, 0)
    earliest = shift_times(induced_window(big, -tau_tilde, -tau_tilde + tau_max), tau_tilde - tau_max)
    sub = is_subgraph(latest, small)
    report = dict(latest_subgraph=sub, earliest_equal=earliest == small, strict=sub and latest != small)
    if with_dpags:
        p_small = ts_dpag(template, ObservationScheme(observed, tau_max), budget).dpag
        p_big = ts_dpag(template, ObservationScheme(observed, tau_tilde), budget).dpag
        shared = {pair for pair in p_small.edges if p_big.adjacent(*pair)}
        big_marks = mark_set(p_big)
        monotone = all((v, w, mk) in big_marks for v, w, mk in mark_set(p_small)
                       if (v, w) in shared or (w, v) in shared)
        p_latest = induced_window(p_big, -tau_max, 0)
        contained = circle_set(p_latest) <= circle_set(p_small)
        report.update(marks_monotone=monotone, circles_contained=contained)
    return WindowReport(**report)


@dataclass(frozen=True)
class LimitingResult:
    """A stabilized window and the deepest ``tau_tilde`` examined."""

    graph: WindowGraph
    depth: int
    history: tuple = ()


def _default_window(template, tau_max):
    return template.n_vars * template.order + tau_max + 1


def _deepen(build, template, tau_max, stability_window, max_depth):
    if tau_max < 0:
        raise GraphError("tau_max must be non-negative")
    w = _default_window(template, tau_max) if stability_window is None else int(stability_window)
    if w < 1:
        raise GraphError("stability window must be at least 1")
    if max_depth is None:
        max_depth = tau_max + 4 * w + 8
    history = []
    current = None
    streak = 0
    for depth in range(tau_max, max_depth + 1):
        g = induced_window(build(depth), -tau_max, 0)
        history.append(g)
        if g == current:
            streak += 1
            if streak >= w:
                return LimitingResult(g, depth, tuple(history))
        else:
            current, streak = g, 0
    raise ConvergenceError(
        f"window did not stabilize for {w} steps up to depth {max_depth}",
        partial=current,
        depth=max_depth,
    )


def limiting_ts_dmag(template: TsDagTemplate, tau_max: int, stability_window=None, observed=None,
                     max_depth=None) -> LimitingResult:
    """Limit of the latest ``tau_max + 1`` steps of ts-DMAGs on growing windows."""
    observed = tuple(range(template.n_vars)) if observed is None else tuple(observed)
    return _deepen(lambda d: ts_dmag(template, ObservationScheme(observed, d)),
                   template, tau_max, stability_window, max_depth)


def limiting_ts_dpag(template: TsDagTemplate, tau_max: int, stability_window=None, observed=None,
                     max_depth=None, budget=None) -> LimitingResult:
    """Limit of the latest ``tau_max + 1`` steps of ts-DPAGs on growing windows."""
    observed = tuple(range(template.n_vars)) if observed is None else tuple(observed)
    return _deepen(lambda d: ts_dpag(template, ObservationScheme(observed, d), budget).dpag,
                   template, tau_max, stability_window, max_depth)
