"""JSON and DOT serialization of templates and window graphs.

Template documents::

    {"variables": ["X", "Y"], "observed": ["X"], "order": 1,
     "edges": [{"from": ["X", -1], "to": ["Y", 0]}]}

Window graph documents::

    {"variables": ["X", "Y"], "times": [-1, 0],
     "edges": [{"a": ["X", -1], "b": ["Y", 0], "type": "-->"}]}

Variables may be referenced by name or by index. Printed documents always
use names, canonical edge order and canonical endpoint order, so printing a
parsed document reproduces it byte for byte.
"""

from __future__ import annotations

import json

from .errors import GraphError
from .graph import EDGE_TYPES, ObservationScheme, TsDagTemplate, Vertex, WindowGraph, edge_symbol


class ParseError(ValueError):
    """Malformed document; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f" at line {line} column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _field(doc, key, kind, default=...):
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if key not in doc:
        if default is ...:
            raise ParseError(f"missing field {key!r}")
        return default
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"field {key!r} has the wrong type")
    return value


def _var_index(names, ref, where):
    if isinstance(ref, bool):
        raise ParseError(f"bad variable reference in {where}")
    if isinstance(ref, int):
        if 0 <= ref < len(names):
            return ref
        raise ParseError(f"variable index {ref} out of range in {where}")
    if isinstance(ref, str) and ref in names:
        return names.index(ref)
    raise ParseError(f"unknown variable {ref!r} in {where}")


def _vertex(names, item, where):
    if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], int) and not isinstance(item[1], bool)):
        raise ParseError(f"{where} must be a [variable, offset] pair")
    return Vertex(_var_index(names, item[0], where), item[1])


def _names(doc):
    names = _field(doc, "variables", list)
    if not names or not all(isinstance(n, str) for n in names) or len(set(names)) != len(names):
        raise ParseError("'variables' must be a non-empty list of distinct strings")
    return names


def is_template_doc(doc) -> bool:
    return isinstance(doc, dict) and "times" not in doc and "order" in doc


def template_from_doc(doc):
    """Return ``(template, observed_vars)``."""
    names = _names(doc)
    order = _field(doc, "order", int)
    observed = _field(doc, "observed", list, None)
    edges = []
    for k, e in enumerate(_field(doc, "edges", list)):
        where = f"edge {k}"
        if not isinstance(e, dict) or "from" not in e or "to" not in e:
            raise ParseError(f"{where} needs 'from' and 'to'")
        src = _vertex(names, e["from"], where)
        dst = _vertex(names, e["to"], where)
        edges.append((src.var, dst.var, dst.time - src.time))
    template = TsDagTemplate(len(names), frozenset(edges), tuple(names))
    if order != template.order:
        raise GraphError(f"declared order {order} differs from the largest lag {template.order}")
    if observed is None:
        obs = tuple(range(len(names)))
    else:
        obs = tuple(sorted({_var_index(names, r, "observed") for r in observed}))
    return template, obs


def graph_from_doc(doc) -> WindowGraph:
    names = _names(doc)
    times = _field(doc, "times", list)
    if not all(isinstance(t, int) and not isinstance(t, bool) for t in times):
        raise ParseError("'times' must be a list of integers")
    edges = []
    for k, e in enumerate(_field(doc, "edges", list)):
        where = f"edge {k}"
        if not isinstance(e, dict) or not {"a", "b", "type"} <= set(e):
            raise ParseError(f"{where} needs 'a', 'b' and 'type'")
        if e["type"] not in EDGE_TYPES:
            raise ParseError(f"{where} has unknown type {e['type']!r}")
        edges.append((_vertex(names, e["a"], where), _vertex(names, e["b"], where), e["type"]))
    return WindowGraph(len(names), times, edges, names=names)


def parse_template(text):
    return template_from_doc(_load(text))


def parse_graph(text) -> WindowGraph:
    return graph_from_doc(_load(text))


def parse_any(text):
    """Return ``("template", (template, observed))`` or ``("graph", graph)``."""
    doc = _load(text)
    if is_template_doc(doc):
        return "template", template_from_doc(doc)
    return "graph", graph_from_doc(doc)


def template_to_doc(template: TsDagTemplate, observed=None):
    names = list(template.names)
    observed = range(template.n_vars) if observed is None else observed
    return {
        "variables": names,
        "observed": [names[i] for i in sorted(observed)],
        "order": template.order,
        "edges": [{"from": [names[i], -lag], "to": [names[j], 0]} for i, j, lag in template.sorted_edges()],
    }


def graph_to_doc(g: WindowGraph):
    names = list(g.names)
    return {
        "variables": names,
        "times": list(g.times),
        "edges": [
            {"a": [names[a.var], a.time], "b": [names[b.var], b.time], "type": edge_symbol(ma, mb)}
            for (a, b), (ma, mb) in g.edges.items()
        ],
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def print_graph(g: WindowGraph) -> str:
    return dumps(graph_to_doc(g))


def print_template(template: TsDagTemplate, observed=None) -> str:
    return dumps(template_to_doc(template, observed))


_DOT_ARROW = {"tail": "none", "head": "normal", "circle": "odot"}


def _dot_id(name, t):
    label = f"{name}_t" if t == 0 else f"{name}_t{t}"
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: WindowGraph, title="G") -> str:
    """Graphviz rendering; vertices of one time step share a rank."""
    lines = [f"digraph {title} {{", "  rankdir=LR;", "  node [shape=ellipse];"]
    for t in g.times:
        ids = " ".join(_dot_id(g.names[i], t) + ";" for i in range(g.n_vars))
        lines.append(f"  {{ rank=same; {ids} }}")
    for (a, b), (ma, mb) in g.edges.items():
        lines.append(
            f"  {_dot_id(g.names[a.var], a.time)} -> {_dot_id(g.names[b.var], b.time)} "
            f"[dir=both, arrowtail={_DOT_ARROW[ma.value]}, arrowhead={_DOT_ARROW[mb.value]}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def scheme_for(observed, tau_max, stride=1) -> ObservationScheme:
    return ObservationScheme(tuple(observed), tau_max, stride)
