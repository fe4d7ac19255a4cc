"""Marginalizing time series DAGs onto an observed window.

Builds the ts-DMAG of two small templates, shows the stationarification,
and rebuilds a generating template from the graph alone.

    python3 demos/01_marginals.py
"""

from tsgraph import ObservationScheme, TsDagTemplate, canonical_ts_dag, is_ts_dmag, stationarify, ts_dmag
from tsgraph import io
from tsgraph.graph import edge_symbol


def show(title, g):
    print(f"== {title}")
    for (a, b), marks in g.edges.items():
        sym = edge_symbol(*marks)
        print(f"   {g.names[a.var]}[{a.time}] {sym} {g.names[b.var]}[{b.time}]")
    if not g.edges:
        print("   (no edges)")


# O1 drives itself and O2 with lag one; everything is observed.
d_a = TsDagTemplate(2, frozenset({(0, 0, 1), (0, 1, 1)}), ("O1", "O2"))
m_a = ts_dmag(d_a, ObservationScheme((0, 1), 2))
show("ts-DMAG of D_A on a window of length 3", m_a)
# The earliest step sees O1 and O2 confounded by the unobserved past of O1.
show("its stationarification", stationarify(m_a))

# A hidden contemporaneous common cause L of O1 and O2.
d_b = TsDagTemplate(3, frozenset({(2, 0, 0), (2, 1, 0)}), ("O1", "O2", "L"))
m_b = ts_dmag(d_b, ObservationScheme((0, 1), 1))
show("ts-DMAG of D_B with L hidden", m_b)

# The canonical template reproduces the graph exactly.
for m in (m_a, m_b):
    c = canonical_ts_dag(m)
    again = ts_dmag(c, ObservationScheme(tuple(range(m.n_vars)), -m.times[0]))
    print(f"canonical template {sorted(c.lagged_edges)} reproduces the graph: {again == m}")
    print(f"membership verdict: {is_ts_dmag(m).verdict}")

print()
print(io.print_graph(m_b), end="")
