"""Growing the observed window: subgraph chains and limiting graphs.

    python3 demos/03_limits.py
"""

from tsgraph import ObservationScheme, TsDagTemplate, limiting_ts_dmag, limiting_ts_dpag, ts_dmag, window_compare

d_a = TsDagTemplate(2, frozenset({(0, 0, 1), (0, 1, 1)}), ("O1", "O2"))
rep = window_compare(d_a, 1, 3)
print(f"D_A, windows 1 vs 3: clauses hold {rep.holds}, latest steps a proper subgraph {rep.strict}")

# A latent L with a self lag drives O: the longest self edge of O never goes
# away, however long the window.
auto = TsDagTemplate(2, frozenset({(0, 1, 1), (1, 1, 1), (1, 0, 0)}), ("O", "L"))
for tau in range(1, 6):
    m = ts_dmag(auto, ObservationScheme((0,), tau))
    print(f"window {tau}: O[{-tau}] {m.edge_type((0, -tau), (0, 0))} O[0]")

lim = limiting_ts_dmag(auto, 2, observed=(0,))
print(f"limiting graph read at depth {lim.depth}: {len(lim.graph.edges)} edges")

# A contemporaneous edge with no other structure stays unoriented in the limit.
pair = TsDagTemplate(2, frozenset({(1, 0, 0)}), ("X0", "X1"))
p = limiting_ts_dpag(pair, 1).graph
print(f"limiting DPAG: X0[0] {p.edge_type((0, 0), (1, 0))} X1[0]")
