"""Markov equivalence classes and how background knowledge shrinks them.

    python3 demos/02_equivalence.py
"""

from tsgraph import Knowledge, ObservationScheme, TsDagTemplate, mi_dpag, theorem3_check, ts_dmag
from tsgraph.equivalence import circle_set

d_a = TsDagTemplate(2, frozenset({(0, 0, 1), (0, 1, 1)}), ("O1", "O2"))
m_a = ts_dmag(d_a, ObservationScheme((0, 1), 2))

print("class sizes of the D_A ts-DMAG:")
for bk in Knowledge:
    if bk is Knowledge.B_D_STAT:
        continue
    rep = mi_dpag(m_a, bk)
    print(f"  {bk.value:6s} {rep.class_size:3d} members, {len(circle_set(rep.dpag))} circle marks")

# Knowing that some ts-DAG generated the graph can orient an edge that mere
# ancestral time-ordered knowledge leaves open.
t10 = TsDagTemplate(3, frozenset({(0, 2, 1), (0, 1, 0), (1, 2, 0), (0, 0, 1), (0, 1, 1)}), ("X0", "X1", "X2"))
m10 = ts_dmag(t10, ObservationScheme((0, 1, 2), 1))
for bk in (Knowledge.B_TA, Knowledge.B_D):
    p = mi_dpag(m10, bk).dpag
    print(f"{bk.value}: X0[-1] {p.edge_type((0, -1), (0, 0))} X0[0]")

# Working on the stationarification alone can lose orientations.
t8 = TsDagTemplate(2, frozenset({(1, 0, 1), (1, 1, 2)}), ("X0", "X1"))
rep = theorem3_check(t8, ObservationScheme((0, 1), 3))
print(f"stationarified side keeps every mark of the plain side: {rep.holds}")
print(f"plain side strictly more informative: {rep.strict}")
lost = sorted(circle_set(rep.stat.dpag) - circle_set(rep.plain.dpag))
names = rep.plain.dpag.names
for v, w in lost:
    print(f"  circle at {names[v.var]}[{v.time}] on the edge to {names[w.var]}[{w.time}] only after stationarification")
