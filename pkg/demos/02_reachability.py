"""Tabletop reachability map.

A 1 m x 1 m table 0.8 m in front of the robot is split into a 16 x 16 grid;
every cell's hover pose is probed against a reach oracle.  Here the built-in
analytic annulus oracle stands in for a motion planner: anything between
0.35 m and 1.1 m of the shoulder point is reachable.
"""

from sceneforge.reachability import (
    GridSpec,
    TableSpec,
    analytic_reach_oracle,
    compute_reachability_map,
)

oracle = analytic_reach_oracle(shoulder=(0.0, 0.0, 1.0), r_min=0.35, r_max=1.1)
rmap = compute_reachability_map(TableSpec(), GridSpec(), oracle, iterations=20)

print(f"reachable cells: {rmap.num_reachable} / 256\n")
print("robot sits below this map; '#' = reachable, '.' = out of reach\n")
for row in rmap.grid[::-1]:  # far edge of the table first
    print("   " + " ".join("#" if v else "." for v in row))

near = rmap.center(0, 8)
far = rmap.center(15, 8)
print(f"\nnearest row center {near.round(3)}, farthest {far.round(3)}")
