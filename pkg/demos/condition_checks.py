"""
Which models satisfy the rate conditions?
=========================================

``check_conditions`` tabulates the quantities the limit theory needs to go
to zero along a grid of sample sizes and marks each row as passing when the
sequence is decreasing and small at the end of the grid.
"""

from periomax.processes import check_conditions, process_from_dict

base = {"kind": "linear", "coeffs": {"family": "geometric", "rho": 0.5}}
cases = {
    "gaussian": base,
    "two-point": {**base, "innovation": "two_point"},
    "pareto s=2.5": {**base, "innovation": {"law": "pareto", "param": 2.5}},
    "pareto s=2": {**base, "innovation": {"law": "pareto", "param": 2}},
    "garch11": {"kind": "garch11", "omega": 0.1, "alpha": 0.05, "beta": 0.9},
}

for label, cfg in cases.items():
    report = check_conditions(process_from_dict(cfg))
    print(f"{label}: {'PASS' if report.passed else 'FAIL'}")
    for row in report.rows:
        vals = ", ".join(f"{v:.2e}" if isinstance(v, float) else str(v) for v in row.values)
        print(f"    {row.name:10s} {'ok ' if row.passed else 'no '} [{vals}] {row.note}")
