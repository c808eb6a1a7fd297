"""Walk through the limit curves of three plane curves.

Run with ``python3 demos/boundary_tour.py``.  For each curve the script
lists the marker germs that survive the exclusion rules, the limit each one
produces and where that limit sits among the small-orbit kinds.
"""

from curvelimits.pnc import analyze

CURVES = [
    ("nodal cubic", "x*y*z+y^3+z^3"),
    ("line plus quartic", "adjoin r: r^2+r+1 = 0\n(y+z)*(x*y^2+x*y*z+x*z^2+y^2*z+y*z^2)"),
    ("ramphoid cusp quartic", "(y^2-x*z)^2-y^3*z"),
]


def show(name, text):
    report = analyze(text)
    counts = ", ".join(f"{k}:{v}" for k, v in report.counts().items() if v)
    print(f"== {name}: {report.curve}")
    print(f"   components {counts}")
    for comp in report.components:
        print(f"   [{comp.type}] {comp.feature}")
        if len(comp.features) > 1:
            print(f"        (merged with {len(comp.features) - 1} more)")
        print(f"        germ  {comp.germ}")
        print(f"        limit {comp.limit.factorization()}")
        print(f"        kind  {comp.classification}")
    for d in report.dropped:
        print(f"   dropped {d.type} at {d.feature}: {d.reason}")
    print()


if __name__ == "__main__":
    for name, text in CURVES:
        show(name, text)
