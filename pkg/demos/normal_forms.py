"""Bring a few germs to the lower triangular normal form and check the result.

Run with ``python3 demos/normal_forms.py``.  Each germ is factored as
``H . U . diag(1, t^b, t^c) . M`` (after a reparametrization of ``t`` when one
is needed) and the factorization is verified by expanding it again.
"""

from curvelimits.germs import Germ, normalize_germ
from curvelimits.limits import apply_germ
from curvelimits.parsing import parse_matrix_entries

GERMS = [
    "[[1,0,0],[t,1,0],[0,0,1]]*diag(1,t,t^2)",
    "[[1,0,0],[t+t^2,t^3,0],[0,0,t^4]]",
    "[[1,0,0],[t^2+t^3,t^3,0],[t^3,t^4,t^5]]",
    "[[1,1,0],[t,0,t],[0,t^2,t^3]]",
]

CURVE = "x^4+y^3*z+2*x*y*z^2-z^4"

for text in GERMS:
    tower, entries = parse_matrix_entries(text)
    alpha = Germ(entries, tower)
    sf = normalize_germ(alpha)
    print(f"germ      {text}")
    print(f"  (b, c)  ({sf.b}, {sf.c})")
    print(f"  q r s   {sf.q} | {sf.r} | {sf.s}")
    if sf.reparametrization is not None:
        print(f"  t ->    t * ({sf.reparametrization})")
    print(f"  certified {sf.certify(alpha)}, bound violations {sf.check_bounds() or 'none'}")
    same = apply_germ(CURVE, alpha).form.proportional(apply_germ(CURVE, sf.reconstruct()).form)
    print(f"  same limit of {CURVE}: {same}")
    print()
