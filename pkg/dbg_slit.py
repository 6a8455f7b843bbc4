import time

from dilsurf.constructions import hopf_slit_sum, hopf_torus
from dilsurf.geom import Mat2
from dilsurf.isom import is_affine_automorphism, search_isomorphism, Verified
from dilsurf.surface import apply_matrix

h = hopf_slit_sum(2.0)

cases = [
    ("identity", [[1.0, 0.0], [0.0, 1.0]]),
    ("deck 2", [[2.0, 0.0], [0.0, 2.0]]),
    ("pure shear b=0.5", [[1.0, 0.5], [0.0, 1.0]]),
    ("pure shear b=-0.698", [[1.0, -0.698], [0.0, 1.0]]),
    ("pure stretch a=0.986", [[0.986, 0.0], [0.0, 1.0 / 0.986]]),
    ("pure stretch a=1.5", [[1.5, 0.0], [0.0, 1.0 / 1.5]]),
    ("sample0", [[0.986, -0.698], [0.0, 1.0 / 0.986]]),
]
for name, rows in cases:
    m = Mat2.from_rows(rows)
    t0 = time.time()
    r = is_affine_automorphism(h, m)
    ok = isinstance(r, Verified)
    extra = "" if ok else f" ({r.reason}; roots={r.roots_tried} nodes={r.nodes} moves={r.moves})"
    print(f"{name:24s} -> {type(r).__name__:9s} {time.time()-t0:6.2f}s{extra}")
