"""Tour of the family registry: build each immersion and print its invariants.

Run:  python3 demos/demo_families.py
"""

import numpy as np

from parasphere.families import family_names, named_family
from parasphere.hypersurface import decompose
from parasphere.verify import grid_points


def main():
    print(f"{'family':28s} {'dim':>3s} {'kind':8s} {'lambda':>12s}  notes")
    for name in family_names():
        fam = named_family(name)
        fmap = fam.map if fam.map is not None else fam.surface.f
        notes = []
        if fam.swap_tangent:
            notes.append("swap-tangent")
        if fam.flat:
            notes.append("flat")
        if fam.involutive is False:
            notes.append("non-involutive")
        lam = "-" if fam.lambda_expected is None else f"{fam.lambda_expected:.6f}"
        print(f"{name:28s} {fmap.domain_dim:3d} {fam.kind:8s} {lam:>12s}  "
              f"{', '.join(notes)}")

    print()
    fam = named_family("f1")
    p = grid_points(fam.box, 3, cap=1)[0]
    ind = decompose(fam.surface, p)
    print(f"f1 at {np.round(p, 3)}:")
    print(f"  shape operator (should be lambda * I):\n{np.round(ind.S, 12)}")
    print(f"  transversal form tau: {np.round(ind.tau, 15)}")
    print(f"  affine metric h:\n{np.round(ind.h, 12)}")


if __name__ == "__main__":
    main()
