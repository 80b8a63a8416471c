"""The three roads to the same sphere constant.

A pair of plane conics can be glued into a codimension-2 surface, suspended
into a hypersurface, or combined by a Calabi product.  The three resulting
constants are tied together by closed-form exponent relations; this script
measures all of them numerically and shows the agreement.

Run:  python3 demos/demo_calabi.py
"""

import numpy as np

from parasphere.families import (
    _COMPONENTS,
    calabi_lambda,
    cp,
    lambda_from_alpha,
    linear_map,
    matrix_A,
    pair,
    scale_map,
    sphere_constant,
    suspend,
)
from parasphere.hypersurface import Hypersurface, is_affine_sphere
from parasphere.paracomplex import CodimTwoSurface, normalize_affine_normal2
from parasphere.verify import grid_points


def main():
    c1, c2 = "ellipse", "hyperbola"
    alpha, beta = sphere_constant(c1), sphere_constant(c2)
    print(f"component constants: alpha = {alpha}, beta = {beta}")

    # road 1: closed product formula
    lam_formula = calabi_lambda(alpha, beta, 1)
    print(f"product formula:      lambda = {lam_formula!r}")

    # road 2: measure the suspension's shape operator directly
    susp = suspend(pair(_COMPONENTS[c1](), _COMPONENTS[c2]()))
    surface = Hypersurface(susp, scale_map(susp, -lam_formula))
    pts = grid_points(susp.domain_box, 3, cap=10)
    flag, lam_measured = is_affine_sphere(surface, pts)
    print(f"measured on surface:  lambda = {lam_measured!r}  (sphere: {flag})")

    # road 3: codimension-2 normalization plus the exponent relation
    g = pair(_COMPONENTS[c1](), _COMPONENTS[c2]())
    result = normalize_affine_normal2(
        CodimTwoSurface(g, scale_map(g, -1.0)),
        grid_points(g.domain_box, 3, cap=10))
    lam_exponent = lambda_from_alpha(result.alpha, 1)
    print(f"codim-2 alpha:        {result.alpha!r}")
    print(f"exponent relation:    lambda = {lam_exponent!r}")

    # and the suspension is a constant linear image of the Calabi product
    image = linear_map(matrix_A(1), cp(_COMPONENTS[c1](), _COMPONENTS[c2]()))
    worst = max(float(np.max(np.abs(susp(p) - image(p)))) for p in pts)
    print(f"suspension vs linear image of Calabi product: {worst:.2e}")


if __name__ == "__main__":
    main()
