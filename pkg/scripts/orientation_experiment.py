#!/usr/bin/env python3
"""Which group element does the scalar power route converge to?

The radial integral with exponent alpha evaluates to nu**alpha on each
spectral mode.  Taking alpha -> i*t therefore produces exp(-i*t*h), and
under the convention U_t = exp(i*t*H) that is U_{-t}, not U_t.  This
script measures both distances on a sweep of t so the orientation is an
observed fact rather than a sign convention argument.  The graph pair
route (alpha = -i*z) is run alongside; it lands on U_t directly.
"""

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from angen import (  # noqa: E402
    GroupModel,
    QuadratureSpec,
    reconstruct_Ut_cz,
    reconstruct_Ut_delta,
)


def run() -> int:
    g = GroupModel.diagonal([-1.5, -0.6, 0.4, 1.2])
    rng = np.random.default_rng(42)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    x /= np.linalg.norm(x)
    q = QuadratureSpec(rel_tolerance=1e-10)
    d = 0.02

    print(f"{'t':>6} {'scalar vs U_t':>14} {'scalar vs U_-t':>15} {'pair vs U_t':>12}")
    votes = []
    for t in (0.25, 0.5, 1.0, 1.5, 2.0):
        cz = reconstruct_Ut_cz(g, t, x, [d + 1j * t], q)
        delta = reconstruct_Ut_delta(g, t, x, [t + 1j * d], q)
        s = cz.steps[-1]
        print(
            f"{t:>6.2f} {s.error_forward:>14.3e} {s.error_reverse:>15.3e} "
            f"{delta.steps[-1].error:>12.3e}"
        )
        votes.append(cz.orientation)

    if all(v == "reverse" for v in votes):
        print("\nscalar route converges to U_{-t}; graph pair route to U_t")
        return 0
    print(f"\nmixed verdicts: {votes}")
    return 1


if __name__ == "__main__":
    raise SystemExit(run())
