"""Smoke test for the gramlaw_py extension.

Build it first, e.g. `maturin develop --release -m crates/py/Cargo.toml`.
"""

import math
import tempfile
from pathlib import Path

import gramlaw_py as g


def close(a, b, tol):
    assert abs(a - b) < tol, f"{a} vs {b}"


def main():
    close(g.gram_point(0), 17.8455995404, 1e-9)
    close(g.theta(7.0), -3.5116, 1e-3)
    close(g.alpha_constant(), 0.987944, 1e-6)
    z = g.zeta_critical_line(14.134725141734693)
    assert abs(z) < 1e-9

    zeros = g.find_zeros(10.0, 200.0)
    assert len(zeros) == 79
    close(zeros.ordinates[0], 14.134725141734693, 1e-8)
    assert zeros.table1_row(60) == [0, 60, 0, 0, 0]
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "zeros.txt"
        zeros.write(path)
        back = g.ZeroOrdinateList.read(path)
        assert len(back) == len(zeros)
        assert back.coverage == zeros.coverage
    try:
        zeros.table1_row(500)
    except RuntimeError as e:
        assert "covers" in str(e)
    else:
        raise AssertionError("coverage gap not reported")

    arc = g.ArcInterval.gram(5)
    close(arc.length, 2 * math.pi / 5, 1e-15)
    p = g.prob_u_all(5, arc)
    close(sum(p), 1.0, 1e-12)
    close(p[1], 0.667251, 1e-6)
    lam = g.kernel_eigenvalues(5, arc)
    assert all(0.0 <= x <= 1.0 for x in lam)

    close(g.prob_su_corollary(2, 1), 1.0, 1e-12)
    close(g.quad_prob_su(3, 1), g.prob_su_corollary(3, 1), 1e-9)
    est = g.mc_prob_su(3, 1, 200_000, 7, workers=4)
    assert abs(est.value - g.prob_su_corollary(3, 1)) < 4 * est.std_error
    close(g.x2_integral(100) * 100, -g.alpha_constant(), 5e-4)
    assert g.FourierCoefficientTable(4).coefficient([0, 0, 0, 0]) == 24

    try:
        g.quad_prob_su(7, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("N = 7 quadrature accepted")

    csv = g.table_csv("T2", 4)
    assert csv.splitlines()[3] == "N,k0,k1,k2,method"
    print("gramlaw_py smoke test passed")


if __name__ == "__main__":
    main()
