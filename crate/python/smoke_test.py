"""Smoke test for the pymopfact extension.

Build and install it first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pymopfact-*.whl

then run ``python python/smoke_test.py``.
"""

from fractions import Fraction as F

import pymopfact as mf


def main():
    # Legendre on (0, 1): r = 1, a = 0, b = 0
    leg = mf.System.jacobi_pineiro([0], 0)
    expected = [F(1, 2), F(1, 6), F(1, 3), F(1, 5), F(3, 10), F(3, 14)]
    for method in ("gauss-borel", "minors", "bcf", "closed-form"):
        assert leg.alphas(6, method) == expected, method

    h = leg.hessenberg(3)
    assert [h[i][i] for i in range(3)] == [F(1, 2)] * 3
    assert (h[1][0], h[2][1]) == (F(1, 12), F(1, 15))

    polys = mf.polynomials(leg.alphas(10), 1, 3)
    assert polys[2] == [F(1, 6), -1, 1]

    jp = mf.System.jacobi_pineiro([F(1, 2), F(1, 3)], F(1, 4))
    alphas = jp.alphas(31)
    assert alphas[0] == F(6, 11)
    assert alphas == jp.alphas(31, "bcf") == jp.alphas(31, "closed-form")
    assert all(mf.jp_alpha_bcf(["1/2", "1/3"], "1/4", n) == mf.jp_alpha_type1([F(1, 2), F(1, 3)], F(1, 4), n)
               for n in range(31))

    # 2-Dyck paths of length 6: S_2 = a0^2 + a0 a1 + a0 a2
    w = [F(2), F(3), F(5), F(7)]
    assert mf.sr_polynomial(w, 2, 2) == 4 + 6 + 10
    assert mf.production_check(alphas, 2, 3, 3)
    assert all(mf.modified_sr(alphas, 2, n, j - 1) == jp.moment(j, n) for j in (1, 2) for n in range(4))

    lag = mf.System.laguerre([0])
    assert lag.alphas(6, "closed-form") == [1, 1, 2, 2, 3, 3]
    assert [mf.laguerre_alpha([F(1, 2), F(1, 3)], n) for n in range(4)] == [F(3, 2), F(-1, 6), F(7, 6), F(4, 3)]
    assert mf.gammas(lag.alphas(20), 1, 4) == [[1, 3, 5, 7], [1, 4, 9]]

    sym = mf.System.custom([[1, 0, F(1, 2), 0, F(3, 8), 0, F(5, 16), 0, F(35, 128)]])
    for method in ("gauss-borel", "bcf"):
        try:
            sym.alphas(3, method)
        except mf.NoBidiagonalFactorisation as e:
            assert "alpha_0" in str(e)
        else:
            raise AssertionError("symmetric moments must not factorise")

    try:
        mf.System.custom([[1, 1, 1, 1, 1, 1]]).alphas(3)
    except mf.SingularLeadingMinor:
        pass
    else:
        raise AssertionError("singular moment matrix not reported")

    print("pymopfact smoke test passed")


if __name__ == "__main__":
    main()
