"""Independent high-precision reference values, frozen into ``frozen.py``.

Uses sympy and mpmath only; nothing from the package under test. Run
``python3 tests/oracles/generate.py > tests/oracles/frozen.py`` to refresh.
"""

import mpmath as mp
import sympy as sp

mp.mp.dps = 50


def example1_matrix():
    return sp.Matrix([[1, 1, 0, 0], [3, 1, 1, 0], [0, 3, 1, 1], [0, 0, 3, 1]])


def example1_spectrum():
    lam = sp.symbols("lam")
    poly = example1_matrix().charpoly(lam).as_expr()
    coeffs = [mp.mpf(str(c)) for c in sp.Poly(poly, lam).all_coeffs()]
    return sorted(mp.re(r) for r in mp.polyroots(coeffs, maxsteps=200, extraprec=200))


def gibbs(points, beta, zeta):
    w = [mp.exp(-beta * x - zeta * y) for x, y in points]
    z = mp.fsum(w)
    p = [wi / z for wi in w]
    mh = mp.fsum(pi * x for pi, (x, _) in zip(p, points))
    mk = mp.fsum(pi * y for pi, (_, y) in zip(p, points))
    s = -mp.fsum(pi * mp.log(pi) for pi in p)
    vh = mp.fsum(pi * (x - mh) ** 2 for pi, (x, _) in zip(p, points))
    vk = mp.fsum(pi * (y - mk) ** 2 for pi, (_, y) in zip(p, points))
    c = mp.fsum(pi * (x - mh) * (y - mk) for pi, (x, y) in zip(p, points))
    return mp.log(z), mh, mk, s, [[vh, c], [c, vk]]


def toeplitz_spectrum(n, d):
    amp = 2 * mp.sqrt(1 - mp.mpf(d) ** 2)
    return [2 - amp * mp.cos(k * mp.pi / (n + 1)) for k in range(1, n + 1)]


def main():
    out = {}
    lam = example1_spectrum()
    out["EXAMPLE1_EIGENVALUES"] = lam
    pts = [(x, x * x / 3) for x in lam]
    log_z, mh, mk, s, cov = gibbs(pts, mp.mpf("0.8"), mp.mpf("-0.3"))
    out["EXAMPLE1_GIBBS_08_M03"] = {"log_z": log_z, "mean_h": mh, "mean_k": mk, "entropy": s, "covariance": cov}
    out["EXAMPLE1_LOGZ_BETA07"] = mp.log(mp.fsum(mp.exp(-mp.mpf("0.7") * x) for x in lam))
    out["EXAMPLE1_COMPOSED_LOGZ_BETA05"] = 2 * mp.log(mp.fsum(mp.exp(-mp.mpf("0.5") * x) for x in lam))
    out["BESSEL_I0_1"] = mp.besseli(0, 1)
    out["BESSEL_I0_10"] = mp.besseli(0, 10)
    d = mp.sqrt(7) / 4
    out["TOEPLITZ50_D74_LOGZ_BETA1"] = mp.log(mp.fsum(mp.exp(-x) for x in toeplitz_spectrum(50, d)))
    em = {}
    for n in (10, 50, 200):
        with mp.workdps(1200):
            amp = 2 * mp.sqrt(1 - (mp.sqrt(7) / 4) ** 2)
            exact = mp.fsum(mp.exp(-(2 - amp * mp.cos(k * mp.pi / (n + 1)))) for k in range(1, n + 1))
            approx = mp.exp(-2) * (n + 1) * mp.besseli(0, amp) - (mp.exp(-(2 + amp)) + mp.exp(-(2 - amp))) / 2
            em[n] = mp.log10(abs(approx - exact) / exact)
    out["EM_LOG10_REL_ERROR_D74_BETA1"] = em
    # Remainder of the second-order formula for f = exp(-x), n = 20, both lower limits.
    n = 20
    f2 = lambda x: mp.exp(-x)
    def rem(lower):
        total = mp.mpf(0)
        for j in range(n):
            lo, hi = mp.mpf(j) / n, mp.mpf(j + 1) / n
            if hi <= lower:
                continue
            lo = max(lo, lower)
            total += mp.quad(lambda x: ((n * x - j) ** 2 - (n * x - j) + mp.mpf(1) / 6) * f2(x), [lo, hi])
        return -total / (2 * n)
    out["EM_REMAINDER_EXP_N20"] = rem(mp.mpf(0))
    out["EM_REMAINDER_EXP_N20_LOWER_1_OVER_N"] = rem(mp.mpf(1) / n)
    lhs = mp.fsum(mp.exp(-mp.mpf(k) / n) for k in range(1, n + 1))
    explicit = n * (1 - mp.exp(-1)) + (mp.exp(-1) - 1) / 2 + (-mp.exp(-1) + 1) / (12 * n)
    out["EM_IDENTITY_LHS_EXP_N20"] = lhs - explicit

    print('"""Frozen reference values from ``generate.py`` (sympy/mpmath, 50 digits)."""\n')
    for key, val in out.items():
        print(f"{key} = {fmt(val)}")


def fmt(v):
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k!r}: {fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(fmt(x) for x in v) + "]"
    return repr(float(v))


if __name__ == "__main__":
    main()
