"""Independent reference values that the test-suite freezes.

Nothing here imports ``wignerlab``.  Semicircle quantities come from
mpmath quadrature and root finding; cumulants come from the log(1 + u) series of the moment
generating function in 40-digit arithmetic.  Run with

    python3 scripts/oracles.py

and compare against the constants in ``tests/oracle_values.py``.
"""

from __future__ import annotations

import json

import mpmath as mp

mp.mp.dps = 40


def rho(x):
    return mp.sqrt(4 - x * x) / (2 * mp.pi) if abs(x) < 2 else mp.mpf(0)


def stieltjes(z):
    return mp.quad(lambda x: rho(x) / (x - z), [-2, 0, 2])


def quantile(alpha, N):
    target = (mp.mpf(alpha) - mp.mpf(1) / 2) / N
    F = lambda g: mp.quad(rho, [-2, g]) - target
    return mp.findroot(F, (mp.mpf(-2) + mp.mpf("1e-30"), mp.mpf(2) - mp.mpf("1e-30")), solver="bisect")


def log_fit_slope():
    # least-squares slope of log(N^-1/2 log N) on log N over powers of two 64..4096
    xs = [mp.log(2**k) for k in range(6, 13)]
    ys = [-x / 2 + mp.log(x) for x in xs]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


def _mul(a, b, order):
    out = {}
    for (p1, q1), x in a.items():
        for (p2, q2), y in b.items():
            if p1 + p2 + q1 + q2 <= order:
                k = (p1 + p2, q1 + q2)
                out[k] = out.get(k, 0) + x * y
    return out


def complex_cumulants(points, probs, order=4):
    """kappa^{(p,q)} = p! q! [s^p t^q] log E exp(s h + t conj h), via the log(1 + u) series."""
    u = {}
    for p in range(order + 1):
        for q in range(order + 1 - p):
            if p + q:
                mom = sum(w * x**p * mp.conj(x) ** q for x, w in zip(points, probs))
                u[(p, q)] = mom / (mp.factorial(p) * mp.factorial(q))
    log = {}
    power = {(0, 0): mp.mpf(1)}
    for k in range(1, order + 1):
        power = _mul(power, u, order)
        for key, v in power.items():
            log[key] = log.get(key, 0) + mp.mpf((-1) ** (k + 1)) / k * v
    out = {}
    for n in range(1, order + 1):
        for p in range(n, -1, -1):
            q = n - p
            c = complex(log.get((p, q), 0) * mp.factorial(p) * mp.factorial(q))
            out[f"{p},{q}"] = complex(round(c.real, 15), round(c.imag, 15))
    return out


def main():
    vals = {}
    z = mp.mpc(0, 1)
    vals["m_sc(i)"] = complex(stieltjes(z))
    vals["im_m_sc(i)^2"] = float(mp.im(stieltjes(z)) ** 2)
    for zz in ((0.5, 0.2), (1.5, 0.1), (-2.5, 0.3), (0.0, -0.7)):
        vals[f"m_sc({zz[0]}{zz[1]:+}i)"] = complex(stieltjes(mp.mpc(*zz)))
    vals["gamma_1(N=2)"] = float(quantile(1, 2))
    vals["gamma_7(N=10)"] = float(quantile(7, 10))
    vals["gamma_1(N=1000)"] = float(quantile(1, 1000))
    vals["slope(N^-1/2 log N, 64..4096)"] = float(log_fit_slope())
    r = 1 / mp.sqrt(2)
    quarter = mp.mpf(1) / 4
    vals["rademacher_complex"] = complex_cumulants([mp.mpc(r, r), mp.mpc(r, -r), mp.mpc(-r, r), mp.mpc(-r, -r)],
                                                   [quarter] * 4)
    vals["uniform_circle_22"] = -1  # E|h|^4 - 2 (E|h|^2)^2 for |h| = 1
    ph = mp.expjpi(mp.mpf(1) / 8)
    a, b = mp.sqrt(3), -1 / mp.sqrt(3)
    vals["skewed_two_point"] = complex_cumulants([ph * a, ph * b], [quarter, 1 - quarter])
    vals["skewed_two_point_real"] = {k: v.real for k, v in
                                     complex_cumulants([mp.mpc(a), mp.mpc(b)], [quarter, 1 - quarter]).items()
                                     if k.endswith(",0")}
    print(json.dumps(vals, indent=1, default=lambda c: [c.real, c.imag]))


if __name__ == "__main__":
    main()
