#!/usr/bin/env python3
"""Offline reference values for the statistics kernel.

Writes crates/core/tests/fixtures/stats_reference.json. Uses numpy for sample
generation, brute-force ECDF evaluation for the KS statistic, and mpmath at
50 digits for every tail probability, so none of the numbers depend on the
Rust implementation.
"""
import json
import pathlib

import mpmath as mp
import numpy as np

mp.mp.dps = 50
OUT = pathlib.Path(__file__).resolve().parents[1] / "crates/core/tests/fixtures/stats_reference.json"


def ks_statistic(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    best = 0.0
    for v in np.concatenate([a, b]):
        fa = np.count_nonzero(a <= v) / len(a)
        fb = np.count_nonzero(b <= v) / len(b)
        best = max(best, abs(fa - fb))
    return best


def kolmogorov_q(lam):
    lam = mp.mpf(lam)
    if lam == 0:
        return mp.mpf(1)
    return 2 * mp.nsum(lambda k: (-1) ** (k - 1) * mp.exp(-2 * k * k * lam * lam), [1, mp.inf])


def ks_pvalue(d, n, m):
    e = mp.mpf(n) * m / (n + m)
    se = mp.sqrt(e)
    lam = (se + mp.mpf("0.12") + mp.mpf("0.11") / se) * d
    p = kolmogorov_q(lam)
    return float(min(max(p, 0), 1))


def t_sf(t, df):
    # P(T > t) for Student t with df degrees of freedom.
    t = mp.mpf(t)
    x = df / (df + t * t)
    tail = mp.betainc(mp.mpf(df) / 2, mp.mpf(1) / 2, 0, x, regularized=True) / 2
    return float(tail if t >= 0 else 1 - tail)


def binomial_threshold(n, alpha, beta):
    alpha = mp.mpf(alpha)
    beta = mp.mpf(beta)
    pmf = [mp.binomial(n, k) * alpha ** k * (1 - alpha) ** (n - k) for k in range(n + 1)]
    tail = mp.mpf(0)
    tails = [mp.mpf(0)] * (n + 2)
    for k in range(n, -1, -1):
        tail += pmf[k]
        tails[k] = tail
    for k in range(n + 2):
        if tails[k] <= beta:
            return k
    raise AssertionError


def main():
    rng = np.random.default_rng(20240611)
    ks_cases = []
    shapes = [(200, 200, 0.0), (200, 200, 0.3), (50, 80, 0.5), (25, 25, 1.0), (7, 11, 0.0), (120, 45, -0.2)]
    for n, m, shift in shapes:
        a = rng.standard_normal(n)
        b = rng.standard_normal(m) + shift
        d = ks_statistic(a, b)
        ks_cases.append({"s1": a.tolist(), "s2": b.tolist(), "d": d, "p": ks_pvalue(d, n, m)})
    # ties across samples
    a = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0, 5.0]
    b = [2.0, 2.0, 4.0, 6.0, 6.0, 7.0]
    d = ks_statistic(a, b)
    ks_cases.append({"s1": a, "s2": b, "d": d, "p": ks_pvalue(d, len(a), len(b))})

    t_cases = []
    for size, shift, sd in [(200, 0.0, 1.0), (200, 0.05, 1.0), (50, -0.1, 0.5), (2, 0.3, 1.0), (30, 0.4, 2.0)]:
        small = rng.standard_normal(size)
        large = small + shift + sd * rng.standard_normal(size)
        delta = [mp.mpf(float(l)) - mp.mpf(float(s)) for s, l in zip(small, large)]
        mean = mp.fsum(delta) / size
        var = mp.fsum([(d_ - mean) ** 2 for d_ in delta]) / (size - 1)
        t = mean / (mp.sqrt(var) / mp.sqrt(size))
        t_cases.append({
            "small": small.tolist(),
            "large": large.tolist(),
            "t": float(t),
            "p": t_sf(t, size - 1),
        })

    thresholds = []
    for n, a_, b_ in [(1000, 0.05, 0.05), (1, 0.05, 0.05), (100, 0.05, 0.05), (500, 0.01, 0.05),
                      (1000, 0.1, 0.01), (20, 0.5, 0.1), (10, 0.05, 0.5)]:
        thresholds.append({"n": n, "alpha": a_, "beta": b_, "k": binomial_threshold(n, a_, b_)})

    ln_gamma = [{"x": x, "value": float(mp.loggamma(mp.mpf(x)))} for x in
                [0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 100.5, 1234.25, 0.01]]
    inc_beta = []
    for a_, b_, x in [(0.5, 0.5, 0.3), (2.0, 3.0, 0.4), (99.5, 0.5, 0.98), (10.0, 10.0, 0.5),
                      (1.0, 1.0, 0.25), (50.0, 0.5, 0.9), (0.5, 40.0, 0.01)]:
        inc_beta.append({"a": a_, "b": b_, "x": x,
                         "value": float(mp.betainc(a_, b_, 0, x, regularized=True))})

    doc = {"ks": ks_cases, "t_test": t_cases, "binomial_threshold": thresholds,
           "ln_gamma": ln_gamma, "inc_beta": inc_beta}
    OUT.write_text(json.dumps(doc, indent=1) + "\n")
    print("wrote", OUT)
    for c in ks_cases:
        print("ks", c["d"], c["p"])
    for c in t_cases:
        print("t", c["t"], c["p"])
    for c in thresholds:
        print("k*", c)


if __name__ == "__main__":
    main()
