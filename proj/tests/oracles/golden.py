"""Independent reference values for the link and load-model goldens.

Link budgets are done in dB arithmetic, integrals with a dense trapezoid rule
(10^6 panels) and cross-checked with mpmath quadrature. Run once; the printed
numbers are frozen in tests/test_golden.cpp.
"""
import math

import mpmath as mp
import numpy as np

R, r, N = 800.0, 100.0, 6
RING = R - 2 * r
PT_DBM = 10 * math.log10(40.0 * 1e3)
W_REF_DB = 10 * math.log10(30e6)
R0 = 200e3
LINKS = {"DL": (91.3, 3.4), "AL": (76.8, 7.4), "BL": (88.3, 3.1)}


def efficiency(kind, d, noise_dbm_hz):
    a, b = LINKS[kind]
    sinr_db = PT_DBM - (a + b * math.log10(d)) - (noise_dbm_hz + W_REF_DB)
    return math.log1p(10 ** (sinr_db / 10)) / math.log(2)


def efficiency_np(kind, d, noise_dbm_hz):
    a, b = LINKS[kind]
    sinr_db = PT_DBM - (a + b * np.log10(d)) - (noise_dbm_hz + W_REF_DB)
    return np.log1p(10 ** (sinr_db / 10)) / np.log(2)


def trapezoid(kind, lo, hi, noise, panels=1_000_000):
    l = np.linspace(lo, hi, panels + 1)
    f = np.zeros_like(l)
    pos = l > 0
    f[pos] = l[pos] / efficiency_np(kind, l[pos], noise)
    return float(np.trapezoid(f, l))


def quad(kind, lo, hi, noise):
    mp.mp.dps = 30
    a, b = LINKS[kind]

    def f(l):
        if l == 0:
            return mp.mpf(0)
        sinr_db = PT_DBM - (a + b * mp.log10(l)) - (noise + W_REF_DB)
        return l / mp.log(1 + mp.power(10, sinr_db / 10), 2)

    return float(mp.quad(f, [lo, (lo + hi) / 2, hi]))


def goldens(noise):
    inner = trapezoid("DL", 0.0, RING, noise)
    edge = trapezoid("DL", RING, R, noise)
    access = trapezoid("AL", 0.0, r, noise)
    bl = efficiency("BL", RING, noise)
    jn = edge / ((R * R - RING * RING) / 2 / bl)
    gamma_n = 2 * R0 / (r * r) * access

    # Normalized form with lambda_0 in the denominators.
    lam0, lamn, phi = 10.0, 2.0, 0.5
    num = (2 * R0 / RING ** 2 * inner
           + R0 / lam0 * N * lamn * (1 - phi) / (jn * bl)
           + 2 * R0 / (N * r * r * lam0) * N * lamn * edge * phi)
    den = 1 + N * lamn * (1 - phi) / (lam0 * jn) + N * lamn * phi / lam0
    return {
        "dl_rate_700": efficiency("DL", 700.0, noise),
        "dl_integral_600_800": edge,
        "dl_integral_600_800_quad": quad("DL", RING, R, noise),
        "dl_integral_0_600": inner,
        "al_integral_0_100": access,
        "bl_rate_600": bl,
        "relay_gain": jn,
        "gamma0_half": num / den,
        "gamma_n": gamma_n,
    }


if __name__ == "__main__":
    for noise in (-64.5, -174.0):
        print(f"noise {noise} dBm/Hz")
        for k, v in goldens(noise).items():
            print(f"  {k:28s} {v:.17g}")
