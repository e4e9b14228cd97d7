"""Freeze independent reference values into tests/oracles.json.

Every value is computed with mpmath at 30 digits and never with the
package itself, so the tests compare two unrelated implementations.
Rerun only when an oracle is added; the JSON is committed.
"""
from __future__ import annotations

import json
import pathlib

import mpmath as mp

mp.mp.dps = 30
OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "oracles.json"


def bessel_i_series(lam, xi, terms=80):
    """I_lam(xi) summed from its power series."""
    half = mp.mpf(xi) / 2
    return mp.fsum(half ** (2 * k + lam) / (mp.factorial(k) * mp.gamma(k + lam + 1))
                   for k in range(terms))


def spectral_p(x, y, t):
    """(2/pi) int e^{-t u^2/4} K_{iu}(e^{-x}) K_{iu}(e^{-y}) / |Gamma(iu)|^2 du."""
    zx, zy = mp.e ** (-x), mp.e ** (-y)
    u_max = mp.sqrt(64 * mp.log(10) / t)

    def body(u):
        if u == 0:
            return mp.mpf(0)
        g2 = mp.pi / (u * mp.sinh(mp.pi * u))
        return mp.exp(-t * u * u / 4) * mp.re(mp.besselk(1j * u, zx)) \
            * mp.re(mp.besselk(1j * u, zy)) / g2

    return 2 / mp.pi * mp.quad(body, mp.linspace(0, u_max, 12))


def const_c(a, c, tau):
    """2^{a+c}/(8 pi) int e^{-tau u^2/4} |G((a+iu)/2)|^2 |G((c+iu)/2)|^2 / |G(iu)|^2 du.

    For a, c > 0 this is the double integral of e^{-ax-cy} p_tau with both
    inner integrals done by the Bessel-K Mellin transform.
    """
    def body(u):
        if u == 0:
            return mp.mpf(0)
        return (mp.exp(-tau * u * u / 4) * abs(mp.gamma((a + 1j * u) / 2)) ** 2
                * abs(mp.gamma((c + 1j * u) / 2)) ** 2 * u * mp.sinh(mp.pi * u) / mp.pi)
    return 2 ** mp.mpf(a + c) / (8 * mp.pi) * mp.quad(body, [0, 5, 10, 20, 40])


def frak_c_quadrant(a, c):
    """int int e^{-ax-cy} g_1(x, y) over the quadrant."""
    def g(x, y):
        return (mp.e ** (-(x - y) ** 2) - mp.e ** (-(x + y) ** 2)) / mp.sqrt(mp.pi)
    return mp.quad(lambda x, y: mp.e ** (-a * x - c * y) * g(x, y),
                   [0, 2, 6, 40], [0, 2, 6, 40])


def main():
    o = {}
    o["bessel_k_real"] = [
        {"nu": nu, "x": x, "value": float(mp.besselk(nu, x))}
        for nu, x in ((0.5, 1.0), (0.0, 1e-3), (1.0, 5.0), (2.5, 0.1), (0.2, 30.0))]
    o["bessel_k_imag"] = [
        {"u": u, "x": x, "value": float(mp.re(mp.besselk(1j * u, x)))}
        for u, x in ((0.7, 2.0), (3.0, 0.5), (10.0, 1e-3), (1.5, 0.05))]
    o["abs_gamma_sq"] = [
        {"re": re, "im": im, "value": float(abs(mp.gamma(mp.mpc(re, im))) ** 2)}
        for re, im in ((0.0, 1.0), (0.5, 2.0), (1.5, 0.25), (-0.5, 0.0), (3.0, 7.0))]
    o["bessel_i"] = [
        {"lam": lam, "xi": xi, "value": float(bessel_i_series(lam, xi))}
        for lam in (0.5, 1.0, 2.0) for xi in (0.5, 1.0, 2.0)]
    o["mellin"] = [
        {"s": s, "nu": nu,
         "value": float(2 ** mp.mpf(s - 2) * mp.gamma((s + nu) / 2) * mp.gamma((s - nu) / 2))}
        for s in (1.5, 2.0, 3.0) for nu in (0.0, 0.5, 1.0)]
    o["yakubovich_p"] = [
        {"x": x, "y": y, "t": t, "value": float(spectral_p(x, y, t))}
        for x, y, t in ((0.0, 0.0, 1.0), (0.5, 2.0, 1.0), (-1.0, 0.5, 0.5))]
    o["const_C"] = [
        {"a": a, "c": c, "tau": tau, "value": float(const_c(a, c, tau))}
        for a, c, tau in ((1.0, 1.0, 1.0), (2.0, 0.5, 1.0), (1.0, 1.0, 2.0))]
    o["frakC"] = [
        {"a": a, "c": c, "value": float(frak_c_quadrant(a, c))}
        for a, c in ((2.0, 1.0), (1.0, 1.0), (0.5, 3.0))]
    o["erf_1"] = float(mp.erf(1))
    o["g_1_1_1"] = float((1 - mp.e ** -4) / mp.sqrt(mp.pi))
    OUT.write_text(json.dumps(o, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
