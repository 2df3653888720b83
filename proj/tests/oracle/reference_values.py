#!/usr/bin/env python3
"""Independent high-precision reference values for the xilab test suites.

Everything here is computed with mpmath at 40 significant digits, directly
from the theta-series definitions and the Psi-integral representation of
xi(s). None of it shares code with the C++ implementation. The printed
values are frozen into tests/reference_values.hpp.
"""
from mpmath import mp, mpf, mpc, exp, pi, quad, inf, diff, findroot, zetazero, gamma, zeta

mp.dps = 40


def psi(tau):
    return sum(exp(-pi * n * n * tau) for n in range(1, 60))


def F(t):
    return sum(exp(t - pi * n * n * exp(4 * t)) for n in range(1, 80))


def G(t):
    s = mpf(0)
    for n in range(1, 80):
        w = pi * n * n * exp(4 * t)
        s += exp(t - w) * (16 * w * w - 24 * w)
    return s


def xi_psi_integral(s):
    # 1/2 + s(s-1)/2 * int_1^inf Psi(tau) (tau^{s/2-1} + tau^{-(1+s)/2}) dtau
    f = lambda tau: psi(tau) * (tau ** (s / 2 - 1) + tau ** (-(1 + s) / 2))
    return mpf(1) / 2 + s * (s - 1) / 2 * quad(f, [1, 2, 4, 8, 16, inf])


def xi_zeta(s):
    return s * (s - 1) / 2 * pi ** (-s / 2) * gamma(s / 2) * zeta(s)


def eta(z):
    return xi_psi_integral((1 + z) / 2)


def main():
    print("psi(1)        =", mp.nstr(psi(1), 20))
    print("psi(2)        =", mp.nstr(psi(2), 20))
    print("psi(1/2)      =", mp.nstr(psi(mpf(1) / 2), 20))
    print("F(0)          =", mp.nstr(F(0), 20))
    print("F'(0)         =", mp.nstr(diff(F, 0), 20))
    print("G(0)          =", mp.nstr(G(0), 20))
    print("G(0.5)        =", mp.nstr(G(mpf(1) / 2), 20))
    print("G(0.3)        =", mp.nstr(G(mpf(3) / 10), 20))
    print("G'(0.2)       =", mp.nstr(diff(G, mpf(1) / 5), 20))
    print("G'''(0.1)     =", mp.nstr(diff(G, mpf(1) / 10, 3), 20))
    print("int G''' t^2  =", mp.nstr(quad(lambda t: diff(G, t, 3) * t * t, [0, 0.25, 0.5, 1, 2]), 20))
    print("eta(0)        =", mp.nstr(eta(mpc(0)), 20), " via zeta:", mp.nstr(xi_zeta(mpf(1) / 2), 20))
    print("eta(1)        =", mp.nstr(eta(mpc(1)), 20))
    for z in [mpc(0.4, 10), mpc(0.3, 12), mpc(0, 20), mpc(0, 30), mpc(0.5, 5), mpc(1, 60), mpc(-0.7, 33)]:
        print("eta(%s) =" % z, mp.nstr(eta(z), 20), " via zeta:", mp.nstr(xi_zeta((1 + z) / 2), 20))
    # first three zeros by root-finding the Psi-integral route on the line
    for guess in (28.27, 42.04, 50.02):
        y = findroot(lambda y: eta(mpc(0, y)).real, mpf(guess))
        print("zero (psi route) y =", mp.nstr(y, 15))
    # large-y values, where only the zeta form is fast enough at 40 digits
    for z in [mpc(0, 60), mpc(0, 99), mpc(0, 100), mpc(0.05, 100), mpc(1, 100)]:
        print("eta(%s) via zeta =" % z, mp.nstr(xi_zeta((1 + z) / 2), 15))
    for y in (mpf("28.2694502834694"), mpf("42.0440792775431")):
        print("du/dy at", y, "=", mp.nstr(diff(lambda t: xi_zeta((1 + mpc(0, t)) / 2).real, y), 15))
    for k in range(1, 12):
        print("zetazero", k, "y =", mp.nstr(2 * zetazero(k).imag, 15))


if __name__ == "__main__":
    main()
