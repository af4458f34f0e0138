"""Independent numpy computation of the constants frozen into the C++ tests.

Run: python3 tests/oracle/derive_values.py
Nothing here imports the C++ code; basis H->|0>, V->|1>, Alice first.
"""
import numpy as np
from math import asin, cos, pi, sin, sqrt

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def ket(bits):
    v = np.zeros(4, dtype=complex)
    v[int(bits, 2)] = 1
    return v


def pure(gamma, phi=0.0):
    psi = cos(gamma) * ket("01") + np.exp(1j * phi) * sin(gamma) * ket("10")
    return np.outer(psi, psi.conj())


def noisy(p, lam, gamma):
    pm = [(ket("01") + s * ket("10")) / sqrt(2) for s in (1, -1)]
    mix = lam * sum(np.outer(v, v.conj()) for v in pm) / 2 + (1 - lam) * np.eye(4) / 4
    return p * pure(gamma) + (1 - p) * mix


def obs(theta, phi):
    return sin(theta) * cos(phi) * X + sin(theta) * sin(phi) * Y + cos(theta) * Z


def corr(rho, a, b):
    return np.trace(np.kron(obs(*a), obs(*b)) @ rho).real


def joint(rho, sa, sb, a, b):
    pa = (I2 + sa * obs(*a)) / 2
    pb = (I2 + sb * obs(*b)) / 2
    return np.trace(np.kron(pa, pb) @ rho).real


def horodecki(rho):
    P = [X, Y, Z]
    T = np.array([[np.trace(rho @ np.kron(P[i], P[j])).real for j in range(3)] for i in range(3)])
    m = sorted(np.linalg.eigvalsh(T.T @ T))[::-1]
    return 2 * sqrt(m[0] + m[1])


def wootters(rho):
    yy = np.kron(Y, Y)
    rt = yy @ rho.conj() @ yy
    ev = np.sqrt(np.abs(np.sort(np.linalg.eigvals(rho @ rt).real)[::-1]))
    return max(0.0, ev[0] - ev[1] - ev[2] - ev[3])


def fmt(x):
    return repr(float(x))


print("concurrence psi(pi/8):", fmt(wootters(pure(pi / 8))))
rho = noisy(0.8, 0.5, 0.6)
print("noisy(0.8,0.5,0.6) diag:", [fmt(x) for x in np.diag(rho).real])
print("noisy(0.8,0.5,0.6) rho[1][2]:", fmt(rho[1, 2].real))
print("horodecki noisy(0.8,0.5,0.6):", fmt(horodecki(rho)))
print("horodecki noisy(0.9,0,pi/4):", fmt(horodecki(noisy(0.9, 0, pi / 4))))
print("horodecki noisy(0.9,1,pi/4):", fmt(horodecki(noisy(0.9, 1, pi / 4))))
print("horodecki noisy(0.8,0.5,pi/4):", fmt(horodecki(noisy(0.8, 0.5, pi / 4))))
r = pure(0.3, 0.7)
a, b = (1.1, 0.4), (2.0, 5.0)
print("corr psi(0.3,0.7):", fmt(corr(r, a, b)))
print("joint ++,+-,-+,--:", [fmt(joint(r, sa, sb, a, b)) for sa, sb in [(1, 1), (1, -1), (-1, 1), (-1, -1)]])
print("marginal A psi(0.3,0.7) along a:", fmt(np.trace(np.kron(obs(*a), I2) @ r).real))
print("marginal B psi(0.3,0.7) along b:", fmt(np.trace(np.kron(I2, obs(*b)) @ r).real))
print("xx corr psi(pi/4):", fmt(corr(pure(pi / 4), (pi / 2, 0), (pi / 2, 0))))
print("xx p(++) psi(pi/4):", fmt(joint(pure(pi / 4), 1, 1, (pi / 2, 0), (pi / 2, 0))))

# chained k=3: brute force over equally spaced planar angles
k = 3
best = 0.0
s = pure(pi / 4)
for off in np.linspace(0, 2 * pi, 721):
    for sgn in (1, -1):
        al = [i * pi / k for i in range(k)]
        be = [off + sgn * (i + 0.5) * pi / k for i in range(k)]
        def dirn(t):
            t = t % (2 * pi)
            return (t, 0.0) if t <= pi else (2 * pi - t, pi)

        E = [[corr(s, dirn(al[x]), dirn(be[y])) for y in range(k)] for x in range(k)]
        tot = 0.0
        for i in range(1, k + 1):
            first = E[i - 1][i - 1]
            second = E[i][i - 1] if i < k else -E[0][k - 1]
            tot += abs(0.5 * (first + second))
        best = max(best, tot)
print("chained k=3 planar brute force:", fmt(best), "vs", fmt(3 * cos(pi / 6)))

# guessing probability
for S in (2.5, 2.71):
    print("p_guess(%g):" % S, fmt(0.5 + 0.5 * sqrt(2 - S * S / 4)))
print("Werner p for S=2.71:", fmt(2.71 / (2 * sqrt(2))))
print("weak gamma for 2.066:", fmt(0.5 * asin(sqrt((2.066 / 2) ** 2 - 1))))
print("tilted gamma beta=1:", fmt(0.5 * asin(sqrt(3 / 5))), "beta=0.5:", fmt(0.5 * asin(sqrt(3.75 / 4.25))))
print("tlm singlet:", fmt(-asin(-1 / sqrt(2)) + 3 * asin(1 / sqrt(2))))
