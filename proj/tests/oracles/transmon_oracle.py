"""Dense-diagonalization oracle for the charge-basis transmon spectrum.

Independent of the C++ implementation: builds the (2n_c+1)-dim charge-basis
Hamiltonian with numpy and prints the values frozen into transmon_test.cpp
and the acceptance suite. Energies in units of E_C.
"""
import numpy as np


def spectrum(ej, ec=1.0, ng=0.0, nc=30):
    n = np.arange(-nc, nc + 1)
    h = np.diag(4.0 * ec * (n - ng) ** 2)
    off = -0.5 * ej * np.ones(2 * nc)
    h += np.diag(off, 1) + np.diag(off, -1)
    return np.linalg.eigvalsh(h)


def omega01(ej, **kw):
    e = spectrum(ej, **kw)
    return e[1] - e[0]


def approx(ej, ec=1.0):
    return np.sqrt(8 * ec * ej) - ec


if __name__ == "__main__":
    print("ratio  exact01  exact12  approx  relerr")
    for r in (20, 50, 100, 200):
        e = spectrum(r)
        w01, w12 = e[1] - e[0], e[2] - e[1]
        a = approx(r)
        print(f"{r:4d} {w01:.15g} {w12:.15g} {a:.15g} {abs(w01 - a) / w01:.6e}")
    # E_C/2pi = 0.25 GHz, E_J/2pi = 12.5 GHz -> ratio 50
    print("w01(ratio 50) GHz:", omega01(50.0) * 0.25)
    print("cutoff 20 vs 30:", abs(omega01(50, nc=20) - omega01(50, nc=30)) / omega01(50, nc=30))
    print("ng 0 vs 0.5 rel:", abs(omega01(50, ng=0.0) - omega01(50, ng=0.5)) / omega01(50))
    beta, h = 100.0, 1e-6
    num = (omega01(50 * (1 + beta * h)) - omega01(50 * (1 - beta * h))) / (2 * h)
    ana = approx(50) / 2 * beta
    taylor = np.sqrt(8 * 50) / 2 * beta
    print(f"chi numeric {num:.12g} analytic {ana:.12g} taylor {taylor:.12g}")
    print(f"chi rel dev vs analytic {abs(num - ana) / abs(ana):.6e}")
