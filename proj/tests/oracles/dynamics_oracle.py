"""Full Hilbert-space oracle for the qubit-register / resonator dynamics.

Builds N qubits (x) a truncated Fock space as one dense matrix and applies
scipy.linalg.expm directly; no branch decomposition, no closed-form
displacement. Prints the values frozen into the C++ tests and the
acceptance suite.

Conventions: |0> has sigma_z = +1, J_z = sum sigma_z / 2,
X = (a + a^dag)/sqrt 2, P = i(a^dag - a)/sqrt 2.
"""
import numpy as np
from scipy.linalg import expm

CUT = 60


def fock_ops(c=CUT):
    a = np.diag(np.sqrt(np.arange(1, c)), 1).astype(complex)
    x = (a + a.conj().T) / np.sqrt(2)
    p = 1j * (a.conj().T - a) / np.sqrt(2)
    return a, x, p


def coherent(x0, p0, c=CUT):
    alpha = (x0 + 1j * p0) / np.sqrt(2)
    _, _, _ = fock_ops(c)
    v = np.zeros(c, complex)
    v[0] = 1.0
    for n in range(1, c):
        v[n] = v[n - 1] * alpha / np.sqrt(n)
    v *= np.exp(-abs(alpha) ** 2 / 2)
    return v / np.linalg.norm(v)


def kron_all(ops):
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], complex)
SY = np.array([[0, -1j], [1j, 0]])
I2 = np.eye(2, dtype=complex)


def jz(n):
    return sum(kron_all([SZ if k == j else I2 for k in range(n)]) for j in range(n)) / 2


def collective(u, n):
    return kron_all([u] * n)


def ramsey(n, gtau, x0=0.0, p0=0.0):
    _, x, p = fock_ops()
    dq = 2 ** n
    init_pulse = expm(-1j * np.pi / 4 * SY)
    read_pulse = expm(-1j * np.pi / 4 * SX)
    zero = np.zeros(dq, complex)
    zero[0] = 1.0
    reg = collective(init_pulse, n) @ zero
    psi = np.kron(reg, coherent(x0, p0))
    u = expm(-1j * 2 * gtau * np.kron(jz(n), p))
    psi = u @ psi
    m = psi.reshape(dq, CUT)
    rho = m @ m.conj().T
    phase = np.angle(rho[dq - 1, 0])
    r = collective(read_pulse, n)
    rho_out = r @ rho @ r.conj().T
    jz_final = np.real(np.trace(jz(n) @ rho_out))
    vis = abs(np.vdot(m[0] / np.linalg.norm(m[0]), m[dq - 1] / np.linalg.norm(m[dq - 1])))
    return jz_final, phase, vis


def qfi_fd(reg, res, c1tau, n, h=1e-4):
    """Central-difference QFI of exp(-i eps c1tau J_z (x) P)|psi0>."""
    _, _, p = fock_ops()
    g = np.kron(jz(n), p)
    psi0 = np.kron(reg, res)

    def f(hh):
        up = expm(-1j * hh * c1tau * g) @ psi0
        dn = expm(1j * hh * c1tau * g) @ psi0
        d = (up - dn) / (2 * hh)
        return 4 * (np.vdot(d, d).real - abs(np.vdot(psi0, d)) ** 2)

    return (4 * f(h / 2) - f(h)) / 3


def ghz(n):
    v = np.zeros(2 ** n, complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


if __name__ == "__main__":
    np.set_printoptions(precision=16)
    # Conditional displacement exp(-i theta P) on a coherent state.
    _, x, p = fock_ops()
    psi = coherent(0.3, -0.4)
    theta = 1.1
    out = expm(-1j * theta * p) @ psi
    print("mean X after theta=1.1 from x0=0.3:", np.vdot(out, x @ out).real)
    d = expm(-1j * 0.7 * p)
    print("<3|exp(-i 0.7 P)|1> =", d[3, 1])
    print("<1|exp(-i 0.7 P)|3> =", d[1, 3])

    for gt in (0.01, 0.05, 0.1):
        jzf, ph, vis = ramsey(2, gt)
        print(f"ramsey N=2 vac gtau={gt}: jz_final={jzf:.15e} phase={ph:.15e} vis={vis:.15e}")
    for p0 in (0.1, 0.2, 0.3):
        jzf, ph, vis = ramsey(2, 0.05, 0.0, p0)
        print(f"ramsey N=2 gtau=0.05 p0={p0}: jz_final={jzf:.15e} phase={ph:.15e} vis={vis:.15e}")

    vac = coherent(0.0, 0.0)
    print("qfi GHZ(2) vac c=1:", qfi_fd(ghz(2), vac, 1.0, 2))
    print("qfi GHZ(2) coherent(0.3,0.4) c=1:", qfi_fd(ghz(2), coherent(0.3, 0.4), 1.0, 2))
    plus2 = collective(expm(-1j * np.pi / 4 * SY), 2) @ np.array([1, 0, 0, 0], complex)
    print("qfi |+>^2 vac c=1:", qfi_fd(plus2, vac, 1.0, 2))
    zeros3 = np.zeros(8, complex)
    zeros3[0] = 1
    print("qfi |000> vac c=1:", qfi_fd(zeros3, vac, 1.0, 3))
