"""Independent evaluation of the frozen numbers used in the tests.

The rate is recomputed here from scratch with Decimal arithmetic (no code
shared with the package) and compared with the library value.
"""

from decimal import Decimal, getcontext

from hybridkd.linkrates import COMMERCIAL, KYBER1024_PC, SOTA, kem_rate, qkd_rate

getcontext().prec = 40


def h2(p: Decimal) -> Decimal:
    if p in (0, 1):
        return Decimal(0)
    two = Decimal(2)
    return -(p * p.ln() + (1 - p) * (1 - p).ln()) / two.ln()


def rate(cr, pz, pmu, eta_det, pd, ez, ex, f, mu, L, alpha=Decimal("0.19"), e0=Decimal("0.5")):
    eta = eta_det * Decimal(10) ** (-alpha * L / 10)
    Q = 1 - (1 - 2 * pd) * (-mu * eta).exp()
    Y0 = 2 * pd
    Y1 = 1 - (1 - 2 * pd) * (1 - eta)
    q1 = Y1 * mu * (-mu).exp() / Q
    e1 = ex + (e0 - ex) * Y0 / Y1
    r = -f * h2(ez) + q1 * (1 - h2(e1))
    return max(Decimal(0), cr * pz * pz * pmu * Q * r)


D = Decimal
COMM = (D("1e9"), D("0.9668") * (1 - D(1) / 128), D("0.9697"), D("0.31"), D("1e-6"), D("0.03"), D("0.03"), D("1.3"), D("0.4"))
SOTA_D = (D("2.5e9"), D("0.955"), D("0.88"), D("0.56"), D("1e-8"), D("0.005"), D("0.04"), D("1.04"), D("0.54"))


def main() -> None:
    print(f"H(0.03)               = {h2(D('0.03')):.8f}")
    for L in (0, 10, 50, 100, 200, 240):
        ref = rate(*COMM, D(L))
        lib = qkd_rate(COMMERCIAL, L)
        print(f"commercial {L:>3} km     ref {float(ref):.8e}  lib {lib:.8e}")
    for L in (10, 100, 300):
        print(f"sota       {L:>3} km     ref {float(rate(*SOTA_D, D(L))):.8e}  lib {qkd_rate(SOTA, L):.8e}")
    ref_kem = D(256) * D("3e9") / D(73544 + 97324 + 79128)
    print(f"kem                   ref {float(ref_kem):.8e}  lib {kem_rate(KYBER1024_PC):.8e}")
    last = max(L for L in range(0, 300) if rate(*COMM, D(L)) > ref_kem)
    zero = min(L for L in range(0, 400) if rate(*COMM, D(L)) == 0)
    print(f"last km with QKD > KEM: {last}; first km with zero rate: {zero}")


if __name__ == "__main__":
    main()
