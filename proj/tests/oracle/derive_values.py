"""High-precision reference values frozen into the C++ tests.

Everything here is computed from the defining formulas with mpmath at 50 digits,
independently of the C++ implementation. Run: python3 derive_values.py
"""
import mpmath as mp

mp.mp.dps = 50


def h_of(eos, p, rho, gamma=mp.mpf(5) / 3):
    th = mp.mpf(p) / mp.mpf(rho)
    if eos == "ID":
        return 1 + gamma / (gamma - 1) * th
    if eos == "TM":
        return mp.mpf(5) / 2 * th + mp.sqrt(mp.mpf(9) / 4 * th**2 + 1)
    if eos == "IP":
        return 2 * th + mp.sqrt(4 * th**2 + 1)
    if eos == "RC":
        return 2 * (6 * th**2 + 4 * th + 1) / (3 * th + 2)
    raise ValueError(eos)


def cs2(eos, p, rho, gamma=mp.mpf(5) / 3):
    # c_s^2 = -rho h_rho / (h (rho h_p - 1))
    h = h_of(eos, p, rho, gamma)
    hp = mp.diff(lambda x: h_of(eos, x, rho, gamma), p)
    hr = mp.diff(lambda x: h_of(eos, p, x, gamma), rho)
    return -rho * hr / (h * (rho * hp - 1))


def prim_to_cons(eos, rho, v, p, gamma=mp.mpf(5) / 3):
    lor = 1 / mp.sqrt(1 - v * v)
    h = h_of(eos, p, rho, gamma)
    return rho * lor, rho * h * lor**2 * v, rho * h * lor**2 - p


def cons_to_prim(eos, D, m, E, gamma=mp.mpf(5) / 3):
    def energy_residual(p):
        pi = E + p
        v = m / pi
        rho = D * mp.sqrt(1 - v * v)
        lor2 = 1 / (1 - v * v)
        return rho * h_of(eos, p, rho, gamma) * lor2 - p - E

    lo, hi = mp.mpf(0), 2 * E
    for _ in range(400):
        mid = (lo + hi) / 2
        if energy_residual(mid) < 0:
            lo = mid
        else:
            hi = mid
    p = (lo + hi) / 2
    v = m / (E + p)
    return D * mp.sqrt(1 - v * v), v, p


def spectral(eos, rho, v, p, gamma=mp.mpf(5) / 3):
    c = mp.sqrt(cs2(eos, p, rho, gamma))
    return (abs(v) + c) / (1 + c * abs(v))


def flux(eos, D, m, E):
    rho, v, p = cons_to_prim(eos, D, m, E)
    return D * v, m * v + p, m


def show(label, *vals):
    print(label, ", ".join(mp.nstr(x, 20) for x in vals))


if __name__ == "__main__":
    g = mp.mpf(5) / 3
    show("ID cs2(1,1):", cs2("ID", 1, 1))
    show("RC cs2(1,1):", cs2("RC", 1, 1))
    show("TM h(10,0.1), cs2:", h_of("TM", 10, mp.mpf("0.1")), cs2("TM", 10, mp.mpf("0.1")))
    show("IP h(1,1), cs2:", h_of("IP", 1, 1), cs2("IP", 1, 1))
    show("TM cs2(1,1):", cs2("TM", 1, 1))
    show("ID cons(1,0.6,1):", *prim_to_cons("ID", 1, mp.mpf("0.6"), 1))
    show("RC cons(1,0.6,1):", *prim_to_cons("RC", 1, mp.mpf("0.6"), 1))
    show("TM cons(2,-0.9,0.3):", *prim_to_cons("TM", 2, mp.mpf("-0.9"), mp.mpf("0.3")))

    for name, u in [("ex1", ("0.001", "25.0", "25.001")),
                    ("ex2", ("0.26215012530349685", "42.10522585617847", "42.10705317285818")),
                    ("ex3", ("0.1", "50.0", "50.01"))]:
        D, m, E = (mp.mpf(x) for x in u)
        show("ID " + name + " prim:", *cons_to_prim("ID", D, m, E))

    for eos in ("TM", "IP", "RC"):
        show(eos + " prim of (1.5, 2.0, 4.0):", *cons_to_prim(eos, mp.mpf("1.5"), 2, 4))

    show("max_wave_speed ID(1,0.6,1):", spectral("ID", 1, mp.mpf("0.6"), 1))

    # Rusanov between (1,0,2.5) and (2,0,5) with ideal gas.
    fl = flux("ID", 1, 0, mp.mpf("2.5"))
    fr = flux("ID", 2, 0, 5)
    lam = max(spectral("ID", *cons_to_prim("ID", 1, 0, mp.mpf("2.5"))),
              spectral("ID", *cons_to_prim("ID", 2, 0, 5)))
    diff = (1, 0, mp.mpf("2.5"))
    show("rusanov:", *[(a + b) / 2 - lam / 2 * d for a, b, d in zip(fl, fr, diff)])

    # Gauss-Legendre on [0, 1].
    for n in (4, 5):
        xs, ws = mp.gauss_quadrature(n, "legendre") if hasattr(mp, "gauss_quadrature") else (None, None)
        if xs is None:
            roots = sorted(mp.polyroots(mp.taylor(lambda x: mp.legendre(n, x), 0, n)[::-1], maxsteps=200, extraprec=200))
            xs = roots
            ws = [2 / ((1 - x**2) * mp.diff(lambda t: mp.legendre(n, t), x) ** 2) for x in xs]
        show("GL%d nodes:" % n, *[(x + 1) / 2 for x in xs])
        show("GL%d weights:" % n, *[w / 2 for w in ws])

    # Right Radau correction function g_R = (P_{N+1} + P_N)/2 on [-1, 1], h_R(xi) = g_R(2 xi - 1).
    N = 2
    nodes = sorted(mp.polyroots(mp.taylor(lambda x: mp.legendre(N + 1, x), 0, N + 1)[::-1]))
    hp = [2 * mp.diff(lambda t: (mp.legendre(N + 1, t) + mp.legendre(N, t)) / 2, x) for x in nodes]
    show("Radau h_R' at N=2 nodes:", *hp)

    # RC identities.
    def T(h):
        s = mp.sqrt((3 * h + 8) ** 2 - 96)
        return 4 * (h - 1) / (s - 3 * h + 8)

    def R(h):
        return 2 - T(h) / h - mp.diff(T, h)

    show("R(1+), R(100), R(1e8):", R(mp.mpf(1) + mp.mpf("1e-30")), R(100), R(mp.mpf("1e8")))
    show("dmr x_s(t=0):", 1 / mp.sqrt(3) + mp.mpf(1) / 6)
    show("order 1.51842e-5 -> 1.56589e-7:", mp.log(mp.mpf("1.51842e-5") / mp.mpf("1.56589e-7"), 2))
