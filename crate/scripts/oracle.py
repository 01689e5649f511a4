"""High-precision reference values for the schedule constants and hand-run steps.

Run with `python3 scripts/oracle.py`. The Rust tests hard-code the printed values.
"""
from mpmath import mp, mpf, sqrt

mp.dps = 40


def theta_rec(n):
    t = [mpf(1)]
    for _ in range(n):
        t.append((1 + sqrt(1 + 4 * t[-1] ** 2)) / 2)
    return t


def theta_rat(n):
    return [mpf(k + 2) / 2 for k in range(n + 1)]


def alphas(th, n):
    a = [None] + [(1 - 1 / th[k + 2]) / 2 for k in range(1, n + 1)]
    a[0] = (2 * th[2] / (th[2] - 1)) / (1 / a[3] + 1 / a[2] ** 2 - 1 / a[1])
    return a


def table_row(th):
    a = alphas(th, 6)
    ta0 = (1 - 1 / th[2]) / 2
    floor = a[2] ** 2 * a[3] / (a[3] + a[2] ** 2)
    r0 = th[3] * (th[3] - 1) / th[2] / a[0] * floor
    return {
        "theta2": th[2],
        "theta3": th[3],
        "alpha0": a[0],
        "alpha1": a[1],
        "tilde_alpha0": ta0,
        "floor": floor,
        "growth0": a[0] / a[1] * th[2] / (th[3] * (th[3] - 1)),
        "r0": r0,
        "rate": 2 * (a[3] + a[2] ** 2) / (a[2] ** 2 * a[3]),
        "c_grad": r0 ** 2 * a[0] * (ta0 + a[0]) * th[2] ** 2,
        "c_l": 1 / (r0 * (ta0 + a[0]) * th[2]),
        "curv0": floor / a[1],
        # alpha_{k+1} times the k = 1 curvature coefficient: the weighted floor reached at k = 2
        "h1": a[1] ** 2 * a[2] / (a[2] + a[1] ** 2),
    }


def main():
    th = theta_rec(40)
    row = table_row(th)
    for name, v in row.items():
        print(f"adanag {name} = {mp.nstr(v, 30)}")
    srow = table_row(theta_rat(40))
    for name, v in srow.items():
        print(f"simple {name} = {mp.nstr(v, 30)}")

    a = alphas(th, 10)
    # generic curvature coefficient at k = 0 from (A, B)
    A0 = a[1] * th[3] * (th[3] - 1)
    B0 = row["tilde_alpha0"] * a[0] * th[2] ** 2
    B1 = a[1] ** 2 * th[3] ** 2
    generic = 1 / (A0 / B0 + (B1 + a[1] ** 2 * th[3] ** 2) / A0)
    print("adanag curv0 via (A,B) =", mp.nstr(generic, 30))

    # one AdaNAG step on f = x^2/2 from x0 = z0 = 1 with s0 = 0.4255
    s0 = mpf("0.4255")
    g = mpf(1)
    y1 = 1 - s0 * g
    z1 = 1 - s0 * a[0] * th[2] * g
    x1 = (1 - 1 / th[3]) * y1 + z1 / th[3]
    print("adanag x1 =", mp.nstr(x1, 30))
    vm1 = mpf(1) / 2 + s0 ** 2 * (row["tilde_alpha0"] + a[0]) * a[0] * th[2] ** 2 / 2
    print("adanag V_-1 =", mp.nstr(vm1, 30))
    print("5.5/theta2^2 =", mp.nstr(mpf("5.5") / th[2] ** 2, 30))

    for N in (3, 4, 10):
        eb = (1 / a[2] ** 2 + 1 / a[3] - 1 / alphas(th, N + 2)[N] ** 2) * alphas(th, N + 2)[N + 1] - 1
        print(f"epsilon_bar {N} =", mp.nstr(eb, 30))

    # sqrt schedule: alpha_1 * r_0^L
    tau = lambda k: 2 * sqrt(k + 3)
    al = mpf(1) / 2
    def Bk(k):
        if k == 0:
            tm1 = 2 * sqrt(2)
            return al ** 2 * tau(0) ** 2 * ((tau(0) - 1) ** 2 / (al * tm1 ** 2) - 1)
        return al ** 2 * tau(k) ** 2 * ((tau(k) - 1) ** 2 / (al * tau(k - 1) ** 2) - 1)
    Ak = lambda k: al * tau(k + 1) * (tau(k + 1) - 1)
    rl0 = 1 / (Ak(0) / Bk(0) + (Bk(1) + al ** 2 * tau(1) ** 2) / Ak(0))
    print("sqrt alpha1*r0L =", mp.nstr(al * rl0, 30))
    # f = x^2/2, L0 = L = 1: s_2 alpha_2 in exact arithmetic
    s1 = row["floor"] / a[1]
    s2 = min(a[1] / a[2] * s1, a[1] ** 2 / (a[2] + a[1] ** 2))
    print("adanag s2*alpha2 on x^2/2 =", mp.nstr(s2 * a[2], 30))
    print("acfgm 12/beta =", mp.nstr(12 / (1 - sqrt(6) / 3), 30))


if __name__ == "__main__":
    main()
