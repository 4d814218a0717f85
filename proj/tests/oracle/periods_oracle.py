"""Independent mpmath periods for data/s1.json (p roots -2..3, N = 2 + i x + x^2).

The base curve y^2 = p(x) has real branch points, so every cycle of the marking is an
integer combination of capsules around consecutive branch points. A capsule period is
twice the interval integral of the boundary value from above. w = sqrt(N) is single valued
on a strip around the real axis, so the same capsules give the periods of v = w dx / y.

A3 uses the loop around both zeros of N through the gap (0, 1): twice the integral of
w dx / y from -2i to i along the broken line through 1/2, divided by sqrt 2.

Prints the values frozen in tests/test_periods.cpp.
"""
import mpmath as mp

mp.mp.dps = 30
roots = [-2, -1, 0, 1, 2, 3]


def p(x):
    r = mp.mpf(1)
    for e in roots:
        r *= x - e
    return r


def N(x):
    return 2 + 1j * x + x * x


def capsule(f, a, b):
    def y(x):
        r = mp.mpc(1)
        for e in roots:
            r *= mp.sqrt(x - e) if x > e else 1j * mp.sqrt(e - x)
        return r

    return 2 * mp.quad(lambda x: f(x) / y(x), [a, b])


w_hub = mp.sqrt(N(mp.mpc("0.5", "0.15")))
w = lambda x: (lambda r: r if abs(r - w_hub) <= abs(r + w_hub) else -r)(mp.sqrt(N(x)))

for a, b in [(-2, -1), (-1, 0), (0, 1), (1, 2), (2, 3)]:
    vals = [capsule(f, a, b) for f in (lambda x: 1, lambda x: x, w)]
    print(f"capsule [{a},{b}]", "  ".join(mp.nstr(v, 17) for v in vals))


def along(z0, z1, wv, yv, pieces=200):
    total = mp.mpc(0)
    for k in range(pieces):
        a = z0 + (z1 - z0) * k / pieces
        b = z0 + (z1 - z0) * (k + 1) / pieces
        m = (a + b) / 2
        wm, ym = mp.sqrt(N(m)), mp.sqrt(p(m))
        wm = wm if abs(wm - wv) <= abs(wm + wv) else -wm
        ym = ym if abs(ym - yv) <= abs(ym + yv) else -ym

        def f(t, a=a, b=b, wm=wm, ym=ym):
            x = a + (b - a) * t
            ww, yy = mp.sqrt(N(x)), mp.sqrt(p(x))
            ww = ww if abs(ww - wm) <= abs(ww + wm) else -ww
            yy = yy if abs(yy - ym) <= abs(yy + ym) else -yy
            return ww / yy * (b - a)

        total += mp.quad(f, [0, 1])
        wv, yv = wm, ym
    return total, wv, yv


r1, r2, g = mp.mpc(0, -2), mp.mpc(0, 1), mp.mpc("0.5")
start = r1 + (g - r1) / 400
i1, wv, yv = along(r1, g, mp.sqrt(N(start)), mp.sqrt(p(start)))
i2, _, _ = along(g, r2, wv, yv)
A3 = 2 * (i1 + i2) / mp.sqrt(2)
print("H3", mp.nstr(A3 * A3 / (2 * mp.pi), 17))

# marking used by the library: a1 = [2,3], a2 = [-1,0], b1 = -[1,2], b2 = -[-2,-1]
cyc = {"a1": ((2, 3), 1), "a2": ((-1, 0), 1), "b1": ((1, 2), -1), "b2": ((-2, -1), -1)}
per = {k: [s * capsule(f, *ab) for f in (lambda x: 1, lambda x: x)] for k, (ab, s) in cyc.items()}
Am = mp.matrix([[per["a1"][0], per["a2"][0]], [per["a1"][1], per["a2"][1]]])
Bm = mp.matrix([[per["b1"][0], per["b2"][0]], [per["b1"][1], per["b2"][1]]])
Om = Am ** -1 * Bm
print("Omega", mp.nstr(Om[0, 0], 17), mp.nstr(Om[0, 1], 17), mp.nstr(Om[1, 1], 17))
