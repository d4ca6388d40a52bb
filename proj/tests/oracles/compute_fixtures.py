"""Independent high-precision oracle for the frozen test fixtures.

Evaluates the scoring formulas directly in mpmath (50 digits) and computes
expectations with adaptive quadrature, so nothing here shares a code path
with the C++ implementation. Run once; the printed values are pinned in
tests/fixtures.hpp.
"""
import numpy as np
from mpmath import mp, mpf, log, sqrt, quad

mp.dps = 50


def practical_log(p, correct, p_rand, p_max=mpf("0.99"), s_max=10):
    p, p_rand = mpf(p), mpf(p_rand)
    k = s_max / (log(p_max) - log(p_rand))
    if correct:
        return k * (log(p) - log(p_rand))
    return k * (log(1 - p) - log(1 - p_rand))


def kernel(r, s, t, beta, s_max):
    if r > 0:
        return -2 / (1 - beta) * r - r / (1 + r) * s
    if t > 0:
        return -2 / (1 - beta) * t - t / (1 + t) * s
    return 4 * s_max * r * t / s**2 * (1 - s / (1 + s))


def s_dist_raw(x, L, U, beta=mpf("0.9"), c=100, s_max=10):
    return kernel((L - x) / c, (U - L) / c, (x - U) / c, beta, s_max)


def s_mag_raw(x, L, U, beta=mpf("0.9"), c=log(100), s_max=10):
    return kernel(log(L / x) / c, log(U / L) / c, log(x / U) / c, beta, s_max)


S_MIN = mpf("-57.26893683880667")


def s_dist(x, L, U, delta=mpf("0.4"), **kw):
    return max(s_dist_raw(x, L - delta, U + delta, **kw), S_MIN)


def s_mag(x, L, U, delta=mpf("0.4"), **kw):
    return max(s_mag_raw(x, L * (1 - delta), U * (1 + delta), **kw), S_MIN)


def linear_interval(x, L, U, beta=mpf("0.9"), c=100, d=0):
    pen = (1 - beta) / 2 * (U - L) / c
    if x < L:
        pen += (L - x) / c
    elif x > U:
        pen += (x - U) / c
    return d - pen


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


print("# choice")
show("quadratic(0.7,0.3|0)", mpf("0.7") * (2 - mpf("0.7")) + mpf("0.3") * (0 - mpf("0.3")))
show("brier(0.7,0.3|0)", (1 - mpf("0.7")) ** 2 + mpf("0.3") ** 2)
show("log(0.5)", -log(mpf("0.5")))
show("practical_log(0.7,correct,binary)", practical_log("0.7", True, "0.5"))
show("10 ln1.4/ln1.98", 10 * log(mpf("1.4")) / log(mpf("1.98")))
show("practical_log(0.99,incorrect,binary)", practical_log("0.99", False, "0.5"))
show("practical_log(0.8,incorrect,n=4)", practical_log("0.8", False, "0.25"))
show("practical_log(0.8,correct,n=4)", practical_log("0.8", True, "0.25"))
show("quadratic zero crossing", 1 - sqrt(2) / 2)

print("# interval")
show("dist_raw(L=0,U=20,x=10)", s_dist_raw(mpf(10), mpf(0), mpf(20)))
show("dist_raw(L=50,U=70,x=30)", s_dist_raw(mpf(30), mpf(50), mpf(70)))
show("dist_final(L=10,U=100,x=10)", s_dist(mpf(10), mpf(10), mpf(100)))
show("mag_raw(L=10,U=1000,x=100)", s_mag_raw(mpf(100), mpf(10), mpf(1000)))
show("log_interval(L=10,U=1000,x=100,c=1)", -(mpf("0.05") * log(100)))
show("dist_final(L=U=x=50)", s_dist(mpf(50), mpf(50), mpf(50)))
show("mag_final(x=L=10,U=1000)", s_mag(mpf(10), mpf(10), mpf(1000)))

print("# expectations (adaptive quadrature, split at kinks)")
lo, hi = mpf(5), mpf(95)
f = lambda x: s_dist(x, lo, hi) / 100
show("E_unif[0,100] S_dist [5,95]", quad(f, [0, lo - mpf("0.4"), 50, hi + mpf("0.4"), 100]))
f = lambda x: linear_interval(x, lo, hi) / 100
show("E_unif[0,100] linear [5,95]", quad(f, [0, lo, hi, 100]))
a, b = mpf(1), mpf(10) ** 4
mlo, mhi = a * (b / a) ** mpf("0.05"), a * (b / a) ** mpf("0.95")
g = lambda u: s_mag(mp.e ** u, mlo, mhi) / log(b / a)
show("E_logunif[1,1e4] S_mag honest", quad(g, [0, log(mlo * mpf("0.6")), (log(mlo) + log(mhi)) / 2, log(mhi * mpf("1.4")), log(b)]))


# Brute-force incentive gap on a 201x201 grid, vectorised, with a finer
# quadrature (40,001 midpoints) than the library's 10,001.
def s_dist_np(x, L, U, beta=0.9, c=100.0, s_max=10.0, delta=0.4, s_min=-57.26893683880667):
    L = L - delta
    U = U + delta
    r, s, t = (L - x) / c, (U - L) / c, (x - U) / c
    out = np.where(r > 0, -2 / (1 - beta) * r - r / (1 + r) * s,
                   np.where(t > 0, -2 / (1 - beta) * t - t / (1 + t) * s,
                            4 * s_max * r * t / s**2 / (1 + s)))
    return np.maximum(out, s_min)


def s_mag_np(x, L, U, beta=0.9, c=np.log(100.0), s_max=10.0, delta=0.4, s_min=-57.26893683880667):
    L = L * (1 - delta)
    U = U * (1 + delta)
    r, s, t = np.log(L / x) / c, np.log(U / L) / c, np.log(x / U) / c
    out = np.where(r > 0, -2 / (1 - beta) * r - r / (1 + r) * s,
                   np.where(t > 0, -2 / (1 - beta) * t - t / (1 + t) * s,
                            4 * s_max * r * t / s**2 / (1 + s)))
    return np.maximum(out, s_min)


def brute(rule, nodes, grid, honest):
    best, arg = -np.inf, None
    for i, L in enumerate(grid):
        Us = grid[i:]
        vals = rule(nodes[None, :], L, Us[:, None]).mean(axis=1)
        j = int(np.argmax(vals))
        if vals[j] > best:
            best, arg = vals[j], (L, Us[j])
    h = rule(nodes, honest[0], honest[1]).mean()
    return best, arg, h


N = 40001
nodes = (np.arange(N) + 0.5) / N * 100.0
grid = np.linspace(-25.0, 125.0, 201)
best, arg, h = brute(s_dist_np, nodes, grid, (5.0, 95.0))
print(f"S_dist uniform[0,100]: best={best!r} at {arg}, honest={h!r}, gap={best - h!r}")

unodes = (np.arange(N) + 0.5) / N * np.log(1e4)
xnodes = np.exp(unodes)
lgrid = 10.0 ** np.linspace(-1.0, 5.0, 201)
best, arg, h = brute(s_mag_np, xnodes, lgrid, (10**0.2, 10**3.8))
print(f"S_mag loguniform[1,1e4]: best={best!r} at {arg}, honest={h!r}, gap={best - h!r}")
