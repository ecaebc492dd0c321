"""High-precision reference values frozen into the unit tests."""
from mpmath import mp, mpf, log, exp, sin, cos, pi, quad, nsum, inf, sqrt, e

mp.dps = 40


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


show("upsilon_bound(3, S=1.5, kappa=0.55)", mpf("1.5") ** 3 * mpf(3) ** (-3 * mpf("0.55")))
show("m_rule value n=e^100 kappa=1", (mpf(1) / 8) * 100 / log(100 - log(4)))
n = mpf(10) ** 6
show("m_rule value n=1e6 kappa=0.55", (1 / (8 * mpf("0.55"))) * log(n) / log(log(n / 4)))
cap = 2 * exp(-mpf(11) / 2)
show("c_kappa cap d=2 kappa=1 nu_est=1", cap)
show("omega m=2 S=1 kappa=1", cap * 2)
show("int_{-2}^{2} t^6", mpf(2) * 2 ** 7 / 7)
show("f_kappa(1) d=2 kappa=1", nsum(lambda k: (k + 2) ** (-k), [1, inf]))
show("psi_sum x=1 d=1 kappa=1", nsum(lambda m: m * m ** (-m), [1, inf]))
show("int exp(-1/(1-x^2))", quad(lambda x: exp(-1 / (1 - x * x)), [-1, 0, 1]))
show("c_u", 1 / quad(lambda x: exp(-1 / (1 - x * x)), [-1, 0, 1]))
show("sigma c=1 ratio=e kb=1", exp(-1))
show("h ratio kappa=0.5 x=1", exp(mpf(-1) / 2))
t = mpf("0.3")
show("g cf at 0.3 c=1", (1 - t) * cos(pi * t) + sin(pi * t) / pi)
show("smoothness triangular beta=0.5 radius=2",
     2 * quad(lambda s: (1 - s) ** 2 * sqrt(1 + s * s), [0, 1]))
show("uniform(0,1) cf re at 1", sin(1))
show("uniform(0,1) cf im at 1", 1 - cos(1))


# 1 + i c t inverted over [-w, w]: (1/2pi) int exp(-itx)(1 + i c t) dt
def inv(c, w, x):
    re = quad(lambda s: cos(s * x) + c * s * sin(s * x), [-w, w]) / (2 * pi)
    return re


show("invert 1+0.3it omega=2 x=0.7", inv(mpf("0.3"), 2, mpf("0.7")))
show("corr repeated U(-1,1) gaussian sd 0.5", (mpf(1) / 3) / (mpf(1) / 3 + mpf("0.25")))
