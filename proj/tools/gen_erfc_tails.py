"""Large-y expansions of the regularized erfc-integral integrands.

With w = 1/y, sqrt(pi)*erfcx(y) ~ w * sum_n (-1)^n (2n-1)!! (w^2/2)^n.
Each regularized integrand r(y) ~ sum_k r_k w^k; the tail integral over
[Y, inf) is sum_k r_k Y^(1-k)/(k-1). Prints the r_k (k >= 2) per integrand.
"""
import sympy as sp

N = 16
w = sp.symbols("w", positive=True)
A = sum((-1) ** n * sp.factorial2(2 * n - 1) * (w**2 / 2) ** n for n in range(N + 1))
inv = sp.series(1 / A, w, 0, 2 * N).removeO()  # = w * y * 1/(sqrt(pi) erfcx)... scaled
# h(y) := 1/(sqrt(pi) erfcx(y)) = inv / w
h = sp.expand(inv / w)
y = 1 / w
poly_sub = {
    "I": (h * y, y**2 + sp.Rational(1, 2)),
    "I1": (h, y + sp.Rational(1, 2) * sum((-1) ** k * w ** (2 * k + 1) for k in range(N + 2))),
    "I2": (h * y**3, y**4 + y**2 / 2 - sp.Rational(1, 2)),
    "I3": (h * h, y**2 + 1),
    "I4": (h * h * y**2, y**4 + y**2 - sp.Rational(3, 4)),
}
for name, (expr, sub) in poly_sub.items():
    r = sp.expand(sp.series(sp.expand(expr - sub), w, 0, 2 * N - 6).removeO())
    for p in range(-6, 2):
        assert r.coeff(w, p) == 0, (name, p, r.coeff(w, p))
    coeffs = [r.coeff(w, k) for k in range(2, 2 * N - 6)]
    print(name, [str(c) for c in coeffs])
