"""Generate Maclaurin coefficients in eta for the Temme coefficients c0, c1, c2.

lambda(eta) is obtained by inverting eta^2/2 = lambda - 1 - ln(lambda) as an
exact rational power series. The c_k follow from
    c0 = 1/(lambda-1) - 1/eta
    c_k = (1/eta) c_{k-1}'(eta) + g_k/(lambda-1)
where g_k is fixed by requiring c_k to be regular at eta = 0. The g_k are
cross-checked against the closed-form Stirling coefficients.
"""
import sympy as sp

ORDER = 34  # highest power of eta kept in each c_k

eta, x = sp.symbols("eta x")


def lam_minus_one(order):
    # Solve d - log(1+d) = eta^2/2 with d = eta + a2 eta^2 + ...
    coeffs = [sp.Integer(0), sp.Integer(1)]
    for k in range(2, order + 1):
        a = sp.Symbol("a")
        d = sum(c * eta**i for i, c in enumerate(coeffs)) + a * eta**k
        expr = sp.series(d - sp.log(1 + d), eta, 0, k + 2).removeO()
        sol = sp.solve(sp.expand(expr).coeff(eta, k + 1), a)
        coeffs.append(sp.nsimplify(sol[0]))
    return sum(c * eta**i for i, c in enumerate(coeffs))


def main():
    n_terms = ORDER + 2 * 3 + 4
    d = lam_minus_one(n_terms)
    inv_d = sp.series(1 / d, eta, 0, n_terms - 2).removeO()
    c = [sp.expand(inv_d - 1 / eta)]
    gammas = [sp.Integer(1)]
    for k in range(1, 3):
        prev = c[-1]
        base = sp.expand(sp.diff(prev, eta) / eta)
        g = sp.Symbol("g")
        cand = sp.expand(base + g * inv_d)
        # residue must vanish; all negative powers must vanish
        res = cand.coeff(eta, -1)
        gk = sp.solve(res, g)[0]
        cand = sp.expand(cand.subs(g, gk))
        for p in range(-8, 0):
            assert sp.simplify(cand.coeff(eta, p)) == 0, (k, p)
        gammas.append(gk)
        c.append(cand)
    # closed form Stirling coefficients as a cross-check
    for j in (1, 2):
        expr = (sp.Rational(1, 2) * x**2 / (x - sp.log(1 + x))) ** (j + sp.Rational(1, 2))
        ser = sp.series(expr, x, 0, 2 * j + 1).removeO()
        val = (-1) ** j / (2**j * sp.factorial(j)) * ser.coeff(x, 2 * j) * sp.factorial(2 * j)
        assert sp.simplify(val - gammas[j]) == 0, (j, val, gammas[j])
    print("// gamma_k:", gammas)
    for k, ck in enumerate(c):
        print(f"// c{k}")
        print("{")
        for p in range(0, ORDER + 1):
            v = ck.coeff(eta, p)
            print(f"    {sp.N(v, 25)},")
        print("},")


if __name__ == "__main__":
    main()
