"""Exact derivation of the frozen fixture values used by the C++ tests.

Run with `python3 tests/oracles/derive_fixtures.py`; the printed values are
copied into tests/frozen_fixtures.hpp. Everything here is computed from the
bracket tables written out below, independently of the C++ library.
"""

import sympy as sp

x1, x2, x3 = sp.symbols("x1 x2 x3", real=True)
X = sp.Matrix([x1, x2, x3])


def so3(a, b, c):
    # [E1,E2] = a E3, [E1,E3] = -b E2, [E2,E3] = c E1
    return {(0, 1): sp.Matrix([0, 0, a]), (0, 2): sp.Matrix([0, -b, 0]), (1, 2): sp.Matrix([c, 0, 0])}


def sl2(a, b, c):
    # [E1,E2] = a E3, [E1,E3] = b E2, [E2,E3] = c E1
    return {(0, 1): sp.Matrix([0, 0, a]), (0, 2): sp.Matrix([0, b, 0]), (1, 2): sp.Matrix([c, 0, 0])}


def heisenberg():
    return {(0, 1): sp.Matrix([0, 0, 1])}


def bracket_basis(table, i, j):
    if i == j:
        return sp.zeros(3, 1)
    if (i, j) in table:
        return table[(i, j)]
    if (j, i) in table:
        return -table[(j, i)]
    return sp.zeros(3, 1)


def bracket(table, u, v):
    out = sp.zeros(3, 1)
    for i in range(3):
        for j in range(3):
            out += u[i] * v[j] * bracket_basis(table, i, j)
    return out


def killing(table):
    def ad(i):
        return sp.Matrix.hstack(*[bracket_basis(table, i, j) for j in range(3)])
    return sp.Matrix(3, 3, lambda i, j: (ad(i) * ad(j)).trace())


def rays(table, V):
    """Unit directions x with <x + V, [x, E_i]> = 0 for all i (alpha = I, |x| = 1)."""
    E = sp.eye(3)
    eqs = [(X + sp.Matrix(V)).dot(bracket(table, X, E[:, i])) for i in range(3)]
    eqs.append(X.dot(X) - 1)
    return sp.solve(eqs, [x1, x2, x3], dict=True)


def show(name, table, V):
    print(f"== {name}")
    print("  Killing:", killing(table).tolist())
    for s in rays(table, V):
        print("  ray:", [sp.nsimplify(s[v]) for v in (x1, x2, x3)])


a, b, c = sp.symbols("a b c", positive=True)
print("so3 Killing:", sp.simplify(killing(so3(a, b, c))).tolist())
print("sl2 Killing:", sp.simplify(killing(sl2(a, b, c))).tolist())

half = sp.Rational(1, 2)
show("so3(1,2,1), V=e1/2", so3(1, 2, 1), [half, 0, 0])
show("so3(2,2,3), V=e1/2", so3(2, 2, 3), [half, 0, 0])
show("sl2(1,1,1), V=e1/2", sl2(1, 1, 1), [half, 0, 0])
print("== so3(1/2,1/2,3) Killing:", killing(so3(half, half, 3)).tolist())

# Support points of the Randers indicatrix with tangent plane parallel to
# span(E2, E3): on the E1 axis, |t| + t/2 = 1 on each side.
t = sp.symbols("t", real=True)
print("== Heisenberg support points, V=e1/2")
print("  n1:", sp.solve(sp.Eq(t + t / 2, 1), t), " n2:", sp.solve(sp.Eq(-t + t / 2, 1), t))
