#!/usr/bin/env python3
"""Independent low-order normalization oracle for 2x2 frame jets.

Brute-force construction of the normal frame for a curve span{l(t)} in the
plane with sigma(e, f) = 1, under the conventions of the main library:
pairing +1 between the mirror/original slots, structure constant +1 in the
lower slot, degree-0 part of the structure function forced to zero, and the
negated form for curves with a nondecreasing velocity.

The normal frame Gamma = [v | w] must satisfy
    v = c(t) l(t),  w = v',  sigma_eff(v, v') = 1,  v'' = kappa(t) v,
so kappa is read off directly. Prints the curvature jet of the oscillator
curve l = f + tan(t) e and of the circle curve l = cos(t) e + sin(t) f.
"""
import sympy as sp

t = sp.symbols("t")


def curvature_jet(l_e, l_f, order=6):
    # sigma(x, y) for x = x_e e + x_f f: x_e*y_f - x_f*y_e
    def sig(xe, xf, ye, yf):
        return sp.simplify(xe * yf - xf * ye)

    le_d, lf_d = sp.diff(l_e, t), sp.diff(l_f, t)
    s0 = sig(le_d, lf_d, l_e, l_f)  # velocity form value on l
    s0_at0 = s0.subs(t, 0)
    flip = -1 if s0_at0 > 0 else 1  # nondecreasing curves run under -sigma
    pair = flip * sig(l_e, l_f, le_d, lf_d)  # sigma_eff(l, l')
    c = 1 / sp.sqrt(pair)
    v_e, v_f = sp.simplify(c * l_e), sp.simplify(c * l_f)
    kappa = sp.simplify(sp.diff(v_e, t, 2) / v_e)
    kappa_other = sp.simplify(sp.diff(v_f, t, 2) / v_f)
    assert sp.simplify(kappa - kappa_other) == 0, "v'' not proportional to v"
    series = sp.series(kappa, t, 0, order).removeO()
    return sp.expand(series)


print("oscillator span{f + tan(t) e}:", curvature_jet(sp.tan(t), sp.Integer(1)))
print("circle     span{cos(t) e + sin(t) f}:", curvature_jet(sp.cos(t), sp.sin(t)))
