"""Manufactured-solution fields and forcing terms.

Generated by tools/gen_mms_forcing.py; do not edit by hand.
"""

import numpy
import numpy as np


def _unpack(case):
    p = case.params
    return (p.alpha, p.gamma, p.gamma_tilde, p.epsilon,
            case.a, case.b, case.c)



def rho_star(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    _out0 = zero + a*numpy.sin(2*numpy.pi*x) + 1
    return _out0


def drho_dt_star(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    return zero


def u_star(x, t, case, dim):
    return _u_rows(x, t, case)


def du_dt_star(x, t, case, dim):
    return _du_rows(x, t, case)



def _u_rows(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = ((1/2)*numpy.sin(t*x0) + 1)*numpy.sin(x*x0)
    _out0 = zero + b*x1
    _out1 = zero + c*x1
    return np.stack([_out0, _out1])


def _du_rows(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = numpy.pi*numpy.sin(x*x0)*numpy.cos(t*x0)
    _out0 = zero + b*x1
    _out1 = zero + c*x1
    return np.stack([_out0, _out1])


def _forcing_rho_A2D(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = x*x0
    x2 = numpy.sin(x1)
    x3 = a*x2
    x4 = numpy.cos(x1)
    x5 = 16*b*x4*(numpy.sin(t*x0) + 2)
    x6 = x3 + 1
    x7 = x6**(-1.0)
    x8 = 8*x7
    x9 = x6**al
    x10 = al*x9
    x11 = ep**(1/3)
    x12 = x6**gt
    x13 = gt*x12
    x14 = x10*x8 + x11*(x13*x8 + 7/x6**(1/8))
    x15 = a*x4**2
    x16 = x6**(-2.0)
    x17 = 64*x16
    _out0 = zero + (1/16)*numpy.pi*(numpy.pi*a*ep*(4*x14*x15*x7 + 8*x14*x2 - x15*(64*al**2*x16*x9 - x10*x17 - x11*(-gt**2*x12*x17 + x13*x17 + 7/x6**(9/8)))) + x3*x5 + x5*x6)
    return _out0


def _forcing_rho_B3D(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = x*x0
    x2 = numpy.sin(x1)
    x3 = a*x2
    x4 = numpy.cos(x1)
    x5 = 16*b*x4*(numpy.sin(t*x0) + 2)
    x6 = x3 + 1
    x7 = x6**(-1.0)
    x8 = 8*x7
    x9 = x6**al
    x10 = al*x9
    x11 = ep**(1/3)
    x12 = x6**gt
    x13 = gt*x12
    x14 = x10*x8 + x11*(x13*x8 + 7/x6**(1/8))
    x15 = a*x4**2
    x16 = x6**(-2.0)
    x17 = 64*x16
    _out0 = zero + (1/16)*numpy.pi*(numpy.pi*a*ep*(4*x14*x15*x7 + 8*x14*x2 - x15*(64*al**2*x16*x9 - x10*x17 - x11*(-gt**2*x12*x17 + x13*x17 + 7/x6**(9/8)))) + x3*x5 + x5*x6)
    return _out0


def _forcing_rho_C3D(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = x*x0
    x2 = numpy.sin(x1)
    x3 = a*x2
    x4 = x3 + 1
    x5 = numpy.cos(x1)
    x6 = numpy.pi*b*x5*(numpy.sin(t*x0) + 2)
    x7 = x5**2/x4
    x8 = ep*(a*x7 + 2*x2)
    _out0 = zero + 3*numpy.pi**4*a**3*x7*x8 + numpy.pi**2*a*x8 - ep/x4**50 + x3*x6 + x4*x6
    return _out0


def _forcing_u_A2D_1d(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = t*x0
    x2 = x*x0
    x3 = numpy.sin(x2)
    x4 = b*x3
    x5 = numpy.sin(x1) + 2
    x6 = numpy.cos(x2)
    x7 = numpy.pi*x6
    x8 = a*x3 + 1
    x9 = x8**(-1.0)
    x10 = ep**(-2.0)
    x11 = ep**(-1.0)
    x12 = numpy.log(x8)
    x13 = x8**al
    x14 = ep**(1/3)
    x15 = x8**gt
    x16 = x14*(x15 + x8**(7/8))
    x17 = x13 + x16
    x18 = numpy.pi**2*b*x5
    x19 = 8*x13
    x20 = gt*x15
    x21 = al*x19*x9 + x14*(8*x20*x9 + 7/x8**(1/8))
    x22 = a*x6**2
    x23 = 8*x21*x22
    x24 = 8*x16 + x19 - x21*x8
    x25 = x8**(-2.0)
    x26 = 64*x25
    x27 = x13*x26
    x28 = x22*x8*(al**2*x27 - al*x27 + x14*(64*gt**2*x15*x25 - x20*x26 - 7/x8**(9/8)))
    _out0 = zero + (1/2)*b**2*x3*x5**2*x7 + numpy.pi*x4*numpy.cos(x1) + (1/32)*x9*(64*a*ga*x7*x8**ga*x9 + numpy.sqrt(ep)*x18*(64*x17*x3 - x23 - 8*x24*x3 - x28) + 64*x17*x18*x3 - x18*x23 - 8*x18*x24*x3 - x18*x28 + 16*x4*x5*(numpy.exp(x10*(-x11 + x12)) + numpy.exp(-x10*(x11 + x12))))
    return np.stack([_out0, zero])


def _forcing_u_A2D_2d(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = t*x0
    x2 = x*x0
    x3 = numpy.sin(x2)
    x4 = numpy.pi*x3
    x5 = x4*numpy.cos(x1)
    x6 = numpy.sin(x1) + 2
    x7 = numpy.cos(x2)
    x8 = (1/2)*x4*x6**2*x7
    x9 = a*x3 + 1
    x10 = x9**(-1.0)
    x11 = ep**(-2.0)
    x12 = ep**(-1.0)
    x13 = numpy.log(x9)
    x14 = x3*(numpy.exp(x11*(-x12 + x13)) + numpy.exp(-x11*(x12 + x13)))
    x15 = b*x6
    x16 = x9**al
    x17 = ep**(1/3)
    x18 = x9**gt
    x19 = x17*(x18 + x9**(7/8))
    x20 = x16 + x19
    x21 = numpy.pi**2
    x22 = x15*x21
    x23 = 8*x16
    x24 = gt*x18
    x25 = al*x10*x23 + x17*(8*x10*x24 + 7/x9**(1/8))
    x26 = a*x7**2
    x27 = x25*x26
    x28 = 8*x27
    x29 = 8*x19 + x23 - x25*x9
    x30 = 8*x3
    x31 = x9**(-2.0)
    x32 = 64*x31
    x33 = x16*x32
    x34 = x26*x9*(al**2*x33 - al*x33 + x17*(64*gt**2*x18*x31 - x24*x32 - 7/x9**(9/8)))
    x35 = numpy.sqrt(ep)*x21
    _out0 = zero + b**2*x8 + b*x5 + (1/32)*x10*(64*numpy.pi*a*ga*x10*x7*x9**ga + 16*x14*x15 + x15*x35*(64*x20*x3 - x28 - 8*x29*x3 - x34) + 64*x20*x22*x3 - x22*x28 - x22*x29*x30 - x22*x34)
    _out1 = zero + c*(b*x8 + (1/8)*x10*x6*(4*x14 + x20*x21*x30 - x21*x27 + 2*x35*(8*x20*x3 - x27)) + x5)
    return np.stack([_out0, _out1])


def _forcing_u_B3D_1d(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = t*x0
    x2 = x*x0
    x3 = numpy.sin(x2)
    x4 = b*x3
    x5 = numpy.sin(x1) + 2
    x6 = numpy.cos(x2)
    x7 = a*x3 + 1
    x8 = x7**(-1.0)
    x9 = ep**(-2.0)
    x10 = ep**(-1.0)
    x11 = numpy.log(x7)
    x12 = numpy.pi**2
    x13 = x7**al
    x14 = ep**(1/3)
    x15 = x7**gt
    x16 = x14*(x15 + x7**(7/8))
    x17 = 8*x13
    x18 = gt*x15
    x19 = al*x17*x8 + x14*(8*x18*x8 + 7/x7**(1/8))
    x20 = a*b*x12*x5*x6**2
    x21 = x7**(-2.0)
    x22 = 64*x21
    x23 = x13*x22
    _out0 = zero + (1/2)*numpy.pi*b**2*x3*x5**2*x6 + numpy.pi*x4*numpy.cos(x1) + (1/32)*x8*(64*numpy.pi*a*ga*x6*x7**ga*x8 + 64*b*x12*x3*x5*(x13 + x16) + 16*b*x3*x5*(numpy.exp(x9*(-x10 + x11)) + numpy.exp(-x9*(x10 + x11))) - 8*x12*x4*x5*(8*x16 + x17 - x19*x7) - 8*x19*x20 - x20*x7*(al**2*x23 - al*x23 + x14*(64*gt**2*x15*x21 - x18*x22 - 7/x7**(9/8))))
    return np.stack([_out0, zero])


def _forcing_u_B3D_2d(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = t*x0
    x2 = x*x0
    x3 = numpy.sin(x2)
    x4 = numpy.pi*x3
    x5 = x4*numpy.cos(x1)
    x6 = numpy.sin(x1) + 2
    x7 = numpy.cos(x2)
    x8 = (1/2)*x4*x6**2*x7
    x9 = a*x3 + 1
    x10 = x9**(-1.0)
    x11 = ep**(-2.0)
    x12 = ep**(-1.0)
    x13 = numpy.log(x9)
    x14 = numpy.exp(x11*(-x12 + x13)) + numpy.exp(-x11*(x12 + x13))
    x15 = numpy.pi**2
    x16 = x9**al
    x17 = ep**(1/3)
    x18 = x9**gt
    x19 = x17*(x18 + x9**(7/8))
    x20 = x16 + x19
    x21 = 8*x15
    x22 = 8*x16
    x23 = gt*x18
    x24 = al*x10*x22 + x17*(8*x10*x23 + 7/x9**(1/8))
    x25 = x7**2
    x26 = a*x24*x25
    x27 = b*x6
    x28 = x21*x3
    x29 = x9**(-2.0)
    x30 = 64*x29
    x31 = x16*x30
    _out0 = zero + b**2*x8 + b*x5 + (1/32)*x10*(64*numpy.pi*a*ga*x10*x7*x9**ga - a*x15*x25*x27*x9*(al**2*x31 - al*x31 + x17*(64*gt**2*x18*x29 - x23*x30 - 7/x9**(9/8))) + 16*b*x14*x3*x6 + 64*b*x15*x20*x3*x6 - x21*x26*x27 - x27*x28*(8*x19 + x22 - x24*x9))
    _out1 = zero + c*(b*x8 + (1/4)*x10*x6*(2*x14*x3 - x15*x26 + x20*x28) + x5)
    return np.stack([_out0, _out1])


def _forcing_u_C3D_1d(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = t*x0
    x2 = x*x0
    x3 = numpy.sin(x2)
    x4 = b*x3
    x5 = numpy.sin(x1)
    x6 = x5 + 2
    x7 = numpy.cos(x2)
    x8 = numpy.pi*x7
    x9 = a*x3 + 1
    x10 = x9**(-1.0)
    x11 = a*x7**2
    x12 = b*x6
    x13 = 16*numpy.pi**2*x12
    x14 = x3*x9
    _out0 = zero + (1/2)*b**2*x3*x6**2*x8 + (1/8)*x10*(-8*numpy.pi**4*a**3*ep*x10*x12*x7**4 + 16*a*ga*x10*x8*x9**ga + b**3*ep*x3**3*x6**3*x9*abs(b)*abs(x3)*abs((1/2)*x5 + 1) - numpy.sqrt(ep)*x13*(x11 - x14) + 4*ep*x4*x6/x9**50 - x11*x13 + x13*x14) + numpy.pi*x4*numpy.cos(x1)
    return np.stack([_out0, zero])


def _forcing_u_C3D_2d(x, t, case):
    al, ga, gt, ep, a, b, c = _unpack(case)
    zero = np.zeros_like(x)
    x0 = 2*numpy.pi
    x1 = t*x0
    x2 = x*x0
    x3 = numpy.sin(x2)
    x4 = numpy.pi*x3
    x5 = x4*numpy.cos(x1)
    x6 = b**2
    x7 = numpy.sin(x1) + 2
    x8 = x7**2
    x9 = numpy.cos(x2)
    x10 = (1/2)*x4*x8*x9
    x11 = a*x9**2
    x12 = numpy.pi**2
    x13 = 32*x12
    x14 = b*x7
    x15 = x13*x14
    x16 = a*x3 + 1
    x17 = x16*x3
    x18 = 8*ep*x3/x16**50
    x19 = x16**(-1.0)
    x20 = 16*numpy.pi**4*a**3*ep*x19*x9**4
    x21 = numpy.sqrt(ep)*x13*(x11 - x17)
    x22 = ep*x16*x3**3*(c**2 + x6)**(3/2)*abs(x3)*abs(x7)
    x23 = (1/16)*x19
    x24 = 16*x12
    _out0 = zero + b*x5 + x10*x6 + x23*(32*numpy.pi*a*ga*x16**ga*x19*x9 + b*x22*x7**3 - x11*x15 + x14*x18 - x14*x20 - x14*x21 + x15*x17)
    _out1 = zero + c*(b*x10 - x23*x7*(x11*x24 - x17*x24 - x18 + x20 + x21 - x22*x8) + x5)
    return np.stack([_out0, _out1])


_RHO_DISPATCH = {
    "A2D": _forcing_rho_A2D,
    "B3D": _forcing_rho_B3D,
    "C3D_alpha1": _forcing_rho_C3D,
}

_U_DISPATCH = {
    ("A2D", 1): _forcing_u_A2D_1d,
    ("A2D", 2): _forcing_u_A2D_2d,
    ("B3D", 1): _forcing_u_B3D_1d,
    ("B3D", 2): _forcing_u_B3D_2d,
    ("C3D_alpha1", 1): _forcing_u_C3D_1d,
    ("C3D_alpha1", 2): _forcing_u_C3D_2d,
}


def forcing_rho(x, t, case, dim):
    return _RHO_DISPATCH[case.variant.value](x, t, case)


def forcing_u(x, t, case, dim):
    return _U_DISPATCH[(case.variant.value, dim)](x, t, case)
