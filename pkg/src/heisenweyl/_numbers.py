"""Scalar helpers shared by the exact (Gaussian-rational) and floating paths."""

from fractions import Fraction
from numbers import Complex

from sympy.polys.domains import QQ_I

GaussianRational = type(QQ_I(0, 0))


def is_exact(z):
    return isinstance(z, (int, Fraction, GaussianRational))


def exact(z):
    """Convert ``z`` to an element of Q(i).

    Floats are converted through their exact binary value, so no rounding
    is introduced here.
    """
    if isinstance(z, GaussianRational):
        return z
    if isinstance(z, (int, Fraction)):
        return QQ_I(Fraction(z), 0)
    if isinstance(z, Complex):
        z = complex(z)
        return QQ_I(Fraction(z.real), Fraction(z.imag))
    raise TypeError(f"cannot convert {z!r} to a Gaussian rational")


def conj(z):
    if isinstance(z, GaussianRational):
        return QQ_I(z.x, -z.y)
    return z.conjugate()


def to_complex(z):
    if isinstance(z, GaussianRational):
        return complex(float(z.x), float(z.y))
    return complex(z)


def is_zero(z):
    return not z


def scalar_like(z, ref):
    """Coerce a rational weight ``z`` into the coefficient family of ``ref``."""
    if isinstance(ref, GaussianRational):
        return exact(z)
    if isinstance(ref, Fraction) or isinstance(ref, int):
        return z
    return float(z) if isinstance(z, Fraction) else z


def inner(u, v):
    """``<u|v> = sum u_i conj(v_i)``: linear in ``u``, conjugate-linear in ``v``."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} != {len(v)}")
    total = 0
    for ui, vi in zip(u, v):
        total = total + ui * conj(vi)
    return total
