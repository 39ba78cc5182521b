"""Conformable fractional boundary value problems.

Solves D^alpha x(t) + f(t, x(t)) = 0 on [0, 1] with x(0) = 0 and
x(1) = lambda * int_0^eta x(t) dt through its Green's kernel, and checks
sufficient conditions for positive solutions.
"""

__version__ = "0.1.0"
