"""Model-free control of multivariable systems.

Algebraic derivative estimation, ultra-local models, intelligent PID control
and closed-loop simulation of a linear 2x2 plant and the three-tank benchmark.
"""

__version__ = "0.1.0"
