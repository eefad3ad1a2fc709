"""Center-manifold constructions for the steady gravity-capillary Whitham equation.

Symbols and kernels of the nonlocal operator, bifurcation data, center-manifold
and normal-form coefficients, explicit generalized and modulated solitary-wave
profiles, and a pseudo-spectral residual / Newton layer to check them.
"""

from .symbols import SymbolParams, TaylorData, m_eval, l_eval, l_deriv, taylor_data
from .dispersion import BifurcationPoint, RootReport, solve_k0, c2_point, roots_in_strip

__version__ = "0.1.0"

__all__ = [
    "SymbolParams",
    "TaylorData",
    "m_eval",
    "l_eval",
    "l_deriv",
    "taylor_data",
    "BifurcationPoint",
    "RootReport",
    "solve_k0",
    "c2_point",
    "roots_in_strip",
]
