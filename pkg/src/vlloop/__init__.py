"""Term functions, equational normal forms and subpower membership for
Vaughan-Lee's 12-element nilpotent loop."""

from .core import C, D, enumerate_congruences, f_map, g_map, loop_div, loop_mul, power_sq, t_map
from .fnspace import FunctionTable, clone_closure, decompose, f_rbar, is_in_Wk, wk_basis
from .rewriter import normalize, reconstruct, terms_equal
from .smp import SmpInstance, smp_decide
from .termlang import evaluate, parse, table

__version__ = "0.1.0"
