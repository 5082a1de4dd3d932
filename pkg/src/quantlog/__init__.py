"""Finite sup-lattices, quantales and quantale modules, with a workbench for
combining deductive systems through their modules of theories."""

from .lattice import LatticeError, SizeGuardError, SupLattice, SupMap, validate_lattice
from .quantale import Quantale, quotient_q, saturated_elements_q
from .qmodule import Amalgam, ModuleMorphism, QModule, amalgamated_coproduct, quotient_m, saturated_elements_m
from .tensor import tensor_product
from .syntax import Language, Substitution, Translation, TruncationParams, parse_formula, parse_item
from .deduction import DeductiveSystem, InferenceRule, closure, theory_lattice
from .report import Report

__version__ = "0.1.0"
