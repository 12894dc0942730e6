"""Twisted quantum doubles D^phi(G) of finite groups with exact axiom verification."""
from .cyclotomic import CycScalar, embed, root_of_unity
from .group import FiniteGroup, make_group, verify_group
from .cochain import (
    AdCochain2,
    Cochain2,
    Cochain3,
    are_cohomologous_bruteforce,
    chi_from_phi,
    coboundary,
    standard_cocycle_cyclic,
    twist,
    verify_3cocycle,
    verify_chi_2cocycle,
)
from .qhopf import AlgebraData, QuasiHopfData, TensorElement, tensor_inverse, tensor_mul
from .dpr import DPRInstance, attach_antipode, build_dpr, verify_dpr
from .crossedmod import CrossedGModule, braiding, regular_object, tensor_objects, verify_hexagon, verify_object
from .reconstruct import verify_relations

__version__ = "0.1.0"
