"""Skew-Hermitian super-operators on symmetrically normed Hermitian matrices.

Gauge functions on R^n, their unitarily invariant matrix norms, support
functionals, a sampled skew-Hermitian test and recovery of the commutator
generator ``b`` with ``H(x) = i(xb - bx)``.
"""

from .errors import ConfigError, NonConvergence, SkewlabError, ZeroElement
from .extraction import (c2_dichotomy_report, diagonal_witness_search, extract_generator,
                         make_commutator, rank_one_image_structure, rotation_witness,
                         verify_commutator)
from .gauge import (Lorentz, Lp, Marcinkiewicz, Orlicz, SymmetricGauge, dual_norm_grid, gauge_norm,
                    hlp_majorizes, kothe_dual_norm, parse_gauge, rearrange, subgradient)
from .harness import Report, RunConfig, run
from .spectral import Dyad, eigh, ideal_norm, singular_values, trace_pair
from .support import (SuperOp, hermitian_basis, is_skew_hermitian, projection_pairing, semi_inner,
                      support_functional)

__version__ = "0.1.0"
