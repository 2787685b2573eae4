"""Pseudo-differential operators on scaled integer lattices.

Truncated kernel matrices of symbols on lattice x torus, Schur-type
boundedness and nuclearity sums with an order-condition decision engine,
diagonal eigenvalue approximation with perturbation bounds, and discrete
Schrodinger spectra with eigenvalue growth fits.
"""

__version__ = "0.1.0"

from .lattice import BoxTruncation, LatticeSpec, enumerate_box, index_of, point_of
from .symbols import (Symbol, SymbolOrder, constant_symbol, decaying_test_symbol,
                      difference_symbol, eval_symbol, multiplication_symbol,
                      polynomial_potential, schrodinger_symbol, symbol_from_matrix,
                      theta_derivative)
from .fourier import (CoefficientTable, DecayReport, coefficient_table,
                      estimate_decay_constant, toroidal_coefficient)
from .kernel import (DiagonalSplit, KernelMatrix, apply, assemble, hermitian_check,
                     hermitize, read_binary, split_diagonal, write_binary, write_csv)
from .criteria import (CriterionQuery, CriterionReport, TailBound, mixed_lp_sum,
                       nuclear_sum, order_conditions, schur_l1_lp, sup_entry,
                       truncation_tail_bound)
from .spectral import (DiagApproxReport, SandwichReport, SpectralResult,
                       diagonal_approximation, eigendecompose_hermitian,
                       residue_norm, sandwich_check)
from .schrodinger import (ConvergedSpectrum, GrowthFit, PotentialSpec,
                          build_hamiltonian, fit_growth_exponent,
                          spectrum_converged, weyl_oracle)
