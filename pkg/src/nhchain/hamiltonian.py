"""Hamiltonian of the lossy spin-1/2 chain with a field on site 1.

The chain couples nearest neighbors through pair creation/annihilation and
loses excitations at rate gamma on every site; a transverse field of
amplitude h and azimuthal angle theta acts on the first site only::

    H0 = J * sum_{n=1}^{N-1} (sp_n sp_{n+1} + sm_n sm_{n+1})
         - i (gamma/4) * sum_{n=1}^{N} (sz_n + 1)
    H1 = h * (cos(theta) sx_1 + sin(theta) sy_1)

Open boundary conditions throughout.  J and h are quoted in units of gamma;
the default gamma is 1.  The anti-Hermitian part of H0 + H1 is the loss term
alone, so every eigenvalue has non-positive imaginary part.
"""

from dataclasses import dataclass

import numpy as np

from .operators import SparseOperator, embed, embed_pair, op_add, op_sum, pauli


@dataclass(frozen=True)
class ChainParams:
    """Parameters of one chain instance.

    N is the number of sites (>= 2), J >= 0 the pair coupling, gamma >= 0 the
    loss rate, h >= 0 the field amplitude and theta its azimuthal angle in
    radians (stored as given, not reduced mod 2*pi).
    """

    N: int
    J: float
    gamma: float = 1.0
    h: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError("N must be an integer >= 2")
        if self.J < 0:
            raise ValueError("J must be >= 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.h < 0:
            raise ValueError("h must be >= 0")
        object.__setattr__(self, "N", int(self.N))

    @property
    def dim(self) -> int:
        return 1 << self.N


_PAIR_COUPLING = np.kron(pauli("plus"), pauli("plus")) + np.kron(
    pauli("minus"), pauli("minus")
)
_LOSS_SITE = pauli("z") + pauli("identity")


def build_h0(p: ChainParams) -> SparseOperator:
    """Pair-coupling plus on-site loss part of the Hamiltonian."""
    terms = [
        embed_pair(p.J * _PAIR_COUPLING, n, n + 1, p.N) for n in range(1, p.N)
    ]
    terms += [
        embed(-0.25j * p.gamma * _LOSS_SITE, n, p.N) for n in range(1, p.N + 1)
    ]
    return op_sum(terms)


def build_h1(p: ChainParams) -> SparseOperator:
    """Transverse field on site 1, Hermitian."""
    field = p.h * (np.cos(p.theta) * pauli("x") + np.sin(p.theta) * pauli("y"))
    return embed(field, 1, p.N)


def build_total(p: ChainParams) -> SparseOperator:
    """Full chain generator H0 + H1."""
    return op_add(build_h0(p), build_h1(p))
