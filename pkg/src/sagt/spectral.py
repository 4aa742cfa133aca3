"""Analytic eigensystem of the two 4x4 parity blocks of the drive.

The three-qubit drive commutes with the parity operators ZZZ and XXX, so
it never mixes the even-parity subspace with the odd one.  We order the
even (ZZZ = +1) basis as

    {|000>, |011>, |101>, |110>}            (computational indices 0, 3, 5, 6)

and take the odd basis to be the XXX image of each even state, in the same
order:

    {|111>, |100>, |010>, |001>}            (indices 7, 4, 2, 1)

With this pairing the two diagonal 4x4 blocks of the drive are *equal*
matrices, so a single block analysis covers the whole register.  In the
even basis the block reads

    H(s) / (-hbar omega) = [[ei+ef, ei,    0,     ef   ],
                            [ei,    ei-ef, ef,    0    ],
                            [0,     ef,    -ei-ef, ei  ],
                            [ef,    0,     ei,    ef-ei]]

with eigenvalues -2 omega chi, 0, 0, +2 omega chi, chi = sqrt(ei^2+ef^2).

Eigenvectors are written in closed forms chosen to stay finite and smooth
on all of [0, 1].  The raw textbook expressions contain differences like
chi - ef that cancel catastrophically near the endpoints; we remove them
with the identity chi - ef = ei^2 / (chi + ef), after which the ground
vector is ei times

    w0 = (chi+ei,  ei (chi+ei)/(chi+ef),  ei ef/(chi+ef),  ef),

which never vanishes.  The top vector comes for free: conjugating the
block by diag(1,-1,1,-1) followed by the swap (1<->3, 2<->4) flips the
sign of the block Hamiltonian, so applying that involution to w0 yields
the +2 omega chi eigenvector with the same regularity.

The two zero modes are taken in a fixed gauge: the first is

    u1 = (ei-ef, -ei, 0, ef),

and the second is u2 = (-ei, ei+ef, ef, 0) orthogonalized against u1.
Carrying out the orthogonalization symbolically (the cross term telescopes
through ei^3 + ef^3 = (ei+ef)(ei^2 - ei ef + ef^2)) gives the stable form

    r2 = (-ei ef,  ef^2,  ei^2 - ei ef + ef^2,  ei^2),

whose third component is bounded below, whereas the naive two-step
Gram-Schmidt degenerates at s = 0 where u1 and u2 become anti-parallel.

All vectors are real; normalized columns v0, v1, v2, v3 (energy
ascending) form the transport frame, and the gauge <v_m | d/ds v_m> = 0
holds automatically because each column keeps unit norm.
"""

import numpy as np

from .schedules import chi as _chi
from .schedules import grid_eval

# Computational-basis indices of the even block and, pairwise complemented,
# of the odd block.  Order matters: it is what makes the two blocks equal.
PLUS_BASIS = (0, 3, 5, 6)
MINUS_BASIS = (7, 4, 2, 1)

FD_STEP = 1e-6


def _weights(schedule, s):
    s = np.asarray(s, dtype=float)
    return grid_eval(schedule.eta_i, s), grid_eval(schedule.eta_f, s)


def block_hamiltonian(schedule, s, omega=1.0):
    """The common 4x4 block of the drive in the even-parity basis."""
    ei, ef = (float(x) for x in _weights(schedule, s))
    return -omega * np.array(
        [
            [ei + ef, ei, 0.0, ef],
            [ei, ei - ef, ef, 0.0],
            [0.0, ef, -ei - ef, ei],
            [ef, 0.0, ei, ef - ei],
        ],
        dtype=complex,
    )


def block_energies(schedule, s, omega=1.0):
    """Block spectrum (-2 omega chi, 0, 0, +2 omega chi), energy ascending."""
    c = _chi(schedule, s)
    return np.array([-2.0 * omega * c, 0.0, 0.0, 2.0 * omega * c])


def gap(schedule, s, omega=1.0):
    """Energy distance 2 omega chi between the ground level and the zero
    modes; positive whenever the schedule is valid."""
    return 2.0 * omega * _chi(schedule, s)


def frame_grid(schedule, s):
    """Orthonormal real eigenframe at each s in an array.

    Returns shape (..., 4, 4); column m of each 4x4 slice is the
    eigenvector of block_energies[m].  Columns are smooth in s (no
    eigensolver gauge jumps) because they come from fixed closed forms.
    """
    ei, ef = _weights(schedule, np.asarray(s, dtype=float))
    c = np.hypot(ei, ef)
    a = c + ei
    b = c + ef  # >= chi > 0, safe denominator
    d = ei * ei - ei * ef + ef * ef
    zero = np.zeros_like(ei)

    w0 = np.stack([a, ei * a / b, ei * ef / b, ef], axis=-1)
    u1 = np.stack([ei - ef, -ei, zero, ef], axis=-1)
    r2 = np.stack([-ei * ef, ef * ef, d, ei * ei], axis=-1)
    # spectral flip of w0: (w0_3, -w0_4, w0_1, -w0_2)
    w3 = np.stack([ei * ef / b, -ef, a, -ei * a / b], axis=-1)

    def unit(v):
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    return np.stack([unit(w0), unit(u1), unit(r2), unit(w3)], axis=-1)


def block_eigenvectors(schedule, s):
    """4x4 orthonormal frame at scalar s; columns ordered by energy."""
    return frame_grid(schedule, np.atleast_1d(np.asarray(s, dtype=float)))[0]


def frame_derivative_grid(schedule, s, h=FD_STEP):
    """d/ds of the eigenframe by second-order finite differences.

    Central differences in the interior, one-sided at the two endpoint
    bands so the schedule is only ever evaluated inside [0, 1].
    """
    s = np.asarray(s, dtype=float)
    flat = np.atleast_1d(s)

    def f(x):
        return frame_grid(schedule, x)

    out = np.empty(flat.shape + (4, 4))
    mid = (flat >= h) & (flat <= 1.0 - h)
    lo = flat < h
    hi = flat > 1.0 - h
    if mid.any():
        out[mid] = (f(flat[mid] + h) - f(flat[mid] - h)) / (2.0 * h)
    if lo.any():
        x = flat[lo]
        out[lo] = (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2 * h)) / (2.0 * h)
    if hi.any():
        x = flat[hi]
        out[hi] = (3.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (2.0 * h)
    return out.reshape(s.shape + (4, 4))


def block_eigenvector_derivatives(schedule, s, h=FD_STEP):
    """Columnwise d/ds of block_eigenvectors at scalar s."""
    return frame_derivative_grid(schedule, np.atleast_1d(np.asarray(s, float)), h)[0]


def embed_blocks(plus_block, minus_block):
    """Assemble an 8x8 register operator from its two 4x4 parity blocks.

    Entries outside the two blocks are exactly zero, which is what makes
    commutation with ZZZ structural rather than approximate.
    """
    plus_block = np.asarray(plus_block, dtype=complex)
    minus_block = np.asarray(minus_block, dtype=complex)
    if plus_block.shape != (4, 4) or minus_block.shape != (4, 4):
        raise ValueError("blocks must be 4x4")
    out = np.zeros((8, 8), dtype=complex)
    out[np.ix_(PLUS_BASIS, PLUS_BASIS)] = plus_block
    out[np.ix_(MINUS_BASIS, MINUS_BASIS)] = minus_block
    return out


def embed_block_vector(v, parity):
    """Lift a 4-component block vector to the 8-dimensional register.

    parity +1 places it on the even basis, -1 on the odd basis.
    """
    if parity not in (+1, -1):
        raise ValueError(f"parity must be +1 or -1, got {parity}")
    v = np.asarray(v)
    out = np.zeros(8, dtype=complex)
    out[list(PLUS_BASIS if parity == +1 else MINUS_BASIS)] = v
    return out
