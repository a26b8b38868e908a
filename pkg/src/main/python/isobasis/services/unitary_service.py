"""Givens-rotation chart of U(d) and seeded Haar sampling.

Chart layout for theta (length d**2): for each pair (i, j) in the order
(0,1), (0,2), ..., (0,d-1), (1,2), ..., (d-2,d-1) an angle/phase couple
(t, p), followed by d diagonal phases. The unitary is

    U(theta) = G_(0,1) G_(0,2) ... G_(d-2,d-1) diag(exp(i a_0), ..., exp(i a_{d-1}))

with the two-level block G = [[cos t, e^{-ip} sin t], [-e^{ip} sin t, cos t]]
on rows/columns (i, j). Zero parameters give the identity.
"""
import logging
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatchException, InvalidInputException
from ..models.domain.quantum import LocalUnitary, UnitaryParams

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def givens_pairs(d: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, j) for i in range(d) for j in range(i + 1, d))


def chart(theta: np.ndarray, d: int, with_jacobian: bool = False):
    """Batched chart evaluation.

    `theta` has shape (..., d**2). Returns U with shape (..., d, d) and, when
    requested, the Jacobian dU/dtheta with shape (..., d**2, d, d).
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != d * d:
        raise DimensionMismatchException(f"Expected {d * d} parameters, got {theta.shape[-1]}")
    lead = theta.shape[:-1]
    flat = theta.reshape(-1, d * d)
    batch = flat.shape[0]
    pairs = givens_pairs(d)
    eye = np.broadcast_to(np.eye(d, dtype=complex), (batch, d, d))

    factors, d_angle, d_phase = [], [], []
    for idx, (i, j) in enumerate(pairs):
        t, p = flat[:, 2 * idx], flat[:, 2 * idx + 1]
        c, s, e = np.cos(t), np.sin(t), np.exp(1j * p)
        g = eye.copy()
        g[:, i, i], g[:, i, j], g[:, j, i], g[:, j, j] = c, np.conj(e) * s, -e * s, c
        factors.append(g)
        if with_jacobian:
            gt = np.zeros((batch, d, d), dtype=complex)
            gt[:, i, i], gt[:, i, j], gt[:, j, i], gt[:, j, j] = -s, np.conj(e) * c, -e * c, -s
            gp = np.zeros((batch, d, d), dtype=complex)
            gp[:, i, j], gp[:, j, i] = -1j * np.conj(e) * s, -1j * e * s
            d_angle.append(gt)
            d_phase.append(gp)

    phases = np.exp(1j * flat[:, 2 * len(pairs):])

    prefix = [eye]
    for g in factors:
        prefix.append(prefix[-1] @ g)
    unitary = prefix[-1] * phases[:, None, :]

    if not with_jacobian:
        return unitary.reshape(lead + (d, d))

    suffix = [eye]
    for g in reversed(factors):
        suffix.append(g @ suffix[-1])
    suffix = suffix[::-1]

    jac = np.zeros((batch, d * d, d, d), dtype=complex)
    for idx in range(len(pairs)):
        left, right = prefix[idx], suffix[idx + 1]
        jac[:, 2 * idx] = (left @ d_angle[idx] @ right) * phases[:, None, :]
        jac[:, 2 * idx + 1] = (left @ d_phase[idx] @ right) * phases[:, None, :]
    offset = 2 * len(pairs)
    for col in range(d):
        jac[:, offset + col, :, col] = 1j * unitary[:, :, col]
    return unitary.reshape(lead + (d, d)), jac.reshape(lead + (d * d, d, d))


def params_to_unitary(params: UnitaryParams) -> LocalUnitary:
    return LocalUnitary(params.d, chart(params.theta, params.d))


def unitary_to_params(unitary: LocalUnitary) -> UnitaryParams:
    """Invert the chart by Givens elimination of the sub-diagonal, column by column."""
    d = unitary.d
    work = np.array(unitary.matrix, dtype=complex)
    theta: List[float] = []
    for i, j in givens_pairs(d):
        a, b = work[i, i], work[j, i]
        t = float(np.arctan2(abs(b), abs(a)))
        p = float(np.angle(b) - np.angle(a)) if abs(b) > 0 else 0.0
        c, s, e = np.cos(t), np.sin(t), np.exp(1j * p)
        rows = work[[i, j], :]
        work[i, :] = c * rows[0] + np.conj(e) * s * rows[1]
        work[j, :] = -e * s * rows[0] + c * rows[1]
        # the applied rotation is G(-t, p)^dagger, so the chart factor is G(-t, p)
        theta.extend([-t, p])
    theta.extend(np.angle(np.diag(work)).tolist())
    return UnitaryParams(d, np.array(theta))


def random_params(d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, 2 * np.pi, size=d * d)


def haar_random_unitary(d: int, seed: Optional[int] = None) -> LocalUnitary:
    if d < 1:
        raise InvalidInputException(f"Dimension must be positive, got {d}")
    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(gaussian)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))[None, :]
    return LocalUnitary(d, q)


def perturb(params: UnitaryParams, scale: float, seed: Optional[int] = None) -> UnitaryParams:
    if scale < 0:
        raise InvalidInputException(f"scale must be non-negative, got {scale}")
    if scale == 0:
        return params
    rng = np.random.default_rng(seed)
    return UnitaryParams(params.d, params.theta + scale * rng.standard_normal(params.theta.shape))
