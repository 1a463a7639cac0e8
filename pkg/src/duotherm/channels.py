"""Thermalizing channels and their dilations.

A bath is described by a temperature, a ladder of energies and a coupling
strength ``eta``.  Populations follow Gibbs weights p_i ~ exp(-E_i / T) with
the Boltzmann constant set to one; ``beta_convention="log2"`` switches the
weight base to 2 (p_i ~ 2^(-E_i / T)) for the parameterization in which the
two-level ground population is 2^(1/T) / (1 + 2^(1/T)).

The two-level channel is the generalized amplitude damping channel (GADC);
the n-level generalization exchanges population between every level pair
(i, j) with strength gamma_ij.  Both admit a two-qubit purified-bath dilation
built from ``dilation_unitary``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import tensor
from .errors import (
    ChannelConstructionError,
    ConfigurationError,
    DimensionMismatchError,
    ValidationError,
)

COMPLETENESS_TOL = 1e-10
UNITARITY_TOL = 1e-12

BETA_CONVENTIONS = ("natural", "log2")


@dataclass(frozen=True)
class ThermalBathSpec:
    """Bath parameters; energies default to a unit-gap two-level ladder."""

    temperature: float
    energies: tuple[float, ...] = (0.0, 1.0)
    eta: float = 1.0
    beta_convention: str = "natural"

    def __post_init__(self):
        object.__setattr__(self, "energies", tuple(float(e) for e in self.energies))
        if not self.temperature > 0:
            raise ConfigurationError(f"temperature must be positive, got {self.temperature!r}")
        if len(self.energies) < 2:
            raise ConfigurationError("at least two energy levels are required")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigurationError(f"eta must lie in [0, 1], got {self.eta!r}")
        if self.beta_convention not in BETA_CONVENTIONS:
            raise ConfigurationError(
                f"beta_convention must be one of {BETA_CONVENTIONS}, got {self.beta_convention!r}"
            )

    @property
    def levels(self) -> int:
        return len(self.energies)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map as a stack of Kraus operators, shape (n_ops, out_dim, in_dim).

    Completeness sum_k K_k^dag K_k = 1 is enforced at construction within
    ``COMPLETENESS_TOL``; violations raise with the defect norm.
    """

    ops: np.ndarray

    def __post_init__(self):
        ops = np.asarray(self.ops, dtype=complex)
        if ops.ndim != 3 or ops.shape[0] < 1:
            raise DimensionMismatchError(
                f"expected a stack of matrices with shape (n, out, in), got {ops.shape}"
            )
        object.__setattr__(self, "ops", ops)
        defect = self.completeness_defect()
        if defect > COMPLETENESS_TOL:
            raise ChannelConstructionError(
                f"Kraus completeness violated: |sum K^dag K - 1|_max = {defect:.3e}"
            )

    @property
    def in_dim(self) -> int:
        return self.ops.shape[2]

    @property
    def out_dim(self) -> int:
        return self.ops.shape[1]

    def completeness_defect(self) -> float:
        s = np.einsum("aji,ajk->ik", np.conj(self.ops), self.ops)
        return float(np.max(np.abs(s - np.eye(self.in_dim))))


def gibbs_probabilities(spec: ThermalBathSpec) -> np.ndarray:
    """Normalized thermal populations over the bath's energy ladder."""
    energies = np.asarray(spec.energies, dtype=float)
    ln_base = 1.0 if spec.beta_convention == "natural" else math.log(2.0)
    exponent = -(energies - energies.min()) * ln_base / spec.temperature
    w = np.exp(exponent)
    return w / w.sum()


def gadc_kraus(spec: ThermalBathSpec) -> KrausChannel:
    """Generalized amplitude damping channel for a two-level bath spec."""
    if spec.levels != 2:
        raise ConfigurationError(
            f"the two-level channel needs exactly 2 energies, got {spec.levels}"
        )
    p = float(gibbs_probabilities(spec)[0])
    eta = spec.eta
    k = math.sqrt(1.0 - eta)
    r1 = math.sqrt(p) * np.array([[1.0, 0.0], [0.0, k]])
    r2 = math.sqrt(1.0 - p) * np.array([[k, 0.0], [0.0, 1.0]])
    r3 = math.sqrt(p * eta) * np.array([[0.0, 1.0], [0.0, 0.0]])
    r4 = math.sqrt((1.0 - p) * eta) * np.array([[0.0, 0.0], [1.0, 0.0]])
    return KrausChannel(np.stack([r1, r2, r3, r4]).astype(complex))


def qudit_thermal_kraus(spec: ThermalBathSpec, gamma: np.ndarray | None = None) -> KrausChannel:
    """n-level thermalization with pairwise exchange strengths gamma_ij.

    ``gamma`` must be symmetric with zero diagonal and entries in [0, 1];
    symmetry is what makes the Kraus set complete.  Default is full exchange
    (all off-diagonal entries 1).  Operator ordering: the n diagonal operators
    K_i first, then K_ij for i != j in row-major (i, j) order.
    """
    n = spec.levels
    if gamma is None:
        gamma = np.ones((n, n)) - np.eye(n)
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (n, n):
        raise DimensionMismatchError(f"gamma must be {n}x{n}, got {gamma.shape}")
    if np.max(np.abs(np.diag(gamma))) > 0:
        raise ValidationError("gamma must have a zero diagonal")
    asym = float(np.max(np.abs(gamma - gamma.T)))
    if asym > 1e-12:
        raise ValidationError(f"gamma must be symmetric; asymmetry {asym:.3e}")
    if gamma.min() < 0 or gamma.max() > 1:
        raise ValidationError("gamma entries must lie in [0, 1]")
    p = gibbs_probabilities(spec)
    ops = []
    for i in range(n):
        d = np.zeros((n, n), dtype=complex)
        d[i, i] = 1.0
        for j in range(n):
            if j != i:
                d[j, j] = math.sqrt(1.0 - gamma[j, i])
        ops.append(math.sqrt(p[i]) * d)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = math.sqrt(p[i]) * math.sqrt(gamma[i, j])
            ops.append(m)
    return KrausChannel(np.stack(ops))


def purified_bath_state(spec: ThermalBathSpec) -> np.ndarray:
    """Two-qubit purification sqrt(p0)|00> + sqrt(p1)|11> of a two-level bath."""
    if spec.levels != 2:
        raise ConfigurationError("purified bath states are defined for two-level baths")
    p = gibbs_probabilities(spec)
    v = np.zeros(4, dtype=complex)
    v[0] = math.sqrt(p[0])
    v[3] = math.sqrt(p[1])
    return v


def dilation_unitary(eta: float) -> np.ndarray:
    """Partial-swap style two-qubit unitary realizing the coupling of
    strength ``eta`` between a probe qubit and the first bath qubit."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"eta must lie in [0, 1], got {eta!r}")
    c = math.sqrt(1.0 - eta)
    s = math.sqrt(eta)
    u = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, s, 0.0],
            [0.0, -s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        dtype=complex,
    )
    return u


def apply_channel(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    rho = tensor.as_complex(rho)
    if rho.shape != (channel.in_dim, channel.in_dim):
        raise DimensionMismatchError(
            f"state shape {rho.shape} does not match channel input dim {channel.in_dim}"
        )
    return np.einsum("aij,jk,alk->il", channel.ops, rho, np.conj(channel.ops))


def choi_matrix(channel: KrausChannel) -> np.ndarray:
    """Choi matrix J = sum_{mn} |m><n| (x) E(|m><n|), input factor first."""
    m = channel.ops.shape[0]
    vecs = channel.ops.transpose(0, 2, 1).reshape(m, -1)  # row a is vec of K_a
    return vecs.T @ np.conj(vecs)


def apply_choi(choi: np.ndarray, rho: np.ndarray, in_dim: int, out_dim: int) -> np.ndarray:
    """Action of a channel given as a Choi matrix in the convention above."""
    choi = tensor.as_complex(choi)
    rho = tensor.as_complex(rho)
    if choi.shape != (in_dim * out_dim, in_dim * out_dim):
        raise DimensionMismatchError(
            f"Choi shape {choi.shape} does not match dims {in_dim}x{out_dim}"
        )
    if rho.shape != (in_dim, in_dim):
        raise DimensionMismatchError(f"state shape {rho.shape} does not match in_dim {in_dim}")
    j4 = choi.reshape(in_dim, out_dim, in_dim, out_dim)
    return np.einsum("minj,mn->ij", j4, rho)


def bath_spec_at(temperature: float, template: ThermalBathSpec) -> ThermalBathSpec:
    """Copy of ``template`` at a different temperature."""
    return dataclasses.replace(template, temperature=temperature)
