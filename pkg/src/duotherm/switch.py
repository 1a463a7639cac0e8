"""Quantum switch: two channels applied in a coherently controlled order.

Kraus route: with channel A Kraus set {F_i} and channel B Kraus set {K_j},
the controlled-order map is built from

    H_ij = F_i K_j (x) |0><0|_C  +  K_j F_i (x) |1><1|_C,

so control |0> realizes B then A (A outermost) and control |1> the reverse.
Output factor order is target (x) control.

Process route: the same map as a rank-one process matrix W = |w><w| over the
factors (P1, P2, A1I, A1O, A2I, A2O, F1, F2), where P1/F1 are the control
past/future (dimension 2) and P2/F2 the target past/future.  Slot 1 is the
channel applied *first* along the control-|0> branch; plugging Choi matrices
(J_first, J_second) into ``compose_process`` therefore reproduces the Kraus
route for (J_first, J_second) = (choi(B), choi(A)).  For a rank-one process
the contraction Tr_A[W^{T_A} (J1 (x) J2 (x) 1_PF)] reduces to
M J1(x)J2 M^dag with M the |w> vector reshaped to (P F) x A, which is what
``compose_process`` evaluates; the full W is never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import channels, tensor
from .channels import KrausChannel, ThermalBathSpec
from .errors import ConfigurationError, DimensionMismatchError

PROCESS_LABELS = ("P1", "P2", "A1I", "A1O", "A2I", "A2O", "F1", "F2")


def _plus_state() -> tuple[complex, ...]:
    s = 1.0 / math.sqrt(2.0)
    return (complex(s), complex(s))


@dataclass(frozen=True)
class SwitchConfig:
    """Two channels of equal dimension plus the order-control preparation."""

    channel_a: KrausChannel
    channel_b: KrausChannel
    control_state: tuple[complex, ...] = field(default_factory=_plus_state)

    def __post_init__(self):
        a, b = self.channel_a, self.channel_b
        if a.in_dim != a.out_dim or b.in_dim != b.out_dim:
            raise ConfigurationError("switch channels must preserve dimension")
        if a.in_dim != b.in_dim:
            raise DimensionMismatchError(
                f"channel dimensions differ: {a.in_dim} vs {b.in_dim}"
            )
        c = np.asarray(self.control_state, dtype=complex)
        if c.shape != (2,):
            raise ConfigurationError("control_state must be a qubit amplitude pair")
        norm = float(np.linalg.norm(c))
        if abs(norm - 1.0) > tensor.STATE_NORM_TOL:
            raise ConfigurationError(
                f"control_state must be normalized, got norm {norm!r}"
            )

    @property
    def target_dim(self) -> int:
        return self.channel_a.in_dim

    def control_vector(self) -> np.ndarray:
        return np.asarray(self.control_state, dtype=complex)


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """Rank-one process matrix stored as its defining vector.

    ``matrix`` materializes |w><w|; avoid it for target dimension 4, where
    the dense form has dimension 16384.
    """

    vector: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...] = PROCESS_LABELS

    @property
    def matrix(self) -> np.ndarray:
        v = self.vector.reshape(-1)
        return np.outer(v, v.conj())


def switch_kraus_output(cfg: SwitchConfig, rho_in: np.ndarray) -> np.ndarray:
    """Apply the controlled-order map to rho_in (x) |control><control|."""
    d = cfg.target_dim
    rho_in = tensor.as_complex(rho_in)
    if rho_in.shape != (d, d):
        raise DimensionMismatchError(f"input shape {rho_in.shape} does not match dim {d}")
    f = cfg.channel_a.ops
    k = cfg.channel_b.ops
    m1 = np.einsum("aij,bjk->abik", f, k).reshape(-1, d, d)  # F_i K_j
    m2 = np.einsum("bij,ajk->abik", k, f).reshape(-1, d, d)  # K_j F_i, aligned pairing
    s11 = np.einsum("aij,jk,alk->il", m1, rho_in, np.conj(m1))
    s22 = np.einsum("aij,jk,alk->il", m2, rho_in, np.conj(m2))
    s12 = np.einsum("aij,jk,alk->il", m1, rho_in, np.conj(m2))
    c = cfg.control_vector()
    rho_c = np.outer(c, c.conj())
    blocks = np.empty((2, 2, d, d), dtype=complex)
    blocks[0, 0] = rho_c[0, 0] * s11
    blocks[1, 1] = rho_c[1, 1] * s22
    blocks[0, 1] = rho_c[0, 1] * s12
    blocks[1, 0] = rho_c[1, 0] * s12.conj().T
    out = np.einsum("uvil->iulv", blocks).reshape(2 * d, 2 * d)
    return (out + out.conj().T) / 2.0


def switch_process_matrix(target_dim: int) -> ProcessMatrix:
    """Process vector |w> of the two-slot switch for the given target dimension."""
    if target_dim < 2:
        raise ConfigurationError(f"target_dim must be at least 2, got {target_dim}")
    d = target_dim
    dims = (2, d, d, d, d, d, 2, d)
    w = np.zeros(dims, dtype=complex)
    for a, b, c in product(range(d), repeat=3):
        # control |0>: target wired P2 -> A1I, A1O -> A2I, A2O -> F2
        w[0, a, a, b, b, c, 0, c] = 1.0
        # control |1>: target wired P2 -> A2I, A2O -> A1I, A1O -> F2
        w[1, a, b, c, a, b, 1, c] = 1.0
    return ProcessMatrix(vector=w, dims=dims)


def compose_process(process: ProcessMatrix, chois) -> np.ndarray:
    """Contract a rank-one process with the slot channels' Choi matrices.

    Returns the Choi matrix of the induced map from P = P1 (x) P2 to
    F = F1 (x) F2 (input factor first, same convention as ``choi_matrix``).
    """
    chois = [tensor.as_complex(j) for j in chois]
    if len(chois) != 2:
        raise ConfigurationError("expected exactly two slot Choi matrices")
    dims = process.dims
    d_slot1 = dims[2] * dims[3]
    d_slot2 = dims[4] * dims[5]
    if chois[0].shape != (d_slot1, d_slot1) or chois[1].shape != (d_slot2, d_slot2):
        raise DimensionMismatchError(
            f"slot Choi shapes {[j.shape for j in chois]} do not match process dims {dims}"
        )
    w = process.vector.reshape(dims)
    # reorder to (P1, P2, F1, F2, A1I, A1O, A2I, A2O) and flatten to (PF) x A
    w_mat = np.transpose(w, (0, 1, 6, 7, 2, 3, 4, 5)).reshape(
        dims[0] * dims[1] * dims[6] * dims[7], d_slot1 * d_slot2
    )
    j_slots = np.kron(chois[0], chois[1])
    return w_mat @ j_slots @ w_mat.conj().T


def switch_channel_choi(cfg: SwitchConfig) -> np.ndarray:
    """Choi matrix of the full switch map on (control, target) via the
    process-matrix route; P/F composite order is (control, target)."""
    proc = switch_process_matrix(cfg.target_dim)
    j_first = channels.choi_matrix(cfg.channel_b)  # applied first on control |0>
    j_second = channels.choi_matrix(cfg.channel_a)
    return compose_process(proc, [j_first, j_second])


def switch_process_output(cfg: SwitchConfig, rho_in: np.ndarray) -> np.ndarray:
    """Same map as ``switch_kraus_output`` evaluated through the process
    matrix; used for cross-route validation."""
    d = cfg.target_dim
    c = cfg.control_vector()
    rho_p = tensor.kron(np.outer(c, c.conj()), tensor.as_complex(rho_in))
    j_b = switch_channel_choi(cfg)
    out_cf = channels.apply_choi(j_b, rho_p, 2 * d, 2 * d)
    # reorder (control, target) -> (target, control)
    out = out_cf.reshape(2, d, 2, d).transpose(1, 0, 3, 2).reshape(2 * d, 2 * d)
    return (out + out.conj().T) / 2.0


def thermal_switch_config(
    target_dim: int,
    t1: float,
    t2: float,
    eta: float = 1.0,
    beta_convention: str = "natural",
    energies: tuple[float, ...] | None = None,
    control_state: tuple[complex, ...] | None = None,
) -> SwitchConfig:
    """Switch over two thermalizing channels at temperatures (t1, t2).

    Channel A (outermost for control |0>) carries t1.  Dimension 2 uses the
    GADC; higher dimensions use the pairwise-exchange channel with uniform
    strength eta (default full thermalization).  Default energies are the
    linear ladder 0, 1, ..., target_dim - 1.
    """
    if target_dim == 2 and energies is None:
        energies = (0.0, 1.0)
    elif energies is None:
        energies = tuple(float(x) for x in range(target_dim))
    if len(energies) != target_dim:
        raise ConfigurationError(
            f"expected {target_dim} energies, got {len(energies)}"
        )
    spec1 = ThermalBathSpec(t1, energies, eta, beta_convention)
    spec2 = ThermalBathSpec(t2, energies, eta, beta_convention)
    if target_dim == 2:
        ch1, ch2 = channels.gadc_kraus(spec1), channels.gadc_kraus(spec2)
    else:
        gamma = eta * (np.ones((target_dim, target_dim)) - np.eye(target_dim))
        ch1 = channels.qudit_thermal_kraus(spec1, gamma)
        ch2 = channels.qudit_thermal_kraus(spec2, gamma)
    if control_state is None:
        return SwitchConfig(channel_a=ch1, channel_b=ch2)
    return SwitchConfig(channel_a=ch1, channel_b=ch2, control_state=control_state)


def switch_output_state(
    target_dim: int,
    t1: float,
    t2: float,
    eta: float = 1.0,
    beta_convention: str = "natural",
    energies: tuple[float, ...] | None = None,
    control_state: tuple[complex, ...] | None = None,
) -> np.ndarray:
    """Switch output for thermal channels on the ground-state target.

    Defaults realize full-strength thermalization (eta = 1) with the control
    in |+>; the estimation-ready state lives on target (x) control.
    """
    cfg = thermal_switch_config(
        target_dim, t1, t2, eta=eta, beta_convention=beta_convention,
        energies=energies, control_state=control_state,
    )
    rho_in = np.zeros((target_dim, target_dim), dtype=complex)
    rho_in[0, 0] = 1.0
    out = switch_kraus_output(cfg, rho_in)
    return tensor.validate_density_matrix(out)
