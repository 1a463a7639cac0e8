"""Mach-Zehnder style probes with a path control qubit.

A probe of one or two qubits travels through a superposition of two arms.
In ``one_bath`` mode both arms couple the probe to the *same* purified bath
register, which carries the temperature of the traversed arm; in
``two_bath`` mode each arm couples the probe to its own bath.  The second
beam splitter is modeled by the relative phase exp(i*phi) on the first arm
followed by either post-selection on the control (+ branch) or joint
estimation on probe plus control.

States are assembled branch-wise: with |v_k> the probe+bath vector of arm k,
the probe/control blocks are Tr_bath |v_k><v_l| dressed with the arm phase.
Tensor order is probe qubits, bath qubits, then control (when kept).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels, tensor
from .channels import ThermalBathSpec
from .errors import (
    ConfigurationError,
    DarkPortError,
    DimensionMismatchError,
)

BATH_MODES = ("one_bath", "two_bath")
ESTIMATION_TARGETS = ("postselected_plus", "probe_plus_control")

DARK_PORT_TOL = 1e-12


@dataclass(frozen=True)
class MzConfig:
    """Interferometer layout and coupling parameters."""

    bath_mode: str
    probe_qubits: int = 1
    estimation_target: str = "postselected_plus"
    phi: float = math.pi / 2
    eta: float = 1.0
    initial_internal: tuple[complex, ...] | None = None
    energies: tuple[float, float] = (0.0, 1.0)
    beta_convention: str = "natural"

    def __post_init__(self):
        if self.bath_mode not in BATH_MODES:
            raise ConfigurationError(f"bath_mode must be one of {BATH_MODES}")
        if self.probe_qubits not in (1, 2):
            raise ConfigurationError("probe_qubits must be 1 or 2")
        if self.estimation_target not in ESTIMATION_TARGETS:
            raise ConfigurationError(f"estimation_target must be one of {ESTIMATION_TARGETS}")
        if self.estimation_target == "probe_plus_control" and self.probe_qubits != 1:
            raise ConfigurationError("probe_plus_control estimation requires probe_qubits=1")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigurationError(f"eta must lie in [0, 1], got {self.eta!r}")
        if self.initial_internal is not None:
            psi = np.asarray(self.initial_internal, dtype=complex)
            if psi.shape != (self.probe_dim,):
                raise ConfigurationError(
                    f"initial_internal must have dimension {self.probe_dim}"
                )
            norm = float(np.linalg.norm(psi))
            if abs(norm - 1.0) > tensor.STATE_NORM_TOL:
                raise ConfigurationError(
                    f"initial_internal must be normalized, got norm {norm!r}"
                )

    @property
    def probe_dim(self) -> int:
        return 2**self.probe_qubits

    def initial_state(self) -> np.ndarray:
        if self.initial_internal is not None:
            return tensor.validate_pure_state(np.asarray(self.initial_internal, dtype=complex))
        return tensor.basis_state(self.probe_dim, 0)


def _coupling_pairs(cfg: MzConfig) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Probe/bath factor pairs touched by the coupling unitary in each arm."""
    p = cfg.probe_qubits
    if cfg.bath_mode == "one_bath":
        if p == 1:
            arm = [(0, 1)]  # probe with first qubit of the shared bath register
        else:
            arm = [(0, 2), (1, 3)]  # probe qubit k with bath qubit k
        return arm, arm
    if p == 1:
        return [(0, 1)], [(0, 3)]  # first qubit of bath 1, resp. bath 2
    # Two baths, two probe qubits: within each arm, probe qubit 1 couples to
    # the arm's own bath while probe qubit 2 couples to the opposite bath, and
    # probe qubit k always lands on qubit k of its partner bath so the two
    # arms consume disjoint bath qubits.  This crossed assignment is what
    # degenerates the family at t1 = t2 (the diagonal divergence of the
    # bounds) while keeping it regular elsewhere.
    return [(0, 2), (1, 5)], [(0, 4), (1, 3)]


def _branch_vectors(cfg: MzConfig, t1: float, t2: float) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    """Probe+bath vectors of the two arms and the full factor shape."""
    for t in (t1, t2):
        if not t > 0:
            raise ConfigurationError(f"temperatures must be positive, got {t!r}")
    spec1 = ThermalBathSpec(t1, cfg.energies, cfg.eta, cfg.beta_convention)
    spec2 = ThermalBathSpec(t2, cfg.energies, cfg.eta, cfg.beta_convention)
    theta1 = channels.purified_bath_state(spec1)
    theta2 = channels.purified_bath_state(spec2)
    psi0 = cfg.initial_state()
    u = channels.dilation_unitary(cfg.eta)
    pairs1, pairs2 = _coupling_pairs(cfg)
    if cfg.bath_mode == "one_bath":
        dims = (2,) * cfg.probe_qubits + (2, 2)
        base1 = tensor.kron(psi0, theta1)
        base2 = tensor.kron(psi0, theta2)
    else:
        dims = (2,) * cfg.probe_qubits + (2, 2, 2, 2)
        base1 = tensor.kron_all(psi0, theta1, theta2)
        base2 = base1
    v1, v2 = base1, base2
    for pair in pairs1:
        v1 = tensor.embed_operator(u, dims, pair) @ v1
    for pair in pairs2:
        v2 = tensor.embed_operator(u, dims, pair) @ v2
    return v1, v2, dims


def _traced_blocks(cfg, v1, v2, dims):
    """Bath-traced probe blocks Tr_B |v_k><v_l| for k, l in {1, 2}."""
    keep = tuple(range(cfg.probe_qubits))
    b11 = tensor.partial_trace(np.outer(v1, v1.conj()), dims, keep)
    b22 = tensor.partial_trace(np.outer(v2, v2.conj()), dims, keep)
    b12 = tensor.partial_trace(np.outer(v1, v2.conj()), dims, keep)
    return b11, b22, b12


def mz_output_state(cfg: MzConfig, t1: float, t2: float) -> np.ndarray:
    """Estimation-ready output state at bath temperatures (t1, t2).

    ``postselected_plus``: normalized probe state conditioned on the control
    measuring in (|c1> + |c2>)/sqrt(2) after the arm phase.
    ``probe_plus_control``: probe (x) control joint state, control last.
    """
    v1, v2, dims = _branch_vectors(cfg, t1, t2)
    b11, b22, b12 = _traced_blocks(cfg, v1, v2, dims)
    phase = np.exp(1j * cfg.phi)
    d = cfg.probe_dim
    joint = np.zeros((2 * d, 2 * d), dtype=complex)
    jt = joint.reshape(d, 2, d, 2)
    jt[:, 0, :, 0] = 0.5 * b11
    jt[:, 1, :, 1] = 0.5 * b22
    jt[:, 0, :, 1] = 0.5 * phase * b12
    jt[:, 1, :, 0] = 0.5 * np.conj(phase) * b12.conj().T
    joint = (joint + joint.conj().T) / 2.0
    if cfg.estimation_target == "probe_plus_control":
        rho = joint / np.trace(joint).real
        return tensor.validate_density_matrix(rho)
    state, prob = postselect_control(joint, (d, 2), 1, sign=+1, phi=0.0)
    if state is None:
        raise DarkPortError(f"post-selected + branch has probability {prob:.3e}")
    return tensor.validate_density_matrix(state)


def postselect_control(
    joint: np.ndarray,
    dims,
    control_index: int,
    sign: int = +1,
    phi: float = 0.0,
) -> tuple[np.ndarray | None, float]:
    """Project the control factor of ``joint`` onto (e^{i phi}|c1> +/- |c2>)/sqrt(2).

    The phase dresses the first control branch, so passing the interferometer
    phase here is equivalent to building the joint state with it.  Returns the
    normalized conditional state on the remaining factors together with the
    outcome probability; the state is None when the branch is dark
    (probability below ``DARK_PORT_TOL``).
    """
    joint = tensor.as_complex(joint)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if not 0 <= control_index < n:
        raise ConfigurationError(f"control_index {control_index} outside factor range")
    if dims[control_index] != 2:
        raise ConfigurationError("the control factor must be two-dimensional")
    if sign not in (+1, -1):
        raise ConfigurationError("sign must be +1 or -1")
    total = int(np.prod(dims))
    if joint.shape != (total, total):
        raise DimensionMismatchError(f"joint shape {joint.shape} does not match dims {dims}")
    # Projecting the phased state onto |+/-> equals projecting the raw state
    # onto the back-rotated vector u = (e^{-i phi}, +/-1)/sqrt(2).
    u = np.array([np.exp(-1j * phi), float(sign)], dtype=complex) / math.sqrt(2.0)
    t = joint.reshape(dims + dims)
    reduced = np.tensordot(
        np.tensordot(t, u.conj(), axes=([control_index], [0])),
        u,
        axes=([n - 1 + control_index], [0]),
    )
    rest_dim = total // 2
    reduced = reduced.reshape(rest_dim, rest_dim)
    prob = float(np.trace(reduced).real)
    if prob < DARK_PORT_TOL:
        return None, max(prob, 0.0)
    state = (reduced + reduced.conj().T) / (2.0 * prob)
    return state, prob
