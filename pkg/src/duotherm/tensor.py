"""Dense complex linear algebra over tensor-factored Hilbert spaces.

Composite indices are row-major: in ``kron(a, b)`` the left factor is the
slowest-varying (most significant) index.  Subsystem shapes are plain tuples
of per-factor dimensions whose product must equal the matrix dimension.

Eigendecomposition is delegated to ``numpy.linalg.eigh`` behind the
``herm_eig`` surface; everything else is reshape/einsum bookkeeping.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, ValidationError

# Alias only; shapes are ordinary tuples such as (2, 2, 2).
SubsystemShape = tuple[int, ...]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
STATE_NORM_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-9

_LETTERS = string.ascii_lowercase + string.ascii_uppercase


def as_complex(m) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def basis_state(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise DimensionMismatchError(f"basis index {index} outside dimension {dim}")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m).T)


def kron(a, b) -> np.ndarray:
    """Kronecker product with the left operand as the slower index."""
    return np.kron(as_complex(a), as_complex(b))


def kron_all(*factors) -> np.ndarray:
    out = as_complex(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_complex(f))
    return out


def _check_square_shape(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatchError(f"invalid subsystem shape {dims}")
    total = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (total, total):
        raise DimensionMismatchError(
            f"matrix shape {m.shape} does not match subsystem shape {dims} (dim {total})"
        )
    return dims


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    ``keep`` may be empty, in which case the 1x1 matrix ``[[trace(m)]]``
    is returned.  Kept factors stay in their original relative order.
    """
    m = as_complex(m)
    dims = _check_square_shape(m, dims)
    n = len(dims)
    keep = tuple(sorted({int(k) for k in keep}))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} outside factor range 0..{n - 1}")
    row = list(_LETTERS[:n])
    col = list(row)
    out = ""
    for pos, k in enumerate(keep):
        col[k] = _LETTERS[n + pos]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    expr = "".join(row) + "".join(col) + "->" + out
    t = m.reshape(dims + dims)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return np.einsum(expr, t).reshape(kept_dim, kept_dim)


def partial_transpose(m, dims: Sequence[int], flip: Iterable[int]) -> np.ndarray:
    """Transpose the factors listed in ``flip``; empty flip is the identity."""
    m = as_complex(m)
    dims = _check_square_shape(m, dims)
    n = len(dims)
    flip = sorted({int(f) for f in flip})
    if any(f < 0 or f >= n for f in flip):
        raise DimensionMismatchError(f"flip indices {flip} outside factor range 0..{n - 1}")
    perm = list(range(2 * n))
    for f in flip:
        perm[f], perm[n + f] = perm[n + f], perm[f]
    total = m.shape[0]
    return m.reshape(dims + dims).transpose(perm).reshape(total, total)


def hermiticity_defect(m) -> float:
    m = as_complex(m)
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def herm_eig(m, tol: float = HERMITICITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(vals, vecs)`` with eigenvalues ascending and eigenvectors in
    columns, so ``vecs @ diag(vals) @ vecs.conj().T`` reconstructs the input.
    Rejects inputs whose Hermiticity defect exceeds ``tol``.
    """
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValidationError(f"matrix is not Hermitian: defect {defect:.3e} > {tol:.1e}")
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def embed_operator(op, dims: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Expand ``op`` acting on the factors ``targets`` (in that order) to the
    full space described by ``dims``, identity elsewhere."""
    op = as_complex(op)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets) or any(t < 0 or t >= n for t in targets):
        raise DimensionMismatchError(f"invalid target factors {targets} for {n} factors")
    d_t = int(np.prod([dims[t] for t in targets]))
    if op.shape != (d_t, d_t):
        raise DimensionMismatchError(
            f"operator shape {op.shape} does not match target dimensions (dim {d_t})"
        )
    rest = [i for i in range(n) if i not in targets]
    d_r = int(np.prod([dims[i] for i in rest])) if rest else 1
    big = np.kron(op, np.eye(d_r, dtype=complex))
    order = list(targets) + rest  # current factor order of `big`
    cur = [dims[i] for i in order]
    perm = [order.index(i) for i in range(n)]
    total = int(np.prod(dims))
    t = big.reshape(cur + cur).transpose(perm + [p + n for p in perm])
    return t.reshape(total, total)


def validate_pure_state(psi, tol: float = STATE_NORM_TOL) -> np.ndarray:
    psi = as_complex(psi).reshape(-1)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state norm {norm!r} deviates from 1 by more than {tol:.1e}")
    return psi


def validate_density_matrix(
    rho,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    eig_floor: float = EIGENVALUE_FLOOR,
) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; returns the input array."""
    rho = as_complex(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density matrix must be square, got shape {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > herm_tol:
        raise ValidationError(f"density matrix not Hermitian: defect {defect:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValidationError(f"density matrix trace {tr!r} is not 1")
    smallest = float(np.min(np.linalg.eigvalsh((rho + dagger(rho)) / 2.0)))
    if smallest < eig_floor:
        raise ValidationError(f"density matrix has negative eigenvalue {smallest:.3e}")
    return rho


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Full-rank random state from a Ginibre square; test/validation input helper."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ dagger(g)
    return rho / np.trace(rho)
