"""Operator construction on the atom x two-cavity-mode product space.

The joint state space is spanned by product states ``|level, n+, n->`` where
``level`` is an atomic level label and ``n+``/``n-`` count photons in the
sigma+ / sigma- polarised cavity mode.  Basis ordering is atom-major::

    index(level, n+, n-) = (level_index * (c+1) + n+) * (c+1) + n-

with ``c`` the photon cutoff per mode (default 1: zero or one photon).  This
ordering is fixed so that serialized matrices and regression data stay stable.

All operators are dense complex numpy arrays.  User-facing frequencies are
nu = omega/2pi in MHz throughout the package; quantities in "angular" units
are rad/us (1 MHz corresponds to 2pi rad/us), and the 2pi conversion happens
exactly once, inside the Hamiltonian/dissipator builders.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

SLOT_ATOM = "atom"
SLOT_SIGMA_PLUS = "sigma_plus_mode"
SLOT_SIGMA_MINUS = "sigma_minus_mode"
_SLOTS = (SLOT_ATOM, SLOT_SIGMA_PLUS, SLOT_SIGMA_MINUS)


@dataclass(frozen=True)
class HilbertSpace:
    """Product space of an atomic level ladder and two photon modes.

    Parameters
    ----------
    atomic_levels : tuple of str
        Ordered, unique level labels.
    photon_cutoff : int
        Maximum photon number per polarisation mode (>= 1).
    """

    atomic_levels: tuple[str, ...]
    photon_cutoff: int = 1

    def __post_init__(self):
        labels = tuple(self.atomic_levels)
        object.__setattr__(self, "atomic_levels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError("atomic level labels must be unique")
        if not labels:
            raise ValueError("need at least one atomic level")
        if self.photon_cutoff < 1:
            raise ValueError("photon_cutoff must be >= 1 (no photon dynamics otherwise)")

    @property
    def n_levels(self) -> int:
        return len(self.atomic_levels)

    @property
    def n_photon(self) -> int:
        """Fock-space dimension of one mode, cutoff + 1."""
        return self.photon_cutoff + 1

    @property
    def total_dim(self) -> int:
        return self.n_levels * self.n_photon ** 2

    def level_index(self, label: str) -> int:
        try:
            return self.atomic_levels.index(label)
        except ValueError:
            raise KeyError(f"unknown atomic level {label!r}; "
                           f"known: {self.atomic_levels}") from None

    def index(self, label: str, n_plus: int = 0, n_minus: int = 0) -> int:
        """Basis index of the product state ``|label, n+, n->``."""
        c = self.n_photon
        if not (0 <= n_plus < c and 0 <= n_minus < c):
            raise ValueError(f"photon numbers must lie in [0, {self.photon_cutoff}]")
        return (self.level_index(label) * c + n_plus) * c + n_minus

    def basis_state(self, label: str, n_plus: int = 0, n_minus: int = 0) -> np.ndarray:
        vec = np.zeros(self.total_dim, dtype=complex)
        vec[self.index(label, n_plus, n_minus)] = 1.0
        return vec

    def pure_state(self, label: str, n_plus: int = 0, n_minus: int = 0) -> np.ndarray:
        """Density matrix of the pure product state ``|label, n+, n->``."""
        v = self.basis_state(label, n_plus, n_minus)
        return np.outer(v, v.conj())

    def identity(self) -> np.ndarray:
        return np.eye(self.total_dim, dtype=complex)

    def level_projector(self, label: str) -> np.ndarray:
        """Projector on one atomic level, identity on both photon modes."""
        return transition(self, label, label)


def annihilator(cutoff: int) -> np.ndarray:
    """Single-mode lowering operator on a truncated Fock space.

    Entry (n-1, n) is sqrt(n); dimension is cutoff + 1.  A cutoff of zero is
    rejected because it leaves no photon dynamics at all.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    a = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for n in range(1, cutoff + 1):
        a[n - 1, n] = np.sqrt(n)
    return a


def embed(space: HilbertSpace, slot: str, local_op: np.ndarray) -> np.ndarray:
    """Embed a single-factor operator into the product space.

    The operator acts on ``slot`` (one of ``atom``, ``sigma_plus_mode``,
    ``sigma_minus_mode``) and as the identity on the other two factors.
    """
    if slot not in _SLOTS:
        raise ValueError(f"slot must be one of {_SLOTS}, got {slot!r}")
    local_op = np.asarray(local_op, dtype=complex)
    local_dim = space.n_levels if slot == SLOT_ATOM else space.n_photon
    if local_op.shape != (local_dim, local_dim):
        raise ValueError(f"operator for slot {slot!r} must be "
                         f"{local_dim}x{local_dim}, got {local_op.shape}")
    ident_atom = np.eye(space.n_levels, dtype=complex)
    ident_ph = np.eye(space.n_photon, dtype=complex)
    factors = {SLOT_ATOM: ident_atom, SLOT_SIGMA_PLUS: ident_ph,
               SLOT_SIGMA_MINUS: ident_ph}
    factors[slot] = local_op
    return np.kron(np.kron(factors[SLOT_ATOM], factors[SLOT_SIGMA_PLUS]),
                   factors[SLOT_SIGMA_MINUS])


def transition(space: HilbertSpace, i: str, j: str) -> np.ndarray:
    """Atomic transition operator ``|i><j|`` times the photon identity."""
    op = np.zeros((space.n_levels, space.n_levels), dtype=complex)
    op[space.level_index(i), space.level_index(j)] = 1.0
    return embed(space, SLOT_ATOM, op)


def mode_annihilator(space: HilbertSpace, polarisation: str) -> np.ndarray:
    """Photon lowering operator of one cavity mode on the full space."""
    slot = {"plus": SLOT_SIGMA_PLUS, "minus": SLOT_SIGMA_MINUS}[polarisation]
    return embed(space, slot, annihilator(space.photon_cutoff))


def expectation(rho: np.ndarray, op: np.ndarray) -> complex:
    """tr(rho . op); imaginary part vanishes for Hermitian op and physical rho."""
    rho = np.asarray(rho)
    op = np.asarray(op)
    if rho.shape != op.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"dimension mismatch: rho {rho.shape}, op {op.shape}")
    # tr(rho op) = sum_ij rho_ij op_ji
    return complex(np.sum(rho * op.T))


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation from m = m^dagger."""
    return float(np.abs(m - m.conj().T).max())


def assert_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                          trace_tol: float = 1e-9, eig_tol: float = 1e-9,
                          name: str = "rho") -> None:
    """Validate the physicality of a density matrix.

    Checks Hermiticity, a real trace in [0, 1 + trace_tol], and spectrum
    bounded below by -eig_tol.  Raises ValueError with a diagnostic.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be square, got shape {rho.shape}")
    defect = hermiticity_defect(rho)
    if defect > herm_tol:
        raise ValueError(f"{name} is not Hermitian: defect {defect:.3e} > {herm_tol:.0e}")
    tr = np.trace(rho)
    if abs(tr.imag) > trace_tol or not (-trace_tol <= tr.real <= 1.0 + trace_tol):
        raise ValueError(f"{name} has unphysical trace {tr}")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if lo < -eig_tol:
        raise ValueError(f"{name} has negative eigenvalue {lo:.3e} < -{eig_tol:.0e}")


@dataclass(frozen=True)
class LindbladDissipator:
    """Dissipative part of a master equation in damped-feed form.

    Applies ``L[rho] = sum_k w_k J_k rho J_k^dag - (D rho + rho D)`` with
    nonnegative feed weights ``w_k`` (angular units, rad/us) and a Hermitian
    damping operator ``D``.  A channel with Lindblad rate gamma corresponds to
    ``w = 2*gamma`` together with ``gamma J^dag J`` inside ``D``; keeping ``D``
    explicit allows damping whose feed is intentionally dropped (population
    leaving the modeled system).
    """

    channels: tuple[tuple[float, np.ndarray], ...]
    damping: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        damping = np.asarray(self.damping, dtype=complex)
        d = damping.shape[0]
        if damping.shape != (d, d):
            raise ValueError("damping operator must be square")
        if hermiticity_defect(damping) > 1e-12 * max(1.0, np.abs(damping).max()):
            raise ValueError("damping operator must be Hermitian")
        chans = []
        for w, op in self.channels:
            if w < 0:
                raise ValueError(f"negative feed weight {w}")
            op = np.asarray(op, dtype=complex)
            if op.shape != (d, d):
                raise ValueError("channel operator dimension mismatch")
            chans.append((float(w), op))
        object.__setattr__(self, "channels", tuple(chans))
        object.__setattr__(self, "damping", damping)
        object.__setattr__(self, "dim", d)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Evaluate L[rho]."""
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise ValueError("rho dimension mismatch")
        out = -(self.damping @ rho + rho @ self.damping)
        for w, op in self.channels:
            out += w * (op @ rho @ op.conj().T)
        return out

    __call__ = apply

    def trace_weight(self) -> np.ndarray:
        """Hermitian operator S with d tr(rho)/dt = -tr(S rho).

        S = 2 D - sum_k w_k J_k^dag J_k; it vanishes when the dissipator is
        trace preserving and is positive semidefinite for pure loss.
        """
        s = 2.0 * self.damping.copy()
        for w, op in self.channels:
            s -= w * (op.conj().T @ op)
        return s

    def is_trace_preserving(self, tol: float = 1e-12) -> bool:
        scale = max(1.0, float(np.abs(self.damping).max()))
        return bool(np.abs(self.trace_weight()).max() <= tol * scale)

    def merged(self, other: "LindbladDissipator") -> "LindbladDissipator":
        """Combine two dissipators acting on the same space."""
        if other.dim != self.dim:
            raise ValueError("cannot merge dissipators of different dimension")
        return LindbladDissipator(self.channels + other.channels,
                                  self.damping + other.damping)
