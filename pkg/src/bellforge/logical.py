"""Logical Pauli operators of a two-dimensional code space.

For a basis {|0>, |1>} the four operators are the Pauli-like outer-product
combinations

    Z = |0><0| - |1><1|      X = |0><1| + |1><0|
    Y = i(|1><0| - |0><1|)   ident = |0><0| + |1><1|

expanded over n-qubit Pauli strings. Two construction routes are provided and
must agree: a dense outer-product route (any explicit basis, small n) and a
symbolic stabilizer route (half-group split, any n the group fits).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .pauli import PauliSum, PauliTerm, QubitCapError, pauli_decompose, product
from .stabilizer import LogicalBasis, StabilizerGroup, basis_from_flip, commuting_split

NUMERIC_QUBIT_CAP = 6   # the 4^n Pauli-basis scan is only run at small n


@dataclass(frozen=True)
class LogicalPaulis:
    """The operator quadruple attached to one logical basis."""

    basis: LogicalBasis
    z: PauliSum
    x: PauliSum
    y: PauliSum
    ident: PauliSum

    @property
    def n(self) -> int:
        return self.basis.n

    def direction(self, k: tuple[float, float, float]) -> PauliSum:
        """k_x * X + k_y * Y + k_z * Z for a Bloch-like direction k."""
        kx, ky, kz = (float(c) for c in k)
        out = PauliSum.zero(self.n)
        if kx:
            out = out + kx * self.x
        if ky:
            out = out + ky * self.y
        if kz:
            out = out + kz * self.z
        return out

    def to_json(self) -> str:
        payload = {
            name: [[s, round(c, 12)] for s, c in op.to_strings()]
            for name, op in (("z", self.z), ("x", self.x),
                             ("y", self.y), ("i", self.ident))
        }
        payload["n"] = self.n
        return json.dumps(payload, sort_keys=True)


def _outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.outer(a, b.conj())


def logical_paulis_numeric(basis: LogicalBasis,
                           cap: int = NUMERIC_QUBIT_CAP) -> LogicalPaulis:
    """Dense outer products decomposed in the Pauli basis by trace inner products."""
    if basis.n > cap:
        raise QubitCapError(
            f"numeric construction scans 4^n strings; n={basis.n} exceeds {cap}")
    zero, one = basis.zero_ket, basis.one_ket
    z_m = _outer(zero, zero) - _outer(one, one)
    x_m = _outer(zero, one) + _outer(one, zero)
    y_m = 1j * (_outer(one, zero) - _outer(zero, one))
    i_m = _outer(zero, zero) + _outer(one, one)
    return LogicalPaulis(
        basis=basis,
        z=pauli_decompose(z_m, basis.n),
        x=pauli_decompose(x_m, basis.n),
        y=pauli_decompose(y_m, basis.n),
        ident=pauli_decompose(i_m, basis.n),
    )


def logical_paulis_symbolic(group: StabilizerGroup, flip: PauliTerm,
                            basis: LogicalBasis | None = None) -> LogicalPaulis:
    """Half-group split construction.

    Z collects the group half anticommuting with the flip, X the commuting
    half times the flip, each scaled 2/2^n; Y is i*X@Z. Agrees term-for-term
    with the numeric route on the basis derived from the same data.
    """
    if basis is None:
        basis = basis_from_flip(group, flip)
    comm, anti = commuting_split(group, flip)
    if not anti:
        raise ValueError("flip commutes with the whole group; no logical Z")
    w = 2.0 / (1 << group.n)
    z_op = PauliSum.from_terms(((e, w) for e in anti), n=group.n)
    x_op = PauliSum.from_terms(((e * flip, w) for e in comm), n=group.n)
    ident = PauliSum.from_terms(((e, w) for e in comm), n=group.n)
    y_op = product(x_op, z_op, scale=1j)
    return LogicalPaulis(basis=basis, z=z_op, x=x_op, y=y_op, ident=ident)


def rotated_z(ops: LogicalPaulis, theta: float) -> PauliSum:
    """cos(theta) * Z + sin(theta) * X, the logical Z rotated in the xz plane."""
    return ops.direction((np.sin(theta), 0.0, np.cos(theta)))


def sums_match(a: PauliSum, b: PauliSum, atol: float = 1e-12) -> bool:
    """Term-by-term agreement of two sums."""
    if a.n != b.n:
        return False
    keys = set(k for k, _ in (a.to_strings())) | set(k for k, _ in b.to_strings())
    da, db = dict(a.to_strings()), dict(b.to_strings())
    return all(abs(da.get(k, 0.0) - db.get(k, 0.0)) <= atol for k in keys)
