"""Classical and quantum bounds for Bell expressions.

Classical extrema are exact: the expression is multilinear in dichotomic
symbols, so the extrema over local hidden-variable models are attained at
deterministic +/-1 assignments, and those are enumerated in full. The walk is
a Gray code so each step flips one symbol and touches only the terms that
contain it.

Quantum numbers come in three strengths: the largest eigenvalue of a concrete
Bell operator (a certified lower bound on the quantum maximum of the abstract
expression), the sum of absolute coefficients over dichotomic terms (an upper
bound), and a sum-of-squares certificate check that can pin the maximum
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iter_product

import numpy as np

from .bell import BellExpression, Symbol
from .pauli import PauliSum, anticommutator_sum, top_eigenpair

SYMBOL_BUDGET = 28
BOUND_ATOL = 1e-9


class BudgetError(ValueError):
    """Exact enumeration would exceed the symbol budget."""


@dataclass
class ClassicalBounds:
    minimum: float
    maximum: float
    witness_min: dict[Symbol, int]
    witness_max: dict[Symbol, int]
    exact: bool = True


def _lex_rank(gray: int, m: int) -> int:
    """Rank of an assignment with symbol 0 most significant, +1 before -1."""
    rank = 0
    for j in range(m):
        if (gray >> j) & 1:
            rank |= 1 << (m - 1 - j)
    return rank


def _assignment_from_bits(bits: int, symbols: list[Symbol]) -> dict[Symbol, int]:
    return {s: -1 if (bits >> j) & 1 else 1 for j, s in enumerate(symbols)}


def classical_bounds(expr: BellExpression) -> ClassicalBounds:
    """Exact LHV extrema by full vertex enumeration (Gray-code walk).

    Ties break to the lexicographically smallest assignment (symbols sorted,
    +1 preferred). Raises BudgetError above SYMBOL_BUDGET symbols; use
    classical_sample_bound for a non-exact estimate there.
    """
    symbols = expr.symbols
    m = len(symbols)
    if m > SYMBOL_BUDGET:
        raise BudgetError(
            f"{m} symbols exceeds the exact-enumeration budget of "
            f"{SYMBOL_BUDGET}; classical_sample_bound gives a sampled, "
            "non-exact lower bound")
    if m == 0:
        w: dict[Symbol, int] = {}
        return ClassicalBounds(expr.constant, expr.constant, w, dict(w))

    index = {s: j for j, s in enumerate(symbols)}
    keys = sorted(expr.terms)
    coeffs = np.array([expr.terms[k] for k in keys], dtype=float)
    if float(np.max(np.abs(coeffs - np.round(coeffs)))) < 1e-12:
        coeffs = np.round(coeffs)  # exact integer walk when possible
    per_symbol = [[] for _ in range(m)]
    for t, key in enumerate(keys):
        for sym in key:
            per_symbol[index[sym]].append(t)
    per_symbol = [np.array(lst, dtype=np.intp) for lst in per_symbol]

    signs = np.ones(len(keys))
    value = float(np.sum(coeffs))
    best_max = best_min = value
    best_max_bits = best_min_bits = 0
    best_max_rank = best_min_rank = 0

    gray = 0
    for k in range(1, 1 << m):
        bit = (k & -k).bit_length() - 1
        gray ^= 1 << bit
        idx = per_symbol[bit]
        if idx.size:
            s = signs[idx]
            value -= 2.0 * float(coeffs[idx] @ s)
            signs[idx] = -s
        if value >= best_max - 1e-15:
            rank = _lex_rank(gray, m)
            if value > best_max + 1e-15 or rank < best_max_rank:
                best_max, best_max_bits, best_max_rank = value, gray, rank
        if value <= best_min + 1e-15:
            rank = _lex_rank(gray, m)
            if value < best_min - 1e-15 or rank < best_min_rank:
                best_min, best_min_bits, best_min_rank = value, gray, rank

    return ClassicalBounds(
        minimum=best_min + expr.constant,
        maximum=best_max + expr.constant,
        witness_min=_assignment_from_bits(best_min_bits, symbols),
        witness_max=_assignment_from_bits(best_max_bits, symbols),
    )


def classical_bounds_bruteforce(expr: BellExpression) -> tuple[float, float]:
    """Direct per-vertex re-evaluation; the independent oracle for tests."""
    symbols = expr.symbols
    lo, hi = math.inf, -math.inf
    for values in iter_product((1, -1), repeat=len(symbols)):
        v = expr.evaluate(dict(zip(symbols, values)))
        lo, hi = min(lo, v), max(hi, v)
    return lo, hi


def classical_sample_bound(expr: BellExpression, samples: int = 20000,
                           seed: int = 0) -> ClassicalBounds:
    """Random-vertex sampling; bounds are attained values, not certified extrema."""
    rng = np.random.default_rng(seed)
    symbols = expr.symbols
    best = ClassicalBounds(math.inf, -math.inf, {}, {}, exact=False)
    for _ in range(samples):
        assignment = {s: int(v) for s, v in
                      zip(symbols, rng.choice((-1, 1), size=len(symbols)))}
        v = expr.evaluate(assignment)
        if v > best.maximum:
            best.maximum, best.witness_max = v, assignment
        if v < best.minimum:
            best.minimum, best.witness_min = v, assignment
    return best


def quantum_lower_bound(op: PauliSum, cap: int | None = None
                        ) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of the rendered operator and a witness eigenvector.

    This is the maximum over states for these fixed settings, hence a
    certified lower bound on the quantum maximum of the abstract expression.
    """
    dense = op.to_dense() if cap is None else op.to_dense(cap)
    return top_eigenpair(dense)


def dichotomic_term_bound(expr: BellExpression) -> float:
    """constant + sum |coefficients|: quantum upper bound for dichotomic settings."""
    return expr.constant + float(sum(abs(c) for c in expr.terms.values()))


# --- sum-of-squares certificates ---------------------------------------------

@dataclass(frozen=True)
class SosCertificate:
    """Pairing of expression terms claimed to certify a quantum maximum."""

    pairs: tuple[tuple[int, int], ...]
    claimed_bound: float

    def __post_init__(self):
        flat = [i for pair in self.pairs for i in pair]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("pairs must partition the term indices exactly once")


@dataclass
class SosReport:
    residual: float
    pairing_ok: bool
    verified: bool


def sos_verify(terms: list[PauliSum], cert: SosCertificate,
               atol: float = 1e-10) -> SosReport:
    """Check a sum-of-squares certificate against the dense operator identity.

    Verifies (i) the paired anticommutators cancel overall, and (ii)
    claimed * I - sum(terms) equals (1/sqrt2) * sum (I - (P+Q)/sqrt2)^2.
    """
    n = terms[0].n
    if any(t.n != n for t in terms):
        raise ValueError("certificate terms act on different qubit counts")
    if 2 * len(cert.pairs) != len(terms):
        raise ValueError("pairs do not cover the term list")

    anticomms = [anticommutator_sum(terms[i], terms[j]) for i, j in cert.pairs]
    total = PauliSum.zero(n)
    for ac in anticomms:
        total = total + ac
    pairing_ok = total.is_zero and _negating_match(anticomms)

    dim = 1 << n
    eye = np.eye(dim)
    b = np.zeros((dim, dim), dtype=complex)
    for t in terms:
        b += t.to_dense()
    rhs = np.zeros((dim, dim), dtype=complex)
    root2 = math.sqrt(2)
    for i, j in cert.pairs:
        s = eye - (terms[i].to_dense() + terms[j].to_dense()) / root2
        rhs += s @ s
    rhs /= root2
    residual = float(np.max(np.abs(cert.claimed_bound * eye - b - rhs)))
    return SosReport(residual=residual, pairing_ok=pairing_ok,
                     verified=pairing_ok and residual <= atol)


def _negating_match(anticomms: list[PauliSum]) -> bool:
    """Nonzero pair anticommutators must cancel one against another."""
    live = [ac for ac in anticomms if not ac.is_zero]
    used = [False] * len(live)
    for i, ac in enumerate(live):
        if used[i]:
            continue
        found = False
        for j in range(i + 1, len(live)):
            if not used[j] and (ac + live[j]).is_zero:
                used[i] = used[j] = True
                found = True
                break
        if not found:
            return False
    return True


def _pairings(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in _pairings(remaining):
            yield [(first, partner)] + tail


def sos_pairing_search(terms: list[PauliSum], claimed_bound: float,
                       atol: float = 1e-10) -> tuple[SosCertificate | None, SosReport | None]:
    """Brute-force search for a verifying pairing; limited to 8 terms."""
    if len(terms) > 8:
        raise ValueError("pairing search is limited to 8 terms")
    if len(terms) % 2:
        raise ValueError("need an even number of terms")
    for pairing in _pairings(list(range(len(terms)))):
        cert = SosCertificate(tuple(pairing), claimed_bound)
        report = sos_verify(terms, cert, atol)
        if report.verified:
            return cert, report
    return None, None


# --- see-saw heuristic ---------------------------------------------------------

_PAULI_2X2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_AXES = ((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))


def _bloch_matrix(bloch) -> np.ndarray:
    bx, by, bz = bloch
    return bx * _PAULI_2X2["X"] + by * _PAULI_2X2["Y"] + bz * _PAULI_2X2["Z"]


@dataclass
class SeesawResult:
    value: float
    best_bloch: dict[Symbol, tuple[float, float, float]]
    trajectories: list[list[float]] = field(default_factory=list)


def _render_dense(expr: BellExpression, blochs: dict[Symbol, np.ndarray],
                  skip: Symbol | None = None) -> np.ndarray:
    """Dense operator; with ``skip`` the symbol's factor is replaced by identity."""
    n = expr.parties
    dim = 1 << n
    out = expr.constant * np.eye(dim, dtype=complex) if (expr.constant and skip is None) \
        else np.zeros((dim, dim), dtype=complex)
    for key, coeff in expr.terms.items():
        if skip is not None and skip not in key:
            continue
        by_party = {p: lab for p, lab in key}
        m = np.ones((1, 1), dtype=complex)
        for p in range(n):
            if p in by_party and (skip is None or (p, by_party[p]) != skip):
                m = np.kron(m, _bloch_matrix(blochs[(p, by_party[p])]))
            else:
                m = np.kron(m, _PAULI_2X2["I"])
        out += coeff * m
    return out


def _partial_trace_keep(m: np.ndarray, party: int, n: int) -> np.ndarray:
    left = 1 << party
    right = 1 << (n - party - 1)
    m6 = m.reshape(left, 2, right, left, 2, right)
    return np.einsum("aibajb->ij", m6)


def seesaw_optimize(expr: BellExpression, restarts: int = 16, seed: int = 0,
                    max_sweeps: int = 500, gain_tol: float = 1e-9) -> SeesawResult:
    """Alternating maximization over the state and per-symbol Bloch vectors.

    Restart 0 is an axis-aligned warm start (per party, symbols take the z, x,
    y axes in sorted order); remaining restarts are random unit vectors. The
    objective is nondecreasing within each restart; the best converged value
    over restarts is returned.
    """
    rng = np.random.default_rng(seed)
    symbols = expr.symbols
    n = expr.parties
    best_value = -math.inf
    best_bloch: dict[Symbol, tuple[float, float, float]] = {}
    trajectories: list[list[float]] = []

    for restart in range(max(1, restarts)):
        blochs: dict[Symbol, np.ndarray] = {}
        per_party_count: dict[int, int] = {}
        for sym in symbols:
            if restart == 0:
                k = per_party_count.get(sym[0], 0)
                blochs[sym] = np.array(_AXES[k % 3])
                per_party_count[sym[0]] = k + 1
            else:
                v = rng.normal(size=3)
                blochs[sym] = v / np.linalg.norm(v)

        trajectory: list[float] = []
        value = -math.inf
        for _ in range(max_sweeps):
            _, state = top_eigenpair(_render_dense(expr, blochs))
            rho = np.outer(state, state.conj())
            for sym in symbols:
                a = _render_dense(expr, blochs, skip=sym)
                ptr = _partial_trace_keep(rho @ a, sym[0], n)
                h = (ptr + ptr.conj().T) / 2
                u = np.array([np.trace(h @ _PAULI_2X2[c]).real for c in "XYZ"])
                norm = float(np.linalg.norm(u))
                if norm > 1e-13:
                    blochs[sym] = u / norm
            new_value = float(
                np.vdot(state, _render_dense(expr, blochs) @ state).real)
            trajectory.append(new_value)
            if new_value < value - 1e-12:
                raise AssertionError("see-saw objective decreased")
            if new_value - value < gain_tol:
                value = new_value
                break
            value = new_value
        trajectories.append(trajectory)
        if value > best_value:
            best_value = value
            best_bloch = {s: tuple(float(c) for c in b) for s, b in blochs.items()}

    return SeesawResult(best_value, best_bloch, trajectories)


# --- aggregated report ----------------------------------------------------------

@dataclass
class BoundsReport:
    """Everything the pipeline can certify about one Bell expression."""

    classical_min: float
    classical_max: float
    classical_witness: dict[Symbol, int]
    quantum_lower: float
    quantum_witness: np.ndarray | None
    rough_bound: float | None
    dichotomic_bound: float
    sos_status: str = "not-attempted"
    seesaw_value: float | None = None

    @property
    def violation(self) -> bool:
        return bool(self.quantum_lower > self.classical_max + BOUND_ATOL)

    def to_dict(self, include_witness_state: bool = True) -> dict:
        out = {
            "classical_min": float(self.classical_min),
            "classical_max": float(self.classical_max),
            "classical_witness": {f"{lab}_{p}": int(v) for (p, lab), v
                                  in sorted(self.classical_witness.items())},
            "quantum_lower": float(self.quantum_lower),
            "rough_bound": None if self.rough_bound is None else float(self.rough_bound),
            "dichotomic_bound": float(self.dichotomic_bound),
            "sos_status": self.sos_status,
            "seesaw_value": None if self.seesaw_value is None else float(self.seesaw_value),
            "violation": self.violation,
        }
        if include_witness_state and self.quantum_witness is not None:
            out["quantum_witness_state"] = [
                [round(float(a.real), 12), round(float(a.imag), 12)]
                for a in self.quantum_witness]
        return out
