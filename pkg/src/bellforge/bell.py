"""Bell operator pipeline: logical form, stabilizer form, measurement settings,
and the abstract multilinear Bell expression.

The pipeline starts from a scaled direction in the logical Bloch sphere,
renders it as a Pauli-string operator, optionally rewrites one qubit's factors
through a complementary setting pair, and finally replaces operators by
per-party symbols. All stages are matrix-identical; only the bookkeeping
changes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .logical import LogicalPaulis, logical_paulis_numeric, logical_paulis_symbolic
from .pauli import PauliSum, PauliTerm, product
from .stabilizer import (
    GraphSpec,
    LogicalBasis,
    StabilizerGroup,
    basis_from_flip,
    bell_basis,
    ghz3_basis,
    graph_state_generators,
)

DICHOTOMY_ATOL = 1e-12


class DecompositionError(ValueError):
    """The requested complementary rewrite does not apply to this operator."""


def party_letter(party: int) -> str:
    return chr(ord("A") + party % 26)


@dataclass(frozen=True)
class Setting:
    """A dichotomic single-qubit observable assigned to one party."""

    party: int
    label: str
    op: PauliSum

    def __post_init__(self):
        if self.op.n != 1:
            raise ValueError("setting operator must be single-qubit")
        sq = product(self.op, self.op)
        if len(sq) != 1 or abs(sq.coeff(PauliTerm.identity(1)) - 1.0) > DICHOTOMY_ATOL:
            raise ValueError(f"setting {self.label} is not dichotomic: op^2 != I")

    @classmethod
    def from_bloch(cls, party: int, label: str, bloch) -> "Setting":
        bx, by, bz = (float(v) for v in bloch)
        norm = math.sqrt(bx * bx + by * by + bz * bz)
        op = PauliSum.from_strings(
            [("X", bx / norm), ("Y", by / norm), ("Z", bz / norm)], n=1)
        return cls(party, label, op)

    def bloch(self) -> tuple[float, float, float]:
        return (self.op.coeff(PauliTerm.from_string("X")),
                self.op.coeff(PauliTerm.from_string("Y")),
                self.op.coeff(PauliTerm.from_string("Z")))

    def embed(self, n: int) -> PauliSum:
        return embed_single(self.op, self.party, n)


def embed_single(op: PauliSum, party: int, n: int) -> PauliSum:
    """Place a single-qubit operator at one qubit of an n-qubit register."""
    if op.n != 1:
        raise ValueError("expected a single-qubit operator")
    if not 0 <= party < n:
        raise ValueError(f"party {party} outside range 0..{n - 1}")
    return PauliSum(n, {(x << party, z << party): c
                        for (x, z), c in op._terms.items()})


Symbol = tuple[int, str]          # (party, label)
TermKey = tuple[Symbol, ...]      # sorted by party, one factor per party


@dataclass
class BellExpression:
    """Multilinear polynomial in abstract per-party dichotomic symbols."""

    parties: int
    terms: dict[TermKey, float] = field(default_factory=dict)
    constant: float = 0.0

    def __post_init__(self):
        clean: dict[TermKey, float] = {}
        for key, coeff in self.terms.items():
            key = tuple(sorted(key))
            seen = [p for p, _ in key]
            if len(set(seen)) != len(seen):
                raise ValueError(f"term {key} repeats a party")
            if not all(0 <= p < self.parties for p in seen):
                raise ValueError(f"term {key} names a party outside 0..{self.parties - 1}")
            if key == ():
                raise ValueError("empty factor tuple; fold it into the constant")
            clean[key] = clean.get(key, 0.0) + float(coeff)
        self.terms = {k: c for k, c in clean.items() if c != 0.0}

    @property
    def symbols(self) -> list[Symbol]:
        out = {s for key in self.terms for s in key}
        return sorted(out)

    def symbols_by_party(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for party, label in self.symbols:
            out.setdefault(party, []).append(label)
        return {p: sorted(ls) for p, ls in out.items()}

    def evaluate(self, assignment: dict[Symbol, int]) -> float:
        total = self.constant
        for key, coeff in self.terms.items():
            v = coeff
            for sym in key:
                v *= assignment[sym]
            total += v
        return total

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        def fmt(sym: Symbol) -> str:
            return f"{sym[1]}_{sym[0]}"

        parts = []
        if self.constant:
            parts.append(f"{self.constant:+g}")
        for key in sorted(self.terms):
            c = self.terms[key]
            body = "*".join(fmt(s) for s in key)
            if abs(abs(c) - 1.0) < 1e-12:
                parts.append(("+ " if c > 0 else "- ") + body)
            else:
                parts.append(f"{c:+g}*{body}")
        return " ".join(parts) if parts else "0"

    def scaled(self, factor: float) -> "BellExpression":
        return BellExpression(self.parties,
                              {k: factor * c for k, c in self.terms.items()},
                              factor * self.constant)


def render_operator(expr: BellExpression,
                    bindings: dict[Symbol, Setting]) -> PauliSum:
    """Substitute bound settings into the expression, yielding the Bell operator."""
    n = expr.parties
    out = PauliSum.identity(n, expr.constant) if expr.constant else PauliSum.zero(n)
    for key, coeff in expr.terms.items():
        acc = PauliSum.identity(n, coeff)
        for sym in key:
            try:
                setting = bindings[sym]
            except KeyError:
                raise ValueError(f"symbol {sym} is not bound to a setting") from None
            if setting.party != sym[0]:
                raise ValueError(f"binding for {sym} names party {setting.party}")
            acc = product(acc, setting.embed(n))
        out = out + acc
    return out


def evaluate_quantum(expr: BellExpression, bindings: dict[Symbol, Setting],
                     state: np.ndarray) -> float:
    """<B> for bound settings on a state vector or density matrix."""
    missing = [s for s in expr.symbols if s not in bindings]
    if missing:
        raise ValueError(f"unbound symbols: {missing}")
    return render_operator(expr, bindings).expectation(state)


def symbolize(op: PauliSum, symbol_map: dict[str, str],
              constant_from_identity: bool = True
              ) -> tuple[BellExpression, dict[Symbol, Setting]]:
    """Replace each single-qubit Pauli by a per-party symbol.

    ``symbol_map`` sends Pauli letters to symbol names, e.g. {"Z": "A",
    "X": "B", "Y": "C"}. The all-identity term becomes the expression's
    constant. Every non-identity letter must be mapped.
    """
    n = op.n
    terms: dict[TermKey, float] = {}
    constant = 0.0
    bindings: dict[Symbol, Setting] = {}
    for term, coeff in op.items():
        if term.weight == 0:
            if not constant_from_identity:
                raise ValueError("identity term present but constants disallowed")
            constant += coeff
            continue
        key = []
        for q in range(n):
            letter = term.letter(q)
            if letter == "I":
                continue
            if letter not in symbol_map:
                raise ValueError(f"no symbol mapped for Pauli letter {letter}")
            label = symbol_map[letter]
            sym = (q, label)
            key.append(sym)
            if sym not in bindings:
                bindings[sym] = Setting(
                    q, label, PauliSum.from_strings([(letter, 1.0)], n=1))
        terms[tuple(sorted(key))] = terms.get(tuple(sorted(key)), 0.0) + coeff
    return BellExpression(n, terms, constant), bindings


# --- complementary setting rewrite ------------------------------------------

_BLOCH_KEYS = (("X", (1, 0)), ("Y", (1, 1)), ("Z", (0, 1)))


def _pivot_bloch(parts: dict[tuple[int, int], float]) -> np.ndarray:
    vec = np.zeros(3)
    for i, (_, bits) in enumerate(_BLOCH_KEYS):
        vec[i] = parts.get(bits, 0.0)
    return vec


def _canonical_direction(vec: np.ndarray) -> tuple[np.ndarray, float]:
    """Unit direction with first nonzero component positive, plus the scale."""
    norm = float(np.linalg.norm(vec))
    d = vec / norm
    for comp in d:
        if abs(comp) > 1e-12:
            if comp < 0:
                return -d, -norm
            break
    return d, norm


def _bloch_sum(vec: np.ndarray) -> PauliSum:
    return PauliSum.from_strings(
        [(letter, float(v)) for (letter, _), v in zip(_BLOCH_KEYS, vec)
         if abs(v) > 1e-15], n=1)


@dataclass
class DecomposedOperator:
    """A Bell operator rewritten over a complementary setting pair at one qubit.

    Each product is coeff * (setting at pivot) x (restriction on the other
    qubits); the restriction term always has identity at the pivot.
    """

    n: int
    pivot: int
    settings: tuple[Setting, Setting]
    products: list[tuple[float, int, PauliTerm]]

    def to_pauli_sum(self) -> PauliSum:
        out = PauliSum.zero(self.n)
        for coeff, s_idx, rest in self.products:
            emb = self.settings[s_idx].embed(self.n)
            out = out + coeff * product(emb, PauliSum.from_terms([(rest, 1.0)]))
        return out

    def term_operators(self) -> list[PauliSum]:
        """One PauliSum per product, signs included (SOS certificate inputs)."""
        out = []
        for coeff, s_idx, rest in self.products:
            emb = self.settings[s_idx].embed(self.n)
            out.append(coeff * product(emb, PauliSum.from_terms([(rest, 1.0)])))
        return out


def complementary_decompose(op: PauliSum, pivot: int) -> DecomposedOperator:
    """Rewrite the pivot qubit's factors over a complementary observable pair.

    Terms are grouped by their restriction to the other qubits. Each group's
    pivot content must be traceless; across groups exactly two orthogonal
    Bloch directions must occur. Two singleton groups are split through
    (M+N)/sqrt2 and (M-N)/sqrt2; richer group structure keeps each group's
    own unit combination as a setting.
    """
    if not 0 <= pivot < op.n:
        raise ValueError(f"pivot {pivot} outside range 0..{op.n - 1}")
    if op.is_zero:
        raise DecompositionError("cannot decompose the zero operator")
    pivot_bit = 1 << pivot

    groups: dict[tuple[int, int], dict[tuple[int, int], float]] = {}
    for term, coeff in op.items():
        rest_key = (term.x_mask & ~pivot_bit, term.z_mask & ~pivot_bit)
        pbits = ((term.x_mask >> pivot) & 1, (term.z_mask >> pivot) & 1)
        if pbits == (0, 0):
            raise DecompositionError(
                f"term {term.letters} has identity at the pivot; no pairing")
        groups.setdefault(rest_key, {})[pbits] = coeff

    resolved = []  # (scale, direction ndarray, rest_key)
    for rest_key, parts in sorted(groups.items()):
        vec = _pivot_bloch(parts)
        direction, scale = _canonical_direction(vec)
        resolved.append((scale, direction, rest_key))

    dirs: list[np.ndarray] = []
    for _, direction, _ in resolved:
        if not any(np.allclose(direction, d, atol=1e-9) for d in dirs):
            dirs.append(direction)
    if len(dirs) != 2:
        raise DecompositionError(
            f"pivot directions do not form one complementary pair "
            f"(found {len(dirs)} distinct direction(s))")
    dirs.sort(key=lambda d: tuple(np.round(d, 12)), reverse=True)
    d1, d2 = dirs
    if abs(float(np.dot(d1, d2))) > 1e-9:
        raise DecompositionError("pivot directions are not complementary")

    letter = party_letter(pivot)

    def rest_term(rest_key: tuple[int, int]) -> PauliTerm:
        return PauliTerm(op.n, rest_key[0], rest_key[1], 0)

    if len(resolved) == 2:
        # Split mode: both groups are expressed over the mid directions.
        s_plus = Setting(pivot, letter, _bloch_sum((d1 + d2) / math.sqrt(2)))
        s_minus = Setting(pivot, letter + "'", _bloch_sum((d1 - d2) / math.sqrt(2)))
        products: list[tuple[float, int, PauliTerm]] = []
        for scale, direction, rest_key in resolved:
            rest = rest_term(rest_key)
            c = scale / math.sqrt(2)
            if np.allclose(direction, d1, atol=1e-9):
                products.append((c, 0, rest))
                products.append((c, 1, rest))
            else:
                products.append((c, 0, rest))
                products.append((-c, 1, rest))
        settings = (s_plus, s_minus)
    else:
        # Merge mode: each group's unit combination is itself a setting.
        settings = (Setting(pivot, letter, _bloch_sum(d1)),
                    Setting(pivot, letter + "'", _bloch_sum(d2)))
        products = []
        for scale, direction, rest_key in resolved:
            idx = 0 if np.allclose(direction, d1, atol=1e-9) else 1
            products.append((scale, idx, rest_term(rest_key)))

    return DecomposedOperator(op.n, pivot, settings, products)


def symbolize_decomposed(dec: DecomposedOperator,
                         letter_order: dict[int, list[str]] | None = None
                         ) -> tuple[BellExpression, dict[Symbol, Setting]]:
    """Symbols for a decomposed operator: primed labels per party.

    Non-pivot parties receive labels L and L' in first-seen order of their
    Pauli letters; ``letter_order`` pins that order per party when the default
    is not wanted.
    """
    letter_order = dict(letter_order or {})
    n = dec.n
    bindings: dict[Symbol, Setting] = {}
    label_of: dict[tuple[int, str], str] = {}

    for s in dec.settings:
        bindings[(s.party, s.label)] = s

    def assign_label(party: int, pauli_letter: str) -> str:
        key = (party, pauli_letter)
        if key in label_of:
            return label_of[key]
        order = letter_order.setdefault(party, [])
        if pauli_letter not in order:
            order.append(pauli_letter)
        idx = order.index(pauli_letter)
        if idx > 1:
            raise ValueError(f"party {party} would need more than two settings")
        label = party_letter(party) + ("'" if idx == 1 else "")
        label_of[key] = label
        bindings[(party, label)] = Setting(
            party, label, PauliSum.from_strings([(pauli_letter, 1.0)], n=1))
        return label

    terms: dict[TermKey, float] = {}
    for coeff, s_idx, rest in dec.products:
        setting = dec.settings[s_idx]
        key = [(setting.party, setting.label)]
        for q in range(n):
            if q == dec.pivot:
                continue
            letter = rest.letter(q)
            if letter == "I":
                continue
            key.append((q, assign_label(q, letter)))
        tkey = tuple(sorted(key))
        terms[tkey] = terms.get(tkey, 0.0) + coeff
    return BellExpression(n, terms), bindings


# --- chained multi-setting construction --------------------------------------

@dataclass
class ChainedConstruction:
    n_settings: int
    operator: PauliSum                      # two-qubit Bell operator
    expression: BellExpression
    bindings: dict[Symbol, Setting]
    quantum_bound: float                    # 2n cos(pi/2n)

    @property
    def logical_scale(self) -> float:
        return self.quantum_bound


def xz_setting(party: int, label: str, theta: float) -> Setting:
    """Z rotated by theta towards X: cos(theta) Z + sin(theta) X."""
    return Setting(party, label, PauliSum.from_strings(
        [("Z", math.cos(theta)), ("X", math.sin(theta))], n=1))


def chained_construction(n: int) -> ChainedConstruction:
    """The n-settings-per-party chained Bell construction on two qubits.

    Party 0 measures at angles (k-1)pi/n, party 1 at half-offset angles
    (2k-1)pi/2n; the resulting 2n-term operator equals 2n cos(pi/2n) times
    the logical Z of the two-qubit Bell basis.
    """
    if n < 2:
        raise ValueError("chained construction needs at least 2 settings per party")
    a = {k: xz_setting(0, f"A{k}", (k - 1) * math.pi / n) for k in range(1, n + 1)}
    b = {k: xz_setting(1, f"B{k}", (2 * k - 1) * math.pi / (2 * n)) for k in range(1, n + 1)}
    terms: dict[TermKey, float] = {}

    def add(sa: Setting, sb: Setting, coeff: float) -> None:
        key = tuple(sorted([(0, sa.label), (1, sb.label)]))
        terms[key] = terms.get(key, 0.0) + coeff

    for k in range(1, n + 1):
        add(a[k], b[k], 1.0)
    for k in range(1, n):
        add(a[k + 1], b[k], 1.0)
    add(a[1], b[n], -1.0)

    expr = BellExpression(2, terms)
    bindings: dict[Symbol, Setting] = {}
    for s in list(a.values()) + list(b.values()):
        bindings[(s.party, s.label)] = s
    op = render_operator(expr, bindings)
    return ChainedConstruction(
        n_settings=n,
        operator=op,
        expression=expr,
        bindings=bindings,
        quantum_bound=2 * n * math.cos(math.pi / (2 * n)),
    )


def chained_z_reconstruction(n: int) -> PauliSum:
    """(1/n) * sum_k Z1(t_k) Z2(t_k) with t_k = (k-1)pi/n; equals the logical Z."""
    out = PauliSum.zero(2)
    for k in range(1, n + 1):
        theta = (k - 1) * math.pi / n
        za = xz_setting(0, "a", theta).embed(2)
        zb = xz_setting(1, "b", theta).embed(2)
        out = out + (1.0 / n) * product(za, zb)
    return out


def chained_x_reconstruction(n: int) -> PauliSum:
    """The logical X as (logical Z) * (i Y2), resolved over half-offset angles.

    (1/n) * sum_k Z1((k-1)pi/n) Z2((n + 2k - 2)pi/2n); equals the logical X
    of the two-qubit Bell basis for every n >= 2.
    """
    out = PauliSum.zero(2)
    for k in range(1, n + 1):
        za = xz_setting(0, "a", (k - 1) * math.pi / n).embed(2)
        zb = xz_setting(1, "b", (n + 2 * k - 2) * math.pi / (2 * n)).embed(2)
        out = out + (1.0 / n) * product(za, zb)
    return out


# --- recipes ------------------------------------------------------------------

@dataclass
class BellRecipe:
    """Declarative description of one pipeline run (JSON-loadable)."""

    basis: LogicalBasis
    k: tuple[float, float, float]
    beta_q: float
    decomposition: dict
    symbols: dict[str, str]
    group: StabilizerGroup | None = None
    flip: PauliTerm | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "BellRecipe":
        basis_spec = data["basis"]
        kind = basis_spec["kind"]
        group = flip = None
        if kind == "bell":
            basis = bell_basis()
        elif kind == "ghz3":
            basis = ghz3_basis()
        elif kind == "graph":
            gs = basis_spec["graph"]
            graph = GraphSpec.from_edges(gs["n"], gs["edges"])
            group = graph_state_generators(graph)
            flip = PauliTerm.from_string(basis_spec["flip"])
            basis = basis_from_flip(group, flip)
        else:
            raise ValueError(f"unknown basis kind {kind!r}")
        k = np.asarray(data.get("k", [0, 0, 1]), dtype=float)
        if abs(np.linalg.norm(k) - 1.0) > 1e-12:
            raise ValueError("direction k must be unit norm")
        beta_raw = data.get("beta_q", "auto")
        if beta_raw == "auto":
            beta = float(2 ** (basis.n - 1) * np.sum(np.abs(k)))
        else:
            beta = float(beta_raw)
            if beta <= 0:
                raise ValueError("beta_q must be positive")
        return cls(
            basis=basis,
            k=(float(k[0]), float(k[1]), float(k[2])),
            beta_q=beta,
            decomposition=data.get("decomposition", {"kind": "none"}),
            symbols=data.get("symbols", {"Z": "A", "X": "B", "Y": "C"}),
            group=group,
            flip=flip,
        )

    @classmethod
    def from_json(cls, text: str) -> "BellRecipe":
        return cls.from_dict(json.loads(text))

    def logical_ops(self) -> LogicalPaulis:
        if self.group is not None and self.flip is not None:
            return logical_paulis_symbolic(self.group, self.flip, self.basis)
        return logical_paulis_numeric(self.basis)


def build_logical(recipe: BellRecipe, ops: LogicalPaulis | None = None) -> PauliSum:
    """beta_q * (k . logical sigma): the logical form, already in Pauli strings."""
    ops = ops or recipe.logical_ops()
    return recipe.beta_q * ops.direction(recipe.k)
