"""Brute-force ground truth in a truncated Fock basis.

Every state is built numerically from first principles (geometric weights or
coherent amplitudes, then explicit ladder-operator application) and every
quantity is read off the truncated representation. Nothing here shares code
with the closed-form routes in `states`, so agreement between the two is a
real check.

Thermal states stay diagonal through both engineering operations, so the
default representation is a weight vector (O(D) instead of O(D^2)); a full
density-matrix path is retained for cross-checks.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CutoffExceeded, DegenerateState
from .states import (
    FAMILY_THERMAL,
    ORDER_SUBTRACT_THEN_ADD,
    MomentTable,
    StateSpec,
)

DEFAULT_TAIL_TOL = 1e-12
DEFAULT_MAX_CUTOFF = 4096
_INITIAL_CUTOFF = 32
_NORM_FLOOR = 1e-300

KIND_VECTOR = "vector"
KIND_DIAGONAL = "diagonal"
KIND_MATRIX = "matrix"


def max_cutoff() -> int:
    """Hard cutoff limit; FOCKWITNESS_MAX_CUTOFF in the environment overrides."""
    raw = os.environ.get("FOCKWITNESS_MAX_CUTOFF")
    if raw is None:
        return DEFAULT_MAX_CUTOFF
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"FOCKWITNESS_MAX_CUTOFF={raw!r} is not an integer") from exc
    if value < 2:
        raise ValueError("FOCKWITNESS_MAX_CUTOFF must be at least 2")
    return value


@dataclass(frozen=True)
class TruncatedState:
    """Finite Fock-basis state: pure vector, diagonal weights, or full matrix."""

    cutoff: int
    kind: str
    data: np.ndarray
    tail_mass: float

    def probabilities(self) -> np.ndarray:
        """Photon-number distribution p_0 .. p_{D-1}."""
        if self.kind == KIND_VECTOR:
            return np.abs(self.data) ** 2
        if self.kind == KIND_DIAGONAL:
            return self.data.real.copy()
        return np.clip(np.diag(self.data).real, 0.0, None)

    def density_matrix(self) -> np.ndarray:
        """Dense D x D density matrix (for cross-checks)."""
        if self.kind == KIND_VECTOR:
            return np.outer(self.data, self.data.conj())
        if self.kind == KIND_DIAGONAL:
            return np.diag(self.data.astype(complex))
        return self.data.copy()


def annihilation_matrix(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation_matrix(dim: int) -> np.ndarray:
    return annihilation_matrix(dim).conj().T


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Exact truncated amplitudes <k|alpha> = e^{-|a|^2/2} alpha^k / sqrt(k!).

    Computed in log form so large |alpha| and large k never overflow on the
    way to small final values.
    """
    alpha = complex(alpha)
    out = np.zeros(dim, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    log_alpha = np.log(complex(alpha))
    k = np.arange(dim)
    log_fact = np.array([math.lgamma(i + 1) for i in range(dim)])
    out = np.exp(k * log_alpha - 0.5 * log_fact - 0.5 * abs(alpha) ** 2)
    return out


def _apply_creation_vec(v: np.ndarray, times: int) -> np.ndarray:
    out = v
    for _ in range(times):
        shifted = np.zeros_like(out)
        k = np.arange(len(out) - 1)
        shifted[1:] = out[:-1] * np.sqrt(k + 1.0)
        out = shifted
    return out


def _apply_annihilation_vec(v: np.ndarray, times: int) -> np.ndarray:
    out = v
    for _ in range(times):
        lowered = np.zeros_like(out)
        k = np.arange(1, len(out))
        lowered[:-1] = out[1:] * np.sqrt(k.astype(float))
        out = lowered
    return out


def _apply_creation_diag(w: np.ndarray, times: int) -> np.ndarray:
    # a' rho a' on a diagonal rho: weight at k moves to k+1 scaled by (k+1)
    out = w
    for _ in range(times):
        shifted = np.zeros_like(out)
        k = np.arange(len(out) - 1)
        shifted[1:] = out[:-1] * (k + 1.0)
        out = shifted
    return out


def _apply_annihilation_diag(w: np.ndarray, times: int) -> np.ndarray:
    out = w
    for _ in range(times):
        lowered = np.zeros_like(out)
        k = np.arange(1, len(out))
        lowered[:-1] = out[1:] * k.astype(float)
        out = lowered
    return out


def _bare_components(spec: StateSpec, dim: int) -> np.ndarray:
    """Bare-state representation before engineering: weights or amplitudes."""
    if spec.family == FAMILY_THERMAL:
        rbar = spec.mean_photon_number
        x = rbar / (1.0 + rbar)
        k = np.arange(dim)
        if x == 0.0:
            w = np.zeros(dim)
            w[0] = 1.0
            return w
        return np.exp(k * math.log(x)) / (1.0 + rbar)
    alpha = spec.amplitude
    # |alpha> + |-alpha> keeps only even Fock levels; build the even slots
    # from the coherent amplitudes and zero the odd ones exactly, so parity
    # zeros survive the ladder algebra as exact zeros
    amps = coherent_amplitudes(alpha, dim)
    out = 2.0 * amps
    out[1::2] = 0.0
    return out


def _engineer(components: np.ndarray, spec: StateSpec, diagonal: bool) -> np.ndarray:
    p, q = spec.op.p, spec.op.q
    up = _apply_creation_diag if diagonal else _apply_creation_vec
    down = _apply_annihilation_diag if diagonal else _apply_annihilation_vec
    if spec.op.order == ORDER_SUBTRACT_THEN_ADD:
        return up(down(components, p), q)
    return down(up(components, q), p)


def _tail_estimate(probs: np.ndarray, structural_zeros: int = 0) -> float:
    """Conservative mass-above-cutoff estimate from the top of the basis.

    Photon subtraction leaves up to `structural_zeros` exactly-zero slots at
    the top of the array; those are skipped (they carry no mass) so the
    window anchors on the real tail. Zeros beyond that count are treated as
    the genuine end of support.
    """
    dim = len(probs)
    skip = 0
    while skip < structural_zeros and skip < dim and probs[dim - 1 - skip] == 0.0:
        skip += 1
    window = max(2, dim // 16)
    lo = max(0, dim - skip - window)
    return float(np.sum(probs[lo:dim - skip]))


def build_truncated(
    spec: StateSpec,
    tail_tol: float = DEFAULT_TAIL_TOL,
    representation: str = "auto",
    min_cutoff: int = 0,
) -> TruncatedState:
    """Build the engineered state numerically, growing the cutoff as needed.

    The cutoff doubles until the estimated probability mass near the top of
    the basis falls below tail_tol; add-then-subtract applies a'^q first and
    a^p second, the other order is reversed. min_cutoff forces a larger
    starting basis (Husimi evaluations need |beta|^2 well inside the cutoff).
    """
    if representation not in ("auto", "matrix"):
        raise ValueError("representation must be 'auto' or 'matrix'")
    limit = max_cutoff()
    dim = min(_INITIAL_CUTOFF, limit)
    while dim < min(min_cutoff, limit):
        dim = min(2 * dim, limit)
    while True:
        if representation == "matrix":
            state = _build_matrix_at_cutoff(spec, dim)
        else:
            state = _build_auto_at_cutoff(spec, dim)
        if state.tail_mass < tail_tol:
            return state
        if dim >= limit:
            raise CutoffExceeded(
                f"{spec.canonical()} needs more than {limit} Fock levels "
                f"for tail tolerance {tail_tol}"
            )
        dim = min(2 * dim, limit)


def _build_auto_at_cutoff(spec: StateSpec, dim: int) -> TruncatedState:
    diagonal = spec.family == FAMILY_THERMAL
    components = _bare_components(spec, dim)
    engineered = _engineer(components, spec, diagonal)
    if diagonal:
        total = float(np.sum(engineered))
        if not total > _NORM_FLOOR:
            raise DegenerateState(f"{spec.canonical()} is annihilated")
        probs = engineered / total
        tail = _tail_estimate(probs, structural_zeros=spec.op.p)
        return TruncatedState(dim, KIND_DIAGONAL, probs, tail)
    nrm = float(np.linalg.norm(engineered))
    if not nrm > _NORM_FLOOR:
        raise DegenerateState(f"{spec.canonical()} is annihilated")
    vec = engineered / nrm
    tail = _tail_estimate(np.abs(vec) ** 2, structural_zeros=spec.op.p)
    return TruncatedState(dim, KIND_VECTOR, vec, tail)


def _build_matrix_at_cutoff(spec: StateSpec, dim: int) -> TruncatedState:
    if spec.family == FAMILY_THERMAL:
        rho = np.diag(_bare_components(spec, dim).astype(complex))
    else:
        psi = _bare_components(spec, dim)
        rho = np.outer(psi, psi.conj())
    a = annihilation_matrix(dim)
    ad = creation_matrix(dim)
    p, q = spec.op.p, spec.op.q
    if spec.op.order == ORDER_SUBTRACT_THEN_ADD:
        op = np.linalg.matrix_power(ad, q) @ np.linalg.matrix_power(a, p)
    else:
        op = np.linalg.matrix_power(a, p) @ np.linalg.matrix_power(ad, q)
    rho = op @ rho @ op.conj().T
    trace = float(np.trace(rho).real)
    if not trace > _NORM_FLOOR:
        raise DegenerateState(f"{spec.canonical()} is annihilated")
    rho /= trace
    tail = _tail_estimate(np.clip(np.diag(rho).real, 0.0, None), structural_zeros=spec.op.p)
    return TruncatedState(dim, KIND_MATRIX, rho, tail)


def oracle_moment(state: TruncatedState, m: int, n: int) -> complex:
    """<a'^m a^n> from the truncated representation via ladder products."""
    if m < 0 or n < 0:
        raise ValueError("moment orders must be non-negative")
    if m + n >= state.cutoff / 2:
        raise CutoffExceeded(
            f"moment order {m}+{n} too close to cutoff {state.cutoff}"
        )
    if state.kind == KIND_VECTOR:
        left = _apply_annihilation_vec(state.data, m)
        right = _apply_annihilation_vec(state.data, n)
        return complex(np.vdot(left, right))
    if state.kind == KIND_DIAGONAL:
        if m != n:
            return 0j
        k = np.arange(state.cutoff, dtype=float)
        falling = np.ones_like(k)
        for i in range(n):
            falling *= np.clip(k - i, 0.0, None)
        return complex(np.sum(state.data * falling))
    dim = state.cutoff
    a = annihilation_matrix(dim)
    op = np.linalg.matrix_power(a, m).conj().T @ np.linalg.matrix_power(a, n)
    return complex(np.trace(state.data @ op))


def oracle_photon_prob(state: TruncatedState, m: int) -> float:
    """p_m = <m| sigma |m>; 0 with a warning beyond the cutoff."""
    if m < 0:
        raise ValueError("photon number must be non-negative")
    if m >= state.cutoff:
        warnings.warn(
            f"photon number {m} is beyond the cutoff {state.cutoff}; returning 0",
            stacklevel=2,
        )
        return 0.0
    return float(state.probabilities()[m])


def oracle_husimi(state: TruncatedState, beta: complex) -> float:
    """Q(beta) = <beta| sigma |beta> / pi from the truncated state."""
    beta = complex(beta)
    if abs(beta) ** 2 >= state.cutoff / 4:
        raise CutoffExceeded(
            f"|beta|^2 = {abs(beta) ** 2:.3f} is not well inside cutoff {state.cutoff}"
        )
    bra = coherent_amplitudes(beta, state.cutoff)
    if state.kind == KIND_VECTOR:
        return float(abs(np.vdot(bra, state.data)) ** 2 / math.pi)
    if state.kind == KIND_DIAGONAL:
        return float(np.sum(state.data * np.abs(bra) ** 2) / math.pi)
    return float((bra.conj() @ state.data @ bra).real / math.pi)


def oracle_poissonian_central_moment(mean: float, l: int) -> float:
    """l-th central moment of a Poisson distribution, by truncated summation."""
    if mean < 0:
        raise ValueError("mean must be non-negative")
    if l < 1:
        raise ValueError("order must be at least 1")
    if mean == 0.0:
        return 0.0
    # support wide enough that the neglected tail is far below 1e-14 even
    # after the (k - mean)^l weight
    top = int(mean + 40.0 * math.sqrt(mean) + 60.0 + 2 * l)
    k = np.arange(top + 1, dtype=float)
    log_fact = np.array([math.lgamma(i + 1) for i in range(top + 1)])
    log_pmf = k * math.log(mean) - mean - log_fact
    return float(np.sum(np.exp(log_pmf) * (k - mean) ** l))


def coherent_truncated(alpha: complex, tail_tol: float = DEFAULT_TAIL_TOL) -> TruncatedState:
    """Plain coherent state |alpha> in the truncated basis (baseline states)."""
    limit = max_cutoff()
    dim = min(_INITIAL_CUTOFF, limit)
    while True:
        vec = coherent_amplitudes(alpha, dim)
        nrm = float(np.linalg.norm(vec))
        vec = vec / nrm
        tail = _tail_estimate(np.abs(vec) ** 2)
        if tail < tail_tol:
            return TruncatedState(dim, KIND_VECTOR, vec, tail)
        if dim >= limit:
            raise CutoffExceeded(f"coherent state |{alpha}| needs more than {limit} levels")
        dim = min(2 * dim, limit)


def moment_table_from_state(state: TruncatedState, spec: StateSpec | None = None) -> MomentTable:
    """Moment cache backed by the truncated state (provenance 'oracle')."""
    return MomentTable(spec, lambda m, n: oracle_moment(state, m, n), provenance="oracle")


def oracle_moment_table(spec: StateSpec, tail_tol: float = DEFAULT_TAIL_TOL) -> MomentTable:
    state = build_truncated(spec, tail_tol)
    return moment_table_from_state(state, spec)


# ---------------------------------------------------------------------------
# Golden fixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixtureRecord:
    """One frozen oracle value: spec identity, quantity id, cutoff, value."""

    canonical: str
    quantity: str
    cutoff: int
    value: float

    def line(self) -> str:
        return f"{self.canonical}\t{self.quantity}\t{self.cutoff}\t{self.value:.17g}"


def parse_fixtures(text: str) -> list[FixtureRecord]:
    records = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        canonical, quantity, cutoff, value = line.split("\t")
        records.append(FixtureRecord(canonical, quantity, int(cutoff), float(value)))
    return records


def format_fixtures(records, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {part}" for part in header.splitlines())
    lines.extend(record.line() for record in records)
    return "\n".join(lines) + "\n"


def stable_oracle_value(
    evaluate,
    spec: StateSpec,
    quantity: str,
    tail_tol: float = DEFAULT_TAIL_TOL,
    gate_rel_tol: float = 1e-10,
) -> FixtureRecord:
    """Freeze an oracle value only after the doubled-cutoff stability gate.

    `evaluate(state)` computes the quantity from a TruncatedState; the value
    at the converged cutoff D must match the value at 2D to gate_rel_tol.
    """
    state = build_truncated(spec, tail_tol)
    doubled = _grow_to(spec, 2 * state.cutoff)
    first = float(evaluate(state))
    second = float(evaluate(doubled))
    scale = max(abs(first), abs(second), 1e-30)
    if abs(first - second) / scale > gate_rel_tol:
        raise CutoffExceeded(
            f"{spec.canonical()} {quantity}: value not stable under cutoff doubling "
            f"({first!r} vs {second!r})"
        )
    return FixtureRecord(spec.canonical(), quantity, state.cutoff, first)


def _grow_to(spec: StateSpec, dim: int) -> TruncatedState:
    if dim > max_cutoff():
        raise CutoffExceeded(f"doubled cutoff {dim} exceeds the hard limit")
    return _build_auto_at_cutoff(spec, dim)
