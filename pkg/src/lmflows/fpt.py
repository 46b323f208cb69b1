r"""First-passage-time analysis for finite row-stochastic chains.

For a chain with one-step matrix :math:`P`, the first-passage probability
from state :math:`i` to state :math:`j` at horizon :math:`n` is

.. math::

    f_{ij}(1) = p_{ij}, \qquad
    f_{ij}(n) = \sum_{k \ne j} p_{ik} \, f_{kj}(n-1), \quad n > 1,

the probability of hitting :math:`j` for the first time after exactly
:math:`n` steps. Writing :math:`\tilde P` for :math:`P` with column
:math:`j` zeroed, the vector of horizon-:math:`n` probabilities over all
sources is :math:`F(1) = P_{\cdot j}`, :math:`F(n) = \tilde P F(n-1)`,
which is how this module computes it.

The expected first passage time is :math:`\mu_{ij} = \sum_n n f_{ij}(n)`,
finite exactly when the passage probabilities sum to one. Two independent
routes are provided and kept separate on purpose:

* ``efpt_series`` accumulates the truncated series until the mass left in
  the tail is negligible;
* ``efpt_linear`` solves the first-step equations
  :math:`(I - Q)\mu = \mathbf 1`, where :math:`Q` drops row and column
  :math:`j`, restricted to the states actually reachable from the source.

Agreement between the two is a cross-check on both. States from which
:math:`j` is unreachable, or from which the chain can wander into a region
with no route back to :math:`j`, have an infinite expectation; the linear
route detects this structurally and raises, while the series route reports
a diverging tail through ``check_well_defined``.
"""

import dataclasses

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import InfiniteEfptError
from .states import LaborState
from .stochastic import ensure_row_stochastic

VERDICT_WELL_DEFINED = "well_defined"
VERDICT_SUSPECT = "suspect"
VERDICT_DIVERGENT = "divergent"

DEFAULT_EPSILON = 1e-9
DEFAULT_MAX_HORIZON = 4000

# Mass thresholds separating the three verdicts of check_well_defined.
_MASS_OK = 1e-6
_MASS_DIVERGENT = 1e-3

_PIVOT_FLOOR = 1e-12


def _as_chain(m) -> tuple[np.ndarray, tuple[str, ...]]:
    """Accept a TransitionMatrix or a bare array; return (P, labels)."""
    entries = getattr(m, "entries", m)
    labels = getattr(m, "states", None)
    P = ensure_row_stochastic(entries)
    if labels is None:
        labels = tuple(str(i) for i in range(P.shape[0]))
    else:
        labels = tuple(labels)
        if len(labels) != P.shape[0]:
            raise ValueError(f"{len(labels)} labels for a {P.shape[0]}-state chain")
    return P, labels


def _resolve_state(state, labels: tuple[str, ...]) -> int:
    if isinstance(state, LaborState):
        state = state.name
    if isinstance(state, (int, np.integer)):
        idx = int(state)
        if not 0 <= idx < len(labels):
            raise ValueError(f"state index {idx} out of range 0..{len(labels) - 1}")
        return idx
    text = str(state).strip()
    for i, name in enumerate(labels):
        if name.upper() == text.upper():
            return i
    if text.upper() == "NEET" and "NLFET" in labels:
        return labels.index("NLFET")
    raise ValueError(f"unknown state {state!r}; expected one of {', '.join(labels)}")


def _support(P: np.ndarray) -> np.ndarray:
    return P > 0.0


def _reaching_set(P: np.ndarray, j: int) -> set[int]:
    """States from which j is reachable in one or more steps."""
    support = _support(P)
    reach = {k for k in range(P.shape[0]) if support[k, j]}
    frontier = list(reach)
    while frontier:
        nxt = []
        for k in range(P.shape[0]):
            if k in reach:
                continue
            if any(support[k, r] for r in frontier):
                reach.add(k)
                nxt.append(k)
        frontier = nxt
    return reach


def _forward_closure(P: np.ndarray, seeds, avoid: int) -> set[int]:
    """States reachable from ``seeds`` along paths that never pass through ``avoid``."""
    support = _support(P)
    closure = {s for s in seeds if s != avoid}
    frontier = list(closure)
    while frontier:
        nxt = []
        for k in frontier:
            for t in np.nonzero(support[k])[0]:
                t = int(t)
                if t != avoid and t not in closure:
                    closure.add(t)
                    nxt.append(t)
        frontier = nxt
    return closure


@dataclasses.dataclass(frozen=True, eq=False)
class FptDistribution:
    """First-passage probabilities f(n), n = 1..horizon, for one (source, target)."""

    source: str
    target: str
    probabilities: np.ndarray
    horizon: int

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.shape != (self.horizon,):
            raise ValueError(f"expected {self.horizon} probabilities, got shape {probs.shape}")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)

    def cdf(self) -> np.ndarray:
        """Cumulative passage probability by horizon n, n = 1..horizon."""
        return np.cumsum(self.probabilities)

    def survival(self) -> np.ndarray:
        """Probability the target is still unvisited after n steps."""
        return 1.0 - self.cdf()


@dataclasses.dataclass(frozen=True)
class EfptResult:
    """An expected first passage time, in quarters, with its computation trail."""

    source: str
    target: str
    quarters: float
    method: str
    n_terms: int | None = None

    @property
    def efpt_years(self) -> float:
        return self.quarters / 4.0


@dataclasses.dataclass(frozen=True)
class WellDefinedness:
    """Diagnosis of whether an EFPT series is trustworthy at a horizon."""

    source: str
    target: str
    mass_at_horizon: float
    reachable: bool
    verdict: str
    horizon: int


def fpt_distribution(m, source, target, horizon: int) -> FptDistribution:
    """First-passage probabilities from ``source`` to ``target`` up to ``horizon``.

    Parameters
    ----------
    m : TransitionMatrix or square array
        Row-stochastic chain.
    source, target : state label, index, or LaborState
    horizon : int
        Number of steps to tabulate (>= 1).

    Returns
    -------
    FptDistribution
        probabilities[n - 1] holds f(n) for n = 1..horizon.
    """
    P, labels = _as_chain(m)
    i = _resolve_state(source, labels)
    j = _resolve_state(target, labels)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    Pm = P.copy()
    Pm[:, j] = 0.0
    fvec = P[:, j].copy()
    out = np.empty(horizon, dtype=float)
    out[0] = fvec[i]
    for n in range(1, horizon):
        fvec = Pm @ fvec
        out[n] = fvec[i]
    return FptDistribution(
        source=labels[i], target=labels[j], probabilities=out, horizon=horizon
    )


def fpt_cdf(m, source, target, horizon: int) -> np.ndarray:
    """Cumulative first-passage probability through each n = 1..horizon."""
    return fpt_distribution(m, source, target, horizon).cdf()


def efpt_series(
    m,
    source,
    target,
    epsilon: float = DEFAULT_EPSILON,
    max_horizon: int = DEFAULT_MAX_HORIZON,
) -> EfptResult:
    """Expected first passage time by direct series summation.

    Accumulates sum(n * f(n)) until the unpassed mass 1 - sum(f(n)) drops
    below ``epsilon``, then stops. Raises InfiniteEfptError if the residual
    is still above ``epsilon`` at ``max_horizon``, which covers both truly
    infinite expectations and horizons too short for the chain's mixing;
    use check_well_defined or efpt_linear to tell the two apart.
    """
    P, labels = _as_chain(m)
    i = _resolve_state(source, labels)
    j = _resolve_state(target, labels)
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if max_horizon < 1:
        raise ValueError(f"max_horizon must be >= 1, got {max_horizon}")

    Pm = P.copy()
    Pm[:, j] = 0.0
    fvec = P[:, j].copy()
    total = float(fvec[i])
    mean = float(fvec[i])
    n = 1
    while 1.0 - total > epsilon:
        if n >= max_horizon:
            raise InfiniteEfptError(
                labels[i],
                labels[j],
                detail=(
                    f"series residual {1.0 - total:.3e} exceeds epsilon {epsilon:g} "
                    f"after {max_horizon} terms"
                ),
            )
        fvec = Pm @ fvec
        n += 1
        total += float(fvec[i])
        mean += n * float(fvec[i])
    return EfptResult(
        source=labels[i], target=labels[j], quarters=mean, method="series", n_terms=n
    )


def efpt_linear(m, source, target) -> EfptResult:
    """Expected first passage time via the first-step linear system.

    Solves (I - Q) mu = 1 where Q is the chain restricted to the states
    reachable from ``source`` without touching ``target``. If that region
    contains states with no route back to the target, the expectation is
    infinite and InfiniteEfptError is raised, naming the trapped states.

    Independent of efpt_series by construction; the two share no
    intermediate quantities beyond the matrix itself.
    """
    P, labels = _as_chain(m)
    i = _resolve_state(source, labels)
    j = _resolve_state(target, labels)

    reach_j = _reaching_set(P, j)
    if i != j and i not in reach_j:
        raise InfiniteEfptError(labels[i], labels[j], trapped=(labels[i],))

    if i == j:
        # Return time: one step out of j, then expected passage back from
        # wherever the step landed.
        targets = [int(t) for t in np.nonzero(P[j] > 0.0)[0]]
        trapped = sorted(t for t in targets if t != j and t not in reach_j)
        if trapped:
            raise InfiniteEfptError(
                labels[i], labels[j], trapped=tuple(labels[t] for t in trapped)
            )
        mean = 1.0
        for t in targets:
            if t != j:
                mean += P[j, t] * efpt_linear(m, t, j).quarters
        return EfptResult(
            source=labels[i], target=labels[j], quarters=mean, method="linear_system"
        )

    closure = sorted(_forward_closure(P, [i], avoid=j))
    trapped = sorted(set(closure) - reach_j)
    if trapped:
        raise InfiniteEfptError(labels[i], labels[j], trapped=tuple(labels[t] for t in trapped))

    idx = np.array(closure, dtype=int)
    Q = P[np.ix_(idx, idx)]
    A = np.eye(len(idx)) - Q
    lu, piv = lu_factor(A)
    if np.abs(np.diag(lu)).min() <= _PIVOT_FLOOR:
        # Cannot happen when the trapped-state screen passed; kept as a
        # defensive guard against degenerate numerics.
        raise InfiniteEfptError(
            labels[i], labels[j], detail="first-step system is numerically singular"
        )
    mu = lu_solve((lu, piv), np.ones(len(idx)))
    pos = int(np.searchsorted(idx, i))
    return EfptResult(
        source=labels[i], target=labels[j], quarters=float(mu[pos]), method="linear_system"
    )


def check_well_defined(m, source, target, horizon: int = DEFAULT_MAX_HORIZON) -> WellDefinedness:
    """Diagnose whether the EFPT series from ``source`` to ``target`` converges.

    Computes the passage mass accumulated by ``horizon`` and classifies:
    "well_defined" when the tail is below 1e-6, "divergent" when more than
    1e-3 of the mass is still outstanding (or the target is unreachable),
    "suspect" in between.
    """
    P, labels = _as_chain(m)
    i = _resolve_state(source, labels)
    j = _resolve_state(target, labels)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")

    reach_j = _reaching_set(P, j)
    reachable = i in reach_j
    if i != j and not reachable:
        return WellDefinedness(
            source=labels[i], target=labels[j],
            mass_at_horizon=0.0, reachable=False,
            verdict=VERDICT_DIVERGENT, horizon=0,
        )

    Pm = P.copy()
    Pm[:, j] = 0.0
    fvec = P[:, j].copy()
    total = float(fvec[i])
    n = 1
    while n < horizon and 1.0 - total > _MASS_OK:
        fvec = Pm @ fvec
        n += 1
        total += float(fvec[i])
    mass = min(total, 1.0)
    tail = 1.0 - total
    if tail <= _MASS_OK:
        verdict = VERDICT_WELL_DEFINED
    elif tail <= _MASS_DIVERGENT:
        verdict = VERDICT_SUSPECT
    else:
        verdict = VERDICT_DIVERGENT
    return WellDefinedness(
        source=labels[i], target=labels[j],
        mass_at_horizon=mass, reachable=bool(reachable),
        verdict=verdict, horizon=n,
    )
