"""Self-contained exact LP and binary-MILP solver.

The LP engine is a bounded-variable two-phase primal simplex on a dense
tableau (Dantzig pricing, Bland's rule once a pivot-count threshold is
exceeded, so termination is guaranteed). The MILP layer is best-bound
branch and bound over binary variables with the LP relaxation solved at
every node and a deterministic round-and-verify incumbent heuristic.

Everything is deterministic: the same model and limits always produce the
same solution values and node counts.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np
from scipy.linalg.blas import dger

FEASIBILITY_TOL = 1e-6
BOUND_TOL = 1e-9
INTEGRALITY_TOL = 1e-6

_RC_TOL = 1e-9          # reduced-cost threshold for entering candidates
_PIV_TOL = 1e-9         # entries below this are treated as zero in ratio tests
_PHASE1_TOL = 1e-7


class ModelError(ValueError):
    """Raised for malformed models (bad bounds, unknown variable indices)."""


class SolverNumericalError(RuntimeError):
    """Raised when the solver cannot certify its own result.

    This is deliberately loud: a numerical failure must never be reported
    as a clean optimum.
    """


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class MilpStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE_GAP = "feasible-gap"
    INFEASIBLE = "infeasible"
    NO_INCUMBENT = "no-incumbent"
    UNBOUNDED_RELAXATION = "unbounded-relaxation"


LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
_SENSES = (LESS_EQUAL, EQUAL, GREATER_EQUAL)


@dataclass
class _Variable:
    name: str
    lb: float
    ub: float
    binary: bool


@dataclass
class _Constraint:
    idx: np.ndarray
    coef: np.ndarray
    sense: str
    rhs: float


class LinearModel:
    """Sparse LP/MILP container: bounded variables, linear rows, one objective.

    Variables have finite lower bounds and finite-or-infinite upper bounds;
    binary variables must keep their bounds inside [0, 1].
    """

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[_Variable] = []
        self.constraints: list[_Constraint] = []
        self.objective_idx: np.ndarray = np.empty(0, dtype=np.intp)
        self.objective_coef: np.ndarray = np.empty(0)
        self.objective_sense: str = "min"

    # -- building ---------------------------------------------------------

    def add_variable(self, name: str, lb: float = 0.0, ub: float = math.inf,
                     binary: bool = False) -> int:
        """Append a variable and return its stable integer handle."""
        lb = float(lb)
        ub = float(ub)
        if math.isnan(lb) or math.isnan(ub) or math.isinf(lb):
            raise ModelError(f"variable {name!r}: bounds must be finite-lb, non-NaN")
        if lb > ub:
            raise ModelError(f"variable {name!r}: lower bound {lb} exceeds upper bound {ub}")
        if binary and (lb < 0.0 or ub > 1.0):
            raise ModelError(f"binary variable {name!r}: bounds [{lb}, {ub}] not within [0, 1]")
        self.variables.append(_Variable(name, lb, ub, binary))
        return len(self.variables) - 1

    def add_constraint(self, row: Mapping[int, float] | Iterable[tuple[int, float]],
                       sense: str, rhs: float) -> int:
        """Append a linear constraint ``sum(coef * x) sense rhs``.

        ``row`` maps variable handles to coefficients; duplicate handles are
        summed. Empty rows are legal (they can encode trivially infeasible
        models such as 0 <= -1).
        """
        if sense not in _SENSES:
            raise ModelError(f"unknown constraint sense {sense!r}")
        items = row.items() if isinstance(row, Mapping) else row
        acc: dict[int, float] = {}
        n = len(self.variables)
        for j, c in items:
            j = int(j)
            if j < 0 or j >= n:
                raise ModelError(f"constraint references unknown variable index {j}")
            acc[j] = acc.get(j, 0.0) + float(c)
        idx = np.fromiter(acc.keys(), dtype=np.intp, count=len(acc))
        coef = np.fromiter(acc.values(), dtype=float, count=len(acc))
        order = np.argsort(idx)
        self.constraints.append(_Constraint(idx[order], coef[order], sense, float(rhs)))
        return len(self.constraints) - 1

    def set_objective(self, row: Mapping[int, float] | Iterable[tuple[int, float]],
                      sense: str = "min") -> None:
        if sense not in ("min", "max"):
            raise ModelError(f"objective sense must be 'min' or 'max', got {sense!r}")
        items = row.items() if isinstance(row, Mapping) else row
        acc: dict[int, float] = {}
        n = len(self.variables)
        for j, c in items:
            j = int(j)
            if j < 0 or j >= n:
                raise ModelError(f"objective references unknown variable index {j}")
            acc[j] = acc.get(j, 0.0) + float(c)
        idx = np.fromiter(acc.keys(), dtype=np.intp, count=len(acc))
        coef = np.fromiter(acc.values(), dtype=float, count=len(acc))
        order = np.argsort(idx)
        self.objective_idx = idx[order]
        self.objective_coef = coef[order]
        self.objective_sense = sense

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def binary_indices(self) -> list[int]:
        return [j for j, v in enumerate(self.variables) if v.binary]

    # -- inspection --------------------------------------------------------

    def dump(self) -> str:
        """Plain-text listing of the model for debugging.

        The exact layout is internal but stable under the version header.
        """
        out = ["railyard-lp v1", self.objective_sense]
        terms = " ".join(f"{c:+g} {self.variables[j].name}"
                         for j, c in zip(self.objective_idx, self.objective_coef))
        out.append(f"  obj: {terms or '0'}")
        out.append("subject to")
        for i, con in enumerate(self.constraints):
            terms = " ".join(f"{c:+g} {self.variables[j].name}"
                             for j, c in zip(con.idx, con.coef))
            out.append(f"  c{i}: {terms or '0'} {con.sense} {con.rhs:g}")
        out.append("bounds")
        for v in self.variables:
            out.append(f"  {v.lb:g} <= {v.name} <= {v.ub:g}")
        binaries = [v.name for v in self.variables if v.binary]
        if binaries:
            out.append("binaries")
            out.append("  " + " ".join(binaries))
        out.append("end")
        return "\n".join(out)

    def bounds_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        lb = np.array([v.lb for v in self.variables], dtype=float)
        ub = np.array([v.ub for v in self.variables], dtype=float)
        return lb, ub


@dataclass
class LpSolution:
    status: LpStatus
    objective: float | None
    x: np.ndarray | None
    iterations: int


@dataclass
class MilpSolution:
    status: MilpStatus
    objective: float | None
    x: np.ndarray | None
    bound: float | None
    gap: float | None
    node_count: int
    bound_history: list[float] = field(default_factory=list)


# ---------------------------------------------------------------------------
# simplex kernel
# ---------------------------------------------------------------------------

_AT_LB = False
_AT_UB = True


@dataclass
class _Prepared:
    """Model converted once to dense equality form; bounds applied per solve."""
    n: int                     # structural variable count
    m: int                     # row count
    n_slack: int
    S: np.ndarray              # (m, n + n_slack) structural + slack coefficients
    slack_sign: np.ndarray     # per-row slack coefficient (+1 for <=, -1 for >=, 0 for =)
    rhs: np.ndarray
    c: np.ndarray              # min-normalized objective over structural vars
    sense_factor: float        # +1 if model minimizes, -1 if it maximizes
    rows: list[_Constraint]    # original rows, for residual verification


def _prepare(model: LinearModel) -> _Prepared:
    n = model.n_variables
    m = model.n_constraints
    slack_sign = np.zeros(m)
    n_slack = 0
    for i, con in enumerate(model.constraints):
        if con.sense == LESS_EQUAL:
            slack_sign[i] = 1.0
            n_slack += 1
        elif con.sense == GREATER_EQUAL:
            slack_sign[i] = -1.0
            n_slack += 1
    S = np.zeros((m, n + n_slack))
    rhs = np.empty(m)
    k = n
    for i, con in enumerate(model.constraints):
        S[i, con.idx] = con.coef
        rhs[i] = con.rhs
        if slack_sign[i] != 0.0:
            S[i, k] = slack_sign[i]
            k += 1
    c = np.zeros(n)
    sense_factor = 1.0 if model.objective_sense == "min" else -1.0
    c[model.objective_idx] = sense_factor * model.objective_coef
    return _Prepared(n, m, n_slack, S, slack_sign, rhs, c, sense_factor,
                     list(model.constraints))


def _pivot(T: np.ndarray, xB: np.ndarray, r: int, j: int,
           enter_val: float) -> np.ndarray:
    """Row-reduce the tableau around (row r, column j); returns the tableau."""
    row = r + 2
    piv = T[row, j]
    T[row, :] /= piv
    colv = T[:, j].copy()
    colv[row] = 0.0
    yrow = T[row, :].copy()
    T = dger(-1.0, colv, yrow, a=T, overwrite_a=1)
    T[:, j] = 0.0
    T[row, j] = 1.0
    xB[r] = enter_val
    return T


def _run_simplex(prep: _Prepared, lb: np.ndarray, ub: np.ndarray
                 ) -> tuple[LpStatus, np.ndarray | None, int]:
    """Two-phase bounded-variable simplex; returns (status, x, iterations)."""
    n, m, ns = prep.n, prep.m, prep.n_slack
    if np.any(lb > ub + 1e-12):
        return LpStatus.INFEASIBLE, None, 0

    ncols_struct = n + ns
    b0 = prep.rhs - prep.S[:, :n] @ lb
    flip = b0 < 0.0

    # rows whose (sign-normalized) slack cannot start basic get an artificial
    slack_col = np.full(m, -1, dtype=np.intp)
    k = n
    for i in range(m):
        if prep.slack_sign[i] != 0.0:
            slack_col[i] = k
            k += 1
    art_rows = [i for i in range(m)
                if prep.slack_sign[i] * (-1.0 if flip[i] else 1.0) <= 0.0]
    N = ncols_struct + len(art_rows)

    T = np.zeros((m + 2, N), order="F")
    T[2:, :ncols_struct] = prep.S
    if flip.any():
        T[2:, :ncols_struct][flip] *= -1.0
    b = np.where(flip, -b0, b0)

    ranges = np.full(N, np.inf)
    ranges[:n] = ub - lb
    basis = np.empty(m, dtype=np.intp)
    for a, i in enumerate(art_rows):
        j = ncols_struct + a
        T[2 + i, j] = 1.0
        basis[i] = j
    art_set = set(art_rows)
    for i in range(m):
        if i not in art_set:
            basis[i] = slack_col[i]

    is_basic = np.zeros(N, dtype=bool)
    is_basic[basis] = True
    at_ub = np.zeros(N, dtype=bool)
    xB = b.copy()
    ubB = ranges[basis].copy()

    # phase-1 reduced costs: minimize the sum of basic artificials
    if art_rows:
        T[0, :] = 0.0
        for i in art_rows:
            T[0, :] -= T[2 + i, :]
        T[0, ncols_struct:] = 0.0
    T[1, :n] = prep.c

    iters = 0
    bland_after = 2000 + 10 * (m + N)
    max_iters = 20000 + 50 * (m + N)

    def run_phase(prow: int) -> LpStatus | None:
        nonlocal T, iters, xB
        while True:
            d = T[prow]
            free = ~is_basic & (ranges > 0.0)
            viol = np.where(free, np.where(at_ub, d, -d), -np.inf)
            if iters < bland_after:
                j = int(np.argmax(viol))
                if viol[j] <= _RC_TOL:
                    return None
            else:
                cand = np.nonzero(viol > _RC_TOL)[0]
                if cand.size == 0:
                    return None
                j = int(cand[0])
            if iters >= max_iters:
                raise SolverNumericalError(
                    f"simplex exceeded {max_iters} pivots without converging")

            dirn = -1.0 if at_ub[j] else 1.0
            col = dirn * T[2:, j]
            t_best = ranges[j]
            leave = -1
            leave_to_ub = False
            pos = col > _PIV_TOL
            neg = col < -_PIV_TOL
            if pos.any():
                rows = np.nonzero(pos)[0]
                ratios = xB[rows] / col[rows]
                k = _pick_row(ratios, rows, col, basis, iters >= bland_after)
                if ratios[k] < t_best - 1e-12:
                    t_best = max(ratios[k], 0.0)
                    leave = int(rows[k])
                    leave_to_ub = False
            if neg.any():
                rows = np.nonzero(neg)[0]
                room = ubB[rows] - xB[rows]
                finite = np.isfinite(room)
                if finite.any():
                    rows = rows[finite]
                    ratios = room[finite] / (-col[rows])
                    k = _pick_row(ratios, rows, col, basis, iters >= bland_after)
                    if ratios[k] < t_best - 1e-12:
                        t_best = max(ratios[k], 0.0)
                        leave = int(rows[k])
                        leave_to_ub = True

            if leave < 0:
                if not np.isfinite(t_best):
                    return LpStatus.UNBOUNDED
                # bound flip: nonbasic variable jumps to its other bound
                xB -= t_best * col
                at_ub[j] = not at_ub[j]
            else:
                xB -= t_best * col
                enter_val = t_best if dirn > 0 else ranges[j] - t_best
                old = basis[leave]
                is_basic[old] = False
                at_ub[old] = leave_to_ub
                basis[leave] = j
                is_basic[j] = True
                at_ub[j] = False
                ubB[leave] = ranges[j]
                T = _pivot(T, xB, leave, j, enter_val)
            iters += 1

    if art_rows:
        status = run_phase(0)
        if status is LpStatus.UNBOUNDED:
            raise SolverNumericalError("phase-1 objective diverged (numerical failure)")
        infeas = sum(float(xB[i]) for i in range(m) if basis[i] >= ncols_struct)
        if infeas > _PHASE1_TOL * (1.0 + float(np.abs(b).max(initial=0.0))):
            return LpStatus.INFEASIBLE, None, iters
        ranges[ncols_struct:] = 0.0
        ubB = ranges[basis].copy()

    status = run_phase(1)
    if status is LpStatus.UNBOUNDED:
        return LpStatus.UNBOUNDED, None, iters

    # recompute basic values from the original data to shed pivot drift
    def original_column(j: int) -> np.ndarray:
        if j < ncols_struct:
            colj = prep.S[:, j].copy()
            if flip.any():
                colj[flip] *= -1.0
        else:
            colj = np.zeros(m)
            colj[art_rows[j - ncols_struct]] = 1.0
        return colj

    B = np.empty((m, m))
    for i in range(m):
        B[:, i] = original_column(int(basis[i]))
    rhs_nb = b.copy()
    nb_ub = np.nonzero(~is_basic & at_ub)[0]
    for j in nb_ub:
        if ranges[j] != 0.0:
            rhs_nb -= ranges[j] * original_column(int(j))
    try:
        xB_exact = np.linalg.solve(B, rhs_nb)
    except np.linalg.LinAlgError:
        xB_exact = xB

    x_sh = np.zeros(N)
    x_sh[nb_ub] = ranges[nb_ub]
    x_sh[basis] = xB_exact
    x = lb + x_sh[:n]
    # snap hairline bound drift only; anything larger is caught by verification
    x = np.where(np.abs(x - lb) <= BOUND_TOL, lb, x)
    x = np.where(np.abs(x - ub) <= BOUND_TOL, ub, x)
    return LpStatus.OPTIMAL, x, iters


def _pick_row(ratios: np.ndarray, rows: np.ndarray, col: np.ndarray,
              basis: np.ndarray, bland: bool) -> int:
    """Pick the leaving row among candidates with the minimal ratio.

    Ties are broken by largest pivot magnitude (stability) or, under
    Bland's rule, by smallest basic-variable index (anti-cycling).
    """
    rmin = ratios.min()
    tied = np.nonzero(ratios <= rmin + 1e-10)[0]
    if tied.size == 1:
        return int(tied[0])
    if bland:
        return int(tied[np.argmin(basis[rows[tied]])])
    return int(tied[np.argmax(np.abs(col[rows[tied]]))])


# ---------------------------------------------------------------------------
# public solves
# ---------------------------------------------------------------------------

def max_violation(model: LinearModel, x: np.ndarray) -> float:
    """Largest absolute constraint violation of x over the model rows."""
    worst = 0.0
    for con in model.constraints:
        val = float(con.coef @ x[con.idx]) if con.idx.size else 0.0
        if con.sense == LESS_EQUAL:
            worst = max(worst, val - con.rhs)
        elif con.sense == GREATER_EQUAL:
            worst = max(worst, con.rhs - val)
        else:
            worst = max(worst, abs(val - con.rhs))
    return worst


def _objective_value(prep: _Prepared, x: np.ndarray) -> float:
    return prep.sense_factor * float(prep.c @ x)


def solve_lp(model: LinearModel) -> LpSolution:
    """Solve the LP relaxation of a model (binary flags treated as [0, 1]).

    Reported optima are verified primal-feasible; an unverifiable result
    raises SolverNumericalError rather than returning a wrong "optimal".
    """
    prep = _prepare(model)
    lb, ub = model.bounds_arrays()
    status, x, iters = _run_simplex(prep, lb, ub)
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, None, None, iters)
    viol = max_violation(model, x)
    if viol > FEASIBILITY_TOL:
        raise SolverNumericalError(
            f"simplex returned a point violating constraints by {viol:.3e}")
    return LpSolution(status, _objective_value(prep, x), x, iters)


@dataclass(order=True)
class _Node:
    bound: float
    seq: int
    fixes: dict[int, float] = field(compare=False)


def _row_violation(con: _Constraint, x: np.ndarray) -> float:
    val = float(con.coef @ x[con.idx]) if con.idx.size else 0.0
    if con.sense == LESS_EQUAL:
        return max(0.0, val - con.rhs)
    if con.sense == GREATER_EQUAL:
        return max(0.0, con.rhs - val)
    return abs(val - con.rhs)


def _least_violating_value(rows: list[_Constraint], x: np.ndarray, j: int,
                           lb: np.ndarray, ub: np.ndarray) -> float:
    """0 or 1 for binary j, whichever violates j's rows least at point x.

    Ties go to the rounded relaxation value. Used by the diving heuristic:
    the continuous variables get re-optimized afterwards, so only the
    relative strain on each side matters here.
    """
    candidates = [v for v in (0.0, 1.0) if lb[j] - 1e-12 <= v <= ub[j] + 1e-12]
    if len(candidates) == 1:
        return candidates[0]
    xj = x[j]
    scores = []
    xt = x.copy()
    for v in candidates:
        xt[j] = v
        scores.append(sum(_row_violation(con, xt) for con in rows))
    if scores[0] < scores[1] - 1e-12:
        return candidates[0]
    if scores[1] < scores[0] - 1e-12:
        return candidates[1]
    return float(round(min(max(xj, 0.0), 1.0)))


def _rounded_completion(model: LinearModel, x: np.ndarray,
                        binaries: list[int], lb: np.ndarray, ub: np.ndarray
                        ) -> np.ndarray | None:
    """Try to round fractional binaries to a feasible point, greedily.

    Each fractional binary is set to its nearer bound first, falling back
    to the other value if the rows it appears in are violated. The final
    candidate is verified against the full model before being accepted.
    """
    xc = x.copy()
    rows_of: dict[int, list[_Constraint]] = {}
    frac = [j for j in binaries
            if abs(xc[j] - round(xc[j])) > INTEGRALITY_TOL]
    if not frac:
        return None
    fset = set(frac)
    for con in model.constraints:
        for j in con.idx:
            if int(j) in fset:
                rows_of.setdefault(int(j), []).append(con)
    for j in frac:
        first = float(round(xc[j]))
        ok = False
        for v in (first, 1.0 - first):
            if v < lb[j] - 1e-12 or v > ub[j] + 1e-12:
                continue
            xc[j] = v
            ok = True
            for con in rows_of.get(j, ()):  # local check; full verify below
                val = float(con.coef @ xc[con.idx]) if con.idx.size else 0.0
                if con.sense == LESS_EQUAL and val > con.rhs + FEASIBILITY_TOL:
                    ok = False
                elif con.sense == GREATER_EQUAL and val < con.rhs - FEASIBILITY_TOL:
                    ok = False
                elif con.sense == EQUAL and abs(val - con.rhs) > FEASIBILITY_TOL:
                    ok = False
            if ok:
                break
        if not ok:
            return None
    if max_violation(model, xc) > FEASIBILITY_TOL:
        return None
    return xc


def solve_milp(model: LinearModel, gap_limit: float = 0.0,
               node_limit: int | None = None,
               time_limit: float | None = None) -> MilpSolution:
    """Branch and bound over the model's binary variables.

    Best-bound node selection, most-fractional branching with lowest-index
    tie break. Returns OPTIMAL once the relative gap is within
    ``gap_limit``; FEASIBLE_GAP when a node/time limit is hit with an
    incumbent, NO_INCUMBENT when a limit is hit without one.
    """
    if gap_limit < 0.0:
        raise ValueError("gap_limit must be nonnegative")
    if node_limit is not None and node_limit <= 0:
        raise ValueError("node_limit must be positive")
    if time_limit is not None and time_limit <= 0:
        raise ValueError("time_limit must be positive")

    prep = _prepare(model)
    lb0, ub0 = model.bounds_arrays()
    binaries = model.binary_indices()
    rows_of_binary: dict[int, list[_Constraint]] = {j: [] for j in binaries}
    bset = set(binaries)
    for con in model.constraints:
        for jj in con.idx:
            if int(jj) in bset:
                rows_of_binary[int(jj)].append(con)
    t0 = time.perf_counter()

    best_x: np.ndarray | None = None
    best_obj = math.inf                       # internal minimization
    node_count = 0
    bound_history: list[float] = []
    seq = 0
    heap: list[_Node] = [_Node(-math.inf, seq, {})]
    limit_hit = False
    root_unbounded = False
    last_popped_bound = -math.inf
    gap_stop_bound: float | None = None

    def rel_gap(incumbent: float, bound: float) -> float:
        return abs(incumbent - bound) / max(1.0, abs(incumbent))

    while heap:
        if node_limit is not None and node_count >= node_limit:
            limit_hit = True
            break
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            limit_hit = True
            break
        node = heapq.heappop(heap)
        last_popped_bound = max(last_popped_bound, node.bound)
        if best_x is not None and (best_obj - node.bound) <= \
                gap_limit * max(1.0, abs(best_obj)) + 1e-9:
            # best-bound order: every remaining node is within the gap too
            gap_stop_bound = node.bound if math.isfinite(node.bound) else best_obj
            heap.clear()
            break
        lb = lb0.copy()
        ub = ub0.copy()
        for j, v in node.fixes.items():
            lb[j] = v
            ub[j] = v
        status, x, _ = _run_simplex(prep, lb, ub)
        node_count += 1
        bound_history.append(last_popped_bound)
        if status is LpStatus.INFEASIBLE:
            continue
        if status is LpStatus.UNBOUNDED:
            root_unbounded = True
            break
        z = float(prep.c @ x)
        if z >= best_obj - 1e-9:
            continue
        fracs = [(j, abs(x[j] - round(x[j]))) for j in binaries
                 if abs(x[j] - round(x[j])) > INTEGRALITY_TOL]
        if not fracs:
            xi = x.copy()
            for j in binaries:
                xi[j] = float(round(xi[j]))
            if max_violation(model, xi) > FEASIBILITY_TOL:
                raise SolverNumericalError("integral node failed verification")
            best_obj = float(prep.c @ xi)
            best_x = xi
            continue
        xc = _rounded_completion(model, x, binaries, lb0, ub0)
        if xc is not None:
            zc = float(prep.c @ xc)
            if zc < best_obj - 1e-12:
                best_obj = zc
                best_x = xc
        elif node_count == 1 or node_count % 10 == 0 or best_x is None:
            # dive: fix each binary to the side its rows tolerate best at
            # the relaxation point, then re-optimize the continuous part
            dl = lb.copy()
            du = ub.copy()
            for j in binaries:
                v = _least_violating_value(rows_of_binary[j], x, j, lb0, ub0)
                dl[j] = v
                du[j] = v
            dstat, dx, _ = _run_simplex(prep, dl, du)
            if dstat is LpStatus.OPTIMAL and \
                    max_violation(model, dx) <= FEASIBILITY_TOL:
                zd = float(prep.c @ dx)
                if zd < best_obj - 1e-12:
                    best_obj = zd
                    best_x = dx.copy()
        # branch on the most fractional binary, lowest index on ties
        scores = np.array([min(f, 1.0 - f) for _, f in fracs])
        jb = fracs[int(np.argmax(scores))][0]
        for v in (0.0, 1.0):
            seq += 1
            fixes = dict(node.fixes)
            fixes[jb] = v
            heapq.heappush(heap, _Node(z, seq, fixes))

    if root_unbounded:
        return MilpSolution(MilpStatus.UNBOUNDED_RELAXATION, None, None,
                            None, None, node_count, bound_history)

    open_bounds = [nd.bound for nd in heap]
    if best_x is None:
        if limit_hit:
            bound = min(open_bounds) if open_bounds else last_popped_bound
            return MilpSolution(MilpStatus.NO_INCUMBENT, None, None,
                                prep.sense_factor * bound if math.isfinite(bound) else None,
                                None, node_count, bound_history)
        return MilpSolution(MilpStatus.INFEASIBLE, None, None, None, None,
                            node_count, bound_history)

    if gap_stop_bound is not None:
        bound_int = gap_stop_bound
    elif open_bounds:
        bound_int = min(min(open_bounds), best_obj)
    else:
        bound_int = best_obj
    bound_int = min(bound_int, best_obj)
    gap = rel_gap(best_obj, bound_int)
    if limit_hit and gap > gap_limit:
        status_out = MilpStatus.FEASIBLE_GAP
    else:
        status_out = MilpStatus.OPTIMAL
    return MilpSolution(status_out,
                        prep.sense_factor * best_obj,
                        best_x,
                        prep.sense_factor * bound_int,
                        gap,
                        node_count,
                        bound_history)
