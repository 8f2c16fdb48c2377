"""Independent reference solvers used to check the simplex / branch-and-bound.

These are deliberately naive: LPs are solved by enumerating candidate
vertices (every n-subset of tight constraints), MILPs by enumerating all
binary assignments. They share no code with the production solver.
"""
from __future__ import annotations

import itertools

import numpy as np

FEAS_EPS = 1e-7


def enumerate_lp(c, A_ub, b_ub, A_eq, b_eq, lb, ub, sense="min"):
    """Vertex-enumeration LP oracle for small, bounded problems.

    Returns (status, objective, x) with status in {"optimal", "infeasible"}.
    All variables must have finite bounds so the region is bounded and the
    optimum (if any) is attained at a vertex.
    """
    n = len(lb)
    rows = []
    rhs = []
    # inequalities as a.x <= b
    for a, b in zip(A_ub, b_ub):
        rows.append(np.asarray(a, dtype=float))
        rhs.append(float(b))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        rows.append(e.copy())
        rhs.append(float(ub[j]))
        rows.append(-e)
        rhs.append(-float(lb[j]))
    eq_rows = [np.asarray(a, dtype=float) for a in A_eq]
    eq_rhs = [float(b) for b in b_eq]

    n_eq = len(eq_rows)
    c = np.asarray(c, dtype=float)
    if n_eq > n:
        return "infeasible", None, None

    best = None
    best_x = None
    # a vertex has n tight constraints; equalities are always tight
    for extra in itertools.combinations(range(len(rows)), n - n_eq):
        M = np.array(eq_rows + [rows[i] for i in extra])
        v = np.array(eq_rhs + [rhs[i] for i in extra])
        try:
            x = np.linalg.solve(M, v)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        ok = True
        for a, b in zip(rows, rhs):
            if a @ x > b + FEAS_EPS:
                ok = False
                break
        if ok:
            for a, b in zip(eq_rows, eq_rhs):
                if abs(a @ x - b) > FEAS_EPS:
                    ok = False
                    break
        if not ok:
            continue
        val = float(c @ x)
        if best is None or (sense == "min" and val < best) or \
                (sense == "max" and val > best):
            best = val
            best_x = x
    if best is None:
        return "infeasible", None, None
    return "optimal", best, best_x


def brute_force_milp(c, A_ub, b_ub, A_eq, b_eq, lb, ub, binary_mask, sense="min"):
    """Enumerate binary assignments; solve the continuous rest by vertices."""
    n = len(lb)
    bin_idx = [j for j in range(n) if binary_mask[j]]
    cont_idx = [j for j in range(n) if not binary_mask[j]]
    c = np.asarray(c, dtype=float)
    best = None
    best_x = None
    for bits in itertools.product((0.0, 1.0), repeat=len(bin_idx)):
        fixed = dict(zip(bin_idx, bits))
        if any(b < lb[j] - 1e-12 or b > ub[j] + 1e-12 for j, b in fixed.items()):
            continue
        if not cont_idx:
            x = np.zeros(n)
            for j, b in fixed.items():
                x[j] = b
            ok = all(np.asarray(a) @ x <= b + FEAS_EPS for a, b in zip(A_ub, b_ub))
            ok = ok and all(abs(np.asarray(a) @ x - b) <= FEAS_EPS
                            for a, b in zip(A_eq, b_eq))
            if not ok:
                continue
            val = float(c @ x)
        else:
            # reduce to a continuous LP over cont_idx
            sub_A_ub, sub_b_ub = [], []
            for a, b in zip(A_ub, b_ub):
                a = np.asarray(a, dtype=float)
                sub_A_ub.append(a[cont_idx])
                sub_b_ub.append(b - sum(a[j] * fixed[j] for j in bin_idx))
            sub_A_eq, sub_b_eq = [], []
            for a, b in zip(A_eq, b_eq):
                a = np.asarray(a, dtype=float)
                sub_A_eq.append(a[cont_idx])
                sub_b_eq.append(b - sum(a[j] * fixed[j] for j in bin_idx))
            status, val_sub, x_sub = enumerate_lp(
                c[cont_idx], sub_A_ub, sub_b_ub, sub_A_eq, sub_b_eq,
                [lb[j] for j in cont_idx], [ub[j] for j in cont_idx], sense)
            if status != "optimal":
                continue
            x = np.zeros(n)
            for j, b in fixed.items():
                x[j] = b
            for k, j in enumerate(cont_idx):
                x[j] = x_sub[k]
            val = float(c @ x)
        if best is None or (sense == "min" and val < best) or \
                (sense == "max" and val > best):
            best = val
            best_x = x
    if best is None:
        return "infeasible", None, None
    return "optimal", best, best_x


def random_lp(rng, max_vars=4, max_rows=6):
    """A random bounded LP in plain arrays (inequalities only)."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, max_rows + 1))
    A = rng.uniform(-3.0, 3.0, size=(m, n)).round(2)
    b = rng.uniform(-2.0, 6.0, size=m).round(2)
    c = rng.uniform(-5.0, 5.0, size=n).round(2)
    lb = np.zeros(n)
    ub = rng.uniform(1.0, 8.0, size=n).round(2)
    sense = "min" if rng.random() < 0.5 else "max"
    return c, A, b, lb, ub, sense


def random_milp(rng, max_bins=12, max_cont=3, max_rows=6):
    """A random bounded MILP: binaries plus a few bounded continuous vars."""
    nb = int(rng.integers(1, max_bins + 1))
    nc = int(rng.integers(0, max_cont + 1))
    n = nb + nc
    m = int(rng.integers(1, max_rows + 1))
    A = rng.uniform(-3.0, 3.0, size=(m, n)).round(2)
    b = rng.uniform(-1.0, 6.0, size=m).round(2)
    c = rng.uniform(-5.0, 5.0, size=n).round(2)
    lb = np.zeros(n)
    ub = np.ones(n)
    if nc:
        ub[nb:] = rng.uniform(1.0, 6.0, size=nc).round(2)
    mask = np.array([True] * nb + [False] * nc)
    sense = "min" if rng.random() < 0.5 else "max"
    return c, A, b, lb, ub, mask, sense
