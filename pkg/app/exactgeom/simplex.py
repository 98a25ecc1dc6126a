"""
Dictionary-form simplex tableau over Fractions with Bland's anti-cycling rule.

Row i reads  b_vars[i] + sum_l A[i][l] * nb_vars[l] = b[i];  the objective
row c holds the coefficients of the nonbasic variables in the maximised objective.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Literal, Sequence

from app.logger import logger

Status = Literal["optimal", "unbounded", "go_on"]


class SimplexTableau:
    def __init__(self, m: int, n: int):
        zero = Fraction(0)
        self.m = m
        self.n = n
        self.A = [[zero] * n for _ in range(m)]
        self.b = [zero] * m
        self.c = [zero] * n
        self.nb_vars = list(range(n))
        self.b_vars = list(range(n, n + m))
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        piv = self.A[i][j]
        delta = self.c[j] / piv
        row = self.A[i]
        for l in range(self.n):
            if row[l]:
                self.c[l] -= delta * row[l]
        self.c[j] = -delta
        self.A[i] = [1 / piv if l == j else v / piv for l, v in enumerate(row)]
        self.b[i] /= piv
        row = self.A[i]
        for k in range(self.m):
            if k == i:
                continue
            f = self.A[k][j]
            if f:
                self.A[k] = [
                    -f / piv if l == j else (v - f * row[l] if row[l] else v)
                    for l, v in enumerate(self.A[k])
                ]
                self.b[k] -= f * self.b[i]
        self.nb_vars[j], self.b_vars[i] = self.b_vars[i], self.nb_vars[j]
        self.pivots += 1

    def bland_primal_step(self) -> Status:
        candidates = [(self.nb_vars[j], j) for j in range(self.n) if self.c[j] > 0]
        if not candidates:
            return "optimal"
        _, j = min(candidates)
        rows = [(self.b[i] / self.A[i][j], self.b_vars[i], i) for i in range(self.m) if self.A[i][j] > 0]
        if not rows:
            return "unbounded"
        _, _, i = min(rows)
        self.pivot(i, j)
        return "go_on"

    def bland_primal(self) -> Status:
        while True:
            status = self.bland_primal_step()
            if status != "go_on":
                logger.debug(f"Simplex finished ({status}) after {self.pivots} pivots")
                return status

    def first_phase_cost(self) -> None:
        """Objective maximising minus the sum of the (initially basic) artificial variables."""
        for j in range(self.n):
            self.c[j] = sum((self.A[i][j] for i in range(self.m)), Fraction(0))


def feasibility(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> tuple[list[Fraction] | None, list[Fraction]]:
    """
    Phase I for  sum_l lambda_l columns[l] = rhs,  lambda >= 0.

    Returns:
        (lambda, _) when feasible, or (None, y) with a Farkas vector y satisfying
        y . column <= 0 for every column and y . rhs > 0.
    """
    m, n = len(rhs), len(columns)
    tableau = SimplexTableau(m, n)
    signs = []
    for i in range(m):
        s = -1 if rhs[i] < 0 else 1
        signs.append(s)
        tableau.b[i] = s * Fraction(rhs[i])
        for l in range(n):
            tableau.A[i][l] = s * Fraction(columns[l][i])
    tableau.first_phase_cost()
    tableau.bland_primal()

    residual = sum((tableau.b[i] for i in range(m) if tableau.b_vars[i] >= n), Fraction(0))
    if residual == 0:
        weights = [Fraction(0)] * n
        for i, v in enumerate(tableau.b_vars):
            if v < n:
                weights[v] = tableau.b[i]
        return weights, []

    # artificial k nonbasic at column j carries c_j = -1 - pi_k, basic ones pi_k = -1
    multipliers = [Fraction(1)] * m
    for j, v in enumerate(tableau.nb_vars):
        if v >= n:
            multipliers[v - n] = 1 + tableau.c[j]
    return None, [s * y for s, y in zip(signs, multipliers)]
