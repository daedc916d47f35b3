"""Smith normal form over the integers and finitely generated abelian groups."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("IntMatrix is not rectangular")

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(v) for v in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols required for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def matmul(a: list[list[int]], b: list[list[int]], inner: int | None = None) -> list[list[int]]:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative rank")
        for d in self.torsion:
            if d <= 1:
                raise ValueError("torsion factors must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion factors must form a divisibility chain")

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        """Direct sum, re-normalised to invariant factors."""
        diag = [0] * (self.free_rank + other.free_rank) + list(self.torsion) + list(other.torsion)
        n = len(diag)
        m = [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return smith_normal_form(IntMatrix.from_rows(m, n)).group

    @classmethod
    def parse(cls, text: str) -> "AbelianGroup":
        text = text.strip()
        if text == "0":
            return cls(0)
        rank, tors = 0, []
        for part in text.split(" x "):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"bad abelian group literal {text!r}")
        return cls(rank, tuple(tors))


@dataclass(frozen=True)
class SNFResult:
    group: AbelianGroup
    U: list[list[int]]
    V: list[list[int]]
    D: list[list[int]]
    invariant_factors: tuple[int, ...]

    def check(self, m: IntMatrix) -> bool:
        if m.rows == 0 or m.cols == 0:
            return True
        return matmul(matmul(self.U, m.tolist()), self.V) == self.D


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """Cokernel of m (rows are relations among the `cols` generators).

    Returns U, V unimodular with U*m*V = D diagonal, d_i | d_{i+1}.
    """
    R, C = m.rows, m.cols
    A = m.tolist()
    U = _identity(R)
    V = _identity(C)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(R, C):
        # smallest nonzero pivot in the trailing block
        best = None
        for i in range(t, R):
            for j in range(t, C):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, R):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, C):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot slot and retry
                best = (t, t)
                for i in range(t, R):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, C):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                swap_rows(t, best[0])
                swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, R):
                for j in range(t + 1, C):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    diag = tuple(A[i][i] for i in range(min(R, C)) if A[i][i])
    free = C - len(diag)
    torsion = tuple(d for d in diag if d > 1)
    return SNFResult(AbelianGroup(free, torsion), U, V, A, diag)


def cokernel(rows, cols: int) -> AbelianGroup:
    return smith_normal_form(IntMatrix.from_rows(rows, cols)).group
