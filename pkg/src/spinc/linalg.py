"""Exact linear algebra over Z and Z/2.

Everything here is exact: integer matrices are reduced with unimodular
row/column operations only.  The working dtype is int64 for speed, with a
conservative overflow bound tracked through every update; if a reduction
could exceed the safe range it is transparently promoted to Python
integers (numpy object dtype) and continues, so results never wrap.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Sequence

import numpy as np

# Largest intermediate magnitude allowed on the int64 fast path.  Updates
# that could exceed it trigger promotion to arbitrary precision.
_INT64_SAFE = 1 << 61


class TwoTorsionError(ValueError):
    """Halving requested in a group with 2-torsion."""


class NotDivisibleError(ValueError):
    """Element is not divisible by 2 in its group."""


def intmat(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Build a 2-D integer matrix from nested sequences or an array.

    Shape may be forced with rows/cols for empty inputs.
    """
    a = np.array(data, dtype=object)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim == 1:
        a = a.reshape(len(a), 1) if a.size else a.reshape(0, 0)
    if rows is not None or cols is not None:
        a = a.reshape(rows if rows is not None else a.shape[0],
                      cols if cols is not None else a.shape[1])
    return _compact(a)


def _compact(a: np.ndarray) -> np.ndarray:
    """Use int64 storage when every entry fits, else object."""
    if a.dtype != object:
        return a.astype(np.int64)
    if a.size == 0:
        return a.astype(np.int64)
    m = max(abs(int(x)) for x in a.flat)
    if m < _INT64_SAFE:
        return a.astype(np.int64)
    return a


@dataclass(frozen=True)
class SmithDecomposition:
    """D = U @ M @ V with U, V unimodular and D in Smith normal form.

    uinv and vinv are the exact integer inverses of U and V; they come out
    of the same reduction for free and make solving/cokernel maps cheap.
    invariant_factors lists every nonzero diagonal entry (1s included).
    """

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    uinv: np.ndarray
    vinv: np.ndarray
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


class _Reduction:
    """Mutable state for a Smith reduction with transform tracking."""

    def __init__(self, M: np.ndarray, track: Iterable[str] = ("U", "uinv", "V", "vinv")):
        self.A = _compact(np.array(M, dtype=M.dtype if isinstance(M, np.ndarray) else object))
        m, n = self.A.shape
        self.m, self.n = m, n
        track = set(track)
        eye = lambda k: np.eye(k, dtype=self.A.dtype)
        self.U = eye(m) if "U" in track else None
        self.uinv = eye(m) if "uinv" in track else None
        self.V = eye(n) if "V" in track else None
        self.vinv = eye(n) if "vinv" in track else None
        self._refresh_bound()

    # -- dtype management -------------------------------------------------

    def _arrays(self):
        return [a for a in (self.A, self.U, self.uinv, self.V, self.vinv) if a is not None]

    def _refresh_bound(self) -> None:
        if self.A.dtype == object:
            self.bound = None
            return
        b = 0
        for a in self._arrays():
            if a.size:
                b = max(b, int(np.abs(a).max()))
        self.bound = max(b, 1)

    def _promote(self) -> None:
        self.A = self.A.astype(object)
        for name in ("U", "uinv", "V", "vinv"):
            a = getattr(self, name)
            if a is not None:
                setattr(self, name, a.astype(object))
        self.bound = None

    def _ensure(self, factor: int) -> None:
        """Entries may grow by `factor`; promote unless that stays int64-safe."""
        if self.bound is None:
            return
        if self.bound * factor >= _INT64_SAFE:
            self._refresh_bound()
            if self.bound * factor >= _INT64_SAFE:
                self._promote()
                return
        self.bound *= factor

    # -- elementary operations --------------------------------------------

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.A[[i, j], :] = self.A[[j, i], :]
        if self.U is not None:
            self.U[[i, j], :] = self.U[[j, i], :]
        if self.uinv is not None:
            self.uinv[:, [i, j]] = self.uinv[:, [j, i]]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        self.A[:, [i, j]] = self.A[:, [j, i]]
        if self.V is not None:
            self.V[:, [i, j]] = self.V[:, [j, i]]
        if self.vinv is not None:
            self.vinv[[i, j], :] = self.vinv[[j, i], :]

    def negate_row(self, i: int) -> None:
        self.A[i, :] = -self.A[i, :]
        if self.U is not None:
            self.U[i, :] = -self.U[i, :]
        if self.uinv is not None:
            self.uinv[:, i] = -self.uinv[:, i]

    def sub_rows(self, rows: np.ndarray, q: np.ndarray, t: int) -> None:
        """row[r] -= q[k] * row[t] for each r = rows[k]."""
        if len(rows) == 0:
            return
        if self.bound is not None:
            # the inverse-transform column accumulates all quotients at once
            qsum = int(np.abs(q).sum())
            self._ensure(qsum + 1)
        self.A[rows, :] -= q[:, None] * self.A[t, :]
        if self.U is not None:
            self.U[rows, :] -= q[:, None] * self.U[t, :]
        if self.uinv is not None:
            self.uinv[:, t] += self.uinv[:, rows] @ q

    def sub_cols(self, cols: np.ndarray, q: np.ndarray, t: int) -> None:
        """col[c] -= q[k] * col[t] for each c = cols[k]."""
        if len(cols) == 0:
            return
        if self.bound is not None:
            qsum = int(np.abs(q).sum())
            self._ensure(qsum + 1)
        self.A[:, cols] -= self.A[:, t][:, None] * q[None, :]
        if self.V is not None:
            self.V[:, cols] -= self.V[:, t][:, None] * q[None, :]
        if self.vinv is not None:
            self.vinv[t, :] += q @ self.vinv[cols, :]

    # -- pivot search -------------------------------------------------------

    def find_pivot(self, t: int):
        """Smallest nonzero |entry| in A[t:, t:], lexicographic tie-break.

        Scans row by row and stops early once an entry of absolute value 1
        is seen (nothing can beat it, and earlier rows were already clean).
        """
        best = None  # (absval, i, j)
        A = self.A
        for i in range(t, self.m):
            row = A[i, t:]
            nz = np.nonzero(row)[0]
            if len(nz) == 0:
                continue
            vals = np.abs(row[nz])
            k = int(np.argmin(vals))
            v = int(vals[k])
            if best is None or v < best[0]:
                best = (v, i, t + int(nz[k]))
                if v == 1:
                    return best
        return best


def _smith_reduce(red: _Reduction) -> list[int]:
    """Drive a _Reduction to Smith normal form; returns diagonal entries."""
    A = lambda: red.A
    t = 0
    limit = min(red.m, red.n)
    while t < limit:
        piv = red.find_pivot(t)
        if piv is None:
            break
        _, pi, pj = piv
        red.swap_rows(t, pi)
        red.swap_cols(t, pj)
        while True:
            # clear column t below the pivot
            while True:
                p = int(A()[t, t])
                col = A()[t + 1:, t]
                rows = np.nonzero(col)[0]
                if len(rows) == 0:
                    break
                q = col[rows] // p
                red.sub_rows(rows + t + 1, q, t)
                col = A()[t + 1:, t]
                rows = np.nonzero(col)[0]
                if len(rows) == 0:
                    break
                # a nonzero remainder is strictly smaller: promote it to pivot
                k = rows[int(np.argmin(np.abs(col[rows])))]
                red.swap_rows(t, t + 1 + int(k))
            # clear row t right of the pivot
            p = int(A()[t, t])
            row = A()[t, t + 1:]
            cols = np.nonzero(row)[0]
            if len(cols) == 0:
                break
            q = row[cols] // p
            red.sub_cols(cols + t + 1, q, t)
            row = A()[t, t + 1:]
            cols = np.nonzero(row)[0]
            if len(cols) == 0:
                break
            k = cols[int(np.argmin(np.abs(row[cols])))]
            red.swap_cols(t, t + 1 + int(k))
            # column t may be dirty again; loop
        t += 1
    rank = t

    # enforce the divisibility chain d1 | d2 | ... by gcd-folding
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            a, b = int(A()[i, i]), int(A()[i + 1, i + 1])
            if a != 0 and b % a != 0:
                # fold row i+1 into row i, giving [[a, b], [0, b]], then
                # Euclidean-clear the 2x2 block down to diag(gcd, lcm)
                red.sub_rows(np.array([i]), np.array([-1], dtype=np.int64), i + 1)
                _clear_block(red, i)
                changed = True

    for i in range(rank):
        if int(A()[i, i]) < 0:
            red.negate_row(i)
    return [int(A()[i, i]) for i in range(rank)]


def _clear_block(red: _Reduction, i: int) -> None:
    """Re-reduce rows/cols i, i+1 after a divisibility fold."""
    while True:
        a = int(red.A[i, i])
        b = int(red.A[i + 1, i])
        if b != 0:
            if a == 0 or (abs(b) < abs(a)):
                red.swap_rows(i, i + 1)
                continue
            q = b // a
            red.sub_rows(np.array([i + 1]), np.array([q], dtype=red.A.dtype), i)
            if int(red.A[i + 1, i]) != 0:
                continue
        c = int(red.A[i, i + 1])
        a = int(red.A[i, i])
        if c != 0:
            if a == 0 or (abs(c) < abs(a)):
                red.swap_cols(i, i + 1)
                continue
            q = c // a
            red.sub_cols(np.array([i + 1]), np.array([q], dtype=red.A.dtype), i)
            if int(red.A[i, i + 1]) != 0:
                continue
        if int(red.A[i + 1, i]) == 0 and int(red.A[i, i + 1]) == 0:
            return


def smith_normal_form(M, track: Iterable[str] = ("U", "uinv", "V", "vinv")) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting picks the smallest nonzero absolute value with lexicographic
    tie-break, which keeps coefficient growth modest on incidence-like
    matrices.  Pass a smaller `track` set to skip transforms you do not
    need (they dominate the cost on large matrices).
    """
    M = M if isinstance(M, np.ndarray) else intmat(M)
    red = _Reduction(M, track=track)
    diag = _smith_reduce(red)
    factors = tuple(d for d in diag if d != 0)
    eye = lambda k: np.eye(k, dtype=np.int64)
    return SmithDecomposition(
        U=red.U if red.U is not None else eye(red.m),
        D=red.A,
        V=red.V if red.V is not None else eye(red.n),
        uinv=red.uinv if red.uinv is not None else eye(red.m),
        vinv=red.vinv if red.vinv is not None else eye(red.n),
        invariant_factors=factors,
    )


def solve_Z(M, b) -> np.ndarray | None:
    """Some integer x with M x = b, or None if no integral solution."""
    M = M if isinstance(M, np.ndarray) else intmat(M)
    snf = smith_normal_form(M, track=("U", "V"))
    return _solve_from_snf(snf, np.asarray(b).reshape(-1))


def _solve_from_snf(snf: SmithDecomposition, b: np.ndarray) -> np.ndarray | None:
    m, n = snf.D.shape
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: {b.shape[0]} != {m}")
    c = snf.U @ b.astype(snf.U.dtype if snf.U.dtype == object else object)
    z = np.zeros(n, dtype=object)
    r = snf.rank
    for i in range(r):
        d = int(snf.D[i, i])
        ci = int(c[i])
        if ci % d != 0:
            return None
        z[i] = ci // d
    for i in range(r, m):
        if int(c[i]) != 0:
            return None
    x = snf.V @ z
    return x


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group in invariant-factor form.

    Coordinates of an element are a free integer vector of length `rank`
    followed by torsion residues, one per invariant factor.
    """

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and self.torsion[i] % self.torsion[i - 1] != 0:
                raise ValueError(f"invariant factors {self.torsion} violate divisibility")

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> GroupElement:
        free = tuple(int(x) for x in free)
        torsion = tuple(int(x) % d for x, d in zip(torsion, self.torsion, strict=True))
        if len(free) != self.rank:
            raise ValueError(f"expected {self.rank} free coordinates, got {len(free)}")
        return GroupElement(self, free, torsion)

    def zero(self) -> GroupElement:
        return self.element((0,) * self.rank, (0,) * len(self.torsion))

    def unit(self, i: int) -> GroupElement:
        """i-th standard generator (free generators first, then torsion)."""
        free = [0] * self.rank
        tor = [0] * len(self.torsion)
        if i < self.rank:
            free[i] = 1
        else:
            tor[i - self.rank] = 1
        return self.element(free, tor)

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    def order(self) -> int | None:
        """Number of elements, or None when infinite."""
        if self.rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def elements(self) -> list[GroupElement]:
        """All elements of a finite group, in lexicographic coordinate order."""
        if self.rank:
            raise ValueError("group is infinite")
        out = [()]
        for d in self.torsion:
            out = [t + (i,) for t in out for i in range(d)]
        return [self.element((), t) for t in out]

    def has_two_torsion(self) -> bool:
        return any(d % 2 == 0 for d in self.torsion)

    def two_torsion_elements(self) -> list[GroupElement]:
        """All x with 2x = 0 (finite list even when the group is infinite)."""
        out = [()]
        for d in self.torsion:
            halves = [0] if d % 2 else [0, d // 2]
            out = [t + (i,) for t in out for i in halves]
        return [self.element((0,) * self.rank, t) for t in out]

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    """Element of an AbelianGroup; torsion residues kept in [0, d)."""

    group: AbelianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def _check(self, other: GroupElement) -> None:
        if self.group != other.group:
            raise ValueError("elements of different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.group.element(
            [a + b for a, b in zip(self.free, other.free)],
            [a + b for a, b in zip(self.torsion, other.torsion)],
        )

    def __neg__(self) -> GroupElement:
        return self.group.element([-a for a in self.free], [-a for a in self.torsion])

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __rmul__(self, n: int) -> GroupElement:
        return self.group.element([n * a for a in self.free], [n * a for a in self.torsion])

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def coords(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}


@dataclass(frozen=True)
class CokernelPresentation:
    """Z^rows / im(M) with explicit projection and section.

    projection takes an integer vector to coordinates in `group`; section
    picks a representative vector for given coordinates, and
    projection(section(x)) == x exactly.
    """

    group: AbelianGroup
    rows: int
    _U: np.ndarray
    _uinv: np.ndarray
    _diag: tuple[int, ...]
    _torsion_idx: tuple[int, ...]

    def project(self, x) -> GroupElement:
        x = np.asarray(x, dtype=object).reshape(-1)
        if x.shape[0] != self.rows:
            raise ValueError(f"expected vector of length {self.rows}")
        y = self._U @ x
        r = len(self._diag)
        free = [int(v) for v in y[r:]]
        tor = [int(y[i]) % self._diag[i] for i in self._torsion_idx]
        return self.group.element(free, tor)

    def section(self, g: GroupElement) -> np.ndarray:
        if g.group != self.group:
            raise ValueError("element of a different group")
        r = len(self._diag)
        y = np.zeros(self.rows, dtype=object)
        for k, i in enumerate(self._torsion_idx):
            y[i] = g.torsion[k]
        for k in range(self.group.rank):
            y[r + k] = g.free[k]
        return self._uinv @ y


def cokernel(M, rows: int | None = None) -> CokernelPresentation:
    """Present Z^rows / im(M) in invariant-factor coordinates."""
    M = M if isinstance(M, np.ndarray) else intmat(M)
    if rows is not None and M.shape[0] != rows:
        raise ValueError("row count mismatch")
    snf = smith_normal_form(M, track=("U", "uinv"))
    diag = snf.invariant_factors
    torsion_idx = tuple(i for i, d in enumerate(diag) if d > 1)
    group = AbelianGroup(rank=M.shape[0] - len(diag),
                         torsion=tuple(diag[i] for i in torsion_idx))
    return CokernelPresentation(group=group, rows=M.shape[0], _U=snf.U,
                                _uinv=snf.uinv, _diag=diag, _torsion_idx=torsion_idx)


def halve(group: AbelianGroup, y: GroupElement) -> GroupElement:
    """The unique x with 2x = y in a group without 2-torsion."""
    if y.group != group:
        raise ValueError("element of a different group")
    if group.has_two_torsion():
        raise TwoTorsionError(f"2-torsion present in {group}")
    if any(a % 2 for a in y.free):
        raise NotDivisibleError("free coordinate is odd; not divisible by 2")
    free = [a // 2 for a in y.free]
    tor = [(a * pow(2, -1, d)) % d for a, d in zip(y.torsion, group.torsion)]
    return group.element(free, tor)


def element_in_span(gens: Sequence[GroupElement], target: GroupElement) -> bool:
    """Whether target lies in the subgroup generated by gens."""
    if not gens:
        return target.is_zero()
    g = target.group
    rank, tors = g.rank, g.torsion
    # columns: generators, then d_i * e_i relations for the torsion coords
    cols = [list(x.coords()) for x in gens]
    for k, d in enumerate(tors):
        rel = [0] * g.ngens
        rel[rank + k] = d
        cols.append(rel)
    M = intmat(np.array(cols, dtype=object).T)
    return solve_Z(M, np.array(list(target.coords()), dtype=object)) is not None


def subgroup_elements(gens: Sequence[GroupElement]) -> list[GroupElement]:
    """All elements of the subgroup generated by gens (must be finite)."""
    if not gens:
        return []
    zero = gens[0].group.zero()
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for gen in gens:
                y = x + gen
                if y not in seen:
                    if len(seen) > 100000:
                        raise ValueError("subgroup too large to enumerate")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda e: e.coords())


# ----------------------------------------------------------------------
# GF(2) linear algebra on bitmask rows
# ----------------------------------------------------------------------


class F2Matrix:
    """Matrix over GF(2); each row is a Python int bitmask (bit j = col j)."""

    def __init__(self, rows: list[int], ncols: int):
        self.rows = list(rows)
        self.ncols = ncols

    @classmethod
    def from_array(cls, a) -> F2Matrix:
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("need a 2-D array")
        rows = []
        for i in range(a.shape[0]):
            r = 0
            for j in range(a.shape[1]):
                if int(a[i, j]) % 2:
                    r |= 1 << j
            rows.append(r)
        return cls(rows, a.shape[1])

    def to_array(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.ncols), dtype=np.int64)
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    out[i, j] = 1
                r >>= 1
                j += 1
        return out


def _vec_to_mask(v) -> int:
    m = 0
    for j, x in enumerate(v):
        if int(x) % 2:
            m |= 1 << j
    return m


def _mask_to_vec(m: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    j = 0
    while m:
        if m & 1:
            out[j] = 1
        m >>= 1
        j += 1
    return out


class F2Echelon:
    """Incremental echelon basis over GF(2) with combination tracking.

    Vectors are bitmasks.  add() reduces a vector against the basis; if a
    nonzero residue remains it joins the basis.  Combinations are tracked
    against the order vectors were added, so solve() can report which
    inputs sum to a target.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (vec, comb)
        self.count = 0

    @staticmethod
    def _lowbit(x: int) -> int:
        return (x & -x).bit_length() - 1

    def reduce(self, v: int, comb: int = 0) -> tuple[int, int]:
        while v:
            b = self._lowbit(v)
            hit = self.pivots.get(b)
            if hit is None:
                return v, comb
            v ^= hit[0]
            comb ^= hit[1]
        return 0, comb

    def add(self, v: int) -> bool:
        """Insert a vector; True if it enlarged the span."""
        tag = 1 << self.count
        self.count += 1
        v, comb = self.reduce(v, tag)
        if v == 0:
            return False
        self.pivots[self._lowbit(v)] = (v, comb)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def solve(self, v: int) -> int | None:
        """Bitmask over added vectors summing to v, or None."""
        res, comb = self.reduce(v)
        return comb if res == 0 else None

    @property
    def dim(self) -> int:
        return len(self.pivots)


def solve_F2(M, b) -> np.ndarray | None:
    """Some x over GF(2) with M x = b (entries 0/1), or None."""
    M = np.asarray(M)
    m, n = M.shape
    b = np.asarray(b).reshape(-1)
    if b.shape[0] != m:
        raise ValueError("dimension mismatch")
    # treat columns as vectors; find a combination hitting b
    ech = F2Echelon()
    col_masks = []
    for j in range(n):
        col_masks.append(_vec_to_mask(M[:, j]))
    for cm in col_masks:
        ech.add(cm)
    comb = ech.solve(_vec_to_mask(b))
    if comb is None:
        return None
    return _mask_to_vec(comb, n)


def kernel_F2(M) -> list[np.ndarray]:
    """Basis of the nullspace of M over GF(2), as 0/1 vectors."""
    M = np.asarray(M)
    m, n = M.shape
    ech = F2Echelon()
    out = []
    for j in range(n):
        v = _vec_to_mask(M[:, j])
        res, comb = ech.reduce(v, 1 << j)
        if res == 0:
            out.append(_mask_to_vec(comb, n))
        else:
            ech.pivots[F2Echelon._lowbit(res)] = (res, comb)
    return out
