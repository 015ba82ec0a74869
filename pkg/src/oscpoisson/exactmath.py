"""Exact rational scalars, sparse multivariate polynomials, and exact linear solving.

Scalars are :class:`fractions.Fraction`.  Polynomials are kept in a canonical
sparse form keyed by monomials over named parameters.  Every structure constant
elsewhere in the package is a ``Coeff``: either a Fraction or a :class:`Poly`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Scalar = Fraction
Monomial = tuple  # tuple[tuple[str, int], ...] sorted by variable rank


class InconsistentSystem(ValueError):
    """Raised when a linear system has no solution."""


class MissingVariable(KeyError):
    pass


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


def to_scalar(x) -> Fraction:
    """Coerce an int, Fraction, rational string ("3/2") or constant Poly to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Poly):
        if not x.is_constant():
            raise TypeError(f"non-constant polynomial {x} where a scalar is required")
        return x.constant_term()
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact scalar")


def scalar_arith(op: str, a, b=None) -> Fraction:
    a = to_scalar(a)
    if op == "neg":
        return -a
    if op == "inv":
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a
    b = to_scalar(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown scalar op {op!r}")


def scalar_to_json(x) -> str:
    return str(to_scalar(x))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

# Fixed parameter groups give a run-independent variable order.
_GROUPS = [
    (re.compile(r"c$"), 0),
    (re.compile(r"gamma$"), 1),
    (re.compile(r"a$"), 2),
    (re.compile(r"mu(\d+)$"), 3),
    (re.compile(r"t(\d+)$"), 4),
    (re.compile(r"u_(-?\d+)_(-?\d+)_(-?\d+)$"), 5),
]


@lru_cache(maxsize=None)
def var_rank(name: str) -> tuple:
    """Sort key of a variable in the global registry."""
    for pattern, group in _GROUPS:
        m = pattern.match(name)
        if m:
            return (group, tuple(int(g) for g in m.groups()), name)
    return (9, (), name)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: var_rank(ve[0])))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Immutable.  Zero coefficients are never stored, so equality is dict equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    clean[mono] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, value) -> "Poly":
        return cls({(): to_scalar(value)})

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def variables(self) -> tuple[str, ...]:
        names = {v for mono in self._terms for v, _ in mono}
        return tuple(sorted(names, key=var_rank))

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    # arithmetic -------------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Poly):
            other = Fraction(other)
            if other == 0:
                return Poly()
            return Poly._raw({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            other = to_scalar(other)
        return self * (1 / Fraction(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # evaluation -------------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            val = coeff
            for v, e in mono:
                if v not in assignment:
                    raise MissingVariable(v)
                val *= to_scalar(assignment[v]) ** e
            total += val
        return total

    def substitute(self, mapping: Mapping[str, object]) -> "Poly":
        """Replace variables by Coeffs; unmapped variables are kept."""
        out = Poly()
        cache: dict = {}
        for mono, coeff in self._terms.items():
            term = Poly.const(coeff)
            for v, e in mono:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = as_poly(mapping[v]) ** e
                    term = term * cache[key]
                else:
                    term = term * Poly({((v, e),): Fraction(1)})
            out = out + term
        return out

    def linear_part(self) -> tuple[dict[str, Fraction], Fraction]:
        """(coefficient per variable, constant) of a polynomial of degree <= 1."""
        lin: dict[str, Fraction] = {}
        const = Fraction(0)
        for mono, coeff in self._terms.items():
            if not mono:
                const = coeff
            elif len(mono) == 1 and mono[0][1] == 1:
                lin[mono[0][0]] = coeff
            else:
                raise ValueError(f"{self} is not affine")
        return lin, const

    # canonical ordering / serialization ------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lexicographic order (highest first)."""
        variables = self.variables
        def key(item):
            mono = dict(item[0])
            exps = tuple(mono.get(v, 0) for v in variables)
            return (-sum(exps), tuple(-e for e in exps))
        return sorted(self._terms.items(), key=key)

    def to_json(self):
        if self.is_constant():
            return str(self.constant_term())
        variables = self.variables
        return {
            "vars": list(variables),
            "terms": [
                {"exps": [dict(m).get(v, 0) for v in variables], "coeff": str(c)}
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "Poly":
        if isinstance(data, (str, int)):
            return cls.const(Fraction(data))
        variables = data["vars"]
        terms = {}
        for t in data["terms"]:
            mono = tuple(
                sorted(((v, e) for v, e in zip(variables, t["exps"]) if e), key=lambda ve: var_rank(ve[0]))
            )
            terms[mono] = terms.get(mono, 0) + Fraction(t["coeff"])
        return cls(terms)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_terms():
            mono_s = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            if not mono_s:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(mono_s)
            elif coeff == -1:
                parts.append("-" + mono_s)
            else:
                parts.append(f"{coeff}*{mono_s}")
        return " + ".join(parts).replace("+ -", "- ")


Coeff = Union[Fraction, Poly]


def as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def simplify(x) -> Coeff:
    """Collapse constant polynomials to Fractions; leave symbolic ones alone."""
    if isinstance(x, Poly):
        return x.constant_term() if x.is_constant() else x
    return Fraction(x)


def is_zero(x) -> bool:
    return x == 0


def poly_arith(op: str, p, q=None) -> Poly:
    p = as_poly(p)
    if op == "neg":
        return -p
    q = as_poly(q)
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown polynomial op {op!r}")


def poly_eval(p, assignment: Mapping[str, object]) -> Fraction:
    return as_poly(p).evaluate(assignment)


def coeff_to_json(x):
    x = simplify(x)
    return x.to_json() if isinstance(x, Poly) else str(x)


def coeff_from_json(data) -> Coeff:
    if isinstance(data, (str, int)):
        return Fraction(data)
    return simplify(Poly.from_json(data))


_COEFF_RE = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z_][A-Za-z_0-9]*)?\s*$")


def parse_coeff(text: str) -> Coeff:
    """Parse "3/2", "a", "-a", "2*gamma" or "2gamma" into a Coeff."""
    text = text.strip()
    sign = 1
    if text.startswith("-") and not re.match(r"^-\d", text):
        sign, text = -1, text[1:]
    m = _COEFF_RE.match(text)
    if not m or not (m.group(1) or m.group(2)):
        raise ValueError(f"cannot parse coefficient {text!r}")
    num = Fraction(m.group(1)) if m.group(1) else Fraction(1)
    if m.group(2):
        return sign * num * Poly.var(m.group(2))
    return sign * num


# ---------------------------------------------------------------------------
# matrices and linear systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    entries: tuple[tuple, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Matrix":
        rows = tuple(tuple(simplify(x) for x in row) for row in rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        return cls(rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def apply(self, x: Sequence) -> tuple:
        if len(x) != self.cols:
            raise ValueError(f"vector of length {len(x)} against {self.cols} columns")
        return tuple(
            simplify(sum((a * b for a, b in zip(row, x) if a != 0), Fraction(0))) for row in self.entries
        )

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            cols = list(zip(*other.entries))
            return Matrix.from_rows(
                [sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.entries
            )
        return self.apply(other)

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.entries)))

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{j: to_scalar(a) for j, a in enumerate(row) if a != 0} for row in self.entries]

    def rank(self) -> int:
        return len(rref_sparse(self.sparse_rows(), self.cols)[1])


def rref_sparse(rows: list[dict[int, Fraction]], ncols: int, rhs: list[Fraction] | None = None):
    """Reduced row echelon form of sparse rows.

    Pivots are chosen column by column, taking the first remaining row (top to
    bottom) with a nonzero entry.  Returns ``(reduced_rows, pivot_cols, rhs)``
    where the reduced rows are the nonzero ones, in pivot order.
    """
    work = [dict(r) for r in rows]
    b = list(rhs) if rhs is not None else [Fraction(0)] * len(work)
    # index rows by their columns so pivot search is cheap
    pivot_rows: list[dict[int, Fraction]] = []
    pivot_rhs: list[Fraction] = []
    pivots: list[int] = []
    active = list(range(len(work)))
    for col in range(ncols):
        pick = None
        for pos, r in enumerate(active):
            if work[r].get(col, 0) != 0:
                pick = pos
                break
        if pick is None:
            continue
        r = active.pop(pick)
        row, br = work[r], b[r]
        inv = 1 / row[col]
        row = {j: v * inv for j, v in row.items()}
        br = br * inv
        for other in active:
            f = work[other].get(col, 0)
            if f:
                orow = work[other]
                for j, v in row.items():
                    s = orow.get(j, 0) - f * v
                    if s:
                        orow[j] = s
                    else:
                        orow.pop(j, None)
                b[other] -= f * br
        for k, prow in enumerate(pivot_rows):
            f = prow.get(col, 0)
            if f:
                for j, v in row.items():
                    s = prow.get(j, 0) - f * v
                    if s:
                        prow[j] = s
                    else:
                        prow.pop(j, None)
                pivot_rhs[k] -= f * br
        pivot_rows.append(row)
        pivot_rhs.append(br)
        pivots.append(col)
    leftover = [b[r] for r in active]
    return pivot_rows, pivots, (pivot_rhs, leftover)


def rref_basis(vectors: Iterable[Sequence], ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical (RREF) basis of the span of the given vectors."""
    rows = [{j: to_scalar(a) for j, a in enumerate(v) if a != 0} for v in vectors]
    reduced, _, _ = rref_sparse(rows, ncols)
    return tuple(tuple(r.get(j, Fraction(0)) for j in range(ncols)) for r in reduced)


def nullspace(A: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    return solve_linear(A, [Fraction(0)] * A.rows).nullspace_basis


def _solve_sparse(rows, rhs, ncols, names=None, system=None) -> "AffineSolutionSpace":
    reduced, pivots, (prhs, leftover) = rref_sparse(rows, ncols, rhs)
    if any(x != 0 for x in leftover):
        raise InconsistentSystem("linear system is inconsistent")
    particular = [Fraction(0)] * ncols
    for row_rhs, col in zip(prhs, pivots):
        particular[col] = row_rhs
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, col in zip(reduced, pivots):
            a = row.get(f, 0)
            if a:
                v[col] = -a
        basis.append(v)
    canonical = rref_basis(basis, ncols)
    param_names = tuple(names) if names is not None else tuple(f"t{i + 1}" for i in range(len(canonical)))
    return AffineSolutionSpace(tuple(particular), canonical, param_names, system=system)


def solve_linear(A: Matrix, b: Sequence, param_names: Sequence[str] | None = None) -> "AffineSolutionSpace":
    """Exact affine solution set of ``A x = b``; raises InconsistentSystem."""
    if len(b) != A.rows:
        raise ValueError(f"rhs of length {len(b)} against {A.rows} rows")
    b = [to_scalar(x) for x in b]
    return _solve_sparse(A.sparse_rows(), b, A.cols, param_names, system=(A, tuple(b)))


@dataclass(frozen=True)
class AffineSolutionSpace:
    particular: tuple[Fraction, ...]
    nullspace_basis: tuple[tuple[Fraction, ...], ...]
    free_param_names: tuple[str, ...]
    system: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.free_param_names) != len(self.nullspace_basis):
            raise ValueError("one parameter name per basis vector is required")
        n = len(self.particular)
        if any(len(v) != n for v in self.nullspace_basis):
            raise ValueError("basis vectors must match the ambient dimension")
        if len(rref_basis(self.nullspace_basis, n)) != len(self.nullspace_basis):
            raise ValueError("nullspace basis is linearly dependent")
        if self.system is not None:
            A, b = self.system
            if tuple(A.apply(self.particular)) != tuple(b):
                raise AssertionError("particular solution does not satisfy the system")
            for v in self.nullspace_basis:
                if any(x != 0 for x in A.apply(v)):
                    raise AssertionError("nullspace vector is not annihilated")

    @property
    def dim(self) -> int:
        return len(self.nullspace_basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.particular)

    def point(self, params: Sequence) -> tuple[Fraction, ...]:
        if len(params) != self.dim:
            raise ValueError(f"expected {self.dim} parameters")
        x = list(self.particular)
        for t, v in zip(params, self.nullspace_basis):
            t = to_scalar(t)
            for j, a in enumerate(v):
                if a:
                    x[j] += t * a
        return tuple(x)

    def parametrized(self) -> tuple[Coeff, ...]:
        """Each coordinate as an affine polynomial in the free parameters."""
        out = [as_poly(p) for p in self.particular]
        for name, v in zip(self.free_param_names, self.nullspace_basis):
            t = Poly.var(name)
            for j, a in enumerate(v):
                if a:
                    out[j] = out[j] + t * a
        return tuple(simplify(x) for x in out)

    def contains(self, x: Sequence) -> bool:
        diff = [to_scalar(a) - p for a, p in zip(x, self.particular)]
        n = self.ambient_dim
        return len(rref_basis(list(self.nullspace_basis) + [diff], n)) == self.dim

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "particular": [str(x) for x in self.particular],
            "basis": [[str(x) for x in v] for v in self.nullspace_basis],
            "free_params": list(self.free_param_names),
        }
