"""Finite fields GF(q^m) presented as coordinate vectors over GF(q).

An element of GF(q^m) is a residue class of GF(q)[x] modulo an irreducible
polynomial of degree m.  We store it as a single int packing its coordinate
vector (c_0, ..., c_{m-1}) in base q, digit i being the coefficient of x^i.
For q = 2 this is the usual bit representation of binary field elements.

Small fields (order <= 65536) get discrete log/antilog tables, so multiply,
invert, power and Frobenius are O(1) lookups.  Larger fields fall back to
schoolbook polynomial arithmetic; they stay exact, just slower.

``FieldTower`` holds the layered structure used by the locality
construction: a subfield GF(q^s) inside GF(q^n) inside the ambient field,
with one basis for GF(q^s) over GF(q) and one for GF(q^n) over GF(q^s).
The executable independence check for the second basis is that the full
product set of the two bases has GF(q)-rank n.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels

_TABLE_LIMIT = 1 << 16
_FACTOR_LIMIT = 1 << 32

# Primitive polynomials over GF(2), degree 1..16, coefficients low order
# first.  Degree 9 is x^9 + x^4 + 1.
_BINARY_MODULI = {
    1: (1, 1),
    2: (1, 1, 1),
    3: (1, 1, 0, 1),
    4: (1, 1, 0, 0, 1),
    5: (1, 0, 1, 0, 0, 1),
    6: (1, 1, 0, 0, 0, 0, 1),
    7: (1, 1, 0, 0, 0, 0, 0, 1),
    8: (1, 0, 1, 1, 1, 0, 0, 0, 1),
    9: (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    10: (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    11: (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    12: (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    13: (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    14: (1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1),
    15: (1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    16: (1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, e) with q = p**e, p prime."""
    if q < 2:
        raise ValueError("q must be a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            v = q
            while v % p == 0:
                v //= p
                e += 1
            if v != 1 or not _is_prime(p):
                raise ValueError("q must be a prime power")
            return p, e
    raise ValueError("q must be a prime power")


def _factorize(n: int) -> dict[int, int]:
    if n > _FACTOR_LIMIT:
        raise ValueError("factorization beyond 2**32 not supported")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class GFTables(NamedTuple):
    """Base-field operation tables consumed by the linear-algebra kernels."""

    q: int
    add: np.ndarray
    sub: np.ndarray
    mul: np.ndarray
    inv: np.ndarray


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: Sequence[int], b: Sequence[int], t: GFTables) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = int(t.add[out[i + j], t.mul[ai, bj]])
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], t: GFTables) -> list[int]:
    out = list(a)
    dm = len(mod) - 1
    lead_inv = int(t.inv[mod[-1]])
    for i in range(len(out) - 1, dm - 1, -1):
        c = out[i]
        if c:
            f = int(t.mul[c, lead_inv])
            for j, mj in enumerate(mod):
                out[i - dm + j] = int(t.sub[out[i - dm + j], t.mul[f, mj]])
    return _poly_trim(out)


def _poly_divmod(a, b, t: GFTables):
    rem = list(a)
    db = len(b) - 1
    lead_inv = int(t.inv[b[-1]])
    quo = [0] * max(len(rem) - db, 0)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c:
            f = int(t.mul[c, lead_inv])
            quo[i - db] = f
            for j, bj in enumerate(b):
                rem[i - db + j] = int(t.sub[rem[i - db + j], t.mul[f, bj]])
    return _poly_trim(quo), _poly_trim(rem)


def _poly_is_irreducible(mod: Sequence[int], t: GFTables) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(mod) - 1
    if deg < 1 or mod[-1] == 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for idx in range(t.q**d):
            div = []
            v = idx
            for _ in range(d):
                div.append(v % t.q)
                v //= t.q
            div.append(1)
            _, rem = _poly_divmod(mod, div, t)
            if not rem:
                return False
    return True


@functools.lru_cache(maxsize=None)
def base_tables(q: int) -> GFTables:
    """Addition/subtraction/multiplication/inversion tables for GF(q).

    Prime q uses modular arithmetic; prime powers q = p^e build GF(p^e)
    from the first irreducible monic polynomial of degree e over GF(p)
    (lowest packed coefficient value, so the choice is reproducible).
    """
    if q < 2 or q > 256:
        raise ValueError("q must be a prime power with 2 <= q <= 256")
    p, e = _prime_power(q)
    if e == 1:
        idx = np.arange(q, dtype=np.int64)
        add = ((idx[:, None] + idx[None, :]) % q).astype(np.uint8)
        sub = ((idx[:, None] - idx[None, :]) % q).astype(np.uint8)
        mul = ((idx[:, None] * idx[None, :]) % q).astype(np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = pow(a, q - 2, q)
        return GFTables(q, add, sub, mul, inv)

    base = base_tables(p)

    def digits(v: int) -> list[int]:
        out = []
        for _ in range(e):
            out.append(v % p)
            v //= p
        return out

    def pack(c: Sequence[int]) -> int:
        v = 0
        for d in reversed(list(c)):
            v = v * p + d
        return v

    modulus = None
    for idx in range(p**e):
        cand = digits(idx) + [1]
        if _poly_is_irreducible(cand, base):
            modulus = cand
            break
    assert modulus is not None

    add = np.zeros((q, q), dtype=np.uint8)
    sub = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        da = digits(a)
        for b in range(q):
            db = digits(b)
            add[a, b] = pack(int(base.add[x, y]) for x, y in zip(da, db))
            sub[a, b] = pack(int(base.sub[x, y]) for x, y in zip(da, db))
            mul[a, b] = pack(
                _poly_mod(_poly_mul(_poly_trim(list(da)), _poly_trim(list(db)), base), modulus, base)
                + [0] * e
            )
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        for b in range(1, q):
            if mul[a, b] == 1:
                inv[a] = b
                break
    return GFTables(q, add, sub, mul, inv)


@dataclass(frozen=True)
class FieldSpec:
    """Parameters pinning one concrete presentation of GF(q^m).

    ``modulus`` lists the coefficients of the defining polynomial, lowest
    order first, length m + 1, monic.  ``primitive_power_of_generator``,
    when set to an integer p, enables reporting of nonzero elements as
    powers of w = x^p; that element must have multiplicative order
    q^m - 1, which is verified at construction.
    """

    q: int
    m: int
    modulus: tuple[int, ...]
    primitive_power_of_generator: int | None = None

    @staticmethod
    def default(q: int, m: int, *, primitive: bool = True) -> "FieldSpec":
        ppg = 1 if primitive else None
        if q == 2:
            if m not in _BINARY_MODULI:
                raise ValueError("fields with m > 16 unsupported")
            return FieldSpec(2, m, _BINARY_MODULI[m], ppg)
        return FieldSpec(q, m, _search_modulus(q, m, primitive=primitive), ppg)


def _search_modulus(q: int, m: int, *, primitive: bool) -> tuple[int, ...]:
    """First monic irreducible (primitive, if asked) polynomial of degree m."""
    t = base_tables(q)
    for idx in range(q**m):
        lo = []
        v = idx
        for _ in range(m):
            lo.append(v % q)
            v //= q
        cand = tuple(lo) + (1,)
        if not _poly_is_irreducible(cand, t):
            continue
        if not primitive:
            return cand
        f = Field(FieldSpec(q, m, cand, None))
        if f.element_order(f.x) == f.order - 1:
            return cand
    raise ValueError("no irreducible polynomial found")


class Field:
    """Arithmetic context for GF(q^m); elements are plain ints (see module doc)."""

    def __init__(self, spec: FieldSpec, _table_limit: int = _TABLE_LIMIT):
        q, m = spec.q, spec.m
        if m < 1 or m > 16:
            raise ValueError("fields with m > 16 unsupported")
        self.tables = base_tables(q)
        if len(spec.modulus) != m + 1 or spec.modulus[m] != 1:
            raise ValueError("modulus must be monic of degree m")
        if any(not 0 <= c < q for c in spec.modulus):
            raise ValueError("modulus coefficients out of range")
        if not _poly_is_irreducible(spec.modulus, self.tables):
            raise ValueError("modulus not irreducible")
        self.spec = spec
        self.q = q
        self.m = m
        self.order = q**m
        self.zero = 0
        self.one = 1
        self.x = q if m > 1 else self._embed_reduced([0, 1])
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self.omega: int | None = None
        if self.order <= _table_limit:
            self._build_log_tables()
        if spec.primitive_power_of_generator is not None:
            w = self.pow(self.x, spec.primitive_power_of_generator)
            if self.element_order(w) != self.order - 1:
                raise ValueError("generator power is not primitive")
            self.omega = w
            if self._log is not None and self._log[w] != 1:
                self._build_log_tables(base=w)

    # -- representation ----------------------------------------------------

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.q)
            a //= self.q
        return out

    def from_digits(self, c: Iterable[int]) -> int:
        v = 0
        for d in reversed(list(c)):
            v = v * self.q + int(d)
        return v

    def coeffs(self, a: int) -> np.ndarray:
        """Coordinate vector of ``a`` in the polynomial basis, length m."""
        return np.asarray(self.digits(self._check(a)), dtype=np.uint8)

    def from_coeffs(self, c: Sequence[int]) -> int:
        c = list(c)
        if len(c) != self.m or any(not 0 <= d < self.q for d in c):
            raise ValueError("coordinate vector has wrong shape")
        return self.from_digits(c)

    def _check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise ValueError("element out of range")
        return a

    def _embed_reduced(self, poly: Sequence[int]) -> int:
        red = _poly_mod(list(poly), list(self.spec.modulus), self.tables)
        return self.from_digits(red + [0] * (self.m - len(red)))

    # -- core arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        t = self.tables
        da, db = self.digits(a), self.digits(b)
        return self.from_digits(int(t.add[x, y]) for x, y in zip(da, db))

    def sub(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        t = self.tables
        da, db = self.digits(a), self.digits(b)
        return self.from_digits(int(t.sub[x, y]) for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def _mul_poly(self, a: int, b: int) -> int:
        if self.q == 2:
            # Carry-less multiply and reduce, both on packed bits.
            mod_mask = 0
            for i, c in enumerate(self.spec.modulus):
                mod_mask |= c << i
            acc = 0
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
                if a >> self.m & 1:
                    a ^= mod_mask
            return acc
        prod = _poly_mul(_poly_trim(self.digits(a)), _poly_trim(self.digits(b)), self.tables)
        red = _poly_mod(prod, list(self.spec.modulus), self.tables)
        return self.from_digits(red + [0] * (self.m - len(red)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return int(self._exp[(int(self._log[a]) + int(self._log[b])) % (self.order - 1)])
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        if self._log is not None:
            return int(self._exp[(-int(self._log[a])) % (self.order - 1)])
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("division by zero")
            return 0
        e %= self.order - 1
        if self._log is not None:
            return int(self._exp[(int(self._log[a]) * e) % (self.order - 1)])
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self._mul_poly(acc, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return acc

    def frobenius(self, a: int, e: int = 1) -> int:
        """a -> a^(q^e), the e-fold Frobenius map (GF(q)-linear)."""
        if e < 0:
            raise ValueError("Frobenius exponent must be >= 0")
        if a == 0:
            return 0
        return self.pow(a, pow(self.q, e, self.order - 1))

    def _build_log_tables(self, base: int | None = None) -> None:
        if base is None:
            base = self.x
            if self.element_order(base) != self.order - 1:
                base = None
                for cand in range(2, self.order):
                    if self.element_order(cand) == self.order - 1:
                        base = cand
                        break
            assert base is not None
        exp = np.zeros(self.order - 1, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        v = 1
        for i in range(self.order - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_poly(v, base)
        if v != 1:
            raise ValueError("log table base is not primitive")
        self._exp, self._log = exp, log

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.order - 1
        order = n
        for p in _factorize(n):
            while order % p == 0 and self.pow(a, order // p) == 1:
                order //= p
        return order

    # -- reporting ----------------------------------------------------------

    def omega_pow(self, k: int) -> int:
        if self.omega is None:
            raise ValueError("field has no designated primitive element")
        return self.pow(self.omega, k)

    def log_omega(self, a: int) -> int:
        if self.omega is None:
            raise ValueError("field has no designated primitive element")
        if a == 0:
            raise ValueError("zero has no discrete log")
        if self._log is not None:
            return int(self._log[a])
        raise ValueError("discrete log unavailable for untabled fields")

    def format_element(self, a: int) -> str:
        self._check(a)
        if a == 0:
            return "0"
        if a == 1:
            return "1"
        if self.omega is not None and self._log is not None:
            return f"w^{self.log_omega(a)}"
        if self.q <= 10:
            return "".join(str(d) for d in self.digits(a))
        return ",".join(str(d) for d in self.digits(a))

    def parse_element(self, text: str) -> int:
        s = text.strip()
        if not s:
            raise ValueError("empty element")
        if s in ("0", "1"):
            return int(s)
        if s == "w":
            return self.omega_pow(1)
        if s.startswith("w^"):
            return self.omega_pow(int(s[2:]))
        if "," in s:
            return self.from_coeffs([int(p) for p in s.split(",")])
        if self.q <= 10 and len(s) == self.m and s.isdigit():
            return self.from_coeffs([int(ch) for ch in s])
        raise ValueError(f"cannot parse element {text!r}")

    def __repr__(self) -> str:
        return f"Field(q={self.q}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    # -- vectorized helpers (require log tables) -----------------------------

    def _need_tables(self) -> None:
        if self._log is None:
            raise ValueError("field too large for vectorized operations")

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.q == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        qa, qb = a.copy(), b.copy()
        scale = 1
        add = self.tables.add.astype(np.int64)
        for _ in range(self.m):
            out += add[qa % self.q, qb % self.q] * scale
            qa //= self.q
            qb //= self.q
            scale *= self.q
        return out

    def frobenius_vec(self, a: np.ndarray, e: int = 1) -> np.ndarray:
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        mult = pow(self.q, e, self.order - 1)
        out = self._exp[(self._log[a] * mult) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    # -- matrix form ---------------------------------------------------------

    def to_matrix(self, elements: Sequence[int]) -> np.ndarray:
        """Stack coordinate vectors as columns: an m x n array over GF(q)."""
        vals = np.asarray(list(elements), dtype=np.int64)
        if vals.ndim != 1:
            raise ValueError("expected a flat sequence of elements")
        if vals.size and (vals.min() < 0 or vals.max() >= self.order):
            raise ValueError("element out of range")
        out = np.empty((self.m, vals.size), dtype=np.uint8)
        for i in range(self.m):
            out[i] = (vals % self.q).astype(np.uint8)
            vals = vals // self.q
        return out

    def from_matrix(self, mat: np.ndarray) -> list[int]:
        mat = np.asarray(mat)
        if mat.ndim != 2 or mat.shape[0] != self.m:
            raise ValueError("matrix must have m rows")
        if mat.size and (mat.min() < 0 or mat.max() >= self.q):
            raise ValueError("matrix entries out of range")
        vals = np.zeros(mat.shape[1], dtype=np.int64)
        for i in range(self.m - 1, -1, -1):
            vals = vals * self.q + mat[i].astype(np.int64)
        return [int(v) for v in vals]

    def matrix_batch(self, codes: np.ndarray) -> np.ndarray:
        """Unpack a (B, n) array of element codes into (B, m, n) digit arrays."""
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((codes.shape[0], self.m, codes.shape[1]), dtype=np.uint8)
        work = codes.copy()
        for i in range(self.m):
            out[:, i, :] = (work % self.q).astype(np.uint8)
            work //= self.q
        return out


def field_make(spec: FieldSpec) -> Field:
    return Field(spec)


# ---------------------------------------------------------------------------
# GF(q) matrix helpers


def gfq_rank(mat: np.ndarray, q: int = 2) -> int:
    """Exact rank of a matrix with entries in GF(q)."""
    t = base_tables(q)
    mat = np.asarray(mat, dtype=np.uint8)
    if mat.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if mat.size and mat.max() >= q:
        raise ValueError("matrix entries out of range")
    if 0 in mat.shape:
        return 0
    return int(_kernels.rank(mat, t.add, t.sub, t.mul, t.inv))


def gfq_rank_batch(mats: np.ndarray, q: int = 2) -> np.ndarray:
    t = base_tables(q)
    mats = np.asarray(mats, dtype=np.uint8)
    if mats.ndim != 3:
        raise ValueError("expected a batch of matrices")
    return np.asarray(_kernels.rank_batch(mats, t.add, t.sub, t.mul, t.inv))


def gfq_row_reduce(mat: np.ndarray, q: int = 2, n_pivot_cols: int | None = None):
    """Reduced row echelon form over GF(q).

    Args:
        mat: 2-d array with entries in [0, q).
        q: base field size.
        n_pivot_cols: restrict pivot search to the first so many columns
            (augmented columns still take part in the row operations).

    Returns:
        (reduced matrix, pivot column indices).
    """
    t = base_tables(q)
    mat = np.asarray(mat, dtype=np.uint8)
    if n_pivot_cols is None:
        n_pivot_cols = mat.shape[1]
    return _kernels.row_reduce(mat, t.add, t.sub, t.mul, t.inv, n_pivot_cols)


def gfq_matmul(a: np.ndarray, b: np.ndarray, q: int = 2) -> np.ndarray:
    t = base_tables(q)
    return np.asarray(_kernels.matmul(a, b, t.add, t.mul))


# ---------------------------------------------------------------------------
# Field towers


@dataclass(frozen=True)
class FieldTower:
    """GF(q) < GF(q^s) < GF(q^n) <= GF(q^m) with evaluation bases.

    ``basis_a`` spans GF(q^s) over GF(q); ``basis_b`` spans GF(q^n) over
    GF(q^s).  ``g`` generates the multiplicative group of GF(q^s).  The
    product elements basis_a[i] * basis_b[j], grouped by j, are the n
    evaluation points handed to the code construction; their GF(q)-rank
    being n is exactly the independence condition on basis_b.
    """

    field: Field
    s: int
    n: int
    g: int
    basis_a: tuple[int, ...]
    basis_b: tuple[int, ...]

    @property
    def mu(self) -> int:
        return self.n // self.s

    def product_points(self) -> list[int]:
        f = self.field
        return [f.mul(a, b) for b in self.basis_b for a in self.basis_a]


def tower_build(
    q: int,
    m: int,
    n: int,
    s: int,
    *,
    spec: FieldSpec | None = None,
    g: int | None = None,
    basis_a: Sequence[int] | None = None,
    basis_b: Sequence[int] | None = None,
) -> FieldTower:
    """Build the evaluation tower, searching default bases when not pinned.

    Defaults: g = w^((q^m-1)/(q^s-1)); basis_a = (g^0, ..., g^(s-1));
    basis_b = powers (gamma^0, ..., gamma^(mu-1)) of the first power of w
    lying in GF(q^n) whose powers pass the product rank-n check.
    Explicit overrides are validated against the same invariants.
    """
    if n % s != 0 or m % n != 0:
        raise ValueError("parameter divisibility violated")
    field = Field(spec) if spec is not None else Field(FieldSpec.default(q, m))
    if field.q != q or field.m != m:
        raise ValueError("field spec does not match tower parameters")
    if field.omega is None:
        raise ValueError("tower construction needs a designated primitive element")
    mu = n // s

    if g is None:
        g = field.omega_pow((field.order - 1) // (q**s - 1))
    if field.element_order(g) != q**s - 1:
        raise ValueError("subfield generator has wrong order")

    if basis_a is None:
        basis_a = tuple(field.pow(g, i) for i in range(s))
    else:
        basis_a = tuple(basis_a)
    if len(basis_a) != s:
        raise ValueError("basis_a must have s elements")
    for a in basis_a:
        if field.frobenius(a, s) != a:
            raise ValueError("basis_a element outside GF(q^s)")
    if gfq_rank(field.to_matrix(basis_a), q) != s:
        raise ValueError("basis not independent")

    def product_rank(bb: Sequence[int]) -> int:
        pts = [field.mul(a, b) for b in bb for a in basis_a]
        return gfq_rank(field.to_matrix(pts), q)

    if basis_b is None:
        # gamma must lie in GF(q^n): its exponent is a multiple of step.
        step = (field.order - 1) // (q**n - 1)
        found = None
        for e in range(step, field.order - 1, step):
            gamma = field.omega_pow(e)
            cand = tuple(field.pow(gamma, j) for j in range(mu))
            if product_rank(cand) == n:
                found = cand
                break
        if found is None:
            raise ValueError("no power basis found")
        basis_b = found
    else:
        basis_b = tuple(basis_b)
        if len(basis_b) != mu:
            raise ValueError("basis_b must have n/s elements")
        for b in basis_b:
            if field.frobenius(b, n) != b:
                raise ValueError("basis_b element outside GF(q^n)")
        if product_rank(basis_b) != n:
            raise ValueError("basis not independent")

    return FieldTower(field, s, n, g, tuple(basis_a), tuple(basis_b))
