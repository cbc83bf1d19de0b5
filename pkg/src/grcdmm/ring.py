"""Arithmetic in Galois rings GR(p^e, d) and in towers of extensions over them.

Elements are stored as numpy integer arrays whose *trailing* axes hold the
coefficients of the element, so any leading axes act as a batch (vectors,
matrices, stacks of matrices).  The layout for each ring is

    ResidueRing  Z_{p^e}             elem_shape ()
    GaloisRing   Z_{p^e}[x]/(f)      elem_shape (d,)
    ExtensionRing  B[y]/(F)          elem_shape (m,) + B.elem_shape

so a matrix over a two-level tower GR(p^e,d) -> GR_{m1} -> GR_{m1 m2} has
shape ``(rows, cols, m2, m1, d)``.  Every coefficient is a residue mod p^e:

* p == 2: ``uint64`` with the natural 2^64 wraparound, masked down to 2^e;
* odd p with p^e <= 2^31: ``int64`` with explicit ``%`` after each step;
* otherwise: object arrays of Python ints.

The array-level methods on the ring classes do no membership checking; the
:class:`RingElement` wrapper is the checked, operator-overloaded scalar API.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy

from .errors import (
    CountTooLarge,
    NonUnit,
    NotPrime,
    ParamsMismatch,
    WordOverflow,
)

WORD = 2**64
MAX_GENERATOR_FIELD = 2**24  # residue fields searched for a primitive element

_VARIABLES = "ξηθκλμνρστ"

_to_pyint = np.frompyfunc(int, 1, 1)  # numpy integer scalars -> Python ints


@dataclass(frozen=True)
class ResidueRing:
    """The integer residue ring Z_{p^e}."""

    p: int
    e: int

    elem_shape = ()
    elem_ndim = 0
    degree = 1
    total_degree = 1

    @cached_property
    def char(self):
        return self.p**self.e

    @property
    def residue_size(self):
        return self.p

    @property
    def residue(self):
        return self

    @cached_property
    def dtype(self):
        if self.p == 2:
            return np.dtype(np.uint64)
        if self.char <= 2**31:
            return np.dtype(np.int64)
        return np.dtype(object)

    @cached_property
    def _mask(self):
        return np.uint64(self.char - 1) if self.e < 64 else None

    def reduce(self, x):
        if self.p == 2:
            return x if self._mask is None else np.bitwise_and(x, self._mask)
        return x % self.char

    def asarray(self, x):
        if isinstance(x, np.ndarray) and x.dtype == self.dtype:
            return np.asarray(self.reduce(x))
        arr = np.asarray(x)
        if self.dtype == object or arr.dtype == object or arr.dtype.kind not in "iub":
            arr = np.asarray(_to_pyint(np.asarray(x, dtype=object)) % self.char, dtype=object)
            return arr.astype(self.dtype) if self.dtype != object else arr
        if self.p == 2:
            return self.reduce(arr.astype(np.uint64))
        return (arr % self.char).astype(self.dtype)

    def zeros(self, shape=()):
        return np.zeros(shape, dtype=self.dtype)

    def one(self):
        return self.asarray(1)

    def from_int(self, k):
        return self.asarray(k)

    def equal(self, a, b):
        return np.array_equal(np.asarray(a), np.asarray(b))

    def pow(self, a, k):
        if np.ndim(a) == 0:
            return self.asarray(pow(int(a), k, self.char))
        result = np.broadcast_to(self.one(), np.shape(a)).copy()
        while k:
            if k & 1:
                result = self.mul(result, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return result

    def add(self, a, b):
        return self.reduce(np.add(a, b))

    def sub(self, a, b):
        return self.reduce(np.subtract(a, b))

    def neg(self, a):
        return self.reduce(np.negative(a)) if self.p == 2 else (-a) % self.char

    def mul(self, a, b):
        return self.reduce(np.multiply(a, b))

    def mul_int(self, a, k):
        k %= self.char
        if self.p == 2:
            return self.reduce(np.multiply(a, np.uint64(k)))
        return np.multiply(a, k) % self.char

    def matmul(self, a, b):
        if self.dtype != np.int64:
            return self.reduce(np.matmul(a, b))
        # keep partial sums below 2^63
        inner = a.shape[-1]
        step = max(1, (2**63 - 1) // max(1, (self.char - 1) ** 2))
        if inner <= step:
            return np.matmul(a, b) % self.char
        acc = None
        for lo in range(0, inner, step):
            part = np.matmul(a[..., lo:lo + step], b[..., lo:lo + step, :]) % self.char
            acc = part if acc is None else (acc + part) % self.char
        return acc

    def is_unit(self, a):
        return np.asarray(a) % self.p != 0

    def inverse(self, a):
        a = int(np.asarray(a))
        if a % self.p == 0:
            raise NonUnit(f"{a} is not a unit in Z_{self.p}^{self.e}")
        return self.asarray(pow(a, -1, self.char))

    def element_index(self, a):
        return int(np.asarray(a)) % self.p

    def element_from_index(self, idx):
        return self.asarray(idx)

    def random(self, shape, rng):
        raw = rng.integers(0, self.char - 1, size=shape, dtype=np.uint64, endpoint=True)
        return self.asarray(raw)

    def format(self, a):
        return str(int(np.asarray(a)))


class _QuotientRing:
    """Shared arithmetic for B[x]/(F) with F monic of degree ``degree`` over ``base``."""

    # -- shape/size bookkeeping -------------------------------------------------

    @cached_property
    def elem_shape(self):
        return (self.degree,) + self.base.elem_shape

    @cached_property
    def elem_ndim(self):
        return len(self.elem_shape)

    @cached_property
    def total_degree(self):
        return self.degree * self.base.total_degree

    @property
    def residue(self):
        return self.base.residue

    @property
    def char(self):
        return self.residue.char

    @property
    def dtype(self):
        return self.residue.dtype

    @cached_property
    def residue_size(self):
        return self.p**self.total_degree

    @cached_property
    def root(self):
        ring = self
        while not isinstance(ring, GaloisRing):
            ring = ring.base
        return ring

    @cached_property
    def units_per_element(self):
        """How many elements of the root GR(p^e, d) one element of this ring occupies."""
        return self.total_degree // self.root.d

    @cached_property
    def _mod(self):
        raise NotImplementedError

    @cached_property
    def _reduction_terms(self):
        one = self.base.one()
        terms = []
        for i in range(self.degree):
            c = self._mod[i]
            if np.any(c):
                terms.append((i, None if np.array_equal(c, one) else c))
        return terms

    # -- element construction ---------------------------------------------------

    def asarray(self, x):
        return self.residue.asarray(x)

    def zeros(self, shape=()):
        return self.residue.zeros(tuple(shape) + self.elem_shape)

    def one(self):
        return self.from_int(1)

    def from_int(self, k):
        out = self.zeros()
        out.reshape(-1)[0] = k % self.char
        return out

    def random(self, shape, rng):
        return self.residue.random(tuple(shape) + self.elem_shape, rng)

    def embed_array(self, x):
        """Place base-ring elements at the constant coefficient (batch axes kept)."""
        x = self.asarray(x)
        k = self.base.elem_ndim
        batch = x.shape[: x.ndim - k]
        out = self.zeros(batch)
        out[(Ellipsis, 0) + (slice(None),) * k] = x
        return out

    def coeffs_first(self, a):
        """Move the coefficient axis of ``a`` to the front: (m, *batch, *base_elem)."""
        return np.moveaxis(a, -1 - self.base.elem_ndim, 0)

    def coeffs_last(self, c):
        return np.moveaxis(c, 0, -1 - self.base.elem_ndim)

    # -- arithmetic -------------------------------------------------------------

    def add(self, a, b):
        return self.residue.add(a, b)

    def sub(self, a, b):
        return self.residue.sub(a, b)

    def neg(self, a):
        return self.residue.neg(a)

    def mul_int(self, a, k):
        return self.residue.mul_int(a, k)

    @cached_property
    def _mul_table(self):
        """T with e_i * e_j = sum_k T[i D + j, k] e_k over the Z_{p^e}-basis of the ring.

        Built once by schoolbook multiplication and reduction of basis pairs;
        afterwards a product at any tower depth is one outer product and one
        integer matrix product.
        """
        D = self.total_degree
        basis = self.asarray(np.eye(D, dtype=np.int64).reshape((D,) + self.elem_shape))
        table = self._product(self.base.mul, basis[:, None], basis[None, :])
        out = table.reshape(D * D, D)
        out.setflags(write=False)
        return out

    def _flat(self, a):
        a = np.asarray(a)
        return a.reshape(a.shape[:a.ndim - self.elem_ndim] + (self.total_degree,))

    def _unflat(self, c):
        return c.reshape(c.shape[:-1] + self.elem_shape)

    def mul(self, a, b):
        res, D = self.residue, self.total_degree
        outer = res.mul(self._flat(a)[..., :, None], self._flat(b)[..., None, :])
        return self._unflat(res.matmul(outer.reshape(outer.shape[:-2] + (D * D,)), self._mul_table))

    def matmul(self, a, b):
        """Matrix product: one Z_{p^e} matmul per coefficient of ``a``, then the table."""
        res, D = self.residue, self.total_degree
        A, B = self._flat(a), self._flat(b)
        rows, inner, cols = A.shape[-3], A.shape[-2], B.shape[-2]
        wide = B.reshape(B.shape[:-3] + (inner, cols * D))
        parts = np.stack([res.matmul(A[..., i], wide) for i in range(D)], axis=-2)
        parts = parts.reshape(parts.shape[:-3] + (rows, D, cols, D))
        parts = np.swapaxes(parts, -3, -2).reshape(parts.shape[:-4] + (rows, cols, D * D))
        return self._unflat(res.matmul(parts, self._mul_table))

    def _product(self, prod, a, b):
        """Schoolbook product over the base ring followed by reduction by the modulus."""
        base, m = self.base, self.degree
        A = self.coeffs_first(np.asarray(a))
        B = self.coeffs_first(np.asarray(b))
        raw = [None] * (2 * m - 1)
        for i in range(m):
            for j in range(m):
                t = prod(A[i], B[j])
                raw[i + j] = t if raw[i + j] is None else base.add(raw[i + j], t)
        for k in range(2 * m - 2, m - 1, -1):
            c = raw[k]
            for i, coeff in self._reduction_terms:
                t = c if coeff is None else base.mul(c, coeff)
                raw[k - m + i] = base.sub(raw[k - m + i], t)
        return np.stack(raw[:m], axis=-1 - base.elem_ndim)

    def pow(self, a, k):
        result = np.broadcast_to(self.one(), np.shape(a)).copy()
        base = np.asarray(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def is_unit(self, a):
        a = np.asarray(a)
        axes = tuple(range(a.ndim - self.elem_ndim, a.ndim))
        return np.any(a % self.p != 0, axis=axes)

    def reduce_mod_p(self, a):
        return self.asarray(np.asarray(a) % self.p)

    def equal(self, a, b):
        return np.array_equal(np.asarray(a), np.asarray(b))

    def inverse(self, a):
        """Inverse of a single unit: field inverse mod p, then Newton lifting."""
        a = self.asarray(a)
        if a.shape != self.elem_shape:
            raise ValueError(f"expected one element of shape {self.elem_shape}, got {a.shape}")
        if not self.is_unit(a):
            raise NonUnit(f"{self.format(a)} is not a unit")
        fp = _ResidueFieldPolys(self.base)
        b = fp.invert_mod(self.coeff_list(a), self.modulus_list())
        b = self.coeffs_last(np.stack(fp.pad(b, self.degree)))
        two = self.from_int(2)
        precision = 1
        while precision < self.e:
            b = self.mul(b, self.sub(two, self.mul(a, b)))
            precision *= 2
        if not self.equal(self.mul(a, b), self.one()):
            raise AssertionError("Newton lifting failed to converge")
        return b

    def coeff_list(self, a):
        return list(self.coeffs_first(self.asarray(a)))

    def modulus_list(self):
        return list(self._mod)

    # -- canonical ordering of the residue field ---------------------------------

    def element_index(self, a):
        flat = (np.asarray(a) % self.p).reshape(-1)
        return sum(int(c) * self.p**k for k, c in enumerate(flat))

    def element_from_index(self, idx):
        if not 0 <= idx < self.residue_size:
            raise ValueError("index outside the residue field")
        digits = []
        for _ in range(self.total_degree):
            idx, r = divmod(idx, self.p)
            digits.append(r)
        return self.asarray(np.array(digits, dtype=object).reshape(self.elem_shape))

    def exceptional_set(self, count):
        return exceptional_set(self, count)

    # -- display ----------------------------------------------------------------

    @cached_property
    def variable(self):
        depth = 0
        ring = self
        while not isinstance(ring, GaloisRing):
            ring = ring.base
            depth += 1
        return _VARIABLES[depth % len(_VARIABLES)]

    def format(self, a):
        terms = []
        for k, c in reversed(list(enumerate(self.coeff_list(a)))):
            if not np.any(c):
                continue
            text = self.base.format(c)
            if k and ("+" in text or "-" in text):
                text = f"({text})"
            mono = "" if k == 0 else self.variable if k == 1 else f"{self.variable}^{k}"
            if k and text == "1":
                text = ""
            terms.append(text + mono)
        return "+".join(terms) if terms else "0"

    def format_modulus(self, var="x"):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self._mod[k]
            if not np.any(c):
                continue
            text = self.base.format(c)
            if k and ("+" in text or "-" in text):
                text = f"({text})"
            mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
            if k and text == "1":
                text = ""
            terms.append(text + mono)
        return "+".join(terms)


@dataclass(frozen=True)
class GaloisRing(_QuotientRing):
    """GR(p^e, d) = Z_{p^e}[x]/(f); ``modulus`` lists f's d+1 coefficients, constant first."""

    p: int
    e: int
    d: int
    modulus: tuple

    @property
    def degree(self):
        return self.d

    @cached_property
    def base(self):
        return ResidueRing(self.p, self.e)

    @cached_property
    def _mod(self):
        return self.base.asarray(list(self.modulus))

    def __repr__(self):
        return f"GR({self.p}^{self.e}, {self.d})"


@dataclass(frozen=True)
class ExtensionRing(_QuotientRing):
    """GR_m = B[y]/(F) over a Galois ring (or another extension) B.

    ``modulus`` lists F's m+1 coefficients, constant first; each entry is the
    flattened coefficient tuple of a base-ring element.
    """

    base: object
    m: int
    modulus: tuple

    @property
    def degree(self):
        return self.m

    @property
    def p(self):
        return self.base.p

    @property
    def e(self):
        return self.base.e

    @property
    def ext_modulus(self):
        return self.modulus

    @cached_property
    def _mod(self):
        shape = (self.m + 1,) + self.base.elem_shape
        return self.base.asarray(np.array(self.modulus, dtype=object).reshape(shape))

    def __repr__(self):
        return f"{self.base!r}[{self.variable}]/({self.format_modulus(self.variable)})"


# -- polynomials over the residue field of a ring ------------------------------


class _ResidueFieldPolys:
    """Dense polynomials over the residue field of ``ring``.

    A polynomial is an array of ring elements of shape (length, *elem_shape),
    constant term first, with coefficients kept reduced mod p.  Each step of
    multiplication and division is one vectorized ring operation.
    """

    def __init__(self, ring):
        self.ring = ring
        self.p = ring.p

    def red(self, c):
        return self.ring.asarray(np.asarray(c) % self.p)

    def is_zero(self, c):
        return not np.any(np.asarray(c) % self.p)

    def trim(self, f):
        if not isinstance(f, np.ndarray):
            f = np.stack(list(f)) if len(f) else self.ring.zeros((0,))
        f = self.red(f)
        nz = np.flatnonzero(f.astype(bool).any(axis=tuple(range(1, f.ndim))))
        return f[: nz[-1] + 1] if len(nz) else f[:0]

    def pad(self, f, n):
        return np.concatenate([f, self.ring.zeros((n - len(f),))]) if n > len(f) else f

    def sub(self, f, g):
        n = max(len(f), len(g))
        return self.trim(self.ring.sub(self.pad(f, n), self.pad(g, n)))

    def mul(self, f, g):
        if not len(f) or not len(g):
            return self.ring.zeros((0,))
        prod = self.red(self.ring.mul(f[:, None], g[None, :]))
        out = self.ring.zeros((len(f) + len(g) - 1,))
        for i in range(len(f)):
            out[i : i + len(g)] = self.ring.add(out[i : i + len(g)], prod[i])
        return self.trim(out)

    def scale(self, f, c):
        return self.trim(self.ring.mul(f, c))

    def divmod(self, f, g):
        g = self.trim(g)
        if not len(g):
            raise ZeroDivisionError("polynomial division by zero")
        f = self.trim(f).copy()
        inv = self.red(self.ring.inverse(g[-1]))
        monic = self.red(self.ring.mul(g, inv))
        q = self.ring.zeros((max(0, len(f) - len(g) + 1),))
        for shift in range(len(f) - len(g), -1, -1):
            c = np.array(f[shift + len(g) - 1], dtype=f.dtype)
            if self.is_zero(c):
                continue
            q[shift] = c
            f[shift : shift + len(g)] = self.red(self.ring.sub(f[shift : shift + len(g)], self.ring.mul(monic, c)))
        q = self.red(self.ring.mul(q, inv))
        return self.trim(q), self.trim(f[: len(g) - 1])

    def mulmod(self, f, g, mod):
        return self.divmod(self.mul(f, g), mod)[1]

    def powmod(self, f, k, mod):
        result = self.trim([self.ring.one()])
        f = self.divmod(f, mod)[1]
        while k:
            if k & 1:
                result = self.mulmod(result, f, mod)
            k >>= 1
            if k:
                f = self.mulmod(f, f, mod)
        return result

    def gcd(self, f, g):
        f, g = self.trim(f), self.trim(g)
        while len(g):
            f, g = g, self.divmod(f, g)[1]
        if len(f):
            f = self.scale(f, self.red(self.ring.inverse(f[-1])))
        return f

    def invert_mod(self, a, mod):
        """b with a*b = 1 modulo ``mod`` (extended Euclid); ``mod`` irreducible."""
        r0, r1 = self.trim(mod), self.trim(a)
        s0, s1 = self.ring.zeros((0,)), self.trim([self.ring.one()])
        while len(r1) > 1:
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
        if not len(r1):
            raise NonUnit("element is not invertible modulo p")
        return self.scale(s1, self.red(self.ring.inverse(r1[0])))

    def is_irreducible(self, f):
        """Ben-Or's test for a monic f over the residue field of size Q.

        f is irreducible iff gcd(x^(Q^k) - x, f) = 1 for k = 1 .. deg/2; most
        reducible candidates have a small factor and are rejected early.
        """
        f = self.trim(f)
        m = len(f) - 1
        if m <= 1:
            return m == 1
        if self.is_zero(f[0]):
            return False
        Q = self.ring.residue_size
        x = self.trim([self.ring.zeros(), self.ring.one()])
        h = self.divmod(x, f)[1]
        for _ in range(m // 2):
            h = self.powmod(h, Q, f)
            if len(self.gcd(self.sub(h, x), f)) > 1:
                return False
        return True


def _smallest_irreducible(base, degree):
    """Lexicographically smallest monic irreducible of ``degree`` over base's residue field.

    Candidates are ordered by sum(index(c_i) * Q^i) over the non-leading
    coefficients, i.e. the constant term is the least significant digit.
    """
    fp = _ResidueFieldPolys(base)
    Q = base.residue_size
    one = base.one()
    for idx in range(Q**degree):
        coeffs = []
        rest = idx
        for _ in range(degree):
            rest, digit = divmod(rest, Q)
            coeffs.append(base.element_from_index(digit))
        poly = coeffs + [one]
        if fp.is_irreducible(poly):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable for finite fields


# -- constructors ----------------------------------------------------------------


@functools.cache
def make_ring(p, e, d):
    """GR(p^e, d) with the canonical (lexicographically smallest) modulus."""
    if not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1 or d < 1:
        raise ValueError("e and d must be positive")
    if p**e > WORD:
        raise WordOverflow(f"{p}^{e} does not fit a 64-bit word")
    base = ResidueRing(p, e)
    poly = _smallest_irreducible(base, d)
    return GaloisRing(p, e, d, tuple(int(c) for c in poly))


@functools.cache
def make_extension(base, m):
    """Degree-m extension of ``base`` with the canonical irreducible modulus."""
    if m < 1:
        raise ValueError("extension degree must be positive")
    poly = _smallest_irreducible(base, m)
    return ExtensionRing(base, m, tuple(tuple(int(v) for v in np.asarray(c).reshape(-1)) for c in poly))


def tower(base, *degrees):
    ring = base
    for m in degrees:
        ring = make_extension(ring, m)
    return ring


# -- exceptional sets ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExceptionalSet:
    """The first ``len(elements)`` points of T = {0, 1, zeta, zeta^2, ...}."""

    params: object
    elements: np.ndarray

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return RingElement(self.params, self.elements[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def extend(self, count):
        return exceptional_set(self.params, count)


@functools.cache
def _primitive_teichmuller(ring):
    """Teichmüller lift of the smallest generator of the residue field's unit group."""
    q = ring.residue_size
    if q > MAX_GENERATOR_FIELD:
        raise CountTooLarge(f"residue field of size {q} is too large for generator search")
    order = q - 1
    checks = [order // r for r in sympy.primefactors(order)]
    one = ring.one()
    for idx in range(1, q):
        g = ring.element_from_index(idx)
        if all(not ring.equal(_pow_mod_p(ring, g, k), one) for k in checks):
            break
    else:
        raise AssertionError("no generator found")
    z = g
    for _ in range(ring.e + 1):
        nxt = ring.pow(z, q)
        if ring.equal(nxt, z):
            return z
        z = nxt
    raise AssertionError("Teichmüller iteration did not reach a fixed point")


def _pow_mod_p(ring, a, k):
    result = ring.one()
    a = ring.reduce_mod_p(a)
    while k:
        if k & 1:
            result = ring.reduce_mod_p(ring.mul(result, a))
        k >>= 1
        if k:
            a = ring.reduce_mod_p(ring.mul(a, a))
    return result


@functools.cache
def _exceptional_prefix(ring, count):
    elems = [ring.zeros(), ring.one()][:count]
    if count > 2:
        zeta = _primitive_teichmuller(ring)
        cur = ring.one()
        for _ in range(count - 2):
            cur = ring.mul(cur, zeta)
            elems.append(cur)
    out = np.stack(elems) if elems else ring.zeros((0,))
    out.setflags(write=False)
    return out


def exceptional_set(params, count):
    """First ``count`` canonical exceptional points of ``params``."""
    if count > params.residue_size:
        raise CountTooLarge(f"only {params.residue_size} exceptional points exist, asked for {count}")
    if count < 0:
        raise ValueError("count must be non-negative")
    return ExceptionalSet(params, _exceptional_prefix(params, count))


# -- checked scalar API ------------------------------------------------------------


class RingElement:
    """One element of a ring, with operators.  Mixing rings raises ParamsMismatch."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        coeffs = ring.asarray(coeffs)
        if coeffs.shape != ring.elem_shape:
            raise ParamsMismatch(f"coefficient shape {coeffs.shape} does not fit {ring!r}")
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def from_int(cls, ring, k):
        return cls(ring, ring.from_int(k))

    def _other(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.ring != self.ring:
            raise ParamsMismatch(f"{self.ring!r} vs {other.ring!r}")
        return other.coeffs

    def _wrap(self, coeffs):
        return RingElement(self.ring, coeffs)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.add(self.coeffs, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.sub(self.coeffs, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.sub(o, self.coeffs))

    def __neg__(self):
        return self._wrap(self.ring.neg(self.coeffs))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ring.mul(self.coeffs, o))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return self._wrap(self.ring.pow(self.coeffs, k))

    def __eq__(self, other):
        if isinstance(other, int):
            other = RingElement.from_int(self.ring, other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.ring.equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.ring, tuple(int(c) for c in self.coeffs.reshape(-1))))

    def is_unit(self):
        return bool(self.ring.is_unit(self.coeffs))

    def inverse(self):
        return self._wrap(self.ring.inverse(self.coeffs))

    def coeff_view(self):
        """The coefficients over the next ring down (ints for GR(p^e, d))."""
        if isinstance(self.ring, ResidueRing):
            raise TypeError("residue ring elements have no coefficient view")
        parts = self.ring.coeff_list(self.coeffs)
        if isinstance(self.ring.base, ResidueRing):
            return [int(c) for c in parts]
        return [RingElement(self.ring.base, c) for c in parts]

    def __str__(self):
        return self.ring.format(self.coeffs)

    def __repr__(self):
        return f"<{self} in {self.ring!r}>"


def element(ring, coeffs):
    return RingElement(ring, coeffs)


def ring_arithmetic(a, b, op):
    """Dispatch one of add/sub/mul/neg on checked elements (``b`` ignored for neg)."""
    if op == "neg":
        return -a
    if not isinstance(b, RingElement) or b.ring != a.ring:
        raise ParamsMismatch("operands belong to different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def is_unit(a):
    return a.is_unit()


def inverse(a):
    return a.inverse()


def embed(base_elem, ext):
    if base_elem.ring != ext.base:
        raise ParamsMismatch(f"{base_elem.ring!r} is not the base of {ext!r}")
    return RingElement(ext, ext.embed_array(base_elem.coeffs))


def coeff_view(x):
    return x.coeff_view()


def all_elements(ring):
    """Every element of a small ring, in canonical integer-index order."""
    size = ring.char ** ring.total_degree
    if size > 2**20:
        raise CountTooLarge(f"ring has {size} elements, too many to enumerate")
    digits = np.arange(size, dtype=np.int64)
    cols = []
    for _ in range(ring.total_degree):
        digits, r = np.divmod(digits, ring.char)
        cols.append(r)
    flat = np.stack(cols, axis=-1)
    return ring.asarray(flat.reshape((size,) + ring.elem_shape))
