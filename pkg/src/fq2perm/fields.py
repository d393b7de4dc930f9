"""Exact arithmetic in the tower F_p < F_q < F_{q^2}.

F_q is F_p[t]/(base_modulus) and F_{q^2} is F_q[y]/(ext_modulus).  An element
of F_{q^2} is stored as a single integer ``n`` in ``[0, q^2)`` whose base-p
digits are its 2r coordinates over F_p: the low r digits are the F_q
coefficient of 1, the high r digits the F_q coefficient of y.  In particular
the subfield F_q is exactly the range ``[0, q)``.

After construction every operation is a table lookup: exp/log tables for a
primitive element, a Zech-logarithm table for addition, and a Frobenius
table.  Tables are plain numpy arrays, so the same context also supports
vectorized evaluation over the whole field.
"""

from __future__ import annotations

import functools
from math import gcd

import numpy as np

from .errors import (DegreeMismatch, DivisionByZero, FieldTooLarge,
                     NotADivisor, NotPrime, ReducibleModulus)

MAX_ORDER = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists low -> high -------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _trim(list(a))
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _x_pow_mod(e, m, p):
    """x^e mod m over F_p by square-and-multiply."""
    result, base = [1], _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_fp(f: list[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    r = len(f) - 1
    if r <= 1:
        return r == 1
    for ell in prime_factors(r):
        h = _psub(_x_pow_mod(p ** (r // ell), f, p), [0, 1], p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return not _psub(_x_pow_mod(p ** r, f, p), [0, 1], p)


def _digits(n, p, k):
    return [(n // p ** i) % p for i in range(k)]


def _undigits(ds, p):
    return sum(d * p ** i for i, d in enumerate(ds))


class FieldCtx:
    """Immutable description of F_p < F_q < F_{q^2} with lookup tables.

    Build instances with :func:`build_field`; the constructor assumes
    validated inputs.
    """

    def __init__(self, p, r, base_modulus, ext_modulus):
        self.p = p
        self.r = r
        self.q = p ** r
        self.order = self.q * self.q
        self.base_modulus = tuple(base_modulus)
        self.ext_modulus = tuple(ext_modulus)
        self._build_base()
        self._check_ext_irreducible()
        self._build_ext()
        for arr in (self.exp, self.log, self.zech, self.neg_table, self.frob_table):
            arr.setflags(write=False)

    # -- construction ----------------------------------------------------

    def _build_base(self):
        p, r, q = self.p, self.r, self.q
        mod = list(self.base_modulus)
        # F_q multiplication table through polynomial arithmetic; q <= 1024
        polys = [_trim(_digits(n, p, r)) for n in range(q)]
        gen = None
        for cand in range(1, q):
            if self._fq_order_ok(polys[cand], mod):
                gen = cand
                break
        exp = np.zeros(q - 1, dtype=np.int64)
        cur = [1]
        for k in range(q - 1):
            exp[k] = _undigits(cur + [0] * (r - len(cur)), p)
            cur = _pmod(_pmul(cur, polys[gen], p), mod, p)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self._fq_exp, self._fq_log = exp, log
        digits = np.array([_digits(n, p, r) for n in range(q)], dtype=np.int64).reshape(q, r)
        weights = p ** np.arange(r, dtype=np.int64)
        self._fq_add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self._fq_neg = ((p - digits) % p) @ weights

    def _fq_order_ok(self, poly, mod):
        n = self.q - 1
        for ell in prime_factors(n):
            e, res, base = n // ell, [1], list(poly)
            while e:
                if e & 1:
                    res = _pmod(_pmul(res, base, self.p), mod, self.p)
                base = _pmod(_pmul(base, base, self.p), mod, self.p)
                e >>= 1
            if res == [1]:
                return False
        return True

    def _fq_mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._fq_exp[(self._fq_log[a] + self._fq_log[b]) % (self.q - 1)])

    def _check_ext_irreducible(self):
        d0, d1, _ = self.ext_modulus
        ys = np.arange(self.q)
        fl, fe, n = self._fq_log, self._fq_exp, self.q - 1
        sq = np.where(ys == 0, 0, fe[(2 * fl[ys]) % n])
        lin = np.zeros(self.q, dtype=np.int64) if d1 == 0 else \
            np.where(ys == 0, 0, fe[(fl[ys] + fl[d1]) % n])
        val = self._fq_add[self._fq_add[sq, lin], d0]
        if np.any(val == 0):
            raise ReducibleModulus(f"extension modulus {list(self.ext_modulus)} has a root in F_{self.q}")

    def _tower_mul(self, a, b):
        q = self.q
        a0, a1, b0, b1 = a % q, a // q, b % q, b // q
        d0, d1, _ = self.ext_modulus
        m, add, neg = self._fq_mul, self._fq_add, self._fq_neg
        t = m(a1, b1)
        c0 = add[m(a0, b0), neg[m(t, d0)]]
        c1 = add[add[m(a0, b1), m(a1, b0)], neg[m(t, d1)]]
        return int(c0 + q * c1)

    def _tower_pow(self, a, e):
        res = 1
        while e:
            if e & 1:
                res = self._tower_mul(res, a)
            a = self._tower_mul(a, a)
            e >>= 1
        return res

    def _build_ext(self):
        p, q, Q = self.p, self.q, self.order
        N = Q - 1
        factors = prime_factors(N)
        omega = None
        for cand in range(1, Q):
            if all(self._tower_pow(cand, N // ell) != 1 for ell in factors):
                omega = cand
                break
        self.omega_n = omega
        exp = np.empty(N, dtype=np.int64)
        cur = 1
        for k in range(N):
            exp[k] = cur
            cur = self._tower_mul(cur, omega)
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(N)
        if np.any(log[1:] < 0):  # pragma: no cover - guarded by the order test
            raise RuntimeError("primitive element does not generate the field")
        self.exp, self.log = exp, log

        k = 2 * self.r
        weights = p ** np.arange(k, dtype=np.int64)
        digits = (np.arange(Q)[:, None] // weights[None, :]) % p
        self.neg_table = ((p - digits) % p) @ weights
        d0 = digits[exp, 0]
        plus_one = exp - d0 + (d0 + 1) % p
        zech = log[plus_one]
        self.zech = zech  # -1 where 1 + omega^k == 0
        fr = np.zeros(Q, dtype=np.int64)
        fr[exp] = exp[(np.arange(N) * q) % N]
        self.frob_table = fr

    # -- element access --------------------------------------------------

    def __call__(self, x) -> "Elt":
        """Coerce an int (prime-field constant), coefficient list or Elt."""
        if isinstance(x, Elt):
            return x
        if isinstance(x, (list, tuple)):
            return self.from_coeffs(x)
        return Elt(self, int(x) % self.p)

    def elt(self, n: int) -> "Elt":
        """Element with integer encoding ``n``."""
        return Elt(self, n)

    def from_coeffs(self, coeffs) -> "Elt":
        if len(coeffs) != 2 * self.r or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"expected {2 * self.r} residues mod {self.p}, got {list(coeffs)}")
        return Elt(self, _undigits(coeffs, self.p))

    def fq(self, n: int) -> "Elt":
        """Element of the subfield F_q with encoding ``n``."""
        if not 0 <= n < self.q:
            raise ValueError(f"{n} does not encode an element of F_{self.q}")
        return Elt(self, n)

    @property
    def zero(self):
        return Elt(self, 0)

    @property
    def one(self):
        return Elt(self, 1)

    @property
    def omega(self):
        return Elt(self, self.omega_n)

    def elements(self):
        return [Elt(self, n) for n in range(self.order)]

    def nonzero(self):
        return [Elt(self, n) for n in range(1, self.order)]

    def subfield(self):
        return [Elt(self, n) for n in range(self.q)]

    def subfield_nonzero(self):
        return [Elt(self, n) for n in range(1, self.q)]

    # -- scalar kernels (integer encodings) ------------------------------

    def add_n(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % (self.order - 1)]
        if z < 0:
            return 0
        return int(self.exp[(la + z) % (self.order - 1)])

    def mul_n(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.order - 1)])

    def pow_n(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise DivisionByZero("zero has no inverse")
            return 1 if k == 0 else 0
        return int(self.exp[(int(self.log[a]) * k) % (self.order - 1)])

    def inv_n(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no inverse")
        return int(self.exp[(-self.log[a]) % (self.order - 1)])

    # -- vectorized kernels ----------------------------------------------

    def vadd(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        N = self.order - 1
        la = self.log[a]
        z = self.zech[(self.log[b] - la) % N]
        s = np.where(z < 0, 0, self.exp[(la + np.maximum(z, 0)) % N])
        return np.where(a == 0, b, np.where(b == 0, a, s))

    def vneg(self, a):
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        r = self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        r = self.exp[(self.log[a] * k) % (self.order - 1)]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, r)

    def vfrob(self, a):
        return self.frob_table[np.asarray(a, dtype=np.int64)]

    def add_table(self):
        """Full q^2 x q^2 addition table (only sensible for small fields)."""
        xs = np.arange(self.order)
        return self.vadd(xs[:, None], xs[None, :])

    def mul_table(self):
        xs = np.arange(self.order)
        return self.vmul(xs[:, None], xs[None, :])

    # -- serialization ---------------------------------------------------

    def spec(self) -> dict:
        """Field spec ``{p, r, base_modulus, ext_modulus}`` as plain JSON data."""
        if self.r == 1:
            ext = list(self.ext_modulus)
        else:
            ext = [_digits(d, self.p, self.r) for d in self.ext_modulus]
        return {"p": self.p, "r": self.r,
                "base_modulus": list(self.base_modulus), "ext_modulus": ext}

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.p, self.r, self.base_modulus, self.ext_modulus, self.omega_n)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, r={self.r}, q={self.q}, ext={list(self.ext_modulus)})"

    def __reduce__(self):
        return (_rebuild, (self.p, self.r, self.base_modulus, self.ext_modulus))


def _rebuild(p, r, base, ext):
    return build_field(p, r, base, ext)


class Elt:
    """One element of F_{q^2}; supports the usual arithmetic operators.

    Plain ints are coerced to prime-field constants, so ``3 * x`` works.
    """

    __slots__ = ("ctx", "n")

    def __init__(self, ctx: FieldCtx, n: int):
        self.ctx = ctx
        self.n = int(n)

    @property
    def coeffs(self) -> list[int]:
        return _digits(self.n, self.ctx.p, 2 * self.ctx.r)

    def _coerce(self, other):
        if isinstance(other, Elt):
            return other.n
        if isinstance(other, int):
            return other % self.ctx.p
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Elt(self.ctx, self.ctx.add_n(self.n, b))

    __radd__ = __add__

    def __neg__(self):
        return Elt(self.ctx, int(self.ctx.neg_table[self.n]))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Elt(self.ctx, self.ctx.add_n(self.n, int(self.ctx.neg_table[b])))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Elt(self.ctx, self.ctx.mul_n(self.n, b))

    __rmul__ = __mul__

    def inverse(self):
        return Elt(self.ctx, self.ctx.inv_n(self.n))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Elt(self.ctx, self.ctx.mul_n(self.n, self.ctx.inv_n(b)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        return Elt(self.ctx, self.ctx.pow_n(self.n, k))

    def frob(self):
        """x -> x^q."""
        return Elt(self.ctx, int(self.ctx.frob_table[self.n]))

    def norm(self):
        """x^(q+1), an element of F_q."""
        return self * self.frob()

    def in_subfield(self) -> bool:
        return self.n < self.ctx.q

    def log(self) -> int:
        if self.n == 0:
            raise DivisionByZero("log of zero")
        return int(self.ctx.log[self.n])

    def __eq__(self, other):
        if isinstance(other, Elt):
            return self.n == other.n and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, int):
            return other % self.ctx.p == self.n
        return NotImplemented

    def __hash__(self):
        return hash(self.n)

    def __bool__(self):
        return self.n != 0

    def __lt__(self, other):
        return self.n < other.n

    def __int__(self):
        return self.n

    def __repr__(self):
        if self.n == 0:
            return "0"
        if self.n < self.ctx.p:
            return str(self.n)
        return f"w^{self.log()}"


def _as_tuple(x):
    if x is None:
        return None
    return tuple(tuple(c) if isinstance(c, (list, tuple)) else c for c in x)


def build_field(p: int, r: int = 1, base_modulus=None, ext_modulus=None) -> FieldCtx:
    """Construct the tower F_p < F_{p^r} < F_{p^{2r}}.

    ``base_modulus`` is a monic degree-r coefficient list over F_p (constant
    term first).  ``ext_modulus`` is a monic ``[d0, d1, 1]`` over F_q, each
    entry either an int (encoding of an F_q element) or a list of r residues.
    Omitted moduli default to the first irreducible polynomial when monic
    candidates are ordered by the integer whose base-p (resp. base-q) digits
    are the non-leading coefficients, constant term least significant.  The
    primitive element is the smallest encoding of full multiplicative order.
    """
    return _build_field_cached(p, r, _as_tuple(base_modulus), _as_tuple(ext_modulus))


@functools.lru_cache(maxsize=64)
def _build_field_cached(p, r, base_modulus, ext_modulus):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if r < 1:
        raise DegreeMismatch("extension degree r must be >= 1")
    q = p ** r
    if q * q > MAX_ORDER:
        raise FieldTooLarge(f"q^2 = {q * q} exceeds the supported maximum {MAX_ORDER}")

    if base_modulus is None:
        for n in range(p ** r):
            cand = _digits(n, p, r) + [1]
            if is_irreducible_fp(cand, p):
                base_modulus = tuple(cand)
                break
    else:
        base_modulus = tuple(int(c) for c in base_modulus)
        if len(base_modulus) != r + 1:
            raise DegreeMismatch(f"base modulus must have degree {r}")
        if any(not 0 <= c < p for c in base_modulus):
            raise ValueError("base modulus coefficients must lie in [0, p)")
        if base_modulus[-1] != 1:
            raise DegreeMismatch("base modulus must be monic")
        if not is_irreducible_fp(list(base_modulus), p):
            raise ReducibleModulus(f"base modulus {list(base_modulus)} is reducible over F_{p}")

    if ext_modulus is None:
        # first monic quadratic without a root; the probe context skips the check
        probe = FieldCtx.__new__(FieldCtx)
        probe.p, probe.r, probe.q = p, r, q
        probe.base_modulus = base_modulus
        probe._build_base()
        for n in range(q * q):
            probe.ext_modulus = (n % q, n // q, 1)
            try:
                probe._check_ext_irreducible()
            except ReducibleModulus:
                continue
            ext_modulus = probe.ext_modulus
            break
    else:
        if len(ext_modulus) != 3:
            raise DegreeMismatch("extension modulus must have degree 2")
        ext = []
        for c in ext_modulus:
            if isinstance(c, tuple):
                if len(c) != r or any(not 0 <= d < p for d in c):
                    raise ValueError("extension coefficient must be r residues mod p")
                c = _undigits(c, p)
            if not 0 <= int(c) < q:
                raise ValueError("extension coefficient outside F_q")
            ext.append(int(c))
        if ext[2] != 1:
            raise DegreeMismatch("extension modulus must be monic")
        ext_modulus = tuple(ext)
    return FieldCtx(p, r, base_modulus, ext_modulus)


def field_from_spec(spec: dict) -> FieldCtx:
    return build_field(spec["p"], spec.get("r", 1), spec.get("base_modulus"), spec.get("ext_modulus"))


def frobenius(ctx: FieldCtx, x: Elt) -> Elt:
    return x.frob()


def arith(a: Elt, b: Elt | int | None, op: str) -> Elt:
    """Dispatch a named field operation; ``pow`` takes an int exponent as ``b``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def roots_of_unity(ctx: FieldCtx, n: int) -> list[Elt]:
    """The n-th roots of unity, ordered as omega^(i (q^2-1)/n) for i = 0..n-1."""
    N = ctx.order - 1
    if n < 1 or N % n:
        raise NotADivisor(f"{n} does not divide {N}")
    step = N // n
    return [Elt(ctx, int(ctx.exp[i * step])) for i in range(n)]


def deltas(ctx: FieldCtx) -> list[Elt]:
    """The q+1 admissible delta for s = x^q + delta x; index 0 is 1 (trace)."""
    return roots_of_unity(ctx, ctx.q + 1)


def in_subfield(ctx: FieldCtx, x: Elt) -> bool:
    return x.in_subfield()


def trace(ctx: FieldCtx, x: Elt) -> Elt:
    return x.frob() + x


def multiplicative_order(x: Elt) -> int:
    N = x.ctx.order - 1
    return N // gcd(N, x.log())
