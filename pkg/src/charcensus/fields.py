"""Odd finite fields F_q with precomputed quadratic-character tables.

Elements are canonical integer indices in [0, q).  For a prime field the
index is the residue itself.  For an extension field F_{p^k} the element
c_0 + c_1*alpha + ... + c_{k-1}*alpha^{k-1} has index c_0 + c_1*p + ... +
c_{k-1}*p^{k-1}, where alpha is the class of X modulo a fixed irreducible
polynomial; multiplication goes through log/antilog tables relative to a
fixed multiplicative generator, addition is digit-wise mod p.

Every FieldSpec is immutable after construction and safe to share across
threads and processes.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import EvenCharacteristic, FieldTooLarge, NotPrime

PRIME_FIELD_MAX = 2**31  # direct modular arithmetic
EXTENSION_FIELD_MAX = 2**16  # log/antilog tables of size O(q)
CHI_TABLE_MAX = 2**24  # above this a prime field answers chi via Euler's criterion
INV_TABLE_MAX = 2**22  # inverse lookup table bound (needed by the compiled kernels)
ADD_TABLE_MAX = 1024  # extension fields up to here get a q x q addition table


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (fine for n < 2**62)."""
    if n < 2:
        return False
    for m in (2, 3):
        if n % m == 0:
            return n == m
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


# ---------------------------------------------------------------------------
# Dense polynomial helpers over F_p, used only during field construction.
# Coefficient lists are lowest-degree first and may carry trailing zeros.


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(num, den, p):
    """num mod den over F_p; den must be monic and nonzero."""
    num = list(num)
    dd = len(den) - 1
    inv_lead = pow(den[-1], p - 2, p)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            f = c * inv_lead % p
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - f * den[j]) % p
    return _poly_trim([c % p for c in num[:dd]])


def _poly_mulmod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, modulus, p)


def _poly_powmod(a, e, modulus, p):
    result = [1]
    base = _poly_mod(list(a), modulus, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _digits(n, p, k):
    return [(n // p**i) % p for i in range(k)]


def _index_of(coeffs, p):
    return sum(c * p**i for i, c in enumerate(coeffs))


def _is_irreducible(coeffs, p):
    """Trial division of a monic polynomial by every monic divisor of degree <= deg/2."""
    k = len(coeffs) - 1
    for deg in range(1, k // 2 + 1):
        for n in range(p**deg):
            den = _digits(n, p, deg) + [1]
            if not _poly_mod(coeffs, den, p):
                return False
    return True


def _smallest_irreducible(p, k):
    """Lexicographically smallest monic irreducible of degree k over F_p.

    Candidates X^k + c_{k-1} X^{k-1} + ... + c_0 are scanned in ascending
    order of the base-p integer with digits (c_{k-1}, ..., c_0).
    """
    for n in range(p**k):
        coeffs = _digits(n, p, k) + [1]
        if _is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError(f"no irreducible of degree {k} over F_{p}")  # unreachable


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """A concrete odd finite field F_q, q = p^k, with canonical element indices.

    Do not instantiate directly; use :func:`build_field`.
    """

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = None  # coefficient tuple of the irreducible, k > 1 only
        self.generator = None  # canonical index of the multiplicative generator, k > 1 only
        self._exp = None
        self._log = None
        self._mul_gather = None
        self._log_sentinel = None
        self._inv_table = None
        self._chi = None
        self._ktables = None
        if k > 1:
            self._build_extension_tables()
        self._build_chi()

    # -- construction -------------------------------------------------------

    def _build_extension_tables(self):
        p, k, q = self.p, self.k, self.q
        modulus = _smallest_irreducible(p, k)
        self.modulus = tuple(modulus)
        # Find the smallest generator: order q-1 exactly, certified by the
        # prime factors of q-1.  If the modulus were reducible no element
        # would pass, so this doubles as an irreducibility check.
        factors = _prime_factors(q - 1)
        gen = None
        for idx in range(2, q):
            g = _poly_trim(_digits(idx, p, k))
            if all(_poly_powmod(g, (q - 1) // r, modulus, p) != [1] for r in factors):
                gen = idx
                break
        if gen is None:
            raise AssertionError(f"no generator found for F_{p}^{k}")  # unreachable
        self.generator = gen
        exp = np.zeros(q - 1, dtype=np.int64)
        cur = [1]
        g = _poly_trim(_digits(gen, p, k))
        for t in range(q - 1):
            exp[t] = _index_of(cur, p)
            cur = _poly_mulmod(cur, g, modulus, p)
        if cur != [1]:
            raise AssertionError("generator order is not q-1")
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        if len(np.unique(exp)) != q - 1:
            raise AssertionError("antilog table is not a bijection")
        # Padded gather table: indices are log[a] + log[b]; the sentinel for
        # log[0] lands in the zero-filled tail, so zero inputs map to zero.
        sentinel = 2 * q
        gather = np.zeros(2 * sentinel + 1, dtype=np.int64)
        t = np.arange(2 * (q - 1) - 1)
        gather[t] = exp[t % (q - 1)]
        log[0] = sentinel
        inv = np.zeros(q, dtype=np.int64)
        inv[exp] = exp[(-np.arange(q - 1)) % (q - 1)]
        self._exp = exp
        self._log = log
        self._log_sentinel = sentinel
        self._mul_gather = gather
        self._inv_table = inv
        for a in (exp, log, gather, inv):
            a.setflags(write=False)

    def _build_chi(self):
        q = self.q
        if self.k > 1:
            chi = np.where(np.arange(q - 1) % 2 == 0, 1, -1).astype(np.int8)
            table = np.zeros(q, dtype=np.int8)
            table[self._exp] = chi
        elif q <= CHI_TABLE_MAX:
            table = np.full(q, -1, dtype=np.int8)
            r = np.arange(1, q, dtype=np.int64)
            table[r * r % q] = 1
            table[0] = 0
        else:
            self._chi = None
            return
        table[0] = 0
        n_plus = int(np.count_nonzero(table == 1))
        n_minus = int(np.count_nonzero(table == -1))
        if n_plus != (q - 1) // 2 or n_minus != (q - 1) // 2:
            raise AssertionError("quadratic character table is unbalanced")
        table.setflags(write=False)
        self._chi = table

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, pi = 0, 1
        for _ in range(self.k):
            out += ((a // pi + b // pi) % p) * pi
            pi *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        p = self.p
        out, pi = 0, 1
        for _ in range(self.k):
            out += (-(a // pi) % p) * pi
            pi *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(int(self._log[a]) + int(self._log[b])) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def quad_char(self, a: int) -> int:
        """chi(a): 0 for a = 0, +1 for nonzero squares, -1 otherwise."""
        if self._chi is not None:
            return int(self._chi[a])
        # Large prime field: Euler's criterion a^((q-1)/2).
        r = pow(a, (self.q - 1) // 2, self.p)
        return 0 if a == 0 else (1 if r == 1 else -1)

    def elements(self) -> range:
        return range(self.q)

    def format_element(self, a: int) -> str:
        """Human-readable form; polynomial in the generator class for k > 1."""
        if self.k == 1:
            return str(a)
        terms = []
        for i, c in enumerate(_digits(a, self.p, self.k)):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = "a" if i == 1 else f"a^{i}"
                terms.append(base if c == 1 else f"{c}*{base}")
        return " + ".join(terms) if terms else "0"

    # -- vectorized arithmetic on index arrays (numpy, broadcastable) --------

    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out, pi = 0, 1
        for _ in range(self.k):
            out = out + ((a // pi + b // pi) % p) * pi
            pi *= p
        return out

    def vneg(self, a):
        if self.k == 1:
            return -a % self.p
        p = self.p
        out, pi = 0, 1
        for _ in range(self.k):
            out = out + (-(a // pi) % p) * pi
            pi *= p
        return out

    def vsub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        p = self.p
        out, pi = 0, 1
        for _ in range(self.k):
            out = out + ((a // pi - b // pi) % p) * pi
            pi *= p
        return out

    def vmul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        return self._mul_gather[self._log[a] + self._log[b]]

    @property
    def chi_table(self) -> np.ndarray:
        """Length-q int8 array of chi values, indexed by canonical index."""
        if self._chi is None:
            raise FieldTooLarge(
                f"chi table unavailable for q={self.q} > {CHI_TABLE_MAX}; "
                "use quad_char for scalar queries"
            )
        return self._chi

    @property
    def inv_table(self) -> np.ndarray:
        """Length-q int64 array of inverses (entry 0 unused), for batched kernels."""
        if self._inv_table is None:
            if self.q > INV_TABLE_MAX:
                raise FieldTooLarge(f"inverse table unavailable for q={self.q} > {INV_TABLE_MAX}")
            # inv(a) = -(p // a) * inv(p % a) mod p, filled in one linear pass
            p = self.p
            inv = np.zeros(self.q, dtype=np.int64)
            if self.q > 1:
                inv[1] = 1
            for a in range(2, self.q):
                inv[a] = (p - p // a) * inv[p % a] % p
            inv.setflags(write=False)
            self._inv_table = inv
        return self._inv_table

    def kernel_tables(self):
        """Table bundle (chi, log, exp, inv, neg, add) for the compiled kernels.

        Prime fields carry empty log/exp and a dummy add table (the kernels
        branch to direct modular arithmetic); extension fields with
        q <= ADD_TABLE_MAX get a full q x q addition table, larger ones use
        digit-wise base-p addition inside the kernels.
        """
        if self._ktables is None:
            chi = self.chi_table
            inv = self.inv_table
            q = self.q
            if self.k == 1:
                log_t = np.empty(0, dtype=np.int64)
                exp_t = np.empty(0, dtype=np.int64)
                neg_t = (q - np.arange(q, dtype=np.int64)) % q
                add_t = np.empty((1, 1), dtype=np.int64)
            else:
                log_t = self._log
                exp_t = np.concatenate([self._exp, self._exp])  # period q-1 covers log sums
                idx = np.arange(q, dtype=np.int64)
                neg_t = self.vneg(idx)
                if q <= ADD_TABLE_MAX:
                    add_t = self.vadd(idx[:, None], idx[None, :])
                else:
                    add_t = np.empty((1, 1), dtype=np.int64)
            for a in (neg_t, add_t, exp_t):
                a.setflags(write=False)
            self._ktables = (chi, log_t, exp_t, inv, neg_t, add_t)
        return self._ktables

    def __repr__(self):
        if self.k == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, k={self.k}, q={self.q})"


@functools.lru_cache(maxsize=None)
def build_field(p: int, k: int = 1) -> FieldSpec:
    """Construct F_{p^k} for an odd prime p.

    Deterministic given (p, k): the modulus for k > 1 is the
    lexicographically smallest monic irreducible of degree k over F_p and
    the generator is the smallest canonical index of maximal order.

    Raises NotPrime, EvenCharacteristic or FieldTooLarge on bad input.
    """
    if k < 1:
        raise ValueError(f"exponent k must be >= 1, got {k}")
    if p == 2:
        raise EvenCharacteristic("q must be odd; characteristic 2 is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    q = p**k
    if k == 1 and q > PRIME_FIELD_MAX:
        raise FieldTooLarge(f"prime field bound is {PRIME_FIELD_MAX}, got q={q}")
    if k > 1 and q > EXTENSION_FIELD_MAX:
        raise FieldTooLarge(f"extension field bound is {EXTENSION_FIELD_MAX}, got q={q}")
    return FieldSpec(p, k)
