"""Exact scalar fields: the rationals and prime fields F_p.

Every computation in this library is exact; there is no floating point
anywhere.  Rational scalars are gmpy2.mpq when available (much faster),
fractions.Fraction otherwise.  F_p scalars are plain ints in [0, p).

Serialization follows the wire format used throughout:
  * rationals as strings "a/b" with b > 0 and gcd(a, b) = 1,
  * F_p scalars as integers,
  * field descriptors {"field": "Q"} or {"field": "Fp", "p": <prime>}.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq

    def _make_rational(num, den=1):
        return _mpq(num, den)
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Fraction

    def _make_rational(num, den=1):
        return _Fraction(num, den)


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any modulus we use."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rationals:
    """The field of rational numbers with exact arithmetic."""

    name = "Q"

    def __call__(self, num, den=1):
        return _make_rational(num, den)

    @property
    def zero(self):
        return _make_rational(0)

    @property
    def one(self):
        return _make_rational(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero scalar")
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        return self.div(self.one, a)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def parse(self, text):
        """Accepts "a/b", "a", or an int."""
        if isinstance(text, int):
            return _make_rational(text)
        if isinstance(text, str):
            if "/" in text:
                num, den = text.split("/")
                den_i = int(den)
                if den_i <= 0:
                    raise FieldError(f"denominator must be positive: {text!r}")
                return _make_rational(int(num), den_i)
            return _make_rational(int(text))
        raise FieldError(f"cannot parse rational from {text!r}")

    def format(self, a) -> str:
        """Canonical "num/den" string, denominator always present and positive."""
        return f"{a.numerator}/{a.denominator}"

    def descriptor(self) -> dict:
        return {"field": "Q"}

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("field:Q")


class PrimeField:
    """F_p with residues stored as ints in [0, p); p is checked prime."""

    name = "Fp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    def __call__(self, num, den=1):
        value = num % self.p
        if den % self.p == 0:
            raise ZeroDivisionError("division by zero scalar")
        if den != 1:
            value = value * pow(den % self.p, self.p - 2, self.p) % self.p
        return value

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero scalar")
        return a * pow(b, self.p - 2, self.p) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return self.div(1, a)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def parse(self, text):
        if isinstance(text, int):
            return text % self.p
        if isinstance(text, str):
            if "/" in text:
                num, den = text.split("/")
                return self(int(num), int(den))
            return int(text) % self.p
        raise FieldError(f"cannot parse F_{self.p} scalar from {text!r}")

    def format(self, a):
        return int(a % self.p)

    def descriptor(self) -> dict:
        return {"field": "Fp", "p": self.p}

    def __repr__(self):
        return f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("field:Fp", self.p))


QQ = Rationals()


def field_from_descriptor(desc: dict):
    """Inverse of Field.descriptor(); raises FieldError on malformed input."""
    if not isinstance(desc, dict) or "field" not in desc:
        raise FieldError(f"bad field descriptor: {desc!r}")
    tag = desc["field"]
    if tag == "Q":
        return QQ
    if tag == "Fp":
        if "p" not in desc:
            raise FieldError("Fp descriptor missing modulus 'p'")
        return PrimeField(int(desc["p"]))
    raise FieldError(f"unknown field tag {tag!r}")


def reduce_rational_mod_p(a, target: PrimeField):
    """Image of a rational under Z_(p) -> F_p; None if the denominator kills it.

    Used for the agreement spot-checks between Q and F_p runs.
    """
    num, den = int(a.numerator), int(a.denominator)
    if den % target.p == 0:
        return None
    return target(num, den)
