"""Sparse multivariate polynomials over Q, Z, or F_p with weight-graded
named variables.

Weights are "half-degrees": a topological degree 2d is stored as weight d,
so v_n carries weight p^n - 1 and a1, a2 carry weights 1, 2.  The canonical
term order is graded lexicographic in the VarTable order, smallest first;
zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DomainError


class Ring:
    """Coefficient ring tag: Q, Z, or F_p with p recorded."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in ("Q", "Z", "Fp"):
            raise DomainError(f"unknown ring kind {kind!r}")
        if (kind == "Fp") != (p is not None):
            raise DomainError("p must be given exactly for Fp rings")
        self.kind = kind
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Ring) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    def coerce(self, c):
        if self.kind == "Q":
            return Fraction(c)
        if self.kind == "Z":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise DomainError(f"{c} is not an integer")
                return c.numerator
            return int(c)
        # Fp: accept ints and p-local fractions
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise DomainError(f"{c} is not {self.p}-local")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "Fp" else a + b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "Fp" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "Fp" else -a

    def scalar_str(self, c) -> str:
        return str(c)

    def json_tag(self) -> str:
        return f"F{self.p}" if self.kind == "Fp" else self.kind


Q = Ring("Q")
Z = Ring("Z")

_fp_cache: dict[int, Ring] = {}


def Fp(p: int) -> Ring:
    if p not in _fp_cache:
        _fp_cache[p] = Ring("Fp", p)
    return _fp_cache[p]


def ring_from_tag(tag: str) -> Ring:
    if tag == "Q":
        return Q
    if tag == "Z":
        return Z
    if tag.startswith("F"):
        return Fp(int(tag[1:]))
    raise DomainError(f"unknown ring tag {tag!r}")


class VarTable:
    """Ordered list of (name, weight) pairs; fixes the monomial order."""

    __slots__ = ("names", "weights", "_index")

    def __init__(self, pairs: Iterable[tuple[str, int]]):
        pairs = tuple(pairs)
        self.names = tuple(name for name, _ in pairs)
        self.weights = tuple(w for _, w in pairs)
        if len(set(self.names)) != len(self.names):
            raise DomainError("duplicate variable names")
        self._index = {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, VarTable)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.weights))

    def __repr__(self):
        return "VarTable(%s)" % ", ".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))

    def index(self, name: str) -> int:
        if name not in self._index:
            raise DomainError(f"unknown variable {name!r}")
        return self._index[name]

    def monomial_weight(self, exps: tuple[int, ...]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))


class Poly:
    """Sparse polynomial: map from exponent tuples to nonzero scalars."""

    __slots__ = ("ring", "vars", "terms")

    def __init__(self, ring: Ring, vars: VarTable, terms: Mapping[tuple[int, ...], object]):
        self.ring = ring
        self.vars = vars
        self.terms = {
            exps: c for exps, c in terms.items() if not _is_zero(c)
        }

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring, vars: VarTable) -> "Poly":
        return cls(ring, vars, {})

    @classmethod
    def const(cls, ring: Ring, vars: VarTable, c) -> "Poly":
        c = ring.coerce(c)
        return cls(ring, vars, {(0,) * len(vars): c} if not _is_zero(c) else {})

    @classmethod
    def var(cls, ring: Ring, vars: VarTable, name: str, coeff=1) -> "Poly":
        i = vars.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(vars)))
        return cls(ring, vars, {exps: ring.coerce(coeff)})

    @classmethod
    def monomial(cls, ring: Ring, vars: VarTable, coeff, exps: Mapping[str, int]) -> "Poly":
        e = [0] * len(vars)
        for name, k in exps.items():
            e[vars.index(name)] = k
        return cls(ring, vars, {tuple(e): ring.coerce(coeff)})

    # -- ring structure ----------------------------------------------

    def _check_compatible(self, other: "Poly"):
        if self.ring != other.ring or self.vars != other.vars:
            raise DomainError("ring or variable-table mismatch")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.ring, self.vars, other)
        self._check_compatible(other)
        terms = dict(self.terms)
        add = self.ring.add
        for exps, c in other.terms.items():
            s = add(terms.get(exps, _ZERO), c) if exps in terms else c
            if _is_zero(s):
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Poly(self.ring, self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return Poly(self.ring, self.vars, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.ring, self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check_compatible(other)
        mul, add = self.ring.mul, self.ring.add
        out: dict[tuple[int, ...], object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = mul(c1, c2)
                if e in out:
                    s = add(out[e], c)
                    if _is_zero(s):
                        del out[e]
                    else:
                        out[e] = s
                elif not _is_zero(c):
                    out[e] = c
        return Poly(self.ring, self.vars, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        c = self.ring.coerce(c)
        if _is_zero(c):
            return Poly.zero(self.ring, self.vars)
        mul = self.ring.mul
        return Poly(self.ring, self.vars, {e: mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise DomainError("negative polynomial power")
        result = Poly.const(self.ring, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if _is_zero(other) and not self.terms:
                return True
            other = Poly.const(self.ring, self.vars, other)
        return self.ring == other.ring and self.vars == other.vars and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash((self.ring, self.vars, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    # -- structure queries -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self):
        """The scalar value if this poly is constant, else None."""
        if not self.terms:
            return self.ring.coerce(0)
        if len(self.terms) == 1:
            (exps, c), = self.terms.items()
            if all(e == 0 for e in exps):
                return c
        return None

    def coeff_of(self, exps: Mapping[str, int]):
        e = [0] * len(self.vars)
        for name, k in exps.items():
            e[self.vars.index(name)] = k
        return self.terms.get(tuple(e), self.ring.coerce(0))

    def weight(self) -> int | None:
        """Common weight of all terms if homogeneous, else None; 0 for 0."""
        ws = {self.vars.monomial_weight(e) for e in self.terms}
        if not ws:
            return 0
        return ws.pop() if len(ws) == 1 else None

    def max_weight(self) -> int:
        return max((self.vars.monomial_weight(e) for e in self.terms), default=0)

    def graded_component(self, w: int) -> "Poly":
        return Poly(
            self.ring,
            self.vars,
            {e: c for e, c in self.terms.items() if self.vars.monomial_weight(e) == w},
        )

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.vars.names[i])
        return used

    # -- ring maps ----------------------------------------------------

    def substitute(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Image under the ring map sending each variable to its binding.

        Every variable occurring in self must be bound; the bound polys
        must share one ring and variable table, which the result uses.
        """
        if not bindings:
            raise DomainError("empty bindings: target ring unknown")
        target = next(iter(bindings.values()))
        for g in bindings.values():
            target._check_compatible(g)
        missing = self.variables_used() - set(bindings)
        if missing:
            raise DomainError(f"missing bindings for {sorted(missing)}")
        out = Poly.zero(target.ring, target.vars)
        images = [bindings.get(name) for name in self.vars.names]
        pow_cache: dict[tuple[int, int], Poly] = {}
        for exps, c in self.terms.items():
            term = Poly.const(target.ring, target.vars, target.ring.coerce(c))
            for i, k in enumerate(exps):
                if k:
                    key = (i, k)
                    if key not in pow_cache:
                        pow_cache[key] = images[i] ** k
                    term = term * pow_cache[key]
            out = out + term
        return out

    def reduce_mod_p(self, p: int) -> "Poly":
        """Coefficientwise image in F_p; every coefficient must be p-local."""
        if self.ring.kind == "Fp":
            if self.ring.p != p:
                raise DomainError("polynomial already lives in a different F_p")
            return self
        fp = Fp(p)
        terms = {}
        for e, c in self.terms.items():
            r = fp.coerce(c)
            if r:
                terms[e] = r
        return Poly(fp, self.vars, terms)

    def map_coeffs(self, ring: Ring, fn) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not _is_zero(v):
                terms[e] = v
        return Poly(ring, self.vars, terms)

    # -- canonical text / JSON -----------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(
            self.terms.items(), key=lambda t: (self.vars.monomial_weight(t[0]), t[0])
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = [
                self.vars.names[i] + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(exps)
                if k
            ]
            neg = _is_negative(c)
            mag = -c if neg else c
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = str(mag) + "*" + "*".join(factors)
            else:
                body = str(mag)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    __repr__ = __str__

    def to_json_obj(self) -> dict:
        return {
            "ring": self.ring.json_tag(),
            "terms": [
                {
                    "coeff": str(c),
                    "exps": {self.vars.names[i]: k for i, k in enumerate(exps) if k},
                }
                for exps, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict, vars: VarTable) -> "Poly":
        ring = ring_from_tag(obj["ring"])
        out = cls.zero(ring, vars)
        for t in obj["terms"]:
            out = out + cls.monomial(ring, vars, Fraction(t["coeff"]), t["exps"])
        return out


_ZERO = 0


def _is_zero(c) -> bool:
    return c == 0


def _is_negative(c) -> bool:
    try:
        return c < 0
    except TypeError:
        return False


def parse_poly(text: str, ring: Ring, vars: VarTable) -> Poly:
    """Parse canonical polynomial text like ``-1/3*a1*a2^2 + 4``.

    Accepts the output of ``str(Poly)``: terms joined by + and -, each a
    product of an optional rational coefficient and ``name^k`` factors.
    """
    s = text.replace(" ", "")
    if not s:
        raise DomainError("empty polynomial text")
    # split into signed terms
    terms: list[str] = []
    cur = ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "+-*/^":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    out = Poly.zero(ring, vars)
    for term in terms:
        if term in ("", "+", "-"):
            raise DomainError(f"malformed term in {text!r}")
        sign = 1
        while term and term[0] in "+-":
            if term[0] == "-":
                sign = -sign
            term = term[1:]
        coeff = Fraction(sign)
        exps: dict[str, int] = {}
        for factor in term.split("*"):
            if not factor:
                raise DomainError(f"malformed term in {text!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
            else:
                name, _, k = factor.partition("^")
                exps[name] = exps.get(name, 0) + (int(k) if k else 1)
        out = out + Poly.monomial(ring, vars, coeff, exps)
    return out
