"""Univariate polynomials with complex coefficients in the monomial basis.

Coefficients are stored in ascending order, ``coeffs[i]`` multiplies ``x**i``.
The zero polynomial has no coefficients and degree -1.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Union

import numpy as np

#: Entries at or below ``TRIM_TOL * max|c|`` are dropped from the top end.
TRIM_TOL = 1e-12

Number = Union[int, float, complex, np.number]


class PolyFormatError(ValueError):
    """Raised when a polynomial text file cannot be parsed."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _trim(c: np.ndarray, tol: float = TRIM_TOL) -> np.ndarray:
    if c.size == 0:
        return c
    mags = np.abs(c)
    scale = mags.max()
    if scale == 0.0:
        return c[:0]
    keep = np.nonzero(mags > tol * scale)[0]
    return c[: keep[-1] + 1]


class Polynomial:
    """Immutable complex polynomial.

    Parameters
    ----------
    coeffs : array_like
        Coefficients in ascending degree order. Real input is embedded in
        complex arithmetic.
    trim : bool
        Drop negligible leading entries (default). Pass ``False`` to keep the
        vector exactly as given, e.g. when a fixed length matters.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number] | np.ndarray = (), trim: bool = True):
        c = np.array(coeffs, dtype=complex).ravel()
        if trim:
            c = _trim(c)
        c.flags.writeable = False
        self._c = c

    @classmethod
    def from_roots(cls, roots, leading: Number = 1.0) -> "Polynomial":
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(leading * c)

    @classmethod
    def monomial(cls, k: int) -> "Polynomial":
        c = np.zeros(k + 1, dtype=complex)
        c[k] = 1.0
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    @property
    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def leading(self) -> complex:
        if self.is_zero:
            return 0j
        return complex(self._c[-1])

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self._c.imag) <= tol))

    def padded(self, n: int) -> np.ndarray:
        """Coefficient vector zero-padded (never truncated) to length ``n``."""
        out = np.zeros(max(n, self._c.size), dtype=complex)
        out[: self._c.size] = self._c
        return out

    def __call__(self, x):
        return evaluate(self, x)

    def __len__(self):
        return self._c.size

    def __repr__(self):
        return f"Polynomial({np.array2string(self._c, precision=6, separator=', ')})"

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __neg__(self):
        return Polynomial(-self._c)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self), len(other))
        return Polynomial(self.padded(n) + other.padded(n))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        n = max(len(self), len(other))
        return Polynomial(self.padded(n) - other.padded(n))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            return Polynomial(np.convolve(self._c, other._c))
        return self.scale(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __divmod__(self, other):
        return poly_divmod(self, _coerce(other))

    def __floordiv__(self, other):
        return poly_divmod(self, _coerce(other))[0]

    def __mod__(self, other):
        return poly_divmod(self, _coerce(other))[1]

    def scale(self, s: Number) -> "Polynomial":
        return Polynomial(self._c * complex(s))

    def monic(self) -> "Polynomial":
        return monic(self)


def _coerce(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if np.isscalar(p):
        return Polynomial([p])
    return Polynomial(p)


def evaluate(p: Polynomial, x):
    """Horner evaluation of ``p`` at scalar or array ``x``."""
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for c in p.coeffs[::-1]:
        acc = acc * x + c
    return acc[()] if acc.ndim == 0 else acc


def poly_divmod(a: Polynomial, b: Polynomial, clean: bool = True) -> tuple[Polynomial, Polynomial]:
    """Euclidean division ``a = b*q + r`` with ``deg r < deg b``.

    With ``clean`` (default) remainder entries at rounding level relative to
    ``a`` are cleared, so an exact factor leaves the zero polynomial; pass
    ``clean=False`` when the remainder itself is the quantity of interest.
    """
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.degree < b.degree:
        return Polynomial(), a
    bc = b.coeffs
    r = a.coeffs.copy()
    db = b.degree
    lead = bc[-1]
    q = np.zeros(a.degree - db + 1, dtype=complex)
    for i in range(a.degree - db, -1, -1):
        qi = r[i + db] / lead
        q[i] = qi
        r[i : i + db + 1] -= qi * bc
    rem = r[:db].copy()
    if not clean:
        return Polynomial(q), Polynomial(rem, trim=False)
    scale = max(np.abs(a.coeffs).max(), np.abs(q).max() * np.abs(bc).max())
    rem[np.abs(rem) <= TRIM_TOL * scale] = 0.0
    return Polynomial(q), Polynomial(rem)


def monic(p: Polynomial) -> Polynomial:
    if p.is_zero:
        raise ZeroDivisionError("the zero polynomial has no leading coefficient")
    c = p.coeffs / p.coeffs[-1]
    c[-1] = 1.0
    return Polynomial(c)


def distance(p: Polynomial, q: Polynomial) -> float:
    """Euclidean norm of the coefficient difference (shorter side zero-padded)."""
    n = max(len(p), len(q))
    return float(np.linalg.norm(p.padded(n) - q.padded(n)))


# text format: one "re im" pair per line, ascending degree


def parse_poly(text: str) -> Polynomial:
    coeffs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PolyFormatError(f"expected 're im', got {raw!r}", lineno)
        try:
            coeffs.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise PolyFormatError(f"not a floating-point pair: {raw!r}", lineno) from None
    return Polynomial(coeffs)


def format_poly(p: Polynomial, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(f"{c.real:.16e} {c.imag:.16e}" for c in p.coeffs)
    return "\n".join(lines) + "\n"


def read_poly(path) -> Polynomial:
    return parse_poly(Path(path).read_text())


def write_poly(path, p: Polynomial, header: str | None = None) -> None:
    Path(path).write_text(format_poly(p, header))
