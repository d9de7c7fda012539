"""Admissible and canonical bases of the point of the Sato Grassmannian
attached to the r-orbifold line, and the fermionic two-point function.

Basis vectors are series in (qd, xi, h) with qd^d standing for q^{rd}.
Matrix entries are Laurent monomials in h, stored as TruncSeries in "h".

Orientation: A^{--}[i, j] = [x^{i-1}] phi_{j-1} for i, j >= 1, and
A^{+-}[i, j] stands for the row labelled -i, i.e. [x^{-i}] phi_{j-1}.
B^{+-} uses the same labels; its column j belongs to the canonical vector
x^{j-1} + O(1/x).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping

from .partitions import x_vars
from .series import SeriesError, TruncSeries, Var, log_gamma_asymp, series_exp
from .wave import gamma_ratio_series

HALF = Fraction(1, 2)
H = Var("h", None, None)


def _hvars():
    return (H,)


# ------------------------------------------------------------ brackets
@dataclass(frozen=True)
class BracketSeries:
    kind: str  # "x" or "y"
    k: int
    value: TruncSeries


def x_bracket(k: int, N: int) -> BracketSeries:
    """Gamma(X+1/2)/Gamma(X+k+1/2) in xi = 1/x."""
    return BracketSeries("x", k, gamma_ratio_series(k, N))


def y_vars(N: int) -> tuple:
    return (Var("yi", None, N), H)


def y_bracket(k: int, N: int) -> BracketSeries:
    """Gamma(Y-k+1/2)/Gamma(Y+1/2) in yi = 1/y.

    k >= 1: prod_{j=1}^{k} h/(y - (j - 1/2) h); k < 0: prod_{j=0}^{|k|-1} (Y + j + 1/2).
    """
    vs = y_vars(N)
    out = TruncSeries.constant(1, vs)
    if k >= 0:
        for j in range(1, k + 1):
            a = -(j - HALF)
            out = out * TruncSeries(vs, {(m + 1, m + 1): (-a) ** m for m in range(N)})
        return BracketSeries("y", k, out.retruncate(yi=N))
    for j in range(-k):
        out = out * TruncSeries(vs, {(-1, -1): 1, (0, 0): j + HALF})
    return BracketSeries("y", k, out)


# ------------------------------------------------------------ rho
def _log_rho_coeffs(N: int) -> dict:
    """ln rho = -(Laurent part of ln Gamma(X + 1/2)) = -sum c_n X^{1-n}."""
    lg = log_gamma_asymp(HALF, N)
    return {e[0]: -c for e, c in lg.laurent.terms.items()}


def rho_series(N: int, name: str = "xi") -> TruncSeries:
    """rho(x) = exp((1/2)ln 2pi + X ln X - X - ln Gamma(X + 1/2)), a series in h/x."""
    vs = (Var(name, None, N), H)
    log_rho = TruncSeries(vs, {(n, n): c for n, c in _log_rho_coeffs(N).items()})
    return series_exp(log_rho)


def rho_inverse_series(N: int, name: str = "yi") -> TruncSeries:
    vs = (Var(name, None, N), H)
    log_rho = TruncSeries(vs, {(n, n): -c for n, c in _log_rho_coeffs(N).items()})
    return series_exp(log_rho)


# ------------------------------------------------------------ admissible basis
def _basis_vars(D: int, N: int) -> tuple:
    return (Var("qd", 0, D),) + x_vars(N)


def admissible_basis(r: int, k: int, D: int, N: int) -> TruncSeries:
    """phi_k = h^k rho(x) sum_d (-1)^d q^{rd}/(d! r^d h^{(r+1)d}) x_[rd-k].

    The h^k factor makes the leading term exactly x^k.
    """
    if k < 0 or D < 0:
        raise ValueError("need k >= 0 and D >= 0")
    # the degree-k polynomial factor eats k orders of rho's precision
    M = N + k
    vs = _basis_vars(D, M)
    total = TruncSeries(vs, {})
    for d in range(D + 1):
        c = Fraction((-1) ** d, factorial(d) * r ** d)
        br = x_bracket(r * d - k, M).value
        total = total + TruncSeries(vs, {(d, e[0], e[1] + k - (r + 1) * d): c * v
                                         for e, v in br.terms.items()})
    rho = rho_series(M).with_vars(x_vars(M))
    return (total * TruncSeries(vs, {(0,) + e: v for e, v in rho.terms.items()})).retruncate(xi=N)


# ------------------------------------------------------------ matrices
@dataclass(frozen=True)
class HalfInfMatrix:
    kind: str  # "A--", "A+-", "B+-"
    rows: int
    cols: int
    qdeg: int
    entries: Mapping  # (i, j, d) -> TruncSeries in h

    def get(self, i: int, j: int, d: int) -> TruncSeries:
        return self.entries.get((i, j, d), TruncSeries(_hvars(), {}))

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind, "rows": self.rows, "cols": self.cols, "qdeg": self.qdeg,
            "entries": [{"i": i, "j": j, "d": d, "series": s.to_json_obj()}
                        for (i, j, d), s in sorted(self.entries.items()) if not s.is_zero()],
        }

    def equals(self, other: "HalfInfMatrix") -> bool:
        keys = set(self.entries) | set(other.entries)
        return all((self.get(*k) - other.get(*k)).is_zero() for k in keys)


def _coeff_h(series: TruncSeries, d: int, xpow: int) -> TruncSeries:
    """[qd^d x^xpow] as a series in h."""
    terms = {(e[2],): c for e, c in series.terms.items() if e[0] == d and e[1] == -xpow}
    return TruncSeries(_hvars(), terms)


def _basis_family(r: int, size: int, D: int, N: int) -> list:
    return [admissible_basis(r, j - 1, D, N) for j in range(1, size + 1)]


def matrix_amm(r: int, size: int, D: int) -> HalfInfMatrix:
    fam = _basis_family(r, size, D, size)
    ent = {}
    for j, phi in enumerate(fam, start=1):
        for i in range(1, size + 1):
            for d in range(D + 1):
                s = _coeff_h(phi, d, i - 1)
                if not s.is_zero():
                    ent[(i, j, d)] = s
    return HalfInfMatrix("A--", size, size, D, ent)


def matrix_apm(r: int, size: int, D: int, restricted: bool = True) -> HalfInfMatrix:
    """[x^{-i}] phi_{j-1}.  With restricted=True only the q-degrees with
    rd > j-1 enter, as in the truncated sum of the published display."""
    ent = {}
    for j in range(1, size + 1):
        phi = admissible_basis(r, j - 1, D, size)
        for i in range(1, size + 1):
            for d in range(D + 1):
                if restricted and not r * d > j - 1:
                    continue
                s = _coeff_h(phi, d, -i)
                if not s.is_zero():
                    ent[(i, j, d)] = s
    return HalfInfMatrix("A+-", size, size, D, ent)


def _zero():
    return TruncSeries(_hvars(), {})


def _qmatmul(a: HalfInfMatrix, b: HalfInfMatrix, kind: str) -> HalfInfMatrix:
    D = min(a.qdeg, b.qdeg)
    ent = {}
    for i in range(1, a.rows + 1):
        for j in range(1, b.cols + 1):
            for d in range(D + 1):
                total = _zero()
                for l in range(1, a.cols + 1):
                    for e in range(d + 1):
                        x = a.entries.get((i, l, e))
                        y = b.entries.get((l, j, d - e))
                        if x is not None and y is not None:
                            total = total + x * y
                if not total.is_zero():
                    ent[(i, j, d)] = total
    return HalfInfMatrix(kind, a.rows, b.cols, D, ent)


def _hinv(s: TruncSeries) -> TruncSeries:
    if len(s.terms) != 1:
        raise SeriesError("diagonal entry is not a single monomial")
    (e, c), = s.terms.items()
    return TruncSeries(s.vars, {(-e[0],): 1 / c})


def invert_q_graded(m: HalfInfMatrix) -> HalfInfMatrix:
    """Inverse of an upper-triangular q-graded matrix with invertible q^0 diagonal.

    The q^0 block is inverted by back substitution; higher q-degrees follow
    from N_d = -M0^{-1} sum_{e>=1} M_e N_{d-e}."""
    n, D = m.rows, m.qdeg
    for i in range(1, n + 1):
        if m.get(i, i, 0).is_zero():
            raise SeriesError("singular q^0 block")
    inv0: dict = {}
    for j in range(1, n + 1):
        for i in range(j, 0, -1):
            rhs = TruncSeries.constant(1, _hvars()) if i == j else _zero()
            for l in range(i + 1, j + 1):
                a = m.entries.get((i, l, 0))
                b = inv0.get((l, j))
                if a is not None and b is not None:
                    rhs = rhs - a * b
            if not rhs.is_zero():
                inv0[(i, j)] = rhs * _hinv(m.get(i, i, 0))
    out = {(i, j, 0): v for (i, j), v in inv0.items()}
    for d in range(1, D + 1):
        corr = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                acc = _zero()
                for e in range(1, d + 1):
                    for l in range(1, n + 1):
                        a = m.entries.get((i, l, e))
                        b = out.get((l, j, d - e))
                        if a is not None and b is not None:
                            acc = acc + a * b
                if not acc.is_zero():
                    corr[(i, j)] = acc
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                total = _zero()
                for l in range(1, n + 1):
                    a = inv0.get((i, l))
                    b = corr.get((l, j))
                    if a is not None and b is not None:
                        total = total - a * b
                if not total.is_zero():
                    out[(i, j, d)] = total
    return HalfInfMatrix("inv", n, n, D, out)


def canonical_basis_b(r: int, size: int, D: int, amm: HalfInfMatrix | None = None,
                      apm: HalfInfMatrix | None = None) -> HalfInfMatrix:
    """B^{+-} = A^{+-} (A^{--})^{-1}, computed degree by degree in q."""
    amm = amm or matrix_amm(r, size, D)
    apm = apm or matrix_apm(r, size, D)
    out = _qmatmul(apm, invert_q_graded(amm), "B+-")
    return out


def right_multiply(m: HalfInfMatrix, u: Mapping) -> HalfInfMatrix:
    """m * U for a q-independent matrix U given as {(i, j): Fraction}."""
    ent = {}
    for (i, l, d), s in m.entries.items():
        for j in range(1, m.cols + 1):
            c = u.get((l, j), 0)
            if c:
                key = (i, j, d)
                ent[key] = ent.get(key, _zero()) + s.scale(c)
    return HalfInfMatrix(m.kind, m.rows, m.cols, m.qdeg,
                         {k: v for k, v in ent.items() if not v.is_zero()})


# ------------------------------------------------------------ closed two-point function
@dataclass(frozen=True)
class BogoliubovCoeffs:
    r: int
    entries: Mapping  # (i, j) -> TruncSeries in (qd, h)

    def to_json_obj(self) -> dict:
        return {"schema": "wpline/1", "r": self.r,
                "entries": [{"i": i, "j": j, "series": s.to_json_obj()}
                            for (i, j), s in sorted(self.entries.items())]}

    @classmethod
    def from_json_obj(cls, obj) -> "BogoliubovCoeffs":
        return cls(obj["r"], {(e["i"], e["j"]): TruncSeries.from_json_obj(e["series"])
                              for e in obj["entries"]})


def two_point_series(r: int, I: int, J: int, D: int) -> TruncSeries:
    """The literal closed B(x, y) in variables (qd, xi, yi, h) through xi^I, yi^J."""
    vs = (Var("qd", 0, D), Var("xi", None, I), Var("yi", None, J), H)

    def lift_x(s):
        return TruncSeries(vs, {(0, e[0], 0, e[1]): c for e, c in s.terms.items()})

    def lift_y(s):
        return TruncSeries(vs, {(0, 0, e[0], e[1]): c for e, c in s.terms.items()})

    total = TruncSeries(vs, {})
    for d in range(1, D + 1):
        inner = TruncSeries(vs, {})
        for k in range(d):
            c = Fraction(1 if k % 2 else -1, factorial(k) * factorial(d - 1 - k))
            for n in range(1, r + 1):
                xb = lift_x(x_bracket(r * k + n, I).value)
                yb = lift_y(y_bracket(r * (d - k) + 1 - n, J).value)
                inner = inner + (xb * yb).scale(c)
        pref = TruncSeries(vs, {(d, 0, 0, -(r + 1) * d): Fraction(1, d * r ** d)})
        total = total + pref * inner
    ratio = lift_x(rho_series(I)) * lift_y(rho_inverse_series(J))
    return (ratio * total).retruncate(xi=I, yi=J)


def two_point_closed(r: int, I: int, J: int, D: int) -> BogoliubovCoeffs:
    """b_{i,j} = [x^{-(i+1)} y^{-(j+1)}] B(x, y) for 0 <= i < I, 0 <= j < J."""
    B = two_point_series(r, I, J, D)
    vs = (Var("qd", 0, D), H)
    out = {}
    for i in range(I):
        for j in range(J):
            terms = {(e[0], e[3]): c for e, c in B.terms.items() if e[1] == i + 1 and e[2] == j + 1}
            out[(i, j)] = TruncSeries(vs, terms)
    return BogoliubovCoeffs(r, out)


def closed_to_matrix(coeffs: BogoliubovCoeffs, size: int, D: int, hshift: int = -1) -> HalfInfMatrix:
    """Place b_{i,j} at B^{+-}[i+1, j+1], multiplied by h^hshift.

    The displayed B(x, y) is homogeneous of degree 0 in (x, y, h) once q is
    given its weight, while the canonical-basis coefficients need degree -1;
    the default factor 1/h reconciles the two."""
    ent = {}
    for (i, j), s in coeffs.entries.items():
        if i >= size or j >= size:
            continue
        for e, c in s.terms.items():
            d, hp = e
            if d > D:
                continue
            key = (i + 1, j + 1, d)
            ent[key] = ent.get(key, _zero()) + TruncSeries(_hvars(), {(hp + hshift,): c})
    return HalfInfMatrix("B+-", size, size, D, {k: v for k, v in ent.items() if not v.is_zero()})


def bilinear_identity_check(r: int, size: int, D: int, perturb: tuple | None = None) -> bool:
    """A^{+-} = B^{+-} A^{--} with B^{+-} taken from the closed two-point function."""
    coeffs = two_point_closed(r, size, size, D)
    if perturb is not None:
        i, j = perturb
        vs = coeffs.entries[(i, j)].vars
        bumped = dict(coeffs.entries)
        bumped[(i, j)] = bumped[(i, j)] + TruncSeries(vs, {(1, 0): 1})
        coeffs = BogoliubovCoeffs(r, bumped)
    B = closed_to_matrix(coeffs, size, D)
    amm = matrix_amm(r, size, D)
    apm = matrix_apm(r, size, D)
    return _qmatmul(B, amm, "A+-").equals(apm)


# ------------------------------------------------------------ combinatorics and export
def cbl_identity(d: int, k: int) -> Fraction:
    """sum_{d2=0}^{d-k-1} (-1)^{d2+d-1-k} d!/(d1 k! (d-d2-1-k)! d2!), d1 = d - d2."""
    if not 0 <= k <= d - 1:
        raise ValueError("need 0 <= k <= d-1")
    total = Fraction(0)
    for d2 in range(d - k):
        d1 = d - d2
        total += Fraction((-1) ** (d2 + d - 1 - k) * factorial(d),
                          d1 * factorial(k) * factorial(d - d2 - 1 - k) * factorial(d2))
    return total


def bogoliubov_csv(coeffs: BogoliubovCoeffs) -> str:
    """Rows (i, j, d, coefficient) with coefficient a Laurent monomial in h."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "d", "coefficient"])
    for (i, j), s in sorted(coeffs.entries.items()):
        by_d: dict = {}
        for (d, hp), c in sorted(s.terms.items()):
            by_d.setdefault(d, []).append(f"{c}*h^{hp}")
        for d in sorted(by_d):
            w.writerow([i, j, d, " + ".join(by_d[d])])
    return buf.getvalue()


def bogoliubov_export(coeffs: BogoliubovCoeffs) -> dict:
    """Exponent data of G = exp(sum b_{i,j} psi*_{-j-1/2} psi_{i+1/2})."""
    nonzero = {k: v for k, v in coeffs.entries.items() if not v.is_zero()}
    return {
        "schema": "wpline/1",
        "r": coeffs.r,
        "identity": not nonzero,
        "operator": "exp(sum_{i,j>=0} b[i,j] psi*_{-j-1/2} psi_{i+1/2})",
        "b": BogoliubovCoeffs(coeffs.r, nonzero).to_json_obj()["entries"],
    }


def matrix_json(m: HalfInfMatrix) -> str:
    return json.dumps(m.to_json_obj(), sort_keys=True)
