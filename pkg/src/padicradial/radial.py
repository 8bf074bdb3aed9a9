"""Radial functions on the value lattice p^Z with analytic tails.

A radial function u is stored by its values on a finite level window
[k_min, k_max] (``values[i] = u(p^(k_min + i))``) together with a
:class:`TailModel` on each side and the value u(0).  Tails are limited
to zero / constant / power-law; that is exactly the class needed by the
operator modules, and it makes every weighted infinite sum a geometric
series with a closed form, so there is no truncation error at infinity.

The weighted sums computed here are the raw material for the fractional
operators: ``sum_{k<=m} p^(e k) u(p^k)`` and its mirror image, plus the
level-weighted variants ``sum k p^(e k) u(p^k)`` that the logarithmic
(alpha = 1) kernels require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DivergenceError, DomainError
from .haar import Prime, p_pow

_TAIL_KINDS = ("zero", "const", "power")


@dataclass(frozen=True)
class TailModel:
    """Analytic description of u(p^k) outside the stored window.

    kind ``zero``: identically 0; ``const``: the constant ``c``;
    ``power``: ``c * p^(rho k)``.  A power law with c = 0 normalizes to
    zero.  A constant is semantically a power law with rho = 0 but is
    kept distinct so constant tails stay exact.
    """

    kind: str
    c: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in _TAIL_KINDS:
            raise DomainError(f"tail kind must be one of {_TAIL_KINDS}, got {self.kind!r}")
        if self.kind == "power" and self.c == 0.0:
            object.__setattr__(self, "kind", "zero")
            object.__setattr__(self, "rho", 0.0)
        if self.kind == "zero":
            object.__setattr__(self, "c", 0.0)
            object.__setattr__(self, "rho", 0.0)
        if not (math.isfinite(self.c) and math.isfinite(self.rho)):
            raise DomainError("tail parameters must be finite")

    @staticmethod
    def zero() -> "TailModel":
        return TailModel("zero")

    @staticmethod
    def constant(c: float) -> "TailModel":
        return TailModel("const", c=float(c))

    @staticmethod
    def power_law(c: float, rho: float) -> "TailModel":
        return TailModel("power", c=float(c), rho=float(rho))

    def value_at(self, p: int, k: int) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "const":
            return self.c
        return self.c * p_pow(p, self.rho * k)

    def absolute(self) -> "TailModel":
        """Tail model of |u|, used by the summability checks."""
        return TailModel(self.kind, c=abs(self.c), rho=self.rho)

    def to_token(self) -> str:
        if self.kind == "zero":
            return "zero"
        if self.kind == "const":
            return f"const:{self.c!r}"
        return f"power:{self.c!r}:{self.rho!r}"

    @staticmethod
    def from_token(token: str) -> "TailModel":
        parts = token.split(":")
        try:
            if parts[0] == "zero" and len(parts) == 1:
                return TailModel.zero()
            if parts[0] == "const" and len(parts) == 2:
                return TailModel.constant(float(parts[1]))
            if parts[0] == "power" and len(parts) == 3:
                return TailModel.power_law(float(parts[1]), float(parts[2]))
        except ValueError as err:
            raise DomainError(f"malformed tail token {token!r}: {err}") from err
        raise DomainError(f"malformed tail token {token!r}")


@dataclass(frozen=True)
class RadialFunction:
    """Immutable radial function u: p^Z union {0} -> R."""

    p: int
    k_min: int
    k_max: int
    values: tuple
    left_tail: TailModel = field(default_factory=TailModel.zero)
    right_tail: TailModel = field(default_factory=TailModel.zero)
    value_at_zero: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.k_min > self.k_max:
            raise DomainError(f"window requires k_min <= k_max, got [{self.k_min}, {self.k_max}]")
        if len(self.values) != self.k_max - self.k_min + 1:
            raise DomainError(
                f"window [{self.k_min}, {self.k_max}] needs "
                f"{self.k_max - self.k_min + 1} values, got {len(self.values)}"
            )
        if not all(math.isfinite(v) for v in self.values):
            raise DomainError("all window values must be finite")
        if not math.isfinite(self.value_at_zero):
            raise DomainError("value at zero must be finite")

    @staticmethod
    def constant(p: int, c: float, k_min: int = -1, k_max: int = 1) -> "RadialFunction":
        n = k_max - k_min + 1
        return RadialFunction(
            p, k_min, k_max, (float(c),) * n,
            left_tail=TailModel.constant(c), right_tail=TailModel.constant(c),
            value_at_zero=float(c),
        )

    @staticmethod
    def indicator_unit_ball(p: int) -> "RadialFunction":
        """The indicator of {|x|_p <= 1}: value 1 for k <= 0, 0 for k > 0."""
        return RadialFunction(
            p, 0, 0, (1.0,),
            left_tail=TailModel.constant(1.0), right_tail=TailModel.zero(),
            value_at_zero=1.0,
        )

    @staticmethod
    def power(p: int, rho: float, c: float = 1.0) -> "RadialFunction":
        """The pure power u(p^k) = c p^(rho k); u(0) = 0."""
        return RadialFunction(
            p, 0, 0, (float(c),),
            left_tail=TailModel.power_law(c, rho),
            right_tail=TailModel.power_law(c, rho),
            value_at_zero=0.0,
        )

    @staticmethod
    def split_power(p: int, rho_left: float, rho_right: float, c: float = 1.0) -> "RadialFunction":
        """c p^(rho_left k) for k <= 0 joined to c p^(rho_right k) for k >= 0."""
        return RadialFunction(
            p, 0, 0, (float(c),),
            left_tail=TailModel.power_law(c, rho_left),
            right_tail=TailModel.power_law(c, rho_right),
            value_at_zero=0.0,
        )

    def value_at(self, k: int) -> float:
        if k < self.k_min:
            return self.left_tail.value_at(self.p, k)
        if k > self.k_max:
            return self.right_tail.value_at(self.p, k)
        return self.values[k - self.k_min]

    def absolute(self) -> "RadialFunction":
        return RadialFunction(
            self.p, self.k_min, self.k_max, tuple(abs(v) for v in self.values),
            left_tail=self.left_tail.absolute(), right_tail=self.right_tail.absolute(),
            value_at_zero=abs(self.value_at_zero),
        )

    def sup_window(self) -> float:
        return max(abs(v) for v in self.values)


def radial_eval(u: RadialFunction, k: int) -> float:
    """u(p^k): window lookup inside [k_min, k_max], tail model outside."""
    return u.value_at(k)


# -- geometric primitives ---------------------------------------------------
#
# All infinite tails reduce to the four sums below, written for the ratio
# x = p^e (or p^(e + rho)).  Left sums need x > 1, right sums x < 1.

def _geom_left(x: float, j: int) -> float:
    """sum_{k <= j} x^k for x > 1."""
    return p_pow(x, j) * x / (x - 1.0)


def _geom_left_level(x: float, j: int) -> float:
    """sum_{k <= j} k x^k for x > 1."""
    r = x / (x - 1.0)
    return p_pow(x, j) * (j * r - r / (x - 1.0))


def _geom_right(x: float, j: int) -> float:
    """sum_{k >= j} x^k for 0 < x < 1."""
    return p_pow(x, j) / (1.0 - x)


def _geom_right_level(x: float, j: int) -> float:
    """sum_{k >= j} k x^k for 0 < x < 1."""
    return p_pow(x, j) * (j / (1.0 - x) + x / (1.0 - x) ** 2)


def _left_tail_sum(tail: TailModel, p: int, j: int, e: float, level_weight: bool) -> float:
    """sum_{k <= j} [k] p^(e k) tail(k), closed form, or raise on divergence."""
    if tail.kind == "zero":
        return 0.0
    if tail.kind == "const":
        rate = e
        desc = f"constant left tail requires e > 0, got e = {e}"
    else:
        rate = e + tail.rho
        desc = f"power-law left tail requires e + rho > 0, got e + rho = {rate}"
    if rate <= 0.0:
        raise DivergenceError(f"left series sum p^(e k) u(p^k) diverges: {desc}")
    x = p_pow(p, rate)
    s = _geom_left_level(x, j) if level_weight else _geom_left(x, j)
    return tail.c * s


def _right_tail_sum(tail: TailModel, p: int, j: int, e: float, level_weight: bool) -> float:
    """sum_{k >= j} [k] p^(e k) tail(k), closed form, or raise on divergence."""
    if tail.kind == "zero":
        return 0.0
    if tail.kind == "const":
        rate = e
        desc = f"constant right tail requires e < 0, got e = {e}"
    else:
        rate = e + tail.rho
        desc = f"power-law right tail requires e + rho < 0, got e + rho = {rate}"
    if rate >= 0.0:
        raise DivergenceError(f"right series sum p^(e l) u(p^l) diverges: {desc}")
    x = p_pow(p, rate)
    s = _geom_right_level(x, j) if level_weight else _geom_right(x, j)
    return tail.c * s


def _sum_left(u: RadialFunction, m: int, e: float, level_weight: bool) -> float:
    j = min(m, u.k_min - 1)
    total = _left_tail_sum(u.left_tail, u.p, j, e, level_weight)
    for k in range(max(u.k_min, j + 1), min(m, u.k_max) + 1):
        w = k if level_weight else 1.0
        total += w * p_pow(u.p, e * k) * u.values[k - u.k_min]
    for k in range(u.k_max + 1, m + 1):
        w = k if level_weight else 1.0
        total += w * p_pow(u.p, e * k) * u.right_tail.value_at(u.p, k)
    return total


def _sum_right(u: RadialFunction, m: int, e: float, level_weight: bool) -> float:
    j = max(m, u.k_max + 1)
    total = 0.0
    for k in range(m, min(u.k_min - 1, j - 1) + 1):
        w = k if level_weight else 1.0
        total += w * p_pow(u.p, e * k) * u.left_tail.value_at(u.p, k)
    for k in range(max(m, u.k_min), u.k_max + 1):
        w = k if level_weight else 1.0
        total += w * p_pow(u.p, e * k) * u.values[k - u.k_min]
    total += _right_tail_sum(u.right_tail, u.p, j, e, level_weight)
    return total


def weighted_sum_left(u: RadialFunction, m: int, e: float) -> float:
    """sum_{k <= m} p^(e k) u(p^k), with the sub-window part in closed form."""
    return _sum_left(u, m, e, level_weight=False)


def weighted_sum_right(u: RadialFunction, m: int, e: float) -> float:
    """sum_{l >= m} p^(e l) u(p^l), with the above-window part in closed form."""
    return _sum_right(u, m, e, level_weight=False)


def level_weighted_sum_left(u: RadialFunction, m: int, e: float) -> float:
    """sum_{k <= m} k p^(e k) u(p^k); needed by the logarithmic kernels."""
    return _sum_left(u, m, e, level_weight=True)


def level_weighted_sum_right(u: RadialFunction, m: int, e: float) -> float:
    """sum_{l >= m} l p^(e l) u(p^l)."""
    return _sum_right(u, m, e, level_weight=True)


# -- summability ------------------------------------------------------------

@dataclass(frozen=True)
class ConditionCheck:
    holds: bool
    bound: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class SummabilityReport:
    """Outcome of the convergence conditions the operator modules assume.

    cond_3_1      : sum_{k<=m} p^k |u(p^k)| < inf
    cond_3_1_prime: sum_{l>=m} p^(-alpha l) |u(p^l)| < inf
    cond_2_7      : sum_{k<=m} max(p^k, p^(alpha k)) |u(p^k)| < inf   (alpha != 1)
    cond_2_8      : sum_{k<=m} |k| p^k |u(p^k)| < inf                 (alpha == 1)
    cond_3_2      : cond_2_7 plus sum_{l>=m} |u(p^l)| < inf           (alpha != 1)
    cond_3_3      : cond_2_8 plus sum_{l>=m} |l| |u(p^l)| < inf       (alpha == 1)

    Fields for the non-applicable alpha branch are None.  Convergence of a
    level-weighted series is decided by the strict inequality on the
    geometric rate: the polynomial factor never changes convergence, and
    boundary rates are classified divergent.
    """

    cond_3_1: ConditionCheck
    cond_3_1_prime: ConditionCheck
    cond_2_7: ConditionCheck | None
    cond_2_8: ConditionCheck | None
    cond_3_2: ConditionCheck | None
    cond_3_3: ConditionCheck | None

    def all_applicable_hold(self) -> bool:
        checks = [self.cond_3_1, self.cond_3_1_prime, self.cond_2_7,
                  self.cond_2_8, self.cond_3_2, self.cond_3_3]
        return all(c.holds for c in checks if c is not None)


def _checked(fn) -> ConditionCheck:
    try:
        return ConditionCheck(True, fn())
    except DivergenceError as err:
        return ConditionCheck(False, None, str(err))


def _max_weight_sum_left(au: RadialFunction, m: int, alpha: float) -> float:
    """sum_{k <= m} max(p^k, p^(alpha k)) |u(p^k)|.

    The max weight is p^(min(1, alpha) k) for k <= 0 and
    p^(max(1, alpha) k) for k > 0; the positive-k part of the range is
    finite and summed directly.
    """
    lo_e = min(1.0, alpha)
    total = weighted_sum_left(au, min(m, 0), lo_e)
    hi_e = max(1.0, alpha)
    for k in range(1, m + 1):
        total += p_pow(au.p, hi_e * k) * au.value_at(k)
    return total


def _abs_level_sum_left(au: RadialFunction, m: int) -> float:
    """sum_{k <= m} |k| p^k |u(p^k)|."""
    total = -level_weighted_sum_left(au, min(m, 0), 1.0)
    for k in range(1, m + 1):
        total += k * p_pow(au.p, k) * au.value_at(k)
    return total


def _abs_level_sum_right(au: RadialFunction, m: int) -> float:
    """sum_{l >= m} |l| |u(p^l)|."""
    total = level_weighted_sum_right(au, max(m, 0), 0.0)
    for k in range(m, 0):
        total += -k * au.value_at(k)
    return total


def check_summability(u: RadialFunction, alpha: float, m: int) -> SummabilityReport:
    """Evaluate the convergence conditions for u at split level m."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    au = u.absolute()
    cond_3_1 = _checked(lambda: weighted_sum_left(au, m, 1.0))
    cond_3_1_prime = _checked(lambda: weighted_sum_right(au, m, -alpha))
    cond_2_7 = cond_2_8 = cond_3_2 = cond_3_3 = None
    if alpha == 1.0:
        cond_2_8 = _checked(lambda: _abs_level_sum_left(au, m))
        right = _checked(lambda: _abs_level_sum_right(au, m))
        if cond_2_8.holds and right.holds:
            cond_3_3 = ConditionCheck(True, cond_2_8.bound + right.bound)
        else:
            bad = cond_2_8 if not cond_2_8.holds else right
            cond_3_3 = ConditionCheck(False, None, bad.detail)
    else:
        cond_2_7 = _checked(lambda: _max_weight_sum_left(au, m, alpha))
        right = _checked(lambda: weighted_sum_right(au, m, 0.0))
        if cond_2_7.holds and right.holds:
            cond_3_2 = ConditionCheck(True, cond_2_7.bound + right.bound)
        else:
            bad = cond_2_7 if not cond_2_7.holds else right
            cond_3_2 = ConditionCheck(False, None, bad.detail)
    return SummabilityReport(cond_3_1, cond_3_1_prime, cond_2_7, cond_2_8, cond_3_2, cond_3_3)


# -- serialization ----------------------------------------------------------
#
# Line-oriented text format: a header
#     p k_min k_max u0 left_tail right_tail
# followed by one "k value" pair per window level.

def dump_radial(u: RadialFunction) -> str:
    lines = [
        f"{int(u.p)} {u.k_min} {u.k_max} {u.value_at_zero!r} "
        f"{u.left_tail.to_token()} {u.right_tail.to_token()}"
    ]
    for i, v in enumerate(u.values):
        lines.append(f"{u.k_min + i} {v!r}")
    return "\n".join(lines) + "\n"


def load_radial(text: str) -> RadialFunction:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise DomainError("empty radial function file")
    head = lines[0].split()
    if len(head) != 6:
        raise DomainError(
            f"line 1: header needs 'p k_min k_max u0 left_tail right_tail', got {lines[0]!r}"
        )
    try:
        p, k_min, k_max = int(head[0]), int(head[1]), int(head[2])
        u0 = float(head[3])
    except ValueError as err:
        raise DomainError(f"line 1: {err}") from err
    left = TailModel.from_token(head[4])
    right = TailModel.from_token(head[5])
    values = {}
    for idx, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise DomainError(f"line {idx}: expected 'k value', got {ln!r}")
        try:
            values[int(parts[0])] = float(parts[1])
        except ValueError as err:
            raise DomainError(f"line {idx}: {err}") from err
    missing = [k for k in range(k_min, k_max + 1) if k not in values]
    if missing:
        raise DomainError(f"missing values for levels {missing}")
    return RadialFunction(
        p, k_min, k_max, tuple(values[k] for k in range(k_min, k_max + 1)),
        left_tail=left, right_tail=right, value_at_zero=u0,
    )
