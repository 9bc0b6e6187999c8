"""Exact evaluation of the periodized wavelet G and its dyadic dilates.

G(x) = sum_p psi(x - p K) is the K-periodic extension of a wavelet
supported on [0, K]; on one period it coincides with psi.  Arguments of
the form 2^j x - p appear at scales j in the thousands, far beyond
floating-point range, so positions are carried as exact dyadic
rationals (arbitrary-precision integer numerator over a power of two)
and reduced modulo K with integer arithmetic before the grid lookup.

Schedule radii shrink like 2^(-N(d)) where the window length N(d) grows
beyond 10^3 already at dimension 2; those radii are therefore stored in
log2 form rather than as (subnormal or underflowed) floats.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import log2

from .analysis import ZeroSet
from .cascade import SampledFunction
from .errors import DimensionMismatch, HorizonOverflow

# Interpolation weights only need float accuracy: 52 fractional bits.
_FRAC_BITS = 52

# Cap on exact schedule integers: the next window length would need
# about 2^N(d-1) bits, which stops being materializable around here.
_MAX_SCHEDULE_BITS = 1 << 31


class DyadicRational:
    """Exact dyadic rational numerator / 2^exponent.

    Canonical form: exponent >= 0 and numerator odd whenever the
    exponent is positive (zero is stored as 0/2^0).  Values are
    immutable and hashable.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        else:
            while exp > 0 and num % 2 == 0:
                num //= 2
                exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    @classmethod
    def from_float(cls, x: float) -> "DyadicRational":
        """Exact conversion (every finite binary64 is a dyadic rational)."""
        mantissa, denominator = float(x).as_integer_ratio()
        return cls(mantissa, denominator.bit_length() - 1)

    def __float__(self) -> float:
        if self.exp <= 1023:
            return self.num / (1 << self.exp)
        shift = self.exp - _FRAC_BITS
        return (self.num >> shift if shift > 0 else self.num) * 2.0 ** -min(
            self.exp, _FRAC_BITS
        )

    def scaled(self, j: int) -> "DyadicRational":
        """Exact value * 2^j (j may be negative)."""
        return DyadicRational(self.num, self.exp - j)

    def reduce_mod(self, k: int) -> "DyadicRational":
        """Exact representative of value mod k in [0, k)."""
        return DyadicRational(self.num % (k << self.exp), self.exp)

    def __add__(self, other):
        other = _coerce(other)
        e = max(self.exp, other.exp)
        return DyadicRational(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    def __sub__(self, other):
        other = _coerce(other)
        e = max(self.exp, other.exp)
        return DyadicRational(
            (self.num << (e - self.exp)) - (other.num << (e - other.exp)), e
        )

    def __neg__(self):
        return DyadicRational(-self.num, self.exp)

    def __eq__(self, other):
        if not isinstance(other, (DyadicRational, int)):
            return NotImplemented
        other = _coerce(other)
        return self.num == other.num and self.exp == other.exp

    def __lt__(self, other):
        diff = self - _coerce(other)
        return diff.num < 0

    def __le__(self, other):
        diff = self - _coerce(other)
        return diff.num <= 0

    def __hash__(self):
        return hash((self.num, self.exp))

    def __repr__(self):
        return f"DyadicRational({self.num}, {self.exp})"


def _coerce(x) -> DyadicRational:
    if isinstance(x, DyadicRational):
        return x
    if isinstance(x, int):
        return DyadicRational(x, 0)
    raise TypeError(f"cannot coerce {type(x).__name__} to DyadicRational")


def G_eval(psi: SampledFunction, x: DyadicRational) -> float:
    """G(x): exact reduction of x modulo the period, then grid lookup,
    or linear interpolation when x is finer than the grid."""
    k_max = psi.support_k
    n = psi.level_n
    reduced = x.reduce_mod(k_max)
    num, exp = reduced.num, reduced.exp
    if exp <= n:
        return float(psi.values[num << (n - exp)])
    shift = exp - n
    i = num >> shift
    rem = num - (i << shift)
    if shift <= _FRAC_BITS:
        t = rem / (1 << shift)
    else:
        t = (rem >> (shift - _FRAC_BITS)) / (1 << _FRAC_BITS)
    return float((1.0 - t) * psi.values[i] + t * psi.values[i + 1])


def G1_eval(psi: SampledFunction, j: int, p: int, x: DyadicRational) -> float:
    """G(2^j x - p); the scale j may exceed float range, arithmetic is exact."""
    if x.exp >= j:
        arg = DyadicRational(x.num - (p << (x.exp - j)), x.exp - j)
    else:
        arg = DyadicRational((x.num << (j - x.exp)) - p, 0)
    return G_eval(psi, arg)


def Gd_eval(
    psi: SampledFunction,
    j: int,
    p_bar: tuple[int, ...],
    x: tuple[DyadicRational, ...],
) -> float:
    """Tensor product prod_i G(2^j x_i - p_i)."""
    if len(p_bar) != len(x):
        raise DimensionMismatch(f"{len(p_bar)} translates vs {len(x)} coordinates")
    out = 1.0
    for p, xi in zip(p_bar, x):
        out *= G1_eval(psi, j, p, xi)
    return out


def zeros_at_scale(
    zs: ZeroSet, j: int, p: int, interval: tuple[float, float]
) -> list[float]:
    """All zeros of G(2^j x - p) inside [a, b]: the points
    2^-j (k K + p + z) for detected zeros z and integers k."""
    a, b = interval
    k_max = round(zs.zeros[-1])
    scale = 2.0**j
    out: set[float] = set()
    k_lo = int((a * scale - p - k_max) // k_max) - 1
    k_hi = int((b * scale - p) // k_max) + 2
    for k in range(k_lo, k_hi + 1):
        for z in zs.zeros:
            point = (k * k_max + p + z) / scale
            if a <= point <= b:
                out.add(point)
    return sorted(out)


@dataclass(frozen=True)
class ScheduleParams:
    """Derived constants of the translate-schedule construction.

    schedule[i] is the window length N(i+1); window lengths follow
    N(1) = 2(N+1), N(d) = 2 (N(d-1)+1)^d 2^(N(d-1)).  The ball radius
    omega = min(eps_d, eps_prime_d) with

        eps_d       = eta / (2^(N(d)+1) M_G)
        eps_prime_d = min zero gap / (4 * 2^N(d))

    is kept in log2 (it underflows binary64 beyond dimension 1), and so
    are the derived lower-bound constants alpha_tilde (minimum of |G|
    off the omega-neighborhood of the zeros) and
    alpha = min(eta/2, alpha_tilde); the float fields hold 2^log2,
    which may round to 0 at extreme depths.
    """

    zero_count: int
    zeros: tuple[float, ...]
    schedule: tuple[int, ...]
    eta: float
    m_g: float
    eps_d_log2: float
    eps_prime_log2: float
    omega_log2: float
    alpha_tilde: float
    alpha: float
    alpha_tilde_log2: float
    alpha_log2: float

    @property
    def dimension(self) -> int:
        return len(self.schedule)

    @property
    def window(self) -> int:
        """N(d) for the ambient dimension."""
        return self.schedule[-1]

    def omega_hat(self) -> DyadicRational:
        """Largest power of two not exceeding omega; exactly representable."""
        from math import floor

        return DyadicRational(1, -floor(self.omega_log2))


def schedule_lengths(zero_count: int, d: int) -> tuple[int, ...]:
    """Window lengths N(1..d) as exact integers."""
    if zero_count < 2:
        raise ValueError("need at least the two endpoint zeros")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    out = [2 * (zero_count + 1)]
    for dim in range(2, d + 1):
        prev = out[-1]
        if prev > _MAX_SCHEDULE_BITS:
            raise HorizonOverflow(
                f"window length N({dim}) needs ~2^{prev} bits; "
                "not materializable as an exact integer"
            )
        out.append(2 * (prev + 1) ** dim * 2**prev)
    return tuple(out)


def schedule_params(
    zs: ZeroSet,
    eta: float,
    m_g: float,
    alpha_tilde: float,
    d: int,
    alpha_tilde_log2: float | None = None,
) -> ScheduleParams:
    """Fill all schedule constants for ambient dimension d.

    alpha_tilde is the caller's lower-bound estimate of |G| away from
    the zeros (see analysis.estimate_alpha_tilde); pass its log2 when
    the float form underflows.
    """
    if zs.count < 2:
        raise ValueError("zero set must contain the endpoints")
    if eta <= 0 or m_g <= 0:
        raise ValueError("eta and m_g must be positive")
    schedule = schedule_lengths(zs.count, d)
    window = schedule[-1]
    eps_log2 = log2(eta) - (window + 1) - log2(m_g)
    eps_prime_log2 = log2(zs.min_gap) - 2 - window
    omega_log2 = min(eps_log2, eps_prime_log2)
    if alpha_tilde_log2 is None:
        if alpha_tilde <= 0:
            raise ValueError("alpha_tilde must be positive (or pass its log2)")
        alpha_tilde_log2 = log2(alpha_tilde)
    alpha_log2 = min(log2(eta / 2), alpha_tilde_log2)
    return ScheduleParams(
        zero_count=zs.count,
        zeros=zs.zeros,
        schedule=schedule,
        eta=eta,
        m_g=m_g,
        eps_d_log2=eps_log2,
        eps_prime_log2=eps_prime_log2,
        omega_log2=omega_log2,
        alpha_tilde=_exp2_or_zero(alpha_tilde_log2),
        alpha=_exp2_or_zero(alpha_log2),
        alpha_tilde_log2=alpha_tilde_log2,
        alpha_log2=alpha_log2,
    )


def _exp2_or_zero(x_log2: float) -> float:
    if x_log2 < -1074:
        return 0.0
    return 2.0**x_log2


def with_alpha(
    params: ScheduleParams, alpha_tilde_log2: float
) -> ScheduleParams:
    """Copy of params with the alpha constants replaced."""
    alpha_log2 = min(log2(params.eta / 2), alpha_tilde_log2)
    return replace(
        params,
        alpha_tilde=_exp2_or_zero(alpha_tilde_log2),
        alpha=_exp2_or_zero(alpha_log2),
        alpha_tilde_log2=alpha_tilde_log2,
        alpha_log2=alpha_log2,
    )
