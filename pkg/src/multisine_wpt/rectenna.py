"""Truncated-Taylor rectenna model and multisine waveform bookkeeping.

The rectifying diode's exponential I-V curve, expanded around the output
operating point, makes the rectified DC current monotonically related to

    z_dc = sum over even orders i of  k_i * R_ant^(i/2) * time-avg(y^i)

where ``y(t)`` is the RF signal at the rectenna input and the ``k_i`` are
positive constants of the diode.  Everything the optimizers need lives
here: the analytic per-order DC terms, a brute-force time-averaging oracle
for them, the fixed-point recovery of the DC output current, PAPR, and the
posynomial/signomial views of z_dc used by the geometric-programming
machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelRealization, FrequencyGrid
from .gp import Monomial, Posynomial, Signomial

_POWER_FEAS_RTOL = 1e-9

# combinatorial prefactors of the DC component of y^i for i = 2, 4, 6
_DC_PREFACTOR = {2: 0.5, 4: 3.0 / 8.0, 6: 5.0 / 16.0}

SUPPORTED_ORDERS = (2, 4, 6)


@dataclass(frozen=True)
class DiodeParams:
    """Schottky diode constants plus antenna and load resistances."""

    i_s: float = 5e-6          # reverse-bias saturation current [A]
    ideality: float = 1.05
    v_t: float = 25.86e-3      # thermal voltage [V]
    r_ant: float = 50.0        # antenna resistance [ohm]
    r_load: float = 1600.0     # DC load [ohm]

    def __post_init__(self):
        for name in ("i_s", "ideality", "v_t", "r_ant", "r_load"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


def taylor_coefficients(diode: DiodeParams, truncation_order: int) -> np.ndarray:
    """Diode curvature constants k_i = i_s / (i! * (ideality*v_t)^i).

    Returned for even i = 2, 4, ..., truncation_order (odd orders average
    to zero and never enter the DC budget).
    """
    if truncation_order < 2 or truncation_order % 2 != 0:
        raise ValueError("truncation order must be an even integer >= 2")
    nvt = diode.ideality * diode.v_t
    orders = range(2, truncation_order + 1, 2)
    return np.array([diode.i_s / (math.factorial(i) * nvt ** i) for i in orders])


@dataclass(frozen=True)
class RectennaParams:
    """Diode constants plus the Taylor truncation order (2, 4 or 6)."""

    diode: DiodeParams = DiodeParams()
    truncation_order: int = 4

    def __post_init__(self):
        if self.truncation_order not in SUPPORTED_ORDERS:
            raise ValueError(f"truncation order must be one of {SUPPORTED_ORDERS}")

    @property
    def k(self) -> np.ndarray:
        """k_i for even i up to the truncation order, recomputed on demand."""
        return taylor_coefficients(self.diode, self.truncation_order)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(range(2, self.truncation_order + 1, 2))


@dataclass(frozen=True)
class Waveform:
    """Multisine design variable: amplitudes S and phases Phi, both (N, M)."""

    amplitudes: np.ndarray
    phases: np.ndarray
    grid: FrequencyGrid
    power_budget: float | None = None

    def __post_init__(self):
        s = np.asarray(self.amplitudes, dtype=float)
        phi = np.asarray(self.phases, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        if phi.ndim == 1:
            phi = phi[:, None]
        if s.shape != phi.shape or s.ndim != 2:
            raise ValueError("amplitudes and phases must share shape (N, M)")
        if s.shape[0] != self.grid.n_tones:
            raise ValueError("amplitude rows must match the tone count")
        if np.any(s < 0) or not np.all(np.isfinite(s)) or not np.all(np.isfinite(phi)):
            raise ValueError("amplitudes must be finite and nonnegative, phases finite")
        object.__setattr__(self, "amplitudes", s)
        object.__setattr__(self, "phases", phi)
        if self.power_budget is not None:
            p = self.transmit_power
            if p > self.power_budget * (1.0 + _POWER_FEAS_RTOL):
                raise ValueError(
                    f"transmit power {p} exceeds budget {self.power_budget}")

    @property
    def n_tones(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def weights(self) -> np.ndarray:
        """Complex per-tone/antenna weights s*exp(j*phi)."""
        return self.amplitudes * np.exp(1j * self.phases)

    @property
    def transmit_power(self) -> float:
        return 0.5 * float(np.sum(self.amplitudes ** 2))


def received_tone_coefficients(waveform: Waveform,
                               channel: ChannelRealization) -> np.ndarray:
    """Complex amplitude of each received tone: r_n = h_n . w_n."""
    h = channel.require_single_rectenna()
    w = waveform.weights
    if h.shape != w.shape:
        raise ValueError(f"channel {h.shape} and waveform {w.shape} differ")
    return np.einsum("nm,nm->n", h, w)


def _dc_moments_from_tones(r: np.ndarray, truncation_order: int) -> dict[int, float]:
    """Exact DC component of y(t)^i for even i, from the tone coefficients.

    The equal-sum index constraints (n0+n1 = n2+n3, ...) collapse into
    norms of repeated self-convolutions of r: the order-4 sum equals
    sum_sigma |(r*r)_sigma|^2 and the order-6 sum equals
    sum_sigma |(r*r*r)_sigma|^2, which sidesteps the O(N^3)/O(N^5) tuple
    enumeration kept in the posynomial view.
    """
    moments = {2: 0.5 * float(np.sum(np.abs(r) ** 2))}
    if truncation_order >= 4:
        c2 = np.convolve(r, r)
        moments[4] = _DC_PREFACTOR[4] * float(np.sum(np.abs(c2) ** 2))
    if truncation_order >= 6:
        c3 = np.convolve(c2, r)
        moments[6] = _DC_PREFACTOR[6] * float(np.sum(np.abs(c3) ** 2))
    return moments


def zdc_analytic(waveform: Waveform, channel: ChannelRealization,
                 params: RectennaParams) -> float:
    """Rectified-DC surrogate z_dc for a waveform over a channel."""
    r = received_tone_coefficients(waveform, channel)
    moments = _dc_moments_from_tones(r, params.truncation_order)
    r_ant = params.diode.r_ant
    return float(sum(k * r_ant ** (i / 2) * moments[i]
                     for i, k in zip(params.orders, params.k)))


def received_signal(waveform: Waveform, channel: ChannelRealization,
                    t: np.ndarray) -> np.ndarray:
    """RF signal y(t) at the rectenna input on an arbitrary time grid."""
    r = received_tone_coefficients(waveform, channel)
    t = np.asarray(t, dtype=float)
    phases = np.outer(t, waveform.grid.omegas)
    return np.real(np.exp(1j * phases) @ r)


def zdc_time_average(waveform: Waveform, channel: ChannelRealization,
                     params: RectennaParams, oversample: int = 16) -> float:
    """Independent z_dc oracle: synthesize y(t) and average its powers.

    Requires a commensurate grid (f0 an integer multiple of the spacing) so
    that y is periodic.  The sample count exceeds the highest harmonic of
    y^i by a wide margin, making each trigonometric average exact up to
    rounding.
    """
    grid = waveform.grid
    carrier = grid.carrier_multiple()
    n_o = params.truncation_order
    n_samples = oversample * n_o * (carrier + grid.n_tones)
    t = np.arange(n_samples) * (grid.period / n_samples)
    y = received_signal(waveform, channel, t)
    r_ant = params.diode.r_ant
    total = 0.0
    for i, k in zip(params.orders, params.k):
        total += k * r_ant ** (i / 2) * float(np.mean(y ** i))
    return total


def iout_fixed_point(zdc_value: float, params: RectennaParams) -> float:
    """DC output current solving exp(R_L*i/(n*v_t))*(i + i_s) = i_s + z_dc.

    The left side is strictly increasing in i, so the root is unique;
    solved in log form to dodge exponential overflow, then polished to a
    residual below 1e-12 relative.
    """
    if zdc_value < 0:
        raise ValueError("zdc_value must be nonnegative")
    if zdc_value == 0.0:
        return 0.0
    d = params.diode
    nvt = d.ideality * d.v_t
    rhs = math.log(d.i_s + zdc_value)

    def g(i):
        return d.r_load * i / nvt + math.log(i + d.i_s) - rhs

    hi = nvt / d.r_load
    while g(hi) < 0:
        hi *= 2.0
    root = brentq(g, 0.0, hi, rtol=4 * np.finfo(float).eps)
    for _ in range(2):  # Newton polish on the log-form residual
        root -= g(root) / (d.r_load / nvt + 1.0 / (root + d.i_s))
    return float(root)


def synthesize_transmit(waveform: Waveform, antenna: int,
                        t: np.ndarray) -> np.ndarray:
    """Transmit signal x_m(t) = sum_n s_{n,m} cos(w_n t + phi_{n,m})."""
    t = np.asarray(t, dtype=float)
    s = waveform.amplitudes[:, antenna]
    phi = waveform.phases[:, antenna]
    return np.cos(np.outer(t, waveform.grid.omegas) + phi) @ s


def papr_sample_times(grid: FrequencyGrid, oversampling: int) -> np.ndarray:
    """Uniform grid t_q = q*T/(N*Os) over one envelope period."""
    q = np.arange(grid.n_tones * oversampling)
    return q * (grid.period / (grid.n_tones * oversampling))


def papr(waveform: Waveform, antenna: int, oversampling: int = 8) -> float:
    """Sampled peak-to-average power ratio of one antenna's transmit signal."""
    s = waveform.amplitudes[:, antenna]
    mean_power = 0.5 * float(s @ s)
    if mean_power == 0.0:
        raise ValueError(f"antenna {antenna} transmits no power")
    x = synthesize_transmit(waveform, antenna,
                            papr_sample_times(waveform.grid, oversampling))
    return float(np.max(x ** 2) / mean_power)


# ---------------------------------------------------------------------------
# index-set enumeration and the posynomial/signomial views
# ---------------------------------------------------------------------------

def quartic_tuples(n_tones: int):
    """Ordered (n0, n1, n2, n3) with n0 + n1 == n2 + n3."""
    for n0 in range(n_tones):
        for n1 in range(n_tones):
            total = n0 + n1
            for n2 in range(max(0, total - n_tones + 1), min(n_tones, total + 1)):
                yield n0, n1, n2, total - n2


def _triples_by_sum(n_tones: int) -> dict[int, list[tuple[int, int, int]]]:
    groups: dict[int, list[tuple[int, int, int]]] = {}
    for a in range(n_tones):
        for b in range(n_tones):
            for c in range(n_tones):
                groups.setdefault(a + b + c, []).append((a, b, c))
    return groups


def sextic_tuples(n_tones: int):
    """Ordered (n0..n5) with n0 + n1 + n2 == n3 + n4 + n5."""
    groups = _triples_by_sum(n_tones)
    for triples in groups.values():
        for left in triples:
            for right in triples:
                yield left + right


def quartic_tuple_count(n_tones: int) -> int:
    """Cardinality N*(2N^2 + 1)/3 of the order-4 index set."""
    return n_tones * (2 * n_tones ** 2 + 1) // 3


def _posynomial_from_amplitudes(amps: np.ndarray,
                                params: RectennaParams) -> Posynomial:
    """z_dc as an explicit posynomial in the amplitudes, phases aligned.

    One monomial per (tone-tuple, antenna-tuple) pair, so term counts match
    the index-set cardinalities: N*M^2 at order 2, N(2N^2+1)/3 * M^4 at
    order 4 and correspondingly more at order 6.  Terms whose channel
    amplitude product vanishes are dropped (the variable never contributes).
    """
    n, m = amps.shape
    r_ant = params.diode.r_ant
    k = dict(zip(params.orders, params.k))
    coeffs: list[float] = []
    rows: list[np.ndarray] = []

    def add(order, tone_idx, ant_idx):
        c = k[order] * r_ant ** (order / 2) * _DC_PREFACTOR[order]
        e = np.zeros(n * m)
        for nj, mj in zip(tone_idx, ant_idx):
            c *= amps[nj, mj]
            e[nj * m + mj] += 1.0
        if c > 0.0:
            coeffs.append(c)
            rows.append(e)

    for tone in range(n):
        for ants in product(range(m), repeat=2):
            add(2, (tone, tone), ants)
    if params.truncation_order >= 4:
        for tones in quartic_tuples(n):
            for ants in product(range(m), repeat=4):
                add(4, tones, ants)
    if params.truncation_order >= 6:
        for tones in sextic_tuples(n):
            for ants in product(range(m), repeat=6):
                add(6, tones, ants)
    if not coeffs:
        raise ValueError("channel has no usable gain (all amplitudes zero)")
    return Posynomial(np.array(coeffs), np.vstack(rows))


def zdc_posynomial(channel: ChannelRealization,
                   params: RectennaParams) -> Posynomial:
    """z_dc(S, Phi*) as a posynomial over the N*M amplitudes.

    With the phase-aligned choice Phi* every cosine in the DC terms equals
    one, leaving positive coefficients only.  Variable j = n*M + m is the
    amplitude of tone n on antenna m.
    """
    h = channel.require_single_rectenna()
    return _posynomial_from_amplitudes(np.abs(h), params)


def weighted_sum_signomial(channels, weights, params: RectennaParams,
                           phases: np.ndarray) -> Signomial:
    """Weighted multi-rectenna DC sum as a signomial at fixed phases.

    For a phase matrix that cannot align every rectenna simultaneously the
    cosines take either sign; positive-coefficient terms land in f1 and
    negative ones in f2 (value = f1 - f2).  Variables are indexed as in
    `zdc_posynomial`.
    """
    channels = [c.require_single_rectenna() if isinstance(c, ChannelRealization)
                else np.asarray(c, dtype=complex) for c in channels]
    weights = np.asarray(weights, dtype=float)
    if weights.size != len(channels):
        raise ValueError("one weight per rectenna required")
    if np.any(weights < 0) or not np.any(weights > 0):
        raise ValueError("weights must be nonnegative, not all zero")
    n, m = channels[0].shape
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (n, m):
        raise ValueError("phase matrix must be (N, M)")
    r_ant = params.diode.r_ant
    k = dict(zip(params.orders, params.k))

    pos_c: list[float] = []
    pos_e: list[np.ndarray] = []
    neg_c: list[float] = []
    neg_e: list[np.ndarray] = []

    def add(weight, order, tone_idx, ant_idx, amps, psi):
        c = weight * k[order] * r_ant ** (order / 2) * _DC_PREFACTOR[order]
        e = np.zeros(n * m)
        arg = 0.0
        half = order // 2
        for j, (nj, mj) in enumerate(zip(tone_idx, ant_idx)):
            c *= amps[nj, mj]
            e[nj * m + mj] += 1.0
            arg += psi[nj, mj] if j < half else -psi[nj, mj]
        c *= math.cos(arg)
        if c > 0.0:
            pos_c.append(c)
            pos_e.append(e)
        elif c < 0.0:
            neg_c.append(-c)
            neg_e.append(e)

    for h_u, v_u in zip(channels, weights):
        if v_u == 0.0:
            continue
        amps = np.abs(h_u)
        psi = phases + np.angle(h_u)
        for tone in range(n):
            for ants in product(range(m), repeat=2):
                add(v_u, 2, (tone, tone), ants, amps, psi)
        if params.truncation_order >= 4:
            for tones in quartic_tuples(n):
                for ants in product(range(m), repeat=4):
                    add(v_u, 4, tones, ants, amps, psi)
        if params.truncation_order >= 6:
            for tones in sextic_tuples(n):
                for ants in product(range(m), repeat=6):
                    add(v_u, 6, tones, ants, amps, psi)

    if not pos_c:
        raise ValueError("weighted DC sum has no positive part at these phases")
    positive = Posynomial(np.array(pos_c), np.vstack(pos_e))
    negative = (Posynomial(np.array(neg_c), np.vstack(neg_e))
                if neg_c else None)
    return Signomial(positive, negative)


# ---------------------------------------------------------------------------
# plain-text waveform serialization
# ---------------------------------------------------------------------------

def save_waveform_text(path, waveform: Waveform) -> None:
    """Header (N, M, f0, spacing, power budget) then per-tone (s, phi) pairs."""
    g = waveform.grid
    budget = waveform.power_budget
    budget_txt = "nan" if budget is None else f"{budget:.17g}"
    with open(path, "w") as f:
        f.write(f"# waveform {waveform.n_tones} {waveform.n_antennas} "
                f"{g.f0:.17g} {g.spacing:.17g} {budget_txt}\n")
        for s_row, p_row in zip(waveform.amplitudes, waveform.phases):
            f.write(" ".join(f"{s:.17g} {p:.17g}"
                             for s, p in zip(s_row, p_row)) + "\n")


def load_waveform_text(path) -> Waveform:
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 7 or header[:2] != ["#", "waveform"]:
            raise ValueError("not a waveform text file")
        n, m = int(header[2]), int(header[3])
        f0, spacing = float(header[4]), float(header[5])
        budget = None if header[6] == "nan" else float(header[6])
        s = np.empty((n, m))
        phi = np.empty((n, m))
        for i in range(n):
            vals = [float(tok) for tok in f.readline().split()]
            if len(vals) != 2 * m:
                raise ValueError(f"tone row {i} must carry {2 * m} numbers")
            s[i] = vals[0::2]
            phi[i] = vals[1::2]
    return Waveform(s, phi, FrequencyGrid(n, f0, spacing), power_budget=budget)
