"""Time-domain single-diode rectifier simulation with an RC load.

This is the model-free validation path: no Taylor truncation, just the
exponential diode law integrated through time under ideal matching, where
the rectifier input voltage is the received signal scaled by the antenna
resistance,  v_in(t) = y(t) * sqrt(R_ant).  The integrator is an implicit
trapezoidal rule (A-stable, second order) with a damped scalar Newton
solve per step, vectorized over a batch of independent instances so that
Monte Carlo ensembles of rectifier runs stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelRealization, FrequencyGrid
from .rectenna import DiodeParams, Waveform, received_tone_coefficients

_EXP_CLIP = 200.0  # caps the diode exponent; far above any modeled drive


@dataclass(frozen=True)
class CircuitParams:
    """Diode constants plus the output smoothing capacitor and DC load."""

    diode: DiodeParams = DiodeParams()
    c_out: float = 100e-12
    r_load: float | None = None  # defaults to the diode's DC load

    def __post_init__(self):
        if self.c_out <= 0:
            raise ValueError("c_out must be positive")
        if self.r_load is not None and self.r_load <= 0:
            raise ValueError("r_load must be positive")

    @property
    def load(self) -> float:
        return self.diode.r_load if self.r_load is None else self.r_load


@dataclass
class SimTrace:
    """Stored (possibly decimated) trajectories plus per-period summaries."""

    time: np.ndarray
    v_in: np.ndarray
    v_out: np.ndarray
    i_d: np.ndarray
    period_mean_vout: np.ndarray
    steady: bool
    dt: float
    store_every: int
    load: float


class SteadyStateError(RuntimeError):
    """Raised when a quantity requires steady state that was not reached."""


def _default_dt(grid: FrequencyGrid, circuit: CircuitParams) -> float:
    """min(1/(200 f_max), R_L C/50): resolves the carrier and the RC pole."""
    f_max = grid.frequencies[-1]
    rc_step = circuit.load * circuit.c_out / 50.0
    if f_max <= 0:  # constant drive: only the RC pole sets the scale
        return rc_step
    return min(1.0 / (200.0 * f_max), rc_step)


def _diode_current(v_drop: np.ndarray, d: DiodeParams) -> np.ndarray:
    arg = np.clip(v_drop / (d.ideality * d.v_t), None, _EXP_CLIP)
    return d.i_s * np.expm1(arg)


def _advance_period(v: np.ndarray, tones: np.ndarray, omegas: np.ndarray,
                    t0: float, dt: float, steps: int, circuit: CircuitParams,
                    sqrt_rant: float, collect: bool):
    """Integrate one waveform period for a batch of instances.

    Returns the end state, the trapezoid-weighted period mean of v_out per
    instance and, when `collect` is set, the full per-step (v_in, v_out)
    arrays for trace storage.
    """
    d = circuit.diode
    r_load = circuit.load
    nvt = d.ideality * d.v_t
    half = dt / (2.0 * circuit.c_out)
    batch = v.shape[0]

    mean_acc = 0.5 * v.copy()
    vin_steps = np.empty((steps, batch)) if collect else None
    vout_steps = np.empty((steps, batch)) if collect else None

    carrier = np.exp(1j * omegas * t0)
    step_rot = np.exp(1j * omegas * dt)
    vin0 = sqrt_rant * np.real(tones @ carrier)
    f_prev = (_diode_current(vin0 - v, d) - v / r_load) / circuit.c_out

    for k in range(steps):
        carrier *= step_rot
        vin = sqrt_rant * np.real(tones @ carrier)
        rhs = v + (dt / 2.0) * f_prev
        v_new = v.copy()
        # damped Newton on the trapezoidal update; the residual is strictly
        # increasing in v_new, so clipped steps cannot overshoot forever
        for _ in range(60):
            drop = np.clip((vin - v_new) / nvt, None, _EXP_CLIP)
            expv = np.exp(drop)
            g = v_new - rhs - half * (d.i_s * (expv - 1.0) - v_new / r_load)
            gp = 1.0 + half * (d.i_s * expv / nvt + 1.0 / r_load)
            delta = g / gp
            np.clip(delta, -0.2, 0.2, out=delta)
            v_new -= delta
            if np.max(np.abs(delta)) <= 1e-14 * max(1e-3, float(np.max(np.abs(v_new)))):
                break
        v = v_new
        f_prev = (_diode_current(vin - v, d) - v / r_load) / circuit.c_out
        weight = 0.5 if k == steps - 1 else 1.0
        mean_acc += weight * v
        if collect:
            vin_steps[k] = vin
            vout_steps[k] = v
    return v, mean_acc / steps, vin_steps, vout_steps


def _run_to_steady(tones: np.ndarray, grid: FrequencyGrid,
                   circuit: CircuitParams, steady_tol: float,
                   max_periods: int, dt: float | None,
                   collect_last: bool):
    grid.carrier_multiple()  # commensurate grid required for periodicity
    if dt is None:
        dt = _default_dt(grid, circuit)
    steps = max(int(math.ceil(grid.period / dt)), 8)
    dt = grid.period / steps
    sqrt_rant = math.sqrt(circuit.diode.r_ant)
    batch = tones.shape[0]
    v = np.zeros(batch)
    means = []
    steady = False
    t0 = 0.0
    for period in range(max_periods):
        v, mean, vin_s, vout_s = _advance_period(
            v, tones, grid.omegas, t0, dt, steps, circuit, sqrt_rant,
            collect=False)
        means.append(mean)
        t0 += grid.period
        if period > 0:
            prev = means[-2]
            scale = np.maximum(np.abs(mean), 1e-15)
            if np.all(np.abs(mean - prev) <= steady_tol * scale):
                steady = True
                break
    trace_data = None
    if collect_last:
        v_trace, mean, vin_s, vout_s = _advance_period(
            v, tones, grid.omegas, t0, dt, steps, circuit, sqrt_rant,
            collect=True)
        means.append(mean)
        trace_data = (t0, vin_s, vout_s)
        v = v_trace
    return v, np.column_stack(means), steady, dt, steps, trace_data


def simulate(waveform: Waveform, channel: ChannelRealization,
             circuit: CircuitParams, steady_tol: float = 1e-6,
             max_periods: int = 200, dt: float | None = None,
             store_every: int | None = None) -> SimTrace:
    """Drive the rectifier with the received multisine until steady state.

    Runs whole waveform periods, watching the per-period mean output
    voltage; once consecutive periods agree to `steady_tol` (relative) one
    more period is integrated and stored as the trace.  A hit period cap
    is flagged on the trace, never silently ignored.
    """
    r = received_tone_coefficients(waveform, channel)
    v, means, steady, dt, steps, trace_data = _run_to_steady(
        r[None, :], waveform.grid, circuit, steady_tol, max_periods, dt,
        collect_last=True)
    t0, vin_s, vout_s = trace_data
    if store_every is None:
        store_every = max(1, steps // 4096)
    idx = np.arange(0, steps, store_every)
    t = t0 + (idx + 1) * dt
    v_in = vin_s[idx, 0]
    v_out = vout_s[idx, 0]
    i_d = _diode_current(v_in - v_out, circuit.diode)
    return SimTrace(time=t, v_in=v_in, v_out=v_out, i_d=i_d,
                    period_mean_vout=means[0], steady=steady, dt=dt,
                    store_every=store_every, load=circuit.load)


def simulate_ensemble(tone_rows: np.ndarray, grid: FrequencyGrid,
                      circuit: CircuitParams, steady_tol: float = 1e-6,
                      max_periods: int = 200,
                      dt: float | None = None) -> tuple[np.ndarray, bool]:
    """Steady-state DC output power for a batch of received-tone rows.

    Memory-light companion to `simulate`: only per-period means are kept.
    Returns (power array, all-steady flag).
    """
    v, means, steady, _, _, _ = _run_to_steady(
        np.asarray(tone_rows, dtype=complex), grid, circuit, steady_tol,
        max_periods, dt, collect_last=False)
    return means[:, -1] ** 2 / circuit.load, steady


def dc_operating_point(v_source: float, circuit: CircuitParams) -> float:
    """Algebraic steady state for a DC drive: diode current equals load current.

    Solves i_s*(exp((V - v)/(n*v_t)) - 1) = v/R_L by bracketed root
    finding; the left side falls and the right side grows in v, so the
    root is unique.  Residual is polished below 1e-14 A.
    """
    d = circuit.diode
    r_load = circuit.load
    nvt = d.ideality * d.v_t
    if v_source == 0.0:
        return 0.0

    def f(v):
        return d.i_s * math.expm1(min((v_source - v) / nvt, _EXP_CLIP)) \
            - v / r_load

    lo = -d.i_s * r_load
    hi = max(v_source, 0.0) + 1e-9
    root = brentq(f, lo, hi, rtol=4 * np.finfo(float).eps)
    for _ in range(2):
        drop = (v_source - root) / nvt
        deriv = -d.i_s * math.exp(min(drop, _EXP_CLIP)) / nvt - 1.0 / r_load
        root -= f(root) / deriv
    return float(root)


def harvested_dc_power(trace: SimTrace) -> float:
    """Mean output voltage over the final period, squared, over the load."""
    if not trace.steady:
        raise SteadyStateError("steady state not reached; rerun with a "
                               "higher period cap")
    mean_v = float(trace.period_mean_vout[-1])
    return mean_v ** 2 / trace.load


def export_trace_csv(trace: SimTrace, path, decimation: int = 1,
                     header_comment: str | None = None) -> None:
    """CSV dump of (t, v_in, v_out, i_d), optionally decimated further."""
    if decimation < 1:
        raise ValueError("decimation must be >= 1")
    with open(path, "w") as f:
        if header_comment:
            f.write(f"# {header_comment}\n")
        f.write("t_s,v_in_v,v_out_v,i_d_a\n")
        for k in range(0, trace.time.size, decimation):
            f.write(f"{trace.time[k]:.17g},{trace.v_in[k]:.17g},"
                    f"{trace.v_out[k]:.17g},{trace.i_d[k]:.17g}\n")
