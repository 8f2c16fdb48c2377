"""Daily scenario data: exogenous series and the stochastic EV population.

A scenario bundles one day of train demand, available regenerative braking
power, solar radiation (converted to PV output), buy/sell prices, and the
sampled car/bus charging sessions. Series are either synthesized from
config-scalable shapes or ingested from user CSVs.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

HOURS_PER_DAY = 24.0


class ScenarioError(ValueError):
    """Invalid scenario inputs (bad series, bad schedule, bad parameters)."""


class SeriesFormatError(ScenarioError):
    """CSV series that cannot be aligned to the time grid."""


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeGrid:
    """Fixed intra-day step grid with the charging lot's opening window."""
    dt_hours: float = 1.0 / 6.0
    steps_per_day: int = 144
    opening_hour: float = 6.0
    closing_hour: float = 22.0

    def __post_init__(self):
        if self.dt_hours <= 0:
            raise ScenarioError("dt_hours must be positive")
        if abs(self.steps_per_day * self.dt_hours - HOURS_PER_DAY) > 1e-9:
            raise ScenarioError("steps_per_day * dt_hours must equal 24 h")
        if not (0.0 <= self.opening_hour < self.closing_hour <= HOURS_PER_DAY):
            raise ScenarioError("opening window must lie within the day")

    @property
    def opening_step(self) -> int:
        return int(round(self.opening_hour / self.dt_hours))

    @property
    def closing_step(self) -> int:
        return int(round(self.closing_hour / self.dt_hours))

    def step_of_hour(self, hour: float) -> int:
        return int(math.floor(hour / self.dt_hours))

    def hours(self) -> np.ndarray:
        """Step midpoints in hours, used to evaluate daily shapes."""
        return (np.arange(self.steps_per_day) + 0.5) * self.dt_hours


@dataclass(frozen=True)
class PvParams:
    """Radiation-to-power curve parameters of the installed PV plant."""
    p_rated_kw: float = 1000.0
    r_c_w_m2: float = 150.0
    r_std_w_m2: float = 1000.0

    def __post_init__(self):
        if self.p_rated_kw < 0:
            raise ScenarioError("p_rated_kw must be nonnegative")
        if not (0.0 < self.r_c_w_m2 < self.r_std_w_m2):
            raise ScenarioError("require 0 < r_c < r_std")


@dataclass(frozen=True)
class EVSession:
    """One vehicle's visit: arrival/departure steps and charging needs.

    Vehicles arrive empty by convention, so ``energy_kwh`` is both the
    demanded state of charge and the energy still to deliver at arrival.
    """
    vehicle_id: str
    kind: str                  # "car" or "bus"
    arrival_step: int
    departure_step: int
    energy_kwh: float
    nominal_kw: float
    max_kw: float
    efficiency: float = 1.0

    def __post_init__(self):
        if self.arrival_step >= self.departure_step:
            raise ScenarioError(
                f"{self.vehicle_id}: arrival step must precede departure step")
        if self.energy_kwh < 0:
            raise ScenarioError(f"{self.vehicle_id}: negative energy demand")
        if not (0.0 < self.nominal_kw <= self.max_kw):
            raise ScenarioError(
                f"{self.vehicle_id}: require 0 < nominal_kw <= max_kw")
        if not (0.0 < self.efficiency <= 1.0):
            raise ScenarioError(f"{self.vehicle_id}: efficiency outside (0, 1]")

    def fulfillment_step(self, dt_hours: float) -> int:
        """First step by which nominal-rate charging from arrival finishes.

        Fractional step counts round up so the satisfaction trajectory is
        attainable at the returned step.
        """
        steps = self.energy_kwh / (self.efficiency * self.nominal_kw * dt_hours)
        return self.arrival_step + max(0, int(math.ceil(steps - 1e-9)))


@dataclass
class Scenario:
    """One day's exogenous data plus the EV sessions to serve."""
    scenario_id: int
    probability: float
    grid: TimeGrid
    train_demand_kw: np.ndarray
    rbe_available_kw: np.ndarray
    radiation_w_m2: np.ndarray
    pv_power_kw: np.ndarray
    buy_price_eur_kwh: np.ndarray
    sell_price_eur_kwh: np.ndarray
    ev_sessions: list[EVSession] = field(default_factory=list)


# ---------------------------------------------------------------------------
# PV conversion
# ---------------------------------------------------------------------------

def pv_power_from_radiation(radiation_w_m2, params: PvParams):
    """Convert solar radiation to PV active power (kW).

    Quadratic below the low-radiation threshold r_c, linear up to the
    standard-environment radiation r_std, flat at rated power above it;
    the curve is continuous at both breakpoints.
    """
    beta = np.asarray(radiation_w_m2, dtype=float)
    if np.any(beta < 0.0):
        raise ScenarioError("radiation must be nonnegative")
    quad = beta ** 2 * params.p_rated_kw / (params.r_c_w_m2 * params.r_std_w_m2)
    lin = beta * params.p_rated_kw / params.r_std_w_m2
    out = np.where(beta < params.r_c_w_m2, quad,
                   np.where(beta < params.r_std_w_m2, lin, params.p_rated_kw))
    if np.isscalar(radiation_w_m2) or getattr(radiation_w_m2, "ndim", 1) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# EV session sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CarFleetConfig:
    """Private cars parked at the station lot during opening hours."""
    arrival_rate_per_hour: float = 4.0
    energy_max_kwh: float = 50.0
    nominal_kw: float = 11.0
    max_kw: float = 22.0
    efficiency: float = 1.0
    departure_window_hours: float = 2.0


@dataclass(frozen=True)
class BusFleetConfig:
    """Electric buses that plug in shortly before their timetabled departure."""
    headway_min: float = 30.0          # 0 disables the built-in timetable
    first_departure_hour: float = 6.0
    last_departure_hour: float = 22.0
    energy_max_kwh: float = 300.0
    charge_kw: float = 300.0
    efficiency: float = 1.0
    arrival_lead_min_minutes: float = 10.0
    arrival_lead_max_minutes: float = 30.0


def generate_car_sessions(rng: np.random.Generator, grid: TimeGrid,
                          cfg: CarFleetConfig) -> list[EVSession]:
    """Sample one day of car sessions.

    Arrivals form a Poisson stream (exponential inter-arrival times) inside
    the opening window; energies are uniform on [0, energy_max_kwh];
    departures are triangular within ``departure_window_hours`` after the
    nominal-rate fulfillment time, clamped to at least one parked step.
    """
    if cfg.arrival_rate_per_hour <= 0.0:
        return []
    sessions: list[EVSession] = []
    t_hour = grid.opening_hour
    i = 0
    while True:
        t_hour += rng.exponential(1.0 / cfg.arrival_rate_per_hour)
        if t_hour >= grid.closing_hour:
            break
        arrival = grid.step_of_hour(t_hour)
        energy = float(rng.uniform(0.0, cfg.energy_max_kwh))
        fulfill = arrival + max(0, int(math.ceil(
            energy / (cfg.efficiency * cfg.nominal_kw * grid.dt_hours) - 1e-9)))
        f_hour = fulfill * grid.dt_hours
        w = cfg.departure_window_hours
        dep_hour = float(rng.triangular(f_hour, f_hour + w / 2.0, f_hour + w))
        departure = int(math.ceil(dep_hour / grid.dt_hours - 1e-9))
        departure = max(departure, arrival + 1)
        sessions.append(EVSession(
            vehicle_id=f"car{i:03d}", kind="car",
            arrival_step=arrival, departure_step=departure,
            energy_kwh=energy, nominal_kw=cfg.nominal_kw,
            max_kw=cfg.max_kw, efficiency=cfg.efficiency))
        i += 1
    return sessions


def default_bus_schedule(cfg: BusFleetConfig) -> list[float]:
    """Evenly spaced stand-in timetable (departure clock hours)."""
    if cfg.headway_min <= 0.0:
        return []
    out = []
    h = cfg.first_departure_hour
    while h < cfg.last_departure_hour - 1e-9:
        out.append(round(h, 6))
        h += cfg.headway_min / 60.0
    return out


def generate_bus_sessions(rng: np.random.Generator, grid: TimeGrid,
                          cfg: BusFleetConfig,
                          schedule_hours: list[float]) -> list[EVSession]:
    """Sample bus sessions for the given departure timetable.

    Each bus arrives a triangular 10 to 30 minutes (config-scalable) before
    its departure and wants a uniform energy on [0, energy_max_kwh] at a
    single fixed charging rate.
    """
    sessions: list[EVSession] = []
    for i, dep_hour in enumerate(schedule_hours):
        if not (0.0 <= dep_hour < HOURS_PER_DAY):
            raise ScenarioError(
                f"bus schedule entry {dep_hour!r} is outside the day")
        lead_min = float(rng.triangular(
            cfg.arrival_lead_min_minutes,
            (cfg.arrival_lead_min_minutes + cfg.arrival_lead_max_minutes) / 2.0,
            cfg.arrival_lead_max_minutes))
        energy = float(rng.uniform(0.0, cfg.energy_max_kwh))
        departure = max(1, int(round(dep_hour / grid.dt_hours)))
        arrival = grid.step_of_hour(dep_hour - lead_min / 60.0)
        arrival = min(max(arrival, 0), departure - 1)
        sessions.append(EVSession(
            vehicle_id=f"bus{i:03d}", kind="bus",
            arrival_step=arrival, departure_step=departure,
            energy_kwh=energy, nominal_kw=cfg.charge_kw,
            max_kw=cfg.charge_kw, efficiency=cfg.efficiency))
    return sessions


# ---------------------------------------------------------------------------
# synthetic daily series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticSeriesConfig:
    """Shapes for the synthetic day; every knob is overridable from config.

    These series are stand-ins for operator data: a smooth double-peak
    traction demand, braking-energy bursts around train arrivals, a
    truncated clear-sky radiation curve, and a two-peak day-ahead price.
    """
    demand_peak_kw: float = 5000.0
    demand_base_fraction: float = 0.25
    demand_noise_sd: float = 0.03
    demand_scale_min: float = 0.9
    demand_scale_max: float = 1.1
    rbe_burst_factor: float = 1.0      # burst magnitude relative to demand
    rbe_shift_steps: int = 3
    rbe_burst_period_steps: int = 9
    rbe_burst_width_steps: int = 2
    rbe_noise_min: float = 0.5
    rbe_noise_max: float = 1.5
    clear_sky_peak_w_m2: float = 1100.0
    dawn_hour: float = 6.5
    dusk_hour: float = 20.5
    cloud_min: float = 0.25
    cloud_max: float = 1.1
    radiation_noise_sd: float = 0.08
    price_base_eur_kwh: float = 0.08
    price_amplitude_eur_kwh: float = 0.05
    price_offset_min: float = -0.01
    price_offset_max: float = 0.03
    price_noise_sd: float = 0.003
    price_floor_eur_kwh: float = 0.01
    sell_price_factor: float = 1.0     # 1.0 keeps buy and sell prices equal


def synthesize_day_series(rng: np.random.Generator, grid: TimeGrid,
                          cfg: SyntheticSeriesConfig) -> dict[str, np.ndarray]:
    """Draw one scenario's demand/RBE/radiation/price series.

    The draw order is fixed so a scenario's series depend only on its own
    RNG stream.
    """
    h = grid.hours()
    n = grid.steps_per_day

    shape = cfg.demand_base_fraction + (1.0 - cfg.demand_base_fraction) * (
        np.exp(-((h - 8.5) / 2.2) ** 2) + 0.85 * np.exp(-((h - 18.5) / 2.6) ** 2))
    shape /= shape.max()
    scale = rng.uniform(cfg.demand_scale_min, cfg.demand_scale_max)
    demand_noise = np.clip(rng.normal(1.0, cfg.demand_noise_sd, n), 0.0, None)
    demand = cfg.demand_peak_kw * scale * shape * demand_noise

    period = max(1, cfg.rbe_burst_period_steps)
    phase = int(rng.integers(0, period))
    burst = ((np.arange(n) + phase) % period < cfg.rbe_burst_width_steps)
    rbe_noise = rng.uniform(cfg.rbe_noise_min, cfg.rbe_noise_max, n)
    rbe = (cfg.rbe_burst_factor * np.roll(demand, cfg.rbe_shift_steps)
           * burst * rbe_noise)

    cloud = rng.uniform(cfg.cloud_min, cfg.cloud_max)
    sun = np.where((h > cfg.dawn_hour) & (h < cfg.dusk_hour),
                   np.sin(np.pi * (h - cfg.dawn_hour)
                          / max(cfg.dusk_hour - cfg.dawn_hour, 1e-9)), 0.0)
    rad_noise = np.clip(rng.normal(1.0, cfg.radiation_noise_sd, n), 0.0, None)
    radiation = np.clip(cfg.clear_sky_peak_w_m2 * cloud * sun * rad_noise, 0.0, None)

    offset = rng.uniform(cfg.price_offset_min, cfg.price_offset_max)
    price_noise = rng.normal(0.0, cfg.price_noise_sd, n)
    buy = (cfg.price_base_eur_kwh + offset
           + cfg.price_amplitude_eur_kwh * (np.exp(-((h - 8.0) / 1.8) ** 2)
                                            + np.exp(-((h - 19.0) / 2.2) ** 2))
           + price_noise)
    buy = np.clip(buy, cfg.price_floor_eur_kwh, None)
    sell = buy * cfg.sell_price_factor

    return {"demand": demand, "rbe": rbe, "radiation": radiation,
            "buy": buy, "sell": sell}


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def scenario_stream(master_seed: int, scenario_index: int,
                    purpose: int) -> np.random.Generator:
    """Independent per-scenario RNG stream.

    Keyed by (scenario index, purpose), so scenario s draws identically no
    matter how many scenarios precede it or run concurrently.
    """
    seq = np.random.SeedSequence(master_seed,
                                 spawn_key=(scenario_index, purpose))
    return np.random.default_rng(seq)


_SERIES_STREAM = 0
_CAR_STREAM = 1
_BUS_STREAM = 2


def build_scenario(scenario_id: int, probability: float, grid: TimeGrid,
                   series: dict[str, np.ndarray], pv: PvParams,
                   sessions: list[EVSession]) -> Scenario:
    """Validate a series bundle and assemble the Scenario.

    PV power is derived from the radiation series here, so callers only
    ever supply radiation.
    """
    if not (0.0 < probability <= 1.0):
        raise ScenarioError(f"scenario probability {probability} outside (0, 1]")
    n = grid.steps_per_day
    out: dict[str, np.ndarray] = {}
    for key in ("demand", "rbe", "radiation", "buy", "sell"):
        if key not in series:
            raise ScenarioError(f"missing series {key!r}")
        arr = np.asarray(series[key], dtype=float)
        if arr.shape != (n,):
            raise ScenarioError(
                f"series {key!r} has length {arr.size}, expected {n}")
        if key in ("demand", "rbe", "radiation") and np.any(arr < 0.0):
            raise ScenarioError(f"series {key!r} contains negative values")
        out[key] = arr
    return Scenario(
        scenario_id=scenario_id,
        probability=probability,
        grid=grid,
        train_demand_kw=out["demand"],
        rbe_available_kw=out["rbe"],
        radiation_w_m2=out["radiation"],
        pv_power_kw=pv_power_from_radiation(out["radiation"], pv),
        buy_price_eur_kwh=out["buy"],
        sell_price_eur_kwh=out["sell"],
        ev_sessions=list(sessions))


def make_scenario(master_seed: int, scenario_index: int, n_scenarios: int,
                  grid: TimeGrid, pv: PvParams, synth: SyntheticSeriesConfig,
                  cars: CarFleetConfig, buses: BusFleetConfig,
                  fixed_series: dict[str, np.ndarray] | None = None,
                  bus_schedule_hours: list[float] | None = None) -> Scenario:
    """Generate scenario ``scenario_index`` of a ``n_scenarios``-member set.

    ``fixed_series`` (from user CSVs) replaces the synthetic series for
    every scenario; the EV population stays stochastic per scenario.
    """
    series_rng = scenario_stream(master_seed, scenario_index, _SERIES_STREAM)
    series = synthesize_day_series(series_rng, grid, synth)
    if fixed_series:
        series.update(fixed_series)
    car_rng = scenario_stream(master_seed, scenario_index, _CAR_STREAM)
    sessions = generate_car_sessions(car_rng, grid, cars)
    bus_rng = scenario_stream(master_seed, scenario_index, _BUS_STREAM)
    schedule = (bus_schedule_hours if bus_schedule_hours is not None
                else default_bus_schedule(buses))
    sessions += generate_bus_sessions(bus_rng, grid, buses, schedule)
    return build_scenario(scenario_index, 1.0 / n_scenarios, grid, series,
                          pv, sessions)


# ---------------------------------------------------------------------------
# CSV ingestion and export
# ---------------------------------------------------------------------------

def load_series_csv(path: str | Path, column: str, grid: TimeGrid,
                    resample: bool = False,
                    allow_negative: bool = False) -> np.ndarray:
    """Read one per-step series column from a headered CSV.

    The file needs ``step`` (0-based, contiguous) plus the named column.
    With ``resample`` the series may be at a coarser or finer resolution:
    coarse rows are repeated piecewise-constant, finer rows are averaged
    per step; either way the row count must divide evenly.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "step" not in reader.fieldnames:
            raise SeriesFormatError(f"{path}: missing 'step' column")
        if column not in reader.fieldnames:
            raise SeriesFormatError(f"{path}: missing {column!r} column")
        values: list[float] = []
        for k, row in enumerate(reader):
            try:
                step = int(row["step"])
                val = float(row[column])
            except (TypeError, ValueError) as exc:
                raise SeriesFormatError(f"{path}: bad row {k}: {exc}") from exc
            if step != k:
                raise SeriesFormatError(
                    f"{path}: steps must be 0-based and contiguous (row {k})")
            if not allow_negative and val < 0.0:
                raise SeriesFormatError(
                    f"{path}: negative value in row {k}")
            values.append(val)
    arr = np.asarray(values, dtype=float)
    n = grid.steps_per_day
    if arr.size == n:
        return arr
    if not resample:
        raise SeriesFormatError(
            f"{path}: {arr.size} rows but grid has {n} steps "
            "(pass resample to convert)")
    if arr.size and n % arr.size == 0:
        return np.repeat(arr, n // arr.size)
    if arr.size and arr.size % n == 0:
        return arr.reshape(n, arr.size // n).mean(axis=1)
    raise SeriesFormatError(
        f"{path}: cannot resample {arr.size} rows onto {n} steps")


def load_bus_schedule_csv(path: str | Path) -> list[float]:
    """Read departure clock times (HH:MM) from a bus timetable CSV."""
    path = Path(path)
    out: list[float] = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "departure_hhmm" not in reader.fieldnames:
            raise SeriesFormatError(f"{path}: missing 'departure_hhmm' column")
        for k, row in enumerate(reader):
            raw = (row["departure_hhmm"] or "").strip()
            try:
                hh, mm = raw.split(":")
                hour = int(hh) + int(mm) / 60.0
            except ValueError as exc:
                raise SeriesFormatError(
                    f"{path}: bad departure time {raw!r} in row {k}") from exc
            out.append(hour)
    return out


def write_series_csv(path: str | Path, header: tuple[str, ...],
                     rows) -> None:
    """Write a CSV with stable float formatting (6 decimals)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.6f}" if isinstance(v, float) else v
                             for v in row])


def export_scenario_csvs(scenario: Scenario, out_dir: str | Path) -> None:
    """Dump one scenario's series and sessions in the documented formats."""
    out = Path(out_dir)
    write_series_csv(out / "demand.csv", ("step", "p_kw"),
                     enumerate(map(float, scenario.train_demand_kw)))
    write_series_csv(out / "rbe.csv", ("step", "p_kw"),
                     enumerate(map(float, scenario.rbe_available_kw)))
    write_series_csv(out / "radiation.csv", ("step", "w_m2"),
                     enumerate(map(float, scenario.radiation_w_m2)))
    write_series_csv(out / "prices.csv", ("step", "buy_eur_kwh", "sell_eur_kwh"),
                     ((t, float(b), float(s)) for t, (b, s) in
                      enumerate(zip(scenario.buy_price_eur_kwh,
                                    scenario.sell_price_eur_kwh))))
    write_series_csv(out / "sessions.csv",
                     ("vehicle_id", "kind", "arrival_step", "departure_step",
                      "energy_kwh", "nominal_kw", "max_kw", "efficiency"),
                     ((s.vehicle_id, s.kind, s.arrival_step, s.departure_step,
                       float(s.energy_kwh), float(s.nominal_kw),
                       float(s.max_kw), float(s.efficiency))
                      for s in scenario.ev_sessions))
