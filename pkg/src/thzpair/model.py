"""Lab-frame physical parameters and the rotating-frame effective model.

All frequencies and rates are angular frequencies in 1/s.  The only unit
conversion in the package is the optional drive specification through a field
amplitude (V/m) acting on a transition dipole (Debye).

A driven two-level emitter with unequal permanent dipole moments in ground
and excited state radiates on three channels: near the (shifted) transition
frequency, at the laser frequency, and at the low difference frequency
omega_L - omega_0 - omega_rabi^2/(4 omega_L) where a photon pair (one low
frequency, one optical) is created.  :func:`from_physical` reduces the lab
parameters to the coefficients of that rotating-frame picture.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

__all__ = [
    "DEBYE",
    "HBAR",
    "ConfigError",
    "PairChannelClosedWarning",
    "PerturbativeDriveWarning",
    "PhysicalParams",
    "EffectiveModel",
    "rate_at",
    "from_physical",
    "preset",
    "preset_names",
    "rabi_from_field",
    "parse_config",
    "params_from_mapping",
    "with_rabi",
]

DEBYE = 3.33564e-30  # C*m per Debye
HBAR = 1.054572e-34  # J*s


class ConfigError(ValueError):
    """Invalid configuration input (file syntax, unknown key, bad value)."""


class PairChannelClosedWarning(UserWarning):
    """The pair-emission frequency is not positive; that channel is dark."""


class PerturbativeDriveWarning(UserWarning):
    """Drive strength is large enough to strain the second-order treatment."""


@dataclass(frozen=True)
class PhysicalParams:
    """Lab-frame inputs.

    Attributes
    ----------
    omega0 : float
        Transition angular frequency (1/s).
    omegaL : float
        Laser angular frequency (1/s).
    rabi : float
        Rabi frequency Omega = p12*E0/hbar (1/s), stored as a magnitude.
    dipole_ratio : float
        |p11 - p22| / |p12|, the permanent-dipole asymmetry relative to the
        transition dipole (dimensionless).
    gamma0 : float
        Spontaneous decay rate at the reference frequency omega0 (1/s).
    """

    omega0: float
    omegaL: float
    rabi: float = 0.0
    dipole_ratio: float = 0.0
    gamma0: float = 3e6

    def __post_init__(self):
        for name in ("omega0", "omegaL", "rabi", "dipole_ratio", "gamma0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be > 0")
        if self.omegaL <= 0:
            raise ValueError("omegaL must be > 0")
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be > 0")
        if self.dipole_ratio < 0:
            raise ValueError("dipole_ratio must be >= 0")
        if self.rabi < 0:
            raise ValueError("rabi must be >= 0 (magnitude convention)")
        # The second-order averaged model needs Omega, G << omega_L.
        for label, v in (("rabi", self.rabi), ("G", self.g_asym)):
            if v / self.omegaL >= 1.0:
                raise ValueError(
                    f"{label}/omegaL = {v / self.omegaL:.3g} >= 1: "
                    "second-order treatment of the drive is invalid"
                )
            if v / self.omegaL > 0.25:
                warnings.warn(
                    f"{label}/omegaL = {v / self.omegaL:.3g} > 0.25; "
                    "second-order drive corrections may be inaccurate",
                    PerturbativeDriveWarning,
                    stacklevel=2,
                )

    @property
    def g_asym(self) -> float:
        """Asymmetry drive G = dipole_ratio * rabi (1/s)."""
        return self.dipole_ratio * self.rabi


def rabi_from_field(e0_field: float, p12_debye: float) -> float:
    """Rabi frequency (1/s) from field amplitude (V/m) and dipole (Debye)."""
    return abs(p12_debye) * DEBYE * abs(e0_field) / HBAR


@dataclass(frozen=True)
class EffectiveModel:
    """Rotating-frame coefficients consumed by the dynamics module.

    All entries are angular frequencies/rates in 1/s except the
    dimensionless channel prefactors c_cross, c_pump, c_deph.

    bs_shift = rabi^2/(4 omegaL) is the second-order light shift of the
    excited level from the counter-rotating drive; delta_eff is the shifted
    detuning seen by the emitter; pair_freq is the emission frequency of the
    low-frequency partner photon.
    """

    omega_rabi: float
    g_asym: float
    bs_shift: float
    delta_eff: float
    gamma_R: float
    gamma_L: float
    gamma_T: float
    c_cross: float
    c_pump: float
    c_deph: float
    pair_freq: float
    omega0: float
    omegaL: float


def rate_at(omega: float, params: PhysicalParams) -> float:
    """Free-space emission rate gamma0*(omega/omega0)^3; zero for omega <= 0.

    A non-positive frequency means the channel is closed, not a fault.
    """
    if omega <= 0.0:
        return 0.0
    return params.gamma0 * (omega / params.omega0) ** 3


def from_physical(params: PhysicalParams) -> EffectiveModel:
    """Reduce lab parameters to the rotating-frame effective model."""
    omega = params.rabi
    bs_shift = omega * omega / (4.0 * params.omegaL)
    delta_eff = params.omega0 - params.omegaL + bs_shift
    pair_freq = params.omegaL - params.omega0 - bs_shift
    if pair_freq <= 0.0:
        warnings.warn(
            f"pair channel closed: pair_freq = {pair_freq:.6g} <= 0",
            PairChannelClosedWarning,
            stacklevel=2,
        )
    c_cross = omega / (2.0 * params.omegaL)
    c_pump = (3.0 * params.g_asym / (8.0 * params.omegaL)) ** 2
    return EffectiveModel(
        omega_rabi=omega,
        g_asym=params.g_asym,
        bs_shift=bs_shift,
        delta_eff=delta_eff,
        gamma_R=rate_at(params.omega0 + bs_shift, params),
        gamma_L=rate_at(params.omegaL, params),
        gamma_T=rate_at(pair_freq, params),
        c_cross=c_cross,
        c_pump=c_pump,
        c_deph=c_cross * c_cross,
        pair_freq=pair_freq,
        omega0=params.omega0,
        omegaL=params.omegaL,
    )


# Material presets.  The drive (rabi) is not part of a preset; sweeps and the
# --rabi flag supply it.
_PRESETS = {
    # Protein macromolecule with a ~100x permanent-dipole asymmetry.
    "gamma-globulin": PhysicalParams(
        omega0=5.0e15, omegaL=5.0e15 + 1e13, dipole_ratio=100.0, gamma0=3e6
    ),
    # Wurtzite GaN quantum dot: asymmetry comparable to the transition dipole.
    "gan-dot": PhysicalParams(
        omega0=4.92e15, omegaL=4.92e15 + 1e13, dipole_ratio=1.0, gamma0=3e6
    ),
}


def preset_names() -> tuple:
    return tuple(sorted(_PRESETS))


def preset(name: str) -> PhysicalParams:
    """Named parameter set; unknown names raise with the available list."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        ) from None


# --- key = value configuration text ---------------------------------------

_FLOAT_KEYS = frozenset(
    {
        "omega0",
        "omegaL",
        "rabi",
        "e0_field",
        "p12_debye",
        "dipole_ratio",
        "gamma0",
        "omega_min",
        "omega_max",
    }
)
_INT_KEYS = frozenset({"points"})
_STR_KEYS = frozenset({"preset", "spacing"})
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS


def parse_config(text: str) -> dict:
    """Parse `key = value` lines ('#' starts a comment) into a dict.

    Unknown or repeated keys are errors; units are fixed (1/s, V/m, Debye)
    and no unit suffixes are parsed.
    """
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r}; "
                f"known keys: {', '.join(sorted(KNOWN_KEYS))}"
            )
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key in _FLOAT_KEYS:
            try:
                out[key] = float(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: key {key!r} needs a number, got {value!r}"
                ) from None
        elif key in _INT_KEYS:
            try:
                out[key] = int(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: key {key!r} needs an integer, got {value!r}"
                ) from None
        else:
            out[key] = value
    return out


def params_from_mapping(mapping: dict) -> PhysicalParams:
    """Build PhysicalParams from a merged configuration mapping.

    The mapping may carry a 'preset' name whose fields act as defaults.
    The drive is either 'rabi' directly or 'e0_field' + 'p12_debye'
    (mutually exclusive).
    """
    m = dict(mapping)
    name = m.pop("preset", None)
    base = preset(name) if name is not None else None

    if "rabi" in m and "e0_field" in m:
        raise ConfigError("give either rabi or e0_field (+ p12_debye), not both")
    if "e0_field" in m:
        if "p12_debye" not in m:
            raise ConfigError("e0_field needs p12_debye to fix the Rabi frequency")
        rabi = rabi_from_field(m.pop("e0_field"), m.pop("p12_debye"))
    elif "p12_debye" in m:
        raise ConfigError("p12_debye given without e0_field")
    else:
        rabi = m.pop("rabi", base.rabi if base else None)

    fields = {}
    for key in ("omega0", "omegaL", "dipole_ratio", "gamma0"):
        if key in m:
            fields[key] = m.pop(key)
        elif base is not None:
            fields[key] = getattr(base, key)
    for key in ("omega_min", "omega_max", "points", "spacing"):  # sweep-only
        m.pop(key, None)
    if m:
        raise ConfigError(f"unknown keys: {', '.join(sorted(m))}")

    missing = [k for k in ("omega0", "omegaL") if k not in fields]
    if missing:
        raise ConfigError(
            f"missing required parameter(s): {', '.join(missing)} "
            "(give them explicitly or name a preset)"
        )
    fields.setdefault("dipole_ratio", 0.0)
    fields.setdefault("gamma0", 3e6)
    try:
        return PhysicalParams(rabi=rabi if rabi is not None else 0.0, **fields)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def with_rabi(params: PhysicalParams, rabi: float) -> PhysicalParams:
    """Copy of params with the drive replaced."""
    return replace(params, rabi=rabi)
