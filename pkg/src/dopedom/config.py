"""INI-style configuration files for :class:`~dopedom.model.ModelParams`.

Example::

    [rates]
    omega_m = 1.0
    kappa = 10
    gamma = 0.01
    gamma_m = 1e-5

    [detunings]
    delta_a = 1
    delta_c = 1

    [coupling]
    mode = direct
    g = 0.01
    G = 0.01

    [bath]
    n_m = 1000

Keys are case sensitive (``g`` and ``G`` differ). All values are in units
of ``omega_m``. Optional fields and their defaults are listed in
:data:`DEFAULTS`; fields filled in from defaults are recorded in
``ModelParams.defaulted``.
"""
from __future__ import annotations

import configparser

from .errors import ConfigError, ValidationError
from .model import UNITS, Direct, ModelParams, Physical

DEFAULTS = {
    "omega_m": 1.0,
    "delta_a": 0.0,
    "delta_c": 0.0,
    "n_m": 0.0,
}

SECTIONS = {
    "rates": ("omega_m", "kappa", "gamma", "gamma_m"),
    "detunings": ("delta_a", "delta_c"),
    "bath": ("n_m",),
}
COUPLING_KEYS = {
    "direct": ("g", "G"),
    "physical": ("g0", "g1", "eta", "branch"),
}
OPTIONAL_COUPLING = {"branch"}

# field name -> section, for `--set key=value` style overrides
FIELD_SECTION = {name: sec for sec, names in SECTIONS.items() for name in names}


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    return cp


def _float(cp, section, key):
    raw = cp[section][key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"expected a number, got {raw!r}", field=f"{section}.{key}") from None


def parse_params(text: str, overrides: dict | None = None) -> ModelParams:
    """Parse configuration text into validated parameters.

    ``overrides`` maps ``key`` or ``section.key`` to a string value and is
    applied on top of the text, as the ``--set`` command line flag does.

    Raises
    ------
    ConfigError
        the text is not well-formed or contains unknown/missing fields.
    ValidationError
        a value violates a physical invariant.
    """
    cp = _parser()
    try:
        cp.read_string(text)
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError(f"could not parse: {exc.errors[0][1] if exc.errors else exc}",
                          line=line) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigError(exc.message, line=exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("missing [section] header", line=exc.lineno) from None
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    for key, value in (overrides or {}).items():
        section, _, name = key.rpartition(".")
        if not section:
            section = FIELD_SECTION.get(name, "coupling")
        if not cp.has_section(section):
            cp.add_section(section)
        cp[section][name] = str(value)

    known = set(SECTIONS) | {"coupling"}
    for section in cp.sections():
        if section not in known:
            raise ConfigError(f"unknown section [{section}]", field=section)

    values, defaulted = {}, []
    for section, names in SECTIONS.items():
        present = cp[section] if cp.has_section(section) else {}
        for key in present:
            if key not in names:
                raise ConfigError("unknown field", field=f"{section}.{key}")
        for name in names:
            if name in present:
                values[name] = _float(cp, section, name)
            elif name in DEFAULTS:
                values[name] = DEFAULTS[name]
                defaulted.append(name)
            else:
                raise ConfigError("required field missing", field=f"{section}.{name}")

    if not cp.has_section("coupling"):
        raise ConfigError("required section missing", field="coupling")
    sec = cp["coupling"]
    mode = sec.get("mode", "").strip().lower()
    if mode not in COUPLING_KEYS:
        raise ConfigError(f"mode must be 'direct' or 'physical', got {mode!r}",
                          field="coupling.mode")
    allowed = set(COUPLING_KEYS[mode]) | {"mode"}
    for key in sec:
        if key not in allowed:
            raise ConfigError(f"unknown field for mode {mode!r}", field=f"coupling.{key}")
    kwargs = {}
    for name in COUPLING_KEYS[mode]:
        if name not in sec:
            if name in OPTIONAL_COUPLING:
                continue
            raise ConfigError("required field missing", field=f"coupling.{name}")
        if name == "branch":
            try:
                kwargs[name] = int(sec[name])
            except ValueError:
                raise ConfigError("expected an integer", field="coupling.branch") from None
        else:
            kwargs[name] = _float(cp, "coupling", name)
    coupling = Direct(**kwargs) if mode == "direct" else Physical(**kwargs)
    return ModelParams(coupling=coupling, defaulted=tuple(defaulted), **values)


def load_params(path, overrides: dict | None = None) -> ModelParams:
    with open(path, encoding="utf-8") as fh:
        return parse_params(fh.read(), overrides)


def serialize_params(p: ModelParams) -> str:
    """Render parameters as configuration text; ``parse_params`` inverts it.

    Floats are written with ``repr`` so the round trip is exact. Fields that
    were defaulted stay defaulted: they are written as comments only.
    """
    lines = [f"# units: all rates and detunings in units of {UNITS}"]
    for section, names in SECTIONS.items():
        lines.append(f"[{section}]")
        for name in names:
            if name in p.defaulted:
                lines.append(f"# {name} = {DEFAULTS[name]!r} (default)")
            else:
                lines.append(f"{name} = {getattr(p, name)!r}")
        lines.append("")
    c = p.coupling
    lines.append("[coupling]")
    lines.append(f"mode = {c.mode}")
    for name in COUPLING_KEYS[c.mode]:
        value = getattr(c, name)
        if value is not None:
            lines.append(f"{name} = {value!r}")
    return "\n".join(lines) + "\n"


def params_to_dict(p: ModelParams) -> dict:
    """Flat ``section.key -> value`` view, used for CSV metadata."""
    out = {f"{FIELD_SECTION[name]}.{name}": getattr(p, name) for name in FIELD_SECTION}
    out["coupling.mode"] = p.coupling.mode
    for name in COUPLING_KEYS[p.coupling.mode]:
        value = getattr(p.coupling, name)
        if value is not None:
            out[f"coupling.{name}"] = value
    return out


__all__ = ["parse_params", "load_params", "serialize_params", "params_to_dict",
           "DEFAULTS", "ConfigError", "ValidationError"]
