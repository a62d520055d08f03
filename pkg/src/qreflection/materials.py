"""Loading material definitions from YAML configuration files."""
import os
from importlib import resources
from pathlib import Path

import yaml

from .constants import BOHR
from .errors import ConfigError, DomainError
from .optics import AtomPolarizability, MaterialModel, Oscillator

ENV_VAR = "QREFLECTION_MATERIALS"

#: the six surfaces of the lifetime table, in column order
TABLE_SURFACES = ("perfect", "silicon", "silica", "aerogel50", "aerogel90", "aerogel98")


def default_config_path():
    return Path(resources.files("qreflection") / "data" / "materials.yaml")


def search_path():
    """Config files consulted in order: entries of $QREFLECTION_MATERIALS, then the shipped file."""
    paths = [Path(p) for p in os.environ.get(ENV_VAR, "").split(os.pathsep) if p]
    paths.append(default_config_path())
    return paths


def _line(node):
    return node.start_mark.line + 1


def _mapping(node, path, what):
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{what} must be a mapping", path, _line(node))
    return {k.value: v for k, v in node.value}


def _number(node, path, field, lo=None, hi=None):
    if not isinstance(node, yaml.ScalarNode):
        raise ConfigError("expected a number", path, _line(node), field)
    try:
        value = float(node.value)
    except ValueError:
        raise ConfigError(f"cannot parse {node.value!r} as a number", path, _line(node), field) from None
    if lo is not None and value < lo:
        raise ConfigError(f"must be >= {lo}, got {value}", path, _line(node), field)
    if hi is not None and value > hi:
        raise ConfigError(f"must be <= {hi}, got {value}", path, _line(node), field)
    return value


def _material(name, node, path):
    fields = _mapping(node, path, f"material {name!r}")
    allowed = {"kind", "oscillators", "porosity", "note"}
    for key, val in fields.items():
        if key not in allowed:
            raise ConfigError("unknown key", path, _line(val), f"{name}.{key}")
    if "kind" not in fields:
        raise ConfigError("missing 'kind'", path, _line(node), f"{name}.kind")
    kind = fields["kind"].value
    oscillators = []
    if "oscillators" in fields:
        seq = fields["oscillators"]
        if not isinstance(seq, yaml.SequenceNode):
            raise ConfigError("expected a list", path, _line(seq), f"{name}.oscillators")
        for i, item in enumerate(seq.value):
            osc = _mapping(item, path, f"oscillator {i} of {name!r}")
            where = f"{name}.oscillators[{i}]"
            for key in ("strength", "resonance"):
                if key not in osc:
                    raise ConfigError(f"missing '{key}'", path, _line(item), where)
            oscillators.append(Oscillator(
                _number(osc["strength"], path, where + ".strength", 0.0),
                _number(osc["resonance"], path, where + ".resonance", 0.0),
                _number(osc["damping"], path, where + ".damping", 0.0) if "damping" in osc else 0.0,
            ))
    porosity = _number(fields["porosity"], path, f"{name}.porosity", 0.0, 1.0) if "porosity" in fields else 0.0
    note = fields["note"].value if "note" in fields else ""
    try:
        return MaterialModel(name, kind, tuple(oscillators), porosity, note)
    except DomainError as exc:
        raise ConfigError(str(exc), path, _line(node), name) from None


def parse_config(text, path="<string>"):
    """Parse a material YAML document.

    Returns
    -------
    materials : dict[str, MaterialModel]
    atom : AtomPolarizability or None
    """
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise ConfigError(f"YAML syntax error: {exc.problem}", path, line) from None
    if root is None:
        return {}, None
    top = _mapping(root, path, "document")
    materials = {}
    if "materials" in top:
        for name, node in _mapping(top["materials"], path, "materials").items():
            materials[name] = _material(name, node, path)
    atom = None
    if "atom" in top:
        a = _mapping(top["atom"], path, "atom")
        for key in ("static_polarizability_a0", "resonance"):
            if key not in a:
                raise ConfigError(f"missing '{key}'", path, _line(top["atom"]), f"atom.{key}")
        atom = AtomPolarizability(
            _number(a["static_polarizability_a0"], path, "atom.static_polarizability_a0", 0.0) * BOHR ** 3,
            _number(a["resonance"], path, "atom.resonance", 0.0),
        )
    return materials, atom


def load_config(path):
    path = Path(path)
    return parse_config(path.read_text(), path)


def load_materials(paths=None):
    """Merge materials from all config files; earlier files take precedence."""
    paths = search_path() if paths is None else [Path(p) for p in paths]
    merged, atom = {}, None
    for p in reversed(paths):
        if not p.exists():
            continue
        mats, a = load_config(p)
        merged.update(mats)
        atom = a or atom
    return merged, atom


def get_material(name, paths=None):
    paths = search_path() if paths is None else [Path(p) for p in paths]
    materials, _ = load_materials(paths)
    try:
        return materials[name]
    except KeyError:
        searched = ", ".join(str(p) for p in paths)
        raise KeyError(f"unknown material {name!r}; searched {searched}; "
                       f"known: {', '.join(sorted(materials))}") from None


def default_polarizability(paths=None):
    _, atom = load_materials(paths)
    return atom if atom is not None else AtomPolarizability.hydrogen()
