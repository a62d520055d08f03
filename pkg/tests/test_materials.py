import pytest

from qreflection.constants import BOHR
from qreflection.errors import ConfigError
from qreflection.materials import (ENV_VAR, TABLE_SURFACES, default_polarizability, get_material,
                                   load_materials, parse_config, search_path)


def test_shipped_materials_cover_the_table():
    materials, atom = load_materials()
    for name in TABLE_SURFACES:
        assert name in materials
    assert atom.static_value == pytest.approx(4.5 * BOHR ** 3)
    assert get_material("aerogel98").porosity == 0.98
    assert get_material("aerogel98").oscillators == get_material("silica").oscillators
    assert get_material("perfect").is_perfect


def test_parse_minimal():
    mats, atom = parse_config("materials:\n  m:\n    kind: oscillator-model\n"
                              "    oscillators:\n      - {strength: 2, resonance: 5}\n")
    assert atom is None
    assert mats["m"].oscillators[0].damping == 0.0
    assert mats["m"].static_epsilon() == 3.0


@pytest.mark.parametrize("text, line, field", [
    ("materials:\n  m:\n    kind: oscillator-model\n    oscillators:\n      - {strength: abc, resonance: 5}\n",
     5, "m.oscillators[0].strength"),
    ("materials:\n  m:\n    kind: oscillator-model\n    porosity: 1.5\n", 4, "m.porosity"),
    ("materials:\n  m:\n    kind: oscillator-model\n    colour: red\n", 4, "m.colour"),
    ("materials:\n  m:\n    oscillators: []\n", 3, "m.kind"),
    ("materials:\n  m:\n    kind: oscillator-model\n    oscillators:\n      - {strength: 1}\n",
     5, "m.oscillators[0]"),
    ("materials:\n  m:\n    kind: oscillator-model\n    oscillators:\n      - {strength: -1, resonance: 2}\n",
     5, "m.oscillators[0].strength"),
])
def test_parse_errors_report_line_and_field(text, line, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text, "mats.yaml")
    assert info.value.line == line
    assert info.value.field == field
    assert "mats.yaml" in str(info.value)


def test_yaml_syntax_error_has_line():
    with pytest.raises(ConfigError) as info:
        parse_config("materials:\n  m: [unclosed\n", "bad.yaml")
    assert info.value.line is not None


def test_env_var_overrides_builtin(tmp_path, monkeypatch):
    custom = tmp_path / "extra.yaml"
    custom.write_text("atom:\n  static_polarizability_a0: 4.5\n  resonance: 11.0\n"
                      "materials:\n  silica:\n    kind: perfect-mirror\n"
                      "  sapphire:\n    kind: oscillator-model\n"
                      "    oscillators:\n      - {strength: 8.3, resonance: 14}\n")
    monkeypatch.setenv(ENV_VAR, str(custom))
    assert search_path()[0] == custom
    assert get_material("silica").is_perfect
    assert get_material("sapphire").oscillators[0].strength == 8.3
    assert get_material("silicon").oscillators  # still from the shipped file
    assert default_polarizability().resonance == 11.0


def test_unknown_material_names_searched_files():
    with pytest.raises(KeyError) as info:
        get_material("unobtainium")
    assert "materials.yaml" in str(info.value)
