import pytest
from hypothesis import given, settings

from conftest import TABLE2, TABLE2_SPEED
from strategies import three_axle_params
from vehanalog.config import RunConfig, dump_config, example_config_text, load_config, parse_config
from vehanalog.errors import ConfigError
from vehanalog.model import ThreeAxleParams, TwoDofParams


@pytest.fixture
def table2_text():
    return example_config_text("table2")


def test_bundled_table2(table2_text):
    cfg = parse_config(table2_text)
    assert cfg.kind == "three_axle"
    assert cfg.params == TABLE2
    assert "l" not in cfg.params
    assert cfg.excitation["v"] == pytest.approx(TABLE2_SPEED)
    assert set(cfg.excitation) == {"Y", "lambda", "v"}
    assert isinstance(cfg.build_params(), ThreeAxleParams)


def test_bundled_two_dof():
    cfg = parse_config(example_config_text("two_dof"))
    assert isinstance(cfg.build_params(), TwoDofParams)
    assert cfg.build_excitation().omega == 30


def test_round_trip(table2_text):
    cfg = parse_config(table2_text + "\n[output]\nsolve = out.csv\n")
    assert parse_config(dump_config(cfg)) == cfg
    assert dump_config(parse_config(dump_config(cfg))) == dump_config(cfg)


@settings(max_examples=30, deadline=None)
@given(three_axle_params())
def test_round_trip_random(p):
    cfg = RunConfig("three_axle", dict(p.__dict__), {"Y": 0.01, "lambda": 3.0, "v": 7.5})
    assert parse_config(dump_config(cfg)) == cfg


def test_missing_key_named(table2_text):
    text = "\n".join(ln for ln in table2_text.splitlines() if not ln.startswith("k_sm"))
    with pytest.raises(ConfigError, match="k_sm"):
        parse_config(text)


@pytest.mark.parametrize(
    "old, new, match",
    [
        ("l = 6.15", "l = 6.2", "l_d"),
        ("kind = three_axle", "kind = full_car", "kind"),
        ("m = 22000", "m = heavy", "not a number"),
        ("m = 22000", "m = -22000", "m"),
        ("m = 22000", "m = 22000\nbogus = 1", "bogus"),
        ("v_kmh = 60", "v_kmh = 60\nv = 3", "either"),
        ("lambda = 2", "", "lambda"),
        ("periods = 10", "periods = 2.5", "periods"),
        ("[solver]", "[solver]\nspeed = 3", "speed"),
        ("[solver]", "[plots]\n[solver]", "sections"),
    ],
)
def test_config_errors(table2_text, old, new, match):
    assert old in table2_text
    with pytest.raises(ConfigError, match=match):
        parse_config(table2_text.replace(old, new, 1)).build_params()


def test_geometry_error_reported(table2_text):
    with pytest.raises(ConfigError, match="model"):
        parse_config(table2_text.replace("l_a = 4.80", "l_a = 4.0")).build_params()


def test_perturbed(table2_text):
    cfg = parse_config(table2_text)
    other = cfg.perturbed("k_sm", 1.1)
    assert other.params["k_sm"] == pytest.approx(1.1 * TABLE2["k_sm"])
    assert cfg.params["k_sm"] == TABLE2["k_sm"]
    with pytest.raises(ConfigError):
        cfg.perturbed("nope", 2.0)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.ini")
