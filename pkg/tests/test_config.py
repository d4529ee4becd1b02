import json

import pytest

from gbvlab.config import ExperimentConfig, Task, load_config
from gbvlab.errors import SchemaError
from gbvlab.models import ModelTag
from gbvlab.phases import Variant
from gbvlab.pruefer import JacobiCoeffs, VerblunskyCoeffs

WVN = {"type": "wvn", "terms": [{"lambda": 1, "phi": 1.5, "gamma": 1}]}


def config(**fields):
    base = {
        "task": "prufer-run",
        "model": "oprl",
        "coefficients": WVN,
        "params": {"etas": [1.0], "steps": 10},
    }
    base.update(fields)
    return base


def test_minimal_config():
    parsed = ExperimentConfig.from_mapping(config())
    assert parsed.task is Task.PRUFER_RUN
    assert parsed.model is ModelTag.OPRL
    assert parsed.params == {"etas": (1.0,), "steps": 10}
    assert parsed.effective_variant() is Variant.OPRL
    assert isinstance(parsed.coeffs(), JacobiCoeffs)


def test_model_defaults_to_opuc():
    data = config(coefficients={"type": "zero"})
    del data["model"]
    parsed = ExperimentConfig.from_mapping(data)
    assert parsed.model is ModelTag.OPUC
    assert isinstance(parsed.coeffs(), VerblunskyCoeffs)
    assert parsed.effective_variant() is Variant.OPUC


def test_phases_fall_back_to_decomposition():
    parsed = ExperimentConfig.from_mapping(config())
    assert sorted(parsed.effective_phases()) == pytest.approx([-1.5, 1.5])
    explicit = ExperimentConfig.from_mapping(config(phases=[0.5]))
    assert explicit.effective_phases() == (0.5,)


def test_a_minus_one_perturbs_off_diagonal():
    parsed = ExperimentConfig.from_mapping(
        config(a_minus_one={"type": "constant", "value": 0.25})
    )
    coeffs = parsed.coeffs()
    assert coeffs.a_values(0, 3) == pytest.approx([1.0, 1.25, 1.25])


def test_uniform_grid():
    parsed = ExperimentConfig.from_mapping(
        config(
            task="density",
            params={"n": 4, "grid": {"start": 0.5, "stop": 1.5, "points": 5}},
        )
    )
    assert parsed.params["grid"] == pytest.approx((0.5, 0.75, 1.0, 1.25, 1.5))


def test_digest_ignores_key_order():
    first = ExperimentConfig.from_mapping(config())
    second = ExperimentConfig.from_mapping(dict(reversed(list(config().items()))))
    assert first.digest == second.digest
    assert first.digest != ExperimentConfig.from_mapping(config(seed=3)).digest


def test_with_seed():
    parsed = ExperimentConfig.from_mapping(config())
    assert parsed.with_seed(None) is parsed
    reseeded = parsed.with_seed(9)
    assert reseeded.seed == 9
    assert reseeded.source["seed"] == 9


def test_requested_task():
    data = config()
    del data["task"]
    assert ExperimentConfig.from_mapping(data, "prufer-run").task is Task.PRUFER_RUN
    with pytest.raises(SchemaError):
        ExperimentConfig.from_mapping(config(), Task.DENSITY)


@pytest.mark.parametrize(
    "data",
    [
        pytest.param({}, id="empty"),
        pytest.param([1], id="not an object"),
        pytest.param(config(colour="red"), id="unknown field"),
        pytest.param(config(task="integrate"), id="unknown task"),
        pytest.param(config(model=1), id="model not a string"),
        pytest.param(config(model="opfoo"), id="unknown model"),
        pytest.param(config(variant="opuc"), id="variant of other model"),
        pytest.param(config(variant="best"), id="unknown variant"),
        pytest.param(config(seed=-1), id="negative seed"),
        pytest.param(config(seed=1.5), id="fractional seed"),
        pytest.param(config(coefficients={"type": "spline"}), id="bad coefficients"),
        pytest.param(config(coefficients=None), id="null coefficients"),
        pytest.param(
            config(model="opuc", a_minus_one={"type": "zero"}), id="a_minus_one opuc"
        ),
        pytest.param(config(params={"etas": [1.0]}), id="missing parameter"),
        pytest.param(
            config(params={"etas": [1.0], "steps": 10, "speed": 2}),
            id="unknown parameter",
        ),
        pytest.param(config(params={"etas": 1.0, "steps": 10}), id="etas not a list"),
        pytest.param(
            config(task="density", params={"n": 4, "grid": {"start": 0}}),
            id="incomplete grid",
        ),
        pytest.param({"task": "phase-sets", "phases": [1.0]}, id="phase-sets no p"),
        pytest.param(
            config(params={"etas": [1.0], "steps": 10, "stride": 0}), id="zero stride"
        ),
        pytest.param(config(params={"etas": [1.0], "steps": -5}), id="negative steps"),
        pytest.param(
            config(task="density", params={"n": -1, "grid": [1.0, 2.0]}),
            id="negative degree",
        ),
        pytest.param(
            config(
                task="convergence",
                params={"interval": [0.5, 1.0], "checkpoints": [10, -1]},
            ),
            id="negative checkpoint",
        ),
    ],
)
def test_schema_errors(data):
    with pytest.raises(SchemaError):
        ExperimentConfig.from_mapping(data)


def test_missing_coefficients():
    data = config()
    del data["coefficients"]
    with pytest.raises(SchemaError):
        ExperimentConfig.from_mapping(data)


def test_load_config(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(config()), encoding="utf-8")
    assert load_config(path).task is Task.PRUFER_RUN
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_config(path)
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")
