import json
import os

import pytest

from processors.RunConfig import RunConfig
from simulators.SimConfig import SimConfig

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.mark.parametrize("path, model", [
    ("docs/run_config.schema.json", RunConfig),
    ("docs/sim_config.schema.json", SimConfig),
])
def test_shipped_schema_lists_every_field(path, model):
    with open(os.path.join(ROOT, path), encoding="utf-8") as f:
        schema = json.load(f)
    assert schema["title"] == model.__name__
    assert set(schema["properties"]) == set(model.model_fields)
    required = {name for name, field in model.model_fields.items() if field.is_required()}
    assert set(schema.get("required", [])) == required
