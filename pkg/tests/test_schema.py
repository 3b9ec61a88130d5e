import json
from pathlib import Path

import jsonschema
import pytest

from compcap import reports
from compcap.config import RunConfig
from compcap.constructions.mixture import TrapezoidMixture

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "schemas" / "pdf.schema.json").read_text())


@pytest.mark.parametrize(
    "cfg",
    [RunConfig(kind="bump_train", terms=8), RunConfig(kind="star", truncation=8)],
    ids=["bump_train", "star"],
)
def test_gen_pdf_validates(cfg):
    jsonschema.validate(reports.gen_pdf(cfg)["pdf"], SCHEMA)


def test_mixture_validates():
    jsonschema.validate(TrapezoidMixture.single(3).to_json(), SCHEMA)


def test_schema_rejects_bad_rational():
    bad = TrapezoidMixture.single(3).to_json()
    bad["bumps"][0]["shift"] = "three"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, SCHEMA)
