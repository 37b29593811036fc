import math

import pytest
from pydantic import ValidationError

from fairkit.audit import SyntheticGroup, SyntheticSpec, generate, write_csv
from fairkit.errors import FileError, SpecError


def _spec(n, prevalence=0.25, seed=7):
    return SyntheticSpec(groups=[SyntheticGroup(name="g", n=n, prevalence=prevalence)], seed=seed)


def test_empty_groups_give_no_records():
    records = generate(_spec(0))
    assert records == []
    assert write_csv(records) == "group,y,pred,score\n"


def test_prevalence_within_binomial_bounds():
    records = generate(_spec(10_000))
    positives = sum(r.y for r in records)
    assert len(records) == 10_000
    assert abs(positives - 2500) <= 3 * math.sqrt(10_000 * 0.25 * 0.75)


def test_same_spec_and_seed_give_identical_csv():
    assert write_csv(generate(SyntheticSpec.demo(n=1000, seed=5))) == write_csv(
        generate(SyntheticSpec.demo(n=1000, seed=5))
    )


def test_seed_argument_overrides_spec_seed():
    spec = SyntheticSpec.demo(n=200, seed=1)
    assert generate(spec, seed=2) != generate(spec)
    assert generate(spec, seed=1) == generate(spec)


def test_groups_draw_from_their_own_streams():
    both = generate(SyntheticSpec.demo(n=300, seed=9))
    only_a = generate(SyntheticSpec(groups=SyntheticSpec.demo(n=300).groups[:1], seed=9))
    assert [r for r in both if r.group == "A"] == only_a


def test_predictions_follow_scores():
    for record in generate(SyntheticSpec.demo(n=500, seed=4)):
        assert 0.0 <= record.score <= 1.0
        assert record.pred == (record.score >= 0.5)


def test_demo_preset():
    spec = SyntheticSpec.demo()
    assert [(g.name, g.n, g.prevalence) for g in spec.groups] == [("A", 10_000, 0.5), ("B", 10_000, 0.25)]
    assert spec.groups[0].positive_mean == 0.7 and spec.groups[0].negative_mean == 0.3


def test_invalid_specs():
    with pytest.raises(ValidationError):
        SyntheticGroup(name="g", n=10, prevalence=1.5)
    with pytest.raises(ValidationError):
        SyntheticSpec(groups=[SyntheticGroup(name="g", n=1, prevalence=0.5)] * 2)


def test_spec_files(write_file, tmp_path):
    path = write_file('{"groups": [{"name": "x", "n": 3, "prevalence": 0.5}], "seed": 1}', "spec.json")
    assert len(generate(SyntheticSpec.from_file(path))) == 3
    with pytest.raises(SpecError):
        SyntheticSpec.from_file(write_file('{"groups": []}', "empty.json"))
    with pytest.raises(FileError):
        SyntheticSpec.from_file(tmp_path / "absent.json")
