import json

import pytest

from src.adapter.repositories import JsonlRecordRepository, OpenCVImageRepository
from src.app.use_case import (
    DefendManifestCommand,
    DefendManifestUseCase,
    ProtectBatchCommand,
    ProtectBatchUseCase,
)
from src.app.use_case.defend_manifest import resolve_recorded_path
from src.domain import DefenseSpec, parse_defense_pipeline


@pytest.fixture
def use_case(toy_encoder) -> DefendManifestUseCase:
    return DefendManifestUseCase(toy_encoder, OpenCVImageRepository(), JsonlRecordRepository())


@pytest.fixture
def manifest(toy_encoder, image_dir, tmp_path, toy_config):
    (image_dir / "b.png").write_bytes(b"garbage")
    protect = ProtectBatchUseCase(toy_encoder, OpenCVImageRepository(), JsonlRecordRepository())
    batch = protect.execute(
        ProtectBatchCommand(inputs=sorted(image_dir.iterdir()), out_dir=tmp_path / "safe", config=toy_config)
    ).value
    return batch.manifest


def test_zero_noise_keeps_the_clean_cosine(use_case, manifest, tmp_path):
    pipelines = [[DefenseSpec(kind="gaussian_noise", sigma=0.0)], parse_defense_pipeline("jpeg:75")]
    result = use_case.execute(DefendManifestCommand(manifest=manifest, out=tmp_path / "robust.jsonl", pipelines=pipelines))
    defended = result.value
    assert defended.skipped == 1
    assert defended.failed == 0
    assert len(defended.reports) == 2
    for report in defended.reports:
        noise, jpeg = report.defenses
        assert noise.label == "gaussian_noise:0:0"
        assert jpeg.label == "jpeg:75"
        assert noise.destyle_cos_defended == pytest.approx(report.destyle_cos_clean, abs=1e-6)

    lines = [json.loads(line) for line in (tmp_path / "robust.jsonl").read_text().splitlines()]
    assert [line["input"].endswith(name) for line, name in zip(lines, ["a.png", "c.png"])] == [True, True]


def test_missing_protected_file_is_reported_per_item(use_case, manifest, tmp_path):
    (manifest.parent / "a.png").unlink()
    defended = use_case.execute(
        DefendManifestCommand(manifest=manifest, out=tmp_path / "robust.jsonl", pipelines=[parse_defense_pipeline("tvm")])
    ).value
    assert defended.failed == 1
    assert defended.reports[0].error["error_code"] == "decode_error"
    assert defended.reports[1].error is None


def test_empty_manifest(use_case, tmp_path):
    empty = tmp_path / "manifest.jsonl"
    empty.write_text("")
    result = use_case.execute(DefendManifestCommand(manifest=empty, out=tmp_path / "robust.jsonl"))
    assert result.value.reports == []
    assert (tmp_path / "robust.jsonl").read_text() == ""


def test_missing_manifest(use_case, tmp_path):
    result = use_case.execute(DefendManifestCommand(manifest=tmp_path / "nope.jsonl", out=tmp_path / "robust.jsonl"))
    assert result.is_err()
    assert result.value.code == "invalid_input"


def test_recorded_outputs_fall_back_to_the_manifest_directory(tmp_path):
    moved = tmp_path / "moved"
    moved.mkdir()
    (moved / "x.png").write_bytes(b"")
    assert resolve_recorded_path("elsewhere/x.png", moved / "manifest.jsonl") == moved / "x.png"
