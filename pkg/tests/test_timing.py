import pytest

from quatdenoise.util.timing import StageTimer


def test_repeated_stage_accumulates():
    timer = StageTimer()
    with timer.stage("read"):
        pass
    with timer.stage("read"):
        pass
    with timer.stage("write"):
        pass
    assert set(timer.elapsed) == {"read", "write"}
    assert timer.total == pytest.approx(sum(timer.elapsed.values()))


def test_stage_recorded_when_body_raises():
    timer = StageTimer()
    with pytest.raises(RuntimeError):
        with timer.stage("denoise"):
            raise RuntimeError("boom")
    assert timer.elapsed["denoise"] >= 0.0
