import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def _report(name, ok, detail=""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")


def _gray(name):
    import skimage.data
    from skimage.color import rgb2gray
    from skimage.util import img_as_ubyte

    img = getattr(skimage.data, name)()
    if img.ndim == 3:
        img = img_as_ubyte(rgb2gray(img))
    return np.asarray(img, dtype=np.uint8)


@pytest.fixture(scope="session")
def camera():
    pytest.importorskip("skimage")
    return _gray("camera")


@pytest.fixture(scope="session")
def real_crops():
    """64x64 crops from the scikit-image sample images."""
    pytest.importorskip("skimage")
    crops = []
    for name in ("camera", "moon", "coins", "page", "text", "astronaut", "coffee", "chelsea", "brick", "grass", "gravel", "clock"):
        img = _gray(name)
        h, w = img.shape
        for r, c in ((0, 0), (h // 2 - 32, w // 2 - 32)):
            crops.append(img[r : r + 64, c : c + 64].copy())
    return crops
