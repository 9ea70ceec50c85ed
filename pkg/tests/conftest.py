import numpy as np
import pytest

from dipolefield import GrayImage


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)


@pytest.fixture
def step_edge():
    """Vertical step: dark left half, bright right half."""
    b = np.zeros((64, 64), dtype=np.uint8)
    b[:, 32:] = 255
    return GrayImage(b)


def _radial_distance(n=128, center=63.5):
    yy, xx = np.mgrid[0:n, 0:n].astype(np.float64)
    return np.hypot(xx - center, yy - center), xx - center, yy - center


@pytest.fixture(scope="session")
def disk():
    """Filled disk, radius 50 in 128x128, rendered with a 4px linear edge ramp.

    A hard-thresholded circle leaves staircase runs whose local normals
    deviate from the radius; the short band-limited ramp removes that
    rasterization artifact while keeping the disk crisp.
    """
    rho, _, _ = _radial_distance()
    pix = np.round(255.0 * np.clip((50.0 - rho) / 4.0 + 0.5, 0.0, 1.0))
    return GrayImage(pix.astype(np.uint8))


@pytest.fixture(scope="session")
def hard_disk():
    rho, _, _ = _radial_distance()
    return GrayImage(np.where(rho <= 50.0, 255, 0).astype(np.uint8))


@pytest.fixture(scope="session")
def blurred_disk(hard_disk):
    from scipy.ndimage import gaussian_filter

    soft = gaussian_filter(hard_disk.pixels.astype(np.float64), 2.0)
    return GrayImage(np.round(soft).astype(np.uint8))


@pytest.fixture(scope="session")
def glyph_sheet():
    """Three well-separated dark glyphs on white: square, disk, and an L."""
    g = np.full((128, 128), 255, dtype=np.uint8)
    g[18:38, 14:34] = 0
    yy, xx = np.mgrid[0:128, 0:128]
    g[np.hypot(xx - 92, yy - 30) <= 11] = 0
    g[80:112, 30:38] = 0
    g[104:112, 30:62] = 0
    return GrayImage(g)


_acceptance_order = []


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance.py::" in item.nodeid:
            _acceptance_order.append(item.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance test, in file order."""
    outcome = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            when = getattr(rep, "when", None)
            if when == "call" or (when == "setup" and key == "error"):
                outcome[nodeid.split("::")[-1]] = key == "passed"
    if outcome:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in _acceptance_order:
            if name in outcome:
                ok = outcome[name]
                terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}")
