import numpy as np
import pytest

from szccs.codeset import CodeSet
from szccs.construct import Theorem2Params, czcp_codeset, random_binary, theorem2_szccs, zadoff_chu
from szccs.training import build_omega

# acceptance results collected by test_acceptance.py: {number: (passed, detail)}
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def s32():
    """The (8, 2, 32, 7) set from the binary m=5 construction."""
    return theorem2_szccs(Theorem2Params(2, 5))


def zc_codeset(theta=32):
    return CodeSet(np.array([[zadoff_chu(theta, 1), zadoff_chu(theta, 3)], [zadoff_chu(theta, 5), zadoff_chu(theta, 7)]]))


def rb_codeset(theta=32, seed=2024):
    return CodeSet.from_sequences([[random_binary(theta, [seed, k, j]) for j in range(2)] for k in range(2)])


def baseline_omegas(lam, s32_set):
    """The four 4-antenna, 2-active training matrices compared in the MSE experiments."""
    return {
        "szccs": build_omega(s32_set, 4, 2, lam),
        "czcp": build_omega(czcp_codeset("omega"), 4, 2, lam),
        "zc": build_omega(zc_codeset(), 4, 2, lam),
        "random": build_omega(rb_codeset(), 4, 2, lam),
    }


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
