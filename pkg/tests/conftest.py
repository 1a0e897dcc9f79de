from __future__ import annotations

import pytest

from hypercs.model import CANONICAL, ModelParams, pho

FAMILIES = {
    "canonical": CANONICAL,
    "pho_1.5": pho(1.0),
    "pho_2.5": pho(2.0),
    "p1q0": ModelParams(a=(1.3,)),
    "p2q2_equal": ModelParams(a=(1.7, 2.4), b=(2.4, 1.7)),
}


@pytest.fixture(params=sorted(FAMILIES), ids=sorted(FAMILIES))
def family(request):
    return FAMILIES[request.param]
