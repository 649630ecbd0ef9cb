import numpy as np
import pytest

from src.antiinvariant import (
    CONSISTENT,
    CONSISTENT_FLAT,
    INCONSISTENT,
    anti_invariant_checks,
    check_anti_invariant,
    space_form_consistency,
)
from src.errors import NotAntiInvariant


def test_anti_invariant_map_passes(anti):
    report = anti_invariant_checks(anti.submersion, 2, 3)
    assert report.passed, report.failures()
    assert report.consistency == CONSISTENT_FLAT


def test_precondition_rejects_vertical_xi(e3, hor):
    x = np.array([0.1, -0.2, 0.3, 0.05, -0.1])
    with pytest.raises(NotAntiInvariant):
        check_anti_invariant(e3.submersion, x)
    with pytest.raises(NotAntiInvariant):
        check_anti_invariant(hor.submersion, x)


@pytest.mark.parametrize("c, norm, expected", [
    (0.0, 0.0, CONSISTENT_FLAT),
    (-1.0, 0.5, CONSISTENT),
    (-1.0, 0.0, INCONSISTENT),
])
def test_space_form_consistency(c, norm, expected):
    assert space_form_consistency(c, norm) == expected
