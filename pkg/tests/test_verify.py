import json

import pytest

from boundedgames.formula import EXISTS, FORALL, PairedSatInstance, QbfFormula
from boundedgames.generators import ae_n1_family, psat_n1_family
from boundedgames.qbf import FALSIFIER_WIN
from boundedgames.verify import (FAIL, FROZEN_AE, FROZEN_CW, KINDS, PASS, STRICT, UNKNOWN,
                                 CalibrationError, CwConfig, calibrate_ae_convention,
                                 calibrate_cw_mapping, run_verification,
                                 verify_reduction)

E, A = EXISTS, FORALL


def test_cw_calibration_reproduces_frozen_mapping():
    assert calibrate_cw_mapping(psat_n1_family()) == FROZEN_CW
    assert FROZEN_CW == CwConfig("client", FALSIFIER_WIN)


def test_cw_calibration_empty_sample_is_under_determined():
    with pytest.raises(CalibrationError) as err:
        calibrate_cw_mapping([])
    assert len(err.value.survivors) == 2


def test_ae_calibration_has_no_consistent_setting():
    with pytest.raises(CalibrationError) as err:
        calibrate_ae_convention(ae_n1_family(), STRICT)
    assert err.value.survivors == []
    assert FROZEN_AE is None


def test_ae_calibration_under_determined_sample():
    sample = [QbfFormula.build([(1, E), (2, A)], [])]
    with pytest.raises(CalibrationError) as err:
        calibrate_ae_convention(sample, STRICT)
    assert len(err.value.survivors) >= 1 and "under-determined" in str(err.value)


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "ae"])
def test_small_batches_pass(kind):
    rep = run_verification(kind, seed=3, count=4, config={"playouts": 10})
    assert rep.ok, [r for r in rep.failures()]


def test_ae_batch_reports_missing_calibration():
    rep = run_verification("ae", seed=0, count=3)
    assert rep.records[0].check == "ae-calibration" and rep.records[0].status == FAIL
    outcome = [r for r in rep.records if r.check == "ae-outcome"]
    assert outcome and all(r.status == UNKNOWN for r in outcome)
    structural = [r for r in rep.records[1:] if r.check != "ae-outcome"]
    assert structural and all(r.status == PASS for r in structural)


def test_report_json_is_reproducible_and_timing_free():
    a = run_verification("mm", seed=1, count=5).to_json()
    b = run_verification("mm", seed=1, count=5).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert all("elapsed" not in r for r in a["records"])
    timed = run_verification("mm", seed=1, count=1, timings=True).to_json(timings=True)
    assert all("elapsed" in r for r in timed["records"])


def test_report_carries_frozen_config():
    rep = verify_reduction("cw", PairedSatInstance.build([(1, 2)], [[1, 2]]))
    assert rep.config["cw"] == {"lone_vertex_rule": "client", "client_role": FALSIFIER_WIN}
    assert rep.config["ae"] is None


def test_cw_beyond_exact_range_is_unknown():
    big = PairedSatInstance.build([(1, 2), (3, 4), (5, 6)], [[1, 3, 5]])
    rep = verify_reduction("cw", big)
    assert [r.status for r in rep.records if r.check == "cw-outcome"] == [UNKNOWN]


def test_unknown_kind():
    with pytest.raises(ValueError):
        verify_reduction("chess", None)
