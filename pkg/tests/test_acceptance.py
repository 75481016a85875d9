"""Acceptance suite: every top-level criterion at its stated tolerance.

Each test prints a single pass/fail line with the measured value, so a
plain `pytest -s tests/test_acceptance.py` doubles as the sign-off report.
The same checks back the `twomode validate --level full` subcommand.
"""

import pytest

from twomode import validation


CRITERIA = [
    ("1-staircase", lambda: validation.check_fig1_staircase(points=201)),
    ("2-ground-energy", validation.check_ground_energy_formula),
    ("3-perturbation", validation.check_perturbation_scaling),
    ("4-meanfield", validation.check_meanfield_consistency),
    ("5-drive-curves", lambda: validation.check_fig2_properties(points=201)),
    ("6-dynamics", lambda: validation.check_fig3_dynamics(doubling=True)),
    ("7-canonical", validation.check_canonical_invariants),
    ("8-short-time", validation.check_short_time_sbf),
]


@pytest.mark.parametrize("label,runner", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance_criterion(label, runner):
    result = runner()
    status = "PASS" if result.passed else "FAIL"
    print(
        f"[{status}] criterion {label} ({result.check_id}): "
        f"value={result.value:.3e} tolerance={result.tolerance:.3e}"
    )
    if result.detail:
        print(f"        {result.detail}")
    assert result.passed, f"{result.check_id}: {result.detail}"


def test_invariant_registry_quick():
    results = validation.run_checks("quick")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.check_id}: value={r.value:.3e} tol={r.tolerance:.3e}")
    failed = [r.check_id for r in results if not r.passed]
    assert not failed, f"failed checks: {failed}"
