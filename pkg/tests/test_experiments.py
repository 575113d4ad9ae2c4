import json
import subprocess
import sys
from pathlib import Path

import pytest

from stabil.experiments import (
    CanonicalConfig,
    FalsifyConfig,
    HardyConfig,
    RoundTripConfig,
    SufficiencyConfig,
    config_from_args,
    config_parser,
    run_canonical,
    run_falsify,
    run_hardy,
    run_round_trip,
    run_sufficiency,
)

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def test_config_parser_round_trip():
    args = config_parser(SufficiencyConfig, "x").parse_args(["--instances", "3", "--max-degree", "2"])
    cfg = config_from_args(SufficiencyConfig, args)
    assert cfg == SufficiencyConfig(instances=3, max_degree=2)


def test_small_runs_are_clean_and_deterministic():
    a = run_sufficiency(SufficiencyConfig(instances=5, polys=10, seed=3))
    b = run_sufficiency(SufficiencyConfig(instances=5, polys=10, seed=3))
    assert a["images"] == b["images"] and a["images"]["unstable"] == 0
    assert run_round_trip(RoundTripConfig(operators=10))["verdicts"] == {"ProductComposition": 10}
    out = run_falsify(FalsifyConfig(mutants=3, budget=2000))
    assert out["found"] == 3 and all(1 <= r["draws"] <= 2000 for r in out["mutants"])
    h = run_hardy(HardyConfig(polys=50, sequences=20))
    assert h["agree"] == 50 and h["functional_recovered"] == 20 and h["perturbed_rejected"] == 20
    c = run_canonical(CanonicalConfig(zero_sets=10))
    assert c["failures"] == 0 and max(c["worst_ratio_by_n"]) <= 1 + 1e-12


@pytest.mark.parametrize("script,args", [
    ("canonical_bounds.py", ["--zero-sets", "3"]),
    ("hardy_oracles.py", ["--polys", "10", "--sequences", "5"]),
])
def test_scripts_print_json(script, args):
    out = subprocess.run([sys.executable, str(SCRIPTS / script), *args], capture_output=True, check=True)
    assert "config" in json.loads(out.stdout)
