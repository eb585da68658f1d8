"""
Reference outputs kept under classgroups/fixtures.

Hand-checked files are edited by hand. The two files produced by the search
pipeline are regenerated with ``manage.py write_golden``.
"""

import json
from pathlib import Path
from typing import Any

from .family import FamilyParams
from .report_models import SearchConfig
from .search_service import candidate_triples, evaluate_triple

FIXTURES_DIR = Path(__file__).resolve().parent / 'fixtures'

# Fixed so that golden output does not depend on UNIT_DIGIT_CAP.
GOLDEN_DIGIT_CAP = 20_000

SEARCH_GOLDEN = 'search_max100_eta1.csv'
SMALLEST_TRIPLE_GOLDEN = 'smallest_theorem_triple.json'
SMALLEST_TRIPLE_BOUND = 500


def golden_search_config() -> SearchConfig:
    """search --max-prime 100 --eta 1 at the golden digit cap."""
    return SearchConfig(max_prime=100, eta='1', unit_digit_cap=GOLDEN_DIGIT_CAP)


def smallest_theorem_triple(max_prime: int = SMALLEST_TRIPLE_BOUND) -> FamilyParams | None:
    """The eta = 1 triple with the least q*r*s whose record is ok and Type1-α2."""
    candidates = sorted(candidate_triples(max_prime, (1,)), key=lambda p: (p.qrs, p.q, p.r))
    for params in candidates:
        record = evaluate_triple(params, 'full-theorem', GOLDEN_DIGIT_CAP)
        if record.status == 'ok' and record.galois == 'Type1-α2':
            return params
    return None


def fixture_path(name: str) -> Path:
    return FIXTURES_DIR / name


def load_json(name: str) -> Any:
    with fixture_path(name).open(encoding='utf-8') as handle:
        return json.load(handle)
