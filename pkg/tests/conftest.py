import sys
from pathlib import Path

import numpy as np
import pytest

from qappell.phi_series import PARAMS, PhiKind, PhiSpec
from qappell.relations import TermList

sys.path.insert(0, str(Path(__file__).parent))

GENERIC = dict(a=0.3, ap=0.25, b=0.2, bp=0.1, c=0.7, cp=0.6)


def generic(kind: PhiKind | str, q=0.5, x=0.2, y=0.1, **overrides) -> PhiSpec:
    """The reference point q=0.5, a=0.3, b=0.2, b'=0.1, c=0.7, c'=0.6 (a'=0.25), x=0.2, y=0.1."""
    kind = PhiKind.parse(kind) if isinstance(kind, str) else kind
    names = PARAMS[kind][0] + PARAMS[kind][1]
    values = {n: overrides.get(n, GENERIC[n]) for n in names}
    return PhiSpec.build(kind, q, x, y, **values)


def random_spec(rng: np.random.Generator, kind: PhiKind, arg_max=0.4, q=None) -> PhiSpec:
    def disk(r):
        return complex(r * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))

    if q is None:
        q = complex(rng.uniform(0.1, 0.8) * np.exp(2j * np.pi * rng.random()))
    names = PARAMS[kind][0] + PARAMS[kind][1]
    return PhiSpec.build(kind, q, disk(arg_max), disk(arg_max), **{n: disk(0.9) for n in names})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def same_terms(a: TermList, b: TermList, rel=1e-13) -> bool:
    """Equal as multisets of (coefficient, spec) up to ``rel`` on every number."""
    if len(a) != len(b):
        return False
    unused = list(b)
    for coeff, spec in a:
        for j, (c2, s2) in enumerate(unused):
            if s2.kind is spec.kind and _close_spec(spec, s2) and abs(coeff - c2) <= rel * max(1, abs(c2)):
                del unused[j]
                break
        else:
            return False
    return True


def _close_spec(s, t, rel=1e-14):
    pairs = list(zip(s.numerators + s.denominators + (s.x, s.y), t.numerators + t.denominators + (t.x, t.y)))
    return all(abs(u - v) <= rel * max(1, abs(v)) for u, v in pairs)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
