import sys
from functools import lru_cache
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

DATA = Path(__file__).resolve().parents[1] / "src" / "omlogic" / "data"


@lru_cache(maxsize=None)
def omls(n=8):
    from omlogic.oml import enumerate_omls
    return tuple(enumerate_omls(n))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
