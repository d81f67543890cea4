import pytest
from hypothesis import settings

from blochlab import Gauge

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


BUILTIN = {
    "const": Gauge.const(),
    "pow:0.5": Gauge.power(0.5),
    "log:-0.5": Gauge.log(-0.5),
}


@pytest.fixture(params=sorted(BUILTIN))
def builtin_gauge(request):
    return BUILTIN[request.param]
