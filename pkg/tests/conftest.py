import pytest
from hypothesis import HealthCheck, settings

from netmeter.resources import make_group_scheduler, make_inline_scheduler, make_pool_scheduler

settings.register_profile(
    "netmeter",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("netmeter")


@pytest.fixture
def inline_sched():
    return make_inline_scheduler()


@pytest.fixture
def pool_sched():
    with make_pool_scheduler(4) as sched:
        yield sched


@pytest.fixture
def group_sched():
    with make_group_scheduler([2, 2, 2, 2]) as sched:
        yield sched


@pytest.fixture(params=["inline", "pool", "group"])
def any_sched(request):
    if request.param == "inline":
        yield make_inline_scheduler()
    elif request.param == "pool":
        with make_pool_scheduler(4) as sched:
            yield sched
    else:
        with make_group_scheduler([2, 2, 2, 2]) as sched:
            yield sched
