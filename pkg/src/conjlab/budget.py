"""Resource caps for exhaustive searches.

Every enumeration that can blow up (balls, closures, conjugator scans)
takes a ``budget`` argument: the maximum number of states it may touch.
``None`` means "use the default", which is 10**7 unless the environment
variable ``CONJLAB_BUDGET`` overrides it.
"""

import os

DEFAULT_BUDGET = 10_000_000


def resolve_budget(budget=None):
    if budget is not None:
        if budget <= 0:
            raise ValueError("budget must be positive")
        return budget
    env = os.environ.get("CONJLAB_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET
