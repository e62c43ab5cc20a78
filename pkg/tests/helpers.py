"""Shared test plumbing."""

from multbound.structure import GroupProfile


def make_profile(p=3, n=3, k=1, d=2, c=2, delta=None, gamma=1, t=0, **flags) -> GroupProfile:
    return GroupProfile(p=p, n=n, k=k, d=d, c=c, delta=d if delta is None else delta, gamma=gamma, t=t,
                        is_abelian=c < 2, **flags)


def random_profile(rng) -> GroupProfile:
    """A nonabelian profile obeying d + k <= n, c <= k + 1 and gamma <= min(k, d(d-1)/2)."""
    p = int(rng.choice([2, 3, 5, 7]))
    d = int(rng.integers(2, 9))
    k = int(rng.integers(1, 11))
    c = int(rng.integers(2, k + 2))
    n = d + k + int(rng.integers(0, 7))
    gamma = int(rng.integers(1, min(k, d * (d - 1) // 2) + 1))
    delta = int(rng.integers(2, d + 1))
    t = int(rng.integers(0, n - d + 1))
    return make_profile(p=p, n=n, k=k, d=d, c=c, delta=delta, gamma=gamma, t=t)
