"""Random small instances for tests, sweeps and the acceptance suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .instance import Instance, make_instance


@dataclass
class GeneratorConfig:
    n_min: int = 2
    n_max: int = 8
    time_max: int = 10
    setup_max: int = 5
    edge_prob: float = 0.3
    repair_triangles: bool = True


def repair_triangles(t, tau, mu) -> tuple[list[list[int]], list[list[int]]]:
    """Lower setups until removing any task from a station can never lengthen it.

    Runs min-closure passes over the forward form and both mixed backward forms
    until nothing changes. Values only ever decrease.
    """
    n = len(t)
    tau = [list(r) for r in tau]
    mu = [list(r) for r in mu]
    changed = True
    while changed:
        changed = False
        for j in range(n):
            for a in range(n):
                if a == j:
                    continue
                for b in range(n):
                    if b == j:
                        continue
                    if a != b:
                        v = tau[a][j] + t[j] + tau[j][b]
                        if v < tau[a][b]:
                            tau[a][b] = v
                            changed = True
                    v = min(tau[a][j] + t[j] + mu[j][b], mu[a][j] + t[j] + tau[j][b])
                    if v < mu[a][b]:
                        mu[a][b] = v
                        changed = True
    return tau, mu


def random_dag(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    """Edges only go from a lower to a higher index of a random labeling."""
    label = list(range(n))
    rng.shuffle(label)
    return sorted((label[i], label[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p)


def random_instance(rng: random.Random, config: GeneratorConfig | None = None, n: int | None = None) -> Instance:
    """Random DAG, times and setups; a feasible cycle time and a station count are both set."""
    cfg = config or GeneratorConfig()
    n = n if n is not None else rng.randint(cfg.n_min, cfg.n_max)
    t = [rng.randint(1, cfg.time_max) for _ in range(n)]
    tau = [[0 if i == j else rng.randint(0, cfg.setup_max) for j in range(n)] for i in range(n)]
    mu = [[rng.randint(0, cfg.setup_max) for _ in range(n)] for _ in range(n)]
    if cfg.repair_triangles:
        tau, mu = repair_triangles(t, tau, mu)
    prec = random_dag(rng, n, cfg.edge_prob)
    alone = max(t[i] + mu[i][i] for i in range(n))
    c = rng.randint(alone, max(alone, sum(t) // 2 + cfg.setup_max))
    m = rng.randint(1, max(1, min(n, 4)))
    return make_instance(t, prec, tau, mu, cycle_time=c, station_count=m, name=f"rand{n}")


def instance_stream(seed: int, count: int, config: GeneratorConfig | None = None):
    rng = random.Random(seed)
    for k in range(count):
        inst = random_instance(rng, config)
        yield replace(inst, name=f"rand_s{seed}_{k}")
