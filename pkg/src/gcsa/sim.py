"""Random reference-with-mutations model and growth-bound experiments.

The model: per position one reference node with a uniform random label and,
with probability p, an alternate node carrying a different label; complete
bipartite edges connect consecutive positions, with '#' and '$' sentinels
at the ends. Running the production doubling construction over sampled
instances and comparing per-round node/edge/collision counts against the
closed-form expectation bounds validates the analysis empirically.

Bounds (k = context length 2**h after round h):
    nodes       N(k) = n * (1 + p) ** k + 2
    edges       N(k) * (1 + p)
    collisions  C(k) = n**2 * (1 + p) ** (3 * k) / sigma ** k

All randomness flows through seeded random.Random (Mersenne Twister), and
the seed is recorded in every report row.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .automaton import Automaton, Alphabet
from .construction import build_sorted_nodes, round_stats
from .errors import InputError


@dataclass
class RandomModelParams:
    n: int
    p: float
    sigma: int = 4
    seed: int = 0
    trials: int = 30

    def __post_init__(self):
        if self.n < 1:
            raise InputError("reference length must be >= 1")
        if not (0.0 <= self.p <= 1.0):
            raise InputError("mutation rate must be in [0, 1]")
        if self.sigma < 2:
            raise InputError("alphabet size must be >= 2")
        if self.trials < 1:
            raise InputError("need at least one trial")

    def theorem_regime(self):
        """True iff p < sigma**(1/3) - 1, the regime of the tail bound."""
        return self.p < self.sigma ** (1.0 / 3.0) - 1.0


def node_bound(n, p, k):
    return n * (1.0 + p) ** k + 2.0


def edge_bound(n, p, k):
    return node_bound(n, p, k) * (1.0 + p)


def collision_bound(n, p, sigma, k):
    return (n * n) * (1.0 + p) ** (3 * k) / float(sigma) ** k


def sortedness_round_bound(n, p, sigma, epsilon=0.01):
    """Round h* by which sorting completes with probability >= 1 - epsilon.

    Solves C(k) <= epsilon for the smallest power-of-two k; requires the
    theorem regime p < sigma**(1/3) - 1.
    """
    denom = 1.0 - 3.0 * math.log(1.0 + p, sigma)
    if denom <= 0:
        raise InputError("mutation rate outside the theorem regime")
    k = 2.0 * math.log(n * n / epsilon, sigma) / denom
    return max(0, math.ceil(math.log2(max(k, 1.0))))


def _alphabet_for(sigma):
    letters = "ACGT" if sigma == 4 else \
        "".join(chr(ord("A") + i) for i in range(sigma))
    return Alphabet(letters)


def generate_random_automaton(n, p, sigma=4, rng=None):
    """One instance of the IID reference-with-mutations automaton."""
    if rng is None:
        rng = random.Random(0)
    alphabet = _alphabet_for(sigma)
    a = Automaton(alphabet)
    initial = a.add_node(sigma + 1, value=0)
    previous = [initial]
    for i in range(1, n + 1):
        ref_code = rng.randrange(1, sigma + 1)
        layer = [a.add_node(ref_code, value=i)]
        if rng.random() < p:
            alt = rng.randrange(1, sigma)
            if alt >= ref_code:
                alt += 1
            layer.append(a.add_node(alt, value=i))
        for u in previous:
            for v in layer:
                a.add_edge(u, v)
        previous = layer
    final = a.add_node(0, value=n + 1)
    for u in previous:
        a.add_edge(u, final)
    return a


def count_colliding_pairs(records):
    """Unordered record pairs whose context labels are identical.

    Contexts are identical exactly when ranks are equal, so this is the
    sum of C(group, 2) over rank groups. Records must be rank-sorted,
    which every construction step maintains.
    """
    total = 0
    i = 0
    n = len(records)
    while i < n:
        j = i
        while j < n and records[j].rank == records[i].rank:
            j += 1
        size = j - i
        total += size * (size - 1) // 2
        i = j
    return total


@dataclass
class GrowthReport:
    params: RandomModelParams
    per_trial: list = field(default_factory=list)   # (trial, h, stats dict)
    per_round: list = field(default_factory=list)   # aggregate dicts per h
    termination_rounds: dict = field(default_factory=dict)  # round -> trials

    def max_round(self):
        return max((h for _, h, _ in self.per_trial), default=0)


def run_growth_experiment(params):
    """Run `trials` constructions and aggregate observed counts per round.

    Trials that finish early are carried forward as fixpoints (a fully
    sorted automaton no longer changes), so every trial contributes to
    every round's mean.
    """
    report = GrowthReport(params)
    trial_series = []
    for t in range(params.trials):
        rng = random.Random(params.seed * 1_000_003 + t)
        auto = generate_random_automaton(params.n, params.p, params.sigma, rng)
        series = {}

        def instrument(h, records, series=series, auto=auto):
            stats = round_stats(records, auto)
            series[h] = stats

        _, rounds, _ = build_sorted_nodes(auto, instrument=instrument)
        trial_series.append(series)
        report.termination_rounds[rounds] = \
            report.termination_rounds.get(rounds, 0) + 1
        for h, stats in sorted(series.items()):
            report.per_trial.append((t, h, stats))

    max_h = max(max(s) for s in trial_series)
    for h in range(max_h + 1):
        rows = []
        for series in trial_series:
            last = max(hh for hh in series if hh <= h)
            rows.append(series[last])
        k = 2 ** h
        report.per_round.append({
            "h": h,
            "k": k,
            "mean_nodes": sum(r["nodes"] for r in rows) / len(rows),
            "mean_edges": sum(r["edges"] for r in rows) / len(rows),
            "mean_colliding_pairs":
                sum(r["colliding_pairs"] for r in rows) / len(rows),
            "bound_nodes": node_bound(params.n, params.p, k),
            "bound_edges": edge_bound(params.n, params.p, k),
            "bound_collisions":
                collision_bound(params.n, params.p, params.sigma, k),
        })
    return report


def report_to_csv(report):
    """CSV text: one row per (trial, h) plus one aggregate row per h."""
    p = report.params
    lines = [
        "kind,n,p,sigma,seed,trial,h,k,nodes,edges,colliding_pairs,"
        "unsorted,bound_nodes,bound_edges,bound_collisions"
    ]
    for trial, h, stats in report.per_trial:
        lines.append(
            f"trial,{p.n},{p.p},{p.sigma},{p.seed},{trial},{h},{2 ** h},"
            f"{stats['nodes']},{stats['edges']},{stats['colliding_pairs']},"
            f"{stats['unsorted']},,,")
    for row in report.per_round:
        lines.append(
            f"aggregate,{p.n},{p.p},{p.sigma},{p.seed},,{row['h']},{row['k']},"
            f"{row['mean_nodes']:.6g},{row['mean_edges']:.6g},"
            f"{row['mean_colliding_pairs']:.6g},,"
            f"{row['bound_nodes']:.6g},{row['bound_edges']:.6g},"
            f"{row['bound_collisions']:.6g}")
    for rounds in sorted(report.termination_rounds):
        lines.append(
            f"termination,{p.n},{p.p},{p.sigma},{p.seed},,{rounds},,"
            f"{report.termination_rounds[rounds]},,,,,,")
    return "\n".join(lines) + "\n"


DEFAULT_GRID = {
    "n": (500, 1000, 5000),
    "p": (0.001, 0.01, 0.05),
    "sigma": 4,
    "trials": 30,
}


def run_default_grid(seed=0, trials=None):
    """The standard validation grid; returns a list of GrowthReports."""
    reports = []
    t = trials if trials is not None else DEFAULT_GRID["trials"]
    for n in DEFAULT_GRID["n"]:
        for p in DEFAULT_GRID["p"]:
            params = RandomModelParams(n=n, p=p, sigma=DEFAULT_GRID["sigma"],
                                       seed=seed, trials=t)
            reports.append(run_growth_experiment(params))
    return reports
