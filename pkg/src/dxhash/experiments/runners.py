"""Experiment implementations behind the ``bench`` command line.

Every runner is deterministic given its configuration and seed: key streams
are 64-bit counters offset by a seed-derived base and pushed through the
package digest, and failed subsets are drawn from numpy generators seeded
from the config seed. Only metrics prefixed ``wallclock_`` depend on the
machine and the moment.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import __version__, _kernels as kernels, prg
from ..baselines import DEFAULT_TABLE_SIZE, DEFAULT_VNODES, HashRing, MaglevTable, jump_many
from ..core import DxHash
from ..replica import ReplicaSpec, place_replicas_bulk, rotate_on_scaleup
from ..weighted import WeightedDxHash, code_to_weight, quantize_weight
from .report import ReportRow

ALGORITHMS = ("dxhash", "ring", "maglev", "jump")
EXPERIMENTS = ("balance", "disruption", "asl", "throughput", "weighted", "ars", "memory")

THEORY_DOUBLING_BOUND = 7.0 / 24.0


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 2 at the CLI)."""


@dataclass
class ExperimentConfig:
    experiment: str
    algorithm: str = "dxhash"
    nodes: int = 1024
    working: tuple[int, ...] = ()
    keys: int = 1_000_000
    seed: int = 42
    step: int = 100
    end_working: int | None = None
    weights: str | None = None
    sweep: tuple[float, ...] = ()
    ratios: tuple[float, ...] = ()
    threads: int = 1
    sizes: tuple[int, ...] = ()
    vnodes: int = DEFAULT_VNODES
    table_size: int = DEFAULT_TABLE_SIZE

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.nodes < 1:
            raise ConfigError("--nodes must be >= 1")
        if self.keys < 1:
            raise ConfigError("--keys must be >= 1")
        if self.step < 1:
            raise ConfigError("--step must be >= 1")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if any(w < 1 for w in self.working):
            raise ConfigError("--working values must be >= 1")
        if any(n < 1 for n in self.sizes):
            raise ConfigError("--sizes values must be >= 1")
        if any(not 0.0 <= r < 1.0 for r in self.ratios):
            raise ConfigError("--ratios values must be in [0, 1)")
        if self.vnodes < 1:
            raise ConfigError("--vnodes must be >= 1")
        if self.table_size < 2:
            raise ConfigError("--table-size must be >= 2")


# -- deterministic inputs ----------------------------------------------------


def key_values(seed: int, n: int, start: int = 0) -> np.ndarray:
    """The key stream: 64-bit counters offset by a seed-derived base."""
    base = np.uint64(prg.next_seed(seed & prg.MASK64))
    return base + np.arange(start, start + n, dtype=np.uint64)


def key_seeds(seed: int, n: int, start: int = 0) -> np.ndarray:
    return kernels.digest8_vec(key_values(seed, n, start))


def random_states(seed: int, nodes: int, working: int, tag: int = 0) -> np.ndarray:
    """Byte state array with a seeded random choice of working slots."""
    if not 1 <= working <= nodes:
        raise ConfigError(f"working count {working} outside [1, {nodes}]")
    rng = np.random.default_rng([seed & prg.MASK64, nodes, working, tag])
    states = np.zeros(nodes, dtype=np.uint8)
    states[rng.choice(nodes, size=working, replace=False)] = 1
    return states


def first_working_states(nodes: int, working: int) -> np.ndarray:
    if not 1 <= working <= nodes:
        raise ConfigError(f"working count {working} outside [1, {nodes}]")
    states = np.zeros(nodes, dtype=np.uint8)
    states[:working] = 1
    return states


def _sharded_lookup(cluster: DxHash, seeds: np.ndarray, threads: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if threads <= 1 or seeds.size < threads:
        return cluster.lookup_many(seeds)
    chunks = np.array_split(seeds, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(cluster.lookup_many, chunks))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))  # type: ignore[return-value]


# -- balance -----------------------------------------------------------------


def _map_keys(cfg: ExperimentConfig, seeds: np.ndarray, working: int, tag: int) -> tuple[np.ndarray, dict[str, object]]:
    """Map predigested keys under cfg.algorithm; returns (owners, param extras)."""
    if cfg.algorithm == "dxhash":
        cluster = DxHash(random_states(cfg.seed, cfg.nodes, working, tag))
        nodes, _, _ = _sharded_lookup(cluster, seeds, cfg.threads)
        return nodes, {"nodes": cfg.nodes}
    if cfg.algorithm == "ring":
        ring = HashRing(range(working), cfg.vnodes)
        return ring.lookup_hashes(seeds & np.uint64(0xFFFFFFFF)).astype(np.int64), {
            "vnodes": cfg.vnodes
        }
    if cfg.algorithm == "maglev":
        table = MaglevTable(range(working), cfg.table_size)
        return table.lookup_digests(seeds).astype(np.int64), {"table_size": cfg.table_size}
    if cfg.algorithm == "jump":
        return jump_many(seeds, working).astype(np.int64), {}
    raise ConfigError(f"unknown algorithm {cfg.algorithm!r}")


def run_balance(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    sweeps = cfg.working or (max(1, cfg.nodes // 2),)
    rows: list[ReportRow] = []
    seeds = key_seeds(cfg.seed, cfg.keys)
    for w in sweeps:
        if cfg.algorithm == "dxhash" and w > cfg.nodes:
            raise ConfigError(f"--working {w} exceeds --nodes {cfg.nodes}")
        owners, extras = _map_keys(cfg, seeds, w, tag=w)
        if cfg.algorithm == "dxhash":
            working_ids = np.flatnonzero(random_states(cfg.seed, cfg.nodes, w, tag=w))
            counts = np.bincount(owners, minlength=cfg.nodes)[working_ids]
        else:
            working_ids = np.arange(w)
            counts = np.bincount(owners, minlength=w)
        params: dict[str, object] = {"working": w, "keys": cfg.keys, **extras}
        mean = float(counts.mean())
        cv = float(counts.std() / mean)
        rows.append(ReportRow(cfg.experiment, cfg.algorithm, params, "cv", cv))
        rows.append(ReportRow(cfg.experiment, cfg.algorithm, params, "mean_count", mean))
        rows.append(ReportRow(cfg.experiment, cfg.algorithm, params, "min_count", int(counts.min())))
        rows.append(ReportRow(cfg.experiment, cfg.algorithm, params, "max_count", int(counts.max())))
        for node, count in zip(working_ids, counts):
            rows.append(
                ReportRow(
                    cfg.experiment,
                    cfg.algorithm,
                    {**params, "node": int(node)},
                    "node_count",
                    int(count),
                )
            )
    return rows


# -- disruption ----------------------------------------------------------------


def run_disruption(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    start = cfg.working[0] if cfg.working else 100
    end = cfg.end_working if cfg.end_working is not None else min(10 * start, cfg.nodes)
    if cfg.algorithm == "dxhash" and end > cfg.nodes:
        raise ConfigError(f"--end-working {end} exceeds --nodes {cfg.nodes}")
    if end < start + cfg.step:
        raise ConfigError("schedule needs at least one step")
    seeds = key_seeds(cfg.seed, cfg.keys)
    hashes32 = seeds & np.uint64(0xFFFFFFFF)
    rows: list[ReportRow] = []

    cluster: DxHash | None = None
    ring: HashRing | None = None
    if cfg.algorithm == "dxhash":
        cluster = DxHash(first_working_states(cfg.nodes, start))
        before = _sharded_lookup(cluster, seeds, cfg.threads)[0]
    elif cfg.algorithm == "ring":
        ring = HashRing(range(start), cfg.vnodes)
        before = ring.lookup_hashes(hashes32)
    elif cfg.algorithm == "maglev":
        before = MaglevTable(range(start), cfg.table_size).lookup_digests(seeds)
    else:
        before = jump_many(seeds, start)

    for w in range(start, end, cfg.step):
        target = min(w + cfg.step, end)
        added = target - w
        if cfg.algorithm == "dxhash":
            assert cluster is not None
            for _ in range(added):
                cluster.add_node()
            after = _sharded_lookup(cluster, seeds, cfg.threads)[0]
        elif cfg.algorithm == "ring":
            assert ring is not None
            for node in range(w, target):
                ring.add_node(node)
            after = ring.lookup_hashes(hashes32)
        elif cfg.algorithm == "maglev":
            after = MaglevTable(range(target), cfg.table_size).lookup_digests(seeds)
        else:
            after = jump_many(seeds, target)
        params = {"from": w, "to": target, "keys": cfg.keys}
        if cfg.algorithm == "dxhash":
            params["nodes"] = cfg.nodes
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "remap_ratio",
                float(np.mean(before != after)),
            )
        )
        rows.append(
            ReportRow(cfg.experiment, cfg.algorithm, params, "ideal_ratio", added / target)
        )
        before = after
    return rows


# -- search length -------------------------------------------------------------


def run_asl(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    if cfg.algorithm != "dxhash":
        raise ConfigError("asl measures the sequence walk; only dxhash applies")
    ratios = cfg.ratios or tuple(i / 10 for i in range(10))
    seeds = key_seeds(cfg.seed, cfg.keys)
    rows: list[ReportRow] = []
    for idx, ratio in enumerate(ratios):
        working = cfg.nodes - int(round(cfg.nodes * ratio))
        if working < 1:
            raise ConfigError(f"failure ratio {ratio} leaves no working node")
        cluster = DxHash(random_states(cfg.seed, cfg.nodes, working, tag=1000 + idx))
        _, taus, fallback = _sharded_lookup(cluster, seeds, cfg.threads)
        params = {
            "nodes": cfg.nodes,
            "working": working,
            "failure_ratio": ratio,
            "keys": cfg.keys,
        }
        rows.append(
            ReportRow(cfg.experiment, cfg.algorithm, params, "mean_search_length", float(taus.mean()))
        )
        rows.append(
            ReportRow(cfg.experiment, cfg.algorithm, params, "var_search_length", float(taus.var()))
        )
        expected = cfg.nodes / working
        rows.append(
            ReportRow(cfg.experiment, cfg.algorithm, params, "theory_mean", expected)
        )
        rows.append(
            ReportRow(
                cfg.experiment, cfg.algorithm, params, "theory_var", expected * (expected - 1.0)
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment, cfg.algorithm, params, "fallback_count", int(fallback.sum())
            )
        )
    return rows


# -- throughput ------------------------------------------------------------------


def run_throughput(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    if cfg.algorithm != "dxhash":
        raise ConfigError("throughput is reported for dxhash; baselines have no walk to count")
    ratios = cfg.ratios or (0.0, 0.5, 0.9)
    seeds = key_seeds(cfg.seed, cfg.keys)
    rows: list[ReportRow] = []
    for idx, ratio in enumerate(ratios):
        working = cfg.nodes - int(round(cfg.nodes * ratio))
        if working < 1:
            raise ConfigError(f"failure ratio {ratio} leaves no working node")
        cluster = DxHash(random_states(cfg.seed, cfg.nodes, working, tag=2000 + idx))
        start = time.perf_counter()
        _, taus, _ = _sharded_lookup(cluster, seeds, cfg.threads)
        elapsed = time.perf_counter() - start
        params = {
            "nodes": cfg.nodes,
            "working": working,
            "failure_ratio": ratio,
            "keys": cfg.keys,
            "impl": kernels.IMPL_NAME,
            "threads": cfg.threads,
        }
        rows.append(
            ReportRow(cfg.experiment, cfg.algorithm, params, "mean_search_length", float(taus.mean()))
        )
        rows.append(
            ReportRow(
                cfg.experiment, cfg.algorithm, params, "total_prg_iterations", int(taus.sum())
            )
        )
        rows.append(
            ReportRow(cfg.experiment, cfg.algorithm, params, "wallclock_seconds", elapsed)
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "wallclock_lookups_per_sec",
                cfg.keys / elapsed if elapsed > 0 else 0.0,
            )
        )
    return rows


# -- weighted --------------------------------------------------------------------


def parse_weight_groups(spec: str, nodes: int) -> list[tuple[int, float]]:
    """Parse "COUNTxWEIGHT,COUNTxWEIGHT,..." and check it covers the cluster."""
    groups: list[tuple[int, float]] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        count_s, sep, weight_s = part.partition("x")
        if not sep:
            raise ConfigError(f"bad weight group {part!r}, expected COUNTxWEIGHT")
        try:
            count = int(count_s)
            weight = float(weight_s)
        except ValueError as exc:
            raise ConfigError(f"bad weight group {part!r}") from exc
        if count < 1:
            raise ConfigError(f"weight group {part!r} has no nodes")
        if not 0.0 <= weight <= 1.0:
            raise ConfigError(f"weight {weight} outside [0, 1]")
        groups.append((count, weight))
    if not groups:
        raise ConfigError("empty --weights spec")
    total = sum(c for c, _ in groups)
    if total != nodes:
        raise ConfigError(f"--weights covers {total} nodes, --nodes says {nodes}")
    return groups


def _run_weighted_config(
    cfg: ExperimentConfig, groups: list[tuple[int, float]], seeds: np.ndarray
) -> list[ReportRow]:
    weights = np.concatenate([np.full(c, w) for c, w in groups])
    cluster = WeightedDxHash(weights)
    nodes_arr, taus, _ = cluster.lookup_many(seeds)
    counts = np.bincount(nodes_arr, minlength=cfg.nodes)
    total_weight = sum(c * code_to_weight(quantize_weight(w)) for c, w in groups)
    base_params = {
        "nodes": cfg.nodes,
        "keys": cfg.keys,
        "groups": [[c, w] for c, w in groups],
    }
    rows: list[ReportRow] = []
    offset = 0
    group_means: list[float] = []
    for i, (count, weight) in enumerate(groups):
        mean_hits = float(counts[offset : offset + count].mean())
        group_means.append(mean_hits)
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                {**base_params, "group": i, "weight": weight},
                "group_mean_hits",
                mean_hits,
            )
        )
        offset += count
    if len(groups) == 2 and group_means[0] > 0:
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                base_params,
                "hit_ratio",
                group_means[1] / group_means[0],
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                base_params,
                "expected_ratio",
                groups[1][1] / groups[0][1] if groups[0][1] else 0.0,
            )
        )
    rows.append(
        ReportRow(
            cfg.experiment, cfg.algorithm, base_params, "mean_evals", 2.0 * float(taus.mean())
        )
    )
    rows.append(
        ReportRow(
            cfg.experiment,
            cfg.algorithm,
            base_params,
            "theory_evals",
            2.0 * cfg.nodes / total_weight,
        )
    )
    rows.append(
        ReportRow(
            cfg.experiment, cfg.algorithm, base_params, "mean_search_length", float(taus.mean())
        )
    )
    return rows


def run_weighted(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    if cfg.algorithm != "dxhash":
        raise ConfigError("weighted lookups only exist for dxhash")
    seeds = key_seeds(cfg.seed, cfg.keys)
    rows: list[ReportRow] = []
    if cfg.weights:
        rows.extend(_run_weighted_config(cfg, parse_weight_groups(cfg.weights, cfg.nodes), seeds))
        return rows
    half = cfg.nodes // 2
    if half < 1 or cfg.nodes - half < 1:
        raise ConfigError("--nodes too small to split into two groups")
    for frac in cfg.sweep or (0.1, 0.3, 0.5, 0.7, 0.9):
        if not 0.0 < frac <= 1.0:
            raise ConfigError(f"sweep weight {frac} outside (0, 1]")
        rows.extend(
            _run_weighted_config(cfg, [(half, 1.0), (cfg.nodes - half, frac)], seeds)
        )
    return rows


# -- replicas over a doubling ------------------------------------------------------


def run_ars(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    if cfg.algorithm != "dxhash":
        raise ConfigError("ars applies to dxhash only")
    sizes = cfg.sizes or (1024, 2048)
    vals = key_values(cfg.seed, cfg.keys)
    single_seeds = kernels.digest8_vec(vals)
    rows: list[ReportRow] = []
    for base in sizes:
        cluster = DxHash.all_working(base)
        spec = ReplicaSpec.for_cluster(base)
        before_single = cluster.lookup_many(single_seeds)[0]
        before_ranks = [r[0] for r in place_replicas_bulk(vals, cluster, spec)]
        cluster.scale_up()
        after_single = cluster.lookup_many(single_seeds)[0]
        rotated = rotate_on_scaleup(spec)
        after_ranks = [r[0] for r in place_replicas_bulk(vals, cluster, rotated)]
        # Data lineages: old rank 1 lands at new rank 3, old rank 2 at new
        # rank 1, old rank 3 at new rank 2.
        moved_demoted = before_ranks[0] != after_ranks[2]
        moved_promoted_1 = before_ranks[1] != after_ranks[0]
        moved_promoted_2 = before_ranks[2] != after_ranks[1]
        total_moved = (
            int(moved_demoted.sum()) + int(moved_promoted_1.sum()) + int(moved_promoted_2.sum())
        )
        params = {"base_size": base, "keys": cfg.keys}
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "remap_without_ars",
                float(np.mean(before_single != after_single)),
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "remap_with_ars",
                total_moved / (3 * cfg.keys),
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "promoted_moved_fraction",
                (int(moved_promoted_1.sum()) + int(moved_promoted_2.sum())) / (2 * cfg.keys),
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "demoted_stay_fraction",
                1.0 - float(moved_demoted.mean()),
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                cfg.algorithm,
                params,
                "keys_with_any_move_ratio",
                float(np.mean(moved_demoted | moved_promoted_1 | moved_promoted_2)),
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment, cfg.algorithm, params, "theory_bound", THEORY_DOUBLING_BOUND
            )
        )
    return rows


# -- memory -------------------------------------------------------------------------


def run_memory(cfg: ExperimentConfig) -> list[ReportRow]:
    cfg.validate()
    sizes = cfg.sizes or (1_000, 10_000, 100_000, 1_000_000)
    rows: list[ReportRow] = []
    for n in sizes:
        cluster = DxHash.all_working(n)
        params = {"nodes": n}
        rows.append(
            ReportRow(
                cfg.experiment, "dxhash", params, "bit_payload_bytes", len(cluster.packed_states())
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment, "dxhash", params, "byte_state_bytes", int(cluster.states_array().nbytes)
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment, "dxhash", params, "snapshot_bytes", len(cluster.to_snapshot())
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                "ring",
                {**params, "vnodes": cfg.vnodes, "bytes_per_vnode": 28},
                "analytic_bytes",
                28 * cfg.vnodes * n,
            )
        )
        rows.append(
            ReportRow(
                cfg.experiment,
                "maglev",
                {**params, "entries_per_node": 100, "bytes_per_entry": 4},
                "analytic_bytes",
                4 * 100 * n,
            )
        )
    return rows


RUNNERS = {
    "balance": run_balance,
    "disruption": run_disruption,
    "asl": run_asl,
    "throughput": run_throughput,
    "weighted": run_weighted,
    "ars": run_ars,
    "memory": run_memory,
}
