"""Branch-level parallel driver.

The coordinator searches the top ``spawn_depth`` levels itself and collects
every state that would enter the next level.  Those states are independent
subtrees; a process pool searches them with dynamic (one task at a time)
scheduling so idle workers keep pulling from the shared queue.  On the first
counterexample the pool is terminated unless every certificate is wanted.
"""

from __future__ import annotations

import dataclasses
import multiprocessing as mp
import time

from .explorer import (
    CertificateGraph,
    EventSink,
    SearchConfig,
    SearchOutcome,
    SearchStats,
    _combine,
    _explore_python,
    _use_native,
)
from .graph import Graph


def _split(g: Graph, config: SearchConfig, split_depth: int, depth_offset: int = 0):
    """Search ``g`` down to ``split_depth``; return (found, budget_hit, stats, certs, frontier)."""
    if _use_native(config):
        from . import _kernel

        res = _kernel.run_kernel(g, config, split_depth=split_depth, depth_offset=depth_offset)
        stats = SearchStats(*res["stats"])
        certs = [CertificateGraph.from_graph(c) for c in res["certificates"]]
        return res["found"], res["budget_hit"], stats, certs, res["frontier"]
    outcome, frontier = _explore_python(g, config, split_depth=split_depth, depth_offset=depth_offset)
    found = outcome.kind.value == "COUNTEREXAMPLE"
    return found, outcome.stats.budget_hits > 0, outcome.stats, outcome.certificates, frontier


def _work(task: tuple[Graph, SearchConfig, int]):
    g, config, depth_offset = task
    found, budget_hit, stats, certs, _ = _split(g, config, 0, depth_offset)
    return found, budget_hit, stats, certs


def explore_parallel(g: Graph, config: SearchConfig, sink: EventSink | None = None) -> SearchOutcome:
    started = time.perf_counter()
    serial = dataclasses.replace(config, threads=1)
    split_depth = max(1, config.spawn_depth) + 1
    found, budget_hit, stats, certs, frontier = _split(g, serial, split_depth)
    if sink:
        sink({"event": "spawn", "tasks": len(frontier), "depth": split_depth})
    if frontier and not (found and not config.collect_all):
        tasks = [(child, serial, split_depth - 1) for child in frontier]
        pool = mp.get_context("fork").Pool(config.threads)
        try:
            for done, (f, b, s, c) in enumerate(pool.imap_unordered(_work, tasks, chunksize=1), 1):
                stats.merge(s)
                certs.extend(c)
                budget_hit |= b
                found |= f
                if sink:
                    sink({"event": "task", "done": done, "tasks": len(tasks), "nodes": s.nodes})
                if found and not config.collect_all:
                    break
        finally:
            pool.terminate()
            pool.join()
    stats.wall_time = time.perf_counter() - started
    return SearchOutcome(_combine(found, budget_hit), certs, stats)
