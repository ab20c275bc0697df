"""Path search and the bottom-up survival fixpoint shared by the analyses."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .model import LAYERS_BOTTOM_UP, LayerId, LayeredModel, Link, link_key


def shortest_path(neighbors: Callable[[str], Iterable[str]], src: str, dst: str) -> Optional[tuple]:
    """Minimum-hop path, ties broken by the lexicographically smallest vertex
    sequence.

    BFS from ``dst`` gives distances; walking from ``src`` and always taking
    the smallest neighbour one step closer yields the smallest sequence.
    ``neighbors`` must already hide unusable vertices and edges.
    """
    if src == dst:
        return (src,)
    dist = {dst: 0}
    queue = deque([dst])
    while queue and src not in dist:
        cur = queue.popleft()
        for nxt in neighbors(cur):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    if src not in dist:
        return None
    path = [src]
    cur = src
    while cur != dst:
        want = dist[cur] - 1
        cur = min(n for n in neighbors(cur) if dist.get(n) == want)
        path.append(cur)
    return tuple(path)


def edges_of(path: tuple) -> list:
    return list(zip(path, path[1:]))


@dataclass(frozen=True)
class Survival:
    """Failed components and link keys after removing some elements.

    Computed bottom-up, which is the least fixed point because every rule
    only looks at the layer below:

    * a removed element fails;
    * a link fails if an endpoint fails;
    * a component above layer 1 fails when all of its images fail;
    * a link above layer 1 fails when no surviving image of one endpoint is
      connected to a surviving image of the other through surviving links.
    """

    failed_components: frozenset
    failed_links: frozenset

    def component_alive(self, ident: str) -> bool:
        return ident not in self.failed_components

    def link_alive(self, key) -> bool:
        return key not in self.failed_links


def survival(model: LayeredModel, removed_components=frozenset(), removed_links=frozenset()) -> Survival:
    failed_c, failed_l = set(removed_components), set(removed_links)
    labels = {}  # connected-component label per surviving vertex, previous layer
    for layer in LAYERS_BOTTOM_UP:
        for ident in model.components_on(layer):
            if ident in failed_c or layer == LayerId.PHYSICAL:
                continue
            images = model.adjacent_images(ident)
            if images and all(i in failed_c for i in images):
                failed_c.add(ident)
        for link in model.links_on(layer):
            if link.key in failed_l:
                continue
            if link.a in failed_c or link.b in failed_c:
                failed_l.add(link.key)
            elif layer > LayerId.PHYSICAL and not _realizable(model, link, labels):
                failed_l.add(link.key)
        labels = _component_labels(model, layer, failed_c, failed_l)
    return Survival(frozenset(failed_c), frozenset(failed_l))


def _realizable(model: LayeredModel, link: Link, labels: dict) -> bool:
    left = {labels[i] for i in model.adjacent_images(link.a) if i in labels}
    return any(labels.get(i) in left for i in model.adjacent_images(link.b))


def _component_labels(model, layer, failed_c, failed_l) -> dict:
    labels = {}
    for start in model.components_on(layer):
        if start in failed_c or start in labels:
            continue
        labels[start] = start
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in model.neighbors(cur):
                if nxt in labels or nxt in failed_c:
                    continue
                if link_key(layer, cur, nxt) in failed_l:
                    continue
                labels[nxt] = start
                stack.append(nxt)
    return labels


def baseline(model: LayeredModel) -> Survival:
    """Survival with nothing removed: exactly the realizable structure."""
    memo = model.memo
    if "baseline" not in memo:
        memo["baseline"] = survival(model)
    return memo["baseline"]


def alive_neighbors(model: LayeredModel, state: Survival, layer: LayerId):
    def neighbors(v):
        return [n for n in model.neighbors(v)
                if state.component_alive(n) and state.link_alive(link_key(layer, v, n))]
    return neighbors
