"""Component tree construction and maximally stable region extraction.

The tree indexes the connected components (4-connectivity) of every
sub-level set {p : I(p) <= t}, t = 0..255, of a gray image: one node per
distinct component, recorded at the lowest level where its pixel set
occurs.  Children nest strictly inside parents and carry strictly lower
levels.  Bright-on-dark structure is handled by building the same tree on
the inverted image.

Construction is union-find over pixels in ascending intensity order
followed by canonicalization of the pixel parent forest, the standard
quasi-linear realization.  The hot loops are numba-compiled.

Stable regions are nodes whose area grows slowly across an intensity
margin ``delta``: q(n) = (area(topmost ancestor within delta) - area(n))
/ area(n).  A node is reported when q is a local minimum among tree
neighbors within delta levels, q and area pass their bounds, and no
nested candidate of nearly equal area is more stable (diversity pruning).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .raster import invert, validate_gray_image
from .regionprops import POLARITY_DARK, POLARITY_LIGHT, Region

POLARITIES = (POLARITY_DARK, POLARITY_LIGHT)


@njit(cache=True)
def _union_build(flat, order, rank, width, height):
    """Union-find pass: pixel parent forest, edges pointing to later rank."""
    n = flat.size
    parent = np.full(n, -1, np.int64)
    zpar = np.arange(n)
    for k in range(n):
        idx = order[k]
        parent[idx] = idx
        x = idx % width
        y = idx // width
        for d in range(4):
            if d == 0:
                nb = idx - 1 if x > 0 else -1
            elif d == 1:
                nb = idx + 1 if x < width - 1 else -1
            elif d == 2:
                nb = idx - width if y > 0 else -1
            else:
                nb = idx + width if y < height - 1 else -1
            if nb >= 0 and rank[nb] < rank[idx]:
                r = nb
                while zpar[r] != r:  # find with path halving
                    zpar[r] = zpar[zpar[r]]
                    r = zpar[r]
                if r != idx:
                    parent[r] = idx
                    zpar[r] = idx
    return parent


@njit(cache=True)
def _canonize(flat, order, parent):
    """Point every pixel at the canonical pixel of its node (root first)."""
    for k in range(order.size - 1, -1, -1):
        p = order[k]
        q = parent[p]
        if flat[parent[q]] == flat[q]:
            parent[p] = parent[q]


@njit(cache=True)
def _stabilities(levels, areas, parents, delta):
    """q for every node: relative area growth up to the ancestor at <= level+delta."""
    k = levels.size
    q = np.zeros(k, np.float64)
    for i in range(k):
        limit = levels[i] + delta
        a = i
        while parents[a] != -1 and levels[parents[a]] <= limit:
            a = parents[a]
        q[i] = (areas[a] - areas[i]) / areas[i]
    return q


@dataclass(frozen=True)
class ComponentNode:
    level: int
    area: int
    parent: Optional[int]
    seed_pixel: tuple[int, int]


@dataclass
class MserParams:
    """Stability and size bounds for region extraction.

    ``max_area=None`` means a quarter of the image area, resolved per image.
    """

    delta: int = 5
    min_area: int = 10
    max_area: Optional[int] = None
    max_variation: float = 0.25
    min_diversity: float = 0.2

    def validate(self) -> None:
        if not 1 <= int(self.delta) <= 127:
            raise ValueError(f"delta must be in [1, 127], got {self.delta}")
        if self.min_area < 1:
            raise ValueError(f"min_area must be >= 1, got {self.min_area}")
        if self.max_area is not None and self.max_area < self.min_area:
            raise ValueError(
                f"max_area ({self.max_area}) must be >= min_area ({self.min_area})"
            )
        if self.max_variation < 0:
            raise ValueError(f"max_variation must be >= 0, got {self.max_variation}")
        if not 0.0 <= self.min_diversity <= 1.0:
            raise ValueError(f"min_diversity must be in [0, 1], got {self.min_diversity}")

    def resolve_max_area(self, image_area: int) -> int:
        return self.max_area if self.max_area is not None else image_area // 4


class ComponentTree:
    """Immutable hierarchy of extremal regions of one polarity.

    Nodes are indexed 0..len-1 in (level, seed pixel) order; the root is the
    unique node at the highest level and holds every pixel.
    """

    def __init__(self, levels, areas, parents, seeds, width, height,
                 pixel_assignment, polarity):
        self.levels = levels          # (K,) uint8 node levels
        self.areas = areas            # (K,) int64 full component areas
        self.parents = parents        # (K,) int64 parent ids, -1 at the root
        self.seeds = seeds            # (K,) int64 canonical pixel (flat index)
        self.width = width
        self.height = height
        self.pixel_assignment = pixel_assignment  # (h, w) int64 smallest node per pixel
        self.polarity = polarity
        self.root = int(np.flatnonzero(parents == -1)[0])
        self._children = None
        self._pixel_order = None
        self._pixel_starts = None

    def __len__(self) -> int:
        return int(self.levels.size)

    def node(self, node_id: int) -> ComponentNode:
        self._check_id(node_id)
        seed = int(self.seeds[node_id])
        parent = int(self.parents[node_id])
        return ComponentNode(
            level=int(self.levels[node_id]),
            area=int(self.areas[node_id]),
            parent=None if parent == -1 else parent,
            seed_pixel=(seed % self.width, seed // self.width),
        )

    def children(self, node_id: int) -> np.ndarray:
        self._check_id(node_id)
        if self._children is None:
            order = np.argsort(self.parents, kind="stable")
            bounds = np.searchsorted(self.parents[order], np.arange(len(self) + 1))
            self._children = [order[bounds[i]:bounds[i + 1]] for i in range(len(self))]
        return self._children[node_id]

    def node_pixels(self, node_id: int) -> tuple[np.ndarray, np.ndarray]:
        """Full pixel set of the node's component as (xs, ys) arrays."""
        self._check_id(node_id)
        if self._pixel_order is None:
            assign = self.pixel_assignment.ravel()
            self._pixel_order = np.argsort(assign, kind="stable")
            counts = np.bincount(assign, minlength=len(self))
            self._pixel_starts = np.concatenate([[0], np.cumsum(counts)])
        parts = []
        stack = [node_id]
        while stack:
            nid = stack.pop()
            parts.append(self._pixel_order[self._pixel_starts[nid]:self._pixel_starts[nid + 1]])
            stack.extend(int(c) for c in self.children(nid))
        flat = np.concatenate(parts)
        return flat % self.width, flat // self.width

    def stability(self, node_id: int, delta: int) -> float:
        """Relative area growth q up to the topmost ancestor within delta levels."""
        self._check_id(node_id)
        limit = int(self.levels[node_id]) + delta
        a = node_id
        while self.parents[a] != -1 and self.levels[self.parents[a]] <= limit:
            a = int(self.parents[a])
        return float((self.areas[a] - self.areas[node_id]) / self.areas[node_id])

    def _check_id(self, node_id: int) -> None:
        if not 0 <= node_id < len(self):
            raise IndexError(f"node {node_id} not in tree of {len(self)} nodes")


def build_tree(img: np.ndarray, polarity: str = POLARITY_DARK) -> ComponentTree:
    """Build the component tree of the sub-level sets of ``img``.

    ``light_on_dark`` builds on the inverted image, so node levels refer to
    inverted intensities for that polarity.
    """
    img = validate_gray_image(img)
    if polarity not in POLARITIES:
        raise ValueError(f"polarity must be one of {POLARITIES}, got {polarity!r}")
    work = invert(img) if polarity == POLARITY_LIGHT else img

    height, width = work.shape
    n = height * width
    flat = work.ravel()
    order = np.argsort(flat, kind="stable").astype(np.int64)
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)

    parent = _union_build(flat, order, rank, width, height)
    _canonize(flat, order, parent)

    pixel_ids = np.arange(n)
    canonical = (parent == pixel_ids) | (flat[parent] != flat)
    canon_pixels = np.flatnonzero(canonical)
    node_order = np.lexsort((canon_pixels, flat[canon_pixels]))
    seeds = canon_pixels[node_order].astype(np.int64)
    k = seeds.size

    lut = np.full(n, -1, dtype=np.int64)
    lut[seeds] = np.arange(k)
    # Canonical representative of every pixel's node; for canonical pixels the
    # pixel itself, otherwise the (already canonical) parent pointer.
    rep = np.where(canonical, pixel_ids, parent)
    assign = lut[rep]

    levels = flat[seeds].copy()
    parent_rep = rep[parent[seeds]]
    parents = lut[parent_rep]
    parents[parent[seeds] == seeds] = -1  # the root points at itself

    areas = np.bincount(assign, minlength=k).astype(np.int64)
    level_order = np.argsort(levels, kind="stable")
    # Accumulate child areas level by level; parents sit at strictly higher
    # levels so each node is complete before it is added to its parent.
    bounds = np.searchsorted(levels[level_order], np.arange(257))
    for lev in range(256):
        ids = level_order[bounds[lev]:bounds[lev + 1]]
        ids = ids[parents[ids] != -1]
        if ids.size:
            np.add.at(areas, parents[ids], areas[ids])

    return ComponentTree(
        levels=levels,
        areas=areas,
        parents=parents,
        seeds=seeds,
        width=width,
        height=height,
        pixel_assignment=assign.reshape(height, width),
        polarity=polarity,
    )


def stability(tree: ComponentTree, node_id: int, delta: int) -> float:
    return tree.stability(node_id, delta)


def _local_minimum_mask(tree: ComponentTree, q: np.ndarray, delta: int) -> np.ndarray:
    """Nodes whose q is <= that of every tree neighbor within delta levels."""
    k = len(tree)
    levels = tree.levels.astype(np.int64)
    parents = tree.parents
    result = np.ones(k, dtype=bool)
    for i in range(k):
        qi = q[i]
        # Ancestors up to level + delta.
        a = i
        while parents[a] != -1 and levels[parents[a]] <= levels[i] + delta:
            a = int(parents[a])
            if q[a] < qi:
                result[i] = False
                break
        if not result[i]:
            continue
        # Descendants down to level - delta.
        stack = [int(c) for c in tree.children(i)]
        while stack:
            d = stack.pop()
            if levels[d] < levels[i] - delta:
                continue
            if q[d] < qi:
                result[i] = False
                break
            stack.extend(int(c) for c in tree.children(d))
    return result


def _diversity_suppression(tree: ComponentTree, q: np.ndarray,
                           candidates: np.ndarray, min_diversity: float) -> np.ndarray:
    """Suppress the less stable of nested candidates with nearly equal area.

    For every candidate pair (ancestor a, descendant c) whose relative area
    gap 1 - area(c)/area(a) is below ``min_diversity``, the node with the
    larger q is suppressed; ties keep the ancestor.
    """
    suppressed = np.zeros(len(tree), dtype=bool)
    areas = tree.areas
    parents = tree.parents
    for c in np.flatnonzero(candidates):
        a = int(parents[c])
        while a != -1:
            gap = 1.0 - areas[c] / areas[a]
            if gap >= min_diversity:
                break  # gaps only grow with ancestor area
            if candidates[a]:
                if q[a] <= q[c]:
                    suppressed[c] = True
                else:
                    suppressed[a] = True
            a = int(parents[a])
    return suppressed


def extract_msers(tree: ComponentTree, params: MserParams) -> list[Region]:
    """Maximally stable nodes of the tree as regions, in (level, seed) order."""
    params.validate()
    k = len(tree)
    if k <= 1:
        return []
    max_area = params.resolve_max_area(tree.width * tree.height)

    q = _stabilities(tree.levels.astype(np.int64), tree.areas, tree.parents,
                     int(params.delta))
    candidates = _local_minimum_mask(tree, q, int(params.delta))
    candidates &= q <= params.max_variation
    candidates &= (tree.areas >= params.min_area) & (tree.areas <= max_area)
    candidates[tree.root] = False  # a full-frame region is never text

    candidates &= ~_diversity_suppression(tree, q, candidates, params.min_diversity)

    regions = []
    for nid in np.flatnonzero(candidates):  # node ids are already (level, seed) sorted
        xs, ys = tree.node_pixels(int(nid))
        regions.append(Region(xs, ys, polarity=tree.polarity,
                              source_level=int(tree.levels[nid])))
    return regions


def detect_regions(img: np.ndarray, params: MserParams,
                   polarities=POLARITIES) -> list[Region]:
    """Stable regions of both polarities, dark pass first."""
    img = validate_gray_image(img)
    regions = []
    for polarity in polarities:
        tree = build_tree(img, polarity)
        regions.extend(extract_msers(tree, params))
    return regions
