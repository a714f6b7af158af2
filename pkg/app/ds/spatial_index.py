"""
Planar K-D Tree over Complex Points

Median-split 2-D tree alternating between the real and imaginary axes,
with pruned range search. Used to find near-coincident images when
scanning sampled maps for collisions, and to shortlist segment pairs in
the polygon self-intersection test.

Points are stored once in a numpy array; nodes hold indices into it.
"""

from typing import List, Optional, Set, Tuple

import numpy as np


class KDTreeNode:
    """
    Node in a planar K-D Tree.

    Attributes:
        index: Position of the stored point in the tree's point array
        axis: The splitting axis (0 for real part, 1 for imaginary part)
        left: Left child (smaller axis value)
        right: Right child (larger axis value)
    """

    __slots__ = ("index", "axis", "left", "right")

    def __init__(self, index: int, axis: int):
        self.index = index
        self.axis = axis
        self.left: Optional["KDTreeNode"] = None
        self.right: Optional["KDTreeNode"] = None

    def __repr__(self) -> str:
        return f"KDTreeNode(index={self.index}, axis={'re' if self.axis == 0 else 'im'})"


class PlanarKDTree:
    """
    K-D Tree for complex sample points.

    Time Complexity:
    - build: O(n log^2 n) (argsort at every level)
    - search_nearby: O(sqrt(n) + k) average case with pruning
    """

    def __init__(self):
        self.root: Optional[KDTreeNode] = None
        self.points = np.empty(0, dtype=np.complex128)
        self._values: List[complex] = []
        self.size = 0

    def build(self, points) -> "PlanarKDTree":
        """Build a balanced tree from a 1-D array of complex points."""
        self.points = np.asarray(points, dtype=np.complex128).ravel()
        self.size = self.points.size
        self._values = self.points.tolist()
        coords = np.stack([self.points.real, self.points.imag], axis=1)
        self.root = self._build_recursive(coords, np.arange(self.size), depth=0)
        return self

    def _build_recursive(
        self, coords: np.ndarray, indices: np.ndarray, depth: int
    ) -> Optional[KDTreeNode]:
        if indices.size == 0:
            return None

        axis = depth % 2
        # stable sort keeps ties in input order, so the tree is deterministic
        order = indices[np.argsort(coords[indices, axis], kind="stable")]
        median = order.size // 2

        node = KDTreeNode(int(order[median]), axis)
        node.left = self._build_recursive(coords, order[:median], depth + 1)
        node.right = self._build_recursive(coords, order[median + 1:], depth + 1)
        return node

    def search_nearby(self, center: complex, radius: float) -> List[int]:
        """
        Indices of all points within `radius` of `center` (closed disk).

        Subtrees whose split line lies farther than `radius` from the
        center are skipped.
        """
        results: List[int] = []
        if self.root is None:
            return results
        self._search_recursive(self.root, complex(center), radius, results)
        return sorted(results)

    def _search_recursive(
        self,
        node: Optional[KDTreeNode],
        center: complex,
        radius: float,
        results: List[int],
    ) -> None:
        if node is None:
            return

        point = self._values[node.index]
        if abs(point - center) <= radius:
            results.append(node.index)

        if node.axis == 0:
            center_value, node_value = center.real, point.real
        else:
            center_value, node_value = center.imag, point.imag
        split_distance = abs(center_value - node_value)

        if center_value < node_value:
            self._search_recursive(node.left, center, radius, results)
            if split_distance <= radius:
                self._search_recursive(node.right, center, radius, results)
        else:
            self._search_recursive(node.right, center, radius, results)
            if split_distance <= radius:
                self._search_recursive(node.left, center, radius, results)

    def close_pairs(self, radius: float) -> List[Tuple[int, int]]:
        """All index pairs (i, j), i < j, whose points lie within `radius`."""
        pairs: Set[Tuple[int, int]] = set()
        for i in range(self.size):
            for j in self.search_nearby(self._values[i], radius):
                if j > i:
                    pairs.add((i, j))
        return sorted(pairs)

    def find_nearest(self, point: complex) -> Optional[int]:
        """Index of the nearest stored point (brute force on the array)."""
        if self.size == 0:
            return None
        return int(np.argmin(np.abs(self.points - point)))

    def get_tree_height(self) -> int:
        def height(node: Optional[KDTreeNode]) -> int:
            if node is None:
                return 0
            return 1 + max(height(node.left), height(node.right))

        return height(self.root)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"PlanarKDTree(size={self.size}, height={self.get_tree_height()})"
