"""
Utility helper functions.

Common helpers used across the service packages for grouping,
canonical ordering, and report formatting.
"""

from typing import Dict, Generic, Hashable, Iterable, List, TypeVar

Key = TypeVar("Key", bound=Hashable)


class DisjointSet(Generic[Key]):
    """Union-find over hashable keys with path halving."""

    def __init__(self, keys: Iterable[Key] = ()):
        self._parent: Dict[Key, Key] = {}
        for key in keys:
            self.add(key)

    def add(self, key: Key) -> None:
        if key not in self._parent:
            self._parent[key] = key

    def find(self, key: Key) -> Key:
        self.add(key)
        parent = self._parent
        while parent[key] != key:
            parent[key] = parent[parent[key]]
            key = parent[key]
        return key

    def union(self, a: Key, b: Key) -> bool:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        # the smaller root wins so class representatives are lexicographic minima
        if root_b < root_a:  # type: ignore[operator]
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a
        return True

    def keys(self) -> List[Key]:
        return list(self._parent)

    def classes(self) -> List[List[Key]]:
        """Classes sorted internally and ordered by their minimum element."""
        groups: Dict[Key, List[Key]] = {}
        for key in self._parent:
            groups.setdefault(self.find(key), []).append(key)
        result = [sorted(members) for members in groups.values()]  # type: ignore[type-var]
        result.sort(key=lambda members: members[0])
        return result

    def index_map(self) -> Dict[Key, int]:
        """Map every key to the position of its class in classes()."""
        mapping: Dict[Key, int] = {}
        for index, members in enumerate(self.classes()):
            for key in members:
                mapping[key] = index
        return mapping


def format_vector(values: Iterable[int]) -> str:
    """Comma-separated integer rendering used in reports."""
    return ",".join(str(int(v)) for v in values)
