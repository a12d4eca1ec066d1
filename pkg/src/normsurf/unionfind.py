"""Union-find structures used for skeleton and surface bookkeeping."""

from __future__ import annotations


class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def classes(self) -> list[list[int]]:
        """Return the classes, each sorted, ordered by their smallest member."""
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(groups.values(), key=lambda g: g[0])


class ParityUnionFind:
    """Union-find that also tracks a Z/2 label relative to the root.

    ``union(a, b, p)`` records label(a) + label(b) = p (mod 2).  A union that
    contradicts an earlier relation returns False and sets ``consistent``.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n
        self.size = [1] * n
        self.consistent = True

    def find(self, x: int) -> tuple[int, int]:
        # iterative find with full path compression
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root, (self.parity[path[0]] if path else 0)

    def label(self, x: int) -> int:
        return self.find(x)[1]

    def union(self, a: int, b: int, p: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if (pa ^ pb) != p:
                self.consistent = False
                return False
            return True
        if self.size[ra] < self.size[rb]:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ p
        self.size[ra] += self.size[rb]
        return True
