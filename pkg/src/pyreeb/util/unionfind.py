"""Система непересекающихся множеств (union-find) над произвольными хешируемыми ключами."""

from collections.abc import Hashable, Iterable


class UnionFind[K: Hashable]:
    """Система непересекающихся множеств со сжатием путей и объединением по рангу.

    Элементы добавляются явно через `add` или неявно при первом обращении.
    """

    def __init__(self, elements: Iterable[K] = ()):
        self.parent: dict[K, K] = {}
        self.rank: dict[K, int] = {}
        for element in elements:
            self.add(element)

    def add(self, element: K) -> None:
        """Добавляет одноэлементное множество (повторное добавление ничего не меняет)."""
        if element not in self.parent:
            self.parent[element] = element
            self.rank[element] = 0

    def __contains__(self, element: object) -> bool:
        return element in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, element: K) -> K:
        """Возвращает представителя множества, содержащего элемент."""
        self.add(element)
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        # сжатие путей
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, first: K, second: K) -> bool:
        """Объединяет множества двух элементов.

        :returns: False, если элементы уже были в одном множестве
        """
        rep_first = self.find(first)
        rep_second = self.find(second)
        if rep_first == rep_second:
            return False
        if self.rank[rep_first] < self.rank[rep_second]:
            rep_first, rep_second = rep_second, rep_first
        self.parent[rep_second] = rep_first
        if self.rank[rep_first] == self.rank[rep_second]:
            self.rank[rep_first] += 1
        return True

    def same(self, first: K, second: K) -> bool:
        """Проверяет, лежат ли элементы в одном множестве."""
        return self.find(first) == self.find(second)

    def groups(self) -> list[list[K]]:
        """Возвращает множества в порядке первого появления их элементов."""
        by_root: dict[K, list[K]] = {}
        for element in self.parent:
            by_root.setdefault(self.find(element), []).append(element)
        return list(by_root.values())
