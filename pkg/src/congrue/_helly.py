from __future__ import annotations

from typing import Callable, Sequence


def empty_pairwise_family(
    groups: Sequence[Sequence[int]],
    full: int,
    compatible: Callable[[tuple[int, int], tuple[int, int]], bool],
) -> list[tuple[int, int]] | None:
    """Search for a family with empty intersection whose members are pairwise compatible.

    ``groups[g]`` lists candidate sets (as bitmasks over a universe ``full``);
    a family takes at most one set per group.  Members are ``(g, mask)``.
    Only families where every member strictly shrinks the running
    intersection are explored: an inclusion-minimal counterexample always
    has that shape, which bounds the depth by the universe size.
    """

    chosen: list[tuple[int, int]] = []

    def dfs(start: int, current: int) -> bool:
        for g in range(start, len(groups)):
            for mask in groups[g]:
                new = current & mask
                if new == current:
                    continue
                item = (g, mask)
                if not all(compatible(c, item) for c in chosen):
                    continue
                chosen.append(item)
                if new == 0 or dfs(g + 1, new):
                    return True
                chosen.pop()
        return False

    return list(chosen) if dfs(0, full) else None
