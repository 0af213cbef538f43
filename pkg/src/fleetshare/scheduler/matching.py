"""Perfect matching on the support graph of a square matrix."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt


class SupportMatcher:
    """Kuhn's augmenting-path matcher for the positive entries of a matrix.

    Rows are matched in index order and each row tries its admissible
    columns lowest index first, so the matching is deterministic.

    Attributes
    ----------
    adjacency : list[list[int]]
        Admissible columns per row.
    match_of_column : list[int]
        Row matched to each column, or -1.
    """

    def __init__(self, matrix: npt.NDArray[np.float64], threshold: float) -> None:
        """Initialize from the entries of ``matrix`` above ``threshold``.

        Parameters
        ----------
        matrix : npt.NDArray[np.float64]
            Square residual matrix.
        threshold : float
            Entries at or below this value are treated as zero.
        """
        size = matrix.shape[0]
        self.adjacency: list[list[int]] = [
            [int(c) for c in np.flatnonzero(matrix[row] > threshold)] for row in range(size)
        ]
        self.match_of_column: list[int] = [-1] * size

    def _augment(self, row: int, visited: list[bool]) -> bool:
        # iterative DFS over alternating paths
        stack: list[tuple[int, int]] = [(row, 0)]
        path: list[tuple[int, int]] = []
        while stack:
            current, position = stack.pop()
            columns = self.adjacency[current]
            while position < len(columns) and visited[columns[position]]:
                position += 1
            if position == len(columns):
                if path:
                    path.pop()
                continue
            column = columns[position]
            visited[column] = True
            stack.append((current, position + 1))
            path.append((current, column))
            owner = self.match_of_column[column]
            if owner == -1:
                for matched_row, matched_column in path:
                    self.match_of_column[matched_column] = matched_row
                return True
            stack.append((owner, 0))
        return False

    def perfect_matching(self) -> tuple[int, ...] | None:
        """Return the column matched to each row, or None if none is perfect.

        Returns
        -------
        tuple[int, ...] | None
            ``result[row] = column`` for a perfect matching.
        """
        size = len(self.adjacency)
        for row in range(size):
            if not self._augment(row, [False] * size):
                return None
        result = [-1] * size
        for column, row in enumerate(self.match_of_column):
            result[row] = column
        return tuple(result)
