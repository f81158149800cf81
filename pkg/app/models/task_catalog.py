import math
from typing import Dict, FrozenSet, List, Tuple

INF = math.inf

# Alliances of the three-robot benchmark fleet, in declaration order (ids 1..6)
BENCHMARK_ALLIANCES: List[FrozenSet[int]] = [
    frozenset({1}),
    frozenset({2}),
    frozenset({3}),
    frozenset({1, 2}),
    frozenset({1, 3}),
    frozenset({2, 3}),
]

# Task duration (s) per task type and alliance, row order = BENCHMARK_ALLIANCES
TASK_DURATIONS: Dict[str, Tuple[float, ...]] = {
    'A': (100.0, 100.0, 100.0, INF, INF, INF),
    'B': (INF, INF, INF, 110.0, 100.0, INF),
    'C': (INF, INF, INF, INF, 100.0, INF),
    'D': (INF, INF, 200.0, INF, INF, 100.0),
}

TASK_TYPES = ('A', 'B', 'C', 'D')

# Robot speeds in m/s, robots 1..3
ROBOT_SPEEDS: Tuple[float, ...] = (2.0, 2.0, 1.0)
ROBOT_START = (0.0, 0.0)

# Task placement around a circle of radius L0 with a random offset of length L1 <= 10
CIRCLE_RADIUS = 50.0  # L0
MAX_OFFSET = 10.0     # upper bound of L1
FULL_TURN = 2.0 * math.pi

PROBLEM_CLASS_CODES = ['3A1BCD', '3A2BCD', '3A3BCD', '6A1BCD', '6A2BCD', '6A3BCD']

# Generator algorithm; any change breaks reproducibility of recorded seeds
RNG_ALGORITHM = 'PCG64'
