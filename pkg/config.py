import os
from typing import Optional, Tuple

from dotenv import load_dotenv

load_dotenv()


class Config:
    # Logging Configuration
    LOG_LEVEL = os.getenv('MRTA_LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_FILE = os.getenv('MRTA_LOG_FILE', 'mission_planner.log')

    # Objective Configuration (w1: makespan, w2: average finish, w3: average distance)
    DEFAULT_WEIGHTS: Tuple[float, float, float] = (1.0, 0.2, 0.1)

    # Local Search Configuration
    DEFAULT_MAX_SWEEPS: Optional[int] = None  # unlimited
    DEFAULT_MIN_IMPROVEMENT = 0.0

    # Exact Solver Configuration
    ORACLE_MAX_TASKS = int(os.getenv('MRTA_ORACLE_MAX_TASKS', '7'))

    # File Format Configuration
    FORMAT_VERSION = 1
    REL_TOLERANCE = 1e-9

    # Benchmark Configuration
    DEFAULT_SEED = 0
    DEFAULT_BENCHMARK_COUNT = 100
    N_JOBS = int(os.getenv('MRTA_N_JOBS', '-1'))

    @property
    def log_file(self) -> Optional[str]:
        return self.LOG_FILE or None


# Global config instance
config = Config()
