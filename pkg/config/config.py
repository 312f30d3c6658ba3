import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

class Config:
    """Configuration class for the even-cycle toolkit"""

    # Logging Configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', 'logs/even_cycles.log')

    # Results ledger
    DATABASE_PATH = os.getenv('DATABASE_PATH', 'data/results.db')

    # Exhaustive search limits
    EXHAUSTIVE_CAP = int(os.getenv('EXHAUSTIVE_CAP', '20'))
    EXHAUSTIVE_STEP_BUDGET = int(os.getenv('EXHAUSTIVE_STEP_BUDGET', '2000000'))
    ORACLE_CAP = int(os.getenv('ORACLE_CAP', '40'))

    # Constructive well-placed search: budget = factor * |V(T)| * 2D
    CONSTRUCTIVE_BUDGET_FACTOR = int(os.getenv('CONSTRUCTIVE_BUDGET_FACTOR', '10'))

    # ex(n, C_2k) brute force
    EX_MAX_N_K2 = int(os.getenv('EX_MAX_N_K2', '9'))
    EX_MAX_N = int(os.getenv('EX_MAX_N', '8'))
    EX_STATE_BUDGET = int(os.getenv('EX_STATE_BUDGET', '200000'))
    DEFAULT_THREADS = int(os.getenv('DEFAULT_THREADS', '1'))

    # Pipeline
    PIPELINE_MAX_ROOTS = int(os.getenv('PIPELINE_MAX_ROOTS', '8'))
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '0'))

    @classmethod
    def validate_config(cls):
        """Validate configuration values"""
        positive = [
            'EXHAUSTIVE_CAP', 'EXHAUSTIVE_STEP_BUDGET', 'ORACLE_CAP',
            'CONSTRUCTIVE_BUDGET_FACTOR', 'EX_MAX_N_K2', 'EX_MAX_N',
            'EX_STATE_BUDGET', 'DEFAULT_THREADS', 'PIPELINE_MAX_ROOTS',
        ]
        for key in positive:
            if getattr(cls, key) < 1:
                raise ValueError(f"{key} must be at least 1")
        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f"LOG_LEVEL {cls.LOG_LEVEL!r} is not a logging level")
        return True
