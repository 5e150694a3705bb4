"""Configuration management for the puzzle engine."""
import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Engine configuration from environment variables."""

    # Interrogation
    PUZZLE_SEED = int(os.getenv('PUZZLE_SEED', '0'))
    PUZZLE_VARIANT = os.getenv('PUZZLE_VARIANT', 'boolos')  # boolos (coin) | rabern (uniform word)
    MAX_QUESTIONS = int(os.getenv('MAX_QUESTIONS', '3'))  # "by asking three yes-no questions"

    # Strategy files
    MAX_STRATEGY_DEPTH = int(os.getenv('MAX_STRATEGY_DEPTH', '3'))

    # Search
    SEARCH_MAX_STATES = int(os.getenv('SEARCH_MAX_STATES', '200000'))  # memo table cap
    PROPERTY_SAMPLES = int(os.getenv('PROPERTY_SAMPLES', '1000'))

    # Database Configuration
    DATABASE_URL = os.getenv('DATABASE_URL', 'sqlite+aiosqlite:///godpuzzle.db')
    PERSIST_RESULTS = os.getenv('PERSIST_RESULTS', 'true').lower() in ('1', 'true', 'yes')

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', '')

    @classmethod
    def validate(cls):
        """Validate configuration values."""
        if cls.PUZZLE_VARIANT not in ('boolos', 'rabern'):
            raise ValueError("PUZZLE_VARIANT must be 'boolos' or 'rabern'")
        if not 0 <= cls.PUZZLE_SEED < 2 ** 64:
            raise ValueError("PUZZLE_SEED must be an unsigned 64-bit integer")
        if cls.MAX_QUESTIONS < 0:
            raise ValueError("MAX_QUESTIONS must be nonnegative")
        if cls.MAX_STRATEGY_DEPTH < 0:
            raise ValueError("MAX_STRATEGY_DEPTH must be nonnegative")
        if cls.SEARCH_MAX_STATES < 1:
            raise ValueError("SEARCH_MAX_STATES must be positive")
        if cls.PROPERTY_SAMPLES < 1:
            raise ValueError("PROPERTY_SAMPLES must be positive")


# Validate configuration on import
Config.validate()
