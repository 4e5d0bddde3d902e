"""Shared helpers for the numerical pipeline."""

import logging
import time
from functools import wraps


def log_elapsed_time(func):
    """Decorator that logs the wall-clock duration of the decorated callable."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - start_time
        logging.info("%s completed in %.3f seconds.", func.__qualname__, elapsed)
        return result

    return wrapper
