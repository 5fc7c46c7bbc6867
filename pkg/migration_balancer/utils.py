import logging
import time
from typing import List, Optional, Sequence, Tuple

__log__ = logging.getLogger('migration_balancer')
__log__.addHandler(logging.NullHandler())


ResourceVector = Tuple[int, ...]


class Deadline:
    """Wall-clock budget measured with :func:`time.monotonic`.

    A ``None`` timeout never expires.
    """

    def __init__(self, timeout: Optional[float]) -> None:
        self.timeout = timeout
        self.started = time.monotonic()

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    @property
    def expired(self) -> bool:
        if self.timeout is None:
            return False
        return self.elapsed >= self.timeout


def format_vector(values: Sequence[int], names: Sequence[str]) -> str:
    return ', '.join(f'{name}: {value:+d}' for name, value in zip(names, values))


def split_csv(value: str) -> List[str]:
    return [part.strip() for part in value.split(',') if part.strip()]
