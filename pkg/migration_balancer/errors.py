from typing import Optional


class BalancerError(Exception):
    pass


class InputError(BalancerError, ValueError):
    """Invalid user input: unknown ids, dimension mismatches, bad ranges."""


class ScenarioParseError(InputError):

    def __init__(self, lineno: int, message: str) -> None:
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class ScenarioValidationError(InputError):

    def __init__(self, message: str, ident: Optional[str] = None) -> None:
        self.ident = ident
        super().__init__(message)


class ConfigurationError(BalancerError, ValueError):
    pass


class InstanceTooLargeError(InputError):
    pass


class NoTargetNodeError(BalancerError):
    """There is no node other than the agent's current one to migrate to."""
