from .attack import AttackResult, attack
from .execute import Execution, InsufficientKeyMaterial, execute
from .harness import OracleReport, oracle_check, random_protocol
from .streams import key_stream

__all__ = [
    "AttackResult",
    "Execution",
    "InsufficientKeyMaterial",
    "OracleReport",
    "attack",
    "execute",
    "key_stream",
    "oracle_check",
    "random_protocol",
]
